// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef SIMSWIPT_TYPES_HPP
#define SIMSWIPT_TYPES_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace simswipt
{
    template <typename Real>
    using CMatrixT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

    template <typename Real>
    using CVectorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

    template <typename Real>
    using Point3T = Eigen::Matrix<Real, 3, 1>;

    using CMatrix = CMatrixT<double>;
    using CVector = CVectorT<double>;
    using Point3 = Point3T<double>;
    using Eigen::Index;
    using Eigen::MatrixXd;
    using Eigen::VectorXd;

    template <typename Real>
    inline constexpr Real pi_v = std::numbers::pi_v<Real>;

    // Raised for coincident or otherwise unusable positions.
    class GeometryError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Raised when matrix/tensor shapes disagree.
    class DimensionError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Raised for invalid or unknown configuration keys; carries the key name.
    class ConfigError : public std::runtime_error
    {
    public:
        ConfigError(std::string key, const std::string &what)
            : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
        const std::string &key() const noexcept { return key_; }

    private:
        std::string key_;
    };

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
}

#endif // SIMSWIPT_TYPES_HPP
