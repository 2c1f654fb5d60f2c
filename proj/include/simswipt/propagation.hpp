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


#ifndef SIMSWIPT_PROPAGATION_HPP
#define SIMSWIPT_PROPAGATION_HPP

#include "simswipt/geometry.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace simswipt
{
    // Rayleigh-Sommerfeld coefficient between two points a distance d apart:
    //   (lambda^2 cos(chi) / 4d) (1 / (2 pi d) - j / lambda) exp(j 2 pi d / lambda)
    template <typename Real>
    std::complex<Real> rs_coefficient(Real cos_angle, Real distance, Real wavelength)
    {
        if (!(distance > 0))
            throw std::invalid_argument("rs_coefficient: distance must be positive");
        if (!(wavelength > 0))
            throw std::invalid_argument("rs_coefficient: wavelength must be positive");
        const Real two_pi = 2 * pi_v<Real>;
        const Real amplitude = wavelength * wavelength * cos_angle / (4 * distance);
        const std::complex<Real> near_far(1 / (two_pi * distance), -1 / wavelength);
        return amplitude * near_far * std::polar(Real(1), two_pi * distance / wavelength);
    }

    // S x S inter-layer matrix; entry (s, s_breve) couples element s_breve of
    // layer l-1 to element s of layer l. Identical for every l >= 2.
    template <typename Real>
    CMatrixT<Real> build_layer_matrix(const SimGeometry<Real> &geom)
    {
        geom.validate();
        const int S = geom.elements;
        CMatrixT<Real> H(S, S);
        for (int s = 1; s <= S; ++s)
            for (int sb = 1; sb <= S; ++sb)
            {
                const Real d = inter_element_distance(s, sb, geom);
                H(s - 1, sb - 1) = rs_coefficient(geom.layer_spacing / d, d, geom.wavelength);
            }
        return H;
    }

    // S x N matrix from the antenna plane to the first layer.
    template <typename Real>
    CMatrixT<Real> build_antenna_matrix(const SimGeometry<Real> &geom, int N)
    {
        geom.validate();
        const auto antennas = antenna_positions(N, geom);
        const int S = geom.elements;
        CMatrixT<Real> H(S, N);
        for (int s = 1; s <= S; ++s)
        {
            const Point3T<Real> p = element_offset(1, s, geom);
            for (int n = 0; n < N; ++n)
            {
                const Real d = (p - antennas[static_cast<std::size_t>(n)]).norm();
                H(s - 1, n) = rs_coefficient(geom.layer_spacing / d, d, geom.wavelength);
            }
        }
        return H;
    }

    // Raw propagation matrices of one AP's stack. `layers[i]` is H^{l} for l = i + 2.
    template <typename Real>
    struct PropagationStack
    {
        CMatrixT<Real> antenna;
        std::vector<CMatrixT<Real>> layers;

        int layer_count() const { return static_cast<int>(layers.size()) + 1; }
        Index elements() const { return antenna.rows(); }
        Index antennas() const { return antenna.cols(); }

        // H^{l}, l is 1-based.
        const CMatrixT<Real> &matrix(int l) const { return l == 1 ? antenna : layers.at(static_cast<std::size_t>(l - 2)); }
    };

    template <typename Real>
    PropagationStack<Real> build_stack(const SimGeometry<Real> &geom, int N)
    {
        PropagationStack<Real> stack;
        stack.antenna = build_antenna_matrix(geom, N);
        if (geom.layers > 1)
            stack.layers.assign(static_cast<std::size_t>(geom.layers - 1), build_layer_matrix(geom));
        return stack;
    }

    // Phase tensor theta[m](l, s), radians in [0, 2 pi). Rows are layers.
    struct PhaseConfig
    {
        std::vector<MatrixXd> theta;

        PhaseConfig() = default;
        PhaseConfig(int aps, int layers, int elements)
            : theta(static_cast<std::size_t>(aps), MatrixXd::Zero(layers, elements)) {}

        int aps() const { return static_cast<int>(theta.size()); }
        int layers() const { return theta.empty() ? 0 : static_cast<int>(theta.front().rows()); }
        int elements() const { return theta.empty() ? 0 : static_cast<int>(theta.front().cols()); }

        // Diagonal of Phi^{m l}; l is 1-based.
        CVector layer_diagonal(int m, int l) const;

        // Wraps every entry into [0, 2 pi).
        void wrap();
    };

    inline double wrap_phase(double theta)
    {
        constexpr double two_pi = 2 * pi_v<double>;
        double r = std::fmod(theta, two_pi);
        if (r < 0)
            r += two_pi;
        return r >= two_pi ? 0.0 : r;
    }

    // F = Phi^L H^L ... Phi^1 H^1 for a single AP given its L x S phase block.
    template <typename Real>
    CMatrixT<Real> build_aggregate(const PropagationStack<Real> &stack, const Eigen::Ref<const MatrixXd> &phases)
    {
        if (phases.rows() != stack.layer_count() || phases.cols() != stack.elements())
            throw DimensionError("build_aggregate: phase block is " + std::to_string(phases.rows()) + "x" +
                                 std::to_string(phases.cols()) + ", stack needs " +
                                 std::to_string(stack.layer_count()) + "x" + std::to_string(stack.elements()));
        CMatrixT<Real> F = stack.antenna;
        for (int l = 1; l <= stack.layer_count(); ++l)
        {
            if (l > 1)
                F = stack.matrix(l) * F;
            for (Index s = 0; s < F.rows(); ++s)
                F.row(s) *= std::polar(Real(1), static_cast<Real>(phases(l - 1, s)));
        }
        return F;
    }

    inline CMatrix build_aggregate(const PropagationStack<double> &stack, const PhaseConfig &phases, int m)
    {
        if (m < 0 || m >= phases.aps())
            throw DimensionError("build_aggregate: AP index out of range");
        return build_aggregate(stack, phases.theta[static_cast<std::size_t>(m)]);
    }

    // tr(F F^H), the squared Frobenius norm.
    template <typename Derived>
    typename Derived::RealScalar aggregate_trace(const Eigen::MatrixBase<Derived> &F)
    {
        return F.squaredNorm();
    }

    // Text dump: "# name rows cols" then one row per line of "re im" pairs.
    void write_matrix(std::ostream &os, const std::string &name, const CMatrix &M);
    // Real variant, one value per entry.
    void write_matrix(std::ostream &os, const std::string &name, const MatrixXd &M);
    CMatrix read_matrix(std::istream &is, std::string *name = nullptr);
}

#endif // SIMSWIPT_PROPAGATION_HPP
