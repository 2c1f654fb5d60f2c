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


#include "simswipt/propagation.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace simswipt
{
    CVector PhaseConfig::layer_diagonal(int m, int l) const
    {
        if (m < 0 || m >= aps() || l < 1 || l > layers())
            throw DimensionError("PhaseConfig::layer_diagonal: index out of range");
        const MatrixXd &t = theta[static_cast<std::size_t>(m)];
        CVector d(t.cols());
        for (Index s = 0; s < t.cols(); ++s)
            d(s) = std::polar(1.0, t(l - 1, s));
        return d;
    }

    void PhaseConfig::wrap()
    {
        for (auto &t : theta)
            t = t.unaryExpr([](double v) { return wrap_phase(v); });
    }

    void write_matrix(std::ostream &os, const std::string &name, const CMatrix &M)
    {
        if (name.empty() || name.find_first_of(" \t\n") != std::string::npos)
            throw std::invalid_argument("write_matrix: name must be a single token");
        os << "# " << name << ' ' << M.rows() << ' ' << M.cols() << '\n';
        char buf[64];
        for (Index r = 0; r < M.rows(); ++r)
        {
            for (Index c = 0; c < M.cols(); ++c)
            {
                std::snprintf(buf, sizeof buf, "%.17g %.17g", M(r, c).real(), M(r, c).imag());
                if (c > 0)
                    os << ' ';
                os << buf;
            }
            os << '\n';
        }
    }

    void write_matrix(std::ostream &os, const std::string &name, const MatrixXd &M)
    {
        if (name.empty() || name.find_first_of(" \t\n") != std::string::npos)
            throw std::invalid_argument("write_matrix: name must be a single token");
        os << "# " << name << ' ' << M.rows() << ' ' << M.cols() << '\n';
        char buf[32];
        for (Index r = 0; r < M.rows(); ++r)
        {
            for (Index c = 0; c < M.cols(); ++c)
            {
                std::snprintf(buf, sizeof buf, "%.17g", M(r, c));
                if (c > 0)
                    os << ' ';
                os << buf;
            }
            os << '\n';
        }
    }

    CMatrix read_matrix(std::istream &is, std::string *name)
    {
        std::string line;
        while (std::getline(is, line) && line.empty())
        {
        }
        std::istringstream header(line);
        std::string hash, label;
        Index rows = -1, cols = -1;
        if (!(header >> hash >> label >> rows >> cols) || hash != "#" || rows < 0 || cols < 0)
            throw std::runtime_error("read_matrix: malformed header '" + line + "'");
        CMatrix M(rows, cols);
        for (Index r = 0; r < rows; ++r)
        {
            if (!std::getline(is, line))
                throw std::runtime_error("read_matrix: truncated matrix '" + label + "'");
            std::istringstream row(line);
            for (Index c = 0; c < cols; ++c)
            {
                double re = 0, im = 0;
                if (!(row >> re >> im))
                    throw std::runtime_error("read_matrix: short row " + std::to_string(r) + " in '" + label + "'");
                M(r, c) = {re, im};
            }
        }
        if (name)
            *name = label;
        return M;
    }
}
