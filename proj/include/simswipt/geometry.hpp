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


#ifndef SIMSWIPT_GEOMETRY_HPP
#define SIMSWIPT_GEOMETRY_HPP

#include "simswipt/types.hpp"

#include <cmath>
#include <vector>

namespace simswipt
{
    // Stacked metasurface geometry shared by every AP. Layers are planes
    // parallel to Oyz, stacked along +x in front of the antenna plane; the
    // antenna plane sits at x = 0 and layer l at x = l * layer_spacing.
    template <typename Real = double>
    struct SimGeometry
    {
        int layers = 1;
        int elements = 1;            // S, perfect square
        Real element_spacing = 0.5;  // d_PS [m]
        Real layer_spacing = 0.5;    // d_SIM [m]
        Real wavelength = 1.0;       // [m]

        int side() const
        {
            const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(elements))));
            return r;
        }

        void validate() const
        {
            if (layers < 1)
                throw std::invalid_argument("SimGeometry: layers must be >= 1");
            if (elements < 1 || side() * side() != elements)
                throw std::invalid_argument("SimGeometry: elements must be a perfect square");
            if (!(element_spacing > 0) || !(layer_spacing > 0) || !(wavelength > 0))
                throw std::invalid_argument("SimGeometry: spacings and wavelength must be positive");
        }
    };

    // 1-based (z, y) grid coordinates of an element.
    struct GridIndex
    {
        int z;
        int y;
        bool operator==(const GridIndex &) const = default;
    };

    // s_z = ceil(s / sqrt(S)), s_y = mod(s - 1, sqrt(S)) + 1, both 1-based.
    inline GridIndex element_grid_index(int s, int S)
    {
        const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(S))));
        if (S < 1 || side * side != S)
            throw std::invalid_argument("element_grid_index: S must be a perfect square");
        if (s < 1 || s > S)
            throw std::invalid_argument("element_grid_index: element index out of range");
        return {(s + side - 1) / side, (s - 1) % side + 1};
    }

    // Distance between element s_breve of layer l-1 and element s of layer l.
    template <typename Real>
    Real inter_element_distance(int s, int s_breve, const SimGeometry<Real> &geom)
    {
        const GridIndex a = element_grid_index(s, geom.elements);
        const GridIndex b = element_grid_index(s_breve, geom.elements);
        const Real dz = static_cast<Real>(a.z - b.z);
        const Real dy = static_cast<Real>(a.y - b.y);
        const Real lateral = geom.element_spacing * std::sqrt(dz * dz + dy * dy);
        return std::sqrt(lateral * lateral + geom.layer_spacing * geom.layer_spacing);
    }

    // Position of element s (1-based) of layer l (1-based) relative to the AP
    // reference point (centre of the antenna plane).
    template <typename Real>
    Point3T<Real> element_offset(int layer, int s, const SimGeometry<Real> &geom)
    {
        const GridIndex g = element_grid_index(s, geom.elements);
        const Real centre = (static_cast<Real>(geom.side()) + 1) / 2;
        return {static_cast<Real>(layer) * geom.layer_spacing,
                (static_cast<Real>(g.y) - centre) * geom.element_spacing,
                (static_cast<Real>(g.z) - centre) * geom.element_spacing};
    }

    // Centred rows x cols antenna grid with half-wavelength pitch in the x = 0
    // plane. rows is the largest divisor of N not above sqrt(N).
    template <typename Real>
    std::vector<Point3T<Real>> antenna_positions(int N, const SimGeometry<Real> &geom)
    {
        if (N < 1)
            throw std::invalid_argument("antenna_positions: N must be >= 1");
        int rows = static_cast<int>(std::floor(std::sqrt(static_cast<double>(N))));
        while (N % rows != 0)
            --rows;
        const int cols = N / rows;
        const Real pitch = geom.wavelength / 2;
        std::vector<Point3T<Real>> out;
        out.reserve(static_cast<std::size_t>(N));
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
                out.emplace_back(Real(0),
                                 (static_cast<Real>(c) - static_cast<Real>(cols - 1) / 2) * pitch,
                                 (static_cast<Real>(r) - static_cast<Real>(rows - 1) / 2) * pitch);
        return out;
    }

    // AP and receiver coordinates (x, y, height) in metres.
    struct NetworkLayout
    {
        double side = 100.0;
        std::vector<Point3> aps;
        std::vector<Point3> irs;
        std::vector<Point3> ers;

        int receivers() const { return static_cast<int>(irs.size() + ers.size()); }

        // Unified receiver index: IRs first, then ERs.
        const Point3 &receiver(int k) const
        {
            const auto ki = static_cast<std::size_t>(k);
            return ki < irs.size() ? irs[ki] : ers.at(ki - irs.size());
        }

        void validate() const;
    };

    // Per-element view of a receiver from the last SIM layer of one AP.
    struct ReceiverGeometry
    {
        VectorXd distance;                  // d_{s,k}
        VectorXd sin_elevation;             // sin(chi_{s,k}) = |z_s - z_k| / d
        VectorXd sin_azimuth_cos_elevation; // sin(eps) cos(chi) = (y_s - y_k) / d
        double centre_distance = 0.0;       // AP reference point to receiver
    };

    ReceiverGeometry receiver_geometry(const NetworkLayout &layout, const SimGeometry<double> &geom, int m, int k);
}

#endif // SIMSWIPT_GEOMETRY_HPP
