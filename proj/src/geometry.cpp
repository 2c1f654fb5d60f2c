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


#include "simswipt/geometry.hpp"

namespace simswipt
{
    void NetworkLayout::validate() const
    {
        if (!(side > 0))
            throw GeometryError("layout: area side must be positive");
        auto check = [this](const std::vector<Point3> &pts, const char *what)
        {
            for (const auto &p : pts)
            {
                if (p.x() < 0 || p.x() > side || p.y() < 0 || p.y() > side)
                    throw GeometryError(std::string("layout: ") + what + " position outside the area");
                if (!(p.z() > 0))
                    throw GeometryError(std::string("layout: ") + what + " height must be positive");
            }
        };
        check(aps, "AP");
        check(irs, "IR");
        check(ers, "ER");
    }

    ReceiverGeometry receiver_geometry(const NetworkLayout &layout, const SimGeometry<double> &geom, int m, int k)
    {
        if (m < 0 || m >= static_cast<int>(layout.aps.size()))
            throw std::invalid_argument("receiver_geometry: AP index out of range");
        if (k < 0 || k >= layout.receivers())
            throw std::invalid_argument("receiver_geometry: receiver index out of range");

        const Point3 &ap = layout.aps[static_cast<std::size_t>(m)];
        const Point3 &rx = layout.receiver(k);

        ReceiverGeometry out;
        out.centre_distance = (rx - ap).norm();
        if (!(out.centre_distance > 1e-9))
            throw GeometryError("receiver_geometry: receiver " + std::to_string(k) + " coincides with AP " +
                                std::to_string(m));

        const int S = geom.elements;
        out.distance.resize(S);
        out.sin_elevation.resize(S);
        out.sin_azimuth_cos_elevation.resize(S);
        for (int s = 1; s <= S; ++s)
        {
            const Point3 e = ap + element_offset(geom.layers, s, geom);
            const double d = (e - rx).norm();
            if (!(d > 1e-9))
                throw GeometryError("receiver_geometry: receiver " + std::to_string(k) + " lies on an element of AP " +
                                    std::to_string(m));
            out.distance(s - 1) = d;
            out.sin_elevation(s - 1) = std::abs(e.z() - rx.z()) / d;
            out.sin_azimuth_cos_elevation(s - 1) = (e.y() - rx.y()) / d;
        }
        return out;
    }
}
