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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "simswipt/geometry.hpp"

#include <set>

using namespace simswipt;

TEST_CASE("grid index corners and interior")
{
    CHECK(element_grid_index(1, 25) == GridIndex{1, 1});
    CHECK(element_grid_index(6, 25) == GridIndex{2, 1});
    CHECK(element_grid_index(25, 25) == GridIndex{5, 5});
    CHECK(element_grid_index(7, 9) == GridIndex{3, 1});
}

TEST_CASE("grid index is a bijection onto the square grid")
{
    for (int S : {1, 4, 9, 25, 64})
    {
        std::set<std::pair<int, int>> seen;
        const int side = static_cast<int>(std::lround(std::sqrt(S)));
        for (int s = 1; s <= S; ++s)
        {
            const GridIndex g = element_grid_index(s, S);
            CHECK(g.z >= 1);
            CHECK(g.z <= side);
            CHECK(g.y >= 1);
            CHECK(g.y <= side);
            seen.insert({g.z, g.y});
        }
        CHECK(seen.size() == static_cast<std::size_t>(S));
    }
}

TEST_CASE("grid index rejects bad arguments")
{
    CHECK_THROWS_AS(element_grid_index(0, 25), std::invalid_argument);
    CHECK_THROWS_AS(element_grid_index(26, 25), std::invalid_argument);
    CHECK_THROWS_AS(element_grid_index(1, 8), std::invalid_argument);
}

TEST_CASE("inter-element distance")
{
    SimGeometry<double> g;
    g.elements = 25;
    g.element_spacing = 0.5;
    g.layer_spacing = 0.5;

    // same grid position
    CHECK(inter_element_distance(7, 7, g) == doctest::Approx(0.5).epsilon(1e-15));
    // neighbours along y: lateral offset (0, 1)
    CHECK(inter_element_distance(1, 2, g) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(inter_element_distance(2, 1, g) == inter_element_distance(1, 2, g));

    // offset (3, 4) with tiny layer spacing approaches 5 d_PS
    g.element_spacing = 1.0;
    g.layer_spacing = 1e-9;
    const int a = 1;               // (1, 1)
    const int b = 3 * 5 + 4 + 1;   // (4, 5)
    CHECK(inter_element_distance(a, b, g) == doctest::Approx(5.0).epsilon(1e-12));

    g.layer_spacing = 0.3;
    for (int s = 1; s <= 25; ++s)
        for (int t = 1; t <= 25; ++t)
            CHECK(inter_element_distance(s, t, g) >= 0.3);
}

TEST_CASE("antenna grid is centred with half-wavelength pitch")
{
    SimGeometry<double> g;
    g.wavelength = 0.2;

    auto one = antenna_positions(1, g);
    REQUIRE(one.size() == 1);
    CHECK(one[0].norm() == 0.0);

    auto two = antenna_positions(2, g);
    REQUIRE(two.size() == 2);
    CHECK((two[0] + two[1]).norm() == doctest::Approx(0.0));
    CHECK((two[0] - two[1]).norm() == doctest::Approx(0.1));

    auto four = antenna_positions(4, g);
    REQUIRE(four.size() == 4);
    Point3 centre = Point3::Zero();
    double nearest = 1e9;
    for (std::size_t i = 0; i < four.size(); ++i)
    {
        centre += four[i];
        for (std::size_t j = i + 1; j < four.size(); ++j)
            nearest = std::min(nearest, (four[i] - four[j]).norm());
    }
    CHECK(centre.norm() == doctest::Approx(0.0));
    CHECK(nearest == doctest::Approx(0.1));

    CHECK_THROWS(antenna_positions(0, g));
}

namespace
{
    NetworkLayout one_pair(const Point3 &ap, const Point3 &rx)
    {
        NetworkLayout l;
        l.side = 100;
        l.aps = {ap};
        l.irs = {rx};
        return l;
    }
}

TEST_CASE("receiver geometry on the broadside axis")
{
    SimGeometry<double> g;
    g.layers = 2;
    g.elements = 1;
    g.layer_spacing = 0.1;
    const auto layout = one_pair({10, 10, 15}, {60, 10, 15});
    const ReceiverGeometry rg = receiver_geometry(layout, g, 0, 0);
    CHECK(rg.sin_elevation(0) == 0.0);
    CHECK(rg.sin_azimuth_cos_elevation(0) == 0.0);
    CHECK(rg.distance(0) == doctest::Approx(50.0 - 0.2));
}

TEST_CASE("receiver at element height has zero elevation sine")
{
    SimGeometry<double> g;
    g.elements = 9;
    g.element_spacing = 0.1;
    g.layer_spacing = 0.05;
    // element 4 sits at grid (2, 1): z offset 0, y offset -0.1
    const auto layout = one_pair({10, 10, 15}, {40, 30, 15});
    const ReceiverGeometry rg = receiver_geometry(layout, g, 0, 0);
    CHECK(rg.sin_elevation(3) == 0.0);
    CHECK(rg.sin_elevation(0) > 0.0);
}

TEST_CASE("receiver geometry agrees with direct vector arithmetic")
{
    SimGeometry<double> g;
    g.layers = 3;
    g.elements = 4;
    g.element_spacing = 0.08;
    g.layer_spacing = 0.06;
    const Point3 ap{20, 35, 15};
    const Point3 rx{71.5, 12.25, 1.65};
    const auto layout = one_pair(ap, rx);
    const ReceiverGeometry rg = receiver_geometry(layout, g, 0, 0);

    // Element centres written out by hand for a 2 x 2 grid: index order
    // (z, y) = (1, 1), (1, 2), (2, 1), (2, 2), half a pitch from the axis.
    const double h = 0.04;
    const Point3 offsets[4] = {{0.18, -h, -h}, {0.18, h, -h}, {0.18, -h, h}, {0.18, h, h}};
    for (int s = 0; s < 4; ++s)
    {
        const Point3 e = ap + offsets[s];
        const double dx = e.x() - rx.x(), dy = e.y() - rx.y(), dz = e.z() - rx.z();
        const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
        CHECK(rg.distance(s) == doctest::Approx(d).epsilon(1e-14));
        CHECK(rg.sin_elevation(s) == doctest::Approx(std::abs(dz) / d).epsilon(1e-14));
        CHECK(rg.sin_azimuth_cos_elevation(s) == doctest::Approx(dy / d).epsilon(1e-14));
    }
    CHECK(rg.centre_distance == doctest::Approx((rx - ap).norm()));
}

TEST_CASE("coincident AP and receiver is rejected")
{
    SimGeometry<double> g;
    const auto layout = one_pair({10, 10, 15}, {10, 10, 15});
    CHECK_THROWS_AS(receiver_geometry(layout, g, 0, 0), GeometryError);
    CHECK_THROWS_AS(receiver_geometry(layout, g, 1, 0), std::invalid_argument);
}

TEST_CASE("layout validation")
{
    NetworkLayout l = one_pair({10, 10, 15}, {120, 10, 1.65});
    CHECK_THROWS_AS(l.validate(), GeometryError);
    l.irs[0].x() = 50;
    CHECK_NOTHROW(l.validate());
    CHECK(l.receivers() == 1);
}
