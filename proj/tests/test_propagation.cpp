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

#include "simswipt/propagation.hpp"
#include "simswipt/rng.hpp"

#include <sstream>

using namespace simswipt;

namespace
{
    // Plain-arithmetic reference for one coefficient, real and imaginary
    // parts expanded by hand.
    std::complex<double> reference_coefficient(double cos_angle, double d, double lambda)
    {
        const double amp = lambda * lambda * cos_angle / (4 * d);
        const double a = 1 / (2 * pi_v<double> * d);
        const double b = -1 / lambda;
        const double ph = 2 * pi_v<double> * d / lambda;
        const double re = amp * (a * std::cos(ph) - b * std::sin(ph));
        const double im = amp * (a * std::sin(ph) + b * std::cos(ph));
        return {re, im};
    }

    SimGeometry<double> small_geometry(int layers, int S)
    {
        SimGeometry<double> g;
        g.layers = layers;
        g.elements = S;
        g.wavelength = 0.157786;
        g.element_spacing = g.wavelength / 2;
        g.layer_spacing = 5 * g.wavelength / layers;
        return g;
    }
}

TEST_CASE("coefficient magnitude at unit distance and wavelength")
{
    const auto c = rs_coefficient(1.0, 1.0, 1.0);
    const double expected = 0.25 * std::sqrt(1.0 / (4 * pi_v<double> * pi_v<double>) + 1.0);
    CHECK(std::abs(c) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(std::abs(c) == doctest::Approx(0.253147).epsilon(1e-6));
}

TEST_CASE("coefficient limits and errors")
{
    CHECK(rs_coefficient(0.0, 2.0, 0.5) == std::complex<double>(0.0, 0.0));
    // far field: |c| -> lambda / (4 d)
    CHECK(std::abs(rs_coefficient(1.0, 1e6, 0.5)) == doctest::Approx(1.25e-7).epsilon(1e-9));
    CHECK(std::abs(rs_coefficient(1.0, 1e9, 0.5)) < std::abs(rs_coefficient(1.0, 1e6, 0.5)) * 1e-2);
    CHECK_THROWS_AS(rs_coefficient(1.0, 0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(rs_coefficient(1.0, -1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(rs_coefficient(1.0, 1.0, 0.0), std::invalid_argument);

    const auto c = rs_coefficient(0.7, 0.33, 0.157);
    const auto r = reference_coefficient(0.7, 0.33, 0.157);
    CHECK(c.real() == doctest::Approx(r.real()).epsilon(1e-13));
    CHECK(c.imag() == doctest::Approx(r.imag()).epsilon(1e-13));
}

TEST_CASE("single-element layer matrix")
{
    const auto g = small_geometry(2, 1);
    const CMatrix H = build_layer_matrix(g);
    REQUIRE(H.rows() == 1);
    const auto r = reference_coefficient(1.0, g.layer_spacing, g.wavelength);
    CHECK(std::abs(H(0, 0) - r) < 1e-15);
}

TEST_CASE("layer matrix is symmetric and matches per-entry evaluation")
{
    const auto g = small_geometry(3, 4);
    const CMatrix H = build_layer_matrix(g);
    CHECK((H - H.transpose()).cwiseAbs().maxCoeff() < 1e-18);
    const double p = g.element_spacing;
    // 2 x 2 grid: element s at (z, y) = ((s-1)/2, (s-1)%2) in pitch units
    for (int s = 0; s < 4; ++s)
        for (int t = 0; t < 4; ++t)
        {
            const double dz = p * (s / 2 - t / 2), dy = p * (s % 2 - t % 2);
            const double d = std::sqrt(dz * dz + dy * dy + g.layer_spacing * g.layer_spacing);
            const auto r = reference_coefficient(g.layer_spacing / d, d, g.wavelength);
            CHECK(std::abs(H(s, t) - r) < 1e-14 * std::abs(r));
        }
}

TEST_CASE("antenna matrix")
{
    SUBCASE("one antenna, one element on the axis")
    {
        const auto g = small_geometry(1, 1);
        const CMatrix H = build_antenna_matrix(g, 1);
        const auto r = reference_coefficient(1.0, g.layer_spacing, g.wavelength);
        CHECK(std::abs(H(0, 0) - r) < 1e-15);
    }
    SUBCASE("two antennas, four elements")
    {
        const auto g = small_geometry(2, 4);
        const CMatrix H = build_antenna_matrix(g, 2);
        REQUIRE(H.rows() == 4);
        REQUIRE(H.cols() == 2);
        const double p = g.element_spacing, a = g.wavelength / 4;
        for (int s = 0; s < 4; ++s)
            for (int n = 0; n < 2; ++n)
            {
                const double ey = (s % 2 - 0.5) * p, ez = (s / 2 - 0.5) * p;
                const double ay = n == 0 ? -a : a;
                const double d = std::sqrt(g.layer_spacing * g.layer_spacing + (ey - ay) * (ey - ay) + ez * ez);
                const auto r = reference_coefficient(g.layer_spacing / d, d, g.wavelength);
                CHECK(std::abs(H(s, n) - r) < 1e-14 * std::abs(r));
            }
        // mirror images about the axis see the same magnitudes
        CHECK(std::abs(H(0, 0)) == doctest::Approx(std::abs(H(1, 1))));
        CHECK(std::abs(H(2, 0)) == doctest::Approx(std::abs(H(3, 1))));
    }
}

TEST_CASE("aggregate of a single layer and of zero phases")
{
    const auto g = small_geometry(1, 4);
    const auto stack = build_stack(g, 2);
    Rng rng = make_stream(3, Stream::test);
    std::uniform_real_distribution<double> u(0, 2 * pi_v<double>);
    MatrixXd theta(1, 4);
    for (Index s = 0; s < 4; ++s)
        theta(0, s) = u(rng);
    const CMatrix F = build_aggregate(stack, theta);
    CMatrix expected = stack.antenna;
    for (Index s = 0; s < 4; ++s)
        expected.row(s) *= std::polar(1.0, theta(0, s));
    CHECK((F - expected).cwiseAbs().maxCoeff() < 1e-18);
    CHECK(aggregate_trace(F) == doctest::Approx(aggregate_trace(stack.antenna)).epsilon(1e-14));

    const auto g3 = small_geometry(3, 4);
    const auto s3 = build_stack(g3, 2);
    const CMatrix F0 = build_aggregate(s3, MatrixXd::Zero(3, 4));
    const CMatrix raw = s3.matrix(3) * s3.matrix(2) * s3.matrix(1);
    CHECK((F0 - raw).cwiseAbs().maxCoeff() < 1e-15 * raw.cwiseAbs().maxCoeff());

    CHECK_THROWS_AS(build_aggregate(s3, MatrixXd::Zero(2, 4)), DimensionError);
}

TEST_CASE("aggregate trace")
{
    CHECK(aggregate_trace(CMatrix::Zero(3, 2)) == 0.0);
    CHECK(aggregate_trace(CMatrix::Identity(4, 4)) == 4.0);
}

TEST_CASE("phase wrapping")
{
    CHECK(wrap_phase(0.0) == 0.0);
    CHECK(wrap_phase(-0.5) == doctest::Approx(2 * pi_v<double> - 0.5));
    CHECK(wrap_phase(7.0) == doctest::Approx(7.0 - 2 * pi_v<double>));
    CHECK(wrap_phase(2 * pi_v<double>) == 0.0);
    PhaseConfig p(2, 2, 4);
    p.theta[1](1, 3) = -1.0;
    p.wrap();
    CHECK(p.theta[1](1, 3) == doctest::Approx(2 * pi_v<double> - 1.0));
    const CVector d = p.layer_diagonal(1, 2);
    CHECK(std::abs(d(3) - std::polar(1.0, -1.0)) < 1e-15);
}

TEST_CASE("matrix text dump round trip")
{
    CMatrix M(2, 3);
    M << std::complex<double>(1.0 / 3, -2e-17), 0.0, std::complex<double>(-5.5, 1e300),
        std::complex<double>(std::nextafter(1.0, 2.0), 0.1), 7.0, std::complex<double>(0, -0.25);
    std::stringstream ss;
    write_matrix(ss, "F_0", M);
    CHECK(ss.str().rfind("# F_0 2 3\n", 0) == 0);
    std::string name;
    const CMatrix back = read_matrix(ss, &name);
    CHECK(name == "F_0");
    CHECK(back == M);

    std::istringstream bad("# X 2 2\n1 0 2 0\n");
    CHECK_THROWS(read_matrix(bad));
}

TEST_CASE("real matrix dump")
{
    MatrixXd M(2, 2);
    M << 0.25, 1.0 / 3, -1e-300, 2.0;
    std::stringstream ss;
    write_matrix(ss, "eta", M);
    std::string header;
    std::getline(ss, header);
    CHECK(header == "# eta 2 2");
    double v[4];
    ss >> v[0] >> v[1] >> v[2] >> v[3];
    CHECK(v[0] == 0.25);
    CHECK(v[1] == 1.0 / 3);
    CHECK(v[2] == -1e-300);
    CHECK(v[3] == 2.0);
    CHECK_THROWS(write_matrix(ss, "two words", M));
}
