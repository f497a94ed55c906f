// SPDX-License-Identifier: Apache-2.0
//
// losmimo - line-of-sight MIMO workbench for randomly oriented antenna arrays
// Copyright (C) 2026 The losmimo authors
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

#include "losmimo/geometry.hpp"
#include "losmimo/random.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace losmimo;

namespace
{
    double pair_distance(const ArrayLayout &a, std::size_t i, std::size_t j)
    {
        return distance(a[i].position(), a[j].position());
    }

    LinkScenario scenario(ArrayLayout tx, ArrayLayout rx, double R, double beta)
    {
        LinkScenario s;
        s.R = R;
        s.beta = beta;
        s.lambda = 0.0042;
        s.d_t = pair_distance(tx, 0, 1);
        s.tx_layout = std::move(tx);
        s.rx_layout = std::move(rx);
        return s;
    }
}

TEST(Layout, TetrahedronHasEqualEdgesAndRadius)
{
    const auto t = make_layout(ArrayKind::tetrahedron, {0, 0.25});
    ASSERT_EQ(t.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i)
    {
        EXPECT_NEAR(t[i].radius, std::sqrt(3.0 / 8.0) * 0.25, 1e-15);
        EXPECT_NEAR(t[i].radius, 0.1530931, 1e-7);
        for (std::size_t j = i + 1; j < 4; ++j)
            EXPECT_NEAR(pair_distance(t, i, j), 0.25, 1e-14);
    }
    EXPECT_LT(norm(t.centroid()), 1e-15);
}

TEST(Layout, PentagonDiagonalIsGoldenRatioTimesEdge)
{
    const auto p = make_layout(ArrayKind::pentagon, {0, 0.06});
    ASSERT_EQ(p.size(), 5u);
    for (std::size_t i = 0; i < 5; ++i)
    {
        EXPECT_NEAR(pair_distance(p, i, (i + 1) % 5), 0.06, 1e-15);
        EXPECT_NEAR(pair_distance(p, i, (i + 2) % 5), 0.5 * (1.0 + std::sqrt(5.0)) * 0.06, 1e-15);
    }
    EXPECT_NEAR(pair_distance(p, 0, 2), 0.0970820, 1e-7);
    EXPECT_LT(norm(p.centroid()), 1e-15);
}

TEST(Layout, TriangleIsEquilateral)
{
    const auto t = make_layout(ArrayKind::triangle, {0, 0.06});
    ASSERT_EQ(t.size(), 3u);
    EXPECT_NEAR(pair_distance(t, 0, 1), 0.06, 1e-15);
    EXPECT_NEAR(pair_distance(t, 1, 2), 0.06, 1e-15);
    EXPECT_NEAR(pair_distance(t, 2, 0), 0.06, 1e-15);
    EXPECT_THROW(make_layout(ArrayKind::triangle, {4, 0.06}), std::invalid_argument);
}

TEST(Layout, UlaTwoElementsSitAtHalfSpacing)
{
    const auto u = make_layout(ArrayKind::ula, {2, 0.145});
    EXPECT_EQ(u[0].position(), (Vec3{0, 0, 0.0725}));
    EXPECT_EQ(u[1].position(), (Vec3{0, 0, -0.0725}));

    const auto u5 = make_layout(ArrayKind::ula, {5, 0.1});
    for (std::size_t i = 0; i < 5; ++i)
    {
        EXPECT_DOUBLE_EQ(u5[i].position().x, 0.0);
        EXPECT_DOUBLE_EQ(u5[i].position().y, 0.0);
    }
    EXPECT_LT(norm(u5.centroid()), 1e-15);
}

TEST(Layout, UraGridAndShapeErrors)
{
    const auto sq = make_layout(ArrayKind::ura, {4, 0.25});
    ASSERT_EQ(sq.size(), 4u);
    for (const auto &p : sq.positions())
        EXPECT_EQ(p.x, 0.0);
    EXPECT_NEAR(pair_distance(sq, 0, 1), 0.25, 1e-15);
    EXPECT_NEAR(pair_distance(sq, 0, 2), 0.25, 1e-15);
    EXPECT_NEAR(pair_distance(sq, 0, 3), 0.25 * std::sqrt(2.0), 1e-15);

    const auto r = make_layout(ArrayKind::ura, {6, 0.1, 2, 3});
    EXPECT_EQ(r.size(), 6u);
    EXPECT_LT(norm(r.centroid()), 1e-15);

    EXPECT_THROW(make_layout(ArrayKind::ura, {6, 0.1}), std::invalid_argument);
    EXPECT_THROW(make_layout(ArrayKind::ura, {5, 0.1, 2, 3}), std::invalid_argument);
    EXPECT_THROW(make_layout(ArrayKind::ula, {2, 0.0}), std::invalid_argument);
    EXPECT_THROW(make_layout(ArrayKind::custom, {2, 0.1}), std::invalid_argument);
}

TEST(Layout, ArrayKindNames)
{
    EXPECT_EQ(parse_array_kind("Tetrahedron"), ArrayKind::tetrahedron);
    EXPECT_EQ(parse_array_kind("pent"), ArrayKind::pentagon);
    EXPECT_EQ(parse_array_kind("spherical_code"), ArrayKind::spherical_code);
    EXPECT_THROW(parse_array_kind("octahedron"), std::invalid_argument);
    EXPECT_EQ(to_string(ArrayKind::ura), "ura");
}

TEST(Layout, FromPositionsChecksCentroid)
{
    EXPECT_THROW(ArrayLayout::from_positions(ArrayKind::custom, {{1, 0, 0}, {2, 0, 0}}), std::invalid_argument);
    const auto a = ArrayLayout::from_positions(ArrayKind::custom, {{1, 0, 0}, {2, 0, 0}}, true);
    EXPECT_NEAR(a[0].radius, 0.5, 1e-15);
    EXPECT_LT(norm(a.centroid()), 1e-15);
    const auto c = ArrayLayout::from_positions(ArrayKind::custom, {{0, 0, 0}});
    EXPECT_EQ(c[0].radius, 0.0);
}

TEST(Layout, SphericalCodeFromFile)
{
    const auto dir = std::filesystem::temp_directory_path() / "losmimo_geometry_test";
    std::filesystem::create_directories(dir);
    const auto good = dir / "octahedron.csv";
    {
        std::ofstream f(good);
        f << "# octahedron\n1,0,0\n-1,0,0\n0,1,0\n0,-1,0\n\n0 0 1\n0,0,-1\n";
    }
    const auto oct = make_layout(ArrayKind::spherical_code, {6, 0.2, 0, 0, good});
    ASSERT_EQ(oct.size(), 6u);
    for (const auto &a : oct.antennas())
        EXPECT_NEAR(a.radius, 0.1, 1e-15);

    EXPECT_THROW(make_layout(ArrayKind::spherical_code, {5, 0.2, 0, 0, good}), std::invalid_argument);

    const auto bad = dir / "bad.csv";
    {
        std::ofstream f(bad);
        f << "1,0,0\n0.5,0,0\n";
    }
    EXPECT_THROW(read_spherical_code(bad), std::invalid_argument);
    EXPECT_THROW(read_spherical_code(dir / "missing.csv"), std::invalid_argument);

    // Built-in lattice when no table is given
    const auto sp = make_layout(ArrayKind::spherical_code, {12, 0.2});
    EXPECT_EQ(sp.size(), 12u);
    EXPECT_LT(norm(sp.centroid()), 1e-12);
}

TEST(Rotation, UniformRotationsAreProper)
{
    Engine rng = make_stream(42);
    for (int i = 0; i < 10000; ++i)
        EXPECT_TRUE(uniform_rotation(rng).is_proper_rotation(1e-12));
}

TEST(Rotation, SameSeedSameSequence)
{
    Engine a = make_stream(7, {3}), b = make_stream(7, {3}), c = make_stream(7, {4});
    bool differs = false;
    for (int i = 0; i < 100; ++i)
    {
        const auto ua = uniform_rotation(a), ub = uniform_rotation(b), uc = uniform_rotation(c);
        EXPECT_EQ(ua, ub);
        differs |= !(ua == uc);
    }
    EXPECT_TRUE(differs);
}

TEST(Rotation, MeanImageOfAxisVanishes)
{
    Engine rng = make_stream(11);
    const int n = 1'000'000;
    Vec3 s{};
    for (int i = 0; i < n; ++i)
        s += uniform_rotation(rng).transpose().apply(e_z);
    // Each coordinate of a uniform direction has variance 1/3
    const double sigma = std::sqrt(1.0 / 3.0 / n);
    EXPECT_LT(std::abs(s.x / n), 3 * sigma);
    EXPECT_LT(std::abs(s.y / n), 3 * sigma);
    EXPECT_LT(std::abs(s.z / n), 3 * sigma);
}

TEST(Rotation, ProjectedCoordinateIsUniform)
{
    // |e_y^T U^T v| is uniform on [0, 1] for Haar U; Kolmogorov-Smirnov at 1%
    Engine rng = make_stream(2024);
    const int n = 1'000'000;
    const Vec3 v = normalized(Vec3{0.3, -0.5, 0.8});
    std::vector<double> x(n);
    for (auto &xi : x)
        xi = std::abs(dot(e_y, uniform_rotation(rng).transpose().apply(v)));
    std::sort(x.begin(), x.end());
    double d = 0.0;
    for (int i = 0; i < n; ++i)
        d = std::max({d, std::abs(double(i + 1) / n - x[i]), std::abs(x[i] - double(i) / n)});
    EXPECT_LT(d, 1.628 / std::sqrt(double(n)));
}

TEST(Rotation, AxisAngleAndQuaternion)
{
    const auto r = Rotation::axis_angle(e_z, std::numbers::pi / 2);
    const Vec3 v = r.apply(e_x);
    EXPECT_NEAR(v.x, 0.0, 1e-15);
    EXPECT_NEAR(v.y, 1.0, 1e-15);
    EXPECT_TRUE((r * r.transpose()).is_proper_rotation());
    EXPECT_THROW(Rotation::from_quaternion(0, 0, 0, 0), std::domain_error);
}

TEST(Placement, CentroidAndFrame)
{
    auto s = scenario(make_layout(ArrayKind::ula, {2, 0.145}), make_layout(ArrayKind::tetrahedron, {0, 0.25}), 10.0, 0.0);
    auto pos = place_antennas(s);
    Vec3 c{};
    for (const auto &p : pos.rx)
        c += p;
    EXPECT_LT(norm(0.25 * c - Vec3{10, 0, 0}), 1e-12);
    EXPECT_EQ(pos.tx[0], (Vec3{0, 0, 0.0725}));

    Engine rng = make_stream(5);
    for (int i = 0; i < 100; ++i)
    {
        s.U_rx = uniform_rotation(rng);
        s.beta = uniform(rng, -1.5, 1.5);
        pos = place_antennas(s);
        Vec3 ci{};
        for (const auto &p : pos.rx)
            ci += p;
        EXPECT_LT(norm(0.25 * ci - s.rx_centroid()), 1e-9);
    }

    s.beta = std::numbers::pi / 2;
    EXPECT_LT(norm(s.rx_centroid() - Vec3{0, 0, 10}), 1e-14);
    EXPECT_TRUE(s.far_field());
}

TEST(Distances, ExactDistances)
{
    const std::vector<Vec3> tx{{0, 0, 0}}, rx{{3, 4, 0}};
    EXPECT_DOUBLE_EQ(exact_distances(tx, rx)(0, 0), 5.0);
    EXPECT_THROW(exact_distances(tx, tx), std::invalid_argument);
    EXPECT_THROW(exact_distances({}, rx), std::invalid_argument);

    // Single receive antenna at the centroid sees both transmit antennas equally
    const auto s = scenario(make_layout(ArrayKind::ula, {2, 0.145}),
                            ArrayLayout::from_positions(ArrayKind::custom, {{0, 0, 0}}), 10.0, 0.0);
    const auto p = place_antennas(s);
    const auto r = exact_distances(p.tx, p.rx);
    EXPECT_DOUBLE_EQ(r(0, 0), r(0, 1));
    EXPECT_NEAR(r(0, 0), std::hypot(10.0, 0.0725), 1e-14);
}

TEST(Distances, ApproximatePathDifference)
{
    const double d = std::sqrt(10.0 * 0.0042 / 2.0);
    auto s = scenario(make_layout(ArrayKind::ula, {2, d}), make_layout(ArrayKind::ula, {2, d}), 10.0, 0.0);

    // Antenna 0 of the receive ULA is on the +z' axis: theta = 0, d_m = d/2
    EXPECT_NEAR(approx_path_difference(s, 0), d * d / (2.0 * 10.0), 1e-15);

    // An antenna perpendicular to z' leaves only the d_t sin(beta) term
    s.beta = 0.3;
    s.U_rx = Rotation::axis_angle(e_x, std::numbers::pi / 2); // z -> -y
    EXPECT_NEAR(approx_path_difference(s, 0), d * std::sin(0.3), 1e-15);
}

TEST(Distances, ApproximationMatchesExactOnSquareArray)
{
    // 2 x 4 link with d_t = d_r = sqrt(R lambda / 2), broadside pair, random receive rotations
    const double d = std::sqrt(10.0 * 0.0042 / 2.0);
    auto s = scenario(make_layout(ArrayKind::ula, {2, d}), make_layout(ArrayKind::ura, {4, d}), 10.0, 0.0);
    Engine rng = make_stream(99);
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i)
    {
        s.U_rx = uniform_rotation(rng);
        const auto p = place_antennas(s);
        const auto r = exact_distances(p.tx, p.rx);
        for (std::size_t m = 0; m < 4; ++m)
            worst = std::max(worst, std::abs((r(m, 1) - r(m, 0)) - approx_path_difference(s, m)));
    }
    EXPECT_LT(worst, 1e-5);
}

TEST(Distances, ApproximationErrorShrinksWithDistance)
{
    const double d = 0.145;
    Engine rng = make_stream(3);
    std::vector<Rotation> rots;
    std::vector<double> betas;
    for (int i = 0; i < 500; ++i)
        rots.push_back(uniform_rotation(rng)), betas.push_back(uniform(rng, -0.5, 0.5));

    auto worst_at = [&](double R) {
        auto s = scenario(make_layout(ArrayKind::ula, {2, d}), make_layout(ArrayKind::tetrahedron, {0, 0.25}), R, 0.0);
        double w = 0.0;
        for (std::size_t i = 0; i < rots.size(); ++i)
        {
            s.U_rx = rots[i];
            s.beta = betas[i];
            const auto p = place_antennas(s);
            const auto r = exact_distances(p.tx, p.rx);
            for (std::size_t m = 0; m < 4; ++m)
                w = std::max(w, std::abs((r(m, 1) - r(m, 0)) - approx_path_difference(s, m)));
        }
        return w;
    };
    EXPECT_GT(worst_at(10.0) / worst_at(20.0), 1.9);
    EXPECT_GT(worst_at(20.0) / worst_at(40.0), 1.9);
}
