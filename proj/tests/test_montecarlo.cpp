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


#include "losmimo/montecarlo.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>

using namespace losmimo;

namespace
{
    CMatrix random_unit_modulus(Engine &rng, std::size_t n_r)
    {
        CMatrix H(n_r, 2);
        for (auto &h : H.data())
            h = std::polar(1.0, uniform(rng, 0.0, two_pi));
        return H;
    }

    std::size_t brute_force_ml(const CMatrix &H, const CMatrix &Y, double snr, const Codebook &cb)
    {
        std::size_t best = 0;
        double best_d = 1e300;
        for (std::size_t k = 0; k < cb.size(); ++k)
        {
            CMatrix S = H * cb.codewords[k];
            S *= cdouble(std::sqrt(snr));
            const double d = frobenius_norm_sq(Y - S);
            if (d < best_d)
                best_d = d, best = k;
        }
        return best;
    }

    SimConfig small_config(Scheme s, std::vector<double> snr)
    {
        SimConfig c;
        c.scheme = s;
        c.snr_db = std::move(snr);
        c.max_trials = 20'000;
        c.block_size = 1024;
        c.seed = 99;
        return c;
    }

    std::string slurp(const std::filesystem::path &p)
    {
        std::ifstream f(p, std::ios::binary);
        return {std::istreambuf_iterator<char>(f), {}};
    }
}

TEST(MlDecoder, NoiselessRecoversEveryCodeword)
{
    Engine rng = make_stream(61);
    for (Scheme s : {Scheme::sm, Scheme::golden, Scheme::simo})
    {
        const auto cb = make_codebook(s);
        const auto H = random_unit_modulus(rng, 4);
        const double snr = 10.0;
        MlDecoder dec(cb);
        dec.set_channel(H, snr);
        for (std::size_t k = 0; k < cb.size(); ++k)
        {
            CMatrix Y = H * cb.codewords[k];
            Y *= cdouble(std::sqrt(snr));
            EXPECT_EQ(dec.decode(Y), k) << to_string(s);
        }
    }
}

TEST(MlDecoder, MatchesBruteForceMetric)
{
    Engine rng = make_stream(62);
    for (Scheme s : {Scheme::sm, Scheme::golden})
    {
        const auto cb = make_codebook(s);
        for (int i = 0; i < 200; ++i)
        {
            const auto H = random_unit_modulus(rng, 4);
            const double snr = db_to_linear(uniform(rng, -3.0, 15.0));
            CMatrix Y(4, cb.T);
            for (auto &y : Y.data())
                y = complex_normal(rng, 4.0);
            const auto d = ml_decode(H, Y, snr, cb);
            EXPECT_EQ(d.index, brute_force_ml(H, Y, snr, cb));
            EXPECT_EQ(d.bits, cb.decode(d.index));
        }
    }
}

TEST(MlDecoder, ZeroChannelAndErrors)
{
    const auto cb = make_codebook(Scheme::sm);
    EXPECT_EQ(ml_decode(CMatrix(4, 2), CMatrix(4, 1, 1.0), 10.0, cb).index, 0u);
    EXPECT_THROW(ml_decode(CMatrix(4, 3), CMatrix(4, 1), 10.0, cb), std::invalid_argument);
    EXPECT_THROW(ml_decode(CMatrix(4, 2), CMatrix(3, 1), 10.0, cb), std::invalid_argument);
    MlDecoder dec(cb);
    EXPECT_THROW(dec.decode(CMatrix(4, 1)), std::logic_error);
}

TEST(ClopperPearson, References)
{
    auto [lo, hi] = clopper_pearson(0, 10);
    EXPECT_EQ(lo, 0.0);
    EXPECT_NEAR(hi, 0.3084971078187608, 1e-12);
    std::tie(lo, hi) = clopper_pearson(5, 10);
    EXPECT_NEAR(lo, 0.18708602844739855, 1e-12);
    EXPECT_NEAR(hi, 0.8129139715526015, 1e-12);
    std::tie(lo, hi) = clopper_pearson(10, 10);
    EXPECT_EQ(hi, 1.0);
    std::tie(lo, hi) = clopper_pearson(0, 0);
    EXPECT_EQ(lo, 0.0);
    EXPECT_EQ(hi, 1.0);
}

TEST(IdealChannel, OrthogonalColumns)
{
    for (std::size_t n_r : {2u, 4u})
    {
        const auto r = reduce(ideal_channel(n_r));
        EXPECT_NEAR(r.mu, 0.0, 1e-15);
        EXPECT_NEAR(r.R(0, 0).real(), std::sqrt(double(n_r)), 1e-15);
        EXPECT_NEAR(r.R(1, 1).real(), std::sqrt(double(n_r)), 1e-15);
    }
}

TEST(RunBer, IdealModeMatchesAnalyticCurve)
{
    auto cfg = small_config(Scheme::sm, {0.0, 2.0, 4.0, 6.0});
    cfg.ideal = true;
    cfg.max_trials = 100'000;
    cfg.target_errors = 1'000'000;
    const auto curve = run_ber(cfg);
    for (const auto &p : curve)
    {
        const double ref = ideal_qam4_ber(db_to_linear(p.snr_db), 4);
        const double sigma = std::sqrt(ref * (1.0 - ref) / double(p.bits));
        EXPECT_EQ(p.trials, 100'000u);
        EXPECT_LE(std::abs(p.ber - ref), 3.0 * sigma) << p.snr_db << " dB";
        EXPECT_LE(p.ci_low, p.ber);
        EXPECT_GE(p.ci_high, p.ber);
    }
}

TEST(RunBer, StopsAtErrorTarget)
{
    auto cfg = small_config(Scheme::sm, {0.0, 30.0});
    cfg.target_errors = 50;
    const auto c = run_ber(cfg);
    EXPECT_GE(c[0].bit_errors, 50u);
    EXPECT_EQ(c[0].trials % cfg.block_size, 0u);
    EXPECT_LT(c[0].trials, cfg.max_trials);
    EXPECT_EQ(c[1].trials, cfg.max_trials);
    EXPECT_EQ(c[0].bits, c[0].trials * 4);
    EXPECT_LE(c[1].bit_errors, c[1].bits);
}

TEST(RunBer, Deterministic)
{
    auto cfg = small_config(Scheme::golden, {4.0, 8.0});
    const auto a = run_ber(cfg);
    const auto b = run_ber(cfg);
    cfg.workers = 3;
    const auto c = run_ber(cfg);
    ASSERT_EQ(a.size(), c.size());
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        EXPECT_EQ(a[i].trials, b[i].trials);
        EXPECT_EQ(a[i].bit_errors, b[i].bit_errors);
        EXPECT_EQ(a[i].trials, c[i].trials);
        EXPECT_EQ(a[i].bit_errors, c[i].bit_errors);
    }
    cfg.seed = 100;
    const auto d = run_ber(cfg);
    EXPECT_NE(a[0].bit_errors, d[0].bit_errors);
}

TEST(RunBer, SimoIndependentOfReceiveGeometry)
{
    auto cfg = small_config(Scheme::simo, {10.0});
    cfg.max_trials = 40'000;
    cfg.target_errors = 1'000'000;
    const auto ura = run_ber(cfg);
    cfg.system.rx_kind = ArrayKind::tetrahedron;
    cfg.system.rx = {0, 0.25, 0, 0, std::nullopt};
    cfg.seed = 7;
    const auto tet = run_ber(cfg);
    EXPECT_LE(ura[0].ci_low, tet[0].ci_high);
    EXPECT_LE(tet[0].ci_low, ura[0].ci_high);
}

TEST(RunBer, ConfigValidation)
{
    auto cfg = small_config(Scheme::sm, {8.0, 4.0});
    EXPECT_THROW(run_ber(cfg), config_error);
    cfg = small_config(Scheme::sm, {});
    EXPECT_THROW(run_ber(cfg), config_error);
    cfg = small_config(Scheme::sm, {0.0});
    cfg.system.R_min = 5.0;
    cfg.system.R_max = 4.0;
    EXPECT_THROW(run_ber(cfg), config_error);
    cfg = small_config(Scheme::sm, {0.0});
    cfg.system.tx_kind = ArrayKind::tetrahedron;
    EXPECT_THROW(run_ber(cfg), config_error);
}

TEST(LinkSampler, FixedGeometryUsesExactDistances)
{
    SystemConfig s;
    s.rotate_tx = s.rotate_rx = false;
    s.R_min = s.R_max = 10.0;
    const LinkSampler link(s);
    Engine rng = make_stream(63);
    CMatrix H;
    link.draw(rng, H);
    ASSERT_EQ(H.rows(), 4u);
    const Vec3 tx[2] = {{0, 0, 0.03}, {0, 0, -0.03}};
    for (std::size_t m = 0; m < 4; ++m)
        for (std::size_t n = 0; n < 2; ++n)
        {
            const Vec3 p = Vec3{10.0, 0, 0} + link.rx_layout()[m].position();
            EXPECT_NEAR(std::abs(H(m, n) - los_gain(distance(p, tx[n]), s.lambda)), 0.0, 1e-9);
        }
}

TEST(LinkSampler, SelectedPairKeepsCorrelationBounded)
{
    // Triangle x tetrahedron over the triangle design range
    SystemConfig s;
    s.tx_kind = ArrayKind::triangle;
    s.rx_kind = ArrayKind::tetrahedron;
    s.rx = {0, 0.25, 0, 0, std::nullopt};
    s.R_min = 4.6;
    s.R_max = 7.4;
    const LinkSampler link(s);
    Engine rng = make_stream(64);
    CMatrix H;
    double worst = 0.0;
    for (int i = 0; i < 5000; ++i)
    {
        link.draw(rng, H);
        worst = std::max(worst, reduce(H).mu);
    }
    EXPECT_LE(worst, 2.0 / 3.0 + 0.02);
}

TEST(BerCurveTools, SlopeAndCrossing)
{
    BerCurve c;
    for (double s = 0; s <= 30; s += 5)
    {
        BerPoint p;
        p.snr_db = s;
        p.bit_errors = 10;
        p.ber = std::pow(10.0, -3.0 * s / 10.0);
        c.push_back(p);
    }
    EXPECT_NEAR(loglog_slope(c, 10, 30), -3.0, 1e-12);
    EXPECT_NEAR(*snr_at_ber(c, 1e-3), 10.0, 1e-12);
    EXPECT_NEAR(*snr_at_ber(c, std::pow(10.0, -0.75)), 2.5, 1e-12);
    EXPECT_FALSE(snr_at_ber(c, 1e-30).has_value());
    EXPECT_THROW(loglog_slope(c, 31, 40), std::domain_error);
}

TEST(Density, CountsAndDegenerateCase)
{
    DensityConfig d;
    d.system.tx_kind = ArrayKind::ula;
    d.system.rx_kind = ArrayKind::ula;
    d.system.rx = {2, 0.145, 0, 0, std::nullopt};
    d.system.d_t = 0.145;
    d.system.R_min = d.system.R_max = 10.0;
    d.theta_bins = d.mu_bins = 5;
    d.samples = 10'000;
    d.block_size = 4096;
    const auto g = joint_density(d);
    EXPECT_EQ(g.samples, 10'000u);
    std::uint64_t total = 0;
    double integral = 0.0;
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j)
            total += g.count(i, j), integral += g.density(i, j) * g.theta_width() * g.mu_width();
    EXPECT_EQ(total, 10'000u);
    EXPECT_NEAR(integral, 1.0, 1e-12);

    d.system.rotate_tx = d.system.rotate_rx = false;
    const auto fixed = joint_density(d);
    EXPECT_EQ(std::count_if(fixed.counts.begin(), fixed.counts.end(), [](auto c) { return c > 0; }), 1);

    d.system.rotate_tx = d.system.rotate_rx = true;
    d.workers = 2;
    EXPECT_EQ(joint_density(d).counts, g.counts);
    d.theta_bins = 4;
    EXPECT_THROW(joint_density(d), config_error);
}

TEST(Density, FlatnessStatistic)
{
    DensityGrid g{4, 2, 0, std::vector<std::uint64_t>(8, 0)};
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 500; ++k)
            g.add(g.theta_center(j), 0.1);
    for (int k = 0; k < 10; ++k)
        g.add(0.1, 0.9);
    auto f = theta_flatness(g);
    ASSERT_EQ(f.size(), 1u);
    EXPECT_EQ(f[0].mu_bin, 0u);
    EXPECT_EQ(f[0].chi2, 0.0);
    EXPECT_NEAR(f[0].p_value, 1.0, 1e-12);

    DensityGrid h{25, 1, 0, std::vector<std::uint64_t>(25, 0)};
    for (int j = 0; j < 25; ++j)
        for (int k = 0; k < 100; ++k)
            h.add(h.theta_center(j), 0.5);
    h.counts[0] += 15, h.counts[1] -= 15, h.counts[2] += 15, h.counts[3] -= 15;
    h.counts[4] += 15, h.counts[5] -= 15, h.counts[6] += 15, h.counts[7] -= 15;
    h.counts[8] += 15, h.counts[9] -= 15;
    f = theta_flatness(h);
    ASSERT_EQ(f.size(), 1u);
    EXPECT_NEAR(f[0].chi2, 22.5, 1e-12);
    EXPECT_NEAR(f[0].p_value, boost::math::gamma_q(12.0, 11.25), 1e-15);
}

TEST(Csv, WritersProduceHeaderAndRows)
{
    const auto dir = std::filesystem::temp_directory_path() / "losmimo_csv_test";
    std::filesystem::remove_all(dir);
    BerCurve c(3);
    write_ber_csv(dir / "sub" / "ber.csv", c);
    const auto s = slurp(dir / "sub" / "ber.csv");
    EXPECT_EQ(s.rfind("snr_db,trials,bit_errors,ber,ci_low,ci_high\n", 0), 0u);
    EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 4);

    DensityGrid g{5, 5, 1, std::vector<std::uint64_t>(25, 0)};
    g.counts[0] = 1;
    write_density_csv(dir / "d.csv", g);
    const auto t = slurp(dir / "d.csv");
    EXPECT_EQ(t.rfind("theta_bin_center,mu_bin_center,density\n", 0), 0u);
    EXPECT_EQ(std::count(t.begin(), t.end(), '\n'), 26);
    std::filesystem::remove_all(dir);
}
