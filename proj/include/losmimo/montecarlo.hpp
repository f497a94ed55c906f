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

#ifndef LOSMIMO_MONTECARLO_HPP
#define LOSMIMO_MONTECARLO_HPP

#include "channel.hpp"
#include "codes.hpp"
#include "design.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "metrics.hpp"
#include "orientation.hpp"
#include "parallel.hpp"
#include "random.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace losmimo
{
    // ------------------------------------------------------------------------
    // ML decoding

    // Exhaustive ML decoder over a codebook. For a fixed channel,
    //   |Y - sqrt(snr) H X|^2 = const + snr sum_t x_t^H G x_t - 2 sqrt(snr) Re sum_t z_t^H x_t
    // with G = H^H H and Z = H^H Y; the quadratic term is cached per channel.
    class MlDecoder
    {
    public:
        explicit MlDecoder(const Codebook &cb) : cb_(&cb), quad_(cb.size()) {}

        void set_channel(const CMatrix &H, double snr)
        {
            if (H.cols() != 2)
                throw std::invalid_argument("ML decoding expects an n_r x 2 channel.");
            if (!(snr >= 0.0))
                throw std::invalid_argument("SNR must be non-negative.");
            H_ = &H;
            snr_ = snr;
            sqrt_snr_ = std::sqrt(snr);
            const auto h1 = H.col(0), h2 = H.col(1);
            const double g11 = norm_sq(h1), g22 = norm_sq(h2);
            const cdouble g12 = inner(h1, h2);
            for (std::size_t k = 0; k < cb_->size(); ++k)
            {
                const CMatrix &X = cb_->codewords[k];
                double q = 0.0;
                for (std::size_t t = 0; t < X.cols(); ++t)
                {
                    const cdouble a = X(0, t), b = X(1, t);
                    q += g11 * std::norm(a) + g22 * std::norm(b) + 2.0 * std::real(std::conj(a) * g12 * b);
                }
                quad_[k] = q;
            }
        }

        // Index of the minimum-metric codeword; the lowest index wins ties
        std::size_t decode(const CMatrix &Y) const
        {
            if (!H_)
                throw std::logic_error("MlDecoder::decode called before set_channel.");
            const CMatrix &H = *H_;
            if (Y.rows() != H.rows() || Y.cols() != cb_->T)
                throw std::invalid_argument("Received block has the wrong dimensions.");

            z_.assign(2 * Y.cols(), 0.0);
            for (std::size_t t = 0; t < Y.cols(); ++t)
                for (std::size_t m = 0; m < H.rows(); ++m)
                {
                    z_[2 * t] += std::conj(H(m, 0)) * Y(m, t);
                    z_[2 * t + 1] += std::conj(H(m, 1)) * Y(m, t);
                }

            std::size_t best = 0;
            double best_metric = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < cb_->size(); ++k)
            {
                const CMatrix &X = cb_->codewords[k];
                double corr = 0.0;
                for (std::size_t t = 0; t < X.cols(); ++t)
                    corr += std::real(std::conj(z_[2 * t]) * X(0, t) + std::conj(z_[2 * t + 1]) * X(1, t));
                const double metric = snr_ * quad_[k] - 2.0 * sqrt_snr_ * corr;
                if (metric < best_metric)
                    best_metric = metric, best = k;
            }
            return best;
        }

    private:
        const Codebook *cb_;
        const CMatrix *H_ = nullptr;
        double snr_ = 0.0, sqrt_snr_ = 0.0;
        std::vector<double> quad_;
        mutable std::vector<cdouble> z_;
    };

    struct Decision
    {
        std::size_t index = 0;
        std::string bits;
    };

    inline Decision ml_decode(const CMatrix &H, const CMatrix &Y, double snr, const Codebook &cb)
    {
        MlDecoder dec(cb);
        dec.set_channel(H, snr);
        const std::size_t k = dec.decode(Y);
        return {k, cb.decode(k)};
    }

    // ------------------------------------------------------------------------
    // Random link geometry

    struct SystemConfig
    {
        ArrayKind tx_kind = ArrayKind::ula;
        double d_t = 0.06;
        ArrayKind rx_kind = ArrayKind::ura;
        LayoutParams rx{4, 0.25, 0, 0, std::nullopt};
        double lambda = 0.0042;
        double R_min = 4.43; // R ~ uniform [R_min, R_max]; equal ends fix R
        double R_max = 12.7;
        bool rotate_tx = true;
        bool rotate_rx = true;

        void validate() const
        {
            if (!(lambda > 0.0 && d_t > 0.0 && rx.spacing > 0.0))
                throw config_error("lambda, d_t and the receive spacing must be positive.");
            if (!(R_min > 0.0 && R_max >= R_min))
                throw config_error("Distance law needs 0 < R_min <= R_max.");
            if (tx_kind != ArrayKind::ula && tx_kind != ArrayKind::triangle && tx_kind != ArrayKind::pentagon)
                throw config_error("Transmit array must be ula, triangle or pentagon.");
        }
    };

    // Draws random channels for a SystemConfig. The transmit centroid sits at
    // the origin, the receive centroid at R e_x; both arrays rotate about their
    // centroids. Triangle and pentagon transmitters select a pair per draw.
    class LinkSampler
    {
    public:
        explicit LinkSampler(const SystemConfig &cfg, std::shared_ptr<const MuStarCurve> curve = nullptr)
            : cfg_(cfg), curve_(std::move(curve))
        {
            cfg_.validate();
            tx_ = make_layout(cfg.tx_kind, LayoutParams{cfg.tx_kind == ArrayKind::ula ? 2u : 0u, cfg.d_t, 0, 0, {}});
            rx_ = make_layout(cfg.rx_kind, cfg.rx);
            if (cfg.tx_kind == ArrayKind::pentagon && cfg.rx_kind == ArrayKind::tetrahedron && !curve_)
                curve_ = std::make_shared<const MuStarCurve>(MuStarCurve::build());
            if (cfg.rx_kind != ArrayKind::tetrahedron)
                curve_.reset();
        }

        const ArrayLayout &tx_layout() const { return tx_; }
        const ArrayLayout &rx_layout() const { return rx_; }
        std::size_t n_r() const { return rx_.size(); }

        // Consumes the stream in a fixed order: U_tx, U_rx, R.
        void draw(Engine &rng, CMatrix &H) const
        {
            const Rotation U_tx = cfg_.rotate_tx ? uniform_rotation(rng) : Rotation::identity();
            const Rotation U_rx = cfg_.rotate_rx ? uniform_rotation(rng) : Rotation::identity();
            const double R = cfg_.R_max > cfg_.R_min ? uniform(rng, cfg_.R_min, cfg_.R_max) : cfg_.R_min;

            std::size_t a = 0, b = 1;
            if (tx_.size() > 2)
            {
                const TxPair p = curve_ ? select_tx_pair_for_link(tx_, U_tx, e_x, R, cfg_.lambda, cfg_.rx.spacing, *curve_)
                                        : select_tx_pair(tx_, U_tx, e_x);
                a = p.m, b = p.n;
            }
            const std::array<Vec3, 2> tx{U_tx.apply(tx_[a].position()), U_tx.apply(tx_[b].position())};

            if (H.rows() != rx_.size() || H.cols() != 2)
                H = CMatrix(rx_.size(), 2);
            const Vec3 c = R * e_x;
            for (std::size_t m = 0; m < rx_.size(); ++m)
            {
                const Vec3 p = c + rx_[m].radius * U_rx.apply(rx_[m].direction);
                for (std::size_t n = 0; n < 2; ++n)
                {
                    const double r = distance(p, tx[n]);
                    if (!(r > 0.0))
                        throw geometry_error("A transmit antenna coincides with receive antenna " + std::to_string(m) + ".");
                    H(m, n) = los_gain(r, cfg_.lambda);
                }
            }
        }

    private:
        SystemConfig cfg_;
        std::shared_ptr<const MuStarCurve> curve_;
        ArrayLayout tx_, rx_;
    };

    // Unit-modulus orthogonal columns: h1 = 1, h2 = DFT column 1
    inline CMatrix ideal_channel(std::size_t n_r)
    {
        CMatrix H(n_r, 2);
        for (std::size_t m = 0; m < n_r; ++m)
        {
            H(m, 0) = 1.0;
            H(m, 1) = std::polar(1.0, two_pi * double(m) / double(n_r));
        }
        return H;
    }

    // ------------------------------------------------------------------------
    // BER campaigns

    struct SimConfig
    {
        SystemConfig system;
        Scheme scheme = Scheme::sm;
        bool ideal = false; // replace the geometric channel by ideal_channel(n_r)
        std::vector<double> snr_db;
        std::uint64_t max_trials = 200'000;
        std::uint64_t target_errors = 200;
        std::uint64_t block_size = 4096;
        std::uint64_t seed = 1;
        std::size_t workers = 1;

        void validate() const
        {
            system.validate();
            if (snr_db.empty() || !std::is_sorted(snr_db.begin(), snr_db.end()))
                throw config_error("SNR grid must be non-empty and sorted.");
            if (max_trials == 0 || target_errors == 0 || block_size == 0)
                throw config_error("Trial budget, error target and block size must be positive.");
        }
    };

    struct BerPoint
    {
        double snr_db = 0.0;
        std::uint64_t trials = 0;
        std::uint64_t bit_errors = 0;
        std::uint64_t bits = 0;
        double ber = 0.0;
        double ci_low = 0.0;
        double ci_high = 1.0;
    };

    using BerCurve = std::vector<BerPoint>;

    // Two-sided Clopper-Pearson interval for k successes in n trials
    inline std::pair<double, double> clopper_pearson(std::uint64_t k, std::uint64_t n, double confidence = 0.95)
    {
        if (n == 0)
            return {0.0, 1.0};
        const double a = 0.5 * (1.0 - confidence);
        const double kk = double(k), nn = double(n);
        const double lo = k == 0 ? 0.0 : boost::math::ibeta_inv(kk, nn - kk + 1.0, a);
        const double hi = k == n ? 1.0 : boost::math::ibeta_inv(kk + 1.0, nn - kk, 1.0 - a);
        return {lo, hi};
    }

    namespace detail
    {
        struct BlockResult
        {
            std::uint64_t trials = 0;
            std::uint64_t errors = 0;
        };

        inline BlockResult run_block(const SimConfig &cfg, const LinkSampler &link, const Codebook &cb, double snr,
                                     std::size_t snr_index, std::uint64_t block, std::uint64_t trials)
        {
            Engine rng = make_stream(cfg.seed, {snr_index, block});
            MlDecoder dec(cb);
            const std::size_t n_r = link.n_r();
            CMatrix H = cfg.ideal ? ideal_channel(n_r) : CMatrix(n_r, 2);
            CMatrix Y(n_r, cb.T);
            const double a = std::sqrt(snr);
            const unsigned shift = 64U - cb.bits;

            if (cfg.ideal)
                dec.set_channel(H, snr);
            BlockResult r;
            for (std::uint64_t i = 0; i < trials; ++i)
            {
                if (!cfg.ideal)
                {
                    link.draw(rng, H);
                    dec.set_channel(H, snr);
                }
                const std::size_t k = static_cast<std::size_t>(rng() >> shift);
                const CMatrix &X = cb.codewords[k];
                for (std::size_t m = 0; m < n_r; ++m)
                    for (std::size_t t = 0; t < cb.T; ++t)
                        Y(m, t) = a * (H(m, 0) * X(0, t) + H(m, 1) * X(1, t)) + complex_normal(rng);
                const std::size_t k_hat = dec.decode(Y);
                r.errors += static_cast<std::uint64_t>(std::popcount(static_cast<std::uint64_t>(k ^ k_hat)));
                ++r.trials;
            }
            return r;
        }
    }

    // Each SNR point runs fixed-size trial blocks whose random streams depend
    // only on (seed, SNR index, block index). Blocks are accumulated in index
    // order and the point stops after the first block that reaches the error
    // target or the trial budget, so results do not depend on the worker count.
    inline BerCurve run_ber(const SimConfig &cfg, std::shared_ptr<const MuStarCurve> curve = nullptr)
    {
        cfg.validate();
        const Codebook cb = make_codebook(cfg.scheme);
        const LinkSampler link(cfg.system, std::move(curve));
        const std::size_t workers = std::max<std::size_t>(1, cfg.workers);

        BerCurve out;
        for (std::size_t s = 0; s < cfg.snr_db.size(); ++s)
        {
            const double snr = db_to_linear(cfg.snr_db[s]);
            const std::uint64_t n_blocks = (cfg.max_trials + cfg.block_size - 1) / cfg.block_size;
            BerPoint pt;
            pt.snr_db = cfg.snr_db[s];
            bool done = false;
            for (std::uint64_t first = 0; first < n_blocks && !done; first += workers)
            {
                const std::size_t batch = static_cast<std::size_t>(std::min<std::uint64_t>(workers, n_blocks - first));
                std::vector<detail::BlockResult> res(batch);
                parallel_for(batch, workers, [&](std::size_t j) {
                    const std::uint64_t b = first + j;
                    const std::uint64_t n = std::min(cfg.block_size, cfg.max_trials - b * cfg.block_size);
                    res[j] = detail::run_block(cfg, link, cb, snr, s, b, n);
                });
                for (const auto &r : res)
                {
                    pt.trials += r.trials;
                    pt.bit_errors += r.errors;
                    if (pt.bit_errors >= cfg.target_errors)
                    {
                        done = true;
                        break;
                    }
                }
            }
            pt.bits = pt.trials * cb.bits;
            pt.ber = double(pt.bit_errors) / double(pt.bits);
            std::tie(pt.ci_low, pt.ci_high) = clopper_pearson(pt.bit_errors, pt.bits);
            out.push_back(pt);
        }
        return out;
    }

    // Bit error rate of Gray 4-QAM spatial multiplexing over an ideal channel
    // with orthogonal columns of norm sqrt(n_r): Q(sqrt(snr n_r / 2))
    inline double ideal_qam4_ber(double snr, std::size_t n_r)
    {
        return q_function(std::sqrt(0.5 * snr * double(n_r)));
    }

    // Least-squares slope of log10(BER) against SNR/10 over points with
    // lo <= snr_db <= hi and at least one error
    inline double loglog_slope(const BerCurve &c, double lo_db, double hi_db)
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::size_t n = 0;
        for (const auto &p : c)
            if (p.snr_db >= lo_db - 1e-9 && p.snr_db <= hi_db + 1e-9 && p.bit_errors > 0)
            {
                const double x = p.snr_db / 10.0, y = std::log10(p.ber);
                sx += x, sy += y, sxx += x * x, sxy += x * y, ++n;
            }
        if (n < 2)
            throw std::domain_error("Slope fit needs two points with errors.");
        return (double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
    }

    // SNR (dB) where the curve first falls to `target`, by log-linear
    // interpolation between neighbouring points
    inline std::optional<double> snr_at_ber(const BerCurve &c, double target)
    {
        for (std::size_t i = 1; i < c.size(); ++i)
        {
            const auto &a = c[i - 1], &b = c[i];
            if (a.ber >= target && b.ber <= target && a.ber > 0.0)
            {
                if (b.ber <= 0.0)
                    return b.snr_db;
                const double la = std::log10(a.ber), lb = std::log10(b.ber), lt = std::log10(target);
                if (la == lb)
                    return a.snr_db;
                return a.snr_db + (la - lt) / (la - lb) * (b.snr_db - a.snr_db);
            }
        }
        return std::nullopt;
    }

    // ------------------------------------------------------------------------
    // Joint density of (theta_mu, mu)

    struct DensityConfig
    {
        SystemConfig system;
        std::size_t theta_bins = 25;
        std::size_t mu_bins = 25;
        std::uint64_t samples = 1'000'000;
        std::uint64_t block_size = 1 << 16;
        std::uint64_t seed = 1;
        std::size_t workers = 1;

        void validate() const
        {
            system.validate();
            if (theta_bins < 5 || mu_bins < 5)
                throw config_error("Density grid needs at least 5 x 5 bins.");
            if (samples == 0 || block_size == 0)
                throw config_error("Density sample count must be positive.");
        }
    };

    // Counts indexed [mu_bin][theta_bin]; theta in [0, 2 pi), mu in [0, 1]
    struct DensityGrid
    {
        std::size_t theta_bins = 0, mu_bins = 0;
        std::uint64_t samples = 0;
        std::vector<std::uint64_t> counts;

        std::uint64_t count(std::size_t mu_bin, std::size_t theta_bin) const { return counts[mu_bin * theta_bins + theta_bin]; }
        double theta_width() const { return two_pi / double(theta_bins); }
        double mu_width() const { return 1.0 / double(mu_bins); }
        double theta_center(std::size_t j) const { return (double(j) + 0.5) * theta_width(); }
        double mu_center(std::size_t i) const { return (double(i) + 0.5) * mu_width(); }
        double density(std::size_t mu_bin, std::size_t theta_bin) const
        {
            return double(count(mu_bin, theta_bin)) / (double(samples) * theta_width() * mu_width());
        }
        std::uint64_t row_total(std::size_t mu_bin) const
        {
            std::uint64_t s = 0;
            for (std::size_t j = 0; j < theta_bins; ++j)
                s += count(mu_bin, j);
            return s;
        }

        void add(double theta, double mu)
        {
            const auto tj = std::min(theta_bins - 1, static_cast<std::size_t>(theta / theta_width()));
            const auto mi = std::min(mu_bins - 1, static_cast<std::size_t>(mu / mu_width()));
            ++counts[mi * theta_bins + tj];
            ++samples;
        }
    };

    inline DensityGrid joint_density(const DensityConfig &cfg)
    {
        cfg.validate();
        const LinkSampler link(cfg.system);
        const std::uint64_t n_blocks = (cfg.samples + cfg.block_size - 1) / cfg.block_size;
        std::vector<DensityGrid> parts(n_blocks);
        parallel_for(n_blocks, std::max<std::size_t>(1, cfg.workers), [&](std::size_t b) {
            DensityGrid g{cfg.theta_bins, cfg.mu_bins, 0, std::vector<std::uint64_t>(cfg.theta_bins * cfg.mu_bins, 0)};
            Engine rng = make_stream(cfg.seed, {0x64656e73ULL, b});
            CMatrix H;
            const std::uint64_t n = std::min(cfg.block_size, cfg.samples - b * cfg.block_size);
            for (std::uint64_t i = 0; i < n; ++i)
            {
                link.draw(rng, H);
                const auto red = reduce(H);
                g.add(red.theta_mu, red.mu);
            }
            parts[b] = std::move(g);
        });

        DensityGrid total{cfg.theta_bins, cfg.mu_bins, 0, std::vector<std::uint64_t>(cfg.theta_bins * cfg.mu_bins, 0)};
        for (const auto &p : parts)
        {
            total.samples += p.samples;
            for (std::size_t i = 0; i < p.counts.size(); ++i)
                total.counts[i] += p.counts[i];
        }
        return total;
    }

    struct RowFlatness
    {
        std::size_t mu_bin = 0;
        std::uint64_t samples = 0;
        double chi2 = 0.0;
        double p_value = 1.0;
    };

    // Pearson chi-square test of uniformity across theta for every mu row
    // with at least min_samples samples
    inline std::vector<RowFlatness> theta_flatness(const DensityGrid &g, std::uint64_t min_samples = 1000)
    {
        std::vector<RowFlatness> out;
        const double df = double(g.theta_bins - 1);
        for (std::size_t i = 0; i < g.mu_bins; ++i)
        {
            const std::uint64_t n = g.row_total(i);
            if (n < min_samples)
                continue;
            const double e = double(n) / double(g.theta_bins);
            double chi2 = 0.0;
            for (std::size_t j = 0; j < g.theta_bins; ++j)
            {
                const double d = double(g.count(i, j)) - e;
                chi2 += d * d / e;
            }
            out.push_back({i, n, chi2, boost::math::gamma_q(0.5 * df, 0.5 * chi2)});
        }
        return out;
    }

    // ------------------------------------------------------------------------
    // CSV output

    namespace detail
    {
        inline std::ofstream open_csv(const std::filesystem::path &p)
        {
            if (p.has_parent_path())
                std::filesystem::create_directories(p.parent_path());
            std::ofstream f(p, std::ios::binary);
            if (!f)
                throw std::runtime_error("Cannot write '" + p.string() + "'.");
            return f;
        }

        inline std::string num(double v)
        {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.10g", v);
            return buf;
        }
    }

    inline void write_ber_csv(const std::filesystem::path &p, const BerCurve &c)
    {
        auto f = detail::open_csv(p);
        f << "snr_db,trials,bit_errors,ber,ci_low,ci_high\n";
        for (const auto &pt : c)
            f << detail::num(pt.snr_db) << ',' << pt.trials << ',' << pt.bit_errors << ',' << detail::num(pt.ber) << ','
              << detail::num(pt.ci_low) << ',' << detail::num(pt.ci_high) << '\n';
    }

    inline void write_density_csv(const std::filesystem::path &p, const DensityGrid &g)
    {
        auto f = detail::open_csv(p);
        f << "theta_bin_center,mu_bin_center,density\n";
        for (std::size_t i = 0; i < g.mu_bins; ++i)
            for (std::size_t j = 0; j < g.theta_bins; ++j)
                f << detail::num(g.theta_center(j)) << ',' << detail::num(g.mu_center(i)) << ','
                  << detail::num(g.density(i, j)) << '\n';
    }
}

#endif
