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

#ifndef LOSMIMO_DESIGN_HPP
#define LOSMIMO_DESIGN_HPP

#include "channel.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "orientation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace losmimo
{
    // ------------------------------------------------------------------------
    // Transmit pair selection

    struct TxPair
    {
        std::size_t m = 0, n = 1; // transmit antenna indices; m plays antenna 1 (the +t end)
        double beta = 0.0;        // arcsin(u^T t), t = unit vector from antenna n to antenna m
        double spacing = 0.0;     // |p_m - p_n|
        bool neighbouring = true; // adjacent vertices of the polygon
    };

    namespace detail
    {
        inline bool polygon_neighbours(std::size_t m, std::size_t n, std::size_t count)
        {
            const std::size_t d = m > n ? m - n : n - m;
            return d == 1 || d == count - 1;
        }

        inline TxPair make_pair(const ArrayLayout &layout, const Rotation &U_tx, const Vec3 &u, std::size_t m,
                                std::size_t n)
        {
            const Vec3 diff = U_tx.apply(layout[m].position() - layout[n].position());
            const double len = norm(diff);
            if (!(len > 0.0))
                throw geometry_error("Transmit antennas " + std::to_string(m) + " and " + std::to_string(n) +
                                     " coincide.");
            const double s = std::clamp(dot(u, (1.0 / len) * diff), -1.0, 1.0);
            return {m, n, std::asin(s), len, polygon_neighbours(m, n, layout.size())};
        }

        inline void check_selection_input(const ArrayLayout &layout, const Vec3 &u)
        {
            if (layout.size() < 3)
                throw std::invalid_argument("Pair selection needs a transmit array with at least 3 antennas.");
            if (std::abs(norm(u) - 1.0) > 1e-9)
                throw std::invalid_argument("Link direction must be a unit vector.");
        }

        // Pair with the smallest |u^T t| among those accepted by keep(m, n);
        // near-ties (1e-12) go to the lexicographically smallest pair.
        template <typename Keep>
        std::optional<TxPair> min_beta_pair(const ArrayLayout &layout, const Rotation &U_tx, const Vec3 &u, Keep keep)
        {
            std::optional<TxPair> best;
            double best_s = 2.0;
            for (std::size_t m = 0; m < layout.size(); ++m)
                for (std::size_t n = m + 1; n < layout.size(); ++n)
                {
                    if (!keep(m, n))
                        continue;
                    const TxPair p = make_pair(layout, U_tx, u, m, n);
                    const double s = std::abs(std::sin(p.beta));
                    if (s < best_s - 1e-12)
                        best = p, best_s = s;
                }
            return best;
        }
    }

    // Pair of transmit antennas whose axis is closest to perpendicular to the
    // link direction u (global frame).
    inline TxPair select_tx_pair(const ArrayLayout &layout, const Rotation &U_tx, const Vec3 &u)
    {
        detail::check_selection_input(layout, u);
        return *detail::min_beta_pair(layout, U_tx, u, [](std::size_t, std::size_t) { return true; });
    }

    // Pentagon selection aware of the receive correlation: the best-|beta|
    // neighbouring pair and the best-|beta| diagonal pair share the same
    // |beta| bound, so the class whose eta gives the lower mu* is used.
    // Other layouts fall back to select_tx_pair.
    inline TxPair select_tx_pair_for_link(const ArrayLayout &layout, const Rotation &U_tx, const Vec3 &u, double R,
                                          double lambda, double d_r, const MuStarCurve &curve)
    {
        detail::check_selection_input(layout, u);
        if (layout.kind() != ArrayKind::pentagon)
            return select_tx_pair(layout, U_tx, u);

        const std::size_t n = layout.size();
        const auto nb = detail::min_beta_pair(layout, U_tx, u,
                                              [n](std::size_t a, std::size_t b) { return detail::polygon_neighbours(a, b, n); });
        const auto dg = detail::min_beta_pair(layout, U_tx, u,
                                              [n](std::size_t a, std::size_t b) { return !detail::polygon_neighbours(a, b, n); });
        auto score = [&](const TxPair &p) { return curve.at(deviation_factor(R, p.spacing, d_r, p.beta, lambda)); };
        return score(*dg) < score(*nb) ? *dg : *nb;
    }

    // ------------------------------------------------------------------------
    // Distance-range design

    struct DesignSpec
    {
        double mu_max = 2.0 / 3.0;
        double lambda = 0.0;
        double d_t = 0.0; // polygon edge length
        double d_r = 0.0; // tetrahedron edge length
        ArrayKind tx_kind = ArrayKind::triangle;

        void validate() const
        {
            if (!(mu_max > 0.0 && mu_max < 1.0))
                throw config_error("mu_max must lie in (0, 1).");
            if (!(lambda > 0.0 && d_t > 0.0 && d_r > 0.0))
                throw config_error("lambda, d_t and d_r must be positive.");
            if (tx_kind != ArrayKind::triangle && tx_kind != ArrayKind::pentagon)
                throw config_error("Distance-range design supports triangle and pentagon transmit arrays.");
        }
    };

    struct DesignResult
    {
        double eta_min = 0.0, eta_max = 0.0;
        double R_min = 0.0, R_max = 0.0;
        double beta_max = 0.0;
        double mu_max = 0.0;
    };

    inline double beta_max_for(ArrayKind k)
    {
        switch (k)
        {
        case ArrayKind::triangle: return std::numbers::pi / 6.0;
        case ArrayKind::pentagon: return std::numbers::pi / 10.0;
        default: throw std::invalid_argument("beta_max is defined for triangle and pentagon arrays.");
        }
    }

    // Worst-case correlation seen by the given transmit array at deviation factor eta
    inline double design_curve(const MuStarCurve &curve, ArrayKind tx_kind, double eta)
    {
        return tx_kind == ArrayKind::pentagon ? curve.pent(eta) : curve.at(eta);
    }

    // Widest contiguous run of grid nodes with curve <= mu_max, with its ends
    // refined by bisection towards the neighbouring infeasible nodes.
    inline std::pair<double, double> eta_range(const DesignSpec &spec, const MuStarCurve &curve)
    {
        spec.validate();
        const auto &pts = curve.points();
        auto f = [&](double eta) { return design_curve(curve, spec.tx_kind, eta); };

        std::size_t best_lo = 0, best_len = 0;
        for (std::size_t i = 0; i < pts.size();)
        {
            if (f(pts[i].eta) > spec.mu_max)
            {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j + 1 < pts.size() && f(pts[j + 1].eta) <= spec.mu_max)
                ++j;
            if (j - i + 1 > best_len)
                best_lo = i, best_len = j - i + 1;
            i = j + 1;
        }
        if (best_len == 0)
        {
            std::ostringstream os;
            os << "No deviation factor on [" << curve.eta_lo() << ", " << curve.eta_hi() << "] reaches mu <= "
               << spec.mu_max << ".";
            throw infeasible_design(os.str());
        }

        // Bisection between a feasible point `in` and an infeasible point `out`;
        // returns the feasible end.
        auto refine = [&](double in, double out) {
            for (int k = 0; k < 60; ++k)
            {
                const double mid = 0.5 * (in + out);
                (f(mid) <= spec.mu_max ? in : out) = mid;
            }
            return in;
        };

        const std::size_t lo = best_lo, hi = best_lo + best_len - 1;
        const double eta_min = lo == 0 ? pts[lo].eta : refine(pts[lo].eta, pts[lo - 1].eta);
        const double eta_max = hi + 1 == pts.size() ? pts[hi].eta : refine(pts[hi].eta, pts[hi + 1].eta);
        return {eta_min, eta_max};
    }

    // R_min = eta_min 2 d_t d_r / lambda,  R_max = eta_max 2 d_t d_r cos(beta_max) / lambda
    inline DesignResult distance_range(double eta_min, double eta_max, const DesignSpec &spec)
    {
        spec.validate();
        DesignResult r;
        r.eta_min = eta_min;
        r.eta_max = eta_max;
        r.beta_max = beta_max_for(spec.tx_kind);
        r.mu_max = spec.mu_max;
        const double base = 2.0 * spec.d_t * spec.d_r / spec.lambda;
        r.R_min = eta_min * base;
        r.R_max = eta_max * base * std::cos(r.beta_max);
        if (!(r.R_min < r.R_max))
        {
            std::ostringstream os;
            os << "Design is infeasible: R_min = " << r.R_min << " m is not below R_max = " << r.R_max << " m.";
            throw infeasible_design(os.str());
        }
        return r;
    }

    inline DesignResult design(const DesignSpec &spec, const MuStarCurve &curve)
    {
        const auto [lo, hi] = eta_range(spec, curve);
        return distance_range(lo, hi, spec);
    }
}

#endif
