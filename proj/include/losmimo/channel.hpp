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

#ifndef LOSMIMO_CHANNEL_HPP
#define LOSMIMO_CHANNEL_HPP

#include "geometry.hpp"
#include "matrix.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

namespace losmimo
{
    inline constexpr double two_pi = 2.0 * std::numbers::pi;

    // Angle reduced to [0, 2 pi)
    inline double wrap_2pi(double a)
    {
        double w = std::fmod(a, two_pi);
        if (w < 0.0)
            w += two_pi;
        return w >= two_pi ? 0.0 : w;
    }

    // Unit-modulus pure phase exp(i 2 pi r / lambda); the integer number of
    // wavelengths is removed before scaling to keep the phase accurate at
    // R / lambda ~ 1e4.
    inline cdouble los_gain(double r, double lambda)
    {
        const double cycles = r / lambda;
        const double frac = cycles - std::floor(cycles);
        return std::polar(1.0, two_pi * frac);
    }

    // H(m, n) = exp(i 2 pi r(m, n) / lambda)
    inline CMatrix los_channel(const RMatrix &distances, double lambda)
    {
        if (!(lambda > 0.0))
            throw std::invalid_argument("Wavelength must be positive.");
        CMatrix H(distances.rows(), distances.cols());
        for (std::size_t m = 0; m < distances.rows(); ++m)
            for (std::size_t n = 0; n < distances.cols(); ++n)
            {
                if (!(distances(m, n) > 0.0))
                    throw std::invalid_argument("Channel distances must be positive.");
                H(m, n) = los_gain(distances(m, n), lambda);
            }
        return H;
    }

    // 2 x 2 upper-triangular factor of an n_r x 2 channel,
    //   R = [ |h1|  h1^H h2 / |h1| ;  0  |h2| sqrt(1 - mu^2) ],
    // with real non-negative diagonal. For unit-modulus channels this is
    // sqrt(n_r) [1, e^{i theta_mu} mu; 0, sqrt(1 - mu^2)].
    struct ReducedChannel
    {
        CMatrix R{2, 2};
        double mu = 0.0;
        double theta_mu = 0.0; // arg(h1^H h2) in [0, 2 pi)
        std::size_t n_r = 0;
        std::optional<CMatrix> Q; // semi-unitary n_r x 2 factor, when requested
    };

    inline ReducedChannel reduce(const CMatrix &H, bool with_q = false)
    {
        if (H.cols() != 2)
            throw std::invalid_argument("Reduction needs exactly two channel columns.");
        if (H.rows() < 2)
            throw std::invalid_argument("Reduction needs at least two receive antennas.");

        const auto h1 = H.col(0), h2 = H.col(1);
        const double n1 = std::sqrt(norm_sq(h1));
        const double n2 = std::sqrt(norm_sq(h2));
        if (n1 == 0.0 || n2 == 0.0)
            throw std::invalid_argument("Channel has a zero column.");

        const cdouble c = inner(h1, h2);
        ReducedChannel out;
        out.n_r = H.rows();
        out.mu = std::min(1.0, std::abs(c) / (n1 * n2));
        out.theta_mu = wrap_2pi(std::arg(c));

        const double one_minus = 1.0 - out.mu * out.mu;
        out.R(0, 0) = n1;
        out.R(0, 1) = c / n1;
        out.R(1, 0) = 0.0;
        out.R(1, 1) = one_minus < 1e-15 ? 0.0 : n2 * std::sqrt(one_minus);

        if (with_q)
        {
            CMatrix Q(H.rows(), 2);
            for (std::size_t m = 0; m < H.rows(); ++m)
                Q(m, 0) = h1[m] / n1;
            const double r11 = out.R(1, 1).real();
            if (r11 > 0.0)
            {
                for (std::size_t m = 0; m < H.rows(); ++m)
                    Q(m, 1) = (h2[m] - Q(m, 0) * out.R(0, 1)) / r11;
            }
            else
            {
                // Rank one: complete Q with any unit vector orthogonal to q1
                std::vector<cdouble> e(H.rows(), 0.0);
                for (std::size_t k = 0; k < H.rows(); ++k)
                {
                    std::fill(e.begin(), e.end(), 0.0);
                    e[k] = 1.0;
                    const cdouble p = Q(k, 0);
                    double s = 0.0;
                    for (std::size_t m = 0; m < H.rows(); ++m)
                        e[m] -= Q(m, 0) * std::conj(p), s += std::norm(e[m]);
                    if (s > 1e-6)
                    {
                        for (std::size_t m = 0; m < H.rows(); ++m)
                            Q(m, 1) = e[m] / std::sqrt(s);
                        break;
                    }
                }
            }
            out.Q = std::move(Q);
        }
        return out;
    }

    // Deviation factor eta = R lambda / (2 d_t d_r cos(beta))
    inline double deviation_factor(double R, double d_t, double d_r, double beta, double lambda)
    {
        if (!(R > 0.0 && d_t > 0.0 && d_r > 0.0 && lambda > 0.0))
            throw std::invalid_argument("Deviation factor needs positive lengths.");
        const double cb = std::cos(beta);
        if (!(cb > 1e-12))
            throw std::domain_error("Deviation factor is undefined for |beta| >= pi/2.");
        return R * lambda / (2.0 * d_t * d_r * cb);
    }

    // Physical parameters of the statistical correlation model
    struct ModelParams
    {
        double d_t = 0.0;
        double R = 0.0;
        double lambda = 0.0;
        double beta = 0.0;
    };

    namespace detail
    {
        inline double mu_from_phases(const ArrayLayout &layout, const Vec3 &v, double scale)
        {
            cdouble s = 0.0;
            for (const auto &a : layout.antennas())
                s += std::polar(1.0, scale * a.radius * dot(a.direction, v));
            return std::min(1.0, std::abs(s) / double(layout.size()));
        }

        inline void check_unit(const Vec3 &v)
        {
            if (std::abs(norm(v) - 1.0) > 1e-9)
                throw std::invalid_argument("Direction v must be a unit vector.");
        }
    }

    // mu = (1/n_r) | sum_m exp(i c_m r_m^T v) |, c_m = 2 pi d_t d_m cos(beta) / (R lambda).
    // v = U_rx^T z' is the receive-frame image of the z'-axis.
    inline double mu_model(const ArrayLayout &layout, const ModelParams &p, const Vec3 &v)
    {
        detail::check_unit(v);
        if (layout.size() == 0)
            throw std::invalid_argument("Layout is empty.");
        const double scale = two_pi * p.d_t * std::cos(p.beta) / (p.R * p.lambda);
        return detail::mu_from_phases(layout, v, scale);
    }

    // Same model parametrized by eta and a reference receive spacing d_r,
    // c_m = pi d_m / (eta d_r). eta -> infinity gives mu = 1.
    inline double mu_model_eta(const ArrayLayout &layout, double eta, double d_r, const Vec3 &v)
    {
        detail::check_unit(v);
        if (!(eta > 0.0) || !(d_r > 0.0))
            throw std::invalid_argument("mu_model_eta needs eta > 0 and d_r > 0.");
        if (std::isinf(eta))
            return 1.0;
        return detail::mu_from_phases(layout, v, std::numbers::pi / (eta * d_r));
    }

    // Channel synthesized from the far-field path differences for the nominal
    // transmit pair: h(m,1) = 1, h(m,2) = exp(i 2 pi dr_m / lambda). Its column
    // correlation equals mu_model with v = U_rx^T z'.
    inline CMatrix model_channel(const LinkScenario &s)
    {
        s.validate();
        CMatrix H(s.rx_layout.size(), 2);
        for (std::size_t m = 0; m < s.rx_layout.size(); ++m)
        {
            H(m, 0) = 1.0;
            H(m, 1) = std::polar(1.0, two_pi * approx_path_difference(s, m) / s.lambda);
        }
        return H;
    }

    struct CorrelationPair
    {
        double mu = 0.0;
        double theta_mu = 0.0;
    };

    // Two receive antennas on the z'-axis at +-d_r/2:
    //   h1^H h2 = 2 exp(i 2 pi d_t sin(beta) / lambda) cos(pi d_t d_r cos(beta) / (R lambda)).
    // mu is the magnitude of the cosine; a negative cosine moves theta_mu by pi
    // so the pair matches reduce() on the same channel.
    inline CorrelationPair closed_form_2x2(double d_t, double d_r, double R, double lambda, double beta)
    {
        if (!(d_t > 0.0 && d_r > 0.0 && R > 0.0 && lambda > 0.0))
            throw std::invalid_argument("closed_form_2x2 needs positive lengths.");
        const double c = std::cos(std::numbers::pi * d_t * d_r * std::cos(beta) / (R * lambda));
        double theta = two_pi * d_t * std::sin(beta) / lambda;
        if (c < 0.0)
            theta += std::numbers::pi;
        return {std::abs(c), wrap_2pi(theta)};
    }
}

#endif
