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

#ifndef LOSMIMO_METRICS_HPP
#define LOSMIMO_METRICS_HPP

#include "codes.hpp"
#include "matrix.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>

namespace losmimo
{
    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

    // Gaussian tail Q(x)
    inline double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

    // log I0(x) for x >= 0. Power series below 20, Hankel asymptotic series above:
    //   I0(x) ~ e^x / sqrt(2 pi x) * sum_k ((2k-1)!!)^2 / (k! (8x)^k)
    inline double log_bessel_i0(double x)
    {
        if (x < 0.0)
            x = -x;
        if (std::isnan(x))
            return x;
        if (x < 20.0)
        {
            const double q = 0.25 * x * x;
            double term = 1.0, sum = 1.0;
            for (int k = 1; k < 500; ++k)
            {
                term *= q / (double(k) * double(k));
                sum += term;
                if (term < sum * 1e-17)
                    break;
            }
            return std::log(sum);
        }
        if (std::isinf(x))
            return x;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 200; ++k)
        {
            const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (double(k) * 8.0 * x);
            if (next >= term)
                break;
            term = next;
            sum += term;
            if (term < sum * 1e-17)
                break;
        }
        return x - 0.5 * std::log(2.0 * std::numbers::pi * x) + std::log(sum);
    }

    inline double bessel_i0(double x) { return std::exp(log_bessel_i0(x)); }

    // d(mu, dX) = |dx1|^2 + |dx2|^2 - 2 mu |dx1^H dx2|, clamped at 0 against rounding
    inline double d_metric(double mu, const DiffTriple &t)
    {
        if (mu < 0.0 || mu > 1.0)
            throw std::domain_error("mu must lie in [0, 1].");
        return std::max(0.0, t.a + t.b - 2.0 * mu * t.c);
    }

    inline double coding_gain(std::span<const DiffTriple> spectrum, double mu)
    {
        if (spectrum.empty())
            throw std::invalid_argument("Coding gain of an empty spectrum.");
        double g = std::numeric_limits<double>::infinity();
        for (const auto &t : spectrum)
            g = std::min(g, d_metric(mu, t));
        return g;
    }

    struct PepValue
    {
        double chernoff = 0.5; // 1/2 exp(-SNR |R dX|^2 / 4)
        double exact = 0.5;    // Q(sqrt(SNR |R dX|^2 / 2))
    };

    // Conditional PEP for a known reduced channel R (2 x 2) and difference dX (2 x T)
    inline PepValue pep_chernoff(const CMatrix &R, const CMatrix &dX, double snr)
    {
        if (R.rows() != 2 || R.cols() != 2 || dX.rows() != 2)
            throw std::invalid_argument("pep_chernoff expects a 2 x 2 R and a 2-row difference.");
        if (!(snr > 0.0))
            throw std::invalid_argument("SNR must be positive.");
        const double q = frobenius_norm_sq(R * dX);
        return {0.5 * std::exp(-0.25 * snr * q), q_function(std::sqrt(0.5 * snr * q))};
    }

    // log PEP*(mu) = log(1/2) - n_r SNR d(mu, dX) / 4
    inline double log_pep_worst(double mu, const DiffTriple &t, double snr, std::size_t n_r)
    {
        return -std::numbers::ln2 - 0.25 * double(n_r) * snr * d_metric(mu, t);
    }

    inline double pep_worst(double mu, const DiffTriple &t, double snr, std::size_t n_r)
    {
        return std::exp(log_pep_worst(mu, t, snr, n_r));
    }

    // Chernoff bound averaged over a uniform phase theta:
    //   1/2 exp(-SNR n_r (a + b) / 4) I0(SNR n_r mu c / 2)
    inline double log_pep_avg_theta(double mu, const DiffTriple &t, double snr, std::size_t n_r)
    {
        if (mu < 0.0 || mu > 1.0)
            throw std::domain_error("mu must lie in [0, 1].");
        const double nr = double(n_r);
        return -std::numbers::ln2 - 0.25 * snr * nr * (t.a + t.b) + log_bessel_i0(0.5 * snr * nr * mu * t.c);
    }

    inline double pep_avg_theta(double mu, const DiffTriple &t, double snr, std::size_t n_r)
    {
        return std::exp(log_pep_avg_theta(mu, t, snr, n_r));
    }

    // First-order large-SNR form: exp(-n_r SNR d / 4) / sqrt(4 pi n_r SNR mu c)
    inline double log_pep_avg_theta_asymptotic(double mu, const DiffTriple &t, double snr, std::size_t n_r)
    {
        const double x = double(n_r) * snr * mu * t.c;
        if (!(x > 0.0))
            throw std::domain_error("Asymptotic averaged PEP needs mu |dx1^H dx2| > 0.");
        return -0.5 * std::log(4.0 * std::numbers::pi * x) - 0.25 * double(n_r) * snr * d_metric(mu, t);
    }

    inline double pep_avg_theta_asymptotic(double mu, const DiffTriple &t, double snr, std::size_t n_r)
    {
        return std::exp(log_pep_avg_theta_asymptotic(mu, t, snr, n_r));
    }

    // High-SNR lower bound on the orientation-averaged PEP for planar receive
    // arrays; c = max_m 2 pi d_t d_m / (R lambda) is supplied by the caller.
    //   exp(-n_r c |dx1^H dx2| / 2)
    //   / (2 n_r SNR^3 sqrt(2 pi^2 |dx1^H dx2|) (|dX|_F + 1/sqrt(n_r SNR)))
    //   * exp(-n_r SNR d(1, dX) / 4)
    inline double log_planar_lower_bound(const DiffTriple &t, double snr, std::size_t n_r, double c,
                                         double frobenius_norm)
    {
        if (!(t.c > 0.0))
            throw std::domain_error("Planar lower bound is degenerate for |dx1^H dx2| = 0.");
        if (!(snr > 0.0))
            throw std::invalid_argument("SNR must be positive.");
        const double nr = double(n_r);
        return -0.5 * nr * c * t.c - std::log(2.0 * nr) - 3.0 * std::log(snr) -
               0.5 * std::log(2.0 * std::numbers::pi * std::numbers::pi * t.c) -
               std::log(frobenius_norm + 1.0 / std::sqrt(nr * snr)) - 0.25 * nr * snr * d_metric(1.0, t);
    }

    inline double planar_lower_bound(const DiffTriple &t, double snr, std::size_t n_r, double c, double frobenius_norm)
    {
        return std::exp(log_planar_lower_bound(t, snr, n_r, c, frobenius_norm));
    }

    // |C|/2 exp(-n_r SNR gain / 4)
    inline double union_bound(std::size_t codebook_size, double gain, double snr, std::size_t n_r)
    {
        return 0.5 * double(codebook_size) * std::exp(-0.25 * double(n_r) * snr * gain);
    }
}

#endif
