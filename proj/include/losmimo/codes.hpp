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

#ifndef LOSMIMO_CODES_HPP
#define LOSMIMO_CODES_HPP

#include "matrix.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace losmimo
{
    // Square QAM indexed by its bit label: points[l] carries label l. The
    // upper half of the label bits selects the in-phase level, the lower half
    // the quadrature level, each reflected-Gray coded.
    struct Constellation
    {
        std::vector<cdouble> points;
        unsigned bits_per_symbol = 0;

        std::size_t size() const { return points.size(); }

        double average_energy() const
        {
            double e = 0.0;
            for (const auto &p : points)
                e += std::norm(p);
            return e / double(points.size());
        }

        std::string label(std::size_t l) const
        {
            std::string s(bits_per_symbol, '0');
            for (unsigned b = 0; b < bits_per_symbol; ++b)
                if (l >> (bits_per_symbol - 1 - b) & 1U)
                    s[b] = '1';
            return s;
        }
    };

    inline Constellation gray_qam(std::size_t M, double energy)
    {
        if (M != 4 && M != 16)
            throw std::invalid_argument("Only 4-QAM and 16-QAM are supported, got M = " + std::to_string(M) + ".");
        if (!(energy > 0.0))
            throw std::invalid_argument("Constellation energy must be positive.");

        const unsigned bits = static_cast<unsigned>(std::countr_zero(M));
        const unsigned half = bits / 2;
        const std::size_t L = std::size_t{1} << half; // levels per axis
        const std::size_t mask = L - 1;

        // Gray label -> PAM level in {-(L-1), ..., L-1}
        auto level = [&](std::size_t g) {
            std::size_t b = g;
            for (std::size_t s = g >> 1; s; s >>= 1)
                b ^= s;
            return 2.0 * double(b) - double(L - 1);
        };

        Constellation c;
        c.bits_per_symbol = bits;
        c.points.resize(M);
        for (std::size_t l = 0; l < M; ++l)
            c.points[l] = {level(l >> half), level(l & mask)};

        const double scale = std::sqrt(energy / c.average_energy());
        for (auto &p : c.points)
            p *= scale;
        return c;
    }

    enum class Scheme
    {
        sm,
        golden,
        simo
    };

    inline std::string_view to_string(Scheme s)
    {
        switch (s)
        {
        case Scheme::sm: return "sm";
        case Scheme::golden: return "golden";
        case Scheme::simo: return "simo";
        }
        return "unknown";
    }

    inline Scheme parse_scheme(std::string_view s)
    {
        if (s == "sm" || s == "SM") return Scheme::sm;
        if (s == "golden" || s == "Golden") return Scheme::golden;
        if (s == "simo" || s == "SIMO") return Scheme::simo;
        throw std::invalid_argument("Unknown scheme '" + std::string(s) + "'.");
    }

    // 2 x T codewords; codewords[k] carries the bit label k (MSB first).
    struct Codebook
    {
        Scheme scheme = Scheme::sm;
        std::size_t T = 1;
        unsigned bits = 0; // bits per codeword
        std::vector<CMatrix> codewords;

        std::size_t size() const { return codewords.size(); }
        double rate() const { return double(bits) / double(T); }

        double total_energy() const
        {
            double e = 0.0;
            for (const auto &X : codewords)
                e += frobenius_norm_sq(X);
            return e;
        }

        // Bit string <-> codeword index
        std::size_t encode(std::string_view b) const
        {
            if (b.size() != bits)
                throw std::invalid_argument("Expected " + std::to_string(bits) + " bits.");
            std::size_t k = 0;
            for (char ch : b)
            {
                if (ch != '0' && ch != '1')
                    throw std::invalid_argument("Bit strings contain only '0' and '1'.");
                k = (k << 1) | std::size_t(ch == '1');
            }
            return k;
        }

        std::string decode(std::size_t k) const
        {
            if (k >= size())
                throw std::out_of_range("Codeword index out of range.");
            std::string s(bits, '0');
            for (unsigned b = 0; b < bits; ++b)
                if (k >> (bits - 1 - b) & 1U)
                    s[b] = '1';
            return s;
        }
    };

    namespace detail
    {
        inline void require_energy(const Constellation &c, double e, std::string_view what)
        {
            if (std::abs(c.average_energy() - e) > 1e-12)
                throw std::invalid_argument(std::string(what) + " needs a constellation with average energy " +
                                            std::to_string(e) + ".");
        }

        // Symbol indices of codeword k for n symbols, s_1 most significant
        inline std::vector<std::size_t> split_symbols(std::size_t k, std::size_t n, unsigned bits_per_symbol)
        {
            std::vector<std::size_t> s(n);
            const std::size_t mask = (std::size_t{1} << bits_per_symbol) - 1;
            for (std::size_t i = 0; i < n; ++i)
                s[n - 1 - i] = (k >> (i * bits_per_symbol)) & mask;
            return s;
        }
    }

    inline Codebook sm_codebook(const Constellation &a)
    {
        detail::require_energy(a, 0.5, "Spatial multiplexing");
        Codebook cb{Scheme::sm, 1, 2 * a.bits_per_symbol, {}};
        const std::size_t n = a.size() * a.size();
        cb.codewords.reserve(n);
        for (std::size_t k = 0; k < n; ++k)
        {
            const auto s = detail::split_symbols(k, 2, a.bits_per_symbol);
            cb.codewords.push_back(CMatrix{{a.points[s[0]]}, {a.points[s[1]]}});
        }
        return cb;
    }

    inline Codebook simo_codebook(const Constellation &a)
    {
        detail::require_energy(a, 1.0, "SIMO");
        Codebook cb{Scheme::simo, 1, a.bits_per_symbol, {}};
        for (const auto &p : a.points)
            cb.codewords.push_back(CMatrix{{p}, {0.0}});
        return cb;
    }

    // Golden code with tau = (1 + sqrt 5)/2, tau_bar = 1 - tau,
    // alpha = 1 + i tau_bar, alpha_bar = 1 + i tau:
    //   [ alpha (s1 + tau s3)           alpha (s2 + tau s4)         ]
    //   [ i alpha_bar (s2 + tau_bar s4)  alpha_bar (s1 + tau_bar s3) ]
    // scaled so that the mean codeword energy equals T.
    inline Codebook golden_codebook(const Constellation &a)
    {
        const double tau = 0.5 * (1.0 + std::sqrt(5.0));
        const double tau_bar = 1.0 - tau;
        const cdouble alpha{1.0, tau_bar};
        const cdouble alpha_bar{1.0, tau};
        const cdouble I{0.0, 1.0};

        Codebook cb{Scheme::golden, 2, 4 * a.bits_per_symbol, {}};
        const std::size_t M = a.size();
        const std::size_t n = M * M * M * M;
        cb.codewords.reserve(n);
        for (std::size_t k = 0; k < n; ++k)
        {
            const auto id = detail::split_symbols(k, 4, a.bits_per_symbol);
            const cdouble s1 = a.points[id[0]], s2 = a.points[id[1]], s3 = a.points[id[2]], s4 = a.points[id[3]];
            cb.codewords.push_back(CMatrix{{alpha * (s1 + tau * s3), alpha * (s2 + tau * s4)},
                                           {I * alpha_bar * (s2 + tau_bar * s4), alpha_bar * (s1 + tau_bar * s3)}});
        }

        const double scale = std::sqrt(double(n) * double(cb.T) / cb.total_energy());
        for (auto &X : cb.codewords)
            X *= cdouble(scale);
        return cb;
    }

    // Sufficient statistics of a codeword difference for the LoS metrics:
    // a = |dx1|^2, b = |dx2|^2, c = |dx1^H dx2| with dx_i the i-th row of dX.
    struct DiffTriple
    {
        double a = 0.0;
        double b = 0.0;
        double c = 0.0;

        double frobenius_sq() const { return a + b; }
        friend bool operator==(const DiffTriple &, const DiffTriple &) = default;
    };

    inline DiffTriple diff_triple(const CMatrix &dX)
    {
        if (dX.rows() != 2)
            throw std::invalid_argument("Codeword differences have two rows.");
        const auto r1 = dX.row(0), r2 = dX.row(1);
        return {norm_sq(r1), norm_sq(r2), std::abs(inner(r1, r2))};
    }

    // Distinct nonzero difference triples over all ordered codeword pairs.
    // Triples equal to within 1e-10 are merged.
    inline std::vector<DiffTriple> difference_spectrum(const Codebook &cb)
    {
        if (cb.size() < 2)
            throw std::invalid_argument("A difference spectrum needs at least two codewords.");

        std::vector<DiffTriple> all;
        for (std::size_t i = 0; i < cb.size(); ++i)
            for (std::size_t j = 0; j < cb.size(); ++j)
            {
                if (i == j)
                    continue;
                const auto t = diff_triple(cb.codewords[i] - cb.codewords[j]);
                if (t.a + t.b > 0.0)
                    all.push_back(t);
            }

        constexpr double q = 1e-10;
        auto key = [](const DiffTriple &t) {
            return std::tuple{std::llround(t.a / q), std::llround(t.b / q), std::llround(t.c / q)};
        };
        std::sort(all.begin(), all.end(), [&](const auto &x, const auto &y) { return key(x) < key(y); });
        all.erase(std::unique(all.begin(), all.end(), [&](const auto &x, const auto &y) { return key(x) == key(y); }),
                  all.end());
        return all;
    }

    // Standard 4-bit-per-use codebooks
    inline Codebook make_codebook(Scheme s)
    {
        switch (s)
        {
        case Scheme::sm: return sm_codebook(gray_qam(4, 0.5));
        case Scheme::golden: return golden_codebook(gray_qam(4, 0.5));
        case Scheme::simo: return simo_codebook(gray_qam(16, 1.0));
        }
        throw std::invalid_argument("Unknown scheme.");
    }
}

#endif
