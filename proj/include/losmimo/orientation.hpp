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

#ifndef LOSMIMO_ORIENTATION_HPP
#define LOSMIMO_ORIENTATION_HPP

#include "channel.hpp"
#include "geometry.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace losmimo
{
    // ------------------------------------------------------------------------
    // Tetrahedral edge code

    struct EdgeVector
    {
        Vec3 g;
        std::size_t m = 0, l = 0; // g = sqrt(3/8) (r_m - r_l)
    };

    // The 12 unit vectors g_{m,l}, m != l, in lexicographic (m, l) order
    inline std::array<EdgeVector, 12> edge_code()
    {
        const auto r = tetrahedron_directions();
        const double s = std::sqrt(3.0 / 8.0);
        std::array<EdgeVector, 12> out;
        std::size_t k = 0;
        for (std::size_t m = 0; m < 4; ++m)
            for (std::size_t l = 0; l < 4; ++l)
                if (m != l)
                    out[k++] = {s * (r[m] - r[l]), m, l};
        return out;
    }

    namespace detail
    {
        inline Rotation::Matrix inverse3(const Rotation::Matrix &a)
        {
            const double det = Rotation(a).determinant();
            if (std::abs(det) < 1e-300)
                throw std::domain_error("Singular 3 x 3 matrix.");
            Rotation::Matrix inv{};
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                {
                    const int i1 = (j + 1) % 3, i2 = (j + 2) % 3, j1 = (i + 1) % 3, j2 = (i + 2) % 3;
                    inv[i][j] = (a[i1][j1] * a[i2][j2] - a[i1][j2] * a[i2][j1]) / det;
                }
            return inv;
        }

        inline Rotation::Matrix columns(const Vec3 &a, const Vec3 &b, const Vec3 &c)
        {
            return {{{a.x, b.x, c.x}, {a.y, b.y, c.y}, {a.z, b.z, c.z}}};
        }
    }

    // Rotational symmetry group of the tetrahedron: one proper rotation per even
    // permutation pi of the vertices, mapping r_k to r_pi(k).
    inline std::vector<Rotation> tetrahedral_group()
    {
        const auto r = tetrahedron_directions();
        const Rotation base_inv(detail::inverse3(detail::columns(r[0], r[1], r[2])));

        std::array<std::size_t, 4> p{0, 1, 2, 3};
        std::vector<Rotation> group;
        do
        {
            std::size_t inversions = 0;
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = i + 1; j < 4; ++j)
                    inversions += p[i] > p[j];
            if (inversions % 2 == 0)
                group.push_back(Rotation(detail::columns(r[p[0]], r[p[1]], r[p[2]])) * base_inv);
        } while (std::next_permutation(p.begin(), p.end()));
        return group;
    }

    // ------------------------------------------------------------------------
    // Sphere grids

    // Geodesic grid from a subdivided icosahedron: 10 * 4^level + 2 vertices
    inline std::vector<Vec3> icosphere(unsigned level)
    {
        const double t = 0.5 * (1.0 + std::sqrt(5.0));
        std::vector<Vec3> v{{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                            {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
        for (auto &p : v)
            p = normalized(p);
        std::vector<std::array<std::size_t, 3>> faces{
            {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
            {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8},
            {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};

        for (unsigned it = 0; it < level; ++it)
        {
            std::map<std::pair<std::size_t, std::size_t>, std::size_t> mid;
            auto midpoint = [&](std::size_t a, std::size_t b) {
                const auto key = std::minmax(a, b);
                auto [pos, inserted] = mid.try_emplace({key.first, key.second}, v.size());
                if (inserted)
                    v.push_back(normalized(v[a] + v[b]));
                return pos->second;
            };
            std::vector<std::array<std::size_t, 3>> next;
            next.reserve(faces.size() * 4);
            for (const auto &f : faces)
            {
                const std::size_t a = midpoint(f[0], f[1]), b = midpoint(f[1], f[2]), c = midpoint(f[2], f[0]);
                next.push_back({f[0], a, c});
                next.push_back({f[1], b, a});
                next.push_back({f[2], c, b});
                next.push_back({a, b, c});
            }
            faces = std::move(next);
        }
        return v;
    }

    // Fibonacci (golden-spiral) lattice with n nearly equal-area points
    inline std::vector<Vec3> fibonacci_sphere(std::size_t n) { return spiral_lattice(n); }

    // ------------------------------------------------------------------------
    // Correlation of the tetrahedral receive array against link direction

    // (1/4) | sum_m exp(i (pi/eta) sqrt(3/8) r_m^T v) |
    inline double mu_of_direction(double eta, const Vec3 &v)
    {
        if (!(eta > 0.0))
            throw std::invalid_argument("eta must be positive.");
        if (std::isinf(eta))
            return 1.0;
        const auto r = tetrahedron_directions();
        const double c = std::numbers::pi * std::sqrt(3.0 / 8.0) / eta;
        cdouble s = 0.0;
        for (const auto &rm : r)
            s += std::polar(1.0, c * dot(rm, v));
        return std::min(1.0, 0.25 * std::abs(s));
    }

    struct MuStar
    {
        double eta = 0.0;
        double value = 0.0;
        Vec3 v = e_z; // a maximizing direction
    };

    namespace detail
    {
        // Icosphere vertices with their projections sqrt(3/8) r_m^T v, shared by
        // all mu* evaluations
        struct ProjectionTable
        {
            std::vector<Vec3> vertices;
            std::vector<std::array<double, 4>> proj;
        };

        inline constexpr unsigned mu_star_grid_level = 6; // 40962 vertices

        inline const ProjectionTable &projection_table()
        {
            static const ProjectionTable table = [] {
                ProjectionTable t;
                t.vertices = icosphere(mu_star_grid_level);
                const auto r = tetrahedron_directions();
                const double s = std::sqrt(3.0 / 8.0);
                t.proj.reserve(t.vertices.size());
                for (const auto &v : t.vertices)
                    t.proj.push_back({s * dot(r[0], v), s * dot(r[1], v), s * dot(r[2], v), s * dot(r[3], v)});
                return t;
            }();
            return table;
        }

        // |S(v)|^2 and its gradient, S = sum_m exp(i k r_m^T v), k = pi sqrt(3/8) / eta
        inline double power_and_gradient(double k, const Vec3 &v, Vec3 *grad)
        {
            const auto r = tetrahedron_directions();
            cdouble S = 0.0;
            std::array<cdouble, 4> e;
            for (std::size_t m = 0; m < 4; ++m)
                S += (e[m] = std::polar(1.0, k * dot(r[m], v)));
            if (grad)
            {
                // d|S|^2/dv = 2 Re(conj(S) sum_m i k r_m e_m)
                Vec3 g{};
                for (std::size_t m = 0; m < 4; ++m)
                    g += (2.0 * k * std::real(std::conj(S) * cdouble(0.0, 1.0) * e[m])) * r[m];
                *grad = g;
            }
            return std::norm(S);
        }

        // Projected-gradient ascent on the sphere with an adaptive step; stops
        // once the step falls below tol (radians).
        inline std::pair<double, Vec3> ascend(double k, Vec3 v, double tol = 1e-8)
        {
            Vec3 g;
            double f = power_and_gradient(k, v, &g);
            double step = 1e-2;
            for (int it = 0; it < 10000 && step > tol; ++it)
            {
                const Vec3 gt = g - dot(g, v) * v;
                const double gn = norm(gt);
                if (gn < 1e-15)
                    break;
                const Vec3 cand = normalized(v + (step / gn) * gt);
                Vec3 gc;
                const double fc = power_and_gradient(k, cand, &gc);
                if (fc > f)
                    v = cand, f = fc, g = gc, step *= 1.5;
                else
                    step *= 0.5;
            }
            return {f, v};
        }
    }

    // Global maximum of mu_of_direction over the unit sphere: icosphere grid
    // search followed by local ascent from the 10 best vertices.
    inline MuStar mu_star(double eta)
    {
        if (!(eta > 0.0))
            throw std::invalid_argument("eta must be positive.");
        if (std::isinf(eta))
            return {eta, 1.0, e_z};

        const auto &tab = detail::projection_table();
        const double k = std::numbers::pi / eta; // proj already carries sqrt(3/8)
        std::vector<std::pair<double, std::size_t>> vals(tab.vertices.size());
        for (std::size_t i = 0; i < tab.vertices.size(); ++i)
        {
            cdouble s = 0.0;
            for (double p : tab.proj[i])
                s += std::polar(1.0, k * p);
            vals[i] = {std::norm(s), i};
        }
        constexpr std::size_t n_starts = 10;
        std::partial_sort(vals.begin(), vals.begin() + n_starts, vals.end(),
                          [](const auto &a, const auto &b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });

        const double kk = std::numbers::pi * std::sqrt(3.0 / 8.0) / eta;
        MuStar best{eta, -1.0, e_z};
        for (std::size_t j = 0; j < n_starts; ++j)
        {
            const auto [f, v] = detail::ascend(kk, tab.vertices[vals[j].second]);
            const double mu = std::min(1.0, 0.25 * std::sqrt(f));
            if (mu > best.value)
                best.value = mu, best.v = v;
        }
        return best;
    }

    // (1 + cos(pi / (2 sqrt 2 eta))) / 2, valid for eta >= 1
    inline double mu_star_bound(double eta)
    {
        if (!(eta >= 1.0))
            throw std::domain_error("The closed-form mu* bound holds only for eta >= 1.");
        if (std::isinf(eta))
            return 1.0;
        return 0.5 * (1.0 + std::cos(std::numbers::pi / (2.0 * std::numbers::sqrt2 * eta)));
    }

    inline constexpr double golden_ratio = 1.6180339887498948482;

    // mu* cached on a uniform eta grid with linear interpolation between nodes;
    // queries off the grid are computed directly.
    class MuStarCurve
    {
    public:
        static MuStarCurve build(double eta_lo = 0.3, double eta_hi = 3.0, double step = 0.01,
                                 std::size_t workers = 1)
        {
            if (!(eta_lo > 0.0 && eta_hi > eta_lo && step > 0.0))
                throw std::invalid_argument("Invalid mu* grid.");
            MuStarCurve c;
            c.lo_ = eta_lo;
            c.step_ = step;
            const auto n = static_cast<std::size_t>(std::llround((eta_hi - eta_lo) / step)) + 1;
            c.points_.resize(n);
            parallel_for(n, workers, [&](std::size_t i) { c.points_[i] = mu_star(eta_lo + double(i) * step); });
            return c;
        }

        const std::vector<MuStar> &points() const { return points_; }
        double eta_lo() const { return lo_; }
        double eta_hi() const { return points_.back().eta; }
        double step() const { return step_; }
        bool on_grid(double eta) const { return eta >= lo_ - 1e-12 && eta <= eta_hi() + 1e-12; }

        double at(double eta) const
        {
            if (!on_grid(eta))
                return mu_star(eta).value;
            const double x = (eta - lo_) / step_;
            const auto i = std::min(static_cast<std::size_t>(std::max(0.0, std::floor(x))), points_.size() - 1);
            if (i + 1 >= points_.size())
                return points_.back().value;
            const double w = std::clamp(x - double(i), 0.0, 1.0);
            return (1.0 - w) * points_[i].value + w * points_[i + 1].value;
        }

        // Pentagon transmit array: the diagonal pairs see eta scaled by 1/phi
        double pent(double eta) const { return std::min(at(eta), at(eta / golden_ratio)); }

    private:
        double lo_ = 0.0, step_ = 0.0;
        std::vector<MuStar> points_;
    };

    inline double mu_pent_star(double eta)
    {
        return std::min(mu_star(eta).value, mu_star(eta / golden_ratio).value);
    }

    // ------------------------------------------------------------------------
    // Edge-code covering

    struct EdgeCodeDistortion
    {
        double worst = 0.0;                 // min over samples of max_i g_i^T v
        std::array<double, 12> region_min{}; // same minimum restricted to each Voronoi region
        std::size_t samples = 0;
    };

    inline EdgeCodeDistortion edge_code_worst_distortion(std::size_t samples = 2'000'000)
    {
        if (samples < 12)
            throw std::invalid_argument("Too few sphere samples.");
        const auto code = edge_code();
        EdgeCodeDistortion out;
        out.samples = samples;
        out.region_min.fill(2.0);
        out.worst = 2.0;
        const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (std::size_t i = 0; i < samples; ++i)
        {
            const double z = 1.0 - (2.0 * double(i) + 1.0) / double(samples);
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = golden_angle * double(i);
            const Vec3 v{rho * std::cos(phi), rho * std::sin(phi), z};
            double best = -2.0;
            std::size_t arg = 0;
            for (std::size_t k = 0; k < code.size(); ++k)
            {
                const double p = dot(code[k].g, v);
                if (p > best)
                    best = p, arg = k;
            }
            out.worst = std::min(out.worst, best);
            out.region_min[arg] = std::min(out.region_min[arg], best);
        }
        return out;
    }

    // ------------------------------------------------------------------------
    // Best 2 x 2 submatrix of a tetrahedral channel

    struct Submatrix
    {
        std::size_t m = 0, l = 1; // receive rows
        double mu_sub = 1.0;
    };

    inline Submatrix best_submatrix(const CMatrix &H)
    {
        if (H.rows() != 4 || H.cols() != 2)
            throw std::invalid_argument("best_submatrix expects a 4 x 2 channel.");
        Submatrix best;
        for (std::size_t m = 0; m < 4; ++m)
            for (std::size_t l = m + 1; l < 4; ++l)
            {
                const CMatrix sub{{H(m, 0), H(m, 1)}, {H(l, 0), H(l, 1)}};
                const double mu = reduce(sub).mu;
                if (mu < best.mu_sub - 1e-15)
                    best = {m, l, mu};
            }
        return best;
    }

    // |cos((pi / (2 eta)) g^T v)|
    inline double mu_sub_formula(double eta, const Vec3 &g, const Vec3 &v)
    {
        return std::abs(std::cos(std::numbers::pi / (2.0 * eta) * dot(g, v)));
    }
}

#endif
