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

#ifndef LOSMIMO_GEOMETRY_HPP
#define LOSMIMO_GEOMETRY_HPP

#include "matrix.hpp"
#include "random.hpp"
#include "vec3.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace losmimo
{
    // Global frame: the nominal transmit pair lies on the z-axis with its
    // midpoint at the origin, and the receive centroid sits in the x-z plane at
    // [R cos(beta), 0, R sin(beta)]. Array orientations enter only through the
    // rotations U_tx and U_rx applied about each array's centroid.

    enum class ArrayKind
    {
        ula,
        ura,
        tetrahedron,
        triangle,
        pentagon,
        spherical_code,
        custom
    };

    inline std::string_view to_string(ArrayKind k)
    {
        switch (k)
        {
        case ArrayKind::ula: return "ula";
        case ArrayKind::ura: return "ura";
        case ArrayKind::tetrahedron: return "tetrahedron";
        case ArrayKind::triangle: return "triangle";
        case ArrayKind::pentagon: return "pentagon";
        case ArrayKind::spherical_code: return "spherical-code";
        case ArrayKind::custom: return "custom";
        }
        return "unknown";
    }

    inline ArrayKind parse_array_kind(std::string_view s)
    {
        std::string t(s);
        std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
        std::replace(t.begin(), t.end(), '_', '-');
        if (t == "ula") return ArrayKind::ula;
        if (t == "ura") return ArrayKind::ura;
        if (t == "tetrahedron" || t == "tetr") return ArrayKind::tetrahedron;
        if (t == "triangle") return ArrayKind::triangle;
        if (t == "pentagon" || t == "pent") return ArrayKind::pentagon;
        if (t == "spherical-code" || t == "spherical") return ArrayKind::spherical_code;
        if (t == "custom") return ArrayKind::custom;
        throw std::invalid_argument("Unknown array kind '" + std::string(s) + "'.");
    }

    // Antenna m sits at radius * direction relative to the array centroid.
    // A centre element has radius 0 and an arbitrary unit direction (e_z).
    struct Antenna
    {
        Vec3 direction = e_z;
        double radius = 0.0;

        Vec3 position() const { return radius * direction; }
    };

    class ArrayLayout
    {
    public:
        ArrayLayout() = default;

        // Builds a layout from centroid-relative positions. With recenter the
        // positions are shifted to have zero centroid first; otherwise a nonzero
        // centroid is rejected.
        static ArrayLayout from_positions(ArrayKind kind, const std::vector<Vec3> &positions, bool recenter = false)
        {
            if (positions.empty())
                throw std::invalid_argument("An array layout needs at least one antenna.");

            Vec3 c{};
            double extent = 0.0;
            for (const auto &p : positions)
                c += p, extent = std::max(extent, norm(p));
            c *= 1.0 / double(positions.size());

            ArrayLayout a;
            a.kind_ = kind;
            a.antennas_.reserve(positions.size());
            if (!recenter && norm(c) > 1e-9 * std::max(extent, 1e-300) && extent > 0.0)
                throw std::invalid_argument("Array positions must have zero centroid.");

            for (const auto &p0 : positions)
            {
                const Vec3 p = recenter ? p0 - c : p0;
                const double r = norm(p);
                a.antennas_.push_back(r > 0.0 ? Antenna{(1.0 / r) * p, r} : Antenna{e_z, 0.0});
            }
            return a;
        }

        ArrayKind kind() const { return kind_; }
        std::size_t size() const { return antennas_.size(); }
        const std::vector<Antenna> &antennas() const { return antennas_; }
        const Antenna &operator[](std::size_t m) const { return antennas_.at(m); }

        std::vector<Vec3> positions() const
        {
            std::vector<Vec3> p;
            p.reserve(antennas_.size());
            for (const auto &a : antennas_)
                p.push_back(a.position());
            return p;
        }

        double max_radius() const
        {
            double d = 0.0;
            for (const auto &a : antennas_)
                d = std::max(d, a.radius);
            return d;
        }

        Vec3 centroid() const
        {
            Vec3 c{};
            for (const auto &a : antennas_)
                c += a.position();
            return (1.0 / double(antennas_.size())) * c;
        }

    private:
        ArrayKind kind_ = ArrayKind::custom;
        std::vector<Antenna> antennas_;
    };

    struct LayoutParams
    {
        std::size_t n = 0;      // antenna count; 0 selects the kind's natural count
        double spacing = 0.0;   // edge length / pitch in meters; sphere diameter for spherical codes
        std::size_t rows = 0;   // URA only; 0 with cols = 0 requests a square grid
        std::size_t cols = 0;   // URA only
        std::optional<std::filesystem::path> coords_file; // spherical codes only
    };

    // Unit vectors of a spherical-code table: one "x,y,z" row per point.
    // Blank lines and lines starting with '#' are skipped.
    inline std::vector<Vec3> read_spherical_code(const std::filesystem::path &file, double tol = 1e-6)
    {
        std::ifstream in(file);
        if (!in)
            throw std::invalid_argument("Cannot open spherical-code file '" + file.string() + "'.");

        std::vector<Vec3> pts;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line))
        {
            ++line_no;
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#')
                continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ss(line);
            Vec3 v;
            std::string extra;
            if (!(ss >> v.x >> v.y >> v.z) || (ss >> extra))
                throw std::invalid_argument("Spherical-code file line " + std::to_string(line_no) +
                                            ": expected three real columns.");
            if (std::abs(norm(v) - 1.0) > tol)
                throw std::invalid_argument("Spherical-code file line " + std::to_string(line_no) +
                                            ": row is not a unit vector.");
            pts.push_back(v);
        }
        return pts;
    }

    // Deterministic golden-angle spiral on the unit sphere. Fallback for
    // spherical codes when no table is supplied; it is not an optimal packing.
    inline std::vector<Vec3> spiral_lattice(std::size_t n)
    {
        std::vector<Vec3> pts;
        pts.reserve(n);
        const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (std::size_t i = 0; i < n; ++i)
        {
            const double z = 1.0 - (2.0 * double(i) + 1.0) / double(n);
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = golden_angle * double(i);
            pts.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
        }
        return pts;
    }

    namespace detail
    {
        // Regular polygon with the given edge length in the y-z plane; vertex k
        // at polar angle 2 pi k / n measured from +z towards +y.
        inline std::vector<Vec3> regular_polygon(std::size_t n, double edge)
        {
            const double circumradius = edge / (2.0 * std::sin(std::numbers::pi / double(n)));
            std::vector<Vec3> p;
            for (std::size_t k = 0; k < n; ++k)
            {
                const double a = 2.0 * std::numbers::pi * double(k) / double(n);
                p.push_back({0.0, circumradius * std::sin(a), circumradius * std::cos(a)});
            }
            return p;
        }

        inline void require_count(const LayoutParams &p, std::size_t natural, std::string_view kind)
        {
            if (p.n != 0 && p.n != natural)
                throw std::invalid_argument(std::string(kind) + " layout has exactly " + std::to_string(natural) +
                                            " antennas.");
        }
    }

    // Unit vectors r_m of the reference tetrahedron (alternate cube corners)
    inline std::array<Vec3, 4> tetrahedron_directions()
    {
        const double s = 1.0 / std::sqrt(3.0);
        return {Vec3{s, s, s}, Vec3{s, -s, -s}, Vec3{-s, s, -s}, Vec3{-s, -s, s}};
    }

    inline ArrayLayout make_layout(ArrayKind kind, const LayoutParams &p)
    {
        if (!(p.spacing > 0.0))
            throw std::invalid_argument("Array spacing must be positive.");

        switch (kind)
        {
        case ArrayKind::ula:
        {
            if (p.n < 1)
                throw std::invalid_argument("ULA needs n >= 1.");
            // Along z, first element at the +z end
            std::vector<Vec3> pos;
            for (std::size_t k = 0; k < p.n; ++k)
                pos.push_back({0.0, 0.0, (0.5 * double(p.n - 1) - double(k)) * p.spacing});
            return ArrayLayout::from_positions(kind, pos);
        }
        case ArrayKind::ura:
        {
            std::size_t rows = p.rows, cols = p.cols;
            if (rows == 0 && cols == 0)
            {
                const auto side = static_cast<std::size_t>(std::llround(std::sqrt(double(p.n))));
                if (p.n < 1 || side * side != p.n)
                    throw std::invalid_argument("URA with n = " + std::to_string(p.n) +
                                                " is not a square grid; give rows and cols.");
                rows = cols = side;
            }
            else if (rows == 0 || cols == 0 || (p.n != 0 && rows * cols != p.n))
                throw std::invalid_argument("URA n must equal rows x cols.");

            // Grid in the y-z plane: rows along z, columns along y
            std::vector<Vec3> pos;
            for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t c = 0; c < cols; ++c)
                    pos.push_back({0.0, (double(c) - 0.5 * double(cols - 1)) * p.spacing,
                                   (0.5 * double(rows - 1) - double(r)) * p.spacing});
            return ArrayLayout::from_positions(kind, pos);
        }
        case ArrayKind::tetrahedron:
        {
            detail::require_count(p, 4, "Tetrahedron");
            const double d_m = std::sqrt(3.0 / 8.0) * p.spacing;
            std::vector<Vec3> pos;
            for (const auto &r : tetrahedron_directions())
                pos.push_back(d_m * r);
            return ArrayLayout::from_positions(kind, pos);
        }
        case ArrayKind::triangle:
            detail::require_count(p, 3, "Triangle");
            return ArrayLayout::from_positions(kind, detail::regular_polygon(3, p.spacing));
        case ArrayKind::pentagon:
            detail::require_count(p, 5, "Pentagon");
            return ArrayLayout::from_positions(kind, detail::regular_polygon(5, p.spacing));
        case ArrayKind::spherical_code:
        {
            std::vector<Vec3> dirs;
            if (p.coords_file)
            {
                dirs = read_spherical_code(*p.coords_file);
                if (dirs.empty() || (p.n != 0 && dirs.size() != p.n))
                    throw std::invalid_argument("Spherical-code file has " + std::to_string(dirs.size()) +
                                                " rows, expected " + std::to_string(p.n) + ".");
            }
            else
            {
                if (p.n < 1)
                    throw std::invalid_argument("Spherical code needs n >= 1.");
                dirs = spiral_lattice(p.n);
            }
            std::vector<Vec3> pos;
            for (const auto &u : dirs)
                pos.push_back(0.5 * p.spacing * u);
            return ArrayLayout::from_positions(kind, pos, true);
        }
        case ArrayKind::custom:
            throw std::invalid_argument("Custom layouts are built with ArrayLayout::from_positions.");
        }
        throw std::invalid_argument("Unknown array kind.");
    }

    struct LinkScenario
    {
        double R = 0.0;      // centroid distance (m)
        double beta = 0.0;   // elevation of the receive centroid seen from the transmit pair (rad)
        double lambda = 0.0; // carrier wavelength (m)
        double d_t = 0.0;    // transmit pair spacing (m)
        ArrayLayout tx_layout;
        ArrayLayout rx_layout;
        Rotation U_tx;
        Rotation U_rx;

        Vec3 rx_centroid() const { return {R * std::cos(beta), 0.0, R * std::sin(beta)}; }

        // Unit vector along the receive-frame z'-axis
        Vec3 z_prime() const { return {-std::sin(beta), 0.0, std::cos(beta)}; }

        void validate() const
        {
            if (!(R > 0.0))
                throw std::invalid_argument("Link distance R must be positive.");
            if (!(lambda > 0.0))
                throw std::invalid_argument("Wavelength must be positive.");
            if (tx_layout.size() == 0 || rx_layout.size() == 0)
                throw std::invalid_argument("Scenario needs non-empty transmit and receive layouts.");
        }

        // R >> array extent is assumed throughout; false means the far-field
        // expansions are not trustworthy.
        bool far_field() const
        {
            return R >= 10.0 * std::max(tx_layout.max_radius(), rx_layout.max_radius());
        }
    };

    struct AntennaPositions
    {
        std::vector<Vec3> tx;
        std::vector<Vec3> rx;
    };

    inline AntennaPositions place_antennas(const LinkScenario &s)
    {
        s.validate();
        AntennaPositions out;
        for (const auto &a : s.tx_layout.antennas())
            out.tx.push_back(a.radius * s.U_tx.apply(a.direction));
        const Vec3 c = s.rx_centroid();
        for (const auto &a : s.rx_layout.antennas())
            out.rx.push_back(c + a.radius * s.U_rx.apply(a.direction));
        return out;
    }

    // r(m, n): distance from transmit antenna n to receive antenna m
    inline RMatrix exact_distances(std::span<const Vec3> tx, std::span<const Vec3> rx)
    {
        if (tx.empty() || rx.empty())
            throw std::invalid_argument("Distance computation needs non-empty position lists.");
        RMatrix r(rx.size(), tx.size());
        for (std::size_t m = 0; m < rx.size(); ++m)
            for (std::size_t n = 0; n < tx.size(); ++n)
            {
                const double d = distance(rx[m], tx[n]);
                if (!(d > 0.0))
                    throw std::invalid_argument("Transmit antenna " + std::to_string(n) + " coincides with receive antenna " +
                                                std::to_string(m) + ".");
                r(m, n) = d;
            }
        return r;
    }

    // Far-field approximation of r(m,2) - r(m,1) for the nominal pair
    // (+d_t/2 and -d_t/2 on z, U_tx = I):
    //   d_t sin(beta) + d_t d_m cos(beta) cos(theta_m) / R,
    // where theta_m is the angle between U_rx r_m and the z'-axis.
    inline double approx_path_difference(const LinkScenario &s, std::size_t m)
    {
        const Antenna &a = s.rx_layout[m];
        const double cos_theta = dot(s.U_rx.apply(a.direction), s.z_prime());
        return s.d_t * std::sin(s.beta) + s.d_t * a.radius * std::cos(s.beta) * cos_theta / s.R;
    }
}

#endif
