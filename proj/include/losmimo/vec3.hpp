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

#ifndef LOSMIMO_VEC3_HPP
#define LOSMIMO_VEC3_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace losmimo
{
    // Cartesian 3-vector in meters (or dimensionless for directions)
    struct Vec3
    {
        double x = 0.0, y = 0.0, z = 0.0;

        constexpr Vec3 &operator+=(const Vec3 &o)
        {
            x += o.x, y += o.y, z += o.z;
            return *this;
        }
        constexpr Vec3 &operator-=(const Vec3 &o)
        {
            x -= o.x, y -= o.y, z -= o.z;
            return *this;
        }
        constexpr Vec3 &operator*=(double s)
        {
            x *= s, y *= s, z *= s;
            return *this;
        }
        friend constexpr bool operator==(const Vec3 &, const Vec3 &) = default;
    };

    constexpr Vec3 operator+(Vec3 a, const Vec3 &b) { return a += b; }
    constexpr Vec3 operator-(Vec3 a, const Vec3 &b) { return a -= b; }
    constexpr Vec3 operator-(const Vec3 &a) { return {-a.x, -a.y, -a.z}; }
    constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
    constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }

    constexpr double dot(const Vec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
    constexpr Vec3 cross(const Vec3 &a, const Vec3 &b)
    {
        return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
    }
    inline double norm(const Vec3 &a) { return std::sqrt(dot(a, a)); }
    inline double distance(const Vec3 &a, const Vec3 &b) { return norm(a - b); }

    inline Vec3 normalized(const Vec3 &a)
    {
        const double n = norm(a);
        if (n == 0.0)
            throw std::domain_error("Cannot normalize the zero vector.");
        return (1.0 / n) * a;
    }

    inline constexpr Vec3 e_x{1.0, 0.0, 0.0};
    inline constexpr Vec3 e_y{0.0, 1.0, 0.0};
    inline constexpr Vec3 e_z{0.0, 0.0, 1.0};

    // Proper rotation in R^3, stored row-major. Construction does not verify
    // orthogonality; use is_proper_rotation() where input is untrusted.
    class Rotation
    {
    public:
        using Matrix = std::array<std::array<double, 3>, 3>;

        constexpr Rotation() : m_{{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}} {}
        constexpr explicit Rotation(const Matrix &m) : m_(m) {}

        static constexpr Rotation identity() { return Rotation(); }

        // Unit quaternion (w, x, y, z) to rotation matrix; q is normalized internally
        static Rotation from_quaternion(double w, double x, double y, double z)
        {
            const double n = std::sqrt(w * w + x * x + y * y + z * z);
            if (n == 0.0)
                throw std::domain_error("Zero quaternion has no rotation.");
            w /= n, x /= n, y /= n, z /= n;
            return Rotation(Matrix{{{1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)},
                                    {2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)},
                                    {2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)}}});
        }

        // Right-handed rotation by angle (rad) about a unit axis
        static Rotation axis_angle(const Vec3 &axis, double angle)
        {
            const Vec3 a = normalized(axis);
            const double s = std::sin(0.5 * angle);
            return from_quaternion(std::cos(0.5 * angle), s * a.x, s * a.y, s * a.z);
        }

        constexpr double operator()(int r, int c) const { return m_[r][c]; }
        constexpr const Matrix &matrix() const { return m_; }

        constexpr Vec3 apply(const Vec3 &v) const
        {
            return {m_[0][0] * v.x + m_[0][1] * v.y + m_[0][2] * v.z,
                    m_[1][0] * v.x + m_[1][1] * v.y + m_[1][2] * v.z,
                    m_[2][0] * v.x + m_[2][1] * v.y + m_[2][2] * v.z};
        }
        constexpr Vec3 operator*(const Vec3 &v) const { return apply(v); }

        constexpr Rotation transpose() const
        {
            Matrix t{};
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    t[i][j] = m_[j][i];
            return Rotation(t);
        }

        constexpr Rotation operator*(const Rotation &o) const
        {
            Matrix p{};
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    p[i][j] = m_[i][0] * o.m_[0][j] + m_[i][1] * o.m_[1][j] + m_[i][2] * o.m_[2][j];
            return Rotation(p);
        }

        constexpr double determinant() const
        {
            return m_[0][0] * (m_[1][1] * m_[2][2] - m_[1][2] * m_[2][1]) -
                   m_[0][1] * (m_[1][0] * m_[2][2] - m_[1][2] * m_[2][0]) +
                   m_[0][2] * (m_[1][0] * m_[2][1] - m_[1][1] * m_[2][0]);
        }

        // max |U U^T - I| entry
        double orthogonality_error() const
        {
            const Rotation p = *this * transpose();
            double e = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    e = std::max(e, std::abs(p.m_[i][j] - (i == j ? 1.0 : 0.0)));
            return e;
        }

        bool is_proper_rotation(double tol = 1e-12) const
        {
            return orthogonality_error() <= tol && std::abs(determinant() - 1.0) <= tol;
        }

        friend constexpr bool operator==(const Rotation &, const Rotation &) = default;

    private:
        Matrix m_;
    };
}

#endif
