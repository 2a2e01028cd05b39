// Four-vector kinematics in the mostly-plus metric diag[-1,+1,+1,+1].
// Invariant squares are negative for timelike momenta: square(on_shell(p,m)) = -m^2.

#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace gksl {

struct Vec3 {
    double x{0.0}, y{0.0}, z{0.0};

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double c) const { return {c * x, c * y, c * z}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const;
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
};

struct FourVector {
    double t{0.0};  // energy component
    double x{0.0}, y{0.0}, z{0.0};

    FourVector() = default;
    FourVector(double t_, double x_, double y_, double z_) : t(t_), x(x_), y(y_), z(z_) {}
    FourVector(double t_, const Vec3& p) : t(t_), x(p.x), y(p.y), z(p.z) {}

    Vec3 spatial() const { return {x, y, z}; }

    FourVector operator+(const FourVector& o) const { return {t + o.t, x + o.x, y + o.y, z + o.z}; }
    FourVector operator-(const FourVector& o) const { return {t - o.t, x - o.x, y - o.y, z - o.z}; }
    FourVector operator*(double c) const { return {c * t, c * x, c * y, c * z}; }
};

// Minkowski product in diag[-1,1,1,1]: a.b = -a0 b0 + a.b
inline double dot(const FourVector& a, const FourVector& b) {
    return -a.t * b.t + a.x * b.x + a.y * b.y + a.z * b.z;
}

// square(v) = v.v; equals -m^2 for an on-shell momentum of mass m.
inline double square(const FourVector& v) { return dot(v, v); }

// On-shell four-momentum: t component = sqrt(|p|^2 + m^2).
FourVector on_shell(const Vec3& three_momentum, double mass);

// Boost by rapidity along a unit axis. Throws std::invalid_argument for a
// non-unit axis. boost(v, 0, axis) == v exactly.
FourVector boost(const FourVector& v, double rapidity, const Vec3& axis);

// Rotation by angle about a unit axis (Rodrigues), acting on the spatial part.
FourVector rotate(const FourVector& v, double angle, const Vec3& axis);

// Boost that maps the rest frame of `total` to the frame where `total` lives,
// i.e. lab(k) for k given in the CM frame of `total`. `total` must be timelike.
FourVector boost_from_rest_frame(const FourVector& k_cm, const FourVector& total);

// Inverse of the above: maps lab-frame k into the rest frame of `total`.
FourVector boost_to_rest_frame(const FourVector& k_lab, const FourVector& total);

struct Mandelstam {
    double s{0.0}, t{0.0}, u{0.0};
};

// s = (p1+p2)^2, t = (p1-pbar1)^2, u = (p1-pbar2)^2.
// In this metric s = -E_cm^2 < 0 for physical timelike total momentum.
Mandelstam mandelstam(const FourVector& p1, const FourVector& p2,
                      const FourVector& pbar1, const FourVector& pbar2);

}  // namespace gksl
