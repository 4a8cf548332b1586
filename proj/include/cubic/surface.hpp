#pragma once

// Geometry of the affine cubic surfaces
//   S_{A,B,C,D} = { x^2 + y^2 + z^2 + xyz = Ax + By + Cz + D } in C^3
// and the three Vieta involutions that swap the two points of the surface on
// each coordinate line.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <utility>

#include <Eigen/Dense>

#include "error.hpp"

namespace cubic {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3cd;

namespace tol {
inline constexpr double surface = 1e-9;  // relative, times scale(p)
inline constexpr double singular = 1e-8; // relative, times scale(p)
inline constexpr double rank = 1e-10;
} // namespace tol

struct Params {
    cplx A{0.0}, B{0.0}, C{0.0}, D{0.0};

    static Params markoff() { return {0.0, 0.0, 0.0, 0.0}; }
    static Params cayley() { return {0.0, 0.0, 0.0, 4.0}; }
    static Params punctured_torus(cplx d) { return {0.0, 0.0, 0.0, d}; }

    friend bool operator==(const Params&, const Params&) = default;
};

enum class Axis : unsigned char { X = 0, Y = 1, Z = 2 };

inline constexpr std::array<Axis, 3> all_axes{Axis::X, Axis::Y, Axis::Z};

inline constexpr int index(Axis a) { return static_cast<int>(a); }

inline constexpr char letter(Axis a) { return "xyz"[index(a)]; }

struct SurfacePoint {
    cplx x{0.0}, y{0.0}, z{0.0};

    cplx& operator[](Axis a) { return a == Axis::X ? x : (a == Axis::Y ? y : z); }
    const cplx& operator[](Axis a) const { return a == Axis::X ? x : (a == Axis::Y ? y : z); }

    Vec3 vec() const { return Vec3(x, y, z); }
    static SurfacePoint from(const Vec3& v) { return {v(0), v(1), v(2)}; }

    friend bool operator==(const SurfacePoint&, const SurfacePoint&) = default;
};

/// Affine constant c_u of the involution along axis u (A, B or C).
inline cplx affine_constant(Axis a, const Params& params)
{
    switch (a) {
    case Axis::X: return params.A;
    case Axis::Y: return params.B;
    case Axis::Z: return params.C;
    }
    return 0.0;
}

/// The two coordinate axes other than `a`, in cyclic order.
inline std::pair<Axis, Axis> other_axes(Axis a)
{
    switch (a) {
    case Axis::X: return {Axis::Y, Axis::Z};
    case Axis::Y: return {Axis::Z, Axis::X};
    case Axis::Z: return {Axis::X, Axis::Y};
    }
    return {Axis::Y, Axis::Z};
}

inline double max_modulus(const SurfacePoint& p)
{
    return std::max({std::abs(p.x), std::abs(p.y), std::abs(p.z)});
}

inline double min_modulus(const SurfacePoint& p)
{
    return std::min({std::abs(p.x), std::abs(p.y), std::abs(p.z)});
}

/// Tolerance scale (1 + max|coord|)^2 used by every scaled check.
inline double scale(const SurfacePoint& p)
{
    const double s = 1.0 + max_modulus(p);
    return s * s;
}

/// Max-norm distance in C^3.
inline double distance(const SurfacePoint& p, const SurfacePoint& q)
{
    return std::max({std::abs(p.x - q.x), std::abs(p.y - q.y), std::abs(p.z - q.z)});
}

inline double euclidean_distance(const SurfacePoint& p, const SurfacePoint& q)
{
    return (p.vec() - q.vec()).norm();
}

inline bool is_finite(const SurfacePoint& p)
{
    auto fin = [](cplx c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); };
    return fin(p.x) && fin(p.y) && fin(p.z);
}

inline cplx residual(const SurfacePoint& p, const Params& params)
{
    const auto& [x, y, z] = p;
    return x * x + y * y + z * z + x * y * z - params.A * x - params.B * y - params.C * z - params.D;
}

inline bool on_surface(const SurfacePoint& p, const Params& params, double rel_tol = tol::surface)
{
    return std::abs(residual(p, params)) <= rel_tol * scale(p);
}

/// Gradient of the defining polynomial, (2x+yz-A, 2y+xz-B, 2z+xy-C).
inline Vec3 gradient(const SurfacePoint& p, const Params& params)
{
    const auto& [x, y, z] = p;
    return Vec3(2.0 * x + y * z - params.A, 2.0 * y + x * z - params.B, 2.0 * z + x * y - params.C);
}

inline SurfacePoint apply_involution(Axis axis, const SurfacePoint& p, const Params& params)
{
    SurfacePoint q = p;
    switch (axis) {
    case Axis::X: q.x = -p.x - p.y * p.z + params.A; break;
    case Axis::Y: q.y = -p.y - p.x * p.z + params.B; break;
    case Axis::Z: q.z = -p.z - p.x * p.y + params.C; break;
    }
    return q;
}

/// Lexicographic order on (real, imaginary) parts.
inline bool lex_less(cplx a, cplx b)
{
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

/// Roots of t^2 + b t + c, computed without cancellation, ordered by lex_less.
inline std::pair<cplx, cplx> monic_quadratic_roots(cplx b, cplx c)
{
    const cplx sq = std::sqrt(b * b - 4.0 * c);
    // pick the sign that avoids subtracting nearly equal numbers
    const cplx q = (std::real(std::conj(b) * sq) >= 0.0) ? -0.5 * (b + sq) : -0.5 * (b - sq);
    cplx r1 = q;
    cplx r2 = (q != 0.0) ? c / q : cplx(0.0);
    if (lex_less(r2, r1)) std::swap(r1, r2);
    return {r1, r2};
}

/// The two points of the surface on the line parallel to `axis` through the
/// given values of the other two coordinates (in other_axes(axis) order).
/// The first point has the lexicographically smaller free coordinate.
inline std::pair<SurfacePoint, SurfacePoint> solve_fiber(Axis axis, cplx first, cplx second,
                                                         const Params& params)
{
    SurfacePoint base;
    const auto [ao, bo] = other_axes(axis);
    base[ao] = first;
    base[bo] = second;
    // t^2 + t (vw - c_u) + (v^2 + w^2 - c_v v - c_w w - D)
    const cplx lin = first * second - affine_constant(axis, params);
    const cplx cst = first * first + second * second - affine_constant(ao, params) * first -
                     affine_constant(bo, params) * second - params.D;
    const auto [r1, r2] = monic_quadratic_roots(lin, cst);
    SurfacePoint p1 = base, p2 = base;
    p1[axis] = r1;
    p2[axis] = r2;
    return {p1, p2};
}

inline Mat3 jacobian_involution(Axis axis, const SurfacePoint& p)
{
    Mat3 j = Mat3::Identity();
    switch (axis) {
    case Axis::X: j.row(0) << -1.0, -p.z, -p.y; break;
    case Axis::Y: j.row(1) << -p.z, -1.0, -p.x; break;
    case Axis::Z: j.row(2) << -p.y, -p.x, -1.0; break;
    }
    return j;
}

/// Two tangent vectors at a smooth point. Each is a coordinate direction
/// projected along the dominant gradient direction, so that t1 and t2 have the
/// identity as their minor on the coordinates `free_a`, `free_b`.
struct TangentFrame {
    Vec3 t1, t2;
    int free_a = 0, free_b = 1;
};

inline TangentFrame tangent_frame(const SurfacePoint& p, const Params& params)
{
    const Vec3 g = gradient(p, params);
    if (g.norm() <= tol::singular * scale(p))
        throw Error(ErrorKind::SingularPoint, "gradient vanishes; no tangent frame");
    int k = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(g(i)) > std::abs(g(k))) k = i;
    TangentFrame f;
    f.free_a = (k + 1) % 3;
    f.free_b = (k + 2) % 3;
    if (f.free_a > f.free_b) std::swap(f.free_a, f.free_b);
    f.t1 = Vec3::Zero();
    f.t2 = Vec3::Zero();
    f.t1(f.free_a) = 1.0;
    f.t1(k) = -g(f.free_a) / g(k);
    f.t2(f.free_b) = 1.0;
    f.t2(k) = -g(f.free_b) / g(k);
    return f;
}

namespace detail {

// Denominator and wedge component of the two-form in the chart omitting `a`:
// chart Z uses dx^dy / (2z+xy-C), chart X dy^dz / (2x+yz-A), chart Y dz^dx / (2y+zx-B).
inline cplx chart_denominator(Axis a, const Vec3& grad) { return grad(index(a)); }

inline cplx chart_wedge(Axis a, const Vec3& t1, const Vec3& t2)
{
    switch (a) {
    case Axis::X: return t1(1) * t2(2) - t1(2) * t2(1);
    case Axis::Y: return t1(2) * t2(0) - t1(0) * t2(2);
    case Axis::Z: return t1(0) * t2(1) - t1(1) * t2(0);
    }
    return 0.0;
}

} // namespace detail

/// Value of the invariant holomorphic two-form on (t1, t2) at p. Without an
/// explicit chart, the chart with the largest denominator modulus is used.
inline cplx two_form(const SurfacePoint& p, const Vec3& t1, const Vec3& t2, const Params& params,
                     std::optional<Axis> chart = std::nullopt)
{
    const Vec3 g = gradient(p, params);
    const double floor = tol::singular * scale(p);
    Axis use = Axis::X;
    if (chart) {
        use = *chart;
    } else {
        for (Axis a : all_axes)
            if (std::abs(g(index(a))) > std::abs(g(index(use)))) use = a;
    }
    if (std::abs(detail::chart_denominator(use, g)) <= floor)
        throw Error(ErrorKind::DegenerateChart, "two-form chart denominator vanishes");
    return detail::chart_wedge(use, t1, t2) / detail::chart_denominator(use, g);
}

inline cplx two_form(const SurfacePoint& p, const TangentFrame& f, const Params& params,
                     std::optional<Axis> chart = std::nullopt)
{
    return two_form(p, f.t1, f.t2, params, chart);
}

inline bool is_singular(const SurfacePoint& p, const Params& params)
{
    const double s = scale(p);
    return std::abs(residual(p, params)) <= tol::surface * s &&
           gradient(p, params).norm() <= tol::singular * s;
}

} // namespace cubic
