#pragma once

// The Cayley cubic S_{0,0,0,4} as a quotient of C* x C*: the covering map
// Phi, monomial maps eta_M, and periodic points of the torus dynamics.
//
// Phi(u,v) = (-u-1/u, -v-1/v, -u/v-v/u) intertwines eta_{JMJ} with the
// surface automorphism of M, where J = diag(1,-1): Phi(u,v) is the Fricke
// image of the diagonal representation (a,b) -> (diag(-u, -1/u), diag(-1/v, -v)),
// and the inversion of v conjugates the exponent matrix by J.

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <vector>

#include <boost/multiprecision/cpp_complex.hpp>
#include <boost/rational.hpp>

#include "error.hpp"
#include "surface.hpp"
#include "word.hpp"

namespace cubic {

struct TorusPoint {
    cplx u{1.0}, v{1.0};

    TorusPoint() = default;
    TorusPoint(cplx u_, cplx v_) : u(u_), v(v_)
    {
        if (u == 0.0 || v == 0.0) throw Error(ErrorKind::InvalidArgument, "torus point has a zero coordinate");
    }

    /// Image under the central involution (u,v) -> (1/u, 1/v).
    TorusPoint central_inverse() const { return {1.0 / u, 1.0 / v}; }
};

using Rational = boost::rational<std::int64_t>;

/// Exact rational point of the real torus R^2/Z^2, coordinates in [0,1).
class AngleVector {
public:
    AngleVector() = default;
    AngleVector(Rational t1, Rational t2) : t1_(wrap(t1)), t2_(wrap(t2)) {}

    const Rational& theta1() const { return t1_; }
    const Rational& theta2() const { return t2_; }

    /// (e^{2 pi i theta1}, e^{2 pi i theta2}).
    TorusPoint torus_point() const { return {unit(t1_), unit(t2_)}; }

    friend bool operator==(const AngleVector&, const AngleVector&) = default;
    friend bool operator<(const AngleVector& l, const AngleVector& r)
    {
        if (l.t1_ != r.t1_) return l.t1_ < r.t1_;
        return l.t2_ < r.t2_;
    }

    static Rational wrap(Rational t)
    {
        const std::int64_t n = t.numerator(), d = t.denominator();
        std::int64_t r = n % d;
        if (r < 0) r += d;
        return Rational(r, d);
    }

    static cplx unit(const Rational& t)
    {
        return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(t.numerator()) /
                                   static_cast<double>(t.denominator()));
    }

private:
    Rational t1_{0}, t2_{0};
};

/// Conjugation by diag(1,-1): (a,b;c,d) -> (a,-b;-c,d).
inline IntMatrix2 flip_conjugate(const IntMatrix2& m) { return {m.a, -m.b, -m.c, m.d}; }

namespace detail {

template <class C>
C int_pow(C base, std::int64_t e)
{
    if (e < 0) {
        base = C(1) / base;
        e = -e;
    }
    C result(1);
    while (e > 0) {
        if (e & 1) result *= base;
        base *= base;
        e >>= 1;
    }
    return result;
}

template <class C>
std::array<C, 3> phi_generic(const C& u, const C& v)
{
    return {-u - C(1) / u, -v - C(1) / v, -u / v - v / u};
}

template <class C>
std::array<C, 2> eta_generic(const IntMatrix2& m, const C& u, const C& v)
{
    return {int_pow(u, m.a) * int_pow(v, m.b), int_pow(u, m.c) * int_pow(v, m.d)};
}

// Word action on the Cayley cubic (A = B = C = 0; D does not enter the maps).
template <class C>
std::array<C, 3> apply_word_generic(const Word& w, std::array<C, 3> p)
{
    const auto& ls = w.letters();
    for (auto it = ls.rbegin(); it != ls.rend(); ++it) {
        switch (*it) {
        case Axis::X: p[0] = -p[0] - p[1] * p[2]; break;
        case Axis::Y: p[1] = -p[1] - p[0] * p[2]; break;
        case Axis::Z: p[2] = -p[2] - p[0] * p[1]; break;
        }
    }
    return p;
}

} // namespace detail

inline SurfacePoint phi(const TorusPoint& t)
{
    const auto c = detail::phi_generic(t.u, t.v);
    return {c[0], c[1], c[2]};
}

inline TorusPoint eta(const IntMatrix2& m, const TorusPoint& t)
{
    const auto r = detail::eta_generic(m, t.u, t.v);
    return {r[0], r[1]};
}

/// Preimages of a point of the Cayley cubic, one representative per orbit of
/// the central involution.
inline std::vector<TorusPoint> lift_phi(const SurfacePoint& p)
{
    constexpr double z_tol = 1e-8;
    const double s = scale(p);
    if (std::abs(residual(p, Params::cayley())) > z_tol * s)
        throw Error(ErrorKind::NoConsistentLift, "point is not on the Cayley cubic");
    const auto [u1, u2] = monic_quadratic_roots(p.x, 1.0);
    const auto [v1, v2] = monic_quadratic_roots(p.y, 1.0);
    std::vector<TorusPoint> out;
    auto same_fiber = [](const TorusPoint& a, const TorusPoint& b) {
        auto close = [](const TorusPoint& l, const TorusPoint& r) {
            return std::abs(l.u - r.u) <= 1e-12 * (1.0 + std::abs(l.u)) &&
                   std::abs(l.v - r.v) <= 1e-12 * (1.0 + std::abs(l.v));
        };
        return close(a, b) || close(a, b.central_inverse());
    };
    for (cplx u : {u1, u2}) {
        for (cplx v : {v1, v2}) {
            if (u == 0.0 || v == 0.0) continue;
            const TorusPoint t{u, v};
            if (std::abs(phi(t).z - p.z) > z_tol * s) continue;
            if (std::none_of(out.begin(), out.end(), [&](const TorusPoint& o) { return same_fiber(o, t); }))
                out.push_back(t);
        }
    }
    if (out.empty()) throw Error(ErrorKind::NoConsistentLift, "no root combination reproduces z");
    return out;
}

/// Max-norm defect of Phi o eta = f_w o Phi at t. Both sides are evaluated in
/// 50-digit arithmetic: for long words the image coordinates grow like
/// |u|^F_n, beyond what an absolute double-precision comparison can resolve.
inline double semiconjugacy_error(const Word& w, const TorusPoint& t)
{
    using HP = boost::multiprecision::cpp_complex_50;
    const HP u(t.u.real(), t.u.imag());
    const HP v(t.v.real(), t.v.imag());
    const IntMatrix2 m = flip_conjugate(word_to_matrix(w));
    const auto moved = detail::eta_generic(m, u, v);
    const auto lhs = detail::phi_generic(moved[0], moved[1]);
    const auto rhs = detail::apply_word_generic(w, detail::phi_generic(u, v));
    double err = 0.0;
    for (int i = 0; i < 3; ++i) err = std::max(err, static_cast<double>(abs(lhs[i] - rhs[i])));
    return err;
}

struct SmithForm {
    IntMatrix2 left, diag, right; // left * N * right = diag, diag(0) | diag(1)
};

/// Smith normal form of a 2x2 integer matrix by gcd row/column elimination.
inline SmithForm smith_normal_form(const IntMatrix2& n)
{
    // rows/cols as arrays for in-place elementary operations
    std::int64_t m[2][2] = {{n.a, n.b}, {n.c, n.d}};
    std::int64_t u[2][2] = {{1, 0}, {0, 1}};
    std::int64_t v[2][2] = {{1, 0}, {0, 1}};

    auto row_addmul = [&](int dst, int src, std::int64_t q) { // row_dst -= q row_src
        for (int j = 0; j < 2; ++j) {
            m[dst][j] -= q * m[src][j];
            u[dst][j] -= q * u[src][j];
        }
    };
    auto col_addmul = [&](int dst, int src, std::int64_t q) { // col_dst -= q col_src
        for (int i = 0; i < 2; ++i) {
            m[i][dst] -= q * m[i][src];
            v[i][dst] -= q * v[i][src];
        }
    };
    auto swap_rows = [&] {
        std::swap(m[0], m[1]);
        std::swap(u[0], u[1]);
    };
    auto swap_cols = [&] {
        for (int i = 0; i < 2; ++i) {
            std::swap(m[i][0], m[i][1]);
            std::swap(v[i][0], v[i][1]);
        }
    };

    for (;;) {
        // move the smallest nonzero entry to the pivot
        int bi = -1, bj = -1;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                if (m[i][j] != 0 && (bi < 0 || std::abs(m[i][j]) < std::abs(m[bi][bj]))) {
                    bi = i;
                    bj = j;
                }
        if (bi < 0) break; // zero matrix
        if (bi == 1) swap_rows();
        if (bj == 1) swap_cols();

        if (m[1][0] != 0) {
            row_addmul(1, 0, m[1][0] / m[0][0]);
            if (m[1][0] != 0) continue;
        }
        if (m[0][1] != 0) {
            col_addmul(1, 0, m[0][1] / m[0][0]);
            if (m[0][1] != 0) continue;
        }
        if (m[1][1] % m[0][0] != 0) {
            row_addmul(0, 1, -1); // row0 += row1, then re-reduce
            continue;
        }
        break;
    }
    for (int i = 0; i < 2; ++i) {
        if (m[i][i] < 0) {
            m[i][i] = -m[i][i];
            u[i][0] = -u[i][0];
            u[i][1] = -u[i][1];
        }
    }
    return {{u[0][0], u[0][1], u[1][0], u[1][1]},
            {m[0][0], m[0][1], m[1][0], m[1][1]},
            {v[0][0], v[0][1], v[1][0], v[1][1]}};
}

/// All theta in (Q/Z)^2 with (M^k - I) theta = 0 mod Z^2, sorted.
inline std::vector<AngleVector> torus_periodic_points(const IntMatrix2& m, int k)
{
    if (k < 1) throw Error(ErrorKind::InvalidArgument, "period must be >= 1");
    const IntMatrix2 n = m.pow(k) - IntMatrix2::identity();
    if (n.det() == 0) throw Error(ErrorKind::DegenerateLevel, "det(M^k - I) = 0");
    const SmithForm snf = smith_normal_form(n);
    const std::int64_t d1 = snf.diag.a, d2 = snf.diag.d;
    const IntMatrix2& v = snf.right;
    std::vector<AngleVector> out;
    out.reserve(static_cast<std::size_t>(d1 * d2));
    for (std::int64_t j1 = 0; j1 < d1; ++j1) {
        for (std::int64_t j2 = 0; j2 < d2; ++j2) {
            const Rational p1(j1, d1), p2(j2, d2);
            out.emplace_back(p1 * v.a + p2 * v.b, p1 * v.c + p2 * v.d);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Phi-images of the period-k points of theta -> M theta. Each is fixed by
/// f_M^k; theta maps to (e^{2 pi i theta1}, e^{-2 pi i theta2}) to account for
/// the J-conjugation in Phi.
inline std::vector<SurfacePoint> saddle_sample(const IntMatrix2& m, int k)
{
    std::vector<SurfacePoint> out;
    for (const AngleVector& a : torus_periodic_points(m, k)) {
        const TorusPoint t{AngleVector::unit(a.theta1()), std::conj(AngleVector::unit(a.theta2()))};
        out.push_back(phi(t));
    }
    return out;
}

} // namespace cubic
