#pragma once

// SL(2,C) trace coordinates for the once-punctured torus and the
// four-holed-sphere parameter formulas.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "error.hpp"
#include "surface.hpp"

namespace cubic {

using Mat2 = Eigen::Matrix2cd;

class SL2 {
public:
    static constexpr double det_tol = 1e-10;

    SL2() : m_(Mat2::Identity()) {}

    explicit SL2(const Mat2& m) : m_(m)
    {
        if (std::abs(m.determinant() - 1.0) > det_tol)
            throw Error(ErrorKind::InvalidArgument, "matrix is not in SL(2,C)");
    }

    SL2(cplx m11, cplx m12, cplx m21, cplx m22) : SL2(make(m11, m12, m21, m22)) {}

    const Mat2& matrix() const { return m_; }
    cplx trace() const { return m_.trace(); }

    /// Adjugate inverse; exact for unit determinant.
    SL2 inverse() const
    {
        Mat2 inv;
        inv << m_(1, 1), -m_(0, 1), -m_(1, 0), m_(0, 0);
        return unchecked(inv);
    }

    friend SL2 operator*(const SL2& l, const SL2& r) { return unchecked(l.m_ * r.m_); }

    /// Draws (m11, m12, m21) uniformly in the disc of the given radius and
    /// solves for m22 so that the determinant is exactly one.
    template <class Rng>
    static SL2 random(Rng& rng, double radius)
    {
        for (;;) {
            const cplx m11 = random_in_disc(rng, radius);
            if (std::abs(m11) < 0.1) continue;
            const cplx m12 = random_in_disc(rng, radius);
            const cplx m21 = random_in_disc(rng, radius);
            return unchecked(make(m11, m12, m21, (1.0 + m12 * m21) / m11));
        }
    }

    template <class Rng>
    static cplx random_in_disc(Rng& rng, double radius)
    {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double r = radius * std::sqrt(u(rng));
        const double t = 2.0 * std::numbers::pi * u(rng);
        return std::polar(r, t);
    }

private:
    static Mat2 make(cplx m11, cplx m12, cplx m21, cplx m22)
    {
        Mat2 m;
        m << m11, m12, m21, m22;
        return m;
    }

    static SL2 unchecked(const Mat2& m)
    {
        SL2 s;
        s.m_ = m;
        return s;
    }

    Mat2 m_;
};

/// Images of the free generators a, b of the fundamental group.
struct RepPair {
    SL2 a, b;
};

/// (tr a, tr b, -tr ab). Note the sign on the last coordinate, which puts the
/// image on x^2+y^2+z^2+xyz = tr[a,b] + 2.
inline SurfacePoint fricke_coords(const RepPair& rep)
{
    return {rep.a.trace(), rep.b.trace(), -(rep.a * rep.b).trace()};
}

inline cplx commutator_trace(const RepPair& rep)
{
    return (rep.a * rep.b * rep.a.inverse() * rep.b.inverse()).trace();
}

/// Max error over tr M = tr M^-1, tr MN = tr NM, tr MN = tr M tr N - tr MN^-1.
inline double check_trace_relations(const SL2& m, const SL2& n)
{
    const cplx tr_mn = (m * n).trace();
    const double e1 = std::abs(m.trace() - m.inverse().trace());
    const double e2 = std::abs(tr_mn - (n * m).trace());
    const double e3 = std::abs(tr_mn - m.trace() * n.trace() + (m * n.inverse()).trace());
    return std::max({e1, e2, e3});
}

struct PunctureTraces {
    cplx a1{0.0}, a2{0.0}, a3{0.0}, a4{0.0};
};

inline Params params_from_puncture_traces(const PunctureTraces& t)
{
    const auto& [a1, a2, a3, a4] = t;
    return {a1 * a4 + a2 * a3, a2 * a4 + a1 * a3, a3 * a4 + a1 * a2,
            4.0 - (a1 * a2 * a3 * a4 + a1 * a1 + a2 * a2 + a3 * a3 + a4 * a4)};
}

/// Representation precomposed with the free-group automorphism that realises
/// the involution along `axis`:
///   X: (a^-1 b^-2, b),  Y: (a, a^-2 b^-1),  Z: (a, b^-1).
inline RepPair precompose(Axis axis, const RepPair& rep)
{
    const SL2 ai = rep.a.inverse();
    const SL2 bi = rep.b.inverse();
    switch (axis) {
    case Axis::X: return {ai * bi * bi, rep.b};
    case Axis::Y: return {rep.a, ai * ai * bi};
    case Axis::Z: return {rep.a, bi};
    }
    return rep;
}

/// Max coordinate deviation between the Fricke coordinates of the
/// precomposed representation and the involution applied to the original.
inline double equivariance_check(Axis axis, const RepPair& rep)
{
    const SurfacePoint lhs = fricke_coords(precompose(axis, rep));
    const SurfacePoint rhs = apply_involution(axis, fricke_coords(rep), Params{});
    return distance(lhs, rhs);
}

} // namespace cubic
