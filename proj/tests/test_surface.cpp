#include <random>

#include <gtest/gtest.h>

#include "cubic/surface.hpp"
#include "cubic/verify.hpp"
#include "oracles.hpp"

using namespace cubic;

namespace {

oracle::P3 arr(const SurfacePoint& p) { return {p.x, p.y, p.z}; }

double max_diff(const SurfacePoint& p, const oracle::P3& q)
{
    return std::max({std::abs(p.x - q[0]), std::abs(p.y - q[1]), std::abs(p.z - q[2])});
}

} // namespace

TEST(Residual, Examples)
{
    EXPECT_EQ(residual({-3.0, -3.0, -3.0}, Params::markoff()), cplx(0.0));
    EXPECT_EQ(residual({-2.0, -2.0, -2.0}, Params::cayley()), cplx(0.0));
    EXPECT_EQ(residual({0.0, 0.0, 0.0}, Params::markoff()), cplx(0.0));
    // 1 + 1 + 1 + 1 - 1 - 2 - 3 - 4
    EXPECT_EQ(residual({1.0, 1.0, 1.0}, {1.0, 2.0, 3.0, 4.0}), cplx(-6.0));
}

TEST(Involution, Examples)
{
    EXPECT_EQ(apply_involution(Axis::X, {-3.0, -3.0, -3.0}, Params::markoff()), (SurfacePoint{-6.0, -3.0, -3.0}));
    EXPECT_EQ(apply_involution(Axis::X, {0.0, 1.0, 1.0}, {1.0, 0.0, 0.0, 0.0}), (SurfacePoint{0.0, 1.0, 1.0}));
    EXPECT_EQ(residual({-6.0, -3.0, -3.0}, Params::markoff()), cplx(0.0));
}

TEST(Involution, MatchesOracleAndSquaresToIdentity)
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 2000; ++i) {
        const Params pr = verify::detail::random_params(rng, 3.0);
        const SurfacePoint p{verify::detail::disc(rng, 10.0), verify::detail::disc(rng, 10.0),
                             verify::detail::disc(rng, 10.0)};
        for (Axis a : all_axes) {
            const SurfacePoint q = apply_involution(a, p, pr);
            EXPECT_LE(max_diff(q, oracle::involve(letter(a), arr(p), pr.A, pr.B, pr.C)), 1e-12 * scale(p));
            EXPECT_LE(distance(apply_involution(a, q, pr), p), 1e-12 * scale(p));
        }
    }
}

TEST(SolveFiber, Examples)
{
    auto [p1, p2] = solve_fiber(Axis::X, -3.0, -3.0, Params::markoff());
    EXPECT_NEAR(std::abs(p1.x - cplx(-6.0)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(p2.x - cplx(-3.0)), 0.0, 1e-14);
    EXPECT_EQ(p1.y, cplx(-3.0));
    EXPECT_EQ(p1.z, cplx(-3.0));

    auto [q1, q2] = solve_fiber(Axis::X, 0.0, 0.0, Params::cayley());
    EXPECT_NEAR(std::abs(q1.x - cplx(-2.0)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(q2.x - cplx(2.0)), 0.0, 1e-14);
}

TEST(SolveFiber, DoubleRootReturnedTwice)
{
    // x^2 + 0x + 0 at (y,z) = (0,0), D = 0
    auto [p1, p2] = solve_fiber(Axis::X, 0.0, 0.0, Params::markoff());
    EXPECT_EQ(p1, p2);
}

TEST(SolveFiber, OtherAxesOrderAndVietaSwap)
{
    const Params pr{0.5, -1.0, cplx(0.0, 2.0), 3.0};
    // axis Y: pair given as (z, x)
    auto [p1, p2] = solve_fiber(Axis::Y, 1.5, cplx(0.0, -1.0), pr);
    EXPECT_EQ(p1.z, cplx(1.5));
    EXPECT_EQ(p1.x, cplx(0.0, -1.0));
    EXPECT_LE(std::abs(residual(p1, pr)), 1e-12 * scale(p1));
    EXPECT_LE(std::abs(residual(p2, pr)), 1e-12 * scale(p2));
    EXPECT_LE(distance(apply_involution(Axis::Y, p1, pr), p2), 1e-12 * scale(p1));
}

TEST(Jacobian, DeterminantAndChainRule)
{
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        const SurfacePoint p{verify::detail::disc(rng, 5.0), verify::detail::disc(rng, 5.0),
                             verify::detail::disc(rng, 5.0)};
        const Params pr = verify::detail::random_params(rng, 2.0);
        for (Axis a : all_axes) {
            const Mat3 j = jacobian_involution(a, p);
            EXPECT_LE(std::abs(j.determinant() + 1.0), 1e-12 * scale(p));
            const Mat3 jj = jacobian_involution(a, apply_involution(a, p, pr)) * j;
            EXPECT_LE((jj - Mat3::Identity()).norm(), 1e-12 * scale(p));
            // finite differences against the formula
            for (int k = 0; k < 3; ++k) {
                const double h = 1e-6;
                Vec3 e = Vec3::Zero();
                e(k) = h;
                const Vec3 fd = (apply_involution(a, SurfacePoint::from(p.vec() + e), pr).vec() -
                                 apply_involution(a, SurfacePoint::from(p.vec() - e), pr).vec()) /
                                (2.0 * h);
                EXPECT_LE((fd - j.col(k)).norm(), 1e-6 * scale(p));
            }
        }
    }
    const Mat3 j0 = jacobian_involution(Axis::X, {0.0, 0.0, 0.0});
    EXPECT_EQ(j0.row(0), (Eigen::RowVector3cd(-1.0, 0.0, 0.0)));
}

TEST(TangentFrame, AnnihilatesGradient)
{
    const SurfacePoint p{-3.0, -3.0, -3.0};
    const TangentFrame f = tangent_frame(p, Params::markoff());
    const Vec3 g = gradient(p, Params::markoff());
    EXPECT_EQ(g, Vec3(3.0, 3.0, 3.0));
    EXPECT_LE(std::abs(g.dot(f.t1.conjugate())), 1e-12 * scale(p));
    EXPECT_LE(std::abs((g.transpose() * f.t1).value()), 1e-12 * scale(p));
    EXPECT_LE(std::abs((g.transpose() * f.t2).value()), 1e-12 * scale(p));
    EXPECT_THROW(tangent_frame({0.0, 0.0, 0.0}, Params::markoff()), Error);
    try {
        tangent_frame({0.0, 0.0, 0.0}, Params::markoff());
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SingularPoint);
    }
}

TEST(TangentFrame, IndependentOnRandomPoints)
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 500; ++i) {
        const Params pr = verify::detail::random_params(rng, 3.0);
        const SurfacePoint p = verify::detail::random_surface_point(rng, pr, 5.0);
        if (is_singular(p, pr)) continue;
        const TangentFrame f = tangent_frame(p, pr);
        const Vec3 g = gradient(p, pr);
        EXPECT_LE(std::abs((g.transpose() * f.t1).value()), tol::surface * scale(p));
        EXPECT_LE(std::abs((g.transpose() * f.t2).value()), tol::surface * scale(p));
        const cplx minor = f.t1(f.free_a) * f.t2(f.free_b) - f.t1(f.free_b) * f.t2(f.free_a);
        EXPECT_GT(std::abs(minor), tol::rank);
    }
}

TEST(TwoForm, ChartsAgreeAndInvolutionsFlipSign)
{
    const SurfacePoint p{-3.0, -3.0, -3.0};
    const Params pr = Params::markoff();
    const TangentFrame f = tangent_frame(p, pr);
    const cplx om = two_form(p, f, pr);
    for (Axis c : all_axes) EXPECT_LE(std::abs(two_form(p, f, pr, c) - om), 1e-12 * std::abs(om));
    EXPECT_EQ(two_form(p, f.t2, f.t1, pr), -om);
    for (Axis a : all_axes) {
        const Mat3 j = jacobian_involution(a, p);
        const cplx pulled = two_form(apply_involution(a, p, pr), Vec3(j * f.t1), Vec3(j * f.t2), pr);
        EXPECT_LE(std::abs(pulled + om), 1e-9 * std::abs(om));
    }
}

TEST(TwoForm, DegenerateChartAtSingularPoint)
{
    const Vec3 t(1.0, 0.0, 0.0);
    try {
        two_form({0.0, 0.0, 0.0}, t, t, Params::markoff());
        FAIL() << "expected DegenerateChart";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateChart);
    }
}

TEST(TwoForm, PropertySuite)
{
    const auto r = verify::two_form_suite();
    for (const auto& c : r.checks) EXPECT_TRUE(c.pass) << c.name << " = " << c.value;
}

TEST(Singular, Examples)
{
    EXPECT_TRUE(is_singular({-2.0, 2.0, 2.0}, Params::cayley()));
    EXPECT_TRUE(is_singular({0.0, 0.0, 0.0}, Params::markoff()));
    EXPECT_FALSE(is_singular({-3.0, -3.0, -3.0}, Params::markoff()));
}

TEST(Singular, ExactlyTheKnownPointsOnLocalGrids)
{
    // grid of spacing 1e-3 around each candidate; only the center is singular
    auto count_on_grid = [](const SurfacePoint& c, const Params& pr) {
        int hits = 0;
        for (int i = -3; i <= 3; ++i)
            for (int j = -3; j <= 3; ++j)
                for (int k = -3; k <= 3; ++k)
                    hits += is_singular({c.x + 1e-3 * i, c.y + 1e-3 * j, c.z + 1e-3 * k}, pr);
        return hits;
    };
    for (SurfacePoint c : {SurfacePoint{-2.0, -2.0, -2.0}, SurfacePoint{-2.0, 2.0, 2.0}, SurfacePoint{2.0, -2.0, 2.0},
                           SurfacePoint{2.0, 2.0, -2.0}})
        EXPECT_EQ(count_on_grid(c, Params::cayley()), 1);
    EXPECT_EQ(count_on_grid({0.0, 0.0, 0.0}, Params::markoff()), 1);
    // other sign patterns of the Cayley cube corners are not even on the surface
    EXPECT_FALSE(is_singular({2.0, 2.0, 2.0}, Params::cayley()));
    EXPECT_FALSE(is_singular({-2.0, -2.0, 2.0}, Params::cayley()));
}

TEST(Involutions, PropertySuite)
{
    const auto r = verify::involutions_suite();
    for (const auto& c : r.checks) EXPECT_TRUE(c.pass) << c.name << " = " << c.value;
}
