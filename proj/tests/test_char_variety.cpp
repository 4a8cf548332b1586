#include <random>

#include <gtest/gtest.h>

#include "cubic/char_variety.hpp"
#include "cubic/verify.hpp"

using namespace cubic;

namespace {

const SL2 U(1.0, 1.0, 0.0, 1.0);
const SL2 L(1.0, 0.0, 1.0, 1.0);

cplx tr(const Mat2& m) { return m(0, 0) + m(1, 1); }

} // namespace

TEST(SL2, DeterminantCheckedAndRandomExact)
{
    EXPECT_THROW(SL2(2.0, 0.0, 0.0, 2.0), Error);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 1000; ++i) {
        const SL2 m = SL2::random(rng, 5.0);
        EXPECT_LE(std::abs(m.matrix().determinant() - 1.0), 1e-10);
        EXPECT_GE(std::abs(m.matrix()(0, 0)), 0.1);
        EXPECT_TRUE((m * m.inverse()).matrix().isApprox(Mat2::Identity(), 1e-9));
    }
}

TEST(Fricke, Examples)
{
    EXPECT_EQ(fricke_coords({SL2(), SL2()}), (SurfacePoint{2.0, 2.0, -2.0}));
    EXPECT_EQ(fricke_coords({U, L}), (SurfacePoint{2.0, 2.0, -3.0}));
    EXPECT_EQ(commutator_trace({SL2(), SL2()}), cplx(2.0));
    EXPECT_EQ(commutator_trace({U, L}), cplx(3.0));
}

TEST(Fricke, ThirdCoordinateIsSymmetric)
{
    std::mt19937_64 rng(2);
    for (int i = 0; i < 200; ++i) {
        const SL2 a = SL2::random(rng, 3.0), b = SL2::random(rng, 3.0);
        const SurfacePoint f = fricke_coords({a, b});
        EXPECT_LE(std::abs(f.z + tr(b.matrix() * a.matrix())), 1e-10 * (1.0 + std::abs(f.z)));
    }
}

TEST(Fricke, CommutatorTraceIsSurfaceExpression)
{
    std::mt19937_64 rng(3);
    for (int i = 0; i < 1000; ++i) {
        const RepPair r{SL2::random(rng, 2.0), SL2::random(rng, 2.0)};
        const SurfacePoint f = fricke_coords(r);
        const cplx s = f.x * f.x + f.y * f.y + f.z * f.z + f.x * f.y * f.z - 2.0;
        // direct 2x2 arithmetic as reference
        const Mat2 a = r.a.matrix(), b = r.b.matrix();
        const cplx direct = tr(a * b * a.inverse() * b.inverse());
        EXPECT_LE(std::abs(commutator_trace(r) - direct), 1e-9 * (1.0 + std::abs(direct)));
        EXPECT_LE(std::abs(commutator_trace(r) - s), 1e-9 * (1.0 + std::abs(s)));
    }
}

TEST(TraceRelations, HandExampleExact)
{
    EXPECT_EQ(check_trace_relations(U, L), 0.0);
    EXPECT_EQ(check_trace_relations(SL2(), SL2()), 0.0);
    const SL2 mninv = U * L.inverse();
    EXPECT_EQ(mninv.matrix(), (Mat2() << 0.0, 1.0, -1.0, 1.0).finished());
    EXPECT_EQ((U * L).trace(), cplx(3.0));
    EXPECT_EQ(U.trace() * L.trace() - mninv.trace(), cplx(3.0));
}

TEST(TraceRelations, RandomPairs)
{
    std::mt19937_64 rng(4);
    for (int i = 0; i < 1000; ++i) EXPECT_LE(check_trace_relations(SL2::random(rng, 5.0), SL2::random(rng, 5.0)), 1e-10);
}

TEST(PunctureTraces, Examples)
{
    EXPECT_EQ(params_from_puncture_traces({0.0, 0.0, 0.0, 2.0}), Params::markoff());
    EXPECT_EQ(params_from_puncture_traces({0.0, 0.0, 0.0, -2.0}), Params::markoff());
    EXPECT_EQ(params_from_puncture_traces({0.0, 0.0, 0.0, 0.0}), Params::cayley());
    const double r = std::sqrt(2.0);
    const Params p = params_from_puncture_traces({r, r, r, -r});
    for (cplx c : {p.A, p.B, p.C, p.D}) EXPECT_LE(std::abs(c), 1e-15);
    // straight substitution with distinct values: (1,2,3,4)
    const Params q = params_from_puncture_traces({1.0, 2.0, 3.0, 4.0});
    EXPECT_EQ(q.A, cplx(1 * 4 + 2 * 3));
    EXPECT_EQ(q.B, cplx(2 * 4 + 1 * 3));
    EXPECT_EQ(q.C, cplx(3 * 4 + 1 * 2));
    EXPECT_EQ(q.D, cplx(4 - (24 + 1 + 4 + 9 + 16)));
}

TEST(Equivariance, HandExampleAxisZ)
{
    const RepPair r{U, L};
    EXPECT_EQ(fricke_coords(precompose(Axis::Z, r)), (SurfacePoint{2.0, 2.0, -1.0}));
    EXPECT_EQ(equivariance_check(Axis::Z, r), 0.0);
    for (Axis a : all_axes) EXPECT_EQ(equivariance_check(a, {SL2(), SL2()}), 0.0);
}

TEST(Equivariance, PrecomposedGeneratorsByHand)
{
    std::mt19937_64 rng(6);
    const RepPair r{SL2::random(rng, 2.0), SL2::random(rng, 2.0)};
    const Mat2 a = r.a.matrix(), b = r.b.matrix();
    const Mat2 ai = a.inverse(), bi = b.inverse();
    const RepPair x = precompose(Axis::X, r);
    EXPECT_TRUE(x.a.matrix().isApprox(ai * bi * bi, 1e-12));
    EXPECT_TRUE(x.b.matrix().isApprox(b, 1e-12));
    const RepPair y = precompose(Axis::Y, r);
    EXPECT_TRUE(y.a.matrix().isApprox(a, 1e-12));
    EXPECT_TRUE(y.b.matrix().isApprox(ai * ai * bi, 1e-12));
    const RepPair z = precompose(Axis::Z, r);
    EXPECT_TRUE(z.b.matrix().isApprox(bi, 1e-12));
}

TEST(Equivariance, PropertySuite)
{
    const auto r = verify::equivariance_suite();
    for (const auto& c : r.checks) EXPECT_TRUE(c.pass) << c.name << " = " << c.value;
    const auto t = verify::traces_suite();
    for (const auto& c : t.checks) EXPECT_TRUE(c.pass) << c.name << " = " << c.value;
}
