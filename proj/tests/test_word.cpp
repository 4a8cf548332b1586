#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "cubic/verify.hpp"
#include "cubic/word.hpp"
#include "oracles.hpp"

using namespace cubic;

namespace {

Word W(std::string_view s) { return Word::parse(s); }

IntMatrix2 from(const oracle::M2& m) { return {m[0], m[1], m[2], m[3]}; }

} // namespace

TEST(Reduce, Examples)
{
    EXPECT_EQ(Word::reduce({Axis::X, Axis::X, Axis::Y}), W("y"));
    EXPECT_TRUE(Word::reduce({Axis::X, Axis::Y, Axis::Y, Axis::X}).empty());
    EXPECT_EQ(Word::reduce({Axis::X, Axis::Y, Axis::Z}).str(), "xyz");
    EXPECT_EQ(W("xyyzzx").str(), "");
    EXPECT_THROW(W("xw"), Error);
}

TEST(Compose, Examples)
{
    EXPECT_TRUE(compose(W("x"), W("x")).empty());
    EXPECT_EQ(compose(W("zy"), W("yx")), W("zx"));
    EXPECT_EQ(compose(Word{}, W("xyz")), W("xyz"));
    EXPECT_EQ(inverse(W("zy")), W("yz"));
    EXPECT_EQ(inverse(W("x")), W("x"));
    EXPECT_TRUE(inverse(Word{}).empty());
    EXPECT_TRUE(compose(W("xzyx"), inverse(W("xzyx"))).empty());
}

TEST(Matrix, Examples)
{
    EXPECT_EQ(generator_matrix(Axis::X), (IntMatrix2{-1, -2, 0, 1}));
    EXPECT_EQ(word_to_matrix(W("x")), (IntMatrix2{1, 2, 0, -1}));
    EXPECT_EQ(word_to_matrix(W("zy")), (IntMatrix2{1, 0, 2, 1}));
    EXPECT_EQ(matrix_product(W("zyzx")), (IntMatrix2{-1, -2, -2, -5}));
    EXPECT_EQ(word_to_matrix(W("zyzx")), (IntMatrix2{1, 2, 2, 5}));
    EXPECT_EQ(word_to_matrix(Word{}), IntMatrix2::identity());
}

TEST(Matrix, MatchesOracleProducts)
{
    for (const auto& s : oracle::reduced_words(8)) {
        const auto m = oracle::word_matrix(s);
        EXPECT_EQ(matrix_product(W(s)), from(m)) << s;
        EXPECT_EQ(std::llabs(from(m).det()), 1);
        EXPECT_EQ(from(m).det(), s.size() % 2 == 0 ? 1 : -1) << s;
    }
}

TEST(Matrix, HomomorphismExhaustiveToLengthSix)
{
    const auto words = enumerate_nonbacktracking(6);
    for (const Word& a : words)
        for (const Word& b : words)
            ASSERT_TRUE(word_to_matrix(compose(a, b)).projectively_equal(word_to_matrix(a) * word_to_matrix(b)))
                << a.str() << " " << b.str();
}

TEST(Matrix, ProjectivelyDistinctToLengthTen)
{
    std::set<IntMatrix2> seen;
    std::size_t n = 0;
    for_each_reduced_word(10, [&](const Word& w) {
        seen.insert(word_to_matrix(w));
        ++n;
        return true;
    });
    EXPECT_EQ(n, 1u + 3u * ((1u << 10) - 1u));
    EXPECT_EQ(seen.size(), n);
}

TEST(Matrix, CanonicalAndPowers)
{
    EXPECT_EQ((IntMatrix2{0, -1, 1, 0}).canonical(), (IntMatrix2{0, 1, -1, 0}));
    EXPECT_TRUE((IntMatrix2{-1, 0, 0, -1}).is_plus_minus_identity());
    const IntMatrix2 m{2, 1, 1, 1};
    EXPECT_EQ(m.pow(3), m * m * m);
    EXPECT_EQ(m * m.inverse(), IntMatrix2::identity());
    const IntMatrix2 r{-1, -2, 0, 1};
    EXPECT_EQ(r * r.inverse(), IntMatrix2::identity());
}

TEST(Classify, Examples)
{
    EXPECT_EQ(classify(W("zy")), ElementClass::Parabolic);
    EXPECT_EQ(classify(W("xz")), ElementClass::Parabolic);
    EXPECT_EQ(classify(W("yx")), ElementClass::Parabolic);
    EXPECT_EQ(classify(W("zyzx")), ElementClass::Hyperbolic);
    EXPECT_EQ(classify(W("x")), ElementClass::Elliptic);
    EXPECT_EQ(classify(Word{}), ElementClass::Identity);
    const IntMatrix2 mx = generator_matrix(Axis::X);
    EXPECT_EQ(mx * mx, IntMatrix2::identity());
}

TEST(Classify, MatchesTraceOracle)
{
    for (const auto& s : oracle::reduced_words(7)) {
        if (s.empty()) continue;
        auto m = oracle::word_matrix(s);
        if (s.size() % 2) m = oracle::mul(m, m);
        const bool pm_id = m[1] == 0 && m[2] == 0 && m[0] == m[3] && std::llabs(m[0]) == 1;
        const std::int64_t t = std::llabs(m[0] + m[3]);
        const ElementClass want = pm_id || t < 2 ? ElementClass::Elliptic
                                  : t == 2       ? ElementClass::Parabolic
                                                 : ElementClass::Hyperbolic;
        EXPECT_EQ(classify(W(s)), want) << s;
    }
}

TEST(EvenSubgroup, Examples)
{
    EXPECT_TRUE(in_even_subgroup(W("zy")));
    EXPECT_FALSE(in_even_subgroup(W("x")));
    EXPECT_TRUE(in_even_subgroup(Word{}));
}

TEST(Enumerate, CountsAndOrder)
{
    EXPECT_EQ(enumerate_nonbacktracking(0).size(), 1u);
    EXPECT_EQ(enumerate_nonbacktracking(3).size(), 22u);
    const auto ws = enumerate_nonbacktracking(6);
    const auto ref = oracle::reduced_words(6);
    ASSERT_EQ(ws.size(), ref.size());
    for (std::size_t i = 0; i < ws.size(); ++i) EXPECT_EQ(ws[i].str(), ref[i]);
    std::map<std::size_t, std::size_t> by_len;
    for (const Word& w : ws) ++by_len[w.size()];
    for (std::size_t l = 1; l <= 6; ++l) EXPECT_EQ(by_len[l], 3u << (l - 1));
}

TEST(ApplyWord, GxSymbolic)
{
    std::mt19937_64 rng(9);
    for (int i = 0; i < 100; ++i) {
        const SurfacePoint p{verify::detail::disc(rng, 3.0), verify::detail::disc(rng, 3.0),
                             verify::detail::disc(rng, 3.0)};
        const SurfacePoint q = apply_word(W("zy"), p, Params::punctured_torus(7.0));
        EXPECT_EQ(q.x, p.x);
        const cplx y = -p.y - p.x * p.z;
        const cplx z = -p.z + p.x * p.y + p.x * p.x * p.z;
        EXPECT_LE(std::abs(q.y - y), 1e-12 * scale(p));
        EXPECT_LE(std::abs(q.z - z), 1e-12 * scale(p));
    }
    const SurfacePoint p{1.0, 2.0, 3.0};
    EXPECT_EQ(apply_word(Word{}, p, Params::markoff()), p);
}

TEST(ApplyWord, CompatibleWithCompositionAndOracle)
{
    std::mt19937_64 rng(21);
    const auto ws = enumerate_nonbacktracking(5);
    for (int i = 0; i < 100; ++i) {
        const Params pr = verify::detail::random_params(rng, 1.0);
        const SurfacePoint p = verify::detail::random_surface_point(rng, pr, 1.5);
        for (std::size_t k = 0; k < ws.size(); k += 7) {
            const Word& w1 = ws[k];
            const Word& w2 = ws[(k * 13 + i) % ws.size()];
            const SurfacePoint lhs = apply_word(compose(w1, w2), p, pr);
            const SurfacePoint rhs = apply_word(w1, apply_word(w2, p, pr), pr);
            EXPECT_LE(distance(lhs, rhs), 1e-10 * scale(rhs)) << w1.str() << " " << w2.str();
            const auto o = oracle::act(w1.str(), {p.x, p.y, p.z}, pr.A, pr.B, pr.C);
            const SurfacePoint a = apply_word(w1, p, pr);
            EXPECT_LE(distance(a, {o[0], o[1], o[2]}), 1e-12 * scale(a));
        }
    }
}

TEST(ApplyWord, JacobianMatchesFiniteDifferences)
{
    const Params pr{0.3, -0.2, 0.1, 1.0};
    const SurfacePoint p{0.4, cplx(0.1, 0.2), -0.3};
    for (const char* s : {"x", "zy", "zyzx", "xyzyx"}) {
        const Mat3 j = jacobian_word(W(s), p, pr);
        for (int k = 0; k < 3; ++k) {
            const double h = 1e-6;
            Vec3 e = Vec3::Zero();
            e(k) = h;
            const Vec3 fd = (apply_word(W(s), SurfacePoint::from(p.vec() + e), pr).vec() -
                             apply_word(W(s), SurfacePoint::from(p.vec() - e), pr).vec()) /
                            (2.0 * h);
            EXPECT_LE((fd - j.col(k)).norm(), 1e-6) << s;
        }
    }
}

TEST(GxPreservesFibration, ExactX)
{
    std::mt19937_64 rng(4);
    for (int i = 0; i < 100; ++i) {
        const SurfacePoint p{verify::detail::disc(rng, 3.0), verify::detail::disc(rng, 3.0),
                             verify::detail::disc(rng, 3.0)};
        EXPECT_EQ(apply_word(W("zy"), p, Params::markoff()).x, p.x);
        EXPECT_EQ(apply_word(W("xz"), p, Params::markoff()).y, p.y);
        EXPECT_EQ(apply_word(W("yx"), p, Params::markoff()).z, p.z);
    }
}
