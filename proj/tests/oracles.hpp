#pragma once

// Naive reference implementations used only by the tests. Nothing here calls
// into the library beyond plain data types.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using P3 = std::array<C, 3>;

// involution by letter, straight from the surface equation's Vieta pairing
inline P3 involve(char l, P3 p, C A = 0.0, C B = 0.0, C Cc = 0.0)
{
    if (l == 'x') p[0] = A - p[0] - p[1] * p[2];
    if (l == 'y') p[1] = B - p[1] - p[0] * p[2];
    if (l == 'z') p[2] = Cc - p[2] - p[0] * p[1];
    return p;
}

// right to left
inline P3 act(const std::string& w, P3 p, C A = 0.0, C B = 0.0, C Cc = 0.0)
{
    for (auto it = w.rbegin(); it != w.rend(); ++it) p = involve(*it, p, A, B, Cc);
    return p;
}

inline std::vector<std::string> reduced_words(int maxlen)
{
    std::vector<std::string> out{""};
    std::vector<std::string> level{""};
    for (int l = 1; l <= maxlen; ++l) {
        std::vector<std::string> next;
        for (const auto& w : level)
            for (char c : {'x', 'y', 'z'})
                if (w.empty() || w.back() != c) next.push_back(w + c);
        std::sort(next.begin(), next.end());
        out.insert(out.end(), next.begin(), next.end());
        level = std::move(next);
    }
    return out;
}

using M2 = std::array<std::int64_t, 4>;

inline M2 mul(const M2& m, const M2& n)
{
    return {m[0] * n[0] + m[1] * n[2], m[0] * n[1] + m[1] * n[3], m[2] * n[0] + m[3] * n[2],
            m[2] * n[1] + m[3] * n[3]};
}

inline M2 gen(char c)
{
    if (c == 'x') return {-1, -2, 0, 1};
    if (c == 'y') return {1, 0, -2, -1};
    return {1, 0, 0, -1};
}

inline M2 word_matrix(const std::string& w)
{
    M2 m{1, 0, 0, 1};
    for (char c : w) m = mul(m, gen(c));
    return m;
}

// Every point of (1/N)Z^2 / Z^2 killed by the integer matrix n, found by
// brute force; N = |det n| is a multiple of every denominator.
inline std::set<std::pair<std::int64_t, std::int64_t>> kernel_points(const M2& n, std::int64_t& N)
{
    N = std::llabs(n[0] * n[3] - n[1] * n[2]);
    std::set<std::pair<std::int64_t, std::int64_t>> out;
    for (std::int64_t i = 0; i < N; ++i)
        for (std::int64_t j = 0; j < N; ++j)
            if ((n[0] * i + n[1] * j) % N == 0 && (n[2] * i + n[3] * j) % N == 0) out.insert({i, j});
    return out;
}

// Every reduced word to maxlen from p at D = 0 (A = B = C = 0): does each
// letter leave its coordinate's modulus at least as large, and every modulus
// stay above 2?
inline bool monotone_tree(const P3& p, char last, int remaining, double& min_mod)
{
    for (int i = 0; i < 3; ++i) min_mod = std::min(min_mod, std::abs(p[i]));
    if (remaining == 0) return true;
    for (int k = 0; k < 3; ++k) {
        const char c = "xyz"[k];
        if (c == last) continue;
        const P3 q = involve(c, p);
        if (std::abs(q[k]) < std::abs(p[k])) return false;
        if (!monotone_tree(q, c, remaining - 1, min_mod)) return false;
    }
    return true;
}

} // namespace oracle
