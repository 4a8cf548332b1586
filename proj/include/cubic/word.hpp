#pragma once

// The group generated by the three involutions, as reduced words, and its
// faithful image in PGL(2,Z) (the mod-2 congruence subgroup).

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "surface.hpp"

namespace cubic {

/// A reduced word over {X, Y, Z}. Letters compose like functions: the
/// rightmost letter is applied first. Every constructor yields a reduced word.
class Word {
public:
    Word() = default;

    /// Cancels adjacent equal letters until none remain.
    static Word reduce(std::span<const Axis> seq)
    {
        Word w;
        for (Axis a : seq) {
            if (!w.letters_.empty() && w.letters_.back() == a)
                w.letters_.pop_back();
            else
                w.letters_.push_back(a);
        }
        return w;
    }

    static Word reduce(std::initializer_list<Axis> seq)
    {
        return reduce(std::span<const Axis>(seq.begin(), seq.size()));
    }

    /// Parses a string over {x,y,z}; the empty string is the identity.
    static Word parse(std::string_view s)
    {
        std::vector<Axis> seq;
        seq.reserve(s.size());
        for (char c : s) {
            switch (c) {
            case 'x': seq.push_back(Axis::X); break;
            case 'y': seq.push_back(Axis::Y); break;
            case 'z': seq.push_back(Axis::Z); break;
            default:
                throw Error(ErrorKind::Parse, "word letter '" + std::string(1, c) + "' not in {x,y,z}");
            }
        }
        return reduce(seq);
    }

    const std::vector<Axis>& letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }

    /// Letter applied last (leftmost). Precondition: non-empty.
    Axis outermost() const { return letters_.front(); }

    /// Word `a . this`, i.e. apply this word and then involution `a`.
    /// Precondition: a != outermost() (non-backtracking extension).
    Word prepended(Axis a) const
    {
        Word w;
        w.letters_.reserve(letters_.size() + 1);
        w.letters_.push_back(a);
        w.letters_.insert(w.letters_.end(), letters_.begin(), letters_.end());
        return w;
    }

    std::string str() const
    {
        std::string s;
        s.reserve(letters_.size());
        for (Axis a : letters_) s.push_back(letter(a));
        return s;
    }

    friend bool operator==(const Word&, const Word&) = default;

    /// Length first, then lexicographic with X < Y < Z.
    friend std::strong_ordering operator<=>(const Word& l, const Word& r)
    {
        if (auto c = l.size() <=> r.size(); c != 0) return c;
        return l.letters_ <=> r.letters_;
    }

private:
    std::vector<Axis> letters_;
};

inline Word compose(const Word& w1, const Word& w2)
{
    std::vector<Axis> seq = w1.letters();
    seq.insert(seq.end(), w2.letters().begin(), w2.letters().end());
    return Word::reduce(seq);
}

inline Word compose(std::initializer_list<Word> words)
{
    std::vector<Axis> seq;
    for (const Word& w : words) seq.insert(seq.end(), w.letters().begin(), w.letters().end());
    return Word::reduce(seq);
}

inline Word inverse(const Word& w)
{
    std::vector<Axis> seq(w.letters().rbegin(), w.letters().rend());
    return Word::reduce(seq);
}

inline Word commutator(const Word& a, const Word& b)
{
    return compose({a, b, inverse(a), inverse(b)});
}

inline bool in_even_subgroup(const Word& w) { return w.size() % 2 == 0; }

struct IntMatrix2 {
    std::int64_t a = 1, b = 0, c = 0, d = 1;

    static IntMatrix2 identity() { return {1, 0, 0, 1}; }

    std::int64_t det() const { return a * d - b * c; }
    std::int64_t trace() const { return a + d; }

    IntMatrix2 operator-() const { return {-a, -b, -c, -d}; }

    friend IntMatrix2 operator*(const IntMatrix2& m, const IntMatrix2& n)
    {
        return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c,
                m.c * n.b + m.d * n.d};
    }

    friend IntMatrix2 operator-(const IntMatrix2& m, const IntMatrix2& n)
    {
        return {m.a - n.a, m.b - n.b, m.c - n.c, m.d - n.d};
    }

    /// Inverse of a determinant +-1 matrix.
    IntMatrix2 inverse() const
    {
        const std::int64_t s = det();
        return {d * s, -b * s, -c * s, a * s};
    }

    IntMatrix2 pow(int k) const
    {
        IntMatrix2 r = identity();
        for (int i = 0; i < k; ++i) r = r * (*this);
        return r;
    }

    /// Representative of {M, -M} whose first nonzero entry is positive.
    IntMatrix2 canonical() const
    {
        for (std::int64_t e : {a, b, c, d}) {
            if (e > 0) return *this;
            if (e < 0) return -*this;
        }
        return *this;
    }

    bool projectively_equal(const IntMatrix2& o) const { return canonical() == o.canonical(); }

    bool is_plus_minus_identity() const { return b == 0 && c == 0 && a == d && std::abs(a) == 1; }

    friend bool operator==(const IntMatrix2&, const IntMatrix2&) = default;
    friend auto operator<=>(const IntMatrix2&, const IntMatrix2&) = default;
};

inline IntMatrix2 generator_matrix(Axis a)
{
    switch (a) {
    case Axis::X: return {-1, -2, 0, 1};
    case Axis::Y: return {1, 0, -2, -1};
    case Axis::Z: return {1, 0, 0, -1};
    }
    return IntMatrix2::identity();
}

/// Product of the generator matrices in letter order, before canonicalization.
inline IntMatrix2 matrix_product(const Word& w)
{
    IntMatrix2 m = IntMatrix2::identity();
    for (Axis a : w.letters()) m = m * generator_matrix(a);
    return m;
}

inline IntMatrix2 word_to_matrix(const Word& w) { return matrix_product(w).canonical(); }

enum class ElementClass { Identity, Elliptic, Parabolic, Hyperbolic };

inline std::string_view to_string(ElementClass c)
{
    switch (c) {
    case ElementClass::Identity: return "identity";
    case ElementClass::Elliptic: return "elliptic";
    case ElementClass::Parabolic: return "parabolic";
    case ElementClass::Hyperbolic: return "hyperbolic";
    }
    return "?";
}

/// Determinant-one representative used for classification: M or M^2.
inline IntMatrix2 orientation_preserving_power(const IntMatrix2& m)
{
    return m.det() == 1 ? m : m * m;
}

inline ElementClass classify(const Word& w)
{
    if (w.empty()) return ElementClass::Identity;
    const IntMatrix2 n = orientation_preserving_power(matrix_product(w));
    // finite-order reflections square to the identity
    if (n.is_plus_minus_identity()) return ElementClass::Elliptic;
    const std::int64_t t = std::abs(n.trace());
    if (t < 2) return ElementClass::Elliptic;
    if (t == 2) return ElementClass::Parabolic;
    return ElementClass::Hyperbolic;
}

/// Calls fn on every reduced word of length <= maxlen, in length-then-
/// lexicographic order. Returning false from fn stops the enumeration.
inline void for_each_reduced_word(int maxlen, const std::function<bool(const Word&)>& fn)
{
    if (maxlen < 0) throw Error(ErrorKind::InvalidArgument, "maxlen must be >= 0");
    std::vector<Axis> buf;
    bool stop = false;
    std::function<void(int)> extend = [&](int remaining) {
        if (stop) return;
        if (remaining == 0) {
            if (!fn(Word::reduce(buf))) stop = true;
            return;
        }
        for (Axis a : all_axes) {
            if (!buf.empty() && buf.back() == a) continue;
            buf.push_back(a);
            extend(remaining - 1);
            buf.pop_back();
            if (stop) return;
        }
    };
    for (int len = 0; len <= maxlen && !stop; ++len) extend(len);
}

inline std::vector<Word> enumerate_nonbacktracking(int maxlen)
{
    std::vector<Word> out;
    for_each_reduced_word(maxlen, [&](const Word& w) {
        out.push_back(w);
        return true;
    });
    return out;
}

inline SurfacePoint apply_word(const Word& w, const SurfacePoint& p, const Params& params)
{
    SurfacePoint q = p;
    const auto& ls = w.letters();
    for (auto it = ls.rbegin(); it != ls.rend(); ++it) q = apply_involution(*it, q, params);
    return q;
}

/// Derivative of apply_word at p by the chain rule.
inline Mat3 jacobian_word(const Word& w, const SurfacePoint& p, const Params& params)
{
    Mat3 jac = Mat3::Identity();
    SurfacePoint q = p;
    const auto& ls = w.letters();
    for (auto it = ls.rbegin(); it != ls.rend(); ++it) {
        jac = jacobian_involution(*it, q) * jac;
        q = apply_involution(*it, q, params);
    }
    return jac;
}

} // namespace cubic
