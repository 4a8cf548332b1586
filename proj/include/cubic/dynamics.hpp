#pragma once

// Orbit search over the non-backtracking word tree, Bowditch BQ membership,
// Fatou-ball certification, fixed points and near-identity searches.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"
#include "parallel.hpp"
#include "surface.hpp"
#include "word.hpp"

namespace cubic {

// ---------------------------------------------------------------------------
// Escape certificate

struct EscapeConfig {
    bool enabled = true;
    double margin = 0.0;
    bool validated = false;
};

/// The growth inequalities behind the certificate, with m = min |coord| and
/// c_u the affine constants:
///   (E1) m > 2 + max_u |c_u| + margin
///   (E2) |v w| - |u| - |c_u| >= max(|u|, m) + margin for every axis u != forbidden.
/// (E2) bounds the new u-coordinate |s_u(p)_u| from below by max(|u|, m).
inline bool escape_condition(const SurfacePoint& p, std::optional<Axis> forbidden, const Params& params,
                             double margin)
{
    const std::array<double, 3> mod{std::abs(p.x), std::abs(p.y), std::abs(p.z)};
    const std::array<double, 3> c{std::abs(params.A), std::abs(params.B), std::abs(params.C)};
    const double m = std::min({mod[0], mod[1], mod[2]});
    if (!(m > 2.0 + std::max({c[0], c[1], c[2]}) + margin)) return false;
    for (Axis u : all_axes) {
        if (forbidden && *forbidden == u) continue;
        const int i = index(u);
        const double vw = mod[(i + 1) % 3] * mod[(i + 2) % 3];
        if (!(vw - mod[i] - c[i] >= std::max(mod[i], m) + margin)) return false;
    }
    return true;
}

inline bool escape_certified(const SurfacePoint& p, std::optional<Axis> forbidden, const Params& params,
                             const EscapeConfig& cfg)
{
    if (!cfg.enabled) throw Error(ErrorKind::CertificateDisabled, "escape certificate is disabled");
    if (!(cfg.margin >= 0.0)) throw Error(ErrorKind::InvalidArgument, "certificate margin must be >= 0");
    return escape_condition(p, forbidden, params, cfg.margin);
}

struct CertificateCounterexample {
    SurfacePoint start;
    Word word;           // word reaching the failing node
    std::string reason;
};

struct ValidationReport {
    std::size_t requested = 0;
    std::size_t samples = 0;    // certified start points found
    std::size_t overflowed = 0; // samples whose orbit left double range before the word length
    std::size_t nodes_checked = 0;
    int word_length = 0;
    std::optional<CertificateCounterexample> counterexample;

    bool sound() const { return !counterexample && samples > 0; }
};

namespace detail {

// Depth-first walk over all reduced words below a certified node. Returns
// false (and fills `bad`) at the first node where moduli decrease or the
// certificate does not propagate.
inline bool check_certified_subtree(const SurfacePoint& p, std::optional<Axis> forbidden, int remaining,
                                    const Params& params, double margin, std::vector<Axis>& path,
                                    std::size_t& nodes, bool& overflowed, std::string& bad)
{
    if (remaining == 0) return true;
    for (Axis a : all_axes) {
        if (forbidden && *forbidden == a) continue;
        const SurfacePoint q = apply_involution(a, p, params);
        ++nodes;
        path.push_back(a);
        if (!is_finite(q)) {
            overflowed = true;
            path.pop_back();
            continue;
        }
        if (std::abs(q[a]) < std::abs(p[a])) {
            bad = std::string("modulus of ") + letter(a) + " decreased";
            return false;
        }
        if (!escape_condition(q, a, params, margin)) {
            bad = "certificate does not propagate";
            return false;
        }
        if (!check_certified_subtree(q, a, remaining - 1, params, margin, path, nodes, overflowed, bad))
            return false;
        path.pop_back();
    }
    return true;
}

} // namespace detail

/// Draws on-surface points that satisfy the certificate and checks, over
/// (a negative margin weakens the certificate; useful only to exercise the check)
/// every reduced word up to `word_length`, that moduli never decrease and
/// that the certificate holds at each node with the last letter forbidden.
inline ValidationReport validate_escape_certificate(const Params& params, double margin,
                                                    std::size_t samples = 10000, int word_length = 12,
                                                    std::uint64_t seed = 20240607)
{
    ValidationReport rep;
    rep.requested = samples;
    rep.word_length = word_length;

    const double c_max = std::max({std::abs(params.A), std::abs(params.B), std::abs(params.C)});
    const double lo = 2.0 + c_max + margin;
    const double hi = lo + 3.0;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> pick_axis(0, 2);

    std::vector<SurfacePoint> starts;
    starts.reserve(samples);
    const std::size_t max_attempts = 2000 * std::max<std::size_t>(samples, 1);
    for (std::size_t att = 0; att < max_attempts && starts.size() < samples; ++att) {
        const Axis axis = all_axes[pick_axis(rng)];
        const cplx v = std::polar(lo + (hi - lo) * unit(rng), 2.0 * std::numbers::pi * unit(rng));
        const cplx w = std::polar(lo + (hi - lo) * unit(rng), 2.0 * std::numbers::pi * unit(rng));
        const auto [p1, p2] = solve_fiber(axis, v, w, params);
        for (const SurfacePoint& p : {p1, p2})
            if (starts.size() < samples && escape_condition(p, std::nullopt, params, margin)) starts.push_back(p);
    }
    rep.samples = starts.size();

    struct Outcome {
        std::size_t nodes = 0;
        bool overflowed = false;
        bool ok = true;
        std::vector<Axis> path;
        std::string reason;
    };
    std::vector<Outcome> out(starts.size());
    parallel_for(starts.size(), [&](std::size_t i) {
        Outcome& o = out[i];
        o.ok = detail::check_certified_subtree(starts[i], std::nullopt, word_length, params, margin, o.path,
                                               o.nodes, o.overflowed, o.reason);
    });
    for (std::size_t i = 0; i < out.size(); ++i) {
        rep.nodes_checked += out[i].nodes;
        rep.overflowed += out[i].overflowed ? 1 : 0;
        if (!out[i].ok && !rep.counterexample) {
            // path lists letters in application order; words read right to left
            std::vector<Axis> seq(out[i].path.rbegin(), out[i].path.rend());
            rep.counterexample = CertificateCounterexample{starts[i], Word::reduce(seq), out[i].reason};
        }
    }
    return rep;
}

/// Pruning config from a validation run: any counterexample (or no samples)
/// switches pruning off.
inline EscapeConfig config_from_validation(const ValidationReport& rep, double margin)
{
    if (!(margin >= 0.0)) throw Error(ErrorKind::InvalidArgument, "certificate margin must be >= 0");
    EscapeConfig cfg;
    cfg.margin = margin;
    cfg.validated = rep.sound();
    cfg.enabled = cfg.validated;
    return cfg;
}

/// Runs the validation and returns a config that prunes only if it passed.
inline EscapeConfig validated_config(const Params& params, double margin = 0.0, std::size_t samples = 10000,
                                     int word_length = 12, ValidationReport* report = nullptr)
{
    if (!(margin >= 0.0)) throw Error(ErrorKind::InvalidArgument, "certificate margin must be >= 0");
    ValidationReport rep = validate_escape_certificate(params, margin, samples, word_length);
    if (report) *report = rep;
    return config_from_validation(rep, margin);
}

// ---------------------------------------------------------------------------
// Orbit search

struct OrbitNode {
    Word word;
    SurfacePoint point;
    double min_modulus = 0.0;
    bool certified = false;
};

struct OrbitStats {
    std::size_t generated = 0;  // tree nodes produced, before deduplication
    std::size_t visited = 0;    // distinct nodes kept
    std::size_t duplicates = 0;
    std::size_t expanded = 0;
    std::size_t certified = 0;  // certified nodes, never expanded
    std::size_t nonfinite = 0;
    std::size_t open_leaves = 0; // uncertified nodes left unexpanded at the depth limit
    int depth_reached = 0;
};

inline constexpr std::size_t default_node_budget = 10'000'000;
inline constexpr double default_dedup_tol = 1e-8;

namespace detail {

struct GridKey {
    std::array<double, 6> v;
    friend bool operator==(const GridKey&, const GridKey&) = default;
};

struct GridKeyHash {
    std::size_t operator()(const GridKey& k) const noexcept
    {
        std::size_t h = 1469598103934665603ull;
        for (double d : k.v) h = (h ^ std::hash<double>{}(d)) * 1099511628211ull;
        return h;
    }
};

inline GridKey grid_key(const SurfacePoint& p, double tol)
{
    auto r = [tol](double d) { return std::nearbyint(d / tol) + 0.0; }; // +0.0 folds -0 into 0
    return {{r(p.x.real()), r(p.x.imag()), r(p.y.real()), r(p.y.imag()), r(p.z.real()), r(p.z.imag())}};
}

enum class VisitAction { Continue, Stop };

// Breadth-first traversal of the non-backtracking tree. Each level is sorted
// by word before it is processed, so the visiting order and the choice of
// representative among duplicates do not depend on scheduling.
template <class Visit>
OrbitStats traverse(const SurfacePoint& root, const Params& params, int depth, double dedup_tol,
                    const EscapeConfig& cfg, std::size_t node_budget, Visit&& visit)
{
    if (depth < 0) throw Error(ErrorKind::InvalidArgument, "depth must be >= 0");
    OrbitStats st;
    std::unordered_set<GridKey, GridKeyHash> seen;
    struct Pending {
        Word word;
        SurfacePoint point;
    };
    std::vector<Pending> level{{Word{}, root}};
    for (int d = 0; d <= depth && !level.empty(); ++d) {
        st.depth_reached = d;
        std::sort(level.begin(), level.end(), [](const Pending& a, const Pending& b) { return a.word < b.word; });
        std::vector<Pending> next;
        for (Pending& n : level) {
            ++st.generated;
            if (!is_finite(n.point)) {
                ++st.nonfinite;
                ++st.open_leaves;
                continue;
            }
            if (!seen.insert(grid_key(n.point, dedup_tol)).second) {
                ++st.duplicates;
                continue;
            }
            ++st.visited;
            std::optional<Axis> forbidden;
            if (!n.word.empty()) forbidden = n.word.outermost();
            const bool cert = cfg.enabled && escape_certified(n.point, forbidden, params, cfg);
            OrbitNode node{n.word, n.point, min_modulus(n.point), cert};
            if (visit(node, d) == VisitAction::Stop) return st;
            if (cert) {
                ++st.certified;
                continue;
            }
            if (d == depth) {
                ++st.open_leaves;
                continue;
            }
            ++st.expanded;
            for (Axis a : all_axes) {
                if (forbidden && *forbidden == a) continue;
                next.push_back({n.word.prepended(a), apply_involution(a, n.point, params)});
            }
            if (next.size() > node_budget)
                throw Error(ErrorKind::FrontierOverflow, "frontier exceeds node budget");
        }
        level = std::move(next);
    }
    return st;
}

} // namespace detail

struct OrbitResult {
    std::vector<OrbitNode> nodes; // sorted by word
    OrbitStats stats;
};

/// Orbit of `root` under all reduced words of length <= depth. Certified
/// nodes are kept but not expanded when cfg.enabled; points closer than the
/// dedup grid are merged.
inline OrbitResult orbit_bfs(const SurfacePoint& root, const Params& params, int depth,
                             double dedup_tol = default_dedup_tol, const EscapeConfig& cfg = {false, 0.0, false},
                             std::size_t node_budget = default_node_budget)
{
    OrbitResult res;
    res.stats = detail::traverse(root, params, depth, dedup_tol, cfg, node_budget,
                                 [&](const OrbitNode& n, int) {
                                     res.nodes.push_back(n);
                                     return detail::VisitAction::Continue;
                                 });
    std::sort(res.nodes.begin(), res.nodes.end(),
              [](const OrbitNode& a, const OrbitNode& b) { return a.word < b.word; });
    return res;
}

// ---------------------------------------------------------------------------
// Bowditch BQ membership

inline constexpr double bq_dist_tol = 1e-9;

/// Distance from c to the real segment [-2, 2].
inline double distance_to_segment(cplx c)
{
    const double over = std::max(0.0, std::abs(c.real()) - 2.0);
    return std::hypot(over, c.imag());
}

/// Default polydisc radius: 2 for punctured-torus parameters, 2 + max|A|,|B|,|C| in general.
inline double default_K(const Params& params)
{
    return std::max(2.0, 2.0 + std::max({std::abs(params.A), std::abs(params.B), std::abs(params.C)}));
}

struct NotMember {
    Word witness;
    Axis axis = Axis::X;
    cplx value;
};

struct CertifiedMember {
    int depth = 0;
    std::size_t low_nodes = 0;
};

struct Inconclusive {
    int depth = 0;
    std::size_t frontier = 0;
    std::size_t uncertified_low = 0;
    bool overflow = false;
};

enum class VerdictKind { NotMember, CertifiedMember, Inconclusive };

inline std::string_view to_string(VerdictKind k)
{
    switch (k) {
    case VerdictKind::NotMember: return "NotMember";
    case VerdictKind::CertifiedMember: return "CertifiedMember";
    case VerdictKind::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct BQVerdict {
    std::variant<NotMember, CertifiedMember, Inconclusive> outcome;
    double K = 2.0;
    bool certificate_validated = false;
    OrbitStats stats;

    VerdictKind kind() const { return static_cast<VerdictKind>(outcome.index()); }

    int depth() const
    {
        return std::visit(
            [](const auto& o) -> int {
                using T = std::decay_t<decltype(o)>;
                if constexpr (std::is_same_v<T, NotMember>)
                    return static_cast<int>(o.witness.size());
                else
                    return o.depth;
            },
            outcome);
    }
};

/// Depth-bounded search for a BQ1 violation; certified escape of every branch
/// yields CertifiedMember (only with a validated certificate).
///
/// The search runs over the whole group generated by the involutions: each
/// coordinate of an odd-length image is also a coordinate of an even-length
/// image, so BQ1 and BQ2 read the same on both trees.
inline BQVerdict bq_test(const SurfacePoint& p, const Params& params, int depth, double K, const EscapeConfig& cfg,
                         double dedup_tol = default_dedup_tol, std::size_t node_budget = default_node_budget)
{
    if (!(K >= 2.0)) throw Error(ErrorKind::InvalidArgument, "K must be >= 2");
    BQVerdict v;
    v.K = K;
    v.certificate_validated = cfg.enabled && cfg.validated;
    std::optional<NotMember> violation;
    std::size_t low = 0, uncertified_low = 0;
    try {
        v.stats = detail::traverse(p, params, depth, dedup_tol, cfg, node_budget, [&](const OrbitNode& n, int d) {
            for (Axis a : all_axes) {
                if (distance_to_segment(n.point[a]) <= bq_dist_tol) {
                    violation = NotMember{n.word, a, n.point[a]};
                    return detail::VisitAction::Stop;
                }
            }
            const bool is_low = std::abs(n.point.x) <= K || std::abs(n.point.y) <= K || std::abs(n.point.z) <= K;
            if (is_low) {
                ++low;
                if (!n.certified && d == depth) ++uncertified_low;
            }
            return detail::VisitAction::Continue;
        });
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::FrontierOverflow) throw;
        v.outcome = Inconclusive{depth, node_budget, uncertified_low, true};
        return v;
    }
    if (violation) {
        v.outcome = *violation;
    } else if (v.stats.open_leaves == 0 && v.certificate_validated) {
        v.outcome = CertifiedMember{v.stats.depth_reached, low};
    } else {
        v.outcome = Inconclusive{v.stats.depth_reached, v.stats.open_leaves, uncertified_low, false};
    }
    return v;
}

// ---------------------------------------------------------------------------
// Fatou-ball certification

struct MonotonicityFailure {
    SurfacePoint sample;
    Word word; // the failing letter is word.outermost()
};

struct FatouCertReport {
    SurfacePoint center;
    double radius = 0.0;
    int depth = 0;
    int samples = 0;
    bool monotone_ok = true;
    double min_first_step_gain = std::numeric_limits<double>::infinity();
    double min_first_step_modulus = std::numeric_limits<double>::infinity();
    std::size_t nodes_checked = 0;
    std::optional<MonotonicityFailure> failure;
};

namespace detail {

inline constexpr double monotone_rel_slack = 1e-12;

inline bool monotone_subtree(const SurfacePoint& p, std::optional<Axis> forbidden, int remaining,
                             const Params& params, std::vector<Axis>& path, std::size_t& nodes)
{
    if (remaining == 0) return true;
    for (Axis a : all_axes) {
        if (forbidden && *forbidden == a) continue;
        const SurfacePoint q = apply_involution(a, p, params);
        ++nodes;
        path.push_back(a);
        if (!(std::abs(q[a]) >= std::abs(p[a]) * (1.0 - monotone_rel_slack))) return false;
        if (!monotone_subtree(q, a, remaining - 1, params, path, nodes)) return false;
        path.pop_back();
    }
    return true;
}

/// Uniform point of the ball of radius r in C^2 (= R^4).
template <class Rng>
std::pair<cplx, cplx> random_in_ball2(Rng& rng, double r)
{
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double v[4];
    double n2 = 0.0;
    for (double& c : v) {
        c = g(rng);
        n2 += c * c;
    }
    const double s = r * std::pow(u(rng), 0.25) / std::sqrt(n2);
    return {cplx(v[0] * s, v[1] * s), cplx(v[2] * s, v[3] * s)};
}

} // namespace detail

/// Samples on-surface points of the ball by perturbing two coordinates and
/// solving the fiber for the third (root nearest the center), rejecting
/// points outside the ball.
template <class Rng>
std::vector<SurfacePoint> sample_surface_ball(const SurfacePoint& center, double radius, const Params& params,
                                              int count, Rng& rng, std::size_t max_rejections = 100000)
{
    std::uniform_int_distribution<int> pick_axis(0, 2);
    std::vector<SurfacePoint> out;
    std::size_t rejected = 0;
    while (static_cast<int>(out.size()) < count) {
        const Axis axis = all_axes[pick_axis(rng)];
        const auto [ao, bo] = other_axes(axis);
        const auto [d1, d2] = detail::random_in_ball2(rng, radius);
        const auto [p1, p2] = solve_fiber(axis, center[ao] + d1, center[bo] + d2, params);
        const SurfacePoint& p = std::abs(p1[axis] - center[axis]) <= std::abs(p2[axis] - center[axis]) ? p1 : p2;
        if (euclidean_distance(p, center) <= radius) {
            out.push_back(p);
        } else if (++rejected >= max_rejections) {
            throw Error(ErrorKind::NoSamplesFound, "rejection sampling of the ball failed");
        }
    }
    return out;
}

/// Checks that along every reduced word up to `depth`, each letter leaves the
/// modulus of the coordinate it changes no smaller, for sampled points of the
/// ball on the surface.
inline FatouCertReport fatou_ball_certify(const SurfacePoint& center, double radius, const Params& params,
                                          int samples, int depth, std::uint64_t seed = 1729)
{
    if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
    if (!on_surface(center, params)) throw Error(ErrorKind::CenterOffSurface, "ball center is not on the surface");
    std::mt19937_64 rng(seed);
    const std::vector<SurfacePoint> pts = sample_surface_ball(center, radius, params, samples, rng);

    FatouCertReport rep;
    rep.center = center;
    rep.radius = radius;
    rep.depth = depth;
    rep.samples = samples;

    struct Outcome {
        bool ok = true;
        std::size_t nodes = 0;
        std::vector<Axis> path;
        double gain = std::numeric_limits<double>::infinity();
        double first_modulus = std::numeric_limits<double>::infinity();
    };
    std::vector<Outcome> out(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        Outcome& o = out[i];
        for (Axis a : all_axes) {
            const double before = std::abs(pts[i][a]);
            const double after = std::abs(apply_involution(a, pts[i], params)[a]);
            o.gain = std::min(o.gain, after - before);
            o.first_modulus = std::min(o.first_modulus, after);
        }
        o.ok = detail::monotone_subtree(pts[i], std::nullopt, depth, params, o.path, o.nodes);
    });
    for (std::size_t i = 0; i < out.size(); ++i) {
        rep.nodes_checked += out[i].nodes;
        rep.min_first_step_gain = std::min(rep.min_first_step_gain, out[i].gain);
        rep.min_first_step_modulus = std::min(rep.min_first_step_modulus, out[i].first_modulus);
        if (!out[i].ok && rep.monotone_ok) {
            rep.monotone_ok = false;
            std::vector<Axis> seq(out[i].path.rbegin(), out[i].path.rend());
            rep.failure = MonotonicityFailure{pts[i], Word::reduce(seq)};
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Fixed points

enum class FixedPointTag { Saddle, NeutralOrResonant, Other, SingularPoint };

inline std::string_view to_string(FixedPointTag t)
{
    switch (t) {
    case FixedPointTag::Saddle: return "saddle";
    case FixedPointTag::NeutralOrResonant: return "neutral";
    case FixedPointTag::Other: return "other";
    case FixedPointTag::SingularPoint: return "singular";
    }
    return "?";
}

struct FixedPoint {
    SurfacePoint point;
    std::optional<std::pair<cplx, cplx>> eigenvalues; // |first| >= |second|
    FixedPointTag tag = FixedPointTag::Other;
    double system_residual = 0.0;
};

struct FixedPointSearch {
    std::vector<FixedPoint> points; // sorted lexicographically by coordinates
    std::size_t converged = 0;
    std::size_t dropped = 0;
};

inline constexpr double fixed_point_tol = 1e-10;

namespace detail {

using Vec4 = Eigen::Matrix<cplx, 4, 1>;
using Mat43 = Eigen::Matrix<cplx, 4, 3>;

inline Vec4 fixed_point_system(const Word& w, const SurfacePoint& p, const Params& params)
{
    const SurfacePoint q = apply_word(w, p, params);
    Vec4 f;
    f << q.x - p.x, q.y - p.y, q.z - p.z, residual(p, params);
    return f;
}

inline bool lex_less(const SurfacePoint& a, const SurfacePoint& b)
{
    for (Axis ax : all_axes) {
        if (cubic::lex_less(a[ax], b[ax])) return true;
        if (cubic::lex_less(b[ax], a[ax])) return false;
    }
    return false;
}

} // namespace detail

/// Derivative of w at a smooth fixed point, restricted to the tangent plane.
inline Eigen::Matrix2cd restricted_derivative(const Word& w, const SurfacePoint& q, const Params& params)
{
    const TangentFrame f = tangent_frame(q, params);
    const Mat3 dw = jacobian_word(w, q, params);
    const Vec3 i1 = dw * f.t1, i2 = dw * f.t2;
    // the frame has the identity minor on (free_a, free_b)
    Eigen::Matrix2cd r;
    r << i1(f.free_a), i2(f.free_a), i1(f.free_b), i2(f.free_b);
    return r;
}

/// Damped Gauss-Newton on (w(p) - p, F(p)) from each seed, followed by
/// eigen-analysis of the restricted derivative at each distinct fixed point.
inline FixedPointSearch find_fixed_points(const Word& w, const Params& params, const std::vector<SurfacePoint>& seeds,
                                          int max_iter = 200)
{
    if (w.empty()) throw Error(ErrorKind::InvalidArgument, "identity word fixes everything");
    FixedPointSearch res;
    std::vector<FixedPoint> found;
    for (const SurfacePoint& seed : seeds) {
        SurfacePoint p = seed;
        detail::Vec4 f = detail::fixed_point_system(w, p, params);
        double r = f.norm();
        for (int it = 0; it < max_iter; ++it) {
            detail::Mat43 jac;
            jac.topRows<3>() = jacobian_word(w, p, params) - Mat3::Identity();
            jac.row(3) = gradient(p, params).transpose();
            const Vec3 delta = jac.completeOrthogonalDecomposition().solve(-f);
            double step = 1.0;
            bool improved = false;
            for (int h = 0; h <= 40; ++h, step *= 0.5) {
                const SurfacePoint q = SurfacePoint::from(p.vec() + step * delta);
                const detail::Vec4 fq = detail::fixed_point_system(w, q, params);
                if (std::isfinite(fq.norm()) && fq.norm() < r) {
                    p = q;
                    f = fq;
                    r = fq.norm();
                    improved = true;
                    break;
                }
            }
            // keep polishing while the residual still drops; stop once it stalls
            if (!improved || r == 0.0) break;
        }
        if (!(r <= fixed_point_tol * scale(p))) {
            ++res.dropped;
            continue;
        }
        ++res.converged;
        const bool dup = std::any_of(found.begin(), found.end(), [&](const FixedPoint& o) {
            return distance(o.point, p) <= 1e-7 * scale(p);
        });
        if (!dup) found.push_back({p, std::nullopt, FixedPointTag::Other, r});
    }
    for (FixedPoint& fp : found) {
        Eigen::Matrix2cd rd;
        try {
            rd = restricted_derivative(w, fp.point, params);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::SingularPoint) throw;
            fp.tag = FixedPointTag::SingularPoint;
            continue;
        }
        auto [l1, l2] = monic_quadratic_roots(-rd.trace(), rd.determinant());
        if (std::abs(l1) < std::abs(l2)) std::swap(l1, l2);
        fp.eigenvalues = std::pair{l1, l2};
        constexpr double eps = 1e-6;
        if (std::abs(l1) > 1.0 + eps && std::abs(l2) < 1.0 - eps)
            fp.tag = FixedPointTag::Saddle;
        else if (std::abs(std::abs(l1) - 1.0) <= eps && std::abs(std::abs(l2) - 1.0) <= eps)
            fp.tag = FixedPointTag::NeutralOrResonant;
        else
            fp.tag = FixedPointTag::Other;
    }
    std::sort(found.begin(), found.end(),
              [](const FixedPoint& a, const FixedPoint& b) { return detail::lex_less(a.point, b.point); });
    res.points = std::move(found);
    return res;
}

// ---------------------------------------------------------------------------
// Near-identity search

/// Deterministic grid x grid sample of on-surface points in the ball:
/// dy = (r/2) a, dz = i (r/2) b for a, b on a uniform grid of [-1, 1], x from
/// the fiber root nearest the center. Points outside the ball are dropped.
inline std::vector<SurfacePoint> grid_surface_ball(const SurfacePoint& center, double radius, const Params& params,
                                                   int grid)
{
    if (grid < 1) throw Error(ErrorKind::InvalidArgument, "grid must be >= 1");
    std::vector<SurfacePoint> out;
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const double a = grid == 1 ? 0.0 : -1.0 + 2.0 * i / (grid - 1);
            const double b = grid == 1 ? 0.0 : -1.0 + 2.0 * j / (grid - 1);
            const cplx y = center.y + 0.5 * radius * a;
            const cplx z = center.z + cplx(0.0, 0.5 * radius * b);
            const auto [p1, p2] = solve_fiber(Axis::X, y, z, params);
            const SurfacePoint& p = std::abs(p1.x - center.x) <= std::abs(p2.x - center.x) ? p1 : p2;
            if (euclidean_distance(p, center) <= radius) out.push_back(p);
        }
    }
    return out;
}

struct Displacement {
    Word word;
    double sup = 0.0;
};

/// Largest Euclidean displacement of w over the sample; +inf if any image
/// leaves double range.
inline double sup_displacement(const Word& w, const std::vector<SurfacePoint>& pts, const Params& params)
{
    double sup = 0.0;
    for (const SurfacePoint& p : pts) {
        const SurfacePoint q = apply_word(w, p, params);
        const double d = euclidean_distance(p, q);
        sup = std::isfinite(d) ? std::max(sup, d) : std::numeric_limits<double>::infinity();
    }
    return sup;
}

/// The `top` even-length non-identity words of length <= maxlen that move the
/// sampled ball the least, ranked by sup displacement (ties by word).
inline std::vector<Displacement> near_identity_search(const SurfacePoint& center, double radius, const Params& params,
                                                      int maxlen, int grid, std::size_t top = 10)
{
    if (maxlen < 2) throw Error(ErrorKind::InvalidArgument, "maxlen must be >= 2");
    const std::vector<SurfacePoint> pts = grid_surface_ball(center, radius, params, grid);
    if (pts.empty()) throw Error(ErrorKind::NoSamplesFound, "no grid point lies in the ball");

    std::vector<Displacement> all;
    std::vector<SurfacePoint> cur = pts;
    std::vector<Axis> path;
    // depth-first over the tree; an image under a.w is s_a of the image under w
    auto walk = [&](auto&& self, int remaining) -> void {
        if (!path.empty() && path.size() % 2 == 0) {
            double sup = 0.0;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const double d = euclidean_distance(pts[i], cur[i]);
                sup = std::isfinite(d) ? std::max(sup, d) : std::numeric_limits<double>::infinity();
            }
            std::vector<Axis> seq(path.rbegin(), path.rend());
            all.push_back({Word::reduce(seq), sup});
        }
        if (remaining == 0) return;
        for (Axis a : all_axes) {
            if (!path.empty() && path.back() == a) continue;
            std::vector<SurfacePoint> saved = cur;
            for (auto& q : cur) q = apply_involution(a, q, params);
            path.push_back(a);
            self(self, remaining - 1);
            path.pop_back();
            cur = std::move(saved);
        }
    };
    walk(walk, maxlen);

    std::sort(all.begin(), all.end(), [](const Displacement& a, const Displacement& b) {
        if (a.sup != b.sup) return a.sup < b.sup;
        return a.word < b.word;
    });
    if (all.size() > top) all.resize(top);
    return all;
}

struct ZassenhausResult {
    std::vector<Displacement> steps;
    std::optional<int> abelian_step; // set when a commutator collapsed to the identity
};

/// w_{k+1} = [w_k, w_{k-1}] starting from (w1, w2), n steps, with the sup
/// displacement of each commutator on the sampled ball.
inline ZassenhausResult zassenhaus_iterate(const Word& w1, const Word& w2, const SurfacePoint& center, double radius,
                                           const Params& params, int n, int grid = 5)
{
    for (const Word* w : {&w1, &w2})
        if (w->empty() || !in_even_subgroup(*w))
            throw Error(ErrorKind::InvalidArgument, "zassenhaus words must be even and non-identity");
    const std::vector<SurfacePoint> pts = grid_surface_ball(center, radius, params, grid);
    ZassenhausResult res;
    Word prev = w1, cur = w2;
    for (int k = 1; k <= n; ++k) {
        Word next = commutator(cur, prev);
        if (next.empty()) {
            res.abelian_step = k;
            break;
        }
        res.steps.push_back({next, sup_displacement(next, pts, params)});
        prev = std::move(cur);
        cur = std::move(next);
    }
    return res;
}

} // namespace cubic
