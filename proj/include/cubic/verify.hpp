#pragma once

// Named invariant suites run by `cubic verify <suite>`. Every suite draws from
// a fixed seed, so reports are reproducible byte for byte.

#include <algorithm>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "char_variety.hpp"
#include "cli_io.hpp"
#include "dynamics.hpp"
#include "picard.hpp"
#include "surface.hpp"
#include "word.hpp"

namespace cubic::verify {

inline constexpr std::uint64_t suite_seed = 0x5eed'c0de'2024ull;

struct Check {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool lower_bound = false; // value must be >= threshold instead of <=
    bool pass = false;
};

struct SuiteReport {
    std::string name;
    std::vector<Check> checks;

    bool pass() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }

    void at_most(std::string n, double value, double threshold)
    {
        checks.push_back({std::move(n), value, threshold, false, value <= threshold});
    }

    void at_least(std::string n, double value, double threshold)
    {
        checks.push_back({std::move(n), value, threshold, true, value >= threshold});
    }

    void require(std::string n, bool ok) { checks.push_back({std::move(n), ok ? 1.0 : 0.0, 1.0, true, ok}); }

    std::string text() const
    {
        std::string out = "suite " + name + "\n";
        for (const Check& c : checks) {
            out += "  " + c.name + " = " + io::format_double(c.value) + (c.lower_bound ? " (>= " : " (<= ") +
                   io::format_double(c.threshold) + ") " + (c.pass ? "PASS" : "FAIL") + "\n";
        }
        out += pass() ? "result PASS\n" : "result FAIL\n";
        return out;
    }
};

inline std::vector<std::string_view> suite_names()
{
    return {"involutions", "two-form", "traces", "equivariance", "picard", "fatou-ball", "escape-cert"};
}

namespace detail {

template <class Rng>
cplx disc(Rng& rng, double r)
{
    return SL2::random_in_disc(rng, r);
}

template <class Rng>
Params random_params(Rng& rng, double r)
{
    return {disc(rng, r), disc(rng, r), disc(rng, r), disc(rng, r)};
}

// On-surface point: random pair on a random axis, one of the two fiber roots.
template <class Rng>
SurfacePoint random_surface_point(Rng& rng, const Params& params, double r)
{
    std::uniform_int_distribution<int> pick(0, 2);
    const Axis a = all_axes[pick(rng)];
    const auto [p1, p2] = solve_fiber(a, disc(rng, r), disc(rng, r), params);
    return pick(rng) % 2 ? p1 : p2;
}

} // namespace detail

/// Involution, residual-conservation and Vieta checks: 20 parameter tuples,
/// 500 fiber-solved points each, plus 10^4 ambient points for the square law.
inline SuiteReport involutions_suite()
{
    SuiteReport rep{"involutions", {}};
    std::mt19937_64 rng(suite_seed);
    double sq_err = 0.0, drift = 0.0, vieta = 0.0, swap = 0.0, ambient = 0.0;
    for (int k = 0; k < 20; ++k) {
        const Params params = detail::random_params(rng, 3.0);
        for (int i = 0; i < 500; ++i) {
            const SurfacePoint p = detail::random_surface_point(rng, params, 10.0);
            const double s = scale(p);
            for (Axis a : all_axes) {
                const SurfacePoint q = apply_involution(a, p, params);
                sq_err = std::max(sq_err, distance(apply_involution(a, q, params), p) / s);
                drift = std::max(drift, std::abs(residual(q, params)) / scale(q));
                const auto [o1, o2] = other_axes(a);
                const auto [r1, r2] = solve_fiber(a, p[o1], p[o2], params);
                const cplx sum = affine_constant(a, params) - p[o1] * p[o2];
                vieta = std::max(vieta, std::abs(r1[a] + r2[a] - sum) / std::max({1.0, std::abs(r1[a]), std::abs(r2[a])}));
                swap = std::max(swap, distance(apply_involution(a, r1, params), r2) / scale(r1));
            }
        }
    }
    for (int i = 0; i < 10000; ++i) {
        const Params params = detail::random_params(rng, 3.0);
        const SurfacePoint p{detail::disc(rng, 10.0), detail::disc(rng, 10.0), detail::disc(rng, 10.0)};
        for (Axis a : all_axes) {
            const SurfacePoint back = apply_involution(a, apply_involution(a, p, params), params);
            ambient = std::max(ambient, distance(back, p) / scale(p));
        }
    }
    rep.at_most("involution_squared_rel", sq_err, 1e-9);
    rep.at_most("residual_drift_rel", drift, 1e-9);
    rep.at_most("vieta_sum_rel", vieta, 1e-12);
    rep.at_most("fiber_swap_rel", swap, 1e-9);
    rep.at_most("ambient_involution_squared_rel", ambient, 1e-12);
    return rep;
}

/// Cross-chart agreement of the invariant two-form and its sign flip under
/// each involution, at 10^3 smooth fiber-solved points.
inline SuiteReport two_form_suite()
{
    SuiteReport rep{"two-form", {}};
    std::mt19937_64 rng(suite_seed + 4);
    double charts = 0.0, flip = 0.0, antisym = 0.0;
    int done = 0;
    while (done < 1000) {
        const Params params = detail::random_params(rng, 3.0);
        const SurfacePoint p = detail::random_surface_point(rng, params, 5.0);
        if (is_singular(p, params)) continue;
        const TangentFrame f = tangent_frame(p, params);
        const cplx omega = two_form(p, f, params);
        const double mag = std::abs(omega);
        for (Axis c : all_axes) {
            try {
                charts = std::max(charts, std::abs(two_form(p, f, params, c) - omega) / mag);
            } catch (const Error&) {
            }
        }
        antisym = std::max(antisym, std::abs(two_form(p, f.t2, f.t1, params) + omega) / mag);
        for (Axis a : all_axes) {
            const Mat3 j = jacobian_involution(a, p);
            const SurfacePoint q = apply_involution(a, p, params);
            const cplx pulled = two_form(q, Vec3(j * f.t1), Vec3(j * f.t2), params);
            flip = std::max(flip, std::abs(pulled + omega) / mag);
        }
        ++done;
    }
    rep.at_most("chart_agreement_rel", charts, 1e-9);
    rep.at_most("antisymmetry_rel", antisym, 1e-9);
    rep.at_most("involution_sign_flip_rel", flip, 1e-9);
    return rep;
}

inline SuiteReport traces_suite()
{
    SuiteReport rep{"traces", {}};
    std::mt19937_64 rng(suite_seed + 1);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i)
        worst = std::max(worst, check_trace_relations(SL2::random(rng, 5.0), SL2::random(rng, 5.0)));
    const SL2 m(1.0, 1.0, 0.0, 1.0), n(1.0, 0.0, 1.0, 1.0);
    rep.at_most("trace_relations_max_abs", worst, 1e-10);
    rep.at_most("hand_example_error", check_trace_relations(m, n), 0.0);
    rep.at_most("hand_example_tr_mn_minus_3", std::abs((m * n).trace() - 3.0), 0.0);
    return rep;
}

inline SuiteReport equivariance_suite()
{
    SuiteReport rep{"equivariance", {}};
    std::mt19937_64 rng(suite_seed + 2);
    double eq = 0.0, comm = 0.0, invariance = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const RepPair rep_pair{SL2::random(rng, 2.0), SL2::random(rng, 2.0)};
        for (Axis a : all_axes) {
            eq = std::max(eq, equivariance_check(a, rep_pair));
            const cplx t0 = commutator_trace(rep_pair);
            const cplx t1 = commutator_trace(precompose(a, rep_pair));
            invariance = std::max(invariance, std::abs(t1 - t0) / std::max(1.0, std::abs(t0)));
        }
        const SurfacePoint f = fricke_coords(rep_pair);
        const cplx surf = f.x * f.x + f.y * f.y + f.z * f.z + f.x * f.y * f.z - 2.0;
        const cplx tr = commutator_trace(rep_pair);
        comm = std::max(comm, std::abs(tr - surf) / std::max(1.0, std::abs(tr)));
    }
    rep.at_most("equivariance_max_abs", eq, 1e-8);
    rep.at_most("commutator_vs_surface_rel", comm, 1e-9);
    rep.at_most("commutator_invariance_rel", invariance, 1e-9);
    return rep;
}

template <class Rng>
TorusPoint random_torus_point(Rng& rng, double lo, double hi)
{
    std::uniform_real_distribution<double> mod(lo, hi), ang(0.0, 2.0 * std::numbers::pi);
    return {std::polar(mod(rng), ang(rng)), std::polar(mod(rng), ang(rng))};
}

template <class Rng>
Word random_word(Rng& rng, int maxlen)
{
    std::uniform_int_distribution<int> len(1, maxlen), pick(0, 2);
    const int n = len(rng);
    std::vector<Axis> seq;
    while (static_cast<int>(seq.size()) < n) {
        const Axis a = all_axes[pick(rng)];
        if (seq.empty() || seq.back() != a) seq.push_back(a);
    }
    return Word::reduce(seq);
}

/// Random hyperbolic element of GL(2,Z) with entries in [-bound, bound].
template <class Rng>
IntMatrix2 random_hyperbolic(Rng& rng, int bound)
{
    std::uniform_int_distribution<int> e(-bound, bound);
    for (;;) {
        const IntMatrix2 m{e(rng), e(rng), e(rng), e(rng)};
        if (std::abs(m.det()) != 1) continue;
        const IntMatrix2 n = orientation_preserving_power(m);
        if (std::abs(n.trace()) > 2) return m;
    }
}

inline SuiteReport picard_suite()
{
    SuiteReport rep{"picard", {}};
    std::mt19937_64 rng(suite_seed + 3);
    double gen = 0.0;
    for (int i = 0; i < 20; ++i) {
        const TorusPoint t = random_torus_point(rng, 1.0, 1.0);
        for (Axis a : all_axes) gen = std::max(gen, semiconjugacy_error(Word::reduce({a}), t));
    }
    double words = 0.0;
    for (int i = 0; i < 50; ++i) {
        const Word w = random_word(rng, 8);
        for (int j = 0; j < 20; ++j) words = std::max(words, semiconjugacy_error(w, random_torus_point(rng, 0.5, 2.0)));
    }
    double lift = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const TorusPoint t = random_torus_point(rng, 0.5, 2.0);
        double best = std::numeric_limits<double>::infinity();
        for (const TorusPoint& l : lift_phi(phi(t))) {
            for (const TorusPoint& c : {l, l.central_inverse()})
                best = std::min(best, std::max(std::abs(c.u - t.u), std::abs(c.v - t.v)));
        }
        lift = std::max(lift, best);
    }
    std::int64_t count_mismatch = 0;
    double realness = 0.0, range = 0.0, res = 0.0;
    for (int i = 0; i < 20; ++i) {
        const IntMatrix2 m = random_hyperbolic(rng, 10);
        for (int k = 1; k <= 4; ++k) {
            const auto pts = torus_periodic_points(m, k);
            const IntMatrix2 n = m.pow(k) - IntMatrix2::identity();
            count_mismatch += std::abs(static_cast<std::int64_t>(pts.size()) - std::abs(n.det()));
        }
        for (const SurfacePoint& q : saddle_sample(m, 1)) {
            for (Axis a : all_axes) {
                realness = std::max(realness, std::abs(q[a].imag()));
                range = std::max(range, std::abs(q[a].real()) - 2.0);
            }
            res = std::max(res, std::abs(residual(q, Params::cayley())) / scale(q));
        }
    }
    rep.at_most("generator_semiconjugacy_max", gen, 1e-9);
    rep.at_most("word_semiconjugacy_max", words, 1e-7);
    rep.at_most("lift_round_trip_max", lift, 1e-8);
    rep.at_most("periodic_count_mismatch", static_cast<double>(count_mismatch), 0.0);
    rep.at_most("unit_torus_imag_max", realness, 1e-12);
    rep.at_most("unit_torus_excess_over_2", range, 1e-12);
    rep.at_most("unit_torus_residual_rel", res, 1e-10);
    return rep;
}

inline SuiteReport fatou_ball_suite()
{
    SuiteReport rep{"fatou-ball", {}};
    const FatouCertReport r = fatou_ball_certify({-3.0, -3.0, -3.0}, 0.25, Params::markoff(), 100, 10);
    rep.require("monotone_ok", r.monotone_ok);
    rep.at_least("min_first_step_gain", r.min_first_step_gain, 21.0 / 16.0 - 1e-9);
    rep.at_least("min_first_step_modulus", r.min_first_step_modulus, 69.0 / 16.0);
    return rep;
}

/// Either the certificate passes the exhaustive inductive check, or the
/// returned config has pruning disabled. Unsound pruning is the failure mode.
inline SuiteReport escape_cert_suite(std::size_t samples = 10000, int word_length = 12)
{
    SuiteReport rep{"escape-cert", {}};
    ValidationReport v;
    const EscapeConfig cfg = validated_config(Params::markoff(), 0.0, samples, word_length, &v);
    rep.at_least("certified_samples", static_cast<double>(v.samples), static_cast<double>(samples));
    rep.at_least("nodes_checked", static_cast<double>(v.nodes_checked), 1.0);
    rep.require("no_silent_unsound_pruning", v.sound() ? cfg.enabled && cfg.validated : !cfg.enabled && !cfg.validated);
    rep.require("certificate_sound", v.sound());
    return rep;
}

inline SuiteReport run_suite(std::string_view name)
{
    if (name == "involutions") return involutions_suite();
    if (name == "two-form") return two_form_suite();
    if (name == "traces") return traces_suite();
    if (name == "equivariance") return equivariance_suite();
    if (name == "picard") return picard_suite();
    if (name == "fatou-ball") return fatou_ball_suite();
    if (name == "escape-cert") return escape_cert_suite();
    throw Error(ErrorKind::InvalidArgument, "unknown suite '" + std::string(name) + "'");
}

} // namespace cubic::verify
