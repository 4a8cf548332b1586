#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cubic/cubic.hpp"

using namespace cubic;

namespace {

struct ParamFlags {
    std::string A = "0", B = "0", C = "0", D = "0";

    void attach(CLI::App* app)
    {
        app->add_option("--A", A, "parameter A (complex, a+bi)")->capture_default_str();
        app->add_option("--B", B, "parameter B")->capture_default_str();
        app->add_option("--C", C, "parameter C")->capture_default_str();
        app->add_option("--D", D, "parameter D")->capture_default_str();
    }

    Params get() const
    {
        return {io::parse_complex(A), io::parse_complex(B), io::parse_complex(C), io::parse_complex(D)};
    }
};

void write_file(const std::string& path, const std::string& data)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot open '" + path + "' for writing");
    f << data;
    if (!f) throw Error(ErrorKind::InvalidArgument, "write to '" + path + "' failed");
}

void emit(const std::string& path, const std::string& data)
{
    if (path.empty() || path == "-")
        std::cout << data;
    else
        write_file(path, data);
}

IntMatrix2 parse_matrix(const std::string& s)
{
    const auto parts = io::split(s, ',');
    if (parts.size() != 4) throw Error(ErrorKind::Parse, "matrix needs four comma-separated integers a,b,c,d");
    std::int64_t e[4];
    for (int i = 0; i < 4; ++i) {
        const std::string t(io::detail::trim(parts[i]));
        std::size_t used = 0;
        try {
            e[i] = std::stoll(t, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (t.empty() || used != t.size()) throw Error(ErrorKind::Parse, "bad matrix entry '" + t + "'");
    }
    return {e[0], e[1], e[2], e[3]};
}

EscapeConfig escape_config(bool prune, const Params& params, double margin, std::size_t samples)
{
    if (!prune) return {false, margin, false};
    ValidationReport rep;
    const EscapeConfig cfg = validated_config(params, margin, samples, 12, &rep);
    if (!cfg.enabled) std::cerr << "warning: escape certificate failed validation; pruning disabled\n";
    return cfg;
}

// Flat key=value files: top-level keys belong to the subcommand being run.
class FlatConfig : public CLI::ConfigINI {
public:
    explicit FlatConfig(const CLI::App* app) : app_(app) {}

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override
    {
        std::vector<CLI::ConfigItem> items = CLI::ConfigINI::from_config(input);
        const auto subs = app_->get_subcommands();
        if (subs.empty()) return items;
        for (auto& item : items)
            if (item.parents.empty() && item.name != "--") item.parents = {subs.front()->get_name()};
        return items;
    }

private:
    const CLI::App* app_;
};

std::string rational_str(const Rational& r)
{
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"dynamics on the affine cubic surfaces x^2+y^2+z^2+xyz = Ax+By+Cz+D"};
    app.set_config("--config", "", "flat key=value file; flags on the command line win");
    app.config_formatter(std::make_shared<FlatConfig>(&app));
    app.require_subcommand(1);

    // bq-scan
    auto* scan = app.add_subcommand("bq-scan", "BQ verdict raster over a slice (PPM + CSV)");
    ParamFlags scan_p;
    scan_p.attach(scan);
    std::string plane = "fix_z", fixed = "0", branch = "first", out_prefix = "scan";
    double re_min = -1, re_max = 1, im_min = -1, im_max = 1, margin = 0.0;
    int width = 32, height = 32, scan_depth = 12;
    std::string scan_k;
    bool no_prune = false;
    std::size_t validation_samples = 10000;
    scan->add_option("--plane", plane)->check(CLI::IsMember({"fix_z", "fix_x", "fix_y"}))->capture_default_str();
    scan->add_option("--fixed", fixed, "value of the fixed coordinate")->capture_default_str();
    scan->add_option("--re-min", re_min)->capture_default_str();
    scan->add_option("--re-max", re_max)->capture_default_str();
    scan->add_option("--im-min", im_min)->capture_default_str();
    scan->add_option("--im-max", im_max)->capture_default_str();
    scan->add_option("--branch", branch)->check(CLI::IsMember({"first", "second", "both"}))->capture_default_str();
    scan->add_option("--width", width)->capture_default_str();
    scan->add_option("--height", height)->capture_default_str();
    scan->add_option("--depth", scan_depth)->capture_default_str();
    scan->add_option("--K", scan_k, "BQ disc radius (default 2 + max(|A|,|B|,|C|))");
    scan->add_flag("--no-prune", no_prune, "disable escape-certificate pruning");
    scan->add_option("--margin", margin)->capture_default_str();
    scan->add_option("--validation-samples", validation_samples)->capture_default_str();
    scan->add_option("--out", out_prefix, "writes <out>.ppm and <out>.csv")->capture_default_str();

    // bq (single point, JSON)
    auto* bq = app.add_subcommand("bq", "BQ verdict for one point as a JSON document");
    ParamFlags bq_p;
    bq_p.attach(bq);
    std::string bq_point, bq_k;
    int bq_depth = 12;
    bool bq_no_prune = false;
    bq->add_option("--point", bq_point, "x,y,z")->required();
    bq->add_option("--depth", bq_depth)->capture_default_str();
    bq->add_option("--K", bq_k);
    bq->add_flag("--no-prune", bq_no_prune);
    bq->add_option("--margin", margin)->capture_default_str();
    bq->add_option("--validation-samples", validation_samples)->capture_default_str();

    // orbit
    auto* orbit = app.add_subcommand("orbit", "orbit points over reduced words as CSV");
    ParamFlags orbit_p;
    orbit_p.attach(orbit);
    std::string orbit_point, orbit_out;
    int orbit_depth = 3;
    bool ambient = false, orbit_prune = false;
    double dedup = default_dedup_tol;
    orbit->add_option("--point", orbit_point, "x,y,z")->required();
    orbit->add_option("--depth", orbit_depth)->capture_default_str();
    orbit->add_flag("--ambient", ambient, "accept points off the surface");
    orbit->add_flag("--prune", orbit_prune, "stop at escape-certified nodes");
    orbit->add_option("--dedup-tol", dedup)->capture_default_str();
    orbit->add_option("--out", orbit_out, "CSV path (default stdout)");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run a named invariant suite");
    std::string suite;
    std::vector<std::string> suite_choices;
    for (auto n : verify::suite_names()) suite_choices.emplace_back(n);
    verify_cmd->add_option("suite", suite)->required()->check(CLI::IsMember(suite_choices));

    // word
    auto* word_cmd = app.add_subcommand("word", "reduced form, matrix and type of a word");
    ParamFlags word_p;
    word_p.attach(word_cmd);
    std::string word_str, word_point;
    word_cmd->add_option("word", word_str, "letters x, y, z; leftmost applied last")->required();
    word_cmd->add_option("--point", word_point, "x,y,z to map");

    // params-from-traces
    auto* traces = app.add_subcommand("params-from-traces", "surface parameters from four boundary traces");
    std::vector<std::string> trace_args;
    traces->add_option("traces", trace_args, "a1 a2 a3 a4")->expected(4)->required()->allow_extra_args(false);

    // fixed-find
    auto* fixed_cmd = app.add_subcommand("fixed-find", "fixed points of a word by damped Gauss-Newton");
    ParamFlags fixed_p;
    fixed_p.attach(fixed_cmd);
    std::string fixed_word, picard_seed;
    std::vector<std::string> seeds;
    int max_iter = 200, picard_k = 1;
    fixed_cmd->add_option("--word", fixed_word)->required();
    fixed_cmd->add_option("--seed", seeds, "x,y,z (repeatable)");
    fixed_cmd->add_option("--picard-seeds", picard_seed, "a,b,c,d: seed from the period-k torus points of this matrix");
    fixed_cmd->add_option("--k", picard_k, "period for --picard-seeds")->capture_default_str();
    fixed_cmd->add_option("--max-iter", max_iter)->capture_default_str();

    // nondiscrete-search
    auto* nd = app.add_subcommand("nondiscrete-search", "words moving a small ball the least");
    ParamFlags nd_p;
    nd_p.attach(nd);
    std::string nd_center = "0,0,0";
    double nd_radius = 0.3;
    int nd_maxlen = 8, nd_grid = 5, nd_steps = 4;
    std::size_t nd_top = 10;
    std::vector<std::string> zass;
    nd->add_option("--center", nd_center)->capture_default_str();
    nd->add_option("--radius", nd_radius)->capture_default_str();
    nd->add_option("--maxlen", nd_maxlen)->capture_default_str();
    nd->add_option("--grid", nd_grid)->capture_default_str();
    nd->add_option("--top", nd_top)->capture_default_str();
    nd->add_option("--zassenhaus", zass, "w1 w2: iterate commutators instead")->expected(2);
    nd->add_option("--steps", nd_steps, "commutator steps for --zassenhaus")->capture_default_str();

    // picard-periodic
    auto* pp = app.add_subcommand("picard-periodic", "periodic torus points and their Cayley-cubic images");
    std::string pp_matrix;
    int pp_k = 1;
    pp->add_option("--matrix", pp_matrix, "a,b,c,d")->required();
    pp->add_option("--k", pp_k)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*scan) {
            const Params params = scan_p.get();
            io::SliceSpec s;
            s.plane = plane == "fix_x" ? io::SlicePlane::FixX : plane == "fix_y" ? io::SlicePlane::FixY : io::SlicePlane::FixZ;
            s.fixed = io::parse_complex(fixed);
            s.re_min = re_min;
            s.re_max = re_max;
            s.im_min = im_min;
            s.im_max = im_max;
            s.branch = branch == "second" ? io::Branch::Second : branch == "both" ? io::Branch::Both : io::Branch::First;
            s.width = width;
            s.height = height;
            s.validate();
            const double K = scan_k.empty() ? default_K(params) : std::stod(scan_k);
            const EscapeConfig cfg = escape_config(!no_prune, params, margin, validation_samples);
            const io::ScanResult r = io::bq_scan(params, s, scan_depth, K, cfg);
            write_file(out_prefix + ".ppm", r.ppm());
            write_file(out_prefix + ".csv", r.csv());
        } else if (*bq) {
            const Params params = bq_p.get();
            const SurfacePoint p = io::parse_point(bq_point);
            if (!on_surface(p, params)) throw Error(ErrorKind::InvalidArgument, "point is not on the surface");
            const double K = bq_k.empty() ? default_K(params) : std::stod(bq_k);
            const EscapeConfig cfg = escape_config(!bq_no_prune, params, margin, validation_samples);
            const BQVerdict v = bq_test(p, params, bq_depth, K, cfg);
            std::cout << io::verdict_json(v, params, p, bq_k.empty()).dump(2) << "\n";
        } else if (*orbit) {
            const Params params = orbit_p.get();
            const SurfacePoint p = io::parse_point(orbit_point);
            if (!ambient && !on_surface(p, params))
                throw Error(ErrorKind::InvalidArgument, "point is off the surface (pass --ambient to allow)");
            if (orbit_depth < 0) throw Error(ErrorKind::InvalidArgument, "depth must be >= 0");
            const EscapeConfig cfg = escape_config(orbit_prune, params, 0.0, 10000);
            emit(orbit_out, io::orbit_csv(orbit_bfs(p, params, orbit_depth, dedup, cfg)));
        } else if (*verify_cmd) {
            const verify::SuiteReport r = verify::run_suite(suite);
            std::cout << r.text();
            return r.pass() ? 0 : 1;
        } else if (*word_cmd) {
            const Word w = Word::parse(word_str);
            const IntMatrix2 m = word_to_matrix(w);
            std::cout << "reduced " << (w.empty() ? std::string("(identity)") : w.str()) << "\n";
            std::cout << "length " << w.size() << "\n";
            std::cout << "matrix " << io::format_matrix(m) << "\n";
            std::cout << "det " << m.det() << "\n";
            std::cout << "abs_trace " << std::llabs(orientation_preserving_power(m).trace()) << "\n";
            std::cout << "class " << to_string(classify(w)) << "\n";
            if (!word_point.empty()) {
                const Params params = word_p.get();
                std::cout << "image " << io::format_point(apply_word(w, io::parse_point(word_point), params)) << "\n";
            }
        } else if (*traces) {
            const Params p = params_from_puncture_traces({io::parse_complex(trace_args[0]), io::parse_complex(trace_args[1]),
                                                          io::parse_complex(trace_args[2]), io::parse_complex(trace_args[3])});
            std::cout << "A " << io::format_complex(p.A) << "\n"
                      << "B " << io::format_complex(p.B) << "\n"
                      << "C " << io::format_complex(p.C) << "\n"
                      << "D " << io::format_complex(p.D) << "\n";
        } else if (*fixed_cmd) {
            const Params params = fixed_p.get();
            const Word w = Word::parse(fixed_word);
            std::vector<SurfacePoint> seed_pts;
            for (const auto& s : seeds) seed_pts.push_back(io::parse_point(s));
            if (!picard_seed.empty())
                for (const auto& q : saddle_sample(parse_matrix(picard_seed), picard_k)) seed_pts.push_back(q);
            if (seed_pts.empty()) throw Error(ErrorKind::InvalidArgument, "no seeds given (--seed or --picard-seeds)");
            const FixedPointSearch r = find_fixed_points(w, params, seed_pts, max_iter);
            std::cout << "word " << w.str() << " seeds " << seed_pts.size() << " converged " << r.converged << " dropped "
                      << r.dropped << "\n";
            for (const FixedPoint& f : r.points) {
                std::cout << io::format_point(f.point) << " tag " << to_string(f.tag);
                if (f.eigenvalues)
                    std::cout << " eigenvalues " << io::format_complex(f.eigenvalues->first) << " "
                              << io::format_complex(f.eigenvalues->second) << " product "
                              << io::format_complex(f.eigenvalues->first * f.eigenvalues->second);
                std::cout << " residual " << io::format_double(f.system_residual) << "\n";
            }
        } else if (*nd) {
            const Params params = nd_p.get();
            const SurfacePoint c = io::parse_point(nd_center);
            if (!zass.empty()) {
                const ZassenhausResult r =
                    zassenhaus_iterate(Word::parse(zass[0]), Word::parse(zass[1]), c, nd_radius, params, nd_steps, nd_grid);
                std::cout << "step,length,sup_displacement,word\n";
                for (std::size_t i = 0; i < r.steps.size(); ++i)
                    std::cout << i + 1 << ',' << r.steps[i].word.size() << ',' << io::format_double(r.steps[i].sup) << ','
                              << r.steps[i].word.str() << "\n";
                if (r.abelian_step) std::cout << "abelian pair at step " << *r.abelian_step << "\n";
            } else {
                const auto r = near_identity_search(c, nd_radius, params, nd_maxlen, nd_grid, nd_top);
                std::cout << "rank,length,sup_displacement,word\n";
                for (std::size_t i = 0; i < r.size(); ++i)
                    std::cout << i + 1 << ',' << r[i].word.size() << ',' << io::format_double(r[i].sup) << ','
                              << r[i].word.str() << "\n";
            }
        } else if (*pp) {
            const IntMatrix2 m = parse_matrix(pp_matrix);
            const auto angles = torus_periodic_points(m, pp_k);
            const auto pts = saddle_sample(m, pp_k);
            std::cout << "theta1,theta2,re_x,im_x,re_y,im_y,re_z,im_z\n";
            for (std::size_t i = 0; i < angles.size(); ++i) {
                std::cout << rational_str(angles[i].theta1()) << ',' << rational_str(angles[i].theta2());
                for (Axis a : all_axes)
                    std::cout << ',' << io::format_double(pts[i][a].real()) << ',' << io::format_double(pts[i][a].imag());
                std::cout << "\n";
            }
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
