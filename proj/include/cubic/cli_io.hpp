#pragma once

// Text formats shared by the command-line tool: complex scalars, points,
// orbit CSV, verdict JSON documents and PPM/CSV slice scans.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dynamics.hpp"
#include "error.hpp"
#include "parallel.hpp"
#include "surface.hpp"
#include "word.hpp"

namespace cubic::io {

/// Shortest-round-trip-safe fixed format: 17 significant digits.
inline std::string format_double(double d)
{
    if (d == 0.0) d = 0.0; // print -0 as 0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
}

/// "a+bi" / "a-bi", always with both parts.
inline std::string format_complex(cplx c)
{
    std::string re = format_double(c.real());
    std::string im = format_double(c.imag());
    if (im.front() != '-') im.insert(im.begin(), '+');
    return re + im + "i";
}

namespace detail {

inline double parse_real(std::string_view s, std::string_view whole)
{
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw Error(ErrorKind::Parse, "cannot parse complex scalar '" + std::string(whole) + "'");
    return v;
}

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

} // namespace detail

/// Parses "a", "bi", "a+bi", "a-bi" (also "i", "-i", exponents like 1e-3+2e+1i).
inline cplx parse_complex(std::string_view text)
{
    const std::string_view s = detail::trim(text);
    if (s.empty()) throw Error(ErrorKind::Parse, "empty complex scalar");
    if (s.back() != 'i') return {detail::parse_real(s, text), 0.0};

    const std::string_view body = s.substr(0, s.size() - 1);
    std::size_t split = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    auto imag_part = [&](std::string_view t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return detail::parse_real(t, text);
    };
    if (split == std::string_view::npos) return {0.0, imag_part(body)};
    return {detail::parse_real(body.substr(0, split), text), imag_part(body.substr(split))};
}

inline std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (std::size_t k = 0; k <= s.size(); ++k) {
        if (k == s.size() || s[k] == sep) {
            parts.push_back(s.substr(start, k - start));
            start = k + 1;
        }
    }
    return parts;
}

/// "x,y,z" with each entry a complex scalar.
inline SurfacePoint parse_point(std::string_view s)
{
    const auto parts = split(s, ',');
    if (parts.size() != 3) throw Error(ErrorKind::Parse, "point needs three comma-separated scalars");
    return {parse_complex(parts[0]), parse_complex(parts[1]), parse_complex(parts[2])};
}

inline std::string format_point(const SurfacePoint& p)
{
    return "(" + format_complex(p.x) + ", " + format_complex(p.y) + ", " + format_complex(p.z) + ")";
}

inline std::string format_matrix(const IntMatrix2& m)
{
    return "(" + std::to_string(m.a) + "," + std::to_string(m.b) + ";" + std::to_string(m.c) + "," +
           std::to_string(m.d) + ")";
}

// ---------------------------------------------------------------------------
// Orbit CSV

inline std::string orbit_csv(const OrbitResult& orbit)
{
    std::string out = "word,len,re_x,im_x,re_y,im_y,re_z,im_z\n";
    for (const OrbitNode& n : orbit.nodes) {
        out += n.word.str();
        out += ',' + std::to_string(n.word.size());
        for (Axis a : all_axes) {
            out += ',' + format_double(n.point[a].real());
            out += ',' + format_double(n.point[a].imag());
        }
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Verdict documents

inline nlohmann::json to_json(cplx c) { return nlohmann::json::array({c.real(), c.imag()}); }

inline nlohmann::json verdict_json(const BQVerdict& v, const Params& params, const SurfacePoint& p, bool k_is_default)
{
    nlohmann::json j;
    j["verdict"] = std::string(to_string(v.kind()));
    j["witness_word"] = nullptr;
    j["low_nodes"] = nullptr;
    j["depth"] = v.depth();
    if (const auto* nm = std::get_if<NotMember>(&v.outcome)) {
        j["witness_word"] = nm->witness.str();
        j["witness_axis"] = std::string(1, letter(nm->axis));
        j["witness_value"] = to_json(nm->value);
    } else if (const auto* cm = std::get_if<CertifiedMember>(&v.outcome)) {
        j["low_nodes"] = cm->low_nodes;
    } else if (const auto* in = std::get_if<Inconclusive>(&v.outcome)) {
        j["low_nodes"] = in->uncertified_low;
        j["frontier"] = in->frontier;
        j["overflow"] = in->overflow;
    }
    j["params"] = {{"A", to_json(params.A)}, {"B", to_json(params.B)}, {"C", to_json(params.C)}, {"D", to_json(params.D)}};
    j["point"] = nlohmann::json::array({to_json(p.x), to_json(p.y), to_json(p.z)});
    j["k_constant"] = v.K;
    j["k_constant_default"] = k_is_default;
    j["certificate_validated"] = v.certificate_validated;
    return j;
}

// ---------------------------------------------------------------------------
// Slice scans

enum class SlicePlane { FixX, FixY, FixZ };
enum class Branch { First, Second, Both };

/// A complex line of the surface: one coordinate fixed, a second varying over
/// the window, the third solved on the fiber. fix_z varies y and solves x;
/// fix_x varies z and solves y; fix_y varies x and solves z.
struct SliceSpec {
    SlicePlane plane = SlicePlane::FixZ;
    cplx fixed{0.0};
    double re_min = -1.0, re_max = 1.0, im_min = -1.0, im_max = 1.0;
    Branch branch = Branch::First;
    int width = 1, height = 1;

    void validate() const
    {
        if (!(re_min < re_max) || !(im_min < im_max))
            throw Error(ErrorKind::InvalidArgument, "slice window must satisfy re_min < re_max, im_min < im_max");
        if (width < 1 || height < 1) throw Error(ErrorKind::InvalidArgument, "slice resolution must be >= 1");
    }

    int image_width() const { return branch == Branch::Both ? 2 * width : width; }
};

struct SliceAxes {
    Axis fixed, varying, solved;
};

inline SliceAxes slice_axes(SlicePlane p)
{
    switch (p) {
    case SlicePlane::FixX: return {Axis::X, Axis::Z, Axis::Y};
    case SlicePlane::FixY: return {Axis::Y, Axis::X, Axis::Z};
    case SlicePlane::FixZ: return {Axis::Z, Axis::Y, Axis::X};
    }
    return {Axis::Z, Axis::Y, Axis::X};
}

struct Rgb {
    unsigned char r = 0, g = 0, b = 0;
};

inline Rgb verdict_color(const BQVerdict& v)
{
    const int shade = std::max(0, 255 - 16 * v.depth());
    switch (v.kind()) {
    case VerdictKind::NotMember: return {static_cast<unsigned char>(shade), 0, 0};
    case VerdictKind::CertifiedMember: return {0, 0, static_cast<unsigned char>(shade)};
    case VerdictKind::Inconclusive: return {0, 0, 0};
    }
    return {};
}

inline constexpr Rgb fiber_failure_color{128, 128, 128};

struct PixelVerdict {
    cplx coord;
    std::string verdict; // NotMember / CertifiedMember / Inconclusive / FiberFailure
    int depth = 0;
    Rgb color;
};

struct ScanResult {
    int width = 0, height = 0;
    std::vector<PixelVerdict> pixels; // row-major

    std::string ppm() const
    {
        std::string out = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
        out.reserve(out.size() + pixels.size() * 3);
        for (const auto& px : pixels) {
            out.push_back(static_cast<char>(px.color.r));
            out.push_back(static_cast<char>(px.color.g));
            out.push_back(static_cast<char>(px.color.b));
        }
        return out;
    }

    std::string csv() const
    {
        std::string out = "px,py,coord_re,coord_im,verdict,depth\n";
        for (int py = 0; py < height; ++py) {
            for (int px = 0; px < width; ++px) {
                const auto& p = pixels[static_cast<std::size_t>(py) * width + px];
                out += std::to_string(px) + ',' + std::to_string(py) + ',' + format_double(p.coord.real()) + ',' +
                       format_double(p.coord.imag()) + ',' + p.verdict + ',' + std::to_string(p.depth) + '\n';
            }
        }
        return out;
    }
};

/// Value of the varying coordinate at the center of pixel (px, py); row 0 is
/// the top of the window (largest imaginary part).
inline cplx pixel_coordinate(const SliceSpec& s, int px, int py)
{
    const double re = s.re_min + (px + 0.5) * (s.re_max - s.re_min) / s.width;
    const double im = s.im_max - (py + 0.5) * (s.im_max - s.im_min) / s.height;
    return {re, im};
}

inline SurfacePoint slice_point(const SliceSpec& s, cplx varying, bool second_root, const Params& params)
{
    const SliceAxes ax = slice_axes(s.plane);
    SurfacePoint known;
    known[ax.fixed] = s.fixed;
    known[ax.varying] = varying;
    const auto [first, second] = other_axes(ax.solved);
    const auto [p1, p2] = solve_fiber(ax.solved, known[first], known[second], params);
    return second_root ? p2 : p1;
}

/// BQ verdict for every pixel of the slice. Pixels are evaluated in parallel
/// and stored by index, so the output does not depend on scheduling.
inline ScanResult bq_scan(const Params& params, const SliceSpec& slice, int depth, double K, const EscapeConfig& cfg)
{
    slice.validate();
    ScanResult res;
    res.width = slice.image_width();
    res.height = slice.height;
    res.pixels.resize(static_cast<std::size_t>(res.width) * res.height);
    parallel_for(res.pixels.size(), [&](std::size_t idx) {
        const int px = static_cast<int>(idx % res.width);
        const int py = static_cast<int>(idx / res.width);
        const bool second = slice.branch == Branch::Second || (slice.branch == Branch::Both && px >= slice.width);
        const cplx c = pixel_coordinate(slice, px % slice.width, py);
        PixelVerdict& out = res.pixels[idx];
        out.coord = c;
        const SurfacePoint p = slice_point(slice, c, second, params);
        if (!is_finite(p)) {
            out.verdict = "FiberFailure";
            out.color = fiber_failure_color;
            return;
        }
        const BQVerdict v = bq_test(p, params, depth, K, cfg);
        out.verdict = std::string(to_string(v.kind()));
        out.depth = v.depth();
        out.color = verdict_color(v);
    });
    return res;
}

} // namespace cubic::io
