// zetadim: deterministic CLI over the zero engine, baseline spectra, and the
// heat-trace spectral-dimension estimator.
//
//   zeros compute --count N | --tmax T [--out PATH]
//   zeros import  --file PATH
//   zeros check   --count N
//   dim     --spectrum SPEC [--spectrum SPEC ...] [--grid lo:hi:pts]
//           [--no-symmetrize] [--out PATH] [--svg PATH]
//   plateau --curve PATH [--slope-tol X] [--min-width W] [--include-saturated]
//   compare --a PATH --b PATH
//
// SPEC is a file path or one of the generators riemann:N, circle:N,
// torus:d:N, sphere:N, gue:N:SEED, poisson:N:SEED.
//
// Exit codes: 0 success, 1 I/O failure, 2 validation failure, 3 plateau not
// found.  Every emitted artifact embeds its effective configuration as
// comment lines; identical configurations give byte-identical output.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zetadim/specdim.hpp"
#include "zetadim/spectra.hpp"
#include "zetadim/svg.hpp"
#include "zetadim/zero_engine.hpp"

namespace {

using namespace zetadim;

std::string resolve_cache_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("ZETADIM_CACHE"); env && *env)
        return env;
    return "./.zetadim-cache";
}

// Strict numeric field parsers for the spectrum/grid mini-language.
unsigned long long parse_ull(const std::string& s, const std::string& what) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE ||
        s[0] == '-')
        throw std::domain_error("invalid " + what + ": '" + s + "'");
    return v;
}

double parse_real(const std::string& s, const std::string& what) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
        throw std::domain_error("invalid " + what + ": '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

// Computes (or loads) the first `count` zeros, keeping the cache warm.
ZeroTable zeros_by_count(std::size_t count, const std::string& cache_dir) {
    const ByCount limit{count};
    if (auto hit = try_load_cached(cache_dir, limit)) return std::move(*hit);
    ZeroTable table = find_zeros(limit);
    std::filesystem::create_directories(cache_dir);
    write_zero_file(table, cache_path(cache_dir, limit),
                    {"config: zeros count=" + std::to_string(count)});
    return table;
}

ZeroTable zeros_by_height(double t_max, const std::string& cache_dir) {
    const ByHeight limit{t_max};
    if (auto hit = try_load_cached(cache_dir, limit)) return std::move(*hit);
    ZeroTable table = find_zeros(limit);
    std::filesystem::create_directories(cache_dir);
    write_zero_file(table, cache_path(cache_dir, limit),
                    {"config: zeros tmax=" + format_g17(t_max),
                     "covers_to " + format_g17(t_max)});
    return table;
}

// SPEC -> Spectrum.  Generator names win over identically named files; use a
// path containing '/' (or './name') to force file interpretation.
Spectrum make_spectrum(const std::string& spec, const std::string& cache_dir) {
    const std::vector<std::string> parts = split(spec, ':');
    const std::string& head = parts[0];
    auto arity = [&](std::size_t n) {
        if (parts.size() != n)
            throw std::domain_error("spectrum spec '" + spec + "': expected " +
                                    std::to_string(n - 1) +
                                    " ':'-separated arguments after '" + head +
                                    "'");
    };
    if (head == "riemann" || head == "riemann-theta") {
        arity(2);
        const auto n = parse_ull(parts[1], "zero count");
        const ZeroTable table =
            zeros_by_count(static_cast<std::size_t>(n), cache_dir);
        return head == "riemann" ? scale_zeros(table)
                                 : scale_zeros_theta(table);
    }
    if (head == "circle") {
        arity(2);
        return circle_dirac(
            static_cast<std::size_t>(parse_ull(parts[1], "circle n_max")));
    }
    if (head == "torus") {
        arity(3);
        const auto d = parse_ull(parts[1], "torus dimension");
        if (d > 3) throw std::domain_error("torus dimension must be 1..3");
        return torus_dirac(static_cast<int>(d),
                           static_cast<std::size_t>(
                               parse_ull(parts[2], "torus n_max")));
    }
    if (head == "sphere") {
        arity(2);
        return sphere_dirac(
            static_cast<std::size_t>(parse_ull(parts[1], "sphere n_max")));
    }
    if (head == "gue" || head == "poisson") {
        arity(3);
        EnsembleConfig config;
        config.size = static_cast<std::size_t>(
            parse_ull(parts[1], head + " size"));
        config.seed = parse_ull(parts[2], head + " seed");
        config.ensemble = head == "gue" ? EnsembleConfig::Ensemble::gue
                                        : EnsembleConfig::Ensemble::poisson;
        return head == "gue" ? gue_spectrum(config) : poisson_spectrum(config);
    }
    if (!std::filesystem::exists(spec))
        throw std::domain_error(
            "spectrum spec '" + spec +
            "' is neither a known generator nor an existing file");
    return read_spectrum_csv(spec);
}

GridSpec parse_grid(const std::string& text) {
    GridSpec grid;  // defaults = auto range, 200 points
    if (text.empty() || text == "auto") return grid;
    const std::vector<std::string> parts = split(text, ':');
    if (parts.size() != 3)
        throw std::domain_error("--grid expects lo:hi:pts, got '" + text +
                                "'");
    grid.lambda_min = parse_real(parts[0], "grid lo");
    grid.lambda_max = parse_real(parts[1], "grid hi");
    const auto pts = parse_ull(parts[2], "grid pts");
    grid.points = static_cast<std::size_t>(pts);
    if (!(grid.lambda_min > 0.0) || !(grid.lambda_max > grid.lambda_min))
        throw std::domain_error("--grid needs 0 < lo < hi");
    return grid;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
    if (!out.flush()) throw std::runtime_error("write failed: " + path);
}

// ---------------------------------------------------------------- zeros ----

struct ZerosComputeArgs {
    std::size_t count = 0;
    double t_max = 0.0;
    bool have_count = false, have_tmax = false;
    std::string out;
};

int run_zeros_compute(const ZerosComputeArgs& args,
                      const std::string& cache_dir) {
    if (args.have_count == args.have_tmax)
        throw std::domain_error(
            "zeros compute: provide exactly one of --count / --tmax");
    ZeroTable table;
    std::string config;
    if (args.have_count) {
        if (args.count == 0)
            throw std::domain_error("zeros compute: --count must be >= 1");
        table = zeros_by_count(args.count, cache_dir);
        config = "config: command=zeros-compute count=" +
                 std::to_string(args.count);
    } else {
        table = zeros_by_height(args.t_max, cache_dir);
        config = "config: command=zeros-compute tmax=" +
                 format_g17(args.t_max);
    }
    const std::string dest =
        !args.out.empty()
            ? args.out
            : (args.have_count
                   ? cache_path(cache_dir, ByCount{args.count})
                   : cache_path(cache_dir, ByHeight{args.t_max}));
    if (!args.out.empty()) {
        std::vector<std::string> comments{config};
        if (args.have_tmax)
            comments.push_back("covers_to " + format_g17(args.t_max));
        write_zero_file(table, args.out, comments);
    }
    std::cout << "wrote " << dest << ": " << table.heights.size()
              << " zeros, t in [" << format_g17(table.heights.front()) << ", "
              << format_g17(table.heights.back()) << "]\n";
    return 0;
}

int run_zeros_import(const std::string& file, const std::string& cache_dir) {
    const ZeroTable table = import_zero_file(file);
    std::filesystem::create_directories(cache_dir);
    const std::string dest =
        cache_path(cache_dir, ByCount{table.heights.size()});
    write_zero_file(table, dest,
                    {"config: command=zeros-import file=" + file});
    std::cout << "imported " << table.heights.size() << " zeros from " << file
              << " (abs_error_bound=" << format_g17(table.abs_error_bound)
              << "), cached as " << dest << "\n";
    return 0;
}

// Independent certification: for each computed zero, bisect reference_z (the
// Euler-Maclaurin route) inside a bracket bounded by the neighboring zeros
// and report the worst disagreement.
int run_zeros_check(std::size_t count, const std::string& cache_dir) {
    if (count == 0 || count > 2000)
        throw std::domain_error("zeros check: --count must be in 1..2000");
    const ZeroTable table = zeros_by_count(count, cache_dir);
    const auto& h = table.heights;
    double max_delta = 0.0;
    std::size_t argmax = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double gap_left = i > 0 ? h[i] - h[i - 1] : h[0] - 10.0;
        const double gap_right =
            i + 1 < h.size() ? h[i + 1] - h[i] : gap_left;
        const double delta = 0.4 * std::min(gap_left, gap_right);
        double lo = h[i] - delta, hi = h[i] + delta;
        double flo = reference_z(lo), fhi = reference_z(hi);
        if ((flo < 0) == (fhi < 0))
            throw std::runtime_error(
                "oracle found no sign change around t=" + format_g17(h[i]));
        while (hi - lo > 1e-9) {
            const double mid = 0.5 * (lo + hi);
            const double fmid = reference_z(mid);
            if ((fmid < 0) == (flo < 0)) {
                lo = mid;
                flo = fmid;
            } else {
                hi = mid;
            }
        }
        const double d = std::abs(0.5 * (lo + hi) - h[i]);
        if (d > max_delta) {
            max_delta = d;
            argmax = i + 1;
        }
    }
    std::cout << "# config: command=zeros-check count=" << count << "\n";
    std::cout << "checked " << count
              << " zeros against the Euler-Maclaurin oracle: max |delta| = "
              << format_g17(max_delta) << " (zero #" << argmax << ")\n";
    return 0;
}

// ------------------------------------------------------------------ dim ----

struct DimArgs {
    std::vector<std::string> specs;
    std::string grid_text;
    bool no_symmetrize = false;
    std::string out, svg;
};

int run_dim(const DimArgs& args, const std::string& cache_dir) {
    if (args.out.empty() && args.svg.empty())
        throw std::domain_error("dim: provide --out and/or --svg");
    if (!args.out.empty() && args.specs.size() != 1)
        throw std::domain_error(
            "dim: --out writes a single-curve CSV; use exactly one "
            "--spectrum (overlay multiple with --svg)");
    const GridSpec grid = parse_grid(args.grid_text);
    const bool symmetrize = !args.no_symmetrize;

    std::ostringstream config;
    config << "config: command=dim";
    for (const auto& s : args.specs) config << " spectrum=" << s;
    config << " grid="
           << (args.grid_text.empty() ? std::string("auto") : args.grid_text)
           << " symmetrize=" << (symmetrize ? "true" : "false");

    std::vector<DimensionCurve> curves;
    curves.reserve(args.specs.size());
    for (const auto& spec_text : args.specs)
        curves.push_back(dimension_curve(make_spectrum(spec_text, cache_dir),
                                         grid, symmetrize));

    if (!args.out.empty())
        write_curve_csv(curves[0], args.out, {config.str()});
    if (!args.svg.empty()) {
        std::vector<SvgSeries> series;
        series.reserve(curves.size());
        for (const auto& c : curves)
            series.push_back({c.spectrum_label, c.lambdas, c.dims});
        write_text_file(args.svg, render_svg(series, config.str()));
    }
    for (const auto& c : curves)
        std::cout << c.spectrum_label << ": " << c.lambdas.size()
                  << " points, lambda in [" << format_g17(c.lambdas.front())
                  << ", " << format_g17(c.lambdas.back()) << "]\n";
    return 0;
}

// -------------------------------------------------------------- plateau ----

int run_plateau(const std::string& curve_path, double slope_tol,
                double min_width, bool include_saturated) {
    DetectorParams params;
    params.slope_tol = slope_tol;
    params.min_width_efolds = min_width;
    params.exclude_saturated = !include_saturated;
    const DimensionCurve curve = read_curve_csv(curve_path);
    const PlateauReport report = detect_plateau(curve, params);
    std::cout << "# config: command=plateau curve=" << curve_path
              << " slope_tol=" << format_g17(params.slope_tol)
              << " min_width=" << format_g17(params.min_width_efolds)
              << " exclude_saturated="
              << (params.exclude_saturated ? "true" : "false") << "\n";
    std::cout << plateau_csv(report);
    return report.found ? 0 : 3;
}

// -------------------------------------------------------------- compare ----

int run_compare(const std::string& path_a, const std::string& path_b) {
    const DimensionCurve a = read_curve_csv(path_a);
    const DimensionCurve b = read_curve_csv(path_b);
    const double lo = std::max(a.lambdas.front(), b.lambdas.front());
    const double hi = std::min(a.lambdas.back(), b.lambdas.back());
    const double efolds = hi > lo ? std::log(hi / lo) : 0.0;
    if (!(hi > lo) || efolds < 1.0) {
        std::cerr << "compare: grids overlap by "
                  << format_g17(std::max(efolds, 0.0))
                  << " e-folds (< 1 required)\n";
        return 2;
    }
    // B's dimension, interpolated linearly in ln(lambda) at A's grid nodes.
    auto interp_b = [&](double lam) {
        const auto& L = b.lambdas;
        std::size_t j =
            std::upper_bound(L.begin(), L.end(), lam) - L.begin();
        j = std::clamp<std::size_t>(j, 1, L.size() - 1) - 1;
        const double w = (std::log(lam) - std::log(L[j])) /
                         (std::log(L[j + 1]) - std::log(L[j]));
        return b.dims[j] * (1.0 - w) + b.dims[j + 1] * w;
    };
    std::ostringstream rows;
    double max_diff = 0.0;
    for (std::size_t i = 0; i < a.lambdas.size(); ++i) {
        const double lam = a.lambdas[i];
        if (lam < lo || lam > hi) continue;
        const double da = a.dims[i], db = interp_b(lam);
        max_diff = std::max(max_diff, std::abs(da - db));
        rows << format_g17(lam) << ',' << format_g17(da) << ','
             << format_g17(db) << ',' << format_g17(da - db) << "\n";
    }
    const PlateauReport pa = detect_plateau(a), pb = detect_plateau(b);
    std::cout << "# config: command=compare a=" << path_a << " b=" << path_b
              << "\n";
    std::cout << "# overlap_lo=" << format_g17(lo)
              << " overlap_hi=" << format_g17(hi)
              << " overlap_efolds=" << format_g17(efolds) << "\n";
    std::cout << "# max_abs_diff=" << format_g17(max_diff) << "\n";
    std::cout << "# plateau_a: found=" << (pa.found ? "true" : "false")
              << " mean_dim=" << format_g17(pa.mean_dim) << "\n";
    std::cout << "# plateau_b: found=" << (pb.found ? "true" : "false")
              << " mean_dim=" << format_g17(pb.mean_dim) << "\n";
    std::cout << "# plateau_mean_diff="
              << (pa.found && pb.found
                      ? format_g17(pa.mean_dim - pb.mean_dim)
                      : std::string("unavailable"))
              << "\n";
    std::cout << "lambda,dim_a,dim_b,diff\n" << rows.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "zetadim: spectral dimension of zeta-zero and reference spectra"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may appear after the subcommand too
    std::string cache_flag;
    app.add_option("--cache-dir", cache_flag,
                   "zero-table cache directory (overrides ZETADIM_CACHE; "
                   "default ./.zetadim-cache)");

    auto* zeros = app.add_subcommand("zeros", "compute, import, or check "
                                              "critical-line zero tables");
    zeros->require_subcommand(1);

    ZerosComputeArgs zc;
    auto* compute = zeros->add_subcommand(
        "compute", "compute the first N zeros or all zeros up to a height");
    auto* opt_count =
        compute->add_option("--count", zc.count, "number of zeros");
    auto* opt_tmax =
        compute->add_option("--tmax", zc.t_max, "height ceiling");
    opt_count->excludes(opt_tmax);
    opt_tmax->excludes(opt_count);
    compute->add_option("--out", zc.out, "also write the table here");

    std::string import_file;
    auto* import_cmd =
        zeros->add_subcommand("import", "validate and cache a zero table");
    import_cmd->add_option("--file", import_file, "zero table to import")
        ->required();

    std::size_t check_count = 0;
    auto* check = zeros->add_subcommand(
        "check", "cross-validate zeros against the independent oracle");
    check->add_option("--count", check_count, "zeros to certify")->required();

    DimArgs dim_args;
    auto* dim = app.add_subcommand(
        "dim", "heat-trace spectral-dimension curve for one or more spectra");
    dim->add_option("--spectrum", dim_args.specs,
                    "file path or riemann:N|riemann-theta:N|circle:N|"
                    "torus:d:N|sphere:N|gue:N:SEED|poisson:N:SEED "
                    "(repeatable)")
        ->required();
    dim->add_option("--grid", dim_args.grid_text,
                    "lambda grid lo:hi:pts (default: auto, 200 points)");
    dim->add_flag("--no-symmetrize", dim_args.no_symmetrize,
                  "count each eigenvalue once instead of twice (+u and -u)");
    dim->add_option("--out", dim_args.out,
                    "curve CSV path (exactly one --spectrum)");
    dim->add_option("--svg", dim_args.svg, "figure path (all spectra "
                                           "overlaid)");

    std::string plateau_curve;
    double slope_tol = 0.05, min_width = 1.0;
    bool include_saturated = false;
    auto* plateau =
        app.add_subcommand("plateau", "detect the flat window of a curve CSV");
    plateau->add_option("--curve", plateau_curve, "curve CSV to scan")
        ->required();
    plateau->add_option("--slope-tol", slope_tol,
                        "max |d ln-slope| inside the plateau (default 0.05)");
    plateau->add_option("--min-width", min_width,
                        "minimum width in e-folds (default 1.0)");
    plateau->add_flag("--include-saturated", include_saturated,
                      "also scan lambda beyond the spectral edge");

    std::string cmp_a, cmp_b;
    auto* compare =
        app.add_subcommand("compare", "align two curves and diff them");
    compare->add_option("--a", cmp_a, "first curve CSV")->required();
    compare->add_option("--b", cmp_b, "second curve CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const std::string cache_dir = resolve_cache_dir(cache_flag);
        if (compute->parsed()) {
            zc.have_count = opt_count->count() > 0;
            zc.have_tmax = opt_tmax->count() > 0;
            return run_zeros_compute(zc, cache_dir);
        }
        if (import_cmd->parsed()) return run_zeros_import(import_file, cache_dir);
        if (check->parsed()) return run_zeros_check(check_count, cache_dir);
        if (dim->parsed()) return run_dim(dim_args, cache_dir);
        if (plateau->parsed())
            return run_plateau(plateau_curve, slope_tol, min_width,
                               include_saturated);
        if (compare->parsed()) return run_compare(cmp_a, cmp_b);
        throw std::domain_error("no subcommand given");
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
