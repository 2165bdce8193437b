#include <zetadim/specdim.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace zetadim {
namespace {

// Compensated accumulator; fixed summation order keeps results bit-stable.
struct Kahan {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

void require_lambda(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::domain_error("specdim: lambda must be positive and finite");
}

double trace_kernel(const Spectrum& spec, double lambda, bool symmetrize) {
    Kahan z;
    for (std::size_t k = 0; k < spec.values.size(); ++k) {
        const double r = spec.values[k] / lambda;
        z.add(spec.multiplicities[k] * std::exp(-r * r));
    }
    return (symmetrize ? 2.0 : 1.0) * z.sum;
}

// D_s as a ratio of sums with the common factor exp(-(u_min/lambda)^2)
// removed: the first shifted term is exactly m_0, so the denominator can
// never underflow to zero and D_s stays smooth for every positive lambda.
double dim_kernel(const Spectrum& spec, double lambda) {
    const double x0 = (spec.values.front() / lambda) *
                      (spec.values.front() / lambda);
    Kahan num, den;
    for (std::size_t k = 0; k < spec.values.size(); ++k) {
        const double r = spec.values[k] / lambda;
        const double x = r * r;
        const double w = spec.multiplicities[k] * std::exp(-(x - x0));
        num.add(x * w);
        den.add(w);
    }
    return 2.0 * num.sum / den.sum;
}

double parse_number(const std::string& field, const char* what,
                    std::size_t line_no) {
    const char* s = field.c_str();
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    while (end && *end == ' ') ++end;
    if (end == s || (end && *end != '\0') || !std::isfinite(v))
        throw std::domain_error("curve file line " + std::to_string(line_no) +
                                ": unparseable " + what + " '" + field + "'");
    return v;
}

}  // namespace

void DimensionCurve::validate() const {
    if (lambdas.empty())
        throw std::domain_error("dimension curve: empty");
    if (traces.size() != lambdas.size() || dims.size() != lambdas.size())
        throw std::domain_error("dimension curve: column lengths differ");
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > 0.0) || !std::isfinite(lambdas[i]))
            throw std::domain_error(
                "dimension curve: lambdas must be positive and finite");
        if (!(traces[i] > 0.0) || !std::isfinite(traces[i]))
            throw std::domain_error(
                "dimension curve: traces must be positive and finite");
        if (!(dims[i] >= 0.0) || !std::isfinite(dims[i]))
            throw std::domain_error(
                "dimension curve: dims must be finite and >= 0");
        if (i > 0 && !(lambdas[i] > lambdas[i - 1]))
            throw std::domain_error(
                "dimension curve: lambdas must be strictly increasing");
        if (i > 0 && !(traces[i] > traces[i - 1]))
            throw std::domain_error(
                "dimension curve: traces must be strictly increasing");
    }
    if (!(u_max >= 0.0) || !std::isfinite(u_max))
        throw std::domain_error("dimension curve: u_max must be >= 0");
}

double heat_trace(const Spectrum& spec, double lambda, bool symmetrize) {
    spec.validate();
    require_lambda(lambda);
    return trace_kernel(spec, lambda, symmetrize);
}

double spectral_dimension(const Spectrum& spec, double lambda) {
    spec.validate();
    require_lambda(lambda);
    return dim_kernel(spec, lambda);
}

DimensionCurve dimension_curve(const Spectrum& spec, const GridSpec& grid,
                               bool symmetrize) {
    spec.validate();
    const double lo =
        grid.lambda_min > 0.0 ? grid.lambda_min : spec.u_min() / 10.0;
    const double hi =
        grid.lambda_max > 0.0 ? grid.lambda_max : 10.0 * spec.u_max();
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo > 0.0) || !(lo < hi))
        throw std::domain_error(
            "dimension_curve: need 0 < lambda_min < lambda_max");
    if (grid.points < 16)
        throw std::domain_error("dimension_curve: need at least 16 points");

    const std::size_t n = grid.points;
    DimensionCurve curve;
    curve.lambdas.resize(n);
    curve.traces.resize(n);
    curve.dims.resize(n);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (std::size_t i = 0; i < n; ++i) {
        double lam = std::exp(llo + (lhi - llo) * double(i) / double(n - 1));
        if (i == 0) lam = lo;          // keep the endpoints exact
        if (i == n - 1) lam = hi;
        curve.lambdas[i] = lam;
        curve.traces[i] = trace_kernel(spec, lam, symmetrize);
        curve.dims[i] = dim_kernel(spec, lam);
    }
    curve.symmetrized = symmetrize;
    curve.spectrum_label = spec.label;
    curve.u_max = spec.u_max();
    curve.validate();
    return curve;
}

PlateauReport detect_plateau(const DimensionCurve& curve,
                             const DetectorParams& params) {
    curve.validate();
    if (!(params.slope_tol > 0.0) || !(params.min_width_efolds >= 0.0))
        throw std::domain_error(
            "detect_plateau: slope_tol must be > 0 and min_width >= 0");

    const std::size_t n = curve.lambdas.size();
    PlateauReport best;  // found=false until a window qualifies
    if (n < 2) return best;

    // Saturation cutoff: unknown u_max (foreign CSV) falls back to
    // lambda_max/10, which is exact for default-grid curves.
    const double umax_eff =
        curve.u_max > 0.0 ? curve.u_max : curve.lambdas.back() / 10.0;
    const double cap = params.exclude_saturated
                           ? umax_eff / 3.0
                           : std::numeric_limits<double>::infinity();

    std::vector<char> ok(n - 1);
    std::vector<double> lnl(n);
    for (std::size_t i = 0; i < n; ++i) lnl[i] = std::log(curve.lambdas[i]);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double slope =
            (curve.dims[i + 1] - curve.dims[i]) / (lnl[i + 1] - lnl[i]);
        ok[i] = std::abs(slope) <= params.slope_tol &&
                curve.lambdas[i] <= cap && curve.lambdas[i + 1] <= cap;
    }

    double best_std = 0.0;  // valid only while best.found
    for (std::size_t i = 0; i < ok.size();) {
        if (!ok[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;  // maximal run of qualifying slopes: [i, j]
        while (j + 1 < ok.size() && ok[j + 1]) ++j;
        const std::size_t i0 = i, i1 = j + 1;  // grid window [i0, i1]
        i = j + 1;

        const double width = lnl[i1] - lnl[i0];
        if (width < params.min_width_efolds) continue;
        double mean = 0.0;
        for (std::size_t k = i0; k <= i1; ++k) mean += curve.dims[k];
        mean /= double(i1 - i0 + 1);
        double var = 0.0;
        for (std::size_t k = i0; k <= i1; ++k) {
            const double d = curve.dims[k] - mean;
            var += d * d;
        }
        const double sd = std::sqrt(var / double(i1 - i0 + 1));

        // widest window wins; ties by smaller std, then by smaller lambda_lo
        const bool better =
            !best.found || width > best.width_efolds ||
            (width == best.width_efolds &&
             (sd < best_std ||
              (sd == best_std && curve.lambdas[i0] < best.lambda_lo)));
        if (better) {
            best.lambda_lo = curve.lambdas[i0];
            best.lambda_hi = curve.lambdas[i1];
            best.mean_dim = mean;
            best.std_dim = sd;
            best.width_efolds = width;
            best.found = true;
            best_std = sd;
        }
    }
    return best;
}

std::vector<std::pair<std::size_t, PlateauReport>> plateau_growth(
    const ZeroTable& zeros, const std::vector<std::size_t>& prefix_sizes,
    const GridSpec& grid, const DetectorParams& params) {
    zeros.validate();
    if (prefix_sizes.empty())
        throw std::domain_error("plateau_growth: no prefix sizes given");
    for (std::size_t i = 0; i < prefix_sizes.size(); ++i) {
        if (prefix_sizes[i] == 0 || prefix_sizes[i] > zeros.heights.size())
            throw std::domain_error(
                "plateau_growth: prefix sizes must be in [1, table length]");
        if (i > 0 && prefix_sizes[i] <= prefix_sizes[i - 1])
            throw std::domain_error(
                "plateau_growth: prefix sizes must be ascending");
    }

    std::vector<std::pair<std::size_t, PlateauReport>> out;
    out.reserve(prefix_sizes.size());
    for (const std::size_t n : prefix_sizes) {
        ZeroTable prefix;
        prefix.heights.assign(zeros.heights.begin(),
                              zeros.heights.begin() + long(n));
        prefix.source = zeros.source;
        prefix.abs_error_bound = zeros.abs_error_bound;
        const Spectrum spec = scale_zeros(prefix);
        const DimensionCurve curve = dimension_curve(spec, grid, true);
        out.emplace_back(n, detect_plateau(curve, params));
    }
    return out;
}

void write_curve_csv(const DimensionCurve& curve,
                     const std::filesystem::path& path,
                     const std::vector<std::string>& extra_comments) {
    curve.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path.string());
    for (const std::string& line : extra_comments) out << "# " << line << "\n";
    out << "# spectrum=" << curve.spectrum_label
        << " symmetrize=" << (curve.symmetrized ? "true" : "false")
        << " n=" << curve.lambdas.size() << "\n";
    out << "# umax=" << format_g17(curve.u_max) << "\n";
    out << "lambda,heat_trace,spectral_dimension\n";
    for (std::size_t i = 0; i < curve.lambdas.size(); ++i)
        out << format_g17(curve.lambdas[i]) << ','
            << format_g17(curve.traces[i]) << ','
            << format_g17(curve.dims[i]) << "\n";
    if (!out.flush())
        throw std::runtime_error("write failed: " + path.string());
}

DimensionCurve read_curve_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open for reading: " + path.string());

    DimensionCurve curve;
    curve.symmetrized = true;
    long declared_n = -1;
    bool header_seen = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ss(line.substr(1));
            std::string tok;
            while (ss >> tok) {
                if (tok.rfind("spectrum=", 0) == 0) {
                    curve.spectrum_label = tok.substr(9);
                } else if (tok.rfind("symmetrize=", 0) == 0) {
                    const std::string v = tok.substr(11);
                    if (v == "true")
                        curve.symmetrized = true;
                    else if (v == "false")
                        curve.symmetrized = false;
                    else
                        throw std::domain_error(
                            "curve file line " + std::to_string(line_no) +
                            ": symmetrize must be true or false");
                } else if (tok.rfind("n=", 0) == 0) {
                    declared_n =
                        std::lround(parse_number(tok.substr(2), "n", line_no));
                } else if (tok.rfind("umax=", 0) == 0) {
                    curve.u_max =
                        parse_number(tok.substr(5), "umax", line_no);
                }
            }
            continue;
        }
        if (!header_seen) {
            if (line != "lambda,heat_trace,spectral_dimension")
                throw std::domain_error(
                    "curve file line " + std::to_string(line_no) +
                    ": expected header "
                    "'lambda,heat_trace,spectral_dimension'");
            header_seen = true;
            continue;
        }
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? std::string::npos
                                                : line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos ||
            line.find(',', c2 + 1) != std::string::npos)
            throw std::domain_error("curve file line " +
                                    std::to_string(line_no) +
                                    ": expected exactly three columns");
        curve.lambdas.push_back(
            parse_number(line.substr(0, c1), "lambda", line_no));
        curve.traces.push_back(parse_number(
            line.substr(c1 + 1, c2 - c1 - 1), "heat_trace", line_no));
        curve.dims.push_back(parse_number(line.substr(c2 + 1),
                                          "spectral_dimension", line_no));
    }
    if (!header_seen)
        throw std::domain_error("curve file " + path.string() +
                                ": missing header line");
    if (declared_n >= 0 && std::size_t(declared_n) != curve.lambdas.size())
        throw std::domain_error(
            "curve file " + path.string() + ": header declares n=" +
            std::to_string(declared_n) + " but " +
            std::to_string(curve.lambdas.size()) + " rows are present");
    curve.validate();
    return curve;
}

std::string plateau_csv(const PlateauReport& report) {
    std::string s = "lambda_lo,lambda_hi,mean_dim,std_dim,width_efolds,found\n";
    s += format_g17(report.lambda_lo) + ',' + format_g17(report.lambda_hi) +
         ',' + format_g17(report.mean_dim) + ',' +
         format_g17(report.std_dim) + ',' +
         format_g17(report.width_efolds) + ',' +
         (report.found ? "true" : "false") + "\n";
    return s;
}

}  // namespace zetadim
