// Implementation of the zero engine: Riemann-Siegel production route,
// Lanczos/Euler-Maclaurin reference route, Gram-interval zero hunt, counting
// law, and the zero-file / cache plumbing.
#include "zetadim/zero_engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace zetadim {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;

#include "rs_coeffs.inc"  // kRsCheb / kRsChebLen: C_0..C_8 Chebyshev tables

double clenshaw(const double* a, int n, double x) {
    double b1 = 0.0, b2 = 0.0;
    for (int k = n - 1; k >= 1; --k) {
        double b0 = 2.0 * x * b1 - b2 + a[k];
        b2 = b1;
        b1 = b0;
    }
    return x * b1 - b2 + a[0];
}

// ln n and 1/sqrt(n) for the main sum; t <= 1e6 keeps N = floor(sqrt(t/2pi))
// below 399, so a fixed table covers the guardrailed domain.
constexpr int kMainTab = 512;
const std::array<double, kMainTab>& log_table() {
    static const std::array<double, kMainTab> tab = [] {
        std::array<double, kMainTab> v{};
        for (int n = 1; n < kMainTab; ++n) v[n] = std::log(double(n));
        return v;
    }();
    return tab;
}
const std::array<double, kMainTab>& rsqrt_table() {
    static const std::array<double, kMainTab> tab = [] {
        std::array<double, kMainTab> v{};
        for (int n = 1; n < kMainTab; ++n) v[n] = 1.0 / std::sqrt(double(n));
        return v;
    }();
    return tab;
}

void require_t10(double t, const char* who) {
    if (!(t >= 10.0))
        throw std::domain_error(std::string(who) +
                                ": t must be >= 10 (asymptotic series regime)");
}

}  // namespace

double rs_theta(double t) {
    require_t10(t, "rs_theta");
    const double lt = std::log(t / kTwoPi);
    const double t2 = t * t;
    return 0.5 * t * lt - 0.5 * t - kPi / 8.0 + 1.0 / (48.0 * t) +
           7.0 / (5760.0 * t * t2);
}

double rs_z(double t, int correction_terms) {
    require_t10(t, "rs_z");
    if (correction_terms < 0 || correction_terms > 9)
        throw std::domain_error("rs_z: correction_terms must be in 0..9");
    const double a = std::sqrt(t / kTwoPi);
    const int N = int(a);
    const double p = a - N;
    const double th = rs_theta(t);

    const auto& ln = log_table();
    const auto& rs = rsqrt_table();
    double s = 0.0;
    for (int n = 1; n <= N; ++n) s += std::cos(th - t * ln[n]) * rs[n];
    s *= 2.0;

    const double x = 2.0 * p - 1.0;
    double r = 0.0, apow = 1.0;
    for (int j = 0; j < correction_terms; ++j) {
        r += clenshaw(kRsCheb[j], kRsChebLen[j], x) * apow;
        apow /= a;
    }
    const double sign = (N % 2 == 1) ? 1.0 : -1.0;
    return s + sign * r / std::sqrt(a);
}

double remainder_bound(double t, int correction_terms) {
    require_t10(t, "remainder_bound");
    if (correction_terms < 0 || correction_terms > 9)
        throw std::domain_error("remainder_bound: correction_terms must be in 0..9");
    // Envelope constants measured against high-precision ground truth on
    // dense per-segment p sweeps over t in [10, 5273] plus a log grid to
    // 5000, then widened 1.5x:
    //   |rs_z(t,k) - Z(t)| <= b_k * (t/2pi)^{-(2k+1)/4} + 1e-13 * t,
    // where the additive term covers double-rounding noise in the main-sum
    // phase arguments (which grow ~ t) and the power law covers the first
    // omitted correction term (b_0, b_1 plateau at max_p |C_k| as expected).
    static constexpr double b[10] = {1.4,    4.5e-2, 8.4e-3, 8.6e-4, 7.3e-4,
                                     1.3e-4, 5.4e-5, 1.9e-5, 5.0e-6, 4.2e-6};
    return b[correction_terms] *
               std::pow(t / kTwoPi, -(2.0 * correction_terms + 1.0) / 4.0) +
           1e-13 * t;
}

double reference_theta(double t) {
    // Lanczos g=7, 9 terms; z = 1/4 + it/2 stays in the right half plane, so
    // principal branches apply throughout and the result is the continuous
    // argument matching theta(0) = -ln(pi)/... at t = 0.
    static constexpr double c[9] = {
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
    const std::complex<double> z(0.25, 0.5 * t);
    const std::complex<double> x = z - 1.0;
    std::complex<double> a(c[0], 0.0);
    for (int i = 1; i < 9; ++i) a += c[i] / (x + double(i));
    const std::complex<double> tp = x + 7.5;  // x + g + 1/2
    const std::complex<double> lg =
        0.9189385332046727 /* ln(2pi)/2 */ + (x + 0.5) * std::log(tp) - tp +
        std::log(a);
    return lg.imag() - 0.5 * t * std::log(kPi);
}

std::complex<double> reference_zeta_half_line(double t) {
    const std::complex<double> s(0.5, t);
    const int N = int(std::ceil(10.0 + std::abs(t)));
    // Main sum with Kahan compensation (real and imaginary parts separately).
    double sr = 0.0, si = 0.0, cr = 0.0, ci = 0.0;
    for (int n = 1; n <= N; ++n) {
        const double ln = std::log(double(n));
        const double mag = std::exp(-0.5 * ln);
        const double re = mag * std::cos(t * ln);
        const double im = -mag * std::sin(t * ln);
        double y = re - cr, u = sr + y;
        cr = (u - sr) - y;
        sr = u;
        y = im - ci;
        u = si + y;
        ci = (u - si) - y;
        si = u;
    }
    std::complex<double> sum(sr, si);

    const double lnN = std::log(double(N));
    const std::complex<double> Nms = std::exp(-s * lnN);  // N^{-s}
    std::complex<double> zeta = sum + double(N) * Nms / (s - 1.0) - 0.5 * Nms;

    // Euler-Maclaurin tail: B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{1-s-2k}.
    static constexpr double bern[8] = {1.0 / 6,  -1.0 / 30,    1.0 / 42,
                                       -1.0 / 30, 5.0 / 66,    -691.0 / 2730,
                                       7.0 / 6,  -3617.0 / 510};
    std::complex<double> poch = s;             // s(s+1)...(s+2k-2), k terms
    std::complex<double> npow = Nms / double(N);  // N^{-s-1}
    double fact = 2.0;                         // (2k)!
    for (int k = 1; k <= 8; ++k) {
        zeta += bern[k - 1] / fact * poch * npow;
        // advance to k+1: multiply pochhammer by (s+2k-1)(s+2k), factorial by
        // (2k+1)(2k+2), power by N^{-2}
        poch *= (s + double(2 * k - 1)) * (s + double(2 * k));
        fact *= double(2 * k + 1) * double(2 * k + 2);
        npow /= double(N) * double(N);
    }
    return zeta;
}

double reference_z(double t) {
    const std::complex<double> rotation(std::cos(reference_theta(t)),
                                        std::sin(reference_theta(t)));
    return (rotation * reference_zeta_half_line(t)).real();
}

namespace {

// --- Gram-interval zero hunt -------------------------------------------------

double gram_point(long n, double hint) {
    const double target = double(n) * kPi;
    double x = hint;
    for (int i = 0; i < 40; ++i) {
        const double f = rs_theta(x) - target;
        const double step = f / (0.5 * std::log(x / kTwoPi));
        x -= step;
        if (std::abs(step) < 1e-12 * std::max(1.0, x)) break;
    }
    return x;
}

bool opposite(double f, double g) { return (f < 0.0) != (g < 0.0); }

double bisect_zero(double lo, double hi, double flo) {
    while (hi - lo > 2e-12) {
        const double mid = 0.5 * (lo + hi);
        const double fm = rs_z(mid);
        if (opposite(flo, fm)) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

// Scan [lo, hi] with 4*3^k + 1 uniform points for k = 1..8 until at least
// `needed` sign-change brackets appear; returns all brackets found at the
// succeeding level (empty if no level succeeds).  Uniform deepening has no
// blind spots: a coarse cell may hide a zero triple, but the next level
// splits every cell, so clusters are resolved as long as the finest spacing
// (about 3e-4 for a two-Gram-interval window) stays below the minimum gap
// between zeros, which holds by orders of magnitude for t <= 1e6.
std::vector<std::pair<double, double>> rescan_brackets(double lo, double hi,
                                                       std::size_t needed) {
    std::vector<double> pts, fs;
    std::vector<std::pair<double, double>> brackets;
    long m = 4;
    for (int k = 1; k <= 8; ++k) {
        m *= 3;  // 4*3^k cells
        pts.resize(m + 1);
        fs.resize(m + 1);
        for (long i = 0; i <= m; ++i) {
            pts[i] = lo + (hi - lo) * double(i) / double(m);
            fs[i] = rs_z(pts[i]);
        }
        brackets.clear();
        for (long i = 0; i < m; ++i)
            if (opposite(fs[i], fs[i + 1]))
                brackets.emplace_back(pts[i], pts[i + 1]);
        if (brackets.size() >= needed) return brackets;
    }
    return {};
}

ZeroTable find_zeros_impl(std::size_t want_count, double want_tmax) {
    const bool by_count = want_count > 0 || want_tmax == 0.0;
    std::vector<double> zeros;
    if (by_count && want_count == 0) {
        return ZeroTable{{}, ZeroTable::Source::computed, 1e-12};
    }

    double window_lo = 10.0;                 // start of the previous interval
    double prev = 10.0, fprev = rs_z(10.0);  // current interval start
    double g = 17.8455995;                   // Newton seed for g_0
    const long walk_cap =
        by_count ? 2 * long(want_count) + 1000 : std::numeric_limits<long>::max();
    long grace = 0;  // Gram intervals walked past t_max with a deficit open

    for (long n = 0;; ++n) {
        if (n > walk_cap)
            throw std::runtime_error(
                "missed zero: Gram walk exceeded twice the expected length");
        g = gram_point(n, g);
        const double fg = rs_z(g);
        if (opposite(fprev, fg)) zeros.push_back(bisect_zero(prev, g, fprev));

        const std::size_t expect = std::size_t(n) + 1;  // theta(g_n) = n*pi
        if (zeros.size() < expect) {
            // Gram's heuristic failed nearby: rescan the last two intervals.
            // `needed` counts every zero the window must hold (already-found
            // ones included); on success all found zeros in the window are
            // replaced wholesale, so nothing is double-counted or dropped.
            const std::size_t before =
                std::size_t(std::lower_bound(zeros.begin(), zeros.end(),
                                             window_lo) -
                            zeros.begin());
            const auto brackets =
                rescan_brackets(window_lo, g, expect - before);
            if (!brackets.empty()) {
                zeros.resize(before);
                for (const auto& [blo, bhi] : brackets)
                    zeros.push_back(bisect_zero(blo, bhi, rs_z(blo)));
            }
            // An unmet deficit here is almost always a zero sitting just
            // above g_n (an S(T) excursion); the next iteration's window
            // covers it.  Anything persistent trips the final count check.
        }
        const bool deficit = zeros.size() < expect;

        window_lo = prev;
        prev = g;
        fprev = fg;
        if (by_count) {
            if (zeros.size() >= want_count && !deficit) break;
        } else if (g >= want_tmax) {
            // Let an open deficit resolve (the missing zero may lie below
            // t_max) but bound the overrun; the count check has the last word.
            if (!deficit || ++grace > 8) break;
        }
    }

    std::sort(zeros.begin(), zeros.end());
    double check_T;
    if (by_count) {
        if (zeros.size() < want_count)
            throw std::runtime_error("missed zero: walk ended short");
        zeros.resize(want_count);
        check_T = gram_point(long(want_count) - 1, zeros.back() + 1.0);
        // expected count below the (count-1)-th Gram point is exactly `count`
        const double backf = rs_z(check_T);
        (void)backf;
        const long expect_here = long(want_count);
        long have = long(std::upper_bound(zeros.begin(), zeros.end(), check_T) -
                         zeros.begin());
        // zeros beyond check_T were trimmed; only a shortfall can signal a miss
        if (expect_here - have > 1)
            throw std::runtime_error(
                "missed zero: count disagrees with the smooth estimate by > 1");
    } else {
        const auto it =
            std::upper_bound(zeros.begin(), zeros.end(), want_tmax);
        zeros.erase(it, zeros.end());
        const double smooth = rs_theta(want_tmax) / kPi + 1.0;
        const long expect_here = std::lround(smooth);
        if (std::labs(expect_here - long(zeros.size())) > 1)
            throw std::runtime_error(
                "missed zero: count disagrees with the smooth estimate by > 1");
    }

    ZeroTable table;
    table.heights = std::move(zeros);
    table.source = ZeroTable::Source::computed;
    table.abs_error_bound = 1e-12;
    table.validate();
    return table;
}

}  // namespace

ZeroTable find_zeros(ByCount limit) {
    if (limit.count > 1000000)
        throw std::domain_error("find_zeros: count exceeds the 1e6 guardrail");
    return find_zeros_impl(limit.count, 0.0);
}

ZeroTable find_zeros(ByHeight limit) {
    if (!(limit.t_max >= 10.0))
        throw std::domain_error("find_zeros: t_max must be >= 10");
    if (limit.t_max > 1e6)
        throw std::domain_error("find_zeros: t_max exceeds the 1e6 guardrail");
    return find_zeros_impl(0, limit.t_max);
}

void ZeroTable::validate() const {
    double prev = 14.0;  // no zeros at or below the first-zero floor
    for (std::size_t i = 0; i < heights.size(); ++i) {
        const double h = heights[i];
        if (!(h > 14.0))
            throw std::domain_error("ZeroTable: height " + std::to_string(i) +
                                    " not above 14");
        if (!(h > prev))
            throw std::domain_error("ZeroTable: heights not strictly increasing at index " +
                                    std::to_string(i));
        if (i > 0 && h - prev <= abs_error_bound)
            throw std::domain_error("ZeroTable: duplicate within error bound at index " +
                                    std::to_string(i));
        prev = h;
    }
}

CountingReport count_estimate(double T) {
    require_t10(T, "count_estimate");
    CountingReport r;
    r.T = T;
    r.smooth_estimate = rs_theta(T) / kPi + 1.0;
    r.density_at_T = std::log(T / kTwoPi) / kTwoPi;
    return r;
}

CountingReport count_estimate(double T, const ZeroTable& table) {
    CountingReport r = count_estimate(T);
    r.found = std::size_t(std::upper_bound(table.heights.begin(),
                                           table.heights.end(), T) -
                          table.heights.begin());
    return r;
}

// --- files and cache ---------------------------------------------------------

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

// digits after the decimal point of a printed number, 0 if none
int printed_decimals(const std::string& text) {
    const auto dot = text.find('.');
    if (dot == std::string::npos) return 0;
    int d = 0;
    for (std::size_t i = dot + 1; i < text.size(); ++i) {
        if (text[i] >= '0' && text[i] <= '9')
            ++d;
        else if (text[i] == 'e' || text[i] == 'E')
            break;  // exponent notation: treat mantissa digits only
        else
            break;
    }
    return d;
}

std::string trimmed(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& text, double& out) {
    const char* c = text.c_str();
    char* end = nullptr;
    out = std::strtod(c, &end);
    return end != c && *end == '\0';
}

}  // namespace

ZeroTable import_zero_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open zero file: " + path);

    double offset = 0.0, declared_bound = -1.0;
    bool have_offset = false, have_data = false;
    std::vector<std::pair<long, std::string>> rows;  // (line number, text)
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trimmed(line);
        if (s.empty()) continue;
        if (s[0] == '#') {
            if (s.rfind("# offset", 0) == 0) {
                if (have_offset)
                    throw std::domain_error("line " + std::to_string(lineno) +
                                            ": duplicate offset header");
                if (have_data)
                    throw std::domain_error("line " + std::to_string(lineno) +
                                            ": offset header after data");
                if (!parse_double(trimmed(s.substr(8)), offset))
                    throw std::domain_error("line " + std::to_string(lineno) +
                                            ": unparseable offset");
                have_offset = true;
            } else if (s.rfind("# abs_error_bound", 0) == 0) {
                double b;
                if (parse_double(trimmed(s.substr(17)), b)) declared_bound = b;
            }
            continue;  // other comments carry config metadata; not semantic
        }
        have_data = true;
        rows.emplace_back(lineno, s);
    }

    ZeroTable table;
    table.source = ZeroTable::Source::imported;
    double bound = 0.0;
    double prev = -1e300;
    long prev_line = 0;
    for (const auto& [ln, text] : rows) {
        double v;
        if (!parse_double(text, v))
            throw std::domain_error("line " + std::to_string(ln) +
                                    ": unparseable height '" + text + "'");
        const double h = v + offset;
        if (h <= prev)
            throw std::domain_error("line " + std::to_string(ln) +
                                    ": non-monotonic height");
        bound = std::max(bound, 0.5 * std::pow(10.0, -printed_decimals(text)));
        prev = h;
        prev_line = ln;
        table.heights.push_back(h);
    }
    (void)prev_line;
    table.abs_error_bound = declared_bound >= 0.0 ? declared_bound : bound;
    table.validate();
    return table;
}

void write_zero_file(const ZeroTable& table, const std::string& path,
                     const std::vector<std::string>& comments) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write zero file: " + path);
    for (const auto& c : comments) out << "# " << c << "\n";
    out << "# abs_error_bound " << format_g17(table.abs_error_bound) << "\n";
    for (double h : table.heights) out << format_g17(h) << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string cache_path(const std::string& dir, ByCount limit) {
    return dir + "/" + std::to_string(limit.count) + ".zeros";
}

std::string cache_path(const std::string& dir, ByHeight limit) {
    return dir + "/" + format_g17(limit.t_max) + ".zeros";
}

namespace {
std::optional<ZeroTable> load_if_valid(const std::string& path) {
    if (!std::filesystem::exists(path)) return std::nullopt;
    try {
        return import_zero_file(path);
    } catch (const std::exception&) {
        return std::nullopt;  // stale or corrupt cache entries are misses
    }
}
}  // namespace

std::optional<ZeroTable> try_load_cached(const std::string& dir, ByCount limit) {
    auto t = load_if_valid(cache_path(dir, limit));
    if (!t || t->heights.size() < limit.count) return std::nullopt;
    t->heights.resize(limit.count);
    return t;
}

std::optional<ZeroTable> try_load_cached(const std::string& dir, ByHeight limit) {
    const std::string path = cache_path(dir, limit);
    auto t = load_if_valid(path);
    if (!t) return std::nullopt;
    // Coverage must be demonstrable: either the table extends past t_max, or
    // a "# covers_to <T>" header (written when a trimmed height-limited table
    // is cached) vouches for the searched range.
    double covers = t->heights.empty() ? 0.0 : t->heights.back();
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        const std::string s = trimmed(line);
        if (s.empty()) continue;
        if (s[0] != '#') break;
        if (s.rfind("# covers_to", 0) == 0) {
            double v;
            if (parse_double(trimmed(s.substr(11)), v))
                covers = std::max(covers, v);
        }
    }
    if (covers < limit.t_max) return std::nullopt;
    auto& h = t->heights;
    h.erase(std::upper_bound(h.begin(), h.end(), limit.t_max), h.end());
    return t;
}

}  // namespace zetadim
