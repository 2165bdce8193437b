// Nontrivial zeta zeros on the critical line, from first principles.
//
// Two independent evaluation routes are kept deliberately separate:
//
//   production route   rs_theta / rs_z      Riemann-Siegel: theta asymptotic
//                                           series + main sum + tabulated
//                                           remainder terms C_0..C_8.
//   reference route    reference_theta /    Lanczos log-Gamma phase and an
//                      reference_zeta_*     Euler-Maclaurin zeta evaluator
//                                           with compensated summation.
//
// The two share no code and no constants, so agreement between them certifies
// both.  Zeros are located by walking Gram intervals: theta(g_n) = n*pi, and
// consecutive Gram points usually bracket exactly one sign change of Z.
// Where Gram's heuristic fails, intervals are subdivided until the running
// count matches the smooth counting estimate theta(T)/pi + 1.
#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace zetadim {

// Ordered positive zero heights t_j with provenance metadata.
struct ZeroTable {
    enum class Source { computed, imported };

    std::vector<double> heights;  // strictly increasing, all > 14
    Source source = Source::computed;
    double abs_error_bound = 0.0;  // guaranteed bracket half-width

    // Throws std::domain_error if any invariant fails.
    void validate() const;
};

// Smooth counting law N(T) ~ theta(T)/pi + 1 and its density, optionally
// compared against an actual table.
struct CountingReport {
    double T = 0.0;
    std::size_t found = 0;       // table entries <= T (0 when no table given)
    double smooth_estimate = 0;  // theta(T)/pi + 1
    double density_at_T = 0;     // ln(T/2pi)/(2pi)
};

// Riemann-Siegel theta, asymptotic series
//   theta(t) = (t/2)ln(t/2pi) - t/2 - pi/8 + 1/(48t) + 7/(5760 t^3).
// Truncation error measured against an independent log-Gamma evaluation:
// |err| < 4e-9 at t = 10, < 1e-9 for t >= 13.  Rejects t < 10.
double rs_theta(double t);

// Hardy Z via the Riemann-Siegel formula.  With a = sqrt(t/2pi), N = floor(a),
// p = a - N:
//   Z(t) = 2 sum_{n<=N} cos(theta(t) - t ln n)/sqrt(n)
//          + (-1)^(N-1) a^(-1/2) sum_{j<correction_terms} C_j(p) a^(-j).
// correction_terms counts leading remainder terms (0 = main sum only) and may
// be 0..9; C_0..C_8 are evaluated from Chebyshev tables (src/rs_coeffs.inc).
// Measured accuracy at the default 9 terms: |rs_z - Z| < 3e-7 on [10, 5000],
// < 1e-9 for t >= 30.  Lower orders are much coarser near the left end of the
// range (about 6e-3 / 3e-3 / 2e-4 / 1e-4 / 1.5e-5 max for 1..5 terms); see
// remainder_bound().  Rejects t < 10 and terms outside 0..9.
double rs_z(double t, int correction_terms = 9);

// Conservative measured bound on |rs_z(t, terms) - Z(t)| for t >= 10,
// decreasing in t like (t/2pi)^{-(2*terms+1)/4}.
double remainder_bound(double t, int correction_terms);

// Independent phase: theta(t) = Im(lgamma(1/4 + it/2)) - (t/2) ln pi,
// evaluated with a 9-term Lanczos approximation (no series shared with
// rs_theta).  Accepts any finite t.
double reference_theta(double t);

// Independent zeta(1/2 + it) by Euler-Maclaurin with N = ceil(10 + |t|)
// direct terms, 8 Bernoulli corrections, and Kahan-compensated accumulation.
// Absolute error < 1e-9 for |t| <= 1e4.  Accepts any finite t (negative t
// exercises the Schwarz reflection zeta(conj s) = conj zeta(s)).
std::complex<double> reference_zeta_half_line(double t);

// Z(t) through the reference route only: Re(e^{i theta_ref} zeta_ref).
// Same real zeros as rs_z; used to certify computed zeros independently.
double reference_z(double t);

// Limit selectors for find_zeros.
struct ByCount { std::size_t count = 0; };   // first `count` zeros
struct ByHeight { double t_max = 0.0; };     // all zeros with t <= t_max

// First zeros in order, each refined by bisection on rs_z to bracket
// half-width <= 1e-12 (abs_error_bound records the guarantee).  The Gram walk
// rescans intervals violating Gram's heuristic on uniform grids of increasing
// density (4*3^k + 1 points, k <= 8) until the running count matches
// round(theta/pi + 1); a persistent mismatch > 1 at the end throws
// std::runtime_error("missed zero ...") instead of silently returning a bad
// table.  Guardrail: count <= 1e6, t_max <= 1e6.
ZeroTable find_zeros(ByCount limit);
ZeroTable find_zeros(ByHeight limit);

// Counting law at T (>= 10): smooth estimate, density, and, when a table is
// supplied, the actual number of entries <= T.
CountingReport count_estimate(double T);
CountingReport count_estimate(double T, const ZeroTable& table);

// Zero-file format: UTF-8 text, one decimal height per line, '#' comment
// lines permitted; "# offset <decimal>" (at most once) adds an offset to
// every subsequent value, and "# abs_error_bound <decimal>" (written by
// ourselves) restores the exact error bound on round-trip.  Otherwise the
// bound is inferred as half the coarsest printed decimal place.
// Parse or invariant failures throw std::domain_error naming the line;
// unreadable files throw std::runtime_error.
ZeroTable import_zero_file(const std::string& path);

// Writes heights at %.17g (exact double round-trip) preceded by the given
// comment lines (each emitted as "# <line>") and the error-bound header.
void write_zero_file(const ZeroTable& table, const std::string& path,
                     const std::vector<std::string>& comments = {});

// Cache naming: "<t_max or count>.zeros" under dir.  Loads are validated
// (parse + invariants + coverage: enough entries for a count request; last
// entry >= T or a "# covers_to <T'>" header with T' >= T for a height
// request); anything invalid is treated as a miss.
std::string cache_path(const std::string& dir, ByCount limit);
std::string cache_path(const std::string& dir, ByHeight limit);
std::optional<ZeroTable> try_load_cached(const std::string& dir, ByCount limit);
std::optional<ZeroTable> try_load_cached(const std::string& dir, ByHeight limit);

// %.17g formatting used for every numeric emission in this project: the
// shortest form that still round-trips exactly through strtod.
std::string format_g17(double v);

}  // namespace zetadim
