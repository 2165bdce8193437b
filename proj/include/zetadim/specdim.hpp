// Heat-kernel trace over a discrete spectrum, the closed-form spectral
// dimension D_s(lambda) = +d ln Z / d ln lambda, plateau detection on the
// resulting curve, and the plateau-width-vs-N growth study.
//
// Z(lambda) = s * sum_k m_k exp(-u_k^2/lambda^2), s = 2 when the spectrum is
// symmetrized (+-u both count), else 1.  The log-derivative has the closed
// form D_s(lambda) = (2/Z) * sum_k m_k (u_k/lambda)^2 exp(-u_k^2/lambda^2);
// the s factor cancels, so D_s never depends on symmetrization.  Note the
// sign: Z grows with lambda (more of the spectrum fits under the cutoff), so
// the positive log-derivative is reported; a heat-kernel-in-time convention
// would flip it.  All sums are compensated (Kahan) in fixed index order, so
// results are bit-stable.
#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <zetadim/spectra.hpp>
#include <zetadim/zero_engine.hpp>

namespace zetadim {

// Log-spaced cutoff grid.  lambda_min/lambda_max <= 0 mean "auto": derive
// [u_min/10, 10*u_max] from the spectrum at hand (the default covers both
// asymptotic regimes around any plateau).  points >= 16.
struct GridSpec {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    std::size_t points = 200;
};

struct DimensionCurve {
    std::vector<double> lambdas;  // strictly increasing, log-spaced
    std::vector<double> traces;   // Z(lambda), positive, strictly increasing
    std::vector<double> dims;     // D_s(lambda), finite, >= 0
    bool symmetrized = true;
    std::string spectrum_label;
    // Largest |eigenvalue| of the source spectrum; drives the saturation
    // cutoff in detect_plateau.  0 means unknown (curve read from a foreign
    // CSV without the "# umax=" comment), in which case readers fall back to
    // lambda_max/10 -- exact for curves built on the default auto grid.
    double u_max = 0.0;

    // Throws std::domain_error when an invariant fails.
    void validate() const;
};

struct PlateauReport {
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    double mean_dim = 0.0;
    double std_dim = 0.0;       // population standard deviation
    double width_efolds = 0.0;  // ln(lambda_hi/lambda_lo)
    bool found = false;
};

struct DetectorParams {
    double slope_tol = 0.05;        // max |dD_s/d ln lambda| inside a plateau
    double min_width_efolds = 1.0;  // narrower windows are not plateaus
    // A curve computed from finitely many eigenvalues is unreliable once
    // lambda probes beyond the spectrum's reach; grid points with
    // lambda > u_max/3 are excluded while this is set (and u_max is known).
    bool exclude_saturated = true;
};

// Z(lambda).  Individual terms may underflow to zero; at the default grids
// the smallest-u term always survives, so the result stays positive.
double heat_trace(const Spectrum& spec, double lambda, bool symmetrize);

// Closed-form D_s(lambda).  Evaluated as a ratio of shifted-exponential sums
// (the u_min^2/lambda^2 factor cancels), so it stays finite and smooth even
// where the raw trace underflows.
double spectral_dimension(const Spectrum& spec, double lambda);

// Sample Z and D_s on the grid.  Throws std::domain_error on a degenerate
// grid (min >= max after auto-fill, or points < 16).
DimensionCurve dimension_curve(const Spectrum& spec, const GridSpec& grid,
                               bool symmetrize = true);

// Widest contiguous grid window whose consecutive-sample slopes
// |dD_s/d ln lambda| all stay within slope_tol and whose width reaches
// min_width_efolds; ties broken by smaller std_dim, then smaller lambda_lo.
// found=false (all fields zero) when nothing qualifies.
PlateauReport detect_plateau(const DimensionCurve& curve,
                             const DetectorParams& params = {});

// Full pipeline (rescale -> curve -> detect) on each prefix of the zero
// table.  prefix_sizes must be ascending, nonzero, and <= zeros size.
// Detector non-findings come back as found=false entries, not errors.
std::vector<std::pair<std::size_t, PlateauReport>> plateau_growth(
    const ZeroTable& zeros, const std::vector<std::size_t>& prefix_sizes,
    const GridSpec& grid = {}, const DetectorParams& params = {});

// CSV: comment lines "# spectrum=<label> symmetrize=<bool> n=<points>" and
// "# umax=<value>", then "lambda,heat_trace,spectral_dimension" rows printed
// at %.17g (round-trip exact).  extra_comments are emitted first, one per
// line, each prefixed "# " (callers embed their effective configuration
// here).  The reader accepts arbitrary '#' comments, honors the two written
// above, and reports malformed content with its line number.
void write_curve_csv(const DimensionCurve& curve,
                     const std::filesystem::path& path,
                     const std::vector<std::string>& extra_comments = {});
DimensionCurve read_curve_csv(const std::filesystem::path& path);

// Two-line CSV rendering of a report:
// "lambda_lo,lambda_hi,mean_dim,std_dim,width_efolds,found".
std::string plateau_csv(const PlateauReport& report);

}  // namespace zetadim
