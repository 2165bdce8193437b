// Spectrum container, the zero rescaling map, exactly-known baseline spectra
// (circle / torus / sphere Dirac ladders), and stochastic comparison
// ensembles (Poisson, GUE via the tridiagonal beta=2 model).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zetadim/zero_engine.hpp"

namespace zetadim {

// Eigenvalues of |D|: strictly increasing positive values with positive
// integer multiplicities (stored as doubles for downstream arithmetic).
struct Spectrum {
    std::vector<double> values;
    std::vector<double> multiplicities;
    std::string label;

    // Throws std::domain_error on: empty spectrum, non-positive or
    // non-increasing values, multiplicities not integral or < 1.
    void validate() const;

    double total_multiplicity() const;
    double u_min() const { return values.front(); }
    double u_max() const { return values.back(); }
};

// Deterministic configuration for the stochastic ensembles.
struct EnsembleConfig {
    enum class Ensemble { gue, poisson };
    std::size_t size = 0;     // matrix dimension / level count, >= 2
    std::uint64_t seed = 0;   // fully determines the output
    Ensemble ensemble = Ensemble::gue;
};

// u_j = (t_j/2pi) ln(t_j/2pi): unit mean spacing asymptotically.  The map is
// strictly increasing only above 2pi/e, so lower heights are rejected
// (every actual zero height exceeds 14).  Multiplicity 1 each; label
// "riemann:<count>".
Spectrum scale_zeros(const ZeroTable& zeros);

// Sensitivity-check variant that unfolds by the smooth counting function
// instead: u_j = theta(t_j)/pi + 1.  The +1 keeps the first value positive
// (theta is still negative at the first zero) and shifts nothing else, so
// mean spacing is 1 + O(1/N) exactly, with none of the finite-height
// inflation of scale_zeros (spacing there is ~ 1 + 1/ln(t/2pi)).  Rejects
// heights below 10 (theta series domain).  Label "riemann-theta:<count>".
Spectrum scale_zeros_theta(const ZeroTable& zeros);

// Half-integer ladder k + 1/2 (k = 0..n_max-1), multiplicity 2: the exact
// 1-dimensional check.  Rejects n_max < 10 (too short for any plateau) and
// n_max > 2e7 (guardrail).
Spectrum circle_dirac(std::size_t n_max);

// |k| over lattice vectors k in Z^d with 0 < |k|_inf <= n_max, grouped by
// exact squared norm, zero mode excluded.  Rejects d outside 1..3 and grids
// beyond ~1.3e8 lattice points (guardrail).
Spectrum torus_dirac(int d, std::size_t n_max);

// Round 2-sphere Dirac ladder: value n with multiplicity 2n, n = 1..n_max.
// Rejects n_max < 10 and n_max > 2e7 (guardrail).
Spectrum sphere_dirac(std::size_t n_max);

// Cumulative sums of i.i.d. unit-mean exponential gaps; multiplicity 1.
// Deterministic in config.seed; requires ensemble == poisson.
Spectrum poisson_spectrum(const EnsembleConfig& config);

// All eigenvalues of the symmetric tridiagonal matrix, ascending, by
// implicit-shift QL iteration.  offdiag couples consecutive diagonal
// entries, so offdiag.size() must equal diag.size() - 1.  Throws
// std::runtime_error if any eigenvalue needs more than 50 QL sweeps.
std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag,
                                            std::vector<double> offdiag);

// Hermite beta=2 tridiagonal sample -> eigenvalues -> rescale by 1/sqrt(N)
// onto semicircle support [-2,2] (edge spill clamped) -> unfold through the
// integrated semicircle law
//   F(x) = N*(1/2 + x sqrt(4-x^2)/(4pi) + asin(x/2)/pi),
// returning the strictly positive ascending unfolded values, unit mean
// spacing.  Collisions or clamped endpoints are separated by minimal
// 1e-12 perturbations, recorded as "+perturbed" in the label.  The label
// also records the generator ("splitmix64-boxmuller").  Deterministic in
// config.seed; requires ensemble == gue; guardrail size <= 2e4.
Spectrum gue_spectrum(const EnsembleConfig& config);

// CSV with header "value,multiplicity", ascending; "# label=<label>" comment
// preserves the label on round-trip (reads fall back to the file stem).
// Parse or invariant failures throw std::domain_error naming the line.
Spectrum read_spectrum_csv(const std::string& path);
void write_spectrum_csv(const Spectrum& spec, const std::string& path);

}  // namespace zetadim
