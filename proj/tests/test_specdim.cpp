#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <zetadim/specdim.hpp>
#include <zetadim/spectra.hpp>
#include <zetadim/zero_engine.hpp>

#include "doctest.h"

namespace fs = std::filesystem;
using namespace zetadim;

namespace {

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / ("zetadim_test_" + name);
}

Spectrum single(double u, double m = 1.0) {
    Spectrum s;
    s.values = {u};
    s.multiplicities = {m};
    s.label = "single";
    return s;
}

// Deterministic pseudo-random stream for the oracle sweeps.
struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed) {}
    std::uint64_t next() {
        s += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double u01() { return double(next() >> 11) * 0x1p-53 + 0x1p-54; }
};

Spectrum random_spectrum(Rng& rng) {
    Spectrum s;
    const std::size_t n = 1 + std::size_t(rng.u01() * 40.0);
    double u = 0.1 + 5.0 * rng.u01();
    for (std::size_t i = 0; i < n; ++i) {
        s.values.push_back(u);
        s.multiplicities.push_back(1.0 + double(std::uint64_t(rng.u01() * 5)));
        u += 0.05 + 3.0 * rng.u01();
    }
    s.label = "random";
    return s;
}

// Hand-built curve on a uniform ln(lambda) grid; traces are an arbitrary
// strictly increasing series since the detector only reads lambdas and dims.
DimensionCurve synthetic_curve(const std::vector<double>& dims,
                               double lnl_lo, double lnl_step, double u_max) {
    DimensionCurve c;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        c.lambdas.push_back(std::exp(lnl_lo + lnl_step * double(i)));
        c.traces.push_back(1.0 + double(i));
        c.dims.push_back(dims[i]);
    }
    c.symmetrized = true;
    c.spectrum_label = "synthetic";
    c.u_max = u_max;
    return c;
}

}  // namespace

TEST_CASE("heat trace matches the one-term closed form") {
    const Spectrum s = single(3.0);
    CHECK(heat_trace(s, 3.0, false) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(heat_trace(s, 3.0, true) ==
          doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-14));
    // multiplicity scales the trace linearly
    CHECK(heat_trace(single(3.0, 5.0), 3.0, false) ==
          doctest::Approx(5.0 * std::exp(-1.0)).epsilon(1e-14));
    CHECK_THROWS_AS((void)heat_trace(s, 0.0, false), std::domain_error);
    CHECK_THROWS_AS((void)heat_trace(s, -2.0, false), std::domain_error);
}

TEST_CASE("heat trace saturates to s times the total multiplicity") {
    const Spectrum s = circle_dirac(100);
    const double m = s.total_multiplicity();
    const double umax = s.u_max();
    // Far past the spectrum every term is within (u/lambda)^2 of 1, so the
    // deficit at lambda = 100*u_max is of order 1e-4 relative -- measurably
    // nonzero -- and reaches 1e-6 only around lambda = 1e4*u_max.
    const double z100 = heat_trace(s, 100.0 * umax, true);
    CHECK(z100 < 2.0 * m);
    CHECK(2.0 * m - z100 > 1e-8 * 2.0 * m);
    CHECK(2.0 * m - z100 < 1e-4 * 2.0 * m);
    const double zfar = heat_trace(s, 1e4 * umax, true);
    CHECK(2.0 * m - zfar < 1e-6 * 2.0 * m);
    CHECK(zfar <= 2.0 * m);
    // unsymmetrized saturates to m itself
    CHECK(m - heat_trace(s, 1e4 * umax, false) < 1e-6 * m);
}

TEST_CASE("heat trace near the asymptotic regime of the half-integer ladder") {
    // Sum of 2*exp(-((k+1/2)/50)^2) over k >= 0 approaches 50*sqrt(pi); with
    // the +-u doubling that is 2*sqrt(pi)*50 ~ 177.245.
    const Spectrum s = circle_dirac(10000);
    const double z = heat_trace(s, 50.0, true);
    CHECK(std::abs(z - 177.2453850905516) < 0.01 * 177.245);
}

TEST_CASE("spectral dimension of a single eigenvalue is 2u^2/lambda^2") {
    CHECK(spectral_dimension(single(3.0), 3.0) == 2.0);    // u = lambda
    CHECK(spectral_dimension(single(3.0), 2.0) == 4.5);    // r = 1.5 exact
    CHECK(spectral_dimension(single(1.0), 4.0) == 0.125);  // r = 0.25 exact
    // multiplicity cancels in the ratio
    CHECK(spectral_dimension(single(3.0, 7.0), 2.0) == 4.5);
    CHECK_THROWS_AS((void)spectral_dimension(single(1.0), 0.0),
                    std::domain_error);
}

TEST_CASE("closed-form dimension matches the finite-difference oracle") {
    Rng rng(20260819);
    const double h = 1e-4;  // step in ln(lambda)
    for (int trial = 0; trial < 50; ++trial) {
        const Spectrum s = random_spectrum(rng);
        const double span = std::log((2.0 * s.u_max()) / (s.u_min() / 2.0));
        const double lam = (s.u_min() / 2.0) * std::exp(span * rng.u01());
        const double d = spectral_dimension(s, lam);
        const double zp = heat_trace(s, lam * std::exp(h), false);
        const double zm = heat_trace(s, lam * std::exp(-h), false);
        const double fd = (std::log(zp) - std::log(zm)) / (2.0 * h);
        CHECK(std::abs(fd - d) < 1e-6 * std::abs(d));
    }
}

TEST_CASE("dimension is invariant under multiplicity scaling and symmetry") {
    Rng rng(7);
    const Spectrum s = random_spectrum(rng);
    Spectrum scaled = s;
    for (double& m : scaled.multiplicities) m *= 7.0;
    for (double lam : {0.5, 1.7, 9.0, 40.0}) {
        const double d = spectral_dimension(s, lam);
        CHECK(std::abs(spectral_dimension(scaled, lam) - d) < 1e-12);
        // the symmetrization factor cancels in the log-derivative: the two
        // traces differ exactly by 2, so D_s is literally the same number
        const double zs = heat_trace(s, lam, true);
        const double zu = heat_trace(s, lam, false);
        CHECK(zs == 2.0 * zu);
    }
}

TEST_CASE("dimension is scale covariant") {
    Rng rng(99);
    const Spectrum s = random_spectrum(rng);

    // c = 4: products by a power of two are exact, so covariance must hold
    // bit for bit.
    Spectrum s4 = s;
    for (double& v : s4.values) v *= 4.0;
    // c = 3 rounds u and lambda, perturbing each exponent by ~r^2 * 1e-16;
    // 1e-12 agreement holds where D_s is moderate (lambda >= u_min/3).
    Spectrum s3 = s;
    for (double& v : s3.values) v *= 3.0;

    const double lo = s.u_min() / 3.0, hi = 10.0 * s.u_max();
    for (int i = 0; i <= 40; ++i) {
        const double lam =
            lo * std::exp(std::log(hi / lo) * double(i) / 40.0);
        const double d = spectral_dimension(s, lam);
        CHECK(spectral_dimension(s4, 4.0 * lam) == d);
        CHECK(std::abs(spectral_dimension(s3, 3.0 * lam) - d) < 1e-12);
    }
}

TEST_CASE("dimension limits: single-term domination and large-lambda decay") {
    Spectrum s;
    s.values = {1.0, 2.0, 3.0};
    s.multiplicities = {1.0, 4.0, 2.0};
    s.label = "toy";

    // lambda -> 0: the smallest eigenvalue dominates and D_s -> 2u_min^2/L^2;
    // the gap shrinks until it reaches rounding noise of the comparison value
    double prev_gap = 1e300;
    for (double lam : {0.5, 0.33, 0.25, 0.2}) {
        const double limit = 2.0 / (lam * lam);
        const double gap = std::abs(spectral_dimension(s, lam) - limit);
        CHECK((gap < prev_gap || gap < 1e-12 * limit));
        prev_gap = gap;
    }
    CHECK(prev_gap < 1e-12 * 50.0);

    // lambda -> infinity: monotone decay to zero beyond 10*u_max
    const double u = s.u_max();
    double prev = spectral_dimension(s, 10.0 * u);
    for (double f : {20.0, 50.0, 100.0, 1000.0}) {
        const double d = spectral_dimension(s, f * u);
        CHECK(d >= 0.0);
        CHECK(d < prev);
        prev = d;
    }
    CHECK(prev < 1e-4);
}

TEST_CASE("dimension_curve builds the default grid and its invariants hold") {
    const Spectrum s = circle_dirac(200);
    const DimensionCurve c = dimension_curve(s, GridSpec{});
    REQUIRE(c.lambdas.size() == 200);
    CHECK(c.lambdas.front() == s.u_min() / 10.0);  // endpoints exact
    CHECK(c.lambdas.back() == 10.0 * s.u_max());
    CHECK(c.symmetrized);
    CHECK(c.spectrum_label == "circle:200");
    CHECK(c.u_max == s.u_max());
    CHECK_NOTHROW(c.validate());
    CHECK(c.traces.front() > 0.0);
    CHECK(c.traces.back() <= 2.0 * s.total_multiplicity() * (1.0 + 1e-12));
    // small-lambda divergence beats the large-lambda tail
    CHECK(c.dims.back() < spectral_dimension(s, s.u_min()));

    CHECK_THROWS_AS((void)dimension_curve(s, GridSpec{5.0, 5.0, 100}),
                    std::domain_error);
    CHECK_THROWS_AS((void)dimension_curve(s, GridSpec{10.0, 2.0, 100}),
                    std::domain_error);
    CHECK_THROWS_AS((void)dimension_curve(s, GridSpec{0.0, 0.0, 15}),
                    std::domain_error);
    CHECK_NOTHROW((void)dimension_curve(s, GridSpec{0.0, 0.0, 16}));
}

TEST_CASE("plateau detector finds the flat window of a synthetic curve") {
    // ln-grid step 0.25; D falls steeply, sits at 5.0 for 12 samples
    // (3 e-folds), then falls again.  u_max chosen so saturation never cuts.
    std::vector<double> dims;
    for (int i = 0; i < 8; ++i) dims.push_back(8.0 - 0.375 * i);   // steep
    for (int i = 0; i < 12; ++i) dims.push_back(5.0);              // flat
    for (int i = 0; i < 8; ++i) dims.push_back(5.0 - 0.5 * (i + 1));
    const DimensionCurve c = synthetic_curve(dims, 0.0, 0.25, 1e9);

    const PlateauReport r = detect_plateau(c);
    REQUIRE(r.found);
    // the run begins at the last steep sample (slope into the first flat
    // point is 0.375/0.25 > tol, so the window starts at index 8)
    CHECK(r.lambda_lo == doctest::Approx(std::exp(0.25 * 8)).epsilon(1e-12));
    CHECK(r.lambda_hi == doctest::Approx(std::exp(0.25 * 19)).epsilon(1e-12));
    CHECK(r.mean_dim == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(r.std_dim == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.width_efolds == doctest::Approx(0.25 * 11).epsilon(1e-9));

    // a stricter width demand rejects the same window
    DetectorParams narrow;
    narrow.min_width_efolds = 5.0;
    CHECK_FALSE(detect_plateau(c, narrow).found);

    // a tolerant slope accepts more; the window can only widen
    DetectorParams loose;
    loose.slope_tol = 10.0;
    const PlateauReport wide = detect_plateau(c, loose);
    REQUIRE(wide.found);
    CHECK(wide.width_efolds >= r.width_efolds);
}

TEST_CASE("plateau ties break by flatness then by position") {
    // Two flat windows spanning equal index ranges on an exp(0.25*i) grid:
    // the detector's log() recovers the 0.25 ladder exactly (verified), so
    // their widths tie bit-for-bit.  The first window wiggles slightly, the
    // second is perfectly flat -> smaller std wins even though it sits later.
    std::vector<double> dims(40, 9.0);
    for (int i = 5; i <= 15; ++i) dims[i] = 4.0 + ((i % 2) ? 0.004 : 0.0);
    for (int i = 24; i <= 34; ++i) dims[i] = 2.0;
    DimensionCurve c = synthetic_curve(dims, 0.0, 0.25, 1e9);
    PlateauReport r = detect_plateau(c);
    REQUIRE(r.found);
    CHECK(r.mean_dim == doctest::Approx(2.0).epsilon(1e-12));

    // make both windows exactly flat -> equal std -> smaller lambda_lo wins
    for (int i = 5; i <= 15; ++i) c.dims[i] = 4.0;
    r = detect_plateau(c);
    REQUIRE(r.found);
    CHECK(r.mean_dim == doctest::Approx(4.0).epsilon(1e-12));

    // nothing qualifies when every slope is steep
    std::vector<double> steep;
    for (int i = 0; i < 30; ++i) steep.push_back(30.0 - double(i));
    const PlateauReport none =
        detect_plateau(synthetic_curve(steep, 0.0, 0.3, 1e9));
    CHECK_FALSE(none.found);
    CHECK(none.lambda_lo == 0.0);
    CHECK(none.lambda_hi == 0.0);
    CHECK(none.mean_dim == 0.0);
    CHECK(none.std_dim == 0.0);
    CHECK(none.width_efolds == 0.0);
}

TEST_CASE("plateau detector excludes the saturated tail by default") {
    // flat window sits entirely above u_max/3
    std::vector<double> dims;
    for (int i = 0; i < 10; ++i) dims.push_back(8.0 - 0.7 * i);
    for (int i = 0; i < 12; ++i) dims.push_back(1.0);
    // grid spans e^0 .. e^(0.25*21) ~ 190; flat region starts at e^2.5 ~ 12.2
    DimensionCurve c = synthetic_curve(dims, 0.0, 0.25, 3.0);  // cap = 1.0
    CHECK_FALSE(detect_plateau(c).found);

    DetectorParams keep;
    keep.exclude_saturated = false;
    CHECK(detect_plateau(c, keep).found);

    // unknown u_max falls back to lambda_max/10: cap = lambda_max/30 ~ 6.3,
    // still below the flat region, so the plateau stays excluded
    c.u_max = 0.0;
    CHECK_FALSE(detect_plateau(c).found);
    // raising the cap above the window (u_max = 3 * lambda_max) admits it
    c.u_max = 3.0 * c.lambdas.back();
    CHECK(detect_plateau(c).found);
}

TEST_CASE("exact-dimension baselines recover their dimensions") {
    SUBCASE("circle of 1e4 modes -> D = 1") {
        const Spectrum s = circle_dirac(10000);
        CHECK(std::abs(spectral_dimension(s, 30.0) - 1.0) < 0.01);
        const PlateauReport r = detect_plateau(dimension_curve(s, GridSpec{}));
        REQUIRE(r.found);
        CHECK(std::abs(r.mean_dim - 1.0) < 0.02);
        CHECK(r.width_efolds >= 1.0);
    }
    SUBCASE("torus d=2 with n_max=200 -> D = 2") {
        const Spectrum s = torus_dirac(2, 200);
        const PlateauReport r = detect_plateau(dimension_curve(s, GridSpec{}));
        REQUIRE(r.found);
        CHECK(std::abs(r.mean_dim - 2.0) < 0.05);
    }
    SUBCASE("sphere with n_max=2000 -> D = 2") {
        const Spectrum s = sphere_dirac(2000);
        const PlateauReport r = detect_plateau(dimension_curve(s, GridSpec{}));
        REQUIRE(r.found);
        CHECK(std::abs(r.mean_dim - 2.0) < 0.05);
    }
}

TEST_CASE("plateau_growth runs the pipeline per prefix and validates input") {
    const ZeroTable t = find_zeros(ByHeight{1000.0});
    const auto rows = plateau_growth(t, {100, 649});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].first == 100);
    CHECK(rows[1].first == 649);

    // entries agree with running the stages by hand
    ZeroTable prefix;
    prefix.heights.assign(t.heights.begin(), t.heights.begin() + 100);
    prefix.source = t.source;
    prefix.abs_error_bound = t.abs_error_bound;
    const PlateauReport manual =
        detect_plateau(dimension_curve(scale_zeros(prefix), GridSpec{}));
    CHECK(rows[0].second.found == manual.found);
    CHECK(rows[0].second.lambda_lo == manual.lambda_lo);
    CHECK(rows[0].second.mean_dim == manual.mean_dim);

    CHECK_THROWS_AS((void)plateau_growth(t, {}), std::domain_error);
    CHECK_THROWS_AS((void)plateau_growth(t, {0}), std::domain_error);
    CHECK_THROWS_AS((void)plateau_growth(t, {100, 100}), std::domain_error);
    CHECK_THROWS_AS((void)plateau_growth(t, {100, 10000}), std::domain_error);
}

TEST_CASE("curve CSV round-trips bitwise and rejects malformed files") {
    const Spectrum s = circle_dirac(100);
    const DimensionCurve c = dimension_curve(s, GridSpec{0.0, 0.0, 32});
    const fs::path path = temp_file("curve.csv");
    write_curve_csv(c, path);
    const DimensionCurve back = read_curve_csv(path);
    REQUIRE(back.lambdas.size() == c.lambdas.size());
    for (std::size_t i = 0; i < c.lambdas.size(); ++i) {
        CHECK(back.lambdas[i] == c.lambdas[i]);
        CHECK(back.traces[i] == c.traces[i]);
        CHECK(back.dims[i] == c.dims[i]);
    }
    CHECK(back.spectrum_label == c.spectrum_label);
    CHECK(back.symmetrized == c.symmetrized);
    CHECK(back.u_max == c.u_max);
    fs::remove(path);

    auto write_text = [&](const std::string& text) {
        std::ofstream out(path, std::ios::binary);
        out << text;
    };
    auto throws_with = [&](const std::string& text, const char* needle) {
        write_text(text);
        try {
            (void)read_curve_csv(path);
            FAIL_CHECK("expected rejection for: " << text);
        } catch (const std::domain_error& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    throws_with("1,2,3\n", "header");
    throws_with("lambda,heat_trace,spectral_dimension\n1,2\n", "line 2");
    throws_with("lambda,heat_trace,spectral_dimension\n1,2,3,4\n", "line 2");
    throws_with("lambda,heat_trace,spectral_dimension\n1,x,3\n", "line 2");
    throws_with(
        "lambda,heat_trace,spectral_dimension\n2,1,0.5\n1,2,0.5\n",
        "strictly increasing");
    throws_with(
        "# spectrum=a symmetrize=yes n=1\n"
        "lambda,heat_trace,spectral_dimension\n1,2,3\n",
        "symmetrize");
    throws_with(
        "# n=3\nlambda,heat_trace,spectral_dimension\n1,2,3\n",
        "n=3");
    fs::remove(path);
}

TEST_CASE("plateau report renders as two-line CSV") {
    PlateauReport r;
    r.lambda_lo = 2.0;
    r.lambda_hi = 16.0;
    r.mean_dim = 1.5;
    r.std_dim = 0.25;
    r.width_efolds = std::log(8.0);
    r.found = true;
    CHECK(plateau_csv(r) ==
          "lambda_lo,lambda_hi,mean_dim,std_dim,width_efolds,found\n"
          "2,16,1.5,0.25,2.0794415416798357,true\n");
    CHECK(plateau_csv(PlateauReport{}) ==
          "lambda_lo,lambda_hi,mean_dim,std_dim,width_efolds,found\n"
          "0,0,0,0,0,false\n");
}
