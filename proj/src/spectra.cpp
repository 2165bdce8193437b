#include "zetadim/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace zetadim {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;

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

void Spectrum::validate() const {
    if (values.empty()) throw std::domain_error("Spectrum: empty");
    if (values.size() != multiplicities.size())
        throw std::domain_error("Spectrum: values/multiplicities length mismatch");
    double prev = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > prev))
            throw std::domain_error(
                "Spectrum: values must be positive and strictly increasing (index " +
                std::to_string(i) + ")");
        const double m = multiplicities[i];
        if (!(m >= 1.0) || m != std::floor(m))
            throw std::domain_error(
                "Spectrum: multiplicities must be integers >= 1 (index " +
                std::to_string(i) + ")");
        prev = values[i];
    }
}

double Spectrum::total_multiplicity() const {
    double s = 0.0;
    for (double m : multiplicities) s += m;
    return s;
}

Spectrum scale_zeros(const ZeroTable& zeros) {
    const double floor_t = kTwoPi / std::exp(1.0);  // map increasing above this
    Spectrum s;
    s.values.reserve(zeros.heights.size());
    for (double t : zeros.heights) {
        if (!(t > floor_t))
            throw std::domain_error("scale_zeros: height " + format_g17(t) +
                                    " not above 2pi/e");
        const double x = t / kTwoPi;
        s.values.push_back(x * std::log(x));
    }
    s.multiplicities.assign(s.values.size(), 1.0);
    s.label = "riemann:" + std::to_string(zeros.heights.size());
    s.validate();
    return s;
}

Spectrum scale_zeros_theta(const ZeroTable& zeros) {
    constexpr double kPi = 3.14159265358979323846;
    Spectrum s;
    s.values.reserve(zeros.heights.size());
    for (double t : zeros.heights) {
        if (!(t >= 10.0))
            throw std::domain_error("scale_zeros_theta: height " +
                                    format_g17(t) + " below 10");
        s.values.push_back(rs_theta(t) / kPi + 1.0);
    }
    s.multiplicities.assign(s.values.size(), 1.0);
    s.label = "riemann-theta:" + std::to_string(zeros.heights.size());
    s.validate();
    return s;
}

Spectrum circle_dirac(std::size_t n_max) {
    if (n_max < 10) throw std::domain_error("circle_dirac: n_max < 10");
    if (n_max > 20000000) throw std::domain_error("circle_dirac: n_max guardrail");
    Spectrum s;
    s.values.reserve(n_max);
    for (std::size_t k = 0; k < n_max; ++k) s.values.push_back(double(k) + 0.5);
    s.multiplicities.assign(n_max, 2.0);
    s.label = "circle:" + std::to_string(n_max);
    s.validate();
    return s;
}

Spectrum torus_dirac(int d, std::size_t n_max) {
    if (d < 1 || d > 3) throw std::domain_error("torus_dirac: d must be 1..3");
    if (n_max < 1) throw std::domain_error("torus_dirac: n_max must be >= 1");
    // guardrails keep the lattice walk and the squared-norm table small
    const std::size_t cap = (d == 1) ? 20000000 : (d == 2) ? 2000 : 252;
    if (n_max > cap)
        throw std::domain_error("torus_dirac: n_max guardrail for d = " +
                                std::to_string(d));
    Spectrum s;
    const long n = long(n_max);
    if (d == 1) {
        for (long k = 1; k <= n; ++k) {
            s.values.push_back(double(k));
            s.multiplicities.push_back(2.0);
        }
    } else {
        // group by exact integer squared norm; counts fit easily in 32 bits
        std::vector<std::uint32_t> count(std::size_t(d) * n_max * n_max + 1, 0);
        if (d == 2) {
            for (long kx = -n; kx <= n; ++kx)
                for (long ky = -n; ky <= n; ++ky) {
                    if (kx == 0 && ky == 0) continue;
                    ++count[std::size_t(kx * kx + ky * ky)];
                }
        } else {
            for (long kx = -n; kx <= n; ++kx)
                for (long ky = -n; ky <= n; ++ky)
                    for (long kz = -n; kz <= n; ++kz) {
                        if (kx == 0 && ky == 0 && kz == 0) continue;
                        ++count[std::size_t(kx * kx + ky * ky + kz * kz)];
                    }
        }
        for (std::size_t q = 1; q < count.size(); ++q)
            if (count[q] > 0) {
                s.values.push_back(std::sqrt(double(q)));
                s.multiplicities.push_back(double(count[q]));
            }
    }
    s.label = "torus:" + std::to_string(d) + ":" + std::to_string(n_max);
    s.validate();
    return s;
}

Spectrum sphere_dirac(std::size_t n_max) {
    if (n_max < 10) throw std::domain_error("sphere_dirac: n_max < 10");
    if (n_max > 20000000) throw std::domain_error("sphere_dirac: n_max guardrail");
    Spectrum s;
    s.values.reserve(n_max);
    s.multiplicities.reserve(n_max);
    for (std::size_t k = 1; k <= n_max; ++k) {
        s.values.push_back(double(k));
        s.multiplicities.push_back(2.0 * double(k));
    }
    s.label = "sphere:" + std::to_string(n_max);
    s.validate();
    return s;
}

namespace {

// Fixed, recorded generator: splitmix64 stream; (0,1) uniforms on the offset
// lattice (k + 1/2) * 2^-53 so logarithms stay finite; normals by Box-Muller.
struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double u01() { return (double(next() >> 11) + 0.5) * 0x1.0p-53; }
};

struct GaussianSource {
    SplitMix64 rng;
    bool have_spare = false;
    double spare = 0.0;
    double next() {
        if (have_spare) {
            have_spare = false;
            return spare;
        }
        const double r = std::sqrt(-2.0 * std::log(rng.u01()));
        const double a = kTwoPi * rng.u01();
        spare = r * std::sin(a);
        have_spare = true;
        return r * std::cos(a);
    }
};

}  // namespace

Spectrum poisson_spectrum(const EnsembleConfig& config) {
    if (config.ensemble != EnsembleConfig::Ensemble::poisson)
        throw std::domain_error("poisson_spectrum: config.ensemble must be poisson");
    if (config.size < 2) throw std::domain_error("poisson_spectrum: size must be >= 2");
    if (config.size > 20000000)
        throw std::domain_error("poisson_spectrum: size guardrail");
    SplitMix64 rng{config.seed};
    Spectrum s;
    s.values.reserve(config.size);
    double acc = 0.0;
    for (std::size_t i = 0; i < config.size; ++i) {
        acc += -std::log(1.0 - rng.u01());  // unit-mean exponential gap > 0
        s.values.push_back(acc);
    }
    s.multiplicities.assign(config.size, 1.0);
    s.label = "poisson:" + std::to_string(config.size) + ":" +
              std::to_string(config.seed) + "[splitmix64]";
    s.validate();
    return s;
}

std::vector<double> tridiagonal_eigenvalues(std::vector<double> d,
                                            std::vector<double> e) {
    const std::size_t n = d.size();
    if (n == 0) {
        if (!e.empty())
            throw std::domain_error(
                "tridiagonal_eigenvalues: offdiag length must be diag length - 1");
        return {};
    }
    if (e.size() != n - 1)
        throw std::domain_error(
            "tridiagonal_eigenvalues: offdiag length must be diag length - 1");

    // Implicit-shift QL with Wilkinson shift; deflation when an off-diagonal
    // entry is negligible against its diagonal neighbors.
    e.push_back(0.0);
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd)
                    break;
            }
            if (m != l) {
                if (iter++ == 50)
                    throw std::runtime_error(
                        "tridiagonal_eigenvalues: eigenvalue " +
                        std::to_string(l) + " failed to converge in 50 QL sweeps");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool retry = false;
                for (std::size_t i = m; i-- > l;) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {  // rotation vanished; recover and re-sweep
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        retry = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (retry) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    std::sort(d.begin(), d.end());
    return d;
}

Spectrum gue_spectrum(const EnsembleConfig& config) {
    if (config.ensemble != EnsembleConfig::Ensemble::gue)
        throw std::domain_error("gue_spectrum: config.ensemble must be gue");
    if (config.size < 2) throw std::domain_error("gue_spectrum: size must be >= 2");
    if (config.size > 20000) throw std::domain_error("gue_spectrum: size guardrail");
    const std::size_t N = config.size;

    // Hermite beta=2 tridiagonal model: diagonal standard normal, k-th
    // off-diagonal chi with 2(N-k) degrees of freedom divided by sqrt(2),
    // the chi built from its Gaussian-sum definition (exact for integer dof).
    GaussianSource gauss{SplitMix64{config.seed}};
    std::vector<double> diag(N), off(N - 1);
    for (std::size_t i = 0; i < N; ++i) diag[i] = gauss.next();
    for (std::size_t i = 0; i + 1 < N; ++i) {
        const std::size_t dof = 2 * (N - 1 - i);
        double sumsq = 0.0;
        for (std::size_t j = 0; j < dof; ++j) {
            const double g = gauss.next();
            sumsq += g * g;
        }
        off[i] = std::sqrt(0.5 * sumsq);
    }

    std::vector<double> ev = tridiagonal_eigenvalues(diag, off);

    // Rescale onto the semicircle support and unfold through its CDF.
    const double scale = 1.0 / std::sqrt(double(N));
    std::vector<double> u(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double x = std::clamp(ev[i] * scale, -2.0, 2.0);
        u[i] = double(N) * (0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * kPi) +
                            std::asin(0.5 * x) / kPi);
    }

    // Separate exact collisions (possible only via clamping) symmetrically,
    // then enforce strict positivity/monotonicity.
    bool perturbed = false;
    for (std::size_t i = 0; i < N;) {
        std::size_t j = i;
        while (j + 1 < N && u[j + 1] == u[i]) ++j;
        if (j > i) {
            const double center = u[i];
            const std::size_t m = j - i + 1;
            for (std::size_t k = 0; k < m; ++k)
                u[i + k] = center + (double(k) - double(m - 1) / 2.0) * 1e-12;
            perturbed = true;
        }
        i = j + 1;
    }
    double prev = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        if (!(u[i] > prev)) {
            u[i] = prev + 1e-12;
            perturbed = true;
        }
        prev = u[i];
    }

    Spectrum s;
    s.values = std::move(u);
    s.multiplicities.assign(N, 1.0);
    s.label = "gue:" + std::to_string(N) + ":" + std::to_string(config.seed) +
              "[splitmix64-boxmuller]" + (perturbed ? "+perturbed" : "");
    s.validate();
    return s;
}

Spectrum read_spectrum_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open spectrum file: " + path);
    Spectrum s;
    s.label = std::filesystem::path(path).stem().string();
    std::string line;
    long lineno = 0;
    bool saw_header = false;
    double prev = 0.0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trimmed(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            if (t.rfind("# label=", 0) == 0) s.label = t.substr(8);
            continue;
        }
        if (!saw_header) {
            if (t != "value,multiplicity")
                throw std::domain_error("line " + std::to_string(lineno) +
                                        ": expected header 'value,multiplicity'");
            saw_header = true;
            continue;
        }
        const auto comma = t.find(',');
        double v = 0.0, m = 0.0;
        if (comma == std::string::npos ||
            !parse_double(trimmed(t.substr(0, comma)), v) ||
            !parse_double(trimmed(t.substr(comma + 1)), m))
            throw std::domain_error("line " + std::to_string(lineno) +
                                    ": unparseable row '" + t + "'");
        if (!(v > prev))
            throw std::domain_error("line " + std::to_string(lineno) +
                                    ": values must be positive and ascending");
        if (!(m >= 1.0) || m != std::floor(m))
            throw std::domain_error("line " + std::to_string(lineno) +
                                    ": multiplicity must be an integer >= 1");
        prev = v;
        s.values.push_back(v);
        s.multiplicities.push_back(m);
    }
    if (!saw_header)
        throw std::domain_error("line " + std::to_string(lineno) +
                                ": missing 'value,multiplicity' header");
    s.validate();
    return s;
}

void write_spectrum_csv(const Spectrum& spec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write spectrum file: " + path);
    out << "# label=" << spec.label << "\n";
    out << "value,multiplicity\n";
    for (std::size_t i = 0; i < spec.values.size(); ++i)
        out << format_g17(spec.values[i]) << ","
            << format_g17(spec.multiplicities[i]) << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace zetadim
