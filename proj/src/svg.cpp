#include "zetadim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace zetadim {

namespace {

// Fixed palette; series beyond eight cycle.
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// XML comments may not contain "--"; thin any run of dashes.
std::string comment_safe(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '-' && !out.empty() && out.back() == '-') out += ' ';
        out += c;
    }
    if (!out.empty() && out.back() == '-') out += ' ';
    return out;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace

std::string render_svg(const std::vector<SvgSeries>& series,
                       const std::string& config_comment,
                       const SvgOptions& options) {
    if (series.empty()) throw std::domain_error("render_svg: no series");
    if (!(options.width > 100.0) || !(options.height > 100.0))
        throw std::domain_error("render_svg: canvas too small");
    if (!(options.y_cap > 0.0))
        throw std::domain_error("render_svg: y_cap must be positive");

    double x_min = 0.0, x_max = 0.0, y_max_data = 0.0;
    bool first = true;
    for (const SvgSeries& s : series) {
        if (s.x.empty() || s.x.size() != s.y.size())
            throw std::domain_error("render_svg: series '" + s.label +
                                    "' is empty or has mismatched lengths");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.x[i] > 0.0) || !std::isfinite(s.x[i]) ||
                !std::isfinite(s.y[i]))
                throw std::domain_error(
                    "render_svg: series '" + s.label +
                    "' needs finite y and positive finite x");
            if (first) {
                x_min = x_max = s.x[i];
                y_max_data = s.y[i];
                first = false;
            } else {
                x_min = std::min(x_min, s.x[i]);
                x_max = std::max(x_max, s.x[i]);
                y_max_data = std::max(y_max_data, s.y[i]);
            }
        }
    }
    if (!(x_max > x_min))
        throw std::domain_error("render_svg: x range is degenerate");

    const double y_lo = 0.0;
    const double y_hi = std::min(std::max(y_max_data, 0.5), options.y_cap);
    const double ln_lo = std::log(x_min), ln_hi = std::log(x_max);

    const double ml = 64.0, mr = 16.0, mt = 18.0, mb = 46.0;
    const double pw = options.width - ml - mr;
    const double ph = options.height - mt - mb;
    auto to_px = [&](double x) {
        return ml + (std::log(x) - ln_lo) / (ln_hi - ln_lo) * pw;
    };
    auto to_py = [&](double y) {
        const double c = std::clamp(y, y_lo, y_hi);
        return mt + (y_hi - c) / (y_hi - y_lo) * ph;
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
        << px(options.width) << "\" height=\"" << px(options.height)
        << "\" viewBox=\"0 0 " << px(options.width) << ' '
        << px(options.height) << "\">\n";
    out << "<!-- " << comment_safe(config_comment) << " -->\n";

    // Axes.
    out << "<g stroke=\"#000000\" stroke-width=\"1\">\n";
    out << "<line x1=\"" << px(ml) << "\" y1=\"" << px(mt + ph) << "\" x2=\""
        << px(ml + pw) << "\" y2=\"" << px(mt + ph) << "\"/>\n";
    out << "<line x1=\"" << px(ml) << "\" y1=\"" << px(mt) << "\" x2=\""
        << px(ml) << "\" y2=\"" << px(mt + ph) << "\"/>\n";
    out << "</g>\n";

    // Decade ticks on x; 5 evenly spaced ticks on y.
    out << "<g stroke=\"#000000\" stroke-width=\"1\" font-family=\"monospace\""
           " font-size=\"11\">\n";
    const int k_lo = static_cast<int>(std::ceil(std::log10(x_min) - 1e-9));
    const int k_hi = static_cast<int>(std::floor(std::log10(x_max) + 1e-9));
    for (int k = k_lo; k <= k_hi; ++k) {
        const double x = std::pow(10.0, k);
        const double X = to_px(x);
        out << "<line x1=\"" << px(X) << "\" y1=\"" << px(mt + ph)
            << "\" x2=\"" << px(X) << "\" y2=\"" << px(mt + ph + 5.0)
            << "\"/>\n";
        out << "<text x=\"" << px(X - 10.0) << "\" y=\"" << px(mt + ph + 18.0)
            << "\" stroke=\"none\">1e" << k << "</text>\n";
    }
    for (int i = 0; i <= 4; ++i) {
        const double y = y_lo + (y_hi - y_lo) * i / 4.0;
        const double Y = to_py(y);
        out << "<line x1=\"" << px(ml - 5.0) << "\" y1=\"" << px(Y)
            << "\" x2=\"" << px(ml) << "\" y2=\"" << px(Y) << "\"/>\n";
        out << "<text x=\"" << px(ml - 40.0) << "\" y=\"" << px(Y + 4.0)
            << "\" stroke=\"none\">" << escape_xml(tick_label(y))
            << "</text>\n";
    }
    out << "<text x=\"" << px(ml + pw / 2.0 - 30.0) << "\" y=\""
        << px(mt + ph + 36.0) << "\" stroke=\"none\">"
        << escape_xml(options.x_label) << "</text>\n";
    out << "<text x=\"" << px(10.0) << "\" y=\"" << px(mt - 4.0)
        << "\" stroke=\"none\">" << escape_xml(options.y_label)
        << "</text>\n";
    out << "</g>\n";

    // Curves: one polyline per series, every input vertex kept (values above
    // y_cap clamp to the top edge).
    out << "<g fill=\"none\" stroke-width=\"1.5\">\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        out << "<polyline stroke=\"" << kPalette[s % kPaletteSize]
            << "\" points=\"";
        for (std::size_t i = 0; i < series[s].x.size(); ++i) {
            if (i) out << ' ';
            out << px(to_px(series[s].x[i])) << ','
                << px(to_py(series[s].y[i]));
        }
        out << "\"/>\n";
    }
    out << "</g>\n";

    // Legend, top-right inside the plot area.
    out << "<g font-family=\"monospace\" font-size=\"11\">\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const double Y = mt + 14.0 + 16.0 * static_cast<double>(s);
        out << "<line x1=\"" << px(ml + pw - 170.0) << "\" y1=\"" << px(Y)
            << "\" x2=\"" << px(ml + pw - 146.0) << "\" y2=\"" << px(Y)
            << "\" stroke=\"" << kPalette[s % kPaletteSize]
            << "\" stroke-width=\"1.5\"/>\n";
        out << "<text x=\"" << px(ml + pw - 140.0) << "\" y=\"" << px(Y + 4.0)
            << "\">" << escape_xml(series[s].label) << "</text>\n";
    }
    out << "</g>\n";
    out << "</svg>\n";
    return out.str();
}

}  // namespace zetadim
