// Static SVG rendering of dimension curves: log-scaled x (cutoff), linear y
// (spectral dimension), one polyline per series, decade ticks, legend.  Pure
// text emission in an SVG 1.1 subset (svg, g, path/polyline, text, line);
// deterministic byte-for-byte for identical inputs.
#pragma once

#include <string>
#include <vector>

namespace zetadim {

struct SvgSeries {
    std::string label;
    std::vector<double> x;  // positive (log axis)
    std::vector<double> y;
};

struct SvgOptions {
    double width = 720.0;
    double height = 480.0;
    // The dimension curve diverges like 2*u_min^2/lambda^2 on the left; a
    // linear y axis spanning that peak would flatten every plateau to the
    // baseline, so values are clamped into [0, y_cap] (vertex count is
    // preserved; clamped runs hug the top edge).
    double y_cap = 4.0;
    std::string x_label = "cutoff";
    std::string y_label = "spectral dimension";
};

// Renders the document text.  config_comment is embedded as an XML comment
// right after the opening tag so artifacts carry their effective
// configuration.  Throws std::domain_error on empty/invalid input.
std::string render_svg(const std::vector<SvgSeries>& series,
                       const std::string& config_comment,
                       const SvgOptions& options = {});

}  // namespace zetadim
