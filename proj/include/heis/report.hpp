#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "heis/errors.hpp"
#include "heis/io.hpp"

namespace heis {

struct Series {
    std::string x_label = "x";
    std::string y_label = "y";
    std::vector<double> x;
    std::vector<double> y;
};

struct ExperimentReport {
    std::string name;
    nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
    std::map<std::string, double> scalars;
    std::map<std::string, Series> series;
    std::string provenance = "none";  // constants-manifest hash

    void add_series(const std::string& key, Series s) {
        if (s.x.size() != s.y.size()) throw DomainError("add_series: x and y differ in length");
        series[key] = std::move(s);
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["name"] = name;
        j["parameters"] = parameters;
        j["scalars"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : scalars) j["scalars"][k] = v;
        j["series"] = nlohmann::ordered_json::object();
        for (const auto& [k, s] : series)
            j["series"][k] = {{"x_label", s.x_label}, {"y_label", s.y_label}, {"x", s.x}, {"y", s.y}};
        j["provenance"] = {{"constants_manifest_hash", provenance}};
        return j;
    }
};

// Long format: series,x,y
inline void write_csv(std::ostream& out, const ExperimentReport& r) {
    out << "series,x,y\n";
    for (const auto& [k, s] : r.series)
        for (std::size_t i = 0; i < s.x.size(); ++i) out << k << ',' << format_double(s.x[i]) << ',' << format_double(s.y[i]) << '\n';
}

// One polyline per series, each in its own panel.
inline void write_svg(std::ostream& out, const ExperimentReport& r) {
    const double w = 480, h = 300, pad = 50;
    const double total_h = h * std::max<std::size_t>(r.series.size(), 1);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << total_h << "\">\n";
    double y0 = 0;
    for (const auto& [k, s] : r.series) {
        out << "<g transform=\"translate(0," << y0 << ")\">\n";
        out << "<text x=\"" << pad << "\" y=\"20\" font-size=\"14\">" << r.name << ": " << k << "</text>\n";
        out << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << w - 2 * pad << "\" height=\"" << h - 2 * pad
            << "\" fill=\"none\" stroke=\"#888\"/>\n";
        if (!s.x.empty()) {
            const auto [xmin, xmax] = std::minmax_element(s.x.begin(), s.x.end());
            const auto [ymin, ymax] = std::minmax_element(s.y.begin(), s.y.end());
            const double dx = *xmax > *xmin ? *xmax - *xmin : 1.0, dy = *ymax > *ymin ? *ymax - *ymin : 1.0;
            out << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                const double px = pad + (s.x[i] - *xmin) / dx * (w - 2 * pad);
                const double py = h - pad - (s.y[i] - *ymin) / dy * (h - 2 * pad);
                out << px << ',' << py << ' ';
            }
            out << "\"/>\n";
            out << "<text x=\"" << pad << "\" y=\"" << h - pad + 18 << "\" font-size=\"11\">" << s.x_label << " ["
                << format_double(*xmin) << ", " << format_double(*xmax) << "]</text>\n";
            out << "<text x=\"" << pad << "\" y=\"" << pad - 6 << "\" font-size=\"11\">" << s.y_label << " ["
                << format_double(*ymin) << ", " << format_double(*ymax) << "]</text>\n";
        }
        out << "</g>\n";
        y0 += h;
    }
    out << "</svg>\n";
}

}  // namespace heis
