#include "bsdelab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace bsdelab {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(const std::string& text) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(text)));
    return buf;
}

void CsvWriter::header(const std::vector<std::string>& columns) {
    columns_ = columns.size();
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) text_ += ',';
        text_ += columns[i];
    }
    text_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (columns_ && cells.size() != columns_)
        throw std::logic_error("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) text_ += ',';
        text_ += cells[i];
    }
    text_ += '\n';
}

void CsvWriter::row_numeric(const std::vector<double>& cells) {
    std::vector<std::string> out;
    out.reserve(cells.size());
    for (double c : cells) out.push_back(format_double(c));
    row(out);
}

void CsvWriter::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text_;
}

void VerdictSet::add(std::string id, bool pass, double value, double tolerance,
                     std::string detail) {
    items.push_back({std::move(id), pass, value, tolerance, std::move(detail)});
}

bool VerdictSet::all_pass() const {
    return std::all_of(items.begin(), items.end(), [](const Verdict& v) { return v.pass; });
}

std::string VerdictSet::to_json() const {
    nlohmann::ordered_json j;
    j["provenance"] = {{"experiment", provenance.experiment},
                       {"config_hash", provenance.config_hash},
                       {"seed", provenance.seed},
                       {"version", provenance.version}};
    j["verdicts"] = nlohmann::ordered_json::array();
    for (const auto& v : items) {
        j["verdicts"].push_back({{"id", v.id},
                                 {"pass", v.pass},
                                 {"value", v.value},
                                 {"tolerance", v.tolerance},
                                 {"detail", v.detail}});
    }
    j["all_pass"] = all_pass();
    return j.dump(2) + "\n";
}

void VerdictSet::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << to_json();
}

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kMarginL = 70, kMarginR = 20, kMarginT = 40, kMarginB = 50;

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

} // namespace

void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<ChartSeries>& series, const ChartBand* band) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (band) {
        for (std::size_t i = 0; i < band->x.size(); ++i) {
            xmin = std::min(xmin, band->x[i]);
            xmax = std::max(xmax, band->x[i]);
            ymin = std::min({ymin, band->lo[i]});
            ymax = std::max({ymax, band->hi[i]});
        }
    }
    if (xmin > xmax) {
        xmin = 0;
        xmax = 1;
    }
    if (ymin > ymax) {
        ymin = 0;
        ymax = 1;
    }
    if (xmax - xmin < 1e-300) xmax = xmin + 1;
    if (ymax - ymin < 1e-300) ymax = ymin + 1;
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    const auto sx = [&](double x) {
        return kMarginL + (x - xmin) / (xmax - xmin) * (kWidth - kMarginL - kMarginR);
    };
    const auto sy = [&](double y) {
        return kHeight - kMarginB - (y - ymin) / (ymax - ymin) * (kHeight - kMarginT - kMarginB);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
        << title << "</text>\n";

    if (band && !band->x.empty()) {
        svg << "<polygon fill=\"#c9ddf0\" stroke=\"none\" points=\"";
        for (std::size_t i = 0; i < band->x.size(); ++i)
            svg << sx(band->x[i]) << "," << sy(band->hi[i]) << " ";
        for (std::size_t i = band->x.size(); i-- > 0;)
            svg << sx(band->x[i]) << "," << sy(band->lo[i]) << " ";
        svg << "\"/>\n";
    }

    // Axes with 5 ticks each.
    svg << "<line x1=\"" << kMarginL << "\" y1=\"" << kHeight - kMarginB << "\" x2=\""
        << kWidth - kMarginR << "\" y2=\"" << kHeight - kMarginB
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << kMarginL << "\" y1=\"" << kMarginT << "\" x2=\"" << kMarginL
        << "\" y2=\"" << kHeight - kMarginB << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 4.0;
        const double yv = ymin + (ymax - ymin) * i / 4.0;
        svg << "<line x1=\"" << sx(xv) << "\" y1=\"" << kHeight - kMarginB << "\" x2=\""
            << sx(xv) << "\" y2=\"" << kHeight - kMarginB + 5 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << sx(xv) << "\" y=\"" << kHeight - kMarginB + 18
            << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt_tick(xv) << "</text>\n";
        svg << "<line x1=\"" << kMarginL - 5 << "\" y1=\"" << sy(yv) << "\" x2=\"" << kMarginL
            << "\" y2=\"" << sy(yv) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << kMarginL - 8 << "\" y=\"" << sy(yv) + 4
            << "\" text-anchor=\"end\" font-size=\"11\">" << fmt_tick(yv) << "</text>\n";
    }
    svg << "<text x=\"" << (kMarginL + kWidth - kMarginR) / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-size=\"12\">" << x_label << "</text>\n";
    svg << "<text x=\"16\" y=\"" << (kMarginT + kHeight - kMarginB) / 2
        << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
        << (kMarginT + kHeight - kMarginB) / 2 << ")\">" << y_label << "</text>\n";

    int legend_y = static_cast<int>(kMarginT) + 8;
    for (const auto& s : series) {
        if (s.points.empty()) continue;
        svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : s.points) svg << sx(x) << "," << sy(y) << " ";
        svg << "\"/>\n";
        svg << "<text x=\"" << kWidth - kMarginR - 6 << "\" y=\"" << legend_y
            << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << s.color << "\">" << s.label
            << "</text>\n";
        legend_y += 14;
    }
    svg << "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << svg.str();
}

} // namespace bsdelab
