#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bsdelab {

// Floats serialize with 17 significant digits so identical runs produce
// byte-identical files.
std::string format_double(double v);

std::uint64_t fnv1a64(const std::string& text);
std::string hash_hex(const std::string& text);

class CsvWriter {
public:
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<std::string>& cells);
    void row_numeric(const std::vector<double>& cells);
    const std::string& text() const { return text_; }
    void write(const std::string& path) const;

private:
    std::string text_;
    std::size_t columns_ = 0;
};

struct Verdict {
    std::string id; // stable identifier of the module invariant checked
    bool pass = false;
    double value = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct Provenance {
    std::string experiment;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string version;
};

struct VerdictSet {
    Provenance provenance;
    std::vector<Verdict> items;

    void add(std::string id, bool pass, double value, double tolerance,
             std::string detail = "");
    bool all_pass() const;
    std::string to_json() const;
    void write(const std::string& path) const;
};

struct ChartSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
    std::string color = "#1f6fb2";
};

// Optional band drawn as a polygon between (x, lo) and (x, hi).
struct ChartBand {
    std::vector<double> x, lo, hi;
};

void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<ChartSeries>& series, const ChartBand* band = nullptr);

inline constexpr const char* kVersion = "0.1.0";

} // namespace bsdelab
