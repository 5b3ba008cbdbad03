#include "bsdelab/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace bsdelab {

ConfigError::ConfigError(std::string message, int line, int column)
    : line_(line), column_(column) {
    std::ostringstream os;
    os << "config error";
    if (line > 0) os << " at line " << line << ", column " << column;
    os << ": " << message;
    formatted_ = os.str();
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool valid_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-';
}

} // namespace

Config Config::parse_string(const std::string& text) {
    Config cfg;
    cfg.text_ = text;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
        if (trim(line).empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            int col = 1;
            while (col <= static_cast<int>(line.size()) &&
                   std::isspace(static_cast<unsigned char>(line[col - 1])))
                ++col;
            throw ConfigError("expected 'key = value'", line_no, col);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key", line_no, 1);
        for (char c : key)
            if (!valid_key_char(c))
                throw ConfigError("invalid character in key '" + key + "'", line_no,
                                  static_cast<int>(line.find(c)) + 1);
        if (value.empty())
            throw ConfigError("empty value for key '" + key + "'", line_no,
                              static_cast<int>(eq) + 2);
        cfg.entries_[key] = {value, line_no};
    }
    return cfg;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_string(buffer.str());
}

bool Config::has(const std::string& key) const { return entries_.count(key) != 0; }

const Config::Entry& Config::require(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing required key '" + key + "'");
    return it->second;
}

std::string Config::get_string(const std::string& key) const { return require(key).value; }

std::string Config::get_string_or(const std::string& key, const std::string& fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second.value;
}

double Config::get_double(const std::string& key) const {
    const auto& e = require(key);
    try {
        std::size_t pos = 0;
        const double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' is not a number: '" + e.value + "'", e.line, 1);
    }
}

double Config::get_double_or(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

int Config::get_int(const std::string& key) const {
    const double v = get_double(key);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw ConfigError("key '" + key + "' is not an integer", require(key).line, 1);
    return i;
}

int Config::get_int_or(const std::string& key, int fallback) const {
    return has(key) ? get_int(key) : fallback;
}

std::uint64_t Config::get_uint64_or(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const auto& e = require(key);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
    if (ec != std::errc() || ptr != e.value.data() + e.value.size())
        throw ConfigError("key '" + key + "' is not an unsigned integer", e.line, 1);
    return v;
}

std::vector<double> Config::get_double_list(const std::string& key) const {
    const auto& e = require(key);
    std::vector<double> out;
    std::istringstream in(e.value);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "' has a non-numeric list item '" + item + "'",
                              e.line, 1);
        }
    }
    if (out.empty()) throw ConfigError("key '" + key + "' is an empty list", e.line, 1);
    return out;
}

std::vector<double> Config::get_double_list_or(const std::string& key,
                                               const std::vector<double>& fallback) const {
    return has(key) ? get_double_list(key) : fallback;
}

std::vector<std::string> Config::keys() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [k, v] : entries_) out.push_back(k);
    return out;
}

} // namespace bsdelab
