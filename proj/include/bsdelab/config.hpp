#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bsdelab {

// Parse/validation failure with source coordinates (line 0 = whole file).
class ConfigError : public std::exception {
public:
    ConfigError(std::string message, int line = 0, int column = 0);
    const char* what() const noexcept override { return formatted_.c_str(); }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    std::string formatted_;
    int line_;
    int column_;
};

// Flat `key = value` file with dotted section keys and '#' comments.
class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    std::string get_string_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
    int get_int(const std::string& key) const;
    int get_int_or(const std::string& key, int fallback) const;
    std::uint64_t get_uint64_or(const std::string& key, std::uint64_t fallback) const;
    std::vector<double> get_double_list(const std::string& key) const;
    std::vector<double> get_double_list_or(const std::string& key,
                                           const std::vector<double>& fallback) const;

    const std::string& text() const { return text_; }
    std::vector<std::string> keys() const;

private:
    struct Entry {
        std::string value;
        int line;
    };
    std::map<std::string, Entry> entries_;
    std::string text_;

    const Entry& require(const std::string& key) const;
};

} // namespace bsdelab
