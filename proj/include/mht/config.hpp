#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "mht/linalg.hpp"
#include "mht/model.hpp"

namespace mht {

/// Flat key = value settings; '#' starts a comment. Later assignments win.
class Config {
public:
    static Config parse(std::string_view text, std::string_view origin = "<string>");
    static Config load(const std::filesystem::path& path);

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    /// Parses "KEY=VAL".
    void set_assignment(std::string_view assignment);
    /// Copies every entry of `other` over this one.
    void merge(const Config& other);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::optional<std::string> get(const std::string& key) const;
    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

double parse_number(std::string_view text, std::string_view what);
/// "a,b" -> (a, b).
std::pair<double, double> parse_pair(std::string_view text, std::string_view what);
/// "u0,u1,v0,v1".
Window parse_window(std::string_view text);
/// "nx,ny" or a single "n" for both; each must be >= `minimum`.
std::pair<std::size_t, std::size_t> parse_resolution(std::string_view text, std::size_t minimum);

/// Exactly one parameter family: M,B,C,S,Q or r,K,m,q,s,n,b,c (+ law).
/// Throws InvalidInput when both or neither are present, or a key is missing.
std::variant<NondimParams, DimParams> params_from(const Config& cfg);

}  // namespace mht
