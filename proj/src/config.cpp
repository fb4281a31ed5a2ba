#include "mht/config.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include <fmt/core.h>

#include "mht/errors.hpp"

namespace mht {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            return parts;
        }
        start = pos + 1;
    }
}

constexpr std::array<const char*, 5> kNondimKeys{"M", "B", "C", "S", "Q"};
constexpr std::array<const char*, 8> kDimKeys{"r", "K", "m", "q", "s", "n", "b", "c"};

}  // namespace

double parse_number(std::string_view text, std::string_view what) {
    text = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw InvalidInput(fmt::format("{}: '{}' is not a number", what, text));
    }
    return value;
}

std::pair<double, double> parse_pair(std::string_view text, std::string_view what) {
    const auto parts = split(text, ',');
    if (parts.size() != 2) {
        throw InvalidInput(fmt::format("{}: expected two comma-separated numbers, got '{}'", what, text));
    }
    return {parse_number(parts[0], what), parse_number(parts[1], what)};
}

Window parse_window(std::string_view text) {
    const auto parts = split(text, ',');
    if (parts.size() != 4) {
        throw InvalidInput(fmt::format("window: expected u0,u1,v0,v1, got '{}'", text));
    }
    Window w{parse_number(parts[0], "window"), parse_number(parts[1], "window"), parse_number(parts[2], "window"),
             parse_number(parts[3], "window")};
    if (!(w.u1 > w.u0) || !(w.v1 > w.v0)) {
        throw InvalidInput("window: need u0 < u1 and v0 < v1");
    }
    return w;
}

std::pair<std::size_t, std::size_t> parse_resolution(std::string_view text, std::size_t minimum) {
    const auto parts = split(text, ',');
    if (parts.empty() || parts.size() > 2) {
        throw InvalidInput(fmt::format("res: expected NX,NY, got '{}'", text));
    }
    std::array<std::size_t, 2> n{};
    for (std::size_t i = 0; i < 2; ++i) {
        const std::string_view part = parts[std::min(i, parts.size() - 1)];
        const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), n[i]);
        if (ec != std::errc() || ptr != part.data() + part.size() || part.empty()) {
            throw InvalidInput(fmt::format("res: '{}' is not a positive integer", part));
        }
        if (n[i] < minimum) {
            throw InvalidInput(fmt::format("res: resolution must be at least {} per axis", minimum));
        }
    }
    return {n[0], n[1]};
}

Config Config::parse(std::string_view text, std::string_view origin) {
    Config cfg;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (!line.empty()) {
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) {
                throw InvalidInput(fmt::format("{}:{}: expected 'key = value'", origin, line_no));
            }
            const std::string_view key = trim(line.substr(0, eq));
            if (key.empty()) {
                throw InvalidInput(fmt::format("{}:{}: empty key", origin, line_no));
            }
            cfg.values_[std::string(key)] = std::string(trim(line.substr(eq + 1)));
        }
        if (end == std::string_view::npos) {
            break;
        }
        start = end + 1;
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput(fmt::format("cannot read config file {}", path.string()));
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

void Config::set_assignment(std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || trim(assignment.substr(0, eq)).empty()) {
        throw InvalidInput(fmt::format("--param expects KEY=VAL, got '{}'", assignment));
    }
    values_[std::string(trim(assignment.substr(0, eq)))] = std::string(trim(assignment.substr(eq + 1)));
}

void Config::merge(const Config& other) {
    for (const auto& [k, v] : other.values_) {
        values_[k] = v;
    }
}

std::optional<std::string> Config::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        return std::nullopt;
    }
    return it->second;
}

double Config::number(const std::string& key) const {
    const auto v = get(key);
    if (!v) {
        throw InvalidInput(fmt::format("missing required setting '{}'", key));
    }
    return parse_number(*v, key);
}

double Config::number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

std::variant<NondimParams, DimParams> params_from(const Config& cfg) {
    bool any_nondim = false;
    bool any_dim = false;
    for (const char* k : kNondimKeys) {
        any_nondim = any_nondim || cfg.has(k);
    }
    for (const char* k : kDimKeys) {
        any_dim = any_dim || cfg.has(k);
    }
    if (any_nondim && any_dim) {
        throw InvalidInput("give either nondimensional (M,B,C,S,Q) or dimensional (r,K,m,q,s,n,b,c) parameters, not both");
    }
    if (any_nondim) {
        NondimParams p{cfg.number("M"), cfg.number("B"), cfg.number("C"), cfg.number("S"), cfg.number("Q")};
        p.validate();
        return p;
    }
    if (any_dim) {
        DimParams p;
        p.law = GrowthLaw::multiple_allee;
        if (const auto law = cfg.get("law")) {
            if (*law == "strong" || *law == "strong-allee") {
                p.law = GrowthLaw::strong_allee;
            } else if (*law != "multiple" && *law != "multiple-allee") {
                throw InvalidInput(fmt::format("law must be 'multiple' or 'strong', got '{}'", *law));
            }
        }
        p.r = cfg.number("r");
        p.K = cfg.number("K");
        p.m = cfg.number("m");
        p.q = cfg.number("q");
        p.s = cfg.number("s");
        p.n = cfg.number("n");
        p.c = cfg.number("c");
        p.b = p.law == GrowthLaw::multiple_allee ? cfg.number("b") : cfg.number_or("b", 0.0);
        p.validate();
        return p;
    }
    throw InvalidInput("no model parameters given");
}

}  // namespace mht
