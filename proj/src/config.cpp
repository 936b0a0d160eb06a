#include "kdvnf/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

namespace kdvnf {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double to_double(const std::string& key, const std::string& v) {
    if (v == "inf" || v == "infinity") return std::numeric_limits<double>::infinity();
    std::size_t pos = 0;
    double x = 0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ValidationError(key, "expected a number, got '" + v + "'");
    }
    if (pos != v.size()) throw ValidationError(key, "expected a number, got '" + v + "'");
    return x;
}

long long to_int(const std::string& key, const std::string& v) {
    long long x = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ValidationError(key, "expected an integer, got '" + v + "'");
    return x;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    std::uint64_t x = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ValidationError(key, "expected a non-negative 64-bit integer, got '" + v + "'");
    return x;
}

int to_small_int(const std::string& key, const std::string& v) {
    const long long x = to_int(key, v);
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
        throw ValidationError(key, "value out of range");
    return static_cast<int>(x);
}

void one_of(const std::string& key, const std::string& v, std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
        if (v == a) return;
    std::string msg = "must be one of";
    for (const char* a : allowed) msg += std::string(" ") + a;
    throw ValidationError(key, msg + " (got '" + v + "')");
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> k = {
        "subcommand", "seed",   "output_dir", "N",         "h",     "dt",     "t_final",
        "J",          "cstar",  "delta",      "checkpoints", "rhs", "initial", "speed",
        "j_max",      "trials", "direction",  "region",    "weight", "s",     "p",
        "experiment", "outer_points"};
    return k;
}

void set_config_value(RunConfig& c, const std::string& key, const std::string& v) {
    if (key == "subcommand") {
        if (std::find(subcommands().begin(), subcommands().end(), v) == subcommands().end())
            throw ValidationError(key, "unknown subcommand '" + v + "'");
        c.subcommand = v;
    } else if (key == "seed") c.seed = to_u64(key, v);
    else if (key == "output_dir") c.output_dir = v;
    else if (key == "N") c.N = to_small_int(key, v);
    else if (key == "h") c.h = to_double(key, v);
    else if (key == "dt") c.dt = to_double(key, v);
    else if (key == "t_final") c.t_final = to_double(key, v);
    else if (key == "J") c.J = to_small_int(key, v);
    else if (key == "cstar") c.cstar = to_double(key, v);
    else if (key == "delta") c.delta = to_double(key, v);
    else if (key == "checkpoints") c.checkpoints = to_small_int(key, v);
    else if (key == "rhs") { one_of(key, v, {"kdv", "gkdv"}); c.rhs = v; }
    else if (key == "initial") c.initial = v;
    else if (key == "speed") c.speed = to_double(key, v);
    else if (key == "j_max") c.j_max = to_small_int(key, v);
    else if (key == "trials") c.trials = to_small_int(key, v);
    else if (key == "direction") { one_of(key, v, {"forward", "inverse"}); c.direction = v; }
    else if (key == "region") { one_of(key, v, {"paper", "empty"}); c.region = v; }
    else if (key == "weight") {
        one_of(key, v, {"unit", "bilinear_full", "typeI_A", "typeII", "typeIII_cubic", "typeIV_quartic"});
        c.weight = v;
    } else if (key == "s") c.s = to_double(key, v);
    else if (key == "p") c.p = to_double(key, v);
    else if (key == "experiment") { one_of(key, v, {"picard3", "miura"}); c.experiment = v; }
    else if (key == "outer_points") c.outer_points = to_small_int(key, v);
    else throw ValidationError(key, "unknown configuration key");
    c.explicit_keys.insert(key);
}

void RunConfig::validate() const {
    if (subcommand.empty()) throw ValidationError("subcommand", "missing");
    if (N < 4 || N % 2 != 0) throw ValidationError("N", "must be an even integer >= 4");
    if (!(h > 0.0 && h <= 0.25)) throw ValidationError("h", "must lie in (0, 1/4]");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt", "must be positive");
    if (!(t_final > 0.0) || !std::isfinite(t_final)) throw ValidationError("t_final", "must be positive");
    if (J < 1 || J > 4) throw ValidationError("J", "must lie in 1..4");
    if (!(cstar > 0.0 && cstar < 1.0)) throw ValidationError("cstar", "must lie in (0,1)");
    if (!(delta > 0.0) || !std::isfinite(delta)) throw ValidationError("delta", "must be positive");
    if (checkpoints < 1) throw ValidationError("checkpoints", "must be at least 1");
    if (!(speed > 0.0)) throw ValidationError("speed", "must be positive");
    if (j_max < 1 || j_max > 8) throw ValidationError("j_max", "must lie in 1..8");
    if (trials < 0) throw ValidationError("trials", "must be non-negative");
    if (!(p >= 1.0)) throw ValidationError("p", "must lie in [1, inf]");
    if (outer_points < 2) throw ValidationError("outer_points", "must be at least 2");
}

RunConfig parse_config(std::istream& is, bool validate) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::string raw;
    int lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(lineno, "expected 'key = value', got '" + trim(raw) + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(lineno, "missing key before '='");
        if (value.empty()) throw ParseError(lineno, "missing value for key '" + key + "'");
        if (!seen.insert(key).second) throw ParseError(lineno, "duplicate key '" + key + "'");
        set_config_value(cfg, key, value);
    }
    if (validate) cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path, bool validate) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open configuration file " + path);
    return parse_config(is, validate);
}

}  // namespace kdvnf
