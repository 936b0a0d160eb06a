#pragma once
// Stable text serialization: 17 significant digits for doubles, "p/q" for
// rationals, JSON with sorted keys and the same float format throughout.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace kdvnf {

inline std::string fmt17(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return std::signbit(x) ? "-0" : "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

inline void json_escape(std::ostream& os, const std::string& s) {
    os << '"';
    for (unsigned char c : s) {
        switch (c) {
            case '"': os << "\\\""; break;
            case '\\': os << "\\\\"; break;
            case '\n': os << "\\n"; break;
            case '\t': os << "\\t"; break;
            case '\r': os << "\\r"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    os << buf;
                } else {
                    os << c;
                }
        }
    }
    os << '"';
}

inline void write_json(std::ostream& os, const nlohmann::json& j, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string pad_close(static_cast<std::size_t>(indent * depth), ' ');
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {  // nlohmann::json keeps keys sorted
                if (!first) os << ",\n";
                first = false;
                os << pad;
                json_escape(os, it.key());
                os << ": ";
                write_json(os, it.value(), indent, depth + 1);
            }
            os << "\n" << pad_close << "}";
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            os << "[";
            bool first = true;
            for (const auto& v : j) {
                if (!first) os << ", ";
                first = false;
                write_json(os, v, indent, depth + 1);
            }
            os << "]";
            return;
        }
        case nlohmann::json::value_t::number_float: {
            const double x = j.get<double>();
            if (std::isfinite(x))
                os << fmt17(x);
            else
                json_escape(os, fmt17(x));
            return;
        }
        case nlohmann::json::value_t::string: json_escape(os, j.get<std::string>()); return;
        default: os << j.dump(); return;
    }
}

}  // namespace detail

inline std::string to_json_text(const nlohmann::json& j) {
    std::ostringstream os;
    detail::write_json(os, j, 2, 0);
    os << "\n";
    return os.str();
}

}  // namespace kdvnf
