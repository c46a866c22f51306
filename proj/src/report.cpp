#include "ckn/report.hpp"

#include <cmath>
#include <cstdio>

#include "ckn/format.hpp"

namespace ckn {

namespace {

void escape_string(const std::string& s, std::string& out) {
    out += '"';
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    out += '"';
}

void write_json(const nlohmann::json& j, std::string& out) {
    using value_t = nlohmann::json::value_t;
    switch (j.type()) {
        case value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {  // keys iterate sorted
                if (!first) out += ',';
                first = false;
                escape_string(it.key(), out);
                out += ':';
                write_json(it.value(), out);
            }
            out += '}';
            break;
        }
        case value_t::array: {
            out += '[';
            for (size_t i = 0; i < j.size(); ++i) {
                if (i) out += ',';
                write_json(j[i], out);
            }
            out += ']';
            break;
        }
        case value_t::string:
            escape_string(j.get<std::string>(), out);
            break;
        case value_t::boolean:
            out += j.get<bool>() ? "true" : "false";
            break;
        case value_t::number_integer:
            out += std::to_string(j.get<long long>());
            break;
        case value_t::number_unsigned:
            out += std::to_string(j.get<unsigned long long>());
            break;
        case value_t::number_float: {
            const double x = j.get<double>();
            out += std::isfinite(x) ? format_double17(x) : "null";
            break;
        }
        default:
            out += "null";
    }
}

} // namespace

std::string dump_deterministic(const nlohmann::json& j) {
    std::string out;
    write_json(j, out);
    return out;
}

nlohmann::json make_report(const std::string& command, const nlohmann::json& inputs,
                           const nlohmann::json& results, const std::vector<std::string>& notes) {
    nlohmann::json rep;
    rep["command"] = command;
    rep["discrepancy_notes"] = notes;
    rep["inputs"] = inputs;
    rep["results"] = results;
    rep["version"] = kVersion;
    return rep;
}

} // namespace ckn
