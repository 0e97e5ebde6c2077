#include "sdverify/canonical_json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sdverify/errors.hpp"

namespace sdverify {
namespace {

void indent_to(std::string& out, int depth) { out.append(static_cast<std::size_t>(depth) * 2, ' '); }

void format_double(std::string& out, double value) {
    if (!std::isfinite(value)) {
        out += "null";
        return;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    // -0.000000 and 0.000000 must serialize identically
    if (std::string_view(buf) == "-0.000000") {
        out += "0.000000";
        return;
    }
    out += buf;
}

void emit(std::string& out, const json& node, int depth) {
    switch (node.type()) {
        case json::value_t::object: {
            if (node.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = node.begin(); it != node.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                indent_to(out, depth + 1);
                out += json(it.key()).dump();
                out += ": ";
                emit(out, it.value(), depth + 1);
            }
            out += '\n';
            indent_to(out, depth);
            out += '}';
            return;
        }
        case json::value_t::array: {
            if (node.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& item : node) {
                if (!first) out += ",\n";
                first = false;
                indent_to(out, depth + 1);
                emit(out, item, depth + 1);
            }
            out += '\n';
            indent_to(out, depth);
            out += ']';
            return;
        }
        case json::value_t::number_float:
            format_double(out, node.get<double>());
            return;
        default:
            out += node.dump(-1, ' ', false, json::error_handler_t::replace);
            return;
    }
}

}  // namespace

std::string canonical_dump(const json& doc) {
    std::string out;
    emit(out, doc, 0);
    out += '\n';
    return out;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + path.string());
    return buf.str();
}

}  // namespace sdverify
