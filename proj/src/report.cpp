#include "hx/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hx {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // Prefer the shorter form when it round-trips.
    for (int prec = 1; prec < 17; ++prec) {
        char s[64];
        std::snprintf(s, sizeof(s), "%.*g", prec, v);
        if (std::strtod(s, nullptr) == v) return s;
    }
    return buf;
}

template <typename T>
static std::string join_ints(const std::vector<T>& v) {
    std::string out = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        out += std::to_string(v[i]);
        if (i + 1 < v.size()) out += ",";
    }
    return out + "]";
}

std::string int_vector_to_string(const std::vector<int>& v) { return join_ints(v); }
std::string int_vector_to_string(const std::vector<long long>& v) { return join_ints(v); }

std::string cube_to_json(const Cube& q) {
    return "{ \"shift\": " + join_ints(q.shift.t) + ", \"level\": " + std::to_string(q.level) +
           ", \"index\": " + join_ints(q.m) + " }";
}

static std::string csv_field(const std::string& s) {
    bool needs = s.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    return out + "\"";
}

std::string CsvTable::to_string() const {
    std::string out;
    for (size_t i = 0; i < header.size(); ++i) {
        out += csv_field(header[i]);
        if (i + 1 < header.size()) out += ",";
    }
    out += "\r\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            out += csv_field(row[i]);
            if (i + 1 < row.size()) out += ",";
        }
        out += "\r\n";
    }
    return out;
}

std::string RunManifest::to_json() const {
    std::ostringstream os;
    os << "{\n  \"command\": \"" << command << "\",\n  \"inputs\": [";
    for (size_t i = 0; i < inputs.size(); ++i) {
        os << "\"" << inputs[i] << "\"";
        if (i + 1 < inputs.size()) os << ", ";
    }
    os << "],\n  \"params\": {";
    size_t k = 0;
    for (const auto& [key, val] : params) {
        os << "\"" << key << "\": \"" << val << "\"";
        if (++k < params.size()) os << ", ";
    }
    os << "},\n  \"seed\": " << seed << ",\n  \"budget\": " << budget
       << ",\n  \"level\": " << level << ",\n  \"calibration_hash\": \"" << calibration_hash
       << "\",\n  \"tool_version\": \"" << tool_version << "\",\n  \"timestamp\": \"" << timestamp
       << "\"\n}";
    return os.str();
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open for writing: " + tmp);
        os << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename into place: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace hx
