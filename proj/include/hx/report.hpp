#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hx/grid.hpp"

namespace hx {

std::string format_double(double v);  // shortest round-trip formatting
std::string int_vector_to_string(const std::vector<int>& v);
std::string int_vector_to_string(const std::vector<long long>& v);
std::string cube_to_json(const Cube& q);

// RFC-4180: one header row, fields quoted when they contain , " or newline.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::string to_string() const;
};

struct RunManifest {
    std::string command;
    std::vector<std::string> inputs;
    std::map<std::string, std::string> params;
    std::uint64_t seed = 0;
    long long budget = 0;
    int level = 0;
    std::string calibration_hash;
    std::string tool_version;
    std::string timestamp;  // from HXLAB_TIMESTAMP when set, else "unset"

    std::string to_json() const;
};

std::string fnv1a_hex(const std::string& data);

// Writes via a temp file in the same directory, then renames.
void write_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace hx
