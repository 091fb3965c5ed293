#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace myco {

// 64-bit FNV-1a. Used for config and artifact checksums in run manifests.
std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t fnv1a64_file(const std::string& path);
std::string to_hex(std::uint64_t value);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

// Shortest decimal form that round-trips a double ("%.17g" fallback).
std::string format_double(double value);

bool parse_double(std::string_view s, double& out);
bool parse_long(std::string_view s, long long& out);

// Throwing variants for file parsers: `what` names the field in the error.
double require_double(std::string_view s, const std::string& what);
long long require_long(std::string_view s, const std::string& what);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace myco
