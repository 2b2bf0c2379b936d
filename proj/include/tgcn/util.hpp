#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tgcn {

// Error taxonomy, mapped to CLI exit codes 1/2/3.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

void warn(const std::string& msg);

// %.17g — enough digits to round-trip any double through decimal.
std::string format_g17(double x);

// Shortest decimal that round-trips (used for CSV cell values).
std::string format_shortest(double x);

// Fixed-point with n decimals (prediction CSV, metric tables).
std::string format_fixed(double x, int decimals);

std::string json_escape(std::string_view s);

std::uint64_t fnv1a64(std::string_view bytes);
std::string to_hex(std::uint64_t v);

// SplitMix64 step; used to derive independent sub-seeds from (seed, tag).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace tgcn
