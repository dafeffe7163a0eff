#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace nvm {

inline constexpr const char* kVersion = "0.1.0";

std::uint64_t fnv1a64(const std::string& text);

// canonical "key=value key=value" line used for config hashing
std::string canonical_config(const std::vector<std::pair<std::string, std::string>>& kv);

// "# version=... seed=... config=0x..." line that starts every emitted file
std::string metadata_header(std::uint64_t seed, const std::string& canonical);

// fixed-format doubles so identical runs emit identical bytes
std::string format_double(double v);

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells);

}  // namespace nvm
