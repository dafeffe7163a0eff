#include "nvm/io.hpp"

#include <cmath>
#include <cstdio>

namespace nvm {

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string canonical_config(const std::vector<std::pair<std::string, std::string>>& kv) {
  std::string s;
  for (const auto& [k, v] : kv) {
    if (!s.empty()) s += ' ';
    s += k;
    s += '=';
    s += v;
  }
  return s;
}

std::string metadata_header(std::uint64_t seed, const std::string& canonical) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "0x%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical)));
  return std::string("# version=") + kVersion + " seed=" + std::to_string(seed) +
         " config=" + buf;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

}  // namespace nvm
