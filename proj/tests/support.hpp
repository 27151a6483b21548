#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "idnc/side_info.hpp"
#include "oracles.hpp"

namespace support {

inline idnc::side_info_matrix to_matrix(const oracle::raw_matrix &raw) {
  std::vector<std::uint8_t> entries;
  for (const auto &row : raw)
    for (int e : row)
      entries.push_back(static_cast<std::uint8_t>(e));
  return idnc::side_info_matrix(raw.size(), raw.front().size(), entries);
}

/// Three users, six packets; u1 holds p1 p2, u2 holds p3 p5, u3 holds p3 p6.
inline idnc::side_info_matrix three_users() {
  return idnc::side_info_matrix::from_rows({"001111", "110101", "110110"});
}

inline std::string fixture(const std::string &name) {
  return std::string(IDNC_FIXTURE_DIR) + "/" + name;
}

} // namespace support
