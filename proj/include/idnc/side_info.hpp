#pragma once

/*
 * Side-information model for real-time instantly decodable network coding.
 *
 * A side_info_matrix is an n x m binary matrix: entry (i, j) is 1 when user i
 * still wants packet j and 0 when user i already holds it. Rows are stored as
 * packed 64-bit words so that "how many wanted components does user i see in
 * coded packet c" is a masked popcount.
 *
 * All indices in the library API are 0-based. The text formats and the CLI
 * print 1-based packet/user numbers.
 */

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"

namespace idnc {

using word = std::uint64_t;
using user_index = std::size_t;
using packet_index = std::size_t;

inline constexpr std::size_t word_bits = 64;

inline constexpr std::size_t words_for(std::size_t bits) {
  return (bits + word_bits - 1) / word_bits;
}

class side_info_matrix {
public:
  side_info_matrix() = default;

  /// All-zero matrix (every user holds every packet).
  side_info_matrix(std::size_t users, std::size_t packets)
      : users_(users), packets_(packets), stride_(words_for(packets)),
        bits_(users * stride_, 0) {
    if (users == 0 || packets == 0)
      throw std::invalid_argument("side_info_matrix: dimensions must be positive");
  }

  /// Row-major 0/1 entries, `users * packets` of them.
  side_info_matrix(std::size_t users, std::size_t packets,
                   std::span<const std::uint8_t> entries)
      : side_info_matrix(users, packets) {
    if (entries.size() != users * packets)
      throw std::invalid_argument("side_info_matrix: entry count mismatch");
    for (std::size_t i = 0; i < users; ++i)
      for (std::size_t j = 0; j < packets; ++j) {
        const auto e = entries[i * packets + j];
        if (e > 1)
          throw std::invalid_argument("side_info_matrix: entries must be 0 or 1");
        if (e)
          bits_[i * stride_ + j / word_bits] |= word{1} << (j % word_bits);
      }
  }

  /// Rows given as strings over {0,1}, e.g. {"001111", "110101"}.
  static side_info_matrix from_rows(std::span<const std::string_view> rows) {
    if (rows.empty())
      throw std::invalid_argument("side_info_matrix: no rows");
    const auto m = rows.front().size();
    std::vector<std::uint8_t> entries;
    entries.reserve(rows.size() * m);
    for (auto row : rows) {
      if (row.size() != m)
        throw std::invalid_argument("side_info_matrix: ragged rows");
      for (char ch : row) {
        if (ch != '0' && ch != '1')
          throw std::invalid_argument("side_info_matrix: rows must be over {0,1}");
        entries.push_back(static_cast<std::uint8_t>(ch - '0'));
      }
    }
    return side_info_matrix(rows.size(), m, entries);
  }

  static side_info_matrix from_rows(std::initializer_list<std::string_view> rows) {
    return from_rows(std::span<const std::string_view>(rows.begin(), rows.size()));
  }

  std::size_t users() const noexcept { return users_; }
  std::size_t packets() const noexcept { return packets_; }
  std::size_t words_per_row() const noexcept { return stride_; }

  bool wants(user_index i, packet_index j) const {
    check_user(i);
    check_packet(j);
    return (bits_[i * stride_ + j / word_bits] >> (j % word_bits)) & 1U;
  }
  bool has(user_index i, packet_index j) const { return !wants(i, j); }

  std::span<const word> row(user_index i) const {
    check_user(i);
    return {bits_.data() + i * stride_, stride_};
  }

  std::size_t want_count(user_index i) const {
    std::size_t count = 0;
    for (word w : row(i))
      count += static_cast<std::size_t>(std::popcount(w));
    return count;
  }

  std::size_t column_sum(packet_index j) const {
    check_packet(j);
    std::size_t count = 0;
    for (std::size_t i = 0; i < users_; ++i)
      count += (bits_[i * stride_ + j / word_bits] >> (j % word_bits)) & 1U;
    return count;
  }

  std::size_t ones() const noexcept {
    std::size_t count = 0;
    for (word w : bits_)
      count += static_cast<std::size_t>(std::popcount(w));
    return count;
  }

  /// W_i, ascending.
  std::vector<packet_index> want_set(user_index i) const {
    std::vector<packet_index> out;
    for (packet_index j = 0; j < packets_; ++j)
      if (wants(i, j))
        out.push_back(j);
    return out;
  }

  /// H_i, ascending.
  std::vector<packet_index> has_set(user_index i) const {
    std::vector<packet_index> out;
    for (packet_index j = 0; j < packets_; ++j)
      if (!wants(i, j))
        out.push_back(j);
    return out;
  }

  void check_user(user_index i) const {
    if (i >= users_)
      throw std::invalid_argument("user index " + std::to_string(i) + " out of range");
  }
  void check_packet(packet_index j) const {
    if (j >= packets_)
      throw std::invalid_argument("packet index " + std::to_string(j) + " out of range");
  }

  friend bool operator==(const side_info_matrix &, const side_info_matrix &) = default;

private:
  std::size_t users_ = 0;
  std::size_t packets_ = 0;
  std::size_t stride_ = 0;
  std::vector<word> bits_;
};

/// XOR of a nonempty set of distinct packets. Stored sorted ascending.
class coded_packet {
public:
  explicit coded_packet(std::vector<packet_index> packets) : packets_(std::move(packets)) {
    if (packets_.empty())
      throw std::invalid_argument("coded_packet: empty composition");
    std::sort(packets_.begin(), packets_.end());
    if (std::adjacent_find(packets_.begin(), packets_.end()) != packets_.end())
      throw std::invalid_argument("coded_packet: duplicate packet index");
  }
  coded_packet(std::initializer_list<packet_index> packets)
      : coded_packet(std::vector<packet_index>(packets)) {}

  std::span<const packet_index> packets() const noexcept { return packets_; }
  std::size_t size() const noexcept { return packets_.size(); }
  bool contains(packet_index j) const {
    return std::binary_search(packets_.begin(), packets_.end(), j);
  }

  friend bool operator==(const coded_packet &, const coded_packet &) = default;

private:
  std::vector<packet_index> packets_;
};

struct recovery {
  user_index user;
  packet_index packet;
  friend bool operator==(const recovery &, const recovery &) = default;
};

/// Users that decode a coded packet, each with the single packet it recovers.
struct beneficiary_set {
  std::vector<recovery> recovered; // ascending by user
  /// False when some component of the coded packet is wanted by none of the
  /// returned users, i.e. the packet violates condition (ii) as given.
  bool all_components_wanted = true;

  std::size_t size() const noexcept { return recovered.size(); }
  bool empty() const noexcept { return recovered.empty(); }
  std::vector<user_index> users() const {
    std::vector<user_index> out;
    out.reserve(recovered.size());
    for (const auto &r : recovered)
      out.push_back(r.user);
    return out;
  }
};

/// Bit mask of the packets in `c`, laid out like a matrix row.
inline std::vector<word> packet_mask(const side_info_matrix &a, const coded_packet &c) {
  std::vector<word> mask(a.words_per_row(), 0);
  for (auto j : c.packets()) {
    a.check_packet(j);
    mask[j / word_bits] |= word{1} << (j % word_bits);
  }
  return mask;
}

namespace detail {

inline std::optional<packet_index> lone_wanted(std::span<const word> row,
                                               std::span<const word> mask) {
  std::size_t count = 0;
  std::optional<packet_index> found;
  for (std::size_t w = 0; w < row.size(); ++w) {
    const word hit = row[w] & mask[w];
    if (!hit)
      continue;
    count += static_cast<std::size_t>(std::popcount(hit));
    if (count > 1)
      return std::nullopt;
    found = w * word_bits + static_cast<std::size_t>(std::countr_zero(hit));
  }
  return found;
}

} // namespace detail

/// The packet user `i` recovers from `c`, or nothing when `c` holds zero or
/// several of the user's wanted packets.
inline std::optional<packet_index>
decodable_for_user(const side_info_matrix &a, const coded_packet &c, user_index i) {
  a.check_user(i);
  const auto mask = packet_mask(a, c);
  return detail::lone_wanted(a.row(i), mask);
}

/// Maximal beneficiary set of `c`: every user that decodes exactly one wanted
/// component. An empty result is legal (the packet helps nobody).
inline beneficiary_set beneficiaries(const side_info_matrix &a, const coded_packet &c) {
  const auto mask = packet_mask(a, c);
  beneficiary_set out;
  std::vector<word> covered(a.words_per_row(), 0);
  for (user_index i = 0; i < a.users(); ++i) {
    if (auto j = detail::lone_wanted(a.row(i), mask)) {
      out.recovered.push_back({i, *j});
      covered[*j / word_bits] |= word{1} << (*j % word_bits);
    }
  }
  out.all_components_wanted = covered == mask;
  return out;
}

/// Both conditions of instant decodability for the user group `group`.
inline bool is_instantly_decodable(const side_info_matrix &a, const coded_packet &c,
                                   std::span<const user_index> group) {
  if (group.empty())
    throw std::invalid_argument("is_instantly_decodable: empty user set");
  const auto mask = packet_mask(a, c);
  std::vector<word> covered(mask.size(), 0);
  bool ok = true;
  for (auto i : group) {
    a.check_user(i);
    auto j = detail::lone_wanted(a.row(i), mask);
    if (!j) {
      ok = false;
      continue;
    }
    covered[*j / word_bits] |= word{1} << (*j % word_bits);
  }
  return ok && covered == mask;
}

inline bool is_instantly_decodable(const side_info_matrix &a, const coded_packet &c,
                                   std::initializer_list<user_index> group) {
  return is_instantly_decodable(a, c, std::span<const user_index>(group.begin(), group.size()));
}

/// "1+3" for p1 xor p3 (1-based).
inline std::string format_packet(const coded_packet &c) {
  std::string out;
  for (auto j : c.packets()) {
    if (!out.empty())
      out += '+';
    out += std::to_string(j + 1);
  }
  return out;
}

// Text format: "n m" on the first line, then n lines of m characters in {0,1}.

inline side_info_matrix parse_matrix(std::istream &in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r')
        line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos)
        return true;
    }
    return false;
  };
  if (!next_line())
    throw parse_error(line_no + 1, "missing header \"n m\"");
  std::istringstream header(line);
  long long n = 0, m = 0;
  std::string extra;
  if (!(header >> n >> m) || (header >> extra) || n <= 0 || m <= 0)
    throw parse_error(line_no, "header must be two positive integers \"n m\"");

  std::vector<std::uint8_t> entries;
  entries.reserve(static_cast<std::size_t>(n * m));
  for (long long i = 0; i < n; ++i) {
    if (!next_line())
      throw parse_error(line_no + 1, "expected " + std::to_string(n) + " matrix rows, got " +
                                         std::to_string(i));
    if (line.size() != static_cast<std::size_t>(m))
      throw parse_error(line_no, "row must have exactly " + std::to_string(m) + " characters");
    for (char ch : line) {
      if (ch != '0' && ch != '1')
        throw parse_error(line_no, std::string("invalid character '") + ch + "'");
      entries.push_back(static_cast<std::uint8_t>(ch - '0'));
    }
  }
  if (next_line())
    throw parse_error(line_no, "trailing content after matrix rows");
  return side_info_matrix(static_cast<std::size_t>(n), static_cast<std::size_t>(m), entries);
}

inline side_info_matrix read_matrix_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open matrix file: " + path);
  return parse_matrix(in);
}

inline void write_matrix(std::ostream &out, const side_info_matrix &a) {
  out << a.users() << ' ' << a.packets() << '\n';
  for (user_index i = 0; i < a.users(); ++i) {
    for (packet_index j = 0; j < a.packets(); ++j)
      out << (a.wants(i, j) ? '1' : '0');
    out << '\n';
  }
}

} // namespace idnc
