#pragma once

// IDNC graph: one vertex per wanted (user, packet) entry. Two vertices are
// adjacent when they want the same packet, or when each user holds the
// packet the other one wants. Adjacency is answered from the matrix bits;
// nothing is materialized beyond the vertex list.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <ostream>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "side_info.hpp"

namespace idnc {

struct vertex {
  user_index user;
  packet_index packet;

  friend auto operator<=>(const vertex &, const vertex &) = default;
};

/// Vertex set kept sorted row-major (user, then packet).
class clique {
public:
  clique() = default;
  explicit clique(std::vector<vertex> vertices) : vertices_(std::move(vertices)) {
    std::sort(vertices_.begin(), vertices_.end());
    vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
  }
  clique(std::initializer_list<vertex> vertices) : clique(std::vector<vertex>(vertices)) {}

  std::span<const vertex> vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  bool empty() const noexcept { return vertices_.empty(); }

  /// Distinct packet indices touched, ascending.
  std::vector<packet_index> columns() const {
    std::vector<packet_index> out;
    for (const auto &v : vertices_)
      out.push_back(v.packet);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  friend bool operator==(const clique &, const clique &) = default;

private:
  std::vector<vertex> vertices_;
};

class idnc_graph {
public:
  explicit idnc_graph(side_info_matrix a) : matrix_(std::move(a)) {
    vertices_.reserve(matrix_.ones());
    for (user_index i = 0; i < matrix_.users(); ++i)
      for (packet_index j = 0; j < matrix_.packets(); ++j)
        if (matrix_.wants(i, j))
          vertices_.push_back({i, j});
  }

  const side_info_matrix &matrix() const noexcept { return matrix_; }
  std::span<const vertex> vertices() const noexcept { return vertices_; }
  std::size_t vertex_count() const noexcept { return vertices_.size(); }

  bool contains(const vertex &v) const {
    return v.user < matrix_.users() && v.packet < matrix_.packets() &&
           matrix_.wants(v.user, v.packet);
  }

  void check_vertex(const vertex &v) const {
    if (!contains(v))
      throw std::invalid_argument("vertex (" + std::to_string(v.user) + ", " +
                                  std::to_string(v.packet) + ") is not in the graph");
  }

  /// Edge test. No self-loops.
  bool adjacent(const vertex &a, const vertex &b) const {
    check_vertex(a);
    check_vertex(b);
    if (a == b)
      return false;
    if (a.packet == b.packet)
      return true;
    return matrix_.has(b.user, a.packet) && matrix_.has(a.user, b.packet);
  }

  std::size_t edge_count() const {
    std::size_t count = 0;
    for (std::size_t x = 0; x < vertices_.size(); ++x)
      for (std::size_t y = x + 1; y < vertices_.size(); ++y)
        count += adjacent(vertices_[x], vertices_[y]);
    return count;
  }

private:
  side_info_matrix matrix_;
  std::vector<vertex> vertices_;
};

inline idnc_graph build_graph(side_info_matrix a) { return idnc_graph(std::move(a)); }

/// Pairwise adjacency of `s`. The empty set and singletons are cliques.
inline bool is_clique(const idnc_graph &g, std::span<const vertex> s) {
  for (const auto &v : s)
    g.check_vertex(v);
  for (std::size_t x = 0; x < s.size(); ++x)
    for (std::size_t y = x + 1; y < s.size(); ++y)
      if (s[x] == s[y] || !g.adjacent(s[x], s[y]))
        return false;
  return true;
}

inline bool is_clique(const idnc_graph &g, const clique &c) {
  return is_clique(g, c.vertices());
}

/// Clique to (coded packet, beneficiaries): XOR of the distinct packet
/// indices; every vertex's user recovers that vertex's packet.
inline std::pair<coded_packet, beneficiary_set> clique_to_packet(const idnc_graph &g,
                                                                 const clique &c) {
  if (c.empty())
    throw std::invalid_argument("clique_to_packet: empty clique has no packet");
  if (!is_clique(g, c))
    throw std::invalid_argument("clique_to_packet: vertex set is not a clique");
  beneficiary_set users;
  for (const auto &v : c.vertices())
    users.recovered.push_back({v.user, v.packet});
  // Sorted row-major, so recovered is ascending by user; users are distinct
  // because two vertices on one row are never adjacent.
  return {coded_packet(c.columns()), std::move(users)};
}

/// Inverse of clique_to_packet on instantly decodable (c, N) pairs.
inline clique packet_to_clique(const idnc_graph &g, const coded_packet &c,
                               std::span<const user_index> group) {
  const auto &a = g.matrix();
  if (!is_instantly_decodable(a, c, group))
    throw std::invalid_argument("packet_to_clique: packet is not instantly decodable for the users");
  std::vector<vertex> out;
  for (auto i : group)
    out.push_back({i, *decodable_for_user(a, c, i)});
  return clique(std::move(out));
}

inline clique packet_to_clique(const idnc_graph &g, const coded_packet &c,
                               std::initializer_list<user_index> group) {
  return packet_to_clique(g, c, std::span<const user_index>(group.begin(), group.size()));
}

/// Graphviz export; vertices are labeled u<i>p<j> with 1-based indices.
inline void write_dot(std::ostream &out, const idnc_graph &g) {
  auto label = [](const vertex &v) {
    return "u" + std::to_string(v.user + 1) + "p" + std::to_string(v.packet + 1);
  };
  out << "graph idnc {\n";
  for (const auto &v : g.vertices())
    out << "  " << label(v) << ";\n";
  const auto vs = g.vertices();
  for (std::size_t x = 0; x < vs.size(); ++x)
    for (std::size_t y = x + 1; y < vs.size(); ++y)
      if (g.adjacent(vs[x], vs[y]))
        out << "  " << label(vs[x]) << " -- " << label(vs[y]) << ";\n";
  out << "}\n";
}

} // namespace idnc
