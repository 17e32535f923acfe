#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace personrec {

/// Opaque, nonnegative user identifier as it appears in input files.
using UserId = std::uint64_t;

/// Unordered friendship pair. Canonical form has a < b.
struct Edge {
  UserId a = 0;
  UserId b = 0;

  [[nodiscard]] Edge canonical() const { return a <= b ? *this : Edge{b, a}; }
  auto operator<=>(const Edge&) const = default;
};

class UnknownUserError : public std::out_of_range {
 public:
  explicit UnknownUserError(UserId user);
  [[nodiscard]] UserId user() const { return user_; }

 private:
  UserId user_;
};

/// Sorted, duplicate-free set of user ids.
class UserSet {
 public:
  UserSet() = default;
  explicit UserSet(std::vector<UserId> ids);
  UserSet(std::initializer_list<UserId> ids);

  [[nodiscard]] bool contains(UserId u) const;
  [[nodiscard]] std::size_t size() const { return ids_.size(); }
  [[nodiscard]] bool empty() const { return ids_.empty(); }
  [[nodiscard]] auto begin() const { return ids_.begin(); }
  [[nodiscard]] auto end() const { return ids_.end(); }
  [[nodiscard]] const std::vector<UserId>& ids() const { return ids_; }

  bool operator==(const UserSet&) const = default;

 private:
  std::vector<UserId> ids_;
};

/// Records dropped or merged while canonicalizing an edge list.
struct GraphBuildStats {
  std::size_t input_records = 0;
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;
};

/// Immutable undirected simple graph. Users are kept sorted by id and
/// addressed internally by dense index; adjacency lists are sorted, so every
/// iteration order is deterministic.
class SocialGraph {
 public:
  using Index = std::uint32_t;

  SocialGraph() = default;

  /// Canonicalizes `edges` (orientation, duplicates, self-loops). Every
  /// endpoint and every id in `extra_users` becomes a user.
  static SocialGraph build(std::span<const Edge> edges,
                           std::span<const UserId> extra_users = {});

  [[nodiscard]] std::size_t num_users() const { return users_.size(); }
  [[nodiscard]] std::size_t num_edges() const { return adjacency_.size() / 2; }
  [[nodiscard]] const std::vector<UserId>& users() const { return users_; }
  [[nodiscard]] const GraphBuildStats& build_stats() const { return stats_; }

  [[nodiscard]] bool contains(UserId u) const;
  /// Throws UnknownUserError.
  [[nodiscard]] Index index_of(UserId u) const;
  [[nodiscard]] UserId id_of(Index i) const { return users_[i]; }

  [[nodiscard]] std::size_t degree(UserId u) const;
  [[nodiscard]] std::vector<UserId> neighbors(UserId u) const;
  [[nodiscard]] bool are_friends(UserId u, UserId v) const;
  [[nodiscard]] std::size_t common_friends(UserId u1, UserId u2) const;
  /// Users at distance exactly two, ascending.
  [[nodiscard]] std::vector<UserId> fof_neighborhood(UserId u) const;

  [[nodiscard]] std::size_t degree_at(Index i) const {
    return offsets_[i + 1] - offsets_[i];
  }
  [[nodiscard]] std::span<const Index> neighbors_at(Index i) const {
    return {adjacency_.data() + offsets_[i], degree_at(i)};
  }
  [[nodiscard]] std::size_t common_friends_at(Index i, Index j) const;
  /// Appends distance-two indices of `i` (ascending) to `out`. `marks` is
  /// scratch space of num_users() entries that must be all zero on entry and
  /// is left all zero on return.
  void fof_at(Index i, std::vector<Index>& out, std::vector<std::uint8_t>& marks) const;

  /// Canonical edge list, sorted.
  [[nodiscard]] std::vector<Edge> edges() const;

  /// Same users, with `removed` edges deleted. Edges not present are ignored.
  [[nodiscard]] SocialGraph without_edges(std::span<const Edge> removed) const;
  /// Subgraph induced by `keep`; ids outside the graph are ignored.
  [[nodiscard]] SocialGraph induced(const UserSet& keep) const;

  bool operator==(const SocialGraph& other) const {
    return users_ == other.users_ && offsets_ == other.offsets_ &&
           adjacency_ == other.adjacency_;
  }

 private:
  static SocialGraph from_sorted_pairs(std::vector<UserId> users,
                                       std::vector<std::pair<Index, Index>> pairs);

  std::vector<UserId> users_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Index> adjacency_;
  GraphBuildStats stats_;
};

inline SocialGraph build_graph(std::span<const Edge> edges,
                               std::span<const UserId> extra_users = {}) {
  return SocialGraph::build(edges, extra_users);
}

}  // namespace personrec
