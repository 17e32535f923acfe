#include "personrec/social_graph.hpp"

#include <algorithm>

namespace personrec {

UnknownUserError::UnknownUserError(UserId user)
    : std::out_of_range("unknown user " + std::to_string(user)), user_(user) {}

UserSet::UserSet(std::vector<UserId> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

UserSet::UserSet(std::initializer_list<UserId> ids)
    : UserSet(std::vector<UserId>(ids)) {}

bool UserSet::contains(UserId u) const {
  return std::binary_search(ids_.begin(), ids_.end(), u);
}

SocialGraph SocialGraph::build(std::span<const Edge> edges,
                               std::span<const UserId> extra_users) {
  GraphBuildStats stats;
  stats.input_records = edges.size();

  std::vector<UserId> users(extra_users.begin(), extra_users.end());
  users.reserve(users.size() + 2 * edges.size());
  std::vector<Edge> canon;
  canon.reserve(edges.size());
  for (const Edge& e : edges) {
    users.push_back(e.a);
    users.push_back(e.b);
    if (e.a == e.b) {
      ++stats.self_loops;
      continue;
    }
    canon.push_back(e.canonical());
  }
  std::sort(users.begin(), users.end());
  users.erase(std::unique(users.begin(), users.end()), users.end());
  std::sort(canon.begin(), canon.end());
  const auto last = std::unique(canon.begin(), canon.end());
  stats.duplicates = static_cast<std::size_t>(canon.end() - last);
  canon.erase(last, canon.end());

  auto index = [&users](UserId u) {
    return static_cast<Index>(std::lower_bound(users.begin(), users.end(), u) - users.begin());
  };
  std::vector<std::pair<Index, Index>> pairs;
  pairs.reserve(canon.size());
  for (const Edge& e : canon) pairs.emplace_back(index(e.a), index(e.b));

  SocialGraph g = from_sorted_pairs(std::move(users), std::move(pairs));
  g.stats_ = stats;
  return g;
}

// `pairs` must be unique with first < second.
SocialGraph SocialGraph::from_sorted_pairs(std::vector<UserId> users,
                                           std::vector<std::pair<Index, Index>> pairs) {
  SocialGraph g;
  g.users_ = std::move(users);
  const std::size_t n = g.users_.size();
  std::vector<std::size_t> deg(n, 0);
  for (const auto& [i, j] : pairs) {
    ++deg[i];
    ++deg[j];
  }
  g.offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + deg[i];
  g.adjacency_.resize(g.offsets_[n]);
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [i, j] : pairs) {
    g.adjacency_[cursor[i]++] = j;
    g.adjacency_[cursor[j]++] = i;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
              g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]));
  }
  return g;
}

bool SocialGraph::contains(UserId u) const {
  return std::binary_search(users_.begin(), users_.end(), u);
}

SocialGraph::Index SocialGraph::index_of(UserId u) const {
  const auto it = std::lower_bound(users_.begin(), users_.end(), u);
  if (it == users_.end() || *it != u) throw UnknownUserError(u);
  return static_cast<Index>(it - users_.begin());
}

std::size_t SocialGraph::degree(UserId u) const { return degree_at(index_of(u)); }

std::vector<UserId> SocialGraph::neighbors(UserId u) const {
  std::vector<UserId> out;
  for (Index j : neighbors_at(index_of(u))) out.push_back(users_[j]);
  return out;
}

bool SocialGraph::are_friends(UserId u, UserId v) const {
  const auto adj = neighbors_at(index_of(u));
  return std::binary_search(adj.begin(), adj.end(), index_of(v));
}

std::size_t SocialGraph::common_friends_at(Index i, Index j) const {
  const auto a = neighbors_at(i);
  const auto b = neighbors_at(j);
  std::size_t count = 0;
  auto x = a.begin();
  auto y = b.begin();
  while (x != a.end() && y != b.end()) {
    if (*x < *y) {
      ++x;
    } else if (*y < *x) {
      ++y;
    } else {
      ++count;
      ++x;
      ++y;
    }
  }
  return count;
}

std::size_t SocialGraph::common_friends(UserId u1, UserId u2) const {
  return common_friends_at(index_of(u1), index_of(u2));
}

void SocialGraph::fof_at(Index i, std::vector<Index>& out,
                         std::vector<std::uint8_t>& marks) const {
  // 1 = self or friend, 2 = collected
  marks[i] = 1;
  for (Index f : neighbors_at(i)) marks[f] = 1;
  const std::size_t first = out.size();
  for (Index f : neighbors_at(i)) {
    for (Index w : neighbors_at(f)) {
      if (marks[w] == 0) {
        marks[w] = 2;
        out.push_back(w);
      }
    }
  }
  std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end());
  marks[i] = 0;
  for (Index f : neighbors_at(i)) marks[f] = 0;
  for (std::size_t k = first; k < out.size(); ++k) marks[out[k]] = 0;
}

std::vector<UserId> SocialGraph::fof_neighborhood(UserId u) const {
  std::vector<Index> idx;
  std::vector<std::uint8_t> marks(num_users(), 0);
  fof_at(index_of(u), idx, marks);
  std::vector<UserId> out;
  out.reserve(idx.size());
  for (Index j : idx) out.push_back(users_[j]);
  return out;
}

std::vector<Edge> SocialGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (Index i = 0; i < users_.size(); ++i) {
    for (Index j : neighbors_at(i)) {
      if (i < j) out.push_back({users_[i], users_[j]});
    }
  }
  return out;
}

SocialGraph SocialGraph::without_edges(std::span<const Edge> removed) const {
  std::vector<Edge> gone;
  gone.reserve(removed.size());
  for (const Edge& e : removed) gone.push_back(e.canonical());
  std::sort(gone.begin(), gone.end());

  std::vector<std::pair<Index, Index>> pairs;
  pairs.reserve(num_edges());
  for (Index i = 0; i < users_.size(); ++i) {
    for (Index j : neighbors_at(i)) {
      if (i < j && !std::binary_search(gone.begin(), gone.end(), Edge{users_[i], users_[j]})) {
        pairs.emplace_back(i, j);
      }
    }
  }
  return from_sorted_pairs(users_, std::move(pairs));
}

SocialGraph SocialGraph::induced(const UserSet& keep) const {
  std::vector<UserId> users;
  std::vector<Index> remap(users_.size(), static_cast<Index>(-1));
  for (Index i = 0; i < users_.size(); ++i) {
    if (keep.contains(users_[i])) {
      remap[i] = static_cast<Index>(users.size());
      users.push_back(users_[i]);
    }
  }
  std::vector<std::pair<Index, Index>> pairs;
  for (Index i = 0; i < users_.size(); ++i) {
    if (remap[i] == static_cast<Index>(-1)) continue;
    for (Index j : neighbors_at(i)) {
      if (i < j && remap[j] != static_cast<Index>(-1)) pairs.emplace_back(remap[i], remap[j]);
    }
  }
  return from_sorted_pairs(std::move(users), std::move(pairs));
}

}  // namespace personrec
