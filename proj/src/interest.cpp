#include "personrec/interest.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace personrec {

void CategoryScheme::validate() const {
  if (num_categories < 1 || num_categories > kMaxCategories) {
    throw std::invalid_argument("categories: must be in [1, " +
                                std::to_string(kMaxCategories) + "], got " +
                                std::to_string(num_categories));
  }
  if (!names.empty() && names.size() != num_categories) {
    throw std::invalid_argument("category names: expected " + std::to_string(num_categories) +
                                " labels, got " + std::to_string(names.size()));
  }
}

void ActionWeights::set(const std::string& kind, double weight) {
  if (!std::isfinite(weight) || weight < 0.0) {
    throw std::invalid_argument("weight for action kind '" + kind +
                                "' must be a finite nonnegative number");
  }
  weights_[kind] = weight;
}

double ActionWeights::weight(const std::string& kind) const {
  const auto it = weights_.find(kind);
  return it == weights_.end() ? 1.0 : it->second;
}

ProfileBuildResult build_profiles(std::span<const ActivityEvent> events,
                                  const CategoryScheme& scheme,
                                  const ActionWeights& weights,
                                  std::uint64_t min_activities) {
  scheme.validate();
  const std::size_t c = scheme.num_categories;
  ProfileBuildResult result;
  ProfileMap all;
  for (std::size_t k = 0; k < events.size(); ++k) {
    const ActivityEvent& ev = events[k];
    if (ev.category >= c) {
      result.rejected.push_back("event " + std::to_string(k) + " (user " +
                                std::to_string(ev.user) + "): category " +
                                std::to_string(ev.category) + " outside [0, " +
                                std::to_string(c) + ")");
      continue;
    }
    if (ev.multiplicity < 1) {
      result.rejected.push_back("event " + std::to_string(k) + " (user " +
                                std::to_string(ev.user) + "): multiplicity must be >= 1");
      continue;
    }
    auto [it, inserted] = all.try_emplace(ev.user);
    InterestProfile& p = it->second;
    if (inserted) {
      p.user = ev.user;
      p.raw.assign(c, 0.0);
    }
    p.raw[ev.category] += weights.weight(ev.action_kind) * ev.multiplicity;
    p.event_count += ev.multiplicity;
  }

  for (auto& [user, p] : all) {
    if (p.event_count < min_activities) {
      ++result.below_minimum;
      continue;
    }
    p.total = 0.0;
    for (double x : p.raw) p.total += x;
    p.normalized.assign(c, 0.0);
    if (p.total > 0.0) {
      for (std::size_t i = 0; i < c; ++i) p.normalized[i] = p.raw[i] / p.total;
    }
    result.profiles.emplace(user, std::move(p));
  }
  return result;
}

const char* to_string(SimilarityMetric metric) {
  return metric == SimilarityMetric::Cosine ? "cosine" : "pearson";
}

namespace {

void require_same_length(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("similarity: vector lengths differ (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
}

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

}  // namespace

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return clamp_unit(dot / (std::sqrt(na) * std::sqrt(nb)));
}

double pearson_similarity(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b);
  if (a.size() < 2) throw std::invalid_argument("pearson: needs at least two categories");
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0, qa = 0.0, qb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
    qa += a[i] * a[i];
    qb += b[i] * b[i];
  }
  // Centering a constant vector leaves rounding residue, not variance.
  constexpr double kResidue = 1e-24;
  if (saa <= kResidue * qa || sbb <= kResidue * qb) return 0.0;
  return clamp_unit(sab / (std::sqrt(saa) * std::sqrt(sbb)));
}

double similarity(SimilarityMetric metric, std::span<const double> a, std::span<const double> b) {
  return metric == SimilarityMetric::Cosine ? cosine_similarity(a, b) : pearson_similarity(a, b);
}

SimilarityMatrix::SimilarityMatrix(const ProfileMap& profiles, SimilarityMetric metric)
    : metric_(metric) {
  std::vector<const InterestProfile*> active;
  for (const auto& [user, p] : profiles) {
    if (p.active()) {
      users_.push_back(user);
      active.push_back(&p);
    }
  }
  const std::size_t n = users_.size();
  values_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = similarity(metric, active[i]->normalized, active[j]->normalized);
      values_[i * n + j] = s;
      values_[j * n + i] = s;
    }
  }
}

std::optional<std::size_t> SimilarityMatrix::slot_of(UserId u) const {
  const auto it = std::lower_bound(users_.begin(), users_.end(), u);
  if (it == users_.end() || *it != u) return std::nullopt;
  return static_cast<std::size_t>(it - users_.begin());
}

std::optional<double> SimilarityMatrix::find(UserId a, UserId b) const {
  if (a == b) return std::nullopt;
  const auto i = slot_of(a);
  const auto j = slot_of(b);
  if (!i || !j) return std::nullopt;
  return at_slots(*i, *j);
}

InterestSpace::InterestSpace(ProfileMap profiles) : profiles_(std::move(profiles)) {
  cosine_ = SimilarityMatrix(profiles_, SimilarityMetric::Cosine);
  // Pearson is undefined on a single category; leave that matrix empty.
  const bool pearson_defined =
      profiles_.empty() || profiles_.begin()->second.normalized.size() >= 2;
  if (pearson_defined) pearson_ = SimilarityMatrix(profiles_, SimilarityMetric::Pearson);
}

bool InterestSpace::is_active(UserId u) const {
  const auto it = profiles_.find(u);
  return it != profiles_.end() && it->second.active();
}

}  // namespace personrec
