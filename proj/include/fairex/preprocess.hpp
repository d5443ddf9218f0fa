#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "fairex/errors.hpp"
#include "fairex/io.hpp"
#include "fairex/rng.hpp"

namespace fairex {

// Explicit-feedback rows at or above the threshold become grade-1 rows,
// rows below it are dropped, and implicit rows (no rating) pass through.
inline std::vector<Interaction> binarize(std::vector<Interaction> xs, double threshold) {
  std::vector<Interaction> out;
  out.reserve(xs.size());
  for (auto& x : xs) {
    if (!x.has_rating) {
      out.push_back(std::move(x));
    } else if (x.rating >= threshold) {
      x.rating = 1.0;
      out.push_back(std::move(x));
    }
  }
  return out;
}

// Iteratively removes interactions of users or items with fewer than c
// interactions until the remainder is stable.  Input order is preserved,
// so the result is a subsequence of the input.
inline std::vector<Interaction> kcore_filter(std::vector<Interaction> xs, int c) {
  if (c < 1) throw ConfigError("core size must be >= 1, got " + std::to_string(c));
  bool changed = true;
  while (changed && !xs.empty()) {
    std::unordered_map<std::string, int> user_count, item_count;
    for (const auto& x : xs) {
      ++user_count[x.user];
      ++item_count[x.item];
    }
    std::vector<Interaction> kept;
    kept.reserve(xs.size());
    for (auto& x : xs) {
      if (user_count[x.user] >= c && item_count[x.item] >= c) kept.push_back(std::move(x));
    }
    changed = kept.size() != xs.size();
    xs = std::move(kept);
  }
  return xs;
}

enum class SplitMode { temporal, random };

struct SplitRatios {
  double train = 0.6;
  double validation = 0.2;
  double test = 0.2;
};

struct SplitBundle {
  std::vector<Interaction> train;
  std::vector<Interaction> validation;
  std::vector<Interaction> test;
  // Interactions of users removed for having too few training interactions.
  std::vector<Interaction> dropped;
};

// Orders interactions (by timestamp, or by a seeded shuffle), cuts at
// floor(r_train * N) and floor((r_train + r_val) * N), then moves every
// interaction of users with fewer than min_train training interactions into
// `dropped`.  The four parts are a partition of the input multiset.
inline SplitBundle split_interactions(std::vector<Interaction> xs, const SplitRatios& ratios, SplitMode mode,
                                      std::uint64_t seed, int min_train = 5) {
  double sum = ratios.train + ratios.validation + ratios.test;
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("split ratios must sum to 1");
  if (ratios.train < 0 || ratios.validation < 0 || ratios.test < 0)
    throw ConfigError("split ratios must be non-negative");
  if (min_train < 0) throw ConfigError("min_train must be non-negative");

  if (mode == SplitMode::temporal) {
    for (const auto& x : xs)
      if (!x.has_timestamp) throw ConfigError("temporal split needs a timestamp on every interaction");
    std::stable_sort(xs.begin(), xs.end(),
                     [](const Interaction& a, const Interaction& b) { return a.timestamp < b.timestamp; });
  } else {
    Rng g(seed);
    shuffle(xs, g);
  }

  std::size_t n = xs.size();
  std::size_t cut1 = static_cast<std::size_t>(std::floor(ratios.train * static_cast<double>(n)));
  std::size_t cut2 = static_cast<std::size_t>(std::floor((ratios.train + ratios.validation) * static_cast<double>(n)));

  std::unordered_map<std::string, int> train_count;
  for (std::size_t j = 0; j < cut1; ++j) ++train_count[xs[j].user];

  SplitBundle out;
  for (std::size_t j = 0; j < n; ++j) {
    auto it = train_count.find(xs[j].user);
    int tc = it == train_count.end() ? 0 : it->second;
    if (tc < min_train) {
      out.dropped.push_back(std::move(xs[j]));
    } else if (j < cut1) {
      out.train.push_back(std::move(xs[j]));
    } else if (j < cut2) {
      out.validation.push_back(std::move(xs[j]));
    } else {
      out.test.push_back(std::move(xs[j]));
    }
  }
  return out;
}

}  // namespace fairex
