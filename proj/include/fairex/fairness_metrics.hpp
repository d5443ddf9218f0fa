#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "fairex/data.hpp"
#include "fairex/errors.hpp"

namespace fairex {

// Item appearance counts inside the top-k across all (user, round) lists.
// Lists shorter than k contribute what they have; depth policy is the
// caller's concern (evaluation requires full depth, re-ranking tolerates
// short candidate pools).
struct ExposureVector {
  std::vector<long long> counts;
  long long total = 0;
  int num_lists = 0;
};

inline ExposureVector exposure_counts(const RunData& run, int k) {
  if (k < 1) throw ConfigError("cutoff must be >= 1");
  ExposureVector x;
  x.counts.assign(static_cast<std::size_t>(run.num_items()), 0);
  run.for_each_list([&](int, int, const RankedList& l) {
    ++x.num_lists;
    int d = std::min(l.depth(), k);
    for (int p = 0; p < d; ++p) {
      ++x.counts[static_cast<std::size_t>(l.items[static_cast<std::size_t>(p)])];
      ++x.total;
    }
  });
  return x;
}

namespace detail {
inline void require_mass(const ExposureVector& x) {
  if (x.counts.empty()) throw UndefinedInputError("empty item universe");
  if (x.total == 0) throw UndefinedInputError("exposure vector carries no mass");
}
}  // namespace detail

// (sum x)^2 / (n * sum x^2); 1 iff uniform, 1/n when one item takes all.
inline double jain(const ExposureVector& x) {
  detail::require_mass(x);
  double s = 0.0, sq = 0.0;
  for (long long c : x.counts) {
    s += static_cast<double>(c);
    sq += static_cast<double>(c) * static_cast<double>(c);
  }
  return (s * s) / (static_cast<double>(x.counts.size()) * sq);
}

// Fraction of the universe that appears at all.
inline double coverage(const ExposureVector& x) {
  if (x.counts.empty()) throw UndefinedInputError("empty item universe");
  long long hit = 0;
  for (long long c : x.counts)
    if (c > 0) ++hit;
  return static_cast<double>(hit) / static_cast<double>(x.counts.size());
}

// Shannon entropy of the exposure distribution, normalized by log n.
inline double exposure_entropy(const ExposureVector& x) {
  detail::require_mass(x);
  std::size_t n = x.counts.size();
  if (n == 1) return 1.0;
  double h = 0.0;
  for (long long c : x.counts) {
    if (c == 0) continue;
    double p = static_cast<double>(c) / static_cast<double>(x.total);
    h -= p * std::log(p);
  }
  return h / std::log(static_cast<double>(n));
}

// Fraction of items reaching their fair share of exposure,
// max(1, floor(total / n)) appearances.
inline double fsat(const ExposureVector& x) {
  if (x.counts.empty()) throw UndefinedInputError("empty item universe");
  long long share = std::max<long long>(1, x.total / static_cast<long long>(x.counts.size()));
  long long sat = 0;
  for (long long c : x.counts)
    if (c >= share) ++sat;
  return static_cast<double>(sat) / static_cast<double>(x.counts.size());
}

// Mean-difference form over ascending counts: sum (2j - n - 1) x_(j) / (n * total).
inline double gini(const ExposureVector& x) {
  detail::require_mass(x);
  std::vector<long long> sorted(x.counts);
  std::sort(sorted.begin(), sorted.end());
  std::size_t n = sorted.size();
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double coef = 2.0 * static_cast<double>(j + 1) - static_cast<double>(n) - 1.0;
    acc += coef * static_cast<double>(sorted[j]);
  }
  return acc / (static_cast<double>(n) * static_cast<double>(x.total));
}

}  // namespace fairex
