#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "fairex/data.hpp"
#include "fairex/errors.hpp"
#include "fairex/fairness_metrics.hpp"

namespace fairex {

// Per-item counts of top-k appearances across the whole run; the exposure an
// item already receives before re-ranking.
inline std::vector<long long> coverage_scores(const RunData& run, int k) {
  return exposure_counts(run, k).counts;
}

struct RerankOutcome {
  RunData run;
  int short_lists = 0;  // lists that offered fewer than k_prime candidates
};

// Score-fusion re-ranking of each (user, round) list's top k_prime
// candidates.  Two signals per candidate: min-max normalized predicted score,
// and one minus its coverage share relative to the pool's most-covered item.
// Their sum is scaled by the count of strictly positive signals; candidates
// sort by fused score, ties keep the incoming order.  Lists shorter than
// k_prime are re-ranked whole and counted in short_lists.
inline RerankOutcome combmnz_rerank(const RunData& run, int k_prime, int k) {
  if (k_prime < 1) throw ConfigError("candidate cutoff must be >= 1, got " + std::to_string(k_prime));
  if (k < 1) throw ConfigError("cutoff must be >= 1, got " + std::to_string(k));
  if (k > k_prime) throw ConfigError("candidate cutoff must be at least the evaluation cutoff");

  std::vector<long long> cover = coverage_scores(run, k);

  RerankOutcome out{RunData(run.num_users(), run.num_items(), run.num_rounds()), 0};
  run.for_each_list([&](int u, int w, const RankedList& l) {
    if (!l.scored())
      throw StructuralError("list for user index " + std::to_string(u) + ", round " + std::to_string(w + 1) +
                            " has no predicted scores; fusion needs them");
    int d = std::min(l.depth(), k_prime);
    if (d < k_prime) ++out.short_lists;

    double smin = l.scores[0], smax = l.scores[0];
    long long cmax = 0;
    for (int p = 0; p < d; ++p) {
      smin = std::min(smin, l.scores[static_cast<std::size_t>(p)]);
      smax = std::max(smax, l.scores[static_cast<std::size_t>(p)]);
      cmax = std::max(cmax, cover[static_cast<std::size_t>(l.items[static_cast<std::size_t>(p)])]);
    }
    double srange = smax - smin;

    RankedList fused;
    fused.items.reserve(static_cast<std::size_t>(d));
    fused.scores.reserve(static_cast<std::size_t>(d));
    std::vector<int> order(static_cast<std::size_t>(d));
    std::vector<double> score(static_cast<std::size_t>(d));
    for (int p = 0; p < d; ++p) {
      double s_rel = srange > 0.0 ? (l.scores[static_cast<std::size_t>(p)] - smin) / srange : 0.0;
      double s_fair =
          cmax > 0 ? 1.0 - static_cast<double>(cover[static_cast<std::size_t>(l.items[static_cast<std::size_t>(p)])]) /
                               static_cast<double>(cmax)
                   : 1.0;
      int nonzero = (s_rel > 0.0 ? 1 : 0) + (s_fair > 0.0 ? 1 : 0);
      score[static_cast<std::size_t>(p)] = (s_rel + s_fair) * static_cast<double>(nonzero);
      order[static_cast<std::size_t>(p)] = p;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return score[static_cast<std::size_t>(a)] > score[static_cast<std::size_t>(b)]; });
    for (int p : order) {
      fused.items.push_back(l.items[static_cast<std::size_t>(p)]);
      fused.scores.push_back(score[static_cast<std::size_t>(p)]);
    }
    out.run.set_list(u, w, std::move(fused));
  });
  return out;
}

}  // namespace fairex
