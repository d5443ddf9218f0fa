#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "fairex/data.hpp"
#include "fairex/errors.hpp"
#include "fairex/examination.hpp"

namespace fairex {

// Every non-empty list must reach the cutoff; absent lists are legal and
// score zero wherever they are consumed.
inline void require_depth(const RunData& run, int k) {
  for (int u = 0; u < run.num_users(); ++u) {
    for (int w = 0; w < run.num_rounds(); ++w) {
      int d = run.depth(u, w);
      if (d > 0 && d < k)
        throw DepthError("list for user index " + std::to_string(u) + ", round " + std::to_string(w + 1) +
                         " has depth " + std::to_string(d) + " < cutoff " + std::to_string(k));
    }
  }
}

// Macro-averaged top-k quality.  Users without any graded item are excluded
// from the averages and counted in skipped_users; with several rounds the
// per-round macro scores are averaged.
struct RelScores {
  double hr = 0.0;
  double mrr = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double map = 0.0;
  double ndcg = 0.0;
  int evaluated_users = 0;
  int skipped_users = 0;
};

inline RelScores rel_eval(const RunData& run, const RelevanceTable& rel, int k) {
  if (k < 1) throw ConfigError("cutoff must be >= 1, got " + std::to_string(k));
  if (run.num_users() != rel.num_users() || run.num_items() != rel.num_items())
    throw StructuralError("run and relevance universes differ");
  require_depth(run, k);

  const int m = rel.num_users();
  const int W = run.num_rounds();

  std::vector<double> dcg_cum(static_cast<std::size_t>(k) + 1, 0.0);
  for (int z = 1; z <= k; ++z)
    dcg_cum[static_cast<std::size_t>(z)] = dcg_cum[static_cast<std::size_t>(z) - 1] + detail::dcg_weight(z);

  RelScores out;
  for (int w = 0; w < W; ++w) {
    double shr = 0, smrr = 0, sp = 0, sr = 0, smap = 0, sndcg = 0;
    int cnt = 0;
    for (int u = 0; u < m; ++u) {
      int h = rel.num_relevant(u);
      if (h == 0) {
        if (w == 0) ++out.skipped_users;
        continue;
      }
      if (w == 0) ++out.evaluated_users;
      ++cnt;
      const RankedList& l = run.list(u, w);
      int d = std::min(l.depth(), k);
      int hits = 0;
      double rr = 0, ap = 0, dcg = 0;
      for (int p = 0; p < d; ++p) {
        if (rel.grade(u, l.items[static_cast<std::size_t>(p)]) > 0.0) {
          ++hits;
          if (rr == 0.0) rr = 1.0 / static_cast<double>(p + 1);
          ap += static_cast<double>(hits) / static_cast<double>(p + 1);
          dcg += detail::dcg_weight(p + 1);
        }
      }
      int denom = std::min(h, k);
      if (hits > 0) shr += 1.0;
      smrr += rr;
      sp += static_cast<double>(hits) / static_cast<double>(k);
      sr += static_cast<double>(hits) / static_cast<double>(h);
      smap += ap / static_cast<double>(denom);
      sndcg += dcg / dcg_cum[static_cast<std::size_t>(denom)];
    }
    if (cnt == 0) throw UndefinedInputError("no user has graded items");
    out.hr += shr / cnt;
    out.mrr += smrr / cnt;
    out.precision += sp / cnt;
    out.recall += sr / cnt;
    out.map += smap / cnt;
    out.ndcg += sndcg / cnt;
  }
  out.hr /= W;
  out.mrr /= W;
  out.precision /= W;
  out.recall /= W;
  out.map /= W;
  out.ndcg /= W;
  return out;
}

}  // namespace fairex
