#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fairex/data.hpp"
#include "fairex/errors.hpp"
#include "fairex/examination.hpp"
#include "fairex/relevance_metrics.hpp"
#include "fairex/rng.hpp"

namespace fairex {

struct JointConfig {
  int k = 10;
  double gamma_hd = 0.9;            // patience decay in the click model
  double gamma_iif = 0.8;           // exposure decay in the squared-error pair
  double impact_threshold = 0.10;   // tolerance band around uniform impact
  bool hd_seeded_tiebreak = false;  // reference ties: item order (default) or seeded permutation
  std::uint64_t hd_seed = 0;
  bool ifd_ranked_only = false;     // windowed mode: drop graded items without ranks instead of failing
};

struct MetricResult {
  double value = 0.0;
  std::vector<double> components;  // per user or per item, documented per function
};

namespace detail {

inline void require_joint(const RunData& run, const RelevanceTable& rel, const JointConfig& cfg) {
  if (cfg.k < 1) throw ConfigError("cutoff must be >= 1, got " + std::to_string(cfg.k));
  if (!(cfg.gamma_hd > 0.0 && cfg.gamma_hd < 1.0)) throw ConfigError("click-model decay must lie in (0, 1)");
  if (!(cfg.gamma_iif > 0.0 && cfg.gamma_iif < 1.0)) throw ConfigError("exposure decay must lie in (0, 1)");
  if (!(cfg.impact_threshold > 0.0 && cfg.impact_threshold < 1.0))
    throw ConfigError("impact threshold must lie in (0, 1)");
  if (run.num_users() != rel.num_users() || run.num_items() != rel.num_items())
    throw StructuralError("run and relevance universes differ");
  if (rel.num_users() < 1 || rel.num_items() < 1) throw UndefinedInputError("empty universe");
  require_depth(run, cfg.k);
}

// Per-user inverse-rank weight rows: w(u, i) = (1/(W m)) sum_w [z <= k] / z,
// item-sorted sparse storage plus each row's maximum.
struct InverseRankRows {
  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<double> row_max;
};

inline InverseRankRows inverse_rank_rows(const RunData& run, int k) {
  const int m = run.num_users();
  const int W = run.num_rounds();
  const double norm = 1.0 / (static_cast<double>(W) * static_cast<double>(m));
  InverseRankRows out;
  out.rows.resize(static_cast<std::size_t>(m));
  out.row_max.assign(static_cast<std::size_t>(m), 0.0);
  std::vector<std::pair<int, double>> buf;
  for (int u = 0; u < m; ++u) {
    buf.clear();
    for (int w = 0; w < W; ++w) {
      const RankedList& l = run.list(u, w);
      int d = std::min(l.depth(), k);
      for (int p = 0; p < d; ++p) buf.emplace_back(l.items[static_cast<std::size_t>(p)], inverse_weight(p + 1));
    }
    std::sort(buf.begin(), buf.end());
    auto& row = out.rows[static_cast<std::size_t>(u)];
    row.reserve(buf.size());
    for (const auto& [item, wv] : buf) {
      if (!row.empty() && row.back().first == item)
        row.back().second += wv * norm;
      else
        row.emplace_back(item, wv * norm);
    }
    double mx = 0.0;
    for (const auto& [item, wv] : row) mx = std::max(mx, wv);
    out.row_max[static_cast<std::size_t>(u)] = mx;
  }
  return out;
}

inline double row_weight(const std::vector<std::pair<int, double>>& row, int item) {
  auto it = std::lower_bound(row.begin(), row.end(), std::pair<int, double>{item, -1.0});
  if (it != row.end() && it->first == item) return it->second;
  return 0.0;
}

// item -> (user, grade) pairs with grade > 0.
inline std::vector<std::vector<std::pair<int, double>>> invert_relevance(const RelevanceTable& rel) {
  std::vector<std::vector<std::pair<int, double>>> by_item(static_cast<std::size_t>(rel.num_items()));
  for (int u = 0; u < rel.num_users(); ++u) {
    for (const auto& [i, g] : rel.relevant(u)) by_item[static_cast<std::size_t>(i)].emplace_back(u, g);
  }
  return by_item;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Attention-to-grade gap.  Per user, each item's examination weight (averaged
// over rounds, normalized-linear scheme) is compared against its min-max
// normalized grade; the absolute gaps are averaged over the item universe and
// then over users.  Components are per user.  Range [0, 1], 0 is best.
// ---------------------------------------------------------------------------
inline MetricResult iaa(const RunData& run, const RelevanceTable& rel, const JointConfig& cfg) {
  detail::require_joint(run, rel, cfg);
  if (cfg.k == 1) throw DomainError("normalized linear weighting is degenerate at cutoff 1");
  const int m = rel.num_users();
  const int n = rel.num_items();
  const int W = run.num_rounds();
  const int k = cfg.k;

  MetricResult res;
  res.components.assign(static_cast<std::size_t>(m), 0.0);
  std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
  std::vector<int> mark(static_cast<std::size_t>(n), -1);
  std::vector<int> touched;

  for (int u = 0; u < m; ++u) {
    touched.clear();
    for (int w = 0; w < W; ++w) {
      const RankedList& l = run.list(u, w);
      int d = std::min(l.depth(), k);
      for (int p = 0; p < d; ++p) {
        int i = l.items[static_cast<std::size_t>(p)];
        if (mark[static_cast<std::size_t>(i)] != u) {
          mark[static_cast<std::size_t>(i)] = u;
          acc[static_cast<std::size_t>(i)] = 0.0;
          touched.push_back(i);
        }
        acc[static_cast<std::size_t>(i)] += detail::normalized_linear_weight(p + 1, k);
      }
    }
    auto row = rel.relevant(u);
    int h = static_cast<int>(row.size());
    double hi = 0.0, lo = 0.0;
    if (h > 0) {
      hi = row[0].second;
      double mn = row[0].second;
      for (const auto& [i, g] : row) {
        hi = std::max(hi, g);
        mn = std::min(mn, g);
      }
      lo = (h == n) ? mn : 0.0;  // implicit zeros participate in the normalization
    }
    double denom = hi - lo;
    for (const auto& [i, g] : row) {
      if (mark[static_cast<std::size_t>(i)] != u) {
        mark[static_cast<std::size_t>(i)] = u;
        acc[static_cast<std::size_t>(i)] = 0.0;
        touched.push_back(i);
      }
      double target = denom > 0.0 ? (g - lo) / denom : 0.0;
      acc[static_cast<std::size_t>(i)] -= static_cast<double>(W) * target;
    }
    double sum = 0.0;
    for (int i : touched) sum += std::abs(acc[static_cast<std::size_t>(i)]);
    res.components[static_cast<std::size_t>(u)] = sum / (static_cast<double>(n) * static_cast<double>(W));
  }
  double total = 0.0;
  for (double c : res.components) total += c;
  res.value = total / static_cast<double>(m);
  return res;
}

// ---------------------------------------------------------------------------
// Pairwise exposure-per-grade disparity.  J(u, i) averages DCG weight at the
// item's full-ranking position divided by its grade; ordered graded pairs
// (grade_i >= grade_j > 0) contribute their positive J gap.  Components are
// per user.  Needs a rank for every graded item unless ifd_ranked_only is
// set, in which case unranked graded items leave the user's pair set.
// Range [0, inf), 0 is best.
// ---------------------------------------------------------------------------
inline MetricResult ifd_div(const RunData& run, const RelevanceTable& rel, const JointConfig& cfg) {
  detail::require_joint(run, rel, cfg);
  const int m = rel.num_users();
  const int n = rel.num_items();
  const int W = run.num_rounds();

  MetricResult res;
  res.components.assign(static_cast<std::size_t>(m), 0.0);

  std::vector<int> rel_slot(static_cast<std::size_t>(n), -1);
  std::vector<int> rel_mark(static_cast<std::size_t>(n), -1);

  std::vector<double> jacc;
  std::vector<int> found_in;  // rounds in which each graded item was seen
  for (int u = 0; u < m; ++u) {
    auto row = rel.relevant(u);
    int h = static_cast<int>(row.size());
    if (h == 0) continue;
    jacc.assign(static_cast<std::size_t>(h), 0.0);
    found_in.assign(static_cast<std::size_t>(h), 0);
    for (int s = 0; s < h; ++s) {
      rel_slot[static_cast<std::size_t>(row[static_cast<std::size_t>(s)].first)] = s;
      rel_mark[static_cast<std::size_t>(row[static_cast<std::size_t>(s)].first)] = u;
    }
    for (int w = 0; w < W; ++w) {
      const RankedList& l = run.list(u, w);
      int seen = 0;
      for (int p = 0; p < l.depth() && seen < h; ++p) {
        int i = l.items[static_cast<std::size_t>(p)];
        if (rel_mark[static_cast<std::size_t>(i)] == u) {
          int s = rel_slot[static_cast<std::size_t>(i)];
          jacc[static_cast<std::size_t>(s)] += detail::dcg_weight(p + 1) / row[static_cast<std::size_t>(s)].second;
          ++found_in[static_cast<std::size_t>(s)];
          ++seen;
        }
      }
    }
    if (!cfg.ifd_ranked_only) {
      for (int s = 0; s < h; ++s) {
        if (found_in[static_cast<std::size_t>(s)] < W)
          throw MissingRankError("item index " + std::to_string(row[static_cast<std::size_t>(s)].first) +
                                 " has grade > 0 for user index " + std::to_string(u) + " but no rank in every round");
      }
    }
    double sum = 0.0;
    long long pairs = 0;
    for (int a = 0; a < h; ++a) {
      if (found_in[static_cast<std::size_t>(a)] < W) continue;
      double ja = jacc[static_cast<std::size_t>(a)] / static_cast<double>(W);
      double ga = row[static_cast<std::size_t>(a)].second;
      for (int b = 0; b < h; ++b) {
        if (found_in[static_cast<std::size_t>(b)] < W) continue;
        if (ga < row[static_cast<std::size_t>(b)].second) continue;
        ++pairs;
        double gap = ja - jacc[static_cast<std::size_t>(b)] / static_cast<double>(W);
        if (gap > 0.0) sum += gap;
      }
    }
    res.components[static_cast<std::size_t>(u)] = pairs > 0 ? sum / static_cast<double>(pairs) : 0.0;
  }
  double total = 0.0;
  for (double c : res.components) total += c;
  res.value = total / static_cast<double>(m);
  return res;
}

// ---------------------------------------------------------------------------
// Squared pairwise disparity of grade-weighted top-k exposure.  J(u, i) is
// grade times DCG weight inside the top-k, averaged over rounds; every
// ordered item pair of the universe contributes its squared gap, normalized
// by n(n-1).  Components are per user.  Range [0, inf), 0 is best.
// ---------------------------------------------------------------------------
inline MetricResult ifd_mult(const RunData& run, const RelevanceTable& rel, const JointConfig& cfg) {
  detail::require_joint(run, rel, cfg);
  const int m = rel.num_users();
  const int n = rel.num_items();
  const int W = run.num_rounds();
  const int k = cfg.k;
  if (n < 2) throw UndefinedInputError("pairwise disparity needs at least 2 items");

  MetricResult res;
  res.components.assign(static_cast<std::size_t>(m), 0.0);
  std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
  std::vector<int> mark(static_cast<std::size_t>(n), -1);
  std::vector<int> touched;

  for (int u = 0; u < m; ++u) {
    touched.clear();
    for (int w = 0; w < W; ++w) {
      const RankedList& l = run.list(u, w);
      int d = std::min(l.depth(), k);
      for (int p = 0; p < d; ++p) {
        int i = l.items[static_cast<std::size_t>(p)];
        double g = rel.grade(u, i);
        if (g <= 0.0) continue;
        if (mark[static_cast<std::size_t>(i)] != u) {
          mark[static_cast<std::size_t>(i)] = u;
          acc[static_cast<std::size_t>(i)] = 0.0;
          touched.push_back(i);
        }
        acc[static_cast<std::size_t>(i)] += g * detail::dcg_weight(p + 1);
      }
    }
    double s1 = 0.0, s2 = 0.0;
    for (int i : touched) {
      double j = acc[static_cast<std::size_t>(i)] / static_cast<double>(W);
      s1 += j;
      s2 += j * j;
    }
    // sum over ordered pairs of (J_i - J_j)^2 collapses to 2 n s2 - 2 s1^2;
    // the max guards cancellation noise, the true value is non-negative.
    double num = 2.0 * static_cast<double>(n) * s2 - 2.0 * s1 * s1;
    res.components[static_cast<std::size_t>(u)] =
        std::max(0.0, num) / (static_cast<double>(n) * static_cast<double>(n - 1));
  }
  double total = 0.0;
  for (double c : res.components) total += c;
  res.value = total / static_cast<double>(m);
  return res;
}

// ---------------------------------------------------------------------------
// Distance between where grade mass sits on the ideal ranking and where
// click mass lands there under a patience cascade over the system's top-k.
// Users contribute grade shares along their ideal (grade-sorted) top-k and,
// per round, cascade clicks from the system list mapped back onto the ideal
// positions.  Position-wise user averages of both are compared by Hellinger
// distance; rounds are averaged.  Range [0, 1], 0 is best.
// ---------------------------------------------------------------------------
struct HdResult {
  double value = 0.0;
  std::vector<double> per_round;
  int users_without_grades = 0;  // excluded from the grade-share average
  int excluded_lists = 0;        // (user, round) pairs with no click mass on the ideal top-k
};

inline double hellinger(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ConfigError("distribution lengths differ");
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] < 0.0 || b[j] < 0.0) throw DomainError("negative mass");
    double d = std::sqrt(a[j]) - std::sqrt(b[j]);
    s += d * d;
  }
  return std::sqrt(0.5 * s);
}

inline HdResult hd(const RunData& run, const RelevanceTable& rel, const JointConfig& cfg) {
  detail::require_joint(run, rel, cfg);
  const int m = rel.num_users();
  const int n = rel.num_items();
  const int W = run.num_rounds();
  const int k = cfg.k;
  const double gamma = cfg.gamma_hd;

  std::vector<int> tie_key;
  if (cfg.hd_seeded_tiebreak) {
    Rng g(cfg.hd_seed);
    tie_key = permutation(n, g);
  }

  // Ideal top-k per user: grade descending, ties by item index or seeded key.
  std::vector<std::vector<int>> ref(static_cast<std::size_t>(m));
  std::vector<double> qbar(static_cast<std::size_t>(k), 0.0);
  HdResult res;
  int mq = 0;
  for (int u = 0; u < m; ++u) {
    auto row = rel.relevant(u);
    if (row.empty()) {
      ++res.users_without_grades;
      continue;
    }
    ++mq;
    std::vector<int> order(row.size());
    for (std::size_t s = 0; s < row.size(); ++s) order[s] = static_cast<int>(s);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      double ga = row[static_cast<std::size_t>(a)].second, gb = row[static_cast<std::size_t>(b)].second;
      if (ga != gb) return ga > gb;
      int ia = row[static_cast<std::size_t>(a)].first, ib = row[static_cast<std::size_t>(b)].first;
      if (!tie_key.empty()) return tie_key[static_cast<std::size_t>(ia)] < tie_key[static_cast<std::size_t>(ib)];
      return ia < ib;
    });
    double gsum = 0.0;
    for (const auto& [i, g] : row) gsum += g;
    auto& r = ref[static_cast<std::size_t>(u)];
    int d = std::min<int>(static_cast<int>(row.size()), k);
    r.reserve(static_cast<std::size_t>(d));
    for (int p = 0; p < d; ++p) {
      const auto& [i, g] = row[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])];
      r.push_back(i);
      qbar[static_cast<std::size_t>(p)] += g / gsum;
    }
  }
  if (mq > 0)
    for (double& q : qbar) q /= static_cast<double>(mq);

  std::vector<int> pos(static_cast<std::size_t>(n), 0);
  std::vector<long long> pos_mark(static_cast<std::size_t>(n), -1);
  long long epoch = 0;
  std::vector<double> clicks(static_cast<std::size_t>(k), 0.0);
  std::vector<double> cstar(static_cast<std::size_t>(k), 0.0);
  std::vector<double> cbar(static_cast<std::size_t>(k), 0.0);

  for (int w = 0; w < W; ++w) {
    std::fill(cbar.begin(), cbar.end(), 0.0);
    int mc = 0;
    for (int u = 0; u < m; ++u) {
      const auto& r = ref[static_cast<std::size_t>(u)];
      if (r.empty()) continue;
      const RankedList& l = run.list(u, w);
      int d = std::min(l.depth(), k);
      ++epoch;
      double survive = 1.0;
      double decay = 1.0;
      double csum = 0.0;
      for (int p = 0; p < d; ++p) {
        int i = l.items[static_cast<std::size_t>(p)];
        pos[static_cast<std::size_t>(i)] = p;
        pos_mark[static_cast<std::size_t>(i)] = epoch;
        decay *= gamma;  // gamma^(p+1): patience times position decay
        double g = rel.grade(u, i);
        double c = g * decay * survive;
        clicks[static_cast<std::size_t>(p)] = c;
        csum += c;
        survive *= 1.0 - g;
      }
      if (csum <= 0.0) {
        ++res.excluded_lists;
        continue;
      }
      double cssum = 0.0;
      for (std::size_t p = 0; p < r.size(); ++p) {
        int i = r[p];
        double v = 0.0;
        if (pos_mark[static_cast<std::size_t>(i)] == epoch) v = clicks[static_cast<std::size_t>(pos[static_cast<std::size_t>(i)])] / csum;
        cstar[p] = v;
        cssum += v;
      }
      for (std::size_t p = r.size(); p < static_cast<std::size_t>(k); ++p) cstar[p] = 0.0;
      if (cssum <= 0.0) {
        ++res.excluded_lists;
        continue;
      }
      ++mc;
      for (std::size_t p = 0; p < r.size(); ++p) cbar[p] += cstar[p] / cssum;
    }
    if (mc > 0)
      for (double& c : cbar) c /= static_cast<double>(mc);
    res.per_round.push_back(hellinger(qbar, cbar));
  }
  double total = 0.0;
  for (double v : res.per_round) total += v;
  res.value = total / static_cast<double>(W);
  return res;
}

// ---------------------------------------------------------------------------
// Per-item envy of inverse-rank impact.  An item's impact through slot i' is
// the grade-weighted inverse-rank weight summed over the users it is graded
// for; envy is the gap between the best slot and the item's own slot.
// Components are per item.  Range [0, inf), 0 is best.
// ---------------------------------------------------------------------------
inline MetricResult mme(const RunData& run, const RelevanceTable& rel, const JointConfig& cfg) {
  detail::require_joint(run, rel, cfg);
  const int n = rel.num_items();
  auto rows = detail::inverse_rank_rows(run, cfg.k);
  auto by_item = detail::invert_relevance(rel);

  MetricResult res;
  res.components.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<std::pair<int, double>> merged;
  for (int i = 0; i < n; ++i) {
    const auto& owners = by_item[static_cast<std::size_t>(i)];
    if (owners.empty()) continue;
    double own = 0.0, best = 0.0;
    if (owners.size() == 1) {
      const auto& [u, g] = owners[0];
      own = g * detail::row_weight(rows.rows[static_cast<std::size_t>(u)], i);
      best = g * rows.row_max[static_cast<std::size_t>(u)];
    } else {
      merged.clear();
      for (const auto& [u, g] : owners) {
        for (const auto& [it, wv] : rows.rows[static_cast<std::size_t>(u)]) merged.emplace_back(it, g * wv);
      }
      std::sort(merged.begin(), merged.end());
      std::size_t out = 0;
      for (std::size_t j = 0; j < merged.size(); ++j) {
        if (out > 0 && merged[out - 1].first == merged[j].first)
          merged[out - 1].second += merged[j].second;
        else
          merged[out++] = merged[j];
      }
      merged.resize(out);
      for (const auto& [it, v] : merged) {
        best = std::max(best, v);
        if (it == i) own = v;
      }
    }
    res.components[static_cast<std::size_t>(i)] = best - own;
  }
  double total = 0.0;
  for (double c : res.components) total += c;
  res.value = total / static_cast<double>(n);
  return res;
}

// ---------------------------------------------------------------------------
// Fractions of graded items whose own impact clears (exceeds or undershoots)
// a tolerance band around the uniform-exposure impact they would get if every
// ranking slot were shared evenly.  Both fractions are over items with any
// grade; the band makes them disjoint.  Range [0, 1] each; sum <= 1.
// ---------------------------------------------------------------------------
struct IboIwoResult {
  double ibo = 0.0;
  double iwo = 0.0;
  std::vector<int> better_items;
  std::vector<int> worse_items;
  int graded_items = 0;
};

inline IboIwoResult ibo_iwo(const RunData& run, const RelevanceTable& rel, const JointConfig& cfg) {
  detail::require_joint(run, rel, cfg);
  const int m = rel.num_users();
  const int n = rel.num_items();
  auto rows = detail::inverse_rank_rows(run, cfg.k);
  auto by_item = detail::invert_relevance(rel);
  const double hk = detail::harmonic(cfg.k);
  const double tau = cfg.impact_threshold;

  IboIwoResult res;
  for (int i = 0; i < n; ++i) {
    const auto& owners = by_item[static_cast<std::size_t>(i)];
    if (owners.empty()) continue;
    ++res.graded_items;
    double own = 0.0, gsum = 0.0;
    for (const auto& [u, g] : owners) {
      own += g * detail::row_weight(rows.rows[static_cast<std::size_t>(u)], i);
      gsum += g;
    }
    double unif = hk / (static_cast<double>(m) * static_cast<double>(n)) * gsum;
    if (own >= (1.0 + tau) * unif) res.better_items.push_back(i);
    if (own <= (1.0 - tau) * unif) res.worse_items.push_back(i);
  }
  if (res.graded_items == 0) throw UndefinedInputError("no graded items in the universe");
  res.ibo = static_cast<double>(res.better_items.size()) / static_cast<double>(res.graded_items);
  res.iwo = static_cast<double>(res.worse_items.size()) / static_cast<double>(res.graded_items);
  return res;
}

// ---------------------------------------------------------------------------
// Squared gap between geometric top-k exposure and its grade-proportional
// target, averaged over the full user x item grid.  A user's target spreads
// the mass a geometric browse would spend on their graded items across those
// items in proportion to grade.  Components are per user (already divided by
// n).  Range [0, 1], 0 is best.
// ---------------------------------------------------------------------------
namespace detail {
inline double geometric_target_base(int h, double gamma) {
  if (h == 0) return 0.0;
  return (1.0 - std::pow(gamma, static_cast<double>(h))) / ((1.0 - gamma) * static_cast<double>(h));
}
}  // namespace detail

inline MetricResult iif(const RunData& run, const RelevanceTable& rel, const JointConfig& cfg) {
  detail::require_joint(run, rel, cfg);
  const int m = rel.num_users();
  const int n = rel.num_items();
  const int W = run.num_rounds();
  const int k = cfg.k;
  const double gamma = cfg.gamma_iif;

  MetricResult res;
  res.components.assign(static_cast<std::size_t>(m), 0.0);
  std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
  std::vector<int> mark(static_cast<std::size_t>(n), -1);
  std::vector<int> touched;
  for (int u = 0; u < m; ++u) {
    touched.clear();
    for (int w = 0; w < W; ++w) {
      const RankedList& l = run.list(u, w);
      int d = std::min(l.depth(), k);
      double decay = 1.0;
      for (int p = 0; p < d; ++p) {
        int i = l.items[static_cast<std::size_t>(p)];
        if (mark[static_cast<std::size_t>(i)] != u) {
          mark[static_cast<std::size_t>(i)] = u;
          acc[static_cast<std::size_t>(i)] = 0.0;
          touched.push_back(i);
        }
        acc[static_cast<std::size_t>(i)] += decay;  // gamma^p
        decay *= gamma;
      }
    }
    auto row = rel.relevant(u);
    double tb = detail::geometric_target_base(static_cast<int>(row.size()), gamma);
    double sum = 0.0;
    for (const auto& [i, g] : row) {
      if (mark[static_cast<std::size_t>(i)] != u) {
        mark[static_cast<std::size_t>(i)] = u;
        acc[static_cast<std::size_t>(i)] = 0.0;
        touched.push_back(i);
      }
      acc[static_cast<std::size_t>(i)] -= static_cast<double>(W) * g * tb;
    }
    for (int i : touched) {
      double d = acc[static_cast<std::size_t>(i)] / static_cast<double>(W);
      sum += d * d;
    }
    res.components[static_cast<std::size_t>(u)] = sum / static_cast<double>(n);
  }
  double total = 0.0;
  for (double c : res.components) total += c;
  res.value = total / static_cast<double>(m);
  return res;
}

// ---------------------------------------------------------------------------
// Same gap as above but on user-averaged exposure and target per item, so
// user-level over- and under-exposure can cancel.  Components are per item.
// Range [0, 1], 0 is best; never exceeds the user-level variant.
// ---------------------------------------------------------------------------
inline MetricResult aif(const RunData& run, const RelevanceTable& rel, const JointConfig& cfg) {
  detail::require_joint(run, rel, cfg);
  const int m = rel.num_users();
  const int n = rel.num_items();
  const int W = run.num_rounds();
  const int k = cfg.k;
  const double gamma = cfg.gamma_iif;

  std::vector<double> mean_gap(static_cast<std::size_t>(n), 0.0);
  for (int u = 0; u < m; ++u) {
    for (int w = 0; w < W; ++w) {
      const RankedList& l = run.list(u, w);
      int d = std::min(l.depth(), k);
      double decay = 1.0;
      for (int p = 0; p < d; ++p) {
        mean_gap[static_cast<std::size_t>(l.items[static_cast<std::size_t>(p)])] += decay / static_cast<double>(W);
        decay *= gamma;
      }
    }
    auto row = rel.relevant(u);
    double tb = detail::geometric_target_base(static_cast<int>(row.size()), gamma);
    for (const auto& [i, g] : row) mean_gap[static_cast<std::size_t>(i)] -= g * tb;
  }
  MetricResult res;
  res.components.assign(static_cast<std::size_t>(n), 0.0);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double d = mean_gap[static_cast<std::size_t>(i)] / static_cast<double>(m);
    res.components[static_cast<std::size_t>(i)] = d * d;
    total += d * d;
  }
  res.value = total / static_cast<double>(n);
  return res;
}

}  // namespace fairex
