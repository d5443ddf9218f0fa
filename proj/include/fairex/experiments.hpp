#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "fairex/data.hpp"
#include "fairex/errors.hpp"
#include "fairex/fmt.hpp"
#include "fairex/ids.hpp"
#include "fairex/report.hpp"
#include "fairex/rng.hpp"

namespace fairex {

// ---------------------------------------------------------------------------
// Rank-window evaluation: items at ranks s..s+window-1 of every list are
// re-indexed to ranks 1..window and scored as a run of their own at cutoff
// `window`.  Exposes how measure values drift down the ranking.  Graded items
// without a rank inside a window leave the pair-disparity computation rather
// than failing it.
// ---------------------------------------------------------------------------
struct WindowedScores {
  int start = 1;  // 1-based rank where the window begins
  ScoreReport report;
};

inline std::vector<WindowedScores> sliding_windows(const RunData& run, const RelevanceTable& rel,
                                                   const EvalConfig& cfg, int window = 5, int num_starts = 5) {
  if (window < 1) throw ConfigError("window must be >= 1");
  if (num_starts < 1) throw ConfigError("need at least one window start");
  int needed = num_starts + window - 1;
  if (run.num_lists() == 0) throw UndefinedInputError("run has no lists");
  if (run.min_depth() < needed)
    throw DepthError("windowed evaluation needs depth >= " + std::to_string(needed) + ", run minimum is " +
                     std::to_string(run.min_depth()));

  EvalConfig wcfg = cfg;
  wcfg.k = window;

  std::vector<WindowedScores> out;
  for (int s = 1; s <= num_starts; ++s) {
    RunData slice(run.num_users(), run.num_items(), run.num_rounds());
    run.for_each_list([&](int u, int w, const RankedList& l) {
      RankedList part;
      part.items.assign(l.items.begin() + (s - 1), l.items.begin() + (s - 1) + window);
      slice.set_list(u, w, std::move(part));
    });
    WindowedScores ws;
    ws.start = s;
    ws.report = evaluate_all(slice, rel, wcfg, all_measures(), "start=" + std::to_string(s),
                             /*ifd_ranked_only=*/true);
    out.push_back(std::move(ws));
  }
  return out;
}

// start,end,measure,value rows.
inline void write_sliding_csv(std::ostream& out, const std::vector<WindowedScores>& windows, int window) {
  out << "start,end,measure,value\n";
  for (const WindowedScores& ws : windows) {
    for (const auto& [m, v] : ws.report.scores)
      out << ws.start << ',' << (ws.start + window - 1) << ',' << measure_name(m) << ',' << format_double(v) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Seeded synthetic run with popularity-skewed rankings.  Item popularity
// follows (index+1)^-skew; each user's full ranking is a noisy sample
// favouring popular items (Gumbel-perturbed log-popularity keys, which also
// serve as the predicted scores), and each user's graded items are drawn the
// same way around the user's own ranking keys.  skew 0 gives uniform random
// rankings.
// ---------------------------------------------------------------------------
struct SyntheticData {
  IdIndex users;
  IdIndex items;
  RunData run;
  RelevanceTable rel;
};

inline SyntheticData synthetic_popularity_run(int m, int n, int k, double skew, std::uint64_t seed,
                                              int graded_per_user = 8, double grade_affinity = 1.0) {
  if (m < 1 || n < 2) throw ConfigError("need at least 1 user and 2 items");
  if (k < 1 || k > n) throw ConfigError("cutoff must lie in [1, item count]");
  if (skew < 0.0) throw ConfigError("skew must be non-negative");
  if (graded_per_user < 1 || graded_per_user > n) throw ConfigError("graded items per user must lie in [1, item count]");

  IdIndex users, items;
  for (int u = 0; u < m; ++u) users.intern("u" + std::to_string(u));
  for (int i = 0; i < n; ++i) items.intern("i" + std::to_string(i));

  RunData run(m, n, 1);
  RelevanceTable rel(m, n);

  std::vector<double> key(static_cast<std::size_t>(n));
  std::vector<int> order(static_cast<std::size_t>(n));
  std::vector<std::pair<double, int>> graded;
  for (int u = 0; u < m; ++u) {
    Rng g(substream_seed(seed, static_cast<std::uint64_t>(u)));
    for (int i = 0; i < n; ++i)
      key[static_cast<std::size_t>(i)] = -skew * std::log(static_cast<double>(i) + 1.0) + draw_gumbel(g);
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      double ka = key[static_cast<std::size_t>(a)], kb = key[static_cast<std::size_t>(b)];
      if (ka != kb) return ka > kb;
      return a < b;
    });
    RankedList l;
    l.items.reserve(static_cast<std::size_t>(n));
    l.scores.reserve(static_cast<std::size_t>(n));
    for (int i : order) {
      l.items.push_back(i);
      l.scores.push_back(key[static_cast<std::size_t>(i)]);
    }
    run.set_list(u, 0, std::move(l));

    graded.clear();
    graded.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      graded.emplace_back(grade_affinity * key[static_cast<std::size_t>(i)] + draw_gumbel(g), i);
    std::sort(graded.begin(), graded.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    // grades decay geometrically along the user's preference order: the
    // merit ordering inside each user's graded set is real rather than an
    // all-tied bucket, most merit mass sits on the first few items, and no
    // grade reaches 1.0, which under a patience-cascade click model would
    // absorb all remaining attention
    std::vector<std::pair<int, double>> chosen;
    double head = 0.45;
    for (int j = 0; j < graded_per_user; ++j) {
      chosen.emplace_back(graded[static_cast<std::size_t>(j)].second, 0.35 + head);
      head *= 0.75;
    }
    std::sort(chosen.begin(), chosen.end());
    for (const auto& [i, tier] : chosen) rel.add(u, i, tier);
  }
  rel.finalize();
  return SyntheticData{std::move(users), std::move(items), std::move(run), std::move(rel)};
}

// ---------------------------------------------------------------------------
// Controlled trajectory from one shared ranking to fully personalized,
// fully covered rankings.  Items are partitioned into per-user blocks of
// size k; every user starts from the block of one seed-drawn user, and step
// t plants each user's own t-th block item at rank k-t+1.  Grades are static:
// each user's block is their graded set.  After k steps every list is that
// user's own block, so quality saturates, exposure spreads to every item,
// and the per-step growth of covered items is exactly m-1.
// ---------------------------------------------------------------------------
struct InsertionStep {
  int step = 0;
  ScoreReport report;
};

struct InsertionOutcome {
  int m = 0;
  int n = 0;
  int k = 0;
  std::uint64_t seed = 0;
  std::vector<InsertionStep> steps;
};

inline InsertionOutcome insertion_sim(const EvalConfig& cfg, int m = 1000, int n = 10000,
                                      std::uint64_t seed = 42) {
  const int k = cfg.k;
  if (m < 1) throw ConfigError("need at least 1 user");
  if (n < k * m) throw ConfigError("need at least cutoff * users items, got " + std::to_string(n));

  Rng g(seed);
  int seed_user = draw_below(g, m);
  std::vector<int> perm = permutation(n, g);

  auto block = [&](int u) { return std::span<const int>(perm).subspan(static_cast<std::size_t>(u) * k, k); };
  std::span<const int> shared = block(seed_user);

  std::vector<std::tuple<int, int, double>> triples;
  triples.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(k));
  for (int u = 0; u < m; ++u) {
    for (int i : block(u)) triples.emplace_back(u, i, 1.0);
  }
  RelevanceTable rel = RelevanceTable::from_triples(m, n, triples);

  InsertionOutcome out;
  out.m = m;
  out.n = n;
  out.k = k;
  out.seed = seed;

  std::vector<char> in_top(static_cast<std::size_t>(n), 0);
  for (int t = 0; t <= k; ++t) {
    RunData run(m, n, 1);
    for (int u = 0; u < m; ++u) {
      RankedList l;
      l.items.reserve(static_cast<std::size_t>(n));
      for (int p = 0; p < k; ++p) l.items.push_back(shared[static_cast<std::size_t>(p)]);
      if (u != seed_user) {
        for (int j = 1; j <= t; ++j) l.items[static_cast<std::size_t>(k - j)] = block(u)[static_cast<std::size_t>(j - 1)];
      }
      for (int p = 0; p < k; ++p) in_top[static_cast<std::size_t>(l.items[static_cast<std::size_t>(p)])] = 1;
      for (int i = 0; i < n; ++i)
        if (!in_top[static_cast<std::size_t>(i)]) l.items.push_back(i);
      for (int p = 0; p < k; ++p) in_top[static_cast<std::size_t>(l.items[static_cast<std::size_t>(p)])] = 0;
      run.set_list(u, 0, std::move(l));
    }
    InsertionStep st;
    st.step = t;
    st.report = evaluate_all(run, rel, cfg, all_measures(), "step=" + std::to_string(t));
    out.steps.push_back(std::move(st));
  }
  return out;
}

// step,measure,value rows.
inline void write_insertion_csv(std::ostream& out, const InsertionOutcome& traj) {
  out << "step,measure,value\n";
  for (const InsertionStep& st : traj.steps) {
    for (const auto& [m, v] : st.report.scores)
      out << st.step << ',' << measure_name(m) << ',' << format_double(v) << '\n';
  }
}

}  // namespace fairex
