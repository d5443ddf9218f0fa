#pragma once

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "fairex/data.hpp"
#include "fairex/errors.hpp"
#include "fairex/fmt.hpp"
#include "fairex/ids.hpp"

namespace fairex {

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline bool try_parse_double(std::string_view sv, double& out) {
  const char* first = sv.data();
  const char* last = sv.data() + sv.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last && !sv.empty();
}

inline bool try_parse_ll(std::string_view sv, long long& out) {
  const char* first = sv.data();
  const char* last = sv.data() + sv.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last && !sv.empty();
}

inline double parse_double_field(std::string_view sv, const char* what, int line_no) {
  double v;
  if (!try_parse_double(sv, v))
    throw ParseError(std::string("cannot parse ") + what + " '" + std::string(sv) + "' at line " +
                     std::to_string(line_no));
  return v;
}

inline long long parse_ll_field(std::string_view sv, const char* what, int line_no) {
  long long v;
  if (!try_parse_ll(sv, v))
    throw ParseError(std::string("cannot parse ") + what + " '" + std::string(sv) + "' at line " +
                     std::to_string(line_no));
  return v;
}

inline std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  return in;
}

inline bool blank(std::string_view sv) {
  return sv.find_first_not_of(" \t\r") == std::string_view::npos;
}

inline std::string_view strip_cr(std::string_view sv) {
  if (!sv.empty() && sv.back() == '\r') sv.remove_suffix(1);
  return sv;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Graded relevance (qrels): TSV rows  user<TAB>item<TAB>grade,  grade in
// [0, 1].  Absent pairs are grade 0; an explicit grade-0 row is accepted and
// equivalent to absence.  An optional header line is skipped when its grade
// field is not numeric.
// ---------------------------------------------------------------------------
inline RelevanceTable load_qrels_into(const std::string& path, IdIndex& users, IdIndex& items) {
  std::ifstream in = detail::open_or_throw(path);
  std::vector<std::tuple<int, int, double>> rows;
  std::unordered_set<long long> seen;
  std::string line;
  int line_no = 0;
  bool first_data_candidate = true;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = detail::strip_cr(line);
    if (detail::blank(sv)) continue;
    auto fields = detail::split_fields(sv, '\t');
    if (fields.size() != 3)
      throw SchemaError("expected 3 tab-separated fields at line " + std::to_string(line_no) + ", got " +
                        std::to_string(fields.size()));
    if (first_data_candidate) {
      first_data_candidate = false;
      double probe;
      if (!detail::try_parse_double(fields[2], probe)) continue;  // header line
    }
    double grade = detail::parse_double_field(fields[2], "grade", line_no);
    if (!(grade >= 0.0 && grade <= 1.0))
      throw ParseError("grade " + format_double(grade) + " outside [0, 1] at line " + std::to_string(line_no));
    int u = users.intern(std::string(fields[0]));
    int i = items.intern(std::string(fields[1]));
    long long key = static_cast<long long>(u) * (1ll << 31) + i;
    if (!seen.insert(key).second)
      throw ParseError("duplicate grade for user '" + std::string(fields[0]) + "', item '" + std::string(fields[1]) +
                       "' at line " + std::to_string(line_no));
    rows.emplace_back(u, i, grade);
  }
  RelevanceTable rel(users.size(), items.size());
  for (const auto& [u, i, g] : rows) rel.add(u, i, g);
  rel.finalize();
  return rel;
}

// ---------------------------------------------------------------------------
// Run files: TSV rows  user<TAB>item<TAB>round<TAB>rank[<TAB>score].
// Ranks are 1-based and contiguous per (user, round); an empty round field
// defaults to 1; the score field may be empty or missing.  Within one list,
// either every row carries a score or none does.
// ---------------------------------------------------------------------------
struct RunLoadStats {
  int new_users = 0;  // users first seen in this run file
  int new_items = 0;
};

inline RunData load_run_into(const std::string& path, IdIndex& users, IdIndex& items,
                             RunLoadStats* stats = nullptr) {
  std::ifstream in = detail::open_or_throw(path);
  int users_before = users.size();
  int items_before = items.size();

  struct Row {
    int item;
    int rank;
    double score;
    bool has_score;
    int line_no;
  };
  std::map<std::pair<int, int>, std::vector<Row>> lists;  // (user, round-1) -> rows
  int max_round = 1;

  std::string line;
  int line_no = 0;
  bool first_data_candidate = true;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = detail::strip_cr(line);
    if (detail::blank(sv)) continue;
    auto fields = detail::split_fields(sv, '\t');
    if (fields.size() != 4 && fields.size() != 5)
      throw SchemaError("expected 4 or 5 tab-separated fields at line " + std::to_string(line_no) + ", got " +
                        std::to_string(fields.size()));
    if (first_data_candidate) {
      first_data_candidate = false;
      long long probe;
      if (!detail::try_parse_ll(fields[3], probe)) continue;  // header line
    }
    long long round = 1;
    if (!fields[2].empty()) round = detail::parse_ll_field(fields[2], "round", line_no);
    if (round < 1) throw ParseError("round must be >= 1 at line " + std::to_string(line_no));
    long long rank = detail::parse_ll_field(fields[3], "rank", line_no);
    if (rank < 1) throw ParseError("rank must be >= 1 at line " + std::to_string(line_no));
    Row row{};
    row.rank = static_cast<int>(rank);
    row.line_no = line_no;
    row.has_score = fields.size() == 5 && !fields[4].empty();
    if (row.has_score) row.score = detail::parse_double_field(fields[4], "score", line_no);
    int u = users.intern(std::string(fields[0]));
    row.item = items.intern(std::string(fields[1]));
    max_round = std::max(max_round, static_cast<int>(round));
    lists[{u, static_cast<int>(round) - 1}].push_back(row);
  }

  RunData run(users.size(), items.size(), max_round);
  for (auto& [slot, rows] : lists) {
    auto [u, w] = slot;
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.rank < b.rank; });
    RankedList rl;
    rl.items.reserve(rows.size());
    bool any_score = false, all_score = true;
    for (std::size_t p = 0; p < rows.size(); ++p) {
      const Row& row = rows[p];
      if (row.rank != static_cast<int>(p) + 1) {
        std::string what = row.rank == static_cast<int>(p) ? "duplicate rank " : "rank gap before rank ";
        throw StructuralError(what + std::to_string(row.rank) + " for user '" + users.name(u) + "', round " +
                              std::to_string(w + 1) + " (line " + std::to_string(row.line_no) + ")");
      }
      rl.items.push_back(row.item);
      any_score |= row.has_score;
      all_score &= row.has_score;
    }
    if (any_score && !all_score)
      throw StructuralError("list for user '" + users.name(u) + "', round " + std::to_string(w + 1) +
                            " carries scores on some rows only");
    if (any_score) {
      rl.scores.reserve(rows.size());
      for (const Row& row : rows) rl.scores.push_back(row.score);
    }
    try {
      run.set_list(u, w, std::move(rl));
    } catch (const StructuralError& e) {
      throw StructuralError(std::string(e.what()) + " (user '" + users.name(u) + "')");
    }
  }
  if (stats) {
    stats->new_users = users.size() - users_before;
    stats->new_items = items.size() - items_before;
  }
  return run;
}

struct RunFile {
  IdIndex users;
  IdIndex items;
  RunData run;
};

inline RunFile load_run(const std::string& path) {
  IdIndex users, items;
  RunData run = load_run_into(path, users, items);
  return RunFile{std::move(users), std::move(items), std::move(run)};
}

inline void save_run(std::ostream& out, const RunData& run, const IdIndex& users, const IdIndex& items) {
  for (int u = 0; u < run.num_users(); ++u) {
    for (int w = 0; w < run.num_rounds(); ++w) {
      const RankedList& l = run.list(u, w);
      for (int p = 0; p < l.depth(); ++p) {
        out << users.name(u) << '\t' << items.name(l.items[static_cast<std::size_t>(p)]) << '\t' << (w + 1) << '\t'
            << (p + 1);
        if (l.scored()) out << '\t' << format_double(l.scores[static_cast<std::size_t>(p)]);
        out << '\n';
      }
    }
  }
}

inline void save_qrels(std::ostream& out, const RelevanceTable& rel, const IdIndex& users, const IdIndex& items) {
  for (int u = 0; u < rel.num_users(); ++u) {
    for (const auto& [i, g] : rel.relevant(u)) {
      out << users.name(u) << '\t' << items.name(i) << '\t' << format_double(g) << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// Cross-checks between a run and a relevance table sharing one id space.
// Reporting only; nothing here throws on findings.
// ---------------------------------------------------------------------------
struct ValidationReport {
  int rel_users = 0;
  int rel_items = 0;
  int run_users = 0;  // may exceed rel_users when the run mentions unknown users
  int run_items = 0;
  int num_rounds = 0;
  int num_lists = 0;
  int min_depth = 0;
  int max_depth = 0;
  int run_only_items = 0;
  std::vector<int> unknown_users;       // run user indices outside the relevance universe
  std::vector<int> users_without_lists; // relevance users with no list in any round
};

inline ValidationReport validate(const RunData& run, const RelevanceTable& rel) {
  ValidationReport r;
  r.rel_users = rel.num_users();
  r.rel_items = rel.num_items();
  r.run_users = run.num_users();
  r.run_items = run.num_items();
  r.num_rounds = run.num_rounds();
  r.num_lists = run.num_lists();
  r.min_depth = run.min_depth();
  r.max_depth = run.max_depth();
  r.run_only_items = std::max(0, run.num_items() - rel.num_items());
  for (int u = rel.num_users(); u < run.num_users(); ++u) {
    for (int w = 0; w < run.num_rounds(); ++w) {
      if (run.has_list(u, w)) {
        r.unknown_users.push_back(u);
        break;
      }
    }
  }
  for (int u = 0; u < rel.num_users(); ++u) {
    bool any = false;
    if (u < run.num_users()) {
      for (int w = 0; w < run.num_rounds() && !any; ++w) any = run.has_list(u, w);
    }
    if (!any) r.users_without_lists.push_back(u);
  }
  return r;
}

// Widens both sides to the shared item universe.  Unknown users in the run are
// a hard error for joint evaluation; run-only items become grade-0 items.
// Returns the number of run-only items merged in.
inline int align_universes(RunData& run, RelevanceTable& rel) {
  if (run.num_users() > rel.num_users()) {
    ValidationReport v = validate(run, rel);
    if (!v.unknown_users.empty())
      throw StructuralError("run contains " + std::to_string(v.unknown_users.size()) +
                            " users absent from the relevance table");
  }
  int merged = 0;
  if (run.num_items() > rel.num_items()) {
    merged = run.num_items() - rel.num_items();
    rel.extend_items(run.num_items());
  } else if (rel.num_items() > run.num_items()) {
    run.extend_items(rel.num_items());
  }
  return merged;
}

// ---------------------------------------------------------------------------
// Raw interaction logs for preprocessing.  Column positions are declared, not
// guessed; rating and timestamp columns are optional.
// ---------------------------------------------------------------------------
struct InteractionSchema {
  char delimiter = '\t';
  int user_col = 0;
  int item_col = 1;
  int rating_col = -1;     // -1: absent
  int timestamp_col = -1;  // -1: absent
  bool has_header = false;
  bool has_rating_range = false;
  double rating_min = 0.0;
  double rating_max = 0.0;
};

struct Interaction {
  std::string user;
  std::string item;
  double rating = 0.0;
  bool has_rating = false;
  long long timestamp = 0;
  bool has_timestamp = false;
};

// Loads and deduplicates: one row per (user, item), the most recent timestamp
// wins; rows with equal or missing timestamps defer to file order (last row
// wins).  Kept rows stay at their first-occurrence position.
inline std::vector<Interaction> load_interactions(const std::string& path, const InteractionSchema& schema) {
  int max_col = std::max({schema.user_col, schema.item_col, schema.rating_col, schema.timestamp_col});
  if (schema.user_col < 0 || schema.item_col < 0) throw ConfigError("user and item columns are required");
  if (schema.has_rating_range && !(schema.rating_min < schema.rating_max))
    throw ConfigError("declared rating range is empty");
  std::ifstream in = detail::open_or_throw(path);
  std::vector<Interaction> out;
  std::map<std::pair<std::string, std::string>, std::size_t> slot_of;
  std::string line;
  int line_no = 0;
  bool skip_header = schema.has_header;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = detail::strip_cr(line);
    if (detail::blank(sv)) continue;
    if (skip_header) {
      skip_header = false;
      continue;
    }
    auto fields = detail::split_fields(sv, schema.delimiter);
    if (static_cast<int>(fields.size()) <= max_col)
      throw SchemaError("line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                        " fields, schema needs at least " + std::to_string(max_col + 1));
    Interaction x;
    x.user = std::string(fields[static_cast<std::size_t>(schema.user_col)]);
    x.item = std::string(fields[static_cast<std::size_t>(schema.item_col)]);
    if (x.user.empty() || x.item.empty())
      throw ParseError("empty user or item field at line " + std::to_string(line_no));
    if (schema.rating_col >= 0) {
      std::string_view f = fields[static_cast<std::size_t>(schema.rating_col)];
      if (!f.empty()) {
        x.rating = detail::parse_double_field(f, "rating", line_no);
        x.has_rating = true;
        if (schema.has_rating_range && !(x.rating >= schema.rating_min && x.rating <= schema.rating_max))
          throw ParseError("rating " + format_double(x.rating) + " outside declared range at line " +
                           std::to_string(line_no));
      }
    }
    if (schema.timestamp_col >= 0) {
      std::string_view f = fields[static_cast<std::size_t>(schema.timestamp_col)];
      if (!f.empty()) {
        x.timestamp = detail::parse_ll_field(f, "timestamp", line_no);
        x.has_timestamp = true;
      }
    }
    auto key = std::make_pair(x.user, x.item);
    auto it = slot_of.find(key);
    if (it == slot_of.end()) {
      slot_of.emplace(std::move(key), out.size());
      out.push_back(std::move(x));
    } else {
      Interaction& old = out[it->second];
      bool keep_old = old.has_timestamp && x.has_timestamp && x.timestamp < old.timestamp;
      if (!keep_old) old = std::move(x);
    }
  }
  return out;
}

}  // namespace fairex
