#pragma once

#include <cmath>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairex/errors.hpp"
#include "fairex/fmt.hpp"
#include "fairex/measures.hpp"
#include "fairex/report.hpp"

namespace fairex {

// Rank correlation with tie correction: classifies every pair as concordant,
// discordant, or tied on either side, and normalizes by the geometric mean of
// the non-tied pair counts per side.  Undefined when either side has no
// variation at all.
inline double kendall_tau(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ConfigError("score vectors differ in length");
  if (x.size() < 2) throw UndefinedInputError("rank correlation needs at least 2 observations");
  long long concordant = 0, discordant = 0, tie_x = 0, tie_y = 0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    for (std::size_t b = a + 1; b < x.size(); ++b) {
      double dx = x[a] - x[b];
      double dy = y[a] - y[b];
      if (dx == 0.0 && dy == 0.0) continue;  // tied on both sides, dropped from every count
      if (dx == 0.0)
        ++tie_x;
      else if (dy == 0.0)
        ++tie_y;
      else if ((dx > 0.0) == (dy > 0.0))
        ++concordant;
      else
        ++discordant;
    }
  }
  long long nx = concordant + discordant + tie_x;
  long long ny = concordant + discordant + tie_y;
  if (nx == 0 || ny == 0) throw UndefinedInputError("one score vector is constant; correlation undefined");
  return static_cast<double>(concordant - discordant) /
         std::sqrt(static_cast<double>(nx) * static_cast<double>(ny));
}

// Rows are systems, columns are measures.
struct ScoreTable {
  std::vector<std::string> systems;
  std::vector<Measure> measures;
  std::vector<std::vector<double>> values;  // [system][measure]
};

// Builds the table from reports that must agree on their measure sets.
inline ScoreTable make_score_table(const std::vector<ScoreReport>& reports) {
  if (reports.size() < 2) throw ConfigError("need at least 2 reports to correlate");
  ScoreTable t;
  for (const auto& [m, v] : reports.front().scores) t.measures.push_back(m);
  if (t.measures.empty()) throw ConfigError("reports carry no scores");
  for (const ScoreReport& r : reports) {
    std::vector<Measure> ms;
    for (const auto& [m, v] : r.scores) ms.push_back(m);
    if (ms != t.measures) throw ConfigError("reports disagree on their measure sets");
    t.systems.push_back(r.label);
    std::vector<double> row;
    row.reserve(ms.size());
    for (const auto& [m, v] : r.scores) row.push_back(v);
    t.values.push_back(std::move(row));
  }
  return t;
}

struct CorrelationMatrix {
  std::vector<Measure> measures;
  std::vector<std::vector<double>> tau;  // NaN marks undefined cells
};

// Pairwise rank correlation between measure columns after aligning their
// quality direction (lower-is-better columns are negated), so agreement means
// "both call the same system better".  The diagonal is fixed at 1.
inline CorrelationMatrix correlation_matrix(const ScoreTable& t) {
  if (t.systems.size() < 2) throw ConfigError("need at least 2 systems to correlate");
  std::size_t nm = t.measures.size();
  std::vector<std::vector<double>> cols(nm, std::vector<double>(t.systems.size()));
  for (std::size_t c = 0; c < nm; ++c) {
    double sign = higher_is_better(t.measures[c]) ? 1.0 : -1.0;
    for (std::size_t s = 0; s < t.systems.size(); ++s) cols[c][s] = sign * t.values[s][c];
  }
  CorrelationMatrix out;
  out.measures = t.measures;
  out.tau.assign(nm, std::vector<double>(nm, 0.0));
  for (std::size_t a = 0; a < nm; ++a) {
    out.tau[a][a] = 1.0;
    for (std::size_t b = a + 1; b < nm; ++b) {
      double v;
      try {
        v = kendall_tau(cols[a], cols[b]);
      } catch (const UndefinedInputError&) {
        v = std::numeric_limits<double>::quiet_NaN();
      }
      out.tau[a][b] = v;
      out.tau[b][a] = v;
    }
  }
  return out;
}

// Square CSV: header row of measure names, one row per measure; undefined
// cells print as nan.
inline void write_correlation_csv(std::ostream& out, const CorrelationMatrix& m) {
  out << "measure";
  for (Measure c : m.measures) out << ',' << measure_name(c);
  out << '\n';
  for (std::size_t a = 0; a < m.measures.size(); ++a) {
    out << measure_name(m.measures[a]);
    for (std::size_t b = 0; b < m.measures.size(); ++b) out << ',' << format_double(m.tau[a][b]);
    out << '\n';
  }
}

inline void write_correlation_json(std::ostream& out, const CorrelationMatrix& m,
                                   const std::vector<std::string>& systems) {
  nlohmann::ordered_json j;
  j["systems"] = systems;
  std::vector<std::string> names;
  for (Measure c : m.measures) names.emplace_back(measure_name(c));
  j["measures"] = names;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t a = 0; a < m.measures.size(); ++a) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (std::size_t b = 0; b < m.measures.size(); ++b) {
      if (std::isnan(m.tau[a][b]))
        row.push_back(nullptr);
      else
        row.push_back(m.tau[a][b]);
    }
    rows.push_back(std::move(row));
  }
  j["tau"] = std::move(rows);
  out << j.dump(2) << '\n';
}

}  // namespace fairex
