#pragma once

#include <cstdint>
#include <fstream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fairex/data.hpp"
#include "fairex/errors.hpp"
#include "fairex/fairness_metrics.hpp"
#include "fairex/fmt.hpp"
#include "fairex/joint_metrics.hpp"
#include "fairex/measures.hpp"
#include "fairex/relevance_metrics.hpp"

namespace fairex {

struct EvalConfig {
  int k = 10;
  int k_prime = 25;
  double gamma_hd = 0.9;
  double gamma_iif = 0.8;
  double impact_threshold = 0.10;
  std::uint64_t seed = 42;
};

inline JointConfig joint_config(const EvalConfig& c) {
  JointConfig j;
  j.k = c.k;
  j.gamma_hd = c.gamma_hd;
  j.gamma_iif = c.gamma_iif;
  j.impact_threshold = c.impact_threshold;
  return j;
}

struct Diagnostics {
  int users = 0;
  int items = 0;
  int rounds = 0;
  int lists = 0;
  int users_without_graded_items = 0;
  int users_without_lists = 0;
  int excluded_click_lists = 0;  // (user, round) pairs the click-distance average had to skip
  int run_only_items = 0;        // items merged into the universe from the run side
  std::vector<std::string> warnings;
};

struct ScoreReport {
  std::string label;
  EvalConfig config;
  std::vector<std::pair<Measure, double>> scores;  // canonical order, each measure at most once
  Diagnostics diag;

  bool has(Measure m) const {
    for (const auto& [mm, v] : scores)
      if (mm == m) return true;
    return false;
  }

  double score(Measure m) const {
    for (const auto& [mm, v] : scores)
      if (mm == m) return v;
    throw ConfigError(std::string("measure ") + std::string(measure_name(m)) + " not present in report");
  }
};

// Computes the selected measures over one aligned run + relevance pair.
// The joint-measure flag set (windowed rank handling, tie-breaks) is derived
// from the config; selection defaults to all twenty.
inline ScoreReport evaluate_all(const RunData& run, const RelevanceTable& rel, const EvalConfig& cfg,
                                std::vector<Measure> selection = all_measures(), std::string label = "",
                                bool ifd_ranked_only = false) {
  if (selection.empty()) throw ConfigError("no measures selected");
  bool want[kNumMeasures] = {};
  for (Measure m : selection) want[static_cast<int>(m)] = true;

  ScoreReport rep;
  rep.label = std::move(label);
  rep.config = cfg;
  rep.diag.users = rel.num_users();
  rep.diag.items = rel.num_items();
  rep.diag.rounds = run.num_rounds();
  rep.diag.lists = run.num_lists();
  for (int u = 0; u < rel.num_users(); ++u) {
    bool any = false;
    for (int w = 0; w < run.num_rounds() && !any; ++w) any = run.has_list(u, w);
    if (!any) ++rep.diag.users_without_lists;
  }
  if (rep.diag.users_without_lists > 0)
    rep.diag.warnings.push_back(std::to_string(rep.diag.users_without_lists) +
                                " users have no recommendations and score zero on quality measures");

  JointConfig jc = joint_config(cfg);
  jc.ifd_ranked_only = ifd_ranked_only;

  double vals[kNumMeasures] = {};
  auto anyof = [&](std::initializer_list<Measure> ms) {
    for (Measure m : ms)
      if (want[static_cast<int>(m)]) return true;
    return false;
  };

  if (anyof({Measure::HR, Measure::MRR, Measure::P, Measure::MAP, Measure::R, Measure::NDCG})) {
    RelScores rs = rel_eval(run, rel, cfg.k);
    vals[static_cast<int>(Measure::HR)] = rs.hr;
    vals[static_cast<int>(Measure::MRR)] = rs.mrr;
    vals[static_cast<int>(Measure::P)] = rs.precision;
    vals[static_cast<int>(Measure::MAP)] = rs.map;
    vals[static_cast<int>(Measure::R)] = rs.recall;
    vals[static_cast<int>(Measure::NDCG)] = rs.ndcg;
    rep.diag.users_without_graded_items = rs.skipped_users;
  }
  if (anyof({Measure::Jain, Measure::QF, Measure::Ent, Measure::FSat, Measure::Gini})) {
    require_depth(run, cfg.k);
    ExposureVector x = exposure_counts(run, cfg.k);
    if (want[static_cast<int>(Measure::Jain)]) vals[static_cast<int>(Measure::Jain)] = jain(x);
    if (want[static_cast<int>(Measure::QF)]) vals[static_cast<int>(Measure::QF)] = coverage(x);
    if (want[static_cast<int>(Measure::Ent)]) vals[static_cast<int>(Measure::Ent)] = exposure_entropy(x);
    if (want[static_cast<int>(Measure::FSat)]) vals[static_cast<int>(Measure::FSat)] = fsat(x);
    if (want[static_cast<int>(Measure::Gini)]) vals[static_cast<int>(Measure::Gini)] = gini(x);
  }
  if (anyof({Measure::IBO, Measure::IWO})) {
    IboIwoResult r = ibo_iwo(run, rel, jc);
    vals[static_cast<int>(Measure::IBO)] = r.ibo;
    vals[static_cast<int>(Measure::IWO)] = r.iwo;
  }
  if (want[static_cast<int>(Measure::IAA)]) vals[static_cast<int>(Measure::IAA)] = iaa(run, rel, jc).value;
  if (want[static_cast<int>(Measure::IFD_div)]) vals[static_cast<int>(Measure::IFD_div)] = ifd_div(run, rel, jc).value;
  if (want[static_cast<int>(Measure::IFD_mult)])
    vals[static_cast<int>(Measure::IFD_mult)] = ifd_mult(run, rel, jc).value;
  if (want[static_cast<int>(Measure::HD)]) {
    HdResult r = hd(run, rel, jc);
    vals[static_cast<int>(Measure::HD)] = r.value;
    rep.diag.excluded_click_lists = r.excluded_lists;
  }
  if (want[static_cast<int>(Measure::MME)]) vals[static_cast<int>(Measure::MME)] = mme(run, rel, jc).value;
  if (want[static_cast<int>(Measure::IIF)]) vals[static_cast<int>(Measure::IIF)] = iif(run, rel, jc).value;
  if (want[static_cast<int>(Measure::AIF)]) vals[static_cast<int>(Measure::AIF)] = aif(run, rel, jc).value;

  for (Measure m : all_measures()) {
    if (want[static_cast<int>(m)]) rep.scores.emplace_back(m, vals[static_cast<int>(m)]);
  }
  return rep;
}

// measure,value,higher_is_better rows in canonical order, full precision.
inline void write_report_csv(std::ostream& out, const ScoreReport& rep) {
  out << "measure,value,higher_is_better\n";
  for (const auto& [m, v] : rep.scores)
    out << measure_name(m) << ',' << format_double(v) << ',' << (higher_is_better(m) ? "true" : "false") << '\n';
}

inline nlohmann::ordered_json report_to_json(const ScoreReport& rep) {
  nlohmann::ordered_json j;
  j["label"] = rep.label;
  j["config"] = {{"k", rep.config.k},
                 {"k_prime", rep.config.k_prime},
                 {"gamma_hd", rep.config.gamma_hd},
                 {"gamma_iif", rep.config.gamma_iif},
                 {"impact_threshold", rep.config.impact_threshold},
                 {"seed", rep.config.seed}};
  nlohmann::ordered_json scores, orientation;
  for (const auto& [m, v] : rep.scores) {
    scores[std::string(measure_name(m))] = v;
    orientation[std::string(measure_name(m))] = higher_is_better(m) ? "higher" : "lower";
  }
  j["scores"] = std::move(scores);
  j["orientation"] = std::move(orientation);
  j["diagnostics"] = {{"users", rep.diag.users},
                      {"items", rep.diag.items},
                      {"rounds", rep.diag.rounds},
                      {"lists", rep.diag.lists},
                      {"users_without_graded_items", rep.diag.users_without_graded_items},
                      {"users_without_lists", rep.diag.users_without_lists},
                      {"excluded_click_lists", rep.diag.excluded_click_lists},
                      {"run_only_items", rep.diag.run_only_items},
                      {"warnings", rep.diag.warnings}};
  return j;
}

inline void write_report_json(std::ostream& out, const ScoreReport& rep) {
  out << report_to_json(rep).dump(2) << '\n';
}

// Reads back a JSON report; only label, config, and scores are needed for
// downstream correlation work.
inline ScoreReport read_report_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("invalid JSON in " + path + ": " + e.what());
  }
  ScoreReport rep;
  try {
    rep.label = j.value("label", std::string{});
    if (j.contains("config")) {
      const auto& c = j["config"];
      rep.config.k = c.value("k", rep.config.k);
      rep.config.k_prime = c.value("k_prime", rep.config.k_prime);
      rep.config.gamma_hd = c.value("gamma_hd", rep.config.gamma_hd);
      rep.config.gamma_iif = c.value("gamma_iif", rep.config.gamma_iif);
      rep.config.impact_threshold = c.value("impact_threshold", rep.config.impact_threshold);
      rep.config.seed = c.value("seed", rep.config.seed);
    }
    if (!j.contains("scores") || !j["scores"].is_object())
      throw ParseError("report " + path + " has no scores object");
    for (Measure m : all_measures()) {
      std::string name(measure_name(m));
      if (j["scores"].contains(name)) rep.scores.emplace_back(m, j["scores"][name].get<double>());
    }
    for (const auto& [key, val] : j["scores"].items()) {
      if (!measure_from_name(key)) throw ParseError("report " + path + " names unknown measure '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed report " + path + ": " + e.what());
  }
  return rep;
}

}  // namespace fairex
