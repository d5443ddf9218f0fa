// fairex: fairness and relevance evaluation for recommender rankings.
//
// Subcommands: eval, rerank, correlate, sliding, insertion, generate.
// Exit codes: 0 success, 1 computation error, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairex/fairex.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOpts {
  fairex::EvalConfig cfg;
  std::string config_path;
  std::string format = "json";
  std::string out;
  std::string measures;
  std::string label;
};

// Tracks which flags the user actually set so a config file can fill the
// rest: flags beat config beats defaults.
struct FlagPresence {
  bool k = false, k_prime = false, gamma_hd = false, gamma_iif = false, threshold = false, seed = false;
};

void add_config_flags(CLI::App* cmd, CommonOpts& o, FlagPresence& p) {
  cmd->add_option("--k", o.cfg.k, "evaluation cutoff")->check(CLI::PositiveNumber)
      ->each([&p](const std::string&) { p.k = true; });
  cmd->add_option("--k-prime", o.cfg.k_prime, "re-ranking candidate cutoff")
      ->check(CLI::PositiveNumber)
      ->each([&p](const std::string&) { p.k_prime = true; });
  cmd->add_option("--gamma-hd", o.cfg.gamma_hd, "click-model patience decay")
      ->each([&p](const std::string&) { p.gamma_hd = true; });
  cmd->add_option("--gamma-iif", o.cfg.gamma_iif, "exposure decay for squared-gap measures")
      ->each([&p](const std::string&) { p.gamma_iif = true; });
  cmd->add_option("--impact-threshold", o.cfg.impact_threshold, "tolerance band around uniform impact")
      ->each([&p](const std::string&) { p.threshold = true; });
  cmd->add_option("--seed", o.cfg.seed, "random seed")->each([&p](const std::string&) { p.seed = true; });
  cmd->add_option("--config", o.config_path, "JSON config file (flags take precedence)");
}

void apply_config_file(CommonOpts& o, const FlagPresence& p) {
  if (o.config_path.empty()) return;
  std::ifstream in(o.config_path);
  if (!in) throw fairex::ConfigError("cannot open file: " + o.config_path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw fairex::ParseError("invalid JSON in " + o.config_path + ": " + e.what());
  }
  try {
    if (!p.k && j.contains("k")) o.cfg.k = j["k"].get<int>();
    if (!p.k_prime && j.contains("k_prime")) o.cfg.k_prime = j["k_prime"].get<int>();
    if (!p.gamma_hd && j.contains("gamma_hd")) o.cfg.gamma_hd = j["gamma_hd"].get<double>();
    if (!p.gamma_iif && j.contains("gamma_iif")) o.cfg.gamma_iif = j["gamma_iif"].get<double>();
    if (!p.threshold && j.contains("impact_threshold")) o.cfg.impact_threshold = j["impact_threshold"].get<double>();
    if (!p.seed && j.contains("seed")) o.cfg.seed = j["seed"].get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw fairex::ParseError("bad value in " + o.config_path + ": " + e.what());
  }
}

std::vector<fairex::Measure> parse_measures(const std::string& arg) {
  if (arg.empty()) return fairex::all_measures();
  std::vector<fairex::Measure> out;
  std::size_t start = 0;
  while (start <= arg.size()) {
    std::size_t pos = arg.find(',', start);
    std::string name = arg.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
    if (!name.empty()) {
      auto m = fairex::measure_from_name(name);
      if (!m) {
        std::string valid;
        for (fairex::Measure mm : fairex::all_measures()) {
          if (!valid.empty()) valid += ", ";
          valid += std::string(fairex::measure_name(mm));
        }
        throw fairex::ConfigError("unknown measure '" + name + "'; valid names: " + valid);
      }
      out.push_back(*m);
    }
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (out.empty()) throw fairex::ConfigError("no measures selected");
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fairex::ConfigError("cannot write file: " + path);
  out << content;
}

std::string stem_of(const std::string& path) {
  fs::path p(path);
  std::string s = p.stem().string();
  return s.empty() ? path : s;
}

// eval writes both formats when no explicit --format was chosen and --out is
// given; a single format otherwise.
int cmd_eval(const CommonOpts& o, bool format_given, const std::string& run_path, const std::string& qrels_path) {
  fairex::IdIndex users, items;
  fairex::RelevanceTable rel = fairex::load_qrels_into(qrels_path, users, items);
  fairex::RunLoadStats stats;
  fairex::RunData run = fairex::load_run_into(run_path, users, items, &stats);
  if (stats.new_users > 0) {
    fairex::ValidationReport v = fairex::validate(run, rel);
    std::string examples;
    for (std::size_t j = 0; j < v.unknown_users.size() && j < 5; ++j) {
      if (!examples.empty()) examples += ", ";
      examples += "'" + users.name(v.unknown_users[j]) + "'";
    }
    throw fairex::StructuralError("run contains " + std::to_string(stats.new_users) +
                                  " users absent from the qrels (e.g. " + examples + ")");
  }
  int merged = fairex::align_universes(run, rel);
  std::string label = o.label.empty() ? stem_of(run_path) : o.label;
  fairex::ScoreReport rep = fairex::evaluate_all(run, rel, o.cfg, parse_measures(o.measures), label);
  rep.diag.run_only_items = merged;
  if (merged > 0)
    rep.diag.warnings.push_back(std::to_string(merged) + " run-only items joined the universe with grade 0");
  for (const std::string& w : rep.diag.warnings) std::cerr << "warning: " << w << '\n';

  std::ostringstream json_buf, csv_buf;
  fairex::write_report_json(json_buf, rep);
  fairex::write_report_csv(csv_buf, rep);
  if (o.out.empty()) {
    std::cout << (o.format == "csv" ? csv_buf.str() : json_buf.str());
    return 0;
  }
  if (format_given) {
    write_file(o.out, o.format == "csv" ? csv_buf.str() : json_buf.str());
    return 0;
  }
  fs::path base(o.out);
  fs::path dir = base.parent_path();
  std::string stem = base.extension() == ".json" || base.extension() == ".csv" ? base.stem().string()
                                                                               : base.filename().string();
  fs::path json_path = dir / (stem + ".json");
  fs::path csv_path = dir / (stem + ".csv");
  write_file(json_path.string(), json_buf.str());
  write_file(csv_path.string(), csv_buf.str());
  return 0;
}

int cmd_rerank(const CommonOpts& o, const std::string& run_path) {
  fairex::RunFile rf = fairex::load_run(run_path);
  fairex::RerankOutcome res = fairex::combmnz_rerank(rf.run, o.cfg.k_prime, o.cfg.k);
  if (res.short_lists > 0)
    std::cerr << "warning: " << res.short_lists << " lists offered fewer than " << o.cfg.k_prime << " candidates\n";
  std::ostringstream buf;
  fairex::save_run(buf, res.run, rf.users, rf.items);
  if (o.out.empty())
    std::cout << buf.str();
  else
    write_file(o.out, buf.str());
  return 0;
}

int cmd_correlate(const CommonOpts& o, const std::vector<std::string>& report_paths) {
  if (report_paths.size() < 2) throw fairex::ConfigError("need at least 2 report files to correlate");
  std::vector<fairex::ScoreReport> reports;
  for (const std::string& p : report_paths) reports.push_back(fairex::read_report_json(p));
  fairex::ScoreTable table = fairex::make_score_table(reports);
  fairex::CorrelationMatrix mat = fairex::correlation_matrix(table);
  std::ostringstream buf;
  if (o.format == "json")
    fairex::write_correlation_json(buf, mat, table.systems);
  else
    fairex::write_correlation_csv(buf, mat);
  if (o.out.empty())
    std::cout << buf.str();
  else
    write_file(o.out, buf.str());
  return 0;
}

int cmd_sliding(const CommonOpts& o, const std::string& run_path, const std::string& qrels_path, int window,
                int starts) {
  fairex::IdIndex users, items;
  fairex::RelevanceTable rel = fairex::load_qrels_into(qrels_path, users, items);
  fairex::RunLoadStats stats;
  fairex::RunData run = fairex::load_run_into(run_path, users, items, &stats);
  if (stats.new_users > 0)
    throw fairex::StructuralError("run contains " + std::to_string(stats.new_users) +
                                  " users absent from the qrels");
  fairex::align_universes(run, rel);
  auto windows = fairex::sliding_windows(run, rel, o.cfg, window, starts);
  std::ostringstream buf;
  if (o.format == "json") {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& ws : windows) j.push_back(fairex::report_to_json(ws.report));
    buf << j.dump(2) << '\n';
  } else {
    fairex::write_sliding_csv(buf, windows, window);
  }
  if (o.out.empty())
    std::cout << buf.str();
  else
    write_file(o.out, buf.str());
  return 0;
}

int cmd_insertion(const CommonOpts& o, int m, int n) {
  fairex::InsertionOutcome traj = fairex::insertion_sim(o.cfg, m, n, o.cfg.seed);
  std::ostringstream buf;
  if (o.format == "json") {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& st : traj.steps) j.push_back(fairex::report_to_json(st.report));
    buf << j.dump(2) << '\n';
  } else {
    fairex::write_insertion_csv(buf, traj);
  }
  if (o.out.empty()) {
    std::cout << buf.str();
  } else {
    fs::path p(o.out);
    if (fs::is_directory(p)) p /= o.format == "json" ? "insertion.json" : "insertion.csv";
    write_file(p.string(), buf.str());
  }
  return 0;
}

int cmd_generate(const CommonOpts& o, int m, int n, double skew, int graded_per_user, const std::string& out_dir) {
  fairex::SyntheticData data =
      fairex::synthetic_popularity_run(m, n, o.cfg.k, skew, o.cfg.seed, graded_per_user);
  fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw fairex::ConfigError("cannot create directory: " + out_dir);
  std::ostringstream run_buf, qrels_buf;
  fairex::save_run(run_buf, data.run, data.users, data.items);
  fairex::save_qrels(qrels_buf, data.rel, data.users, data.items);
  write_file((dir / "run.tsv").string(), run_buf.str());
  write_file((dir / "qrels.tsv").string(), qrels_buf.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairness and relevance evaluation for recommender rankings"};
  app.require_subcommand(1);

  CommonOpts o;
  FlagPresence presence;

  std::string run_path, qrels_path;
  std::vector<std::string> report_paths;
  int window = 5, starts = 5;
  int gen_m = 500, gen_n = 2000, ins_m = 1000, ins_n = 10000;
  double skew = 1.0;
  int graded_per_user = 8;
  std::string out_dir = ".";

  auto add_output_flags = [&](CLI::App* cmd, bool with_measures) {
    cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", o.out, "output path");
    if (with_measures) cmd->add_option("--measures", o.measures, "comma-separated measure subset");
  };

  CLI::App* eval = app.add_subcommand("eval", "score a run against qrels");
  eval->add_option("run", run_path, "run TSV file")->required();
  eval->add_option("qrels", qrels_path, "graded relevance TSV file")->required();
  eval->add_option("--label", o.label, "system label in the report");
  add_config_flags(eval, o, presence);
  add_output_flags(eval, true);

  CLI::App* rerank = app.add_subcommand("rerank", "fuse relevance and coverage into a fairer ranking");
  rerank->add_option("run", run_path, "run TSV file with predicted scores")->required();
  add_config_flags(rerank, o, presence);
  rerank->add_option("--out", o.out, "output run TSV path");

  CLI::App* correlate = app.add_subcommand("correlate", "rank-correlate measures across systems");
  correlate->add_option("reports", report_paths, "two or more JSON report files")->required();
  add_config_flags(correlate, o, presence);
  add_output_flags(correlate, false);

  CLI::App* sliding = app.add_subcommand("sliding", "evaluate fixed-size rank windows");
  sliding->add_option("run", run_path, "run TSV file")->required();
  sliding->add_option("qrels", qrels_path, "graded relevance TSV file")->required();
  sliding->add_option("--window", window, "window size")->check(CLI::PositiveNumber);
  sliding->add_option("--starts", starts, "number of window starts")->check(CLI::PositiveNumber);
  add_config_flags(sliding, o, presence);
  add_output_flags(sliding, false);

  CLI::App* insertion = app.add_subcommand("insertion", "controlled relevance/fairness trajectory");
  insertion->add_option("--m", ins_m, "users")->check(CLI::PositiveNumber);
  insertion->add_option("--n", ins_n, "items")->check(CLI::PositiveNumber);
  add_config_flags(insertion, o, presence);
  add_output_flags(insertion, false);

  CLI::App* generate = app.add_subcommand("generate", "seeded popularity-skewed synthetic run + qrels");
  generate->add_option("--m", gen_m, "users")->check(CLI::PositiveNumber);
  generate->add_option("--n", gen_n, "items")->check(CLI::PositiveNumber);
  generate->add_option("--skew", skew, "popularity skew exponent");
  generate->add_option("--graded-per-user", graded_per_user, "graded items per user")->check(CLI::PositiveNumber);
  generate->add_option("--out", out_dir, "output directory for run.tsv and qrels.tsv");
  add_config_flags(generate, o, presence);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  // the flat long-format commands default to csv; eval reports default to json
  auto pick_format = [&](CLI::App* cmd) {
    if (cmd->count("--format") == 0) o.format = "csv";
  };

  try {
    apply_config_file(o, presence);
    if (eval->parsed()) return cmd_eval(o, eval->count("--format") > 0, run_path, qrels_path);
    if (rerank->parsed()) return cmd_rerank(o, run_path);
    if (correlate->parsed()) { pick_format(correlate); return cmd_correlate(o, report_paths); }
    if (sliding->parsed()) { pick_format(sliding); return cmd_sliding(o, run_path, qrels_path, window, starts); }
    if (insertion->parsed()) { pick_format(insertion); return cmd_insertion(o, ins_m, ins_n); }
    if (generate->parsed()) return cmd_generate(o, gen_m, gen_n, skew, graded_per_user, out_dir);
  } catch (const fairex::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const fairex::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
