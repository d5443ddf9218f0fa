// Acceptance gate: end-to-end checks of measure correctness, controlled
// trajectories, direction-of-change behavior, fusion trade-offs, invariant
// fuzzing, correlation math, and CLI determinism.  Runs the CLI binary given
// as argv[1] for the last group.  One line per criterion; exit is nonzero if
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fairex/fairex.hpp"
#include "oracle.hpp"
#include "toygen.hpp"

namespace fs = std::filesystem;

namespace {

int failures = 0;

void verdict(int crit, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << crit << ": " << detail << std::endl;
  if (!ok) ++failures;
}

double now_seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double oracle_value(const oracle::Toy& t, fairex::Measure m, const fairex::EvalConfig& cfg) {
  using fairex::Measure;
  switch (m) {
    case Measure::HR: return oracle::hr(t);
    case Measure::MRR: return oracle::mrr(t);
    case Measure::P: return oracle::precision(t);
    case Measure::MAP: return oracle::map(t);
    case Measure::R: return oracle::recall(t);
    case Measure::NDCG: return oracle::ndcg(t);
    case Measure::Jain: return oracle::jain(oracle::counts(t));
    case Measure::QF: return oracle::qf(oracle::counts(t));
    case Measure::Ent: return oracle::entropy(oracle::counts(t));
    case Measure::FSat: return oracle::fsat(oracle::counts(t));
    case Measure::Gini: return oracle::gini(oracle::counts(t));
    case Measure::IBO: return oracle::ibo_iwo(t, cfg.impact_threshold).ibo;
    case Measure::IWO: return oracle::ibo_iwo(t, cfg.impact_threshold).iwo;
    case Measure::IAA: return oracle::iaa(t);
    case Measure::IFD_div: return oracle::ifd_div(t);
    case Measure::IFD_mult: return oracle::ifd_mult(t);
    case Measure::HD: return oracle::hd(t, cfg.gamma_hd);
    case Measure::MME: return oracle::mme(t);
    case Measure::IIF: return oracle::iif(t, cfg.gamma_iif);
    case Measure::AIF: return oracle::aif(t, cfg.gamma_iif);
  }
  return 0.0;
}

// criterion 1: every measure equals its brute-force reference on random toys
void criterion_oracle() {
  auto t0 = std::chrono::steady_clock::now();
  const int trials = 250;
  fairex::Rng g(20240101);
  int checked = 0;
  for (int trial = 0; trial < trials; ++trial) {
    oracle::Toy t = toygen::random_toy(g);
    auto [run, rel] = toygen::to_library(t);
    fairex::EvalConfig cfg;
    cfg.k = t.k;
    fairex::ScoreReport rep = fairex::evaluate_all(run, rel, cfg);
    for (const auto& [m, v] : rep.scores) {
      double want = oracle_value(t, m, cfg);
      if (std::abs(v - want) > 1e-9) {
        std::ostringstream msg;
        msg << "trial " << trial << " " << fairex::measure_name(m) << " = " << v << ", reference " << want
            << " (m=" << t.m << " n=" << t.n << " k=" << t.k << " W=" << t.W << ")";
        verdict(1, false, msg.str());
        return;
      }
      ++checked;
    }
  }
  double secs = now_seconds(t0);
  std::ostringstream msg;
  msg << trials << " random instances, " << checked << " comparisons within 1e-9, " << secs << "s";
  verdict(1, secs < 10.0, msg.str());
}

// criterion 2: planting one relevant item per step drives quality to perfect
// while the individual-fairness measures stay near their floor
void criterion_insertion() {
  auto t0 = std::chrono::steady_clock::now();
  fairex::EvalConfig cfg;  // k = 10
  auto traj = fairex::insertion_sim(cfg, 1000, 10000, 42);
  std::vector<std::string> problems;

  const auto& first = traj.steps.front().report;
  const auto& last = traj.steps.back().report;
  using fairex::Measure;
  for (Measure m : {Measure::HR, Measure::MRR, Measure::P, Measure::MAP, Measure::R, Measure::NDCG}) {
    if (first.score(m) > 0.01)
      problems.push_back(std::string(fairex::measure_name(m)) + " starts at " + fairex::format_double(first.score(m)));
    if (std::abs(last.score(m) - 1.0) > 1e-12)
      problems.push_back(std::string(fairex::measure_name(m)) + " ends at " + fairex::format_double(last.score(m)));
  }
  for (std::size_t s = 1; s < traj.steps.size(); ++s) {
    double prev = traj.steps[s - 1].report.score(Measure::Gini);
    double cur = traj.steps[s].report.score(Measure::Gini);
    if (!(cur < prev)) problems.push_back("Gini not decreasing at step " + std::to_string(s));
  }
  double inc0 = traj.steps[1].report.score(Measure::IBO) - traj.steps[0].report.score(Measure::IBO);
  for (std::size_t s = 1; s < traj.steps.size(); ++s) {
    double inc = traj.steps[s].report.score(Measure::IBO) - traj.steps[s - 1].report.score(Measure::IBO);
    if (std::abs(inc - inc0) > 1e-9) problems.push_back("IBO increment drifts at step " + std::to_string(s));
  }
  for (const auto& st : traj.steps) {
    for (Measure m : {Measure::IAA, Measure::IFD_mult, Measure::MME, Measure::IIF, Measure::AIF}) {
      if (!(st.report.score(m) < 0.0015))
        problems.push_back(std::string(fairex::measure_name(m)) + " = " +
                           fairex::format_double(st.report.score(m)) + " at step " + std::to_string(st.step));
    }
  }
  for (std::size_t s = 1; s < traj.steps.size(); ++s) {
    double prev = traj.steps[s - 1].report.score(Measure::IFD_div);
    double cur = traj.steps[s].report.score(Measure::IFD_div);
    if (cur < prev - 1e-12) problems.push_back("IFD_div decreases at step " + std::to_string(s));
  }
  double secs = now_seconds(t0);
  if (secs >= 300.0) problems.push_back("took " + std::to_string(secs) + "s");
  if (problems.empty()) {
    std::ostringstream msg;
    msg << "quality 0 -> 1, Gini strictly down, IBO increment " << fairex::format_double(inc0)
        << ", gap measures < 0.0015, " << secs << "s";
    verdict(2, true, msg.str());
  } else {
    verdict(2, false, problems.front() + (problems.size() > 1 ? " (+" + std::to_string(problems.size() - 1) + " more)" : ""));
  }
}

// criterion 3: down-the-ranking windows move each measure in its documented
// direction on a popularity-skewed run
void criterion_sliding() {
  auto data = fairex::synthetic_popularity_run(500, 2000, 10, 2.0, 42, 16, 0.5);
  fairex::EvalConfig cfg;
  auto windows = fairex::sliding_windows(data.run, data.rel, cfg, 5, 5);

  auto series = [&](fairex::Measure m) {
    std::vector<double> v;
    for (const auto& w : windows) v.push_back(w.report.score(m));
    return v;
  };
  std::vector<std::string> problems;
  using fairex::Measure;

  for (Measure m : {Measure::NDCG, Measure::Gini}) {
    auto v = series(m);
    for (std::size_t j = 1; j < v.size(); ++j)
      if (v[j] > v[j - 1] + 1e-12)
        problems.push_back(std::string(fairex::measure_name(m)) + " increases at window " + std::to_string(j + 1));
  }
  // lower-is-better joint measures: worsen = rise, improve = fall;
  // demand a strict move in at least 3 of the 4 adjacent window pairs
  auto count_strict = [&](fairex::Measure m, bool rising) {
    auto v = series(m);
    int good = 0;
    for (std::size_t j = 1; j < v.size(); ++j) {
      if (rising ? v[j] > v[j - 1] : v[j] < v[j - 1]) ++good;
    }
    return good;
  };
  for (Measure m : {Measure::IAA, Measure::HD, Measure::IIF}) {
    int good = count_strict(m, /*rising=*/true);
    if (good < 3)
      problems.push_back(std::string(fairex::measure_name(m)) + " rises in only " + std::to_string(good) + "/4 pairs");
  }
  for (Measure m : {Measure::IFD_div, Measure::IFD_mult, Measure::MME, Measure::AIF}) {
    int good = count_strict(m, /*rising=*/false);
    if (good < 3)
      problems.push_back(std::string(fairex::measure_name(m)) + " falls in only " + std::to_string(good) + "/4 pairs");
  }
  if (problems.empty()) {
    verdict(3, true,
            "windows 1-5..5-9: NDCG and Gini never rise; IAA/HD/II-F worsen and IFD/MME/AI-F improve in >=3/4 pairs");
  } else {
    verdict(3, false, problems.front() + (problems.size() > 1 ? " (+" + std::to_string(problems.size() - 1) + " more)" : ""));
  }
}

// criterion 4: fusing coverage into the ranking trades relevance for exposure
void criterion_rerank() {
  auto data = fairex::synthetic_popularity_run(500, 2000, 10, 2.0, 42, 16, 0.5);
  fairex::EvalConfig cfg;  // k = 10, k' = 25
  auto fused = fairex::combmnz_rerank(data.run, cfg.k_prime, cfg.k);

  auto sel = std::vector<fairex::Measure>{fairex::Measure::NDCG, fairex::Measure::QF, fairex::Measure::Gini};
  auto before = fairex::evaluate_all(data.run, data.rel, cfg, sel);
  auto after = fairex::evaluate_all(fused.run, data.rel, cfg, sel);

  double qf_b = before.score(fairex::Measure::QF), qf_a = after.score(fairex::Measure::QF);
  double gini_b = before.score(fairex::Measure::Gini), gini_a = after.score(fairex::Measure::Gini);
  double ndcg_b = before.score(fairex::Measure::NDCG), ndcg_a = after.score(fairex::Measure::NDCG);
  std::ostringstream msg;
  msg << "QF " << fairex::format_double(qf_b) << " -> " << fairex::format_double(qf_a) << ", Gini "
      << fairex::format_double(gini_b) << " -> " << fairex::format_double(gini_a) << ", NDCG "
      << fairex::format_double(ndcg_b) << " -> " << fairex::format_double(ndcg_a);
  verdict(4, qf_a > qf_b && gini_a < gini_b && ndcg_a < ndcg_b, msg.str());
}

// criterion 5: invariant fuzzing over random instances
void criterion_fuzz() {
  fairex::Rng g(777);
  for (int trial = 0; trial < 1000; ++trial) {
    oracle::Toy t = toygen::random_toy(g);
    auto [run, rel] = toygen::to_library(t);
    fairex::JointConfig jc;
    jc.k = t.k;
    auto fail = [&](const std::string& what) {
      verdict(5, false, what + " at trial " + std::to_string(trial));
    };
    double v_iaa = fairex::iaa(run, rel, jc).value;
    if (!(v_iaa >= 0.0 && v_iaa <= 1.0 + 1e-12)) return fail("attention gap outside [0, 1]");
    double v_iif = fairex::iif(run, rel, jc).value;
    double v_aif = fairex::aif(run, rel, jc).value;
    if (!(v_iif >= 0.0 && v_iif <= 1.0 + 1e-12)) return fail("user-level exposure gap outside [0, 1]");
    if (!(v_aif >= 0.0 && v_aif <= 1.0 + 1e-12)) return fail("aggregate exposure gap outside [0, 1]");
    if (!(v_aif <= v_iif + 1e-12)) return fail("aggregate gap exceeds user-level gap");
    if (!(fairex::mme(run, rel, jc).value >= 0.0)) return fail("negative envy");
    if (!(fairex::hd(run, rel, jc).value >= 0.0)) return fail("negative click distance");
    if (!(fairex::ifd_div(run, rel, jc).value >= 0.0)) return fail("negative pair disparity");
    if (!(fairex::ifd_mult(run, rel, jc).value >= 0.0)) return fail("negative squared disparity");
    auto bw = fairex::ibo_iwo(run, rel, jc);
    if (!(bw.ibo + bw.iwo <= 1.0 + 1e-12)) return fail("impact fractions exceed 1");
    for (int i : bw.better_items)
      for (int j : bw.worse_items)
        if (i == j) return fail("impact sets overlap");
  }
  verdict(5, true, "1000 random instances: ranges, envy sign, disjoint impact sets, aggregate <= user-level");
}

// criterion 6: rank correlation against literal pair counting
void criterion_kendall() {
  fairex::Rng g(31337);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 2 + fairex::draw_below(g, 15);
    std::vector<double> x(n), y(n);
    for (std::size_t j = 0; j < n; ++j) {
      x[j] = static_cast<double>(fairex::draw_below(g, 6));
      y[j] = fairex::draw_unit(g) < 0.3 ? x[j] : static_cast<double>(fairex::draw_below(g, 6));
    }
    double want = oracle::kendall(x, y);
    if (std::isnan(want)) {
      try {
        fairex::kendall_tau(x, y);
        verdict(6, false, "degenerate table not rejected at trial " + std::to_string(trial));
        return;
      } catch (const fairex::UndefinedInputError&) {
      }
      continue;
    }
    double got = fairex::kendall_tau(x, y);
    if (std::abs(got - want) > 1e-12) {
      verdict(6, false, "mismatch " + fairex::format_double(got) + " vs " + fairex::format_double(want) +
                            " at trial " + std::to_string(trial));
      return;
    }
    if (std::abs(fairex::kendall_tau(y, x) - got) > 1e-12) {
      verdict(6, false, "asymmetric at trial " + std::to_string(trial));
      return;
    }
  }
  // matrix form: symmetric with a unit diagonal
  fairex::ScoreTable t;
  t.systems = {"a", "b", "c", "d"};
  t.measures = fairex::all_measures();
  fairex::Rng g2(99);
  for (std::size_t s = 0; s < 4; ++s) {
    std::vector<double> row;
    for (int j = 0; j < fairex::kNumMeasures; ++j) row.push_back(static_cast<double>(fairex::draw_below(g2, 4)));
    t.values.push_back(std::move(row));
  }
  auto mat = fairex::correlation_matrix(t);
  for (std::size_t a = 0; a < mat.tau.size(); ++a) {
    if (mat.tau[a][a] != 1.0) {
      verdict(6, false, "diagonal not 1");
      return;
    }
    for (std::size_t b = 0; b < mat.tau.size(); ++b) {
      bool both_nan = std::isnan(mat.tau[a][b]) && std::isnan(mat.tau[b][a]);
      if (!both_nan && std::abs(mat.tau[a][b] - mat.tau[b][a]) > 1e-12) {
        verdict(6, false, "matrix not symmetric");
        return;
      }
    }
  }
  verdict(6, true, "100 tables match pair counting within 1e-12; matrix symmetric with unit diagonal");
}

// criterion 7: every CLI command writes byte-identical output when repeated
// with the same seed and flags
struct Cli {
  std::string bin;
  fs::path dir;

  int run(const std::string& args, const std::string& log) const {
    std::string cmd = "\"" + bin + "\" " + args + " > \"" + (dir / log).string() + "\" 2>&1";
    int rc = std::system(cmd.c_str());
    return rc < 0 ? rc : WEXITSTATUS(rc);
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void criterion_cli(const std::string& bin) {
  fs::path dir = fs::temp_directory_path() / "fairex_acceptance";
  std::error_code ec;
  fs::remove_all(dir, ec);
  fs::create_directories(dir);
  Cli cli{bin, dir};

  std::vector<std::string> problems;
  auto expect = [&](int got, int want, const std::string& what) {
    if (got != want) problems.push_back(what + " exited " + std::to_string(got) + ", expected " + std::to_string(want));
  };

  // a truncated re-ranked run cannot support the exact pair-disparity
  // measure, so its eval restricts to the measures a depth-k' run defines
  const std::string subset = "HR,MRR,P,MAP,R,NDCG,Jain,QF,Ent,FSat,Gini,IBO,IWO,IAA,IFD_mult,HD,MME,II-F,AI-F";
  for (const char* tag : {"a", "b"}) {
    std::string d = (dir / tag).string();
    fs::create_directories(dir / tag);
    std::string gen = d + "/gen";
    expect(cli.run("generate --m 30 --n 60 --k 5 --skew 1.2 --seed 9 --out \"" + gen + "\"", std::string("gen_") + tag + ".log"), 0, "generate");
    expect(cli.run("eval \"" + gen + "/run.tsv\" \"" + gen + "/qrels.tsv\" --k 5 --out \"" + d + "/rep\"", std::string("eval_") + tag + ".log"), 0, "eval");
    expect(cli.run("rerank \"" + gen + "/run.tsv\" --k-prime 8 --k 5 --out \"" + d + "/fused.tsv\"", std::string("rerank_") + tag + ".log"), 0, "rerank");
    expect(cli.run("eval \"" + d + "/fused.tsv\" \"" + gen + "/qrels.tsv\" --k 5 --measures " + subset +
                       " --format json --out \"" + d + "/fused_rep.json\"",
                   std::string("eval2_") + tag + ".log"),
           0, "eval of re-ranked run");
    expect(cli.run("eval \"" + gen + "/run.tsv\" \"" + gen + "/qrels.tsv\" --k 5 --measures " + subset +
                       " --format json --out \"" + d + "/base_rep.json\"",
                   std::string("eval3_") + tag + ".log"),
           0, "eval with measure subset");
    expect(cli.run("correlate \"" + d + "/base_rep.json\" \"" + d + "/fused_rep.json\" --out \"" + d + "/corr.csv\"", std::string("corr_") + tag + ".log"), 0, "correlate");
    expect(cli.run("sliding \"" + gen + "/run.tsv\" \"" + gen + "/qrels.tsv\" --window 3 --starts 3 --out \"" + d + "/windows.csv\"", std::string("slide_") + tag + ".log"), 0, "sliding");
    expect(cli.run("insertion --m 20 --n 100 --k 5 --seed 3 --out \"" + d + "/steps.csv\"", std::string("ins_") + tag + ".log"), 0, "insertion");
  }
  for (const char* f : {"gen/run.tsv", "gen/qrels.tsv", "rep.json", "rep.csv", "fused.tsv", "fused_rep.json",
                        "base_rep.json", "corr.csv", "windows.csv", "steps.csv"}) {
    std::string a = slurp(dir / "a" / f), b = slurp(dir / "b" / f);
    if (a.empty()) problems.push_back(std::string(f) + " is empty");
    if (a != b) problems.push_back(std::string(f) + " differs between repeats");
  }

  // exit-code contract
  expect(cli.run("eval", "usage1.log"), 2, "eval without arguments");
  expect(cli.run("eval missing.tsv also_missing.tsv", "usage2.log"), 2, "eval on missing files");
  expect(cli.run("correlate \"" + (dir / "a" / "rep.json").string() + "\"", "usage3.log"), 2, "correlate with one report");
  expect(cli.run("--help", "help.log"), 0, "--help");

  if (problems.empty()) {
    verdict(7, true, "7 commands repeated byte-identically; usage errors exit 2");
  } else {
    verdict(7, false, problems.front() + (problems.size() > 1 ? " (+" + std::to_string(problems.size() - 1) + " more)" : ""));
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: " << argv[0] << " <cli-binary>" << std::endl;
    return 2;
  }
  try {
    criterion_oracle();
    criterion_insertion();
    criterion_sliding();
    criterion_rerank();
    criterion_fuzz();
    criterion_kendall();
    criterion_cli(argv[1]);
  } catch (const std::exception& e) {
    std::cout << "FAIL unexpected exception: " << e.what() << std::endl;
    ++failures;
  }
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed" << std::endl;
    return 1;
  }
  std::cout << "all criteria passed" << std::endl;
  return 0;
}
