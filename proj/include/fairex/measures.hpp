#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fairex {

// The twenty reported measures in canonical order: six quality-only, five
// exposure-only, nine joint.
enum class Measure {
  HR,
  MRR,
  P,
  MAP,
  R,
  NDCG,
  Jain,
  QF,
  Ent,
  FSat,
  Gini,
  IBO,
  IWO,
  IAA,
  IFD_div,
  IFD_mult,
  HD,
  MME,
  IIF,
  AIF,
};

inline constexpr int kNumMeasures = 20;

constexpr std::string_view measure_name(Measure m) {
  switch (m) {
    case Measure::HR: return "HR";
    case Measure::MRR: return "MRR";
    case Measure::P: return "P";
    case Measure::MAP: return "MAP";
    case Measure::R: return "R";
    case Measure::NDCG: return "NDCG";
    case Measure::Jain: return "Jain";
    case Measure::QF: return "QF";
    case Measure::Ent: return "Ent";
    case Measure::FSat: return "FSat";
    case Measure::Gini: return "Gini";
    case Measure::IBO: return "IBO";
    case Measure::IWO: return "IWO";
    case Measure::IAA: return "IAA";
    case Measure::IFD_div: return "IFD_div";
    case Measure::IFD_mult: return "IFD_mult";
    case Measure::HD: return "HD";
    case Measure::MME: return "MME";
    case Measure::IIF: return "II-F";
    case Measure::AIF: return "AI-F";
  }
  return "?";
}

constexpr bool higher_is_better(Measure m) {
  switch (m) {
    case Measure::HR:
    case Measure::MRR:
    case Measure::P:
    case Measure::MAP:
    case Measure::R:
    case Measure::NDCG:
    case Measure::Jain:
    case Measure::QF:
    case Measure::Ent:
    case Measure::FSat:
    case Measure::IBO:
      return true;
    default:
      return false;
  }
}

inline std::vector<Measure> all_measures() {
  std::vector<Measure> out;
  out.reserve(kNumMeasures);
  for (int j = 0; j < kNumMeasures; ++j) out.push_back(static_cast<Measure>(j));
  return out;
}

inline std::optional<Measure> measure_from_name(std::string_view name) {
  for (int j = 0; j < kNumMeasures; ++j) {
    Measure m = static_cast<Measure>(j);
    if (measure_name(m) == name) return m;
  }
  return std::nullopt;
}

}  // namespace fairex
