#pragma once

#include <cmath>
#include <string>

#include "fairex/errors.hpp"

namespace fairex {

// Position-weighting schemes.  Weight models how much attention an item at a
// given rank receives; every scheme is positive and non-increasing in rank
// inside the cutoff and exactly 0 beyond it.
enum class ExamKind { linear, normalized_linear, dcg, rbp, inverse };

struct Examination {
  ExamKind kind = ExamKind::dcg;
  double gamma = 0.0;  // rbp only
};

inline Examination make_examination(ExamKind kind, double gamma = 0.0) {
  if (kind == ExamKind::rbp) {
    if (!(gamma > 0.0 && gamma < 1.0))
      throw ConfigError("rbp decay must lie strictly between 0 and 1, got " + std::to_string(gamma));
    return {kind, gamma};
  }
  return {kind, 0.0};
}

// Weight of rank z under cutoff k.  z and k are 1-based; z > k yields 0.
inline double exam_weight(const Examination& e, int z, int k) {
  if (z < 1) throw DomainError("rank must be >= 1, got " + std::to_string(z));
  if (k < 1) throw DomainError("cutoff must be >= 1, got " + std::to_string(k));
  if (z > k) return 0.0;
  switch (e.kind) {
    case ExamKind::linear:
      return static_cast<double>(k + 1 - z);
    case ExamKind::normalized_linear:
      if (k == 1) throw DomainError("normalized linear weight is degenerate at cutoff 1");
      return static_cast<double>(k - z) / static_cast<double>(k - 1);
    case ExamKind::dcg:
      return 1.0 / std::log2(static_cast<double>(z) + 1.0);
    case ExamKind::rbp:
      return std::pow(e.gamma, static_cast<double>(z - 1));
    case ExamKind::inverse:
      return 1.0 / static_cast<double>(z);
  }
  throw DomainError("unknown examination kind");
}

namespace detail {

// Hot-loop forms used by the measures; same math as exam_weight without the
// per-call validation.
inline double dcg_weight(int z) { return 1.0 / std::log2(static_cast<double>(z) + 1.0); }
inline double inverse_weight(int z) { return 1.0 / static_cast<double>(z); }
inline double normalized_linear_weight(int z, int k) {
  return static_cast<double>(k - z) / static_cast<double>(k - 1);
}

inline double harmonic(int k) {
  double h = 0.0;
  for (int p = 1; p <= k; ++p) h += 1.0 / static_cast<double>(p);
  return h;
}

}  // namespace detail

}  // namespace fairex
