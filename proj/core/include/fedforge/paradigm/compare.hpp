#pragma once

#include <string>
#include <vector>

#include "fedforge/paradigm/phases.hpp"

namespace fedforge::paradigm {

struct Tolerance {
  double coefficients = 0.0;  // max relative error per coefficient
  double accuracy = 0.0;      // max absolute accuracy difference
};

struct EquivalenceReport {
  std::string name;
  int reference_phase = 0;
  int candidate_phase = 0;
  // b0, b1 relative errors of every compared model, in model order.
  std::vector<double> relative_errors;
  double accuracy_delta = 0.0;
  Tolerance tolerance;
  bool bit_identical = false;
  bool pass = false;

  std::string summary() const;
};

// |x - r| / |r|, or |x - r| when r == 0.
double relative_error(double candidate, double reference);

// Equal-length model lists are compared element by element. When one side
// holds a single model, only the aggregates (last models) are compared.
// Any other shape mismatch throws ComparisonError.
EquivalenceReport compare_reports(const RunReport& ref, const RunReport& cand,
                                  Tolerance tol);

inline EquivalenceReport compare_reports(const RunReport& ref, const RunReport& cand,
                                         double eps) {
  return compare_reports(ref, cand, Tolerance{eps, eps});
}

}  // namespace fedforge::paradigm
