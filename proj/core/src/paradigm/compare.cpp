#include "fedforge/paradigm/compare.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>

#include "fedforge/errors.hpp"

namespace fedforge::paradigm {

double relative_error(double candidate, double reference) {
  const double diff = std::fabs(candidate - reference);
  return reference == 0.0 ? diff : diff / std::fabs(reference);
}

EquivalenceReport compare_reports(const RunReport& ref, const RunReport& cand,
                                  Tolerance tol) {
  std::vector<std::pair<logreg::ModelVector, logreg::ModelVector>> pairs;
  if (ref.models.empty() || cand.models.empty()) {
    throw ComparisonError("cannot compare an empty report");
  }
  if (ref.models.size() == cand.models.size()) {
    for (std::size_t i = 0; i < ref.models.size(); ++i) {
      pairs.emplace_back(ref.models[i], cand.models[i]);
    }
  } else if (ref.models.size() == 1 || cand.models.size() == 1) {
    pairs.emplace_back(ref.aggregate(), cand.aggregate());
  } else {
    throw ComparisonError("model lists of sizes " + std::to_string(ref.models.size()) +
                          " and " + std::to_string(cand.models.size()) +
                          " are not comparable");
  }

  EquivalenceReport out;
  out.reference_phase = ref.phase;
  out.candidate_phase = cand.phase;
  out.name = std::to_string(ref.phase) + "->" + std::to_string(cand.phase);
  out.tolerance = tol;
  out.bit_identical = std::bit_cast<std::uint64_t>(ref.accuracy) ==
                      std::bit_cast<std::uint64_t>(cand.accuracy);
  bool within = true;
  for (const auto& [r, c] : pairs) {
    for (auto [x, y] : {std::pair{c.b0, r.b0}, std::pair{c.b1, r.b1}}) {
      const double e = relative_error(x, y);
      out.relative_errors.push_back(e);
      within = within && e <= tol.coefficients;
      out.bit_identical = out.bit_identical &&
                          std::bit_cast<std::uint64_t>(x) == std::bit_cast<std::uint64_t>(y);
    }
  }
  out.accuracy_delta = std::fabs(cand.accuracy - ref.accuracy);
  out.pass = within && out.accuracy_delta <= tol.accuracy;
  return out;
}

std::string EquivalenceReport::summary() const {
  double worst = 0.0;
  for (double e : relative_errors) worst = std::max(worst, e);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%s: %s (max rel err %.6g <= %.6g, accuracy delta %.6g <= %.6g, %s)",
                name.c_str(), pass ? "PASS" : "FAIL", worst, tolerance.coefficients,
                accuracy_delta, tolerance.accuracy,
                bit_identical ? "bit-identical" : "not bit-identical");
  return buf;
}

}  // namespace fedforge::paradigm
