#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace fedforge::logreg {

struct Sample {
  double age = 0.0;
  int purchased = 0;  // 0 or 1

  friend bool operator==(const Sample&, const Sample&) = default;
};

// Only Age and Purchased are kept from the Social Network Ads schema.
struct Dataset {
  std::string name;
  std::vector<Sample> rows;

  std::vector<double> ages() const;
  std::vector<int> labels() const;
};

// Parses a comma-separated file with a header row. Age and Purchased are
// required; User ID, Gender and EstimatedSalary are accepted and dropped.
// Errors cite the 1-based file line (the header is line 1).
Dataset load_sna_csv(const std::filesystem::path& path);
Dataset parse_sna_csv(std::istream& in, const std::string& name);

// Deterministic synthetic dataset: ages ~ U[18, 60], then label 1 iff
// u < sigmoid(true_b0 + true_b1 * z) where z is the standardized age and
// u ~ U[0, 1). All draws come from one SplitMix64 stream: n ages, then n
// label draws.
Dataset gen_synthetic(std::uint64_t seed, std::size_t n, double true_b0, double true_b1);

// Writes the dataset in the SNA column layout. User ID, Gender and
// EstimatedSalary are filled with deterministic placeholders.
void write_sna_csv(const Dataset& ds, std::ostream& out, std::uint64_t seed = 0);

}  // namespace fedforge::logreg
