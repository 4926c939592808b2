#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fedforge/logreg/dataset.hpp"

namespace fedforge::logreg {

struct SplitData {
  std::vector<double> x_train;
  std::vector<int> y_train;
  std::vector<double> x_test;
  std::vector<int> y_test;
  // Row indices into the source dataset, in split order.
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
};

// Seeded Fisher-Yates over row indices: for i = n-1 down to 1, swap i with
// SplitMix64(seed).next() % (i + 1). The first round(test_fraction * n)
// shuffled indices form the test set, the rest the training set, both in
// shuffled order.
SplitData split(const Dataset& ds, double test_fraction, std::uint64_t seed);

// The permutation used by split().
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed);

struct Partition {
  std::vector<double> x;
  std::vector<int> y;

  friend bool operator==(const Partition&, const Partition&) = default;
};

// Contiguous row slices; sizes differ by at most one, earlier ones larger.
std::vector<Partition> partition_horizontal(std::span<const double> x,
                                            std::span<const int> y, std::size_t k);

}  // namespace fedforge::logreg
