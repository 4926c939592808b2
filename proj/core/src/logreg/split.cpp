#include "fedforge/logreg/split.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "fedforge/errors.hpp"
#include "fedforge/rng.hpp"

namespace fedforge::logreg {

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  SplitMix64 rng(seed);
  for (std::size_t i = n; i-- > 1;) {
    const auto j = static_cast<std::size_t>(rng.next_below(i + 1));
    std::swap(idx[i], idx[j]);
  }
  return idx;
}

SplitData split(const Dataset& ds, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw SplitError("test fraction must lie in (0, 1)");
  }
  const std::size_t n = ds.rows.size();
  const auto n_test =
      static_cast<std::size_t>(std::round(test_fraction * static_cast<double>(n)));
  if (n_test == 0 || n_test >= n) {
    throw SplitError("split of " + std::to_string(n) + " rows at fraction " +
                     std::to_string(test_fraction) + " leaves an empty side");
  }

  const auto idx = shuffled_indices(n, seed);
  SplitData out;
  out.test_rows.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
  out.train_rows.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
  for (auto r : out.train_rows) {
    out.x_train.push_back(ds.rows[r].age);
    out.y_train.push_back(ds.rows[r].purchased);
  }
  for (auto r : out.test_rows) {
    out.x_test.push_back(ds.rows[r].age);
    out.y_test.push_back(ds.rows[r].purchased);
  }
  return out;
}

std::vector<Partition> partition_horizontal(std::span<const double> x,
                                            std::span<const int> y, std::size_t k) {
  if (x.size() != y.size()) throw PartitionError("X and Y lengths differ");
  if (k == 0) throw PartitionError("number of partitions must be at least 1");
  if (k > x.size()) {
    throw PartitionError("cannot cut " + std::to_string(x.size()) + " rows into " +
                         std::to_string(k) + " non-empty partitions");
  }
  const std::size_t base = x.size() / k;
  const std::size_t extra = x.size() % k;
  std::vector<Partition> parts;
  parts.reserve(k);
  std::size_t begin = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t len = base + (i < extra ? 1 : 0);
    parts.push_back({{x.begin() + begin, x.begin() + begin + len},
                     {y.begin() + begin, y.begin() + begin + len}});
    begin += len;
  }
  return parts;
}

}  // namespace fedforge::logreg
