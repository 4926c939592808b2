#pragma once

#include <span>
#include <vector>

#include "fedforge/types.hpp"

namespace fedforge::logreg {

struct TrainConfig {
  double learning_rate = 0.001;
  int epochs = 300;
};

// Intercept and slope of the single-feature logistic model.
struct ModelVector {
  double b0 = 0.0;
  double b1 = 0.0;

  friend bool operator==(const ModelVector&, const ModelVector&) = default;
};

struct Gradient {
  double d_b0 = 0.0;
  double d_b1 = 0.0;
};

struct EvalResult {
  std::vector<int> y_pred;
  double accuracy = 0.0;
};

// Standardization with the sample standard deviation (divisor n - 1). A
// zero spread, or a single element, only centers.
std::vector<double> normalize(std::span<const double> xs);

// Sigmoid of b0 + b1 * x with the exponent clamped to [-500, 500].
std::vector<double> predict(std::span<const double> xs, const ModelVector& m);

// Gradient of the squared error sum((y - p)^2) through the sigmoid:
//   d_b0 = -2 sum (y - p) p (1 - p)
//   d_b1 = -2 sum x (y - p) p (1 - p)
Gradient gradient(std::span<const double> x, std::span<const int> y,
                  std::span<const double> y_pred);

// Normalizes x once, then runs `epochs` rounds of predict, gradient and
// coefficient update.
ModelVector train_logreg(std::span<const double> x, std::span<const int> y,
                         const TrainConfig& cfg = {}, ModelVector init = {});

// Normalizes x_test on its own, thresholds p >= 0.5 to class 1.
EvalResult evaluate(std::span<const double> x_test, std::span<const int> y_test,
                    const ModelVector& m);

// 16 bytes: b0 then b1, each big-endian IEEE-754 binary64.
Bytes serialize_model(const ModelVector& m);
ModelVector deserialize_model(std::span<const std::uint8_t> payload);

}  // namespace fedforge::logreg
