#include "fedforge/logreg/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "fedforge/errors.hpp"
#include "fedforge/transport/frame.hpp"

namespace fedforge::logreg {

std::vector<double> normalize(std::span<const double> xs) {
  if (xs.empty()) throw DomainError("normalize: empty input");
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / n;

  double spread = 1.0;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    spread = std::sqrt(ss / (n - 1.0));
    if (spread == 0.0) spread = 1.0;
  }

  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back((x - mean) / spread);
  return out;
}

std::vector<double> predict(std::span<const double> xs, const ModelVector& m) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) {
    const double z = std::clamp(m.b0 + m.b1 * x, -500.0, 500.0);
    out.push_back(1.0 / (1.0 + std::exp(-z)));
  }
  return out;
}

Gradient gradient(std::span<const double> x, std::span<const int> y,
                  std::span<const double> y_pred) {
  if (x.size() != y.size() || x.size() != y_pred.size()) {
    throw DomainError("gradient: length mismatch");
  }
  double s0 = 0.0;
  double s1 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double p = y_pred[i];
    const double r = (static_cast<double>(y[i]) - p) * p * (1.0 - p);
    s0 += r;
    s1 += x[i] * r;
  }
  return {-2.0 * s0, -2.0 * s1};
}

ModelVector train_logreg(std::span<const double> x, std::span<const int> y,
                         const TrainConfig& cfg, ModelVector init) {
  if (x.size() != y.size() || x.empty()) {
    throw DomainError("train_logreg: X and Y must be non-empty and of equal length");
  }
  if (!(cfg.learning_rate > 0.0) || cfg.epochs < 0) {
    throw DomainError("train_logreg: invalid training configuration");
  }
  const std::vector<double> xn = normalize(x);
  ModelVector m = init;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const std::vector<double> p = predict(xn, m);
    const Gradient g = gradient(xn, y, p);
    m.b0 = m.b0 - cfg.learning_rate * g.d_b0;
    m.b1 = m.b1 - cfg.learning_rate * g.d_b1;
    if (!std::isfinite(m.b0) || !std::isfinite(m.b1)) {
      throw DivergenceError("training diverged at epoch " + std::to_string(epoch));
    }
  }
  return m;
}

EvalResult evaluate(std::span<const double> x_test, std::span<const int> y_test,
                    const ModelVector& m) {
  if (x_test.empty()) throw DomainError("evaluate: empty test set");
  if (x_test.size() != y_test.size()) throw DomainError("evaluate: length mismatch");
  const std::vector<double> p = predict(normalize(x_test), m);
  EvalResult out;
  out.y_pred.reserve(p.size());
  double correct = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const int label = p[i] >= 0.5 ? 1 : 0;
    out.y_pred.push_back(label);
    if (label == y_test[i]) correct += 1.0;
  }
  out.accuracy = correct / static_cast<double>(p.size());
  return out;
}

Bytes serialize_model(const ModelVector& m) {
  Bytes out;
  out.reserve(16);
  transport::put_u64(out, std::bit_cast<std::uint64_t>(m.b0));
  transport::put_u64(out, std::bit_cast<std::uint64_t>(m.b1));
  return out;
}

ModelVector deserialize_model(std::span<const std::uint8_t> payload) {
  if (payload.size() != 16) {
    throw DecodeError("model payload must be 16 bytes, got " +
                      std::to_string(payload.size()));
  }
  return {std::bit_cast<double>(transport::get_u64(payload.subspan<0, 8>())),
          std::bit_cast<double>(transport::get_u64(payload.subspan<8, 8>()))};
}

}  // namespace fedforge::logreg
