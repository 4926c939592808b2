#include "fedforge/paradigm/phases.hpp"

#include "fedforge/errors.hpp"
#include "fedforge/logreg/split.hpp"

namespace fedforge::paradigm {

using logreg::ModelVector;

RunReport phase1_seq_base_case(const logreg::Dataset& ds, std::uint64_t split_seed,
                               const logreg::TrainConfig& cfg) {
  const auto data = logreg::split(ds, kTestFraction, split_seed);
  const ModelVector m = logreg::train_logreg(data.x_train, data.y_train, cfg);
  const auto eval = logreg::evaluate(data.x_test, data.y_test, m);
  return {1, {m}, eval.accuracy};
}

RunReport phase2_federated_sequential(const logreg::Dataset& ds, std::uint64_t split_seed,
                                      const logreg::TrainConfig& cfg, std::size_t k) {
  const auto data = logreg::split(ds, kTestFraction, split_seed);
  const auto parts = logreg::partition_horizontal(data.x_train, data.y_train, k);

  RunReport report;
  report.phase = 2;
  for (const auto& p : parts) report.models.push_back(logreg::train_logreg(p.x, p.y, cfg));

  double b0 = report.models[0].b0;
  double b1 = report.models[0].b1;
  for (std::size_t i = 1; i < report.models.size(); ++i) {
    b0 = b0 + report.models[i].b0;
    b1 = b1 + report.models[i].b1;
  }
  const ModelVector aggregate{b0 / static_cast<double>(k), b1 / static_cast<double>(k)};
  report.models.push_back(aggregate);
  report.accuracy = logreg::evaluate(data.x_test, data.y_test, aggregate).accuracy;
  return report;
}

RunReport phase3_federated_callbacks(const logreg::Dataset& ds, std::uint64_t split_seed,
                                     const logreg::TrainConfig& cfg, std::size_t k,
                                     const std::optional<LogRegCallbacks>& callbacks) {
  const LogRegCallbacks cbs = callbacks ? *callbacks : logreg::centralized_callbacks(cfg);
  const auto data = logreg::split(ds, kTestFraction, split_seed);
  const auto parts = logreg::partition_horizontal(data.x_train, data.y_train, k);

  const Bytes local_data = logreg::serialize_model({0.0, 0.0});
  const Bytes msg_from_server = logreg::serialize_model({0.0, 0.0});
  std::vector<Bytes> msgs;
  msgs.reserve(parts.size());
  for (const auto& p : parts) {
    msgs.push_back(cbs.client(local_data, logreg::PrivateData{p}, msg_from_server));
  }
  const Bytes avg = cbs.server(std::nullopt, msgs);

  RunReport report;
  report.phase = 3;
  for (const auto& m : msgs) report.models.push_back(logreg::deserialize_model(m));
  report.models.push_back(logreg::deserialize_model(avg));
  report.accuracy = logreg::evaluate(data.x_test, data.y_test, report.aggregate()).accuracy;
  return report;
}

}  // namespace fedforge::paradigm
