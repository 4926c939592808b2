#include "fedforge/logreg/callbacks.hpp"

#include <vector>

#include "fedforge/errors.hpp"

namespace fedforge::logreg {
namespace {

ModelVector decode_or_throw(const Bytes& payload) {
  try {
    return deserialize_model(payload);
  } catch (const DecodeError& e) {
    throw CallbackError(e.what());
  }
}

}  // namespace

Bytes cb_cent_client(const Bytes& /*local_data*/, const PrivateData& private_data,
                     const Bytes& msg, const TrainConfig& cfg) {
  if (!private_data) throw CallbackError("client callback needs a training partition");
  const ModelVector start = decode_or_throw(msg);
  return serialize_model(train_logreg(private_data->x, private_data->y, cfg, start));
}

Bytes cb_cent_server(const PrivateData& /*private_data*/, std::span<const Bytes> msgs) {
  if (msgs.empty()) throw CallbackError("server callback got no updates");
  double b0 = 0.0;
  double b1 = 0.0;
  for (const Bytes& msg : msgs) {
    const ModelVector m = decode_or_throw(msg);
    b0 = b0 + m.b0;
    b1 = b1 + m.b1;
  }
  b0 = b0 / static_cast<double>(msgs.size());
  b1 = b1 / static_cast<double>(msgs.size());
  return serialize_model({b0, b1});
}

Bytes cb_decent_server(const PrivateData& private_data, std::span<const Bytes> msgs,
                       const TrainConfig& cfg) {
  if (msgs.empty()) throw CallbackError("server callback got no updates");
  Bytes own = cb_cent_client({}, private_data, serialize_model({0.0, 0.0}), cfg);
  std::vector<Bytes> all(msgs.begin(), msgs.end());
  all.push_back(std::move(own));
  return cb_cent_server(std::nullopt, all);
}

engine::CallbackPair<PrivateData> centralized_callbacks(const TrainConfig& cfg) {
  return {
      [](const PrivateData& pd, std::span<const Bytes> msgs) {
        return cb_cent_server(pd, msgs);
      },
      [cfg](const Bytes& local, const PrivateData& pd, const Bytes& msg) {
        return cb_cent_client(local, pd, msg, cfg);
      },
  };
}

engine::CallbackPair<PrivateData> decentralized_callbacks(const TrainConfig& cfg) {
  return {
      [cfg](const PrivateData& pd, std::span<const Bytes> msgs) {
        return cb_decent_server(pd, msgs, cfg);
      },
      [cfg](const Bytes& local, const PrivateData& pd, const Bytes& msg) {
        return cb_cent_client(local, pd, msg, cfg);
      },
  };
}

}  // namespace fedforge::logreg
