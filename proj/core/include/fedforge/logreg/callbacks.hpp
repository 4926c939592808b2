#pragma once

#include <optional>
#include <span>

#include "fedforge/engine/engine.hpp"
#include "fedforge/logreg/model.hpp"
#include "fedforge/logreg/split.hpp"

namespace fedforge::logreg {

// A node's training partition; empty on a centralized server.
using PrivateData = std::optional<Partition>;

// Trains the node's partition starting from the model carried by `msg`.
// `local_data` is not read.
Bytes cb_cent_client(const Bytes& local_data, const PrivateData& private_data,
                     const Bytes& msg, const TrainConfig& cfg = {});

// Coefficient-wise mean: accumulate from 0 in list order, then divide.
Bytes cb_cent_server(const PrivateData& private_data, std::span<const Bytes> msgs);

// Trains its own partition from (0, 0), appends that model after the
// received ones and averages them all.
Bytes cb_decent_server(const PrivateData& private_data, std::span<const Bytes> msgs,
                       const TrainConfig& cfg = {});

engine::CallbackPair<PrivateData> centralized_callbacks(const TrainConfig& cfg = {});
engine::CallbackPair<PrivateData> decentralized_callbacks(const TrainConfig& cfg = {});

}  // namespace fedforge::logreg
