#pragma once

#include <cstddef>
#include <cstdint>

#include "json.hpp"

#include "hgnn/graph.hpp"
#include "hgnn/model.hpp"

namespace hgnn {

struct TrainConfig {
    double lr = 0.005;
    double decay_factor = 0.1;
    std::size_t decay_at_iter = 1500;
    std::size_t warmup_iters = 1000;
    double gamma = 2.0;
    std::size_t layers = 4;
    std::size_t hidden = 512;
    EdgeRules rules;
    std::uint64_t seed = 0;
    std::size_t max_iters = 3000;
    std::size_t batch_size = 32;
    PoolingMode pooling = PoolingMode::kLearned;
    bool fusion_enabled = true;
    FusionKind fusion = FusionKind::kAttention;
    Modality modality = Modality::kBoth;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    // Held-out metrics are computed every eval_every iterations (0 = only at the end).
    std::size_t eval_every = 0;
    // Intermediate checkpoints every checkpoint_every iterations (0 = final only).
    std::size_t checkpoint_every = 0;
    std::uint64_t split_seed = 0;
    double train_fraction = 0.8;

    bool operator==(const TrainConfig&) const = default;
};

void validate(const TrainConfig& config);
nlohmann::json to_json(const TrainConfig& config);
// Missing keys keep the values in `base`.
TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig base = {});

nlohmann::json to_json(const ModelConfig& config);
ModelConfig model_config_from_json(const nlohmann::json& j);

// Model shape for a dataset with the given dims and node counts.
ModelConfig model_config_for(const TrainConfig& config, std::size_t audio_dim, std::size_t video_dim,
                             std::size_t classes, std::size_t n_audio, std::size_t n_video);

}  // namespace hgnn
