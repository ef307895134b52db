#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hgnn/dataset.hpp"
#include "hgnn/metrics.hpp"
#include "hgnn/model.hpp"
#include "hgnn/train_config.hpp"

namespace hgnn {

inline constexpr double kFocalClampEps = 1e-7;

// Multi-label binary focal loss summed over classes:
//   y = 1: -(1 - p)^gamma log p,   y = 0: -p^gamma log(1 - p),
// with p clamped to [1e-7, 1 - 1e-7]. gamma = 0 is binary cross-entropy.
template <typename T>
BasicTensor<T> focal_loss(const BasicTensor<T>& probs, std::span<const std::uint8_t> targets, double gamma);

// Linear warmup from 0 over warmup_iters, then lr, multiplied once by
// decay_factor from decay_at_iter onwards.
double lr_at(std::size_t iter, const TrainConfig& config);

struct AdamState {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::size_t step = 0;
    std::vector<std::vector<float>> first_moment;
    std::vector<std::vector<float>> second_moment;

    static AdamState for_parameters(const std::vector<NamedParameter<float>>& params, const TrainConfig& config);
};

// Bias-corrected Adam update, in place. A parameter without a gradient buffer
// is treated as having zero gradient. NumericError names the parameter when a
// gradient is not finite.
void adam_step(std::vector<NamedParameter<float>>& params, AdamState& state, double lr);

struct TensorRecord {
    std::string name;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<float> values;

    bool operator==(const TensorRecord&) const = default;
};

// Everything needed to continue training bit-for-bit.
struct Checkpoint {
    TrainConfig train;
    ModelConfig model;
    std::size_t iteration = 0;
    std::size_t adam_step = 0;
    std::string sampler_state;
    std::vector<std::size_t> order;
    std::size_t cursor = 0;
    std::vector<TensorRecord> params;
    std::vector<TensorRecord> first_moment;
    std::vector<TensorRecord> second_moment;

    bool operator==(const Checkpoint&) const = default;
};

// "HGCK" | version u32 | json length u32 | UTF-8 JSON | f32 LE tensors
// (parameters, then Adam first moments, then second moments; shapes in the JSON).
inline constexpr std::uint32_t kCheckpointVersion = 1;
std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& checkpoint);
Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes);
void write_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint read_checkpoint(const std::filesystem::path& path);

Model model_from_checkpoint(const Checkpoint& checkpoint);

// Throws DataError before any training if the dataset cannot feed a model
// built from `config`.
void preflight(const Dataset& dataset, const TrainConfig& config);

// Throws DimensionError naming the mismatched dims.
void check_compatible(const Dataset& dataset, const ModelConfig& model);

class Trainer {
   public:
    Trainer(const TrainConfig& config, const Dataset& train_set);
    Trainer(const Checkpoint& checkpoint, const Dataset& train_set);

    // One iteration: batch_size graphs, gradients averaged, one Adam update.
    // Returns the mean loss over the batch.
    double step();

    std::size_t iteration() const { return iteration_; }
    const TrainConfig& config() const { return config_; }
    const Model& model() const { return model_; }
    Checkpoint checkpoint() const;

   private:
    std::size_t next_index();

    TrainConfig config_;
    const Dataset* data_;
    Model model_;
    AdamState adam_;
    Rng sampler_;
    std::vector<std::size_t> order_;
    std::size_t cursor_ = 0;
    std::size_t iteration_ = 0;
};

struct MetricRow {
    std::size_t iter = 0;
    double loss = 0.0;
    double lr = 0.0;
    std::optional<double> map;
    std::optional<double> roc_auc;
};

std::string history_csv(const std::vector<MetricRow>& rows);

struct TrainOptions {
    const Dataset* validation = nullptr;
    const Checkpoint* resume = nullptr;
    std::function<void(const Trainer&, const MetricRow&)> on_step;
};

struct TrainResult {
    Model model;
    std::vector<MetricRow> history;
    Checkpoint checkpoint;
    std::optional<EvalResult> validation;
};

// Runs until config.max_iters (continuing from options.resume if given).
TrainResult train(const Dataset& train_set, const TrainConfig& config, const TrainOptions& options = {});

struct SeedSummary {
    std::vector<std::uint64_t> seeds;
    std::vector<EvalResult> results;
    double map_mean = 0.0;
    double map_std = 0.0;
    double auc_mean = 0.0;
    double auc_std = 0.0;
};

// Splits with config.split_seed, then trains and evaluates once per seed.
// Std is the sample standard deviation (0 for a single seed). on_run sees
// each finished run before the next starts.
SeedSummary run_seeds(const Dataset& dataset, const TrainConfig& config, const std::vector<std::uint64_t>& seeds,
                      const std::function<void(std::uint64_t, const TrainResult&)>& on_run = {});

nlohmann::json to_json(const SeedSummary& summary);

}  // namespace hgnn
