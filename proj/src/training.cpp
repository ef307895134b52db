#include "hgnn/training.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "hgnn/errors.hpp"
#include "hgnn/evaluate.hpp"

namespace hgnn {

namespace {

constexpr std::uint64_t kSamplerSalt = 0x9E3779B97F4A7C15ULL;

std::vector<TensorRecord> records_of(const std::vector<NamedParameter<float>>& params,
                                     const std::vector<std::vector<float>>* buffers = nullptr) {
    std::vector<TensorRecord> out;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto& t = params[i].tensor;
        std::vector<float> values = buffers ? (*buffers)[i] : std::vector<float>(t.values().begin(), t.values().end());
        out.push_back({params[i].name, t.rows(), t.cols(), std::move(values)});
    }
    return out;
}

void check_records(const std::vector<NamedParameter<float>>& params, const std::vector<TensorRecord>& records,
                   const char* what) {
    if (params.size() != records.size()) {
        throw FormatError(std::string("checkpoint ") + what + " has " + std::to_string(records.size()) +
                          " tensors, model expects " + std::to_string(params.size()));
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto& p = params[i];
        const auto& r = records[i];
        if (p.name != r.name || p.tensor.rows() != r.rows || p.tensor.cols() != r.cols) {
            throw FormatError(std::string("checkpoint ") + what + " tensor '" + r.name + "' [" + std::to_string(r.rows) +
                              "x" + std::to_string(r.cols) + "] does not match model tensor '" + p.name + "' " +
                              p.tensor.shape());
        }
    }
}

std::pair<double, double> mean_and_std(const std::vector<double>& values) {
    if (values.empty()) return {0.0, 0.0};
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    if (values.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (const double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

}  // namespace

template <typename T>
BasicTensor<T> focal_loss(const BasicTensor<T>& probs, std::span<const std::uint8_t> targets, double gamma) {
    if (!(gamma >= 0.0)) throw ConfigError("focal loss gamma must be >= 0");
    if (targets.size() != probs.size()) {
        throw DimensionError("focal_loss: " + std::to_string(targets.size()) + " targets for probs " + probs.shape());
    }
    std::vector<T> pos(targets.size()), neg(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] > 1) throw DomainError("focal_loss targets must be 0 or 1");
        pos[i] = targets[i] ? T(1) : T(0);
        neg[i] = T(1) - pos[i];
    }
    const auto y = BasicTensor<T>::from_values(probs.rows(), probs.cols(), std::move(pos));
    const auto not_y = BasicTensor<T>::from_values(probs.rows(), probs.cols(), std::move(neg));
    const T g = static_cast<T>(gamma);
    const auto p = clamp(probs, static_cast<T>(kFocalClampEps), static_cast<T>(1.0 - kFocalClampEps));
    const auto q = affine(p, T(-1), T(1));
    const auto positive_term = mul(pow(q, g), log(p));
    const auto negative_term = mul(pow(p, g), log(q));
    return affine(sum(add(mul(y, positive_term), mul(not_y, negative_term))), T(-1));
}

template BasicTensor<float> focal_loss(const BasicTensor<float>&, std::span<const std::uint8_t>, double);
template BasicTensor<double> focal_loss(const BasicTensor<double>&, std::span<const std::uint8_t>, double);

double lr_at(std::size_t iter, const TrainConfig& c) {
    double rate = c.lr;
    if (iter < c.warmup_iters) rate = c.lr * static_cast<double>(iter) / static_cast<double>(c.warmup_iters);
    if (iter >= c.decay_at_iter) rate *= c.decay_factor;
    return rate;
}

AdamState AdamState::for_parameters(const std::vector<NamedParameter<float>>& params, const TrainConfig& config) {
    AdamState state;
    state.beta1 = config.beta1;
    state.beta2 = config.beta2;
    state.epsilon = config.epsilon;
    for (const auto& p : params) {
        state.first_moment.emplace_back(p.tensor.size(), 0.0f);
        state.second_moment.emplace_back(p.tensor.size(), 0.0f);
    }
    return state;
}

void adam_step(std::vector<NamedParameter<float>>& params, AdamState& state, double lr) {
    if (state.first_moment.size() != params.size() || state.second_moment.size() != params.size()) {
        throw DimensionError("Adam state tracks " + std::to_string(state.first_moment.size()) + " tensors, got " +
                             std::to_string(params.size()));
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto& t = params[i].tensor;
        if (state.first_moment[i].size() != t.size()) {
            throw DimensionError("Adam moment shape does not match parameter '" + params[i].name + "'");
        }
        if (!t.has_grad()) continue;
        for (const float g : t.grad()) {
            if (!std::isfinite(g)) {
                throw NumericError("non-finite gradient in parameter '" + params[i].name + "' " + t.shape());
            }
        }
    }
    ++state.step;
    const double t = static_cast<double>(state.step);
    const double bias1 = 1.0 - std::pow(state.beta1, t);
    const double bias2 = 1.0 - std::pow(state.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        auto& tensor = params[i].tensor;
        const bool has_grad = tensor.has_grad();
        const auto grad = tensor.grad();
        auto values = tensor.mutable_values();
        auto& m = state.first_moment[i];
        auto& v = state.second_moment[i];
        for (std::size_t j = 0; j < values.size(); ++j) {
            const double g = has_grad ? static_cast<double>(grad[j]) : 0.0;
            m[j] = static_cast<float>(state.beta1 * m[j] + (1.0 - state.beta1) * g);
            v[j] = static_cast<float>(state.beta2 * v[j] + (1.0 - state.beta2) * g * g);
            const double m_hat = m[j] / bias1;
            const double v_hat = v[j] / bias2;
            values[j] = static_cast<float>(values[j] - lr * m_hat / (std::sqrt(v_hat) + state.epsilon));
        }
    }
}

Model model_from_checkpoint(const Checkpoint& checkpoint) {
    Rng rng(0);
    Model model = Model::init(checkpoint.model, rng);
    auto params = model.parameters();
    check_records(params, checkpoint.params, "parameter");
    for (std::size_t i = 0; i < params.size(); ++i) {
        auto dst = params[i].tensor.mutable_values();
        std::copy(checkpoint.params[i].values.begin(), checkpoint.params[i].values.end(), dst.begin());
    }
    return model;
}

void check_compatible(const Dataset& dataset, const ModelConfig& model) {
    if (dataset.num_classes != model.classes) {
        throw DimensionError("dataset has " + std::to_string(dataset.num_classes) + " classes, model expects " +
                             std::to_string(model.classes));
    }
    if (model.uses_audio() && dataset.audio_dim != model.audio_dim) {
        throw DimensionError("dataset audio dim " + std::to_string(dataset.audio_dim) + " != model audio dim " +
                             std::to_string(model.audio_dim));
    }
    if (model.uses_video() && dataset.video_dim != model.video_dim) {
        throw DimensionError("dataset video dim " + std::to_string(dataset.video_dim) + " != model video dim " +
                             std::to_string(model.video_dim));
    }
    if (model.pooling == PoolingMode::kLearned) {
        for (const auto& s : dataset.samples) {
            if ((model.uses_audio() && s.graph.n_audio() != model.n_audio) ||
                (model.uses_video() && s.graph.n_video() != model.n_video)) {
                throw DimensionError("item '" + s.id + "' has " + std::to_string(s.graph.n_audio()) + " audio / " +
                                     std::to_string(s.graph.n_video()) + " video nodes; learned pooling expects " +
                                     std::to_string(model.n_audio) + " / " + std::to_string(model.n_video));
            }
        }
    }
}

void preflight(const Dataset& dataset, const TrainConfig& config) {
    validate(config);
    if (dataset.empty()) throw DataError("empty dataset");
    if (config.pooling == PoolingMode::kLearned && !dataset.uniform_node_counts()) {
        throw DataError("learned pooling needs every item to have the same audio/video node counts");
    }
    for (const auto& s : dataset.samples) {
        if (s.labels.size() != dataset.num_classes) {
            throw DataError("item '" + s.id + "' has " + std::to_string(s.labels.size()) + " label slots, expected " +
                            std::to_string(dataset.num_classes));
        }
        if (s.graph.audio.cols() != dataset.audio_dim || s.graph.video.cols() != dataset.video_dim) {
            throw DataError("item '" + s.id + "' feature dims differ from the dataset's");
        }
    }
}

Trainer::Trainer(const TrainConfig& config, const Dataset& train_set)
    : config_(config), data_(&train_set), sampler_(config.seed ^ kSamplerSalt) {
    preflight(train_set, config);
    const auto& first = train_set.samples.front().graph;
    const ModelConfig mc = model_config_for(config, train_set.audio_dim, train_set.video_dim, train_set.num_classes,
                                            first.n_audio(), first.n_video());
    Rng init_rng(config.seed);
    model_ = Model::init(mc, init_rng);
    adam_ = AdamState::for_parameters(model_.parameters(), config_);
    order_.resize(train_set.size());
    std::iota(order_.begin(), order_.end(), 0);
    sampler_.shuffle(order_);
}

Trainer::Trainer(const Checkpoint& checkpoint, const Dataset& train_set)
    : config_(checkpoint.train), data_(&train_set) {
    preflight(train_set, config_);
    model_ = model_from_checkpoint(checkpoint);
    check_compatible(train_set, model_.config());
    const auto params = model_.parameters();
    check_records(params, checkpoint.first_moment, "first-moment");
    check_records(params, checkpoint.second_moment, "second-moment");
    adam_ = AdamState::for_parameters(params, config_);
    adam_.step = checkpoint.adam_step;
    for (std::size_t i = 0; i < params.size(); ++i) {
        adam_.first_moment[i] = checkpoint.first_moment[i].values;
        adam_.second_moment[i] = checkpoint.second_moment[i].values;
    }
    sampler_.set_state(checkpoint.sampler_state);
    if (checkpoint.order.size() != train_set.size() || checkpoint.cursor > checkpoint.order.size()) {
        throw DataError("checkpoint sampler was built for " + std::to_string(checkpoint.order.size()) +
                        " training items, dataset has " + std::to_string(train_set.size()));
    }
    order_ = checkpoint.order;
    cursor_ = checkpoint.cursor;
    iteration_ = checkpoint.iteration;
}

std::size_t Trainer::next_index() {
    if (cursor_ == order_.size()) {
        sampler_.shuffle(order_);
        cursor_ = 0;
    }
    return order_[cursor_++];
}

double Trainer::step() {
    model_.zero_grad();
    const double lr = lr_at(iteration_, config_);
    const float scale = 1.0f / static_cast<float>(config_.batch_size);
    double total = 0.0;
    for (std::size_t b = 0; b < config_.batch_size; ++b) {
        const auto& sample = data_->samples[next_index()];
        const auto out = model_forward(model_, sample.graph);
        const auto loss = affine(focal_loss(out.probs, sample.labels, config_.gamma), scale);
        loss.backward();
        total += loss.item();
    }
    auto params = model_.parameters();
    adam_step(params, adam_, lr);
    ++iteration_;
    return total;
}

Checkpoint Trainer::checkpoint() const {
    Checkpoint c;
    c.train = config_;
    c.model = model_.config();
    c.iteration = iteration_;
    c.adam_step = adam_.step;
    c.sampler_state = sampler_.state();
    c.order = order_;
    c.cursor = cursor_;
    const auto params = model_.parameters();
    c.params = records_of(params);
    c.first_moment = records_of(params, &adam_.first_moment);
    c.second_moment = records_of(params, &adam_.second_moment);
    return c;
}

std::string history_csv(const std::vector<MetricRow>& rows) {
    std::ostringstream out;
    out.precision(9);
    out << "iter,loss,lr,map,roc_auc\n";
    for (const auto& r : rows) {
        out << r.iter << ',' << r.loss << ',' << r.lr << ',';
        if (r.map) out << *r.map;
        out << ',';
        if (r.roc_auc) out << *r.roc_auc;
        out << '\n';
    }
    return out.str();
}

TrainResult train(const Dataset& train_set, const TrainConfig& config, const TrainOptions& options) {
    preflight(train_set, config);
    Trainer trainer = options.resume ? Trainer(*options.resume, train_set) : Trainer(config, train_set);
    if (options.validation) {
        if (options.validation->empty()) throw DataError("empty validation split");
        check_compatible(*options.validation, trainer.model().config());
    }
    TrainResult result;
    const std::size_t eval_every = config.eval_every;
    while (trainer.iteration() < config.max_iters) {
        MetricRow row;
        row.iter = trainer.iteration();
        row.lr = lr_at(row.iter, trainer.config());
        row.loss = trainer.step();
        const bool last = trainer.iteration() == config.max_iters;
        if (options.validation && (last || (eval_every > 0 && trainer.iteration() % eval_every == 0))) {
            const EvalResult eval = evaluate(trainer.model(), *options.validation);
            row.map = eval.map;
            row.roc_auc = eval.roc_auc;
            if (last) result.validation = eval;
        }
        result.history.push_back(row);
        if (options.on_step) options.on_step(trainer, row);
    }
    if (options.validation && !result.validation) result.validation = evaluate(trainer.model(), *options.validation);
    result.model = trainer.model();
    result.checkpoint = trainer.checkpoint();
    return result;
}

SeedSummary run_seeds(const Dataset& dataset, const TrainConfig& config, const std::vector<std::uint64_t>& seeds,
                      const std::function<void(std::uint64_t, const TrainResult&)>& on_run) {
    if (seeds.empty()) throw ConfigError("run_seeds needs at least one seed");
    const auto [train_set, val_set] = split_dataset(dataset, config.split_seed, config.train_fraction);
    SeedSummary summary;
    std::vector<double> maps, aucs;
    for (const auto seed : seeds) {
        TrainConfig c = config;
        c.seed = seed;
        TrainOptions options;
        options.validation = &val_set;
        auto result = train(train_set, c, options);
        if (on_run) on_run(seed, result);
        summary.seeds.push_back(seed);
        if (result.validation->map) maps.push_back(*result.validation->map);
        if (result.validation->roc_auc) aucs.push_back(*result.validation->roc_auc);
        summary.results.push_back(std::move(*result.validation));
    }
    std::tie(summary.map_mean, summary.map_std) = mean_and_std(maps);
    std::tie(summary.auc_mean, summary.auc_std) = mean_and_std(aucs);
    return summary;
}

nlohmann::json to_json(const SeedSummary& s) {
    nlohmann::json j;
    j["seeds"] = s.seeds;
    j["map_mean"] = s.map_mean;
    j["map_std"] = s.map_std;
    j["roc_auc_mean"] = s.auc_mean;
    j["roc_auc_std"] = s.auc_std;
    j["runs"] = nlohmann::json::array();
    for (const auto& r : s.results) j["runs"].push_back(to_json(r));
    return j;
}

}  // namespace hgnn
