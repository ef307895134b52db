#include "hgnn/model.hpp"

#include <array>
#include <utility>

#include "hgnn/errors.hpp"

namespace hgnn {

namespace {

constexpr std::array<std::pair<PoolingMode, std::string_view>, 4> kPoolingNames{{
    {PoolingMode::kLearned, "learned"},
    {PoolingMode::kMean, "mean"},
    {PoolingMode::kMax, "max"},
    {PoolingMode::kSum, "sum"},
}};
constexpr std::array<std::pair<Modality, std::string_view>, 3> kModalityNames{{
    {Modality::kBoth, "both"},
    {Modality::kAudioOnly, "audio_only"},
    {Modality::kVideoOnly, "video_only"},
}};
constexpr std::array<std::pair<FusionKind, std::string_view>, 2> kFusionNames{{
    {FusionKind::kAttention, "gat"},
    {FusionKind::kGraphConv, "gcn"},
}};

template <typename E, std::size_t N>
std::string name_of(const std::array<std::pair<E, std::string_view>, N>& table, E value) {
    for (const auto& [e, name] : table)
        if (e == value) return std::string(name);
    return "unknown";
}

template <typename E, std::size_t N>
E parse_name(const std::array<std::pair<E, std::string_view>, N>& table, std::string_view text, const char* what) {
    std::string valid;
    for (const auto& [e, name] : table) {
        if (name == text) return e;
        valid += valid.empty() ? "" : ", ";
        valid += name;
    }
    throw ConfigError("invalid " + std::string(what) + " '" + std::string(text) + "' (valid: " + valid + ")");
}

Reduction reduction_for(PoolingMode mode) {
    switch (mode) {
        case PoolingMode::kMean:
            return Reduction::kMean;
        case PoolingMode::kMax:
            return Reduction::kMax;
        default:
            return Reduction::kSum;
    }
}

template <typename T>
BasicTensor<T> uniform_pool(std::size_t n) {
    return BasicTensor<T>::full(n, 1, T(1) / static_cast<T>(n), true);
}

}  // namespace

std::string to_string(PoolingMode mode) { return name_of(kPoolingNames, mode); }
std::string to_string(Modality modality) { return name_of(kModalityNames, modality); }
std::string to_string(FusionKind kind) { return name_of(kFusionNames, kind); }
PoolingMode parse_pooling(std::string_view text) { return parse_name(kPoolingNames, text, "pooling mode"); }
Modality parse_modality(std::string_view text) { return parse_name(kModalityNames, text, "modality"); }
FusionKind parse_fusion(std::string_view text) { return parse_name(kFusionNames, text, "fusion kind"); }

void validate(const ModelConfig& c) {
    if (c.layers < 1) throw ConfigError("model needs at least one heterogeneous layer");
    if (c.hidden < 1 || c.classes < 1) throw ConfigError("hidden size and class count must be positive");
    if (c.uses_audio() && c.audio_dim < 1) throw ConfigError("audio feature dim must be positive");
    if (c.uses_video() && c.video_dim < 1) throw ConfigError("video feature dim must be positive");
    if (c.pooling == PoolingMode::kLearned && ((c.uses_audio() && c.n_audio < 1) || (c.uses_video() && c.n_video < 1))) {
        throw ConfigError("learned pooling needs positive node counts");
    }
}

template <typename T>
HgnnModel<T> HgnnModel<T>::init(const ModelConfig& config, Rng& rng) {
    validate(config);
    HgnnModel model;
    model.config_ = config;
    std::size_t audio_in = config.audio_dim;
    std::size_t video_in = config.video_dim;
    for (std::size_t k = 0; k < config.layers; ++k) {
        HeteroLayer<T> layer;
        if (config.uses_audio()) layer.audio = GcnLayer<T>::init(audio_in, config.hidden, rng);
        if (config.uses_video()) layer.video = GcnLayer<T>::init(video_in, config.hidden, rng);
        if (config.has_fusion()) {
            if (config.fusion == FusionKind::kAttention) {
                layer.attention_fusion = GatFusionLayer<T>::init(audio_in, video_in, config.hidden, rng);
            } else {
                layer.conv_fusion = GcnLayer<T>::init(video_in, config.hidden, rng);
            }
        }
        model.layers_.push_back(std::move(layer));
        audio_in = video_in = config.hidden;
    }
    if (config.pooling == PoolingMode::kLearned) {
        if (config.uses_audio()) model.pool_audio_ = uniform_pool<T>(config.n_audio);
        if (config.uses_video()) model.pool_video_ = uniform_pool<T>(config.n_video);
    }
    model.classifier_weight_ = xavier_init<T>(config.embedding_width(), config.classes, rng);
    model.classifier_bias_ = BasicTensor<T>::zeros(1, config.classes, true);
    return model;
}

template <typename T>
std::vector<NamedParameter<T>> HgnnModel<T>::parameters() const {
    std::vector<NamedParameter<T>> out;
    for (std::size_t k = 0; k < layers_.size(); ++k) {
        const auto prefix = "layers." + std::to_string(k) + ".";
        const auto& layer = layers_[k];
        if (layer.audio) out.push_back({prefix + "audio_gcn.weight", layer.audio->weight});
        if (layer.video) out.push_back({prefix + "video_gcn.weight", layer.video->weight});
        if (layer.attention_fusion) {
            out.push_back({prefix + "fusion.weight", layer.attention_fusion->weight});
            if (layer.attention_fusion->dst_weight) {
                out.push_back({prefix + "fusion.dst_weight", *layer.attention_fusion->dst_weight});
            }
            out.push_back({prefix + "fusion.attention", layer.attention_fusion->attention});
        }
        if (layer.conv_fusion) out.push_back({prefix + "fusion.weight", layer.conv_fusion->weight});
    }
    if (config_.pooling == PoolingMode::kLearned) {
        if (config_.uses_audio()) out.push_back({"pool.audio", pool_audio_});
        if (config_.uses_video()) out.push_back({"pool.video", pool_video_});
    }
    out.push_back({"classifier.weight", classifier_weight_});
    out.push_back({"classifier.bias", classifier_bias_});
    return out;
}

template <typename T>
void HgnnModel<T>::zero_grad() {
    for (auto& p : parameters()) p.tensor.zero_grad();
}

template <typename T>
void HgnnModel<T>::check_graph(const BasicHeteroGraph<T>& graph) const {
    const auto& c = config_;
    if (c.uses_audio() && graph.audio.cols() != c.audio_dim) {
        throw DimensionError("audio feature dim " + std::to_string(graph.audio.cols()) + " != model audio dim " +
                             std::to_string(c.audio_dim));
    }
    if (c.uses_video() && graph.video.cols() != c.video_dim) {
        throw DimensionError("video feature dim " + std::to_string(graph.video.cols()) + " != model video dim " +
                             std::to_string(c.video_dim));
    }
    if (c.pooling == PoolingMode::kLearned) {
        if (c.uses_audio() && graph.n_audio() != c.n_audio) {
            throw DimensionError("learned pooling expects " + std::to_string(c.n_audio) + " audio nodes, graph has " +
                                 std::to_string(graph.n_audio()));
        }
        if (c.uses_video() && graph.n_video() != c.n_video) {
            throw DimensionError("learned pooling expects " + std::to_string(c.n_video) + " video nodes, graph has " +
                                 std::to_string(graph.n_video()));
        }
    }
}

template <typename T>
BasicTensor<T> pool(const HgnnModel<T>& model, const BasicTensor<T>& h_audio, const BasicTensor<T>& h_video) {
    const auto& c = model.config();
    auto pool_one = [&](const BasicTensor<T>& h, const BasicTensor<T>& weights, const char* side) {
        if (c.pooling != PoolingMode::kLearned) return reduce_rows(h, reduction_for(c.pooling));
        if (weights.rows() != h.rows()) {
            throw DimensionError(std::string("learned pooling: ") + side + " weights have " +
                                 std::to_string(weights.rows()) + " entries for " + std::to_string(h.rows()) +
                                 " nodes");
        }
        return matmul(transpose(weights), h);
    };
    if (!c.uses_video()) return pool_one(h_audio, model.pool_audio(), "audio");
    if (!c.uses_audio()) return pool_one(h_video, model.pool_video(), "video");
    return concat_cols(pool_one(h_audio, model.pool_audio(), "audio"), pool_one(h_video, model.pool_video(), "video"));
}

template <typename T>
BasicTensor<T> classify(const HgnnModel<T>& model, const BasicTensor<T>& embedding) {
    if (embedding.cols() != model.classifier_weight().rows()) {
        throw DimensionError("classify: embedding " + embedding.shape() + " does not fit classifier " +
                             model.classifier_weight().shape());
    }
    return add(matmul(embedding, model.classifier_weight()), model.classifier_bias());
}

template <typename T>
ForwardResult<T> model_forward(const HgnnModel<T>& model, const BasicHeteroGraph<T>& graph) {
    model.check_graph(graph);
    ForwardResult<T> result;
    BasicTensor<T> h_audio = graph.audio;
    BasicTensor<T> h_video = graph.video;
    for (const auto& layer : model.layers()) {
        auto out = hetero_forward(layer, graph, h_audio, h_video);
        h_audio = std::move(out.audio);
        h_video = std::move(out.video);
        if (out.alpha) result.attention.push_back(std::move(*out.alpha));
    }
    result.embedding = pool(model, h_audio, h_video);
    result.logits = classify(model, result.embedding);
    result.probs = sigmoid(result.logits);
    return result;
}

template <typename T>
std::size_t count_params(const HgnnModel<T>& model) {
    std::size_t total = 0;
    for (const auto& p : model.parameters()) total += p.tensor.size();
    return total;
}

#define HGNN_INSTANTIATE(T)                                                                                  \
    template class HgnnModel<T>;                                                                             \
    template BasicTensor<T> pool(const HgnnModel<T>&, const BasicTensor<T>&, const BasicTensor<T>&);         \
    template BasicTensor<T> classify(const HgnnModel<T>&, const BasicTensor<T>&);                            \
    template ForwardResult<T> model_forward(const HgnnModel<T>&, const BasicHeteroGraph<T>&);                \
    template std::size_t count_params(const HgnnModel<T>&);

HGNN_INSTANTIATE(float)
HGNN_INSTANTIATE(double)

#undef HGNN_INSTANTIATE

}  // namespace hgnn
