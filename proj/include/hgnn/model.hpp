#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "hgnn/graph.hpp"
#include "hgnn/layers.hpp"
#include "hgnn/tensor.hpp"

namespace hgnn {

enum class PoolingMode { kLearned, kMean, kMax, kSum };
enum class Modality { kBoth, kAudioOnly, kVideoOnly };
enum class FusionKind { kAttention, kGraphConv };

std::string to_string(PoolingMode mode);
std::string to_string(Modality modality);
std::string to_string(FusionKind kind);
PoolingMode parse_pooling(std::string_view text);
Modality parse_modality(std::string_view text);
FusionKind parse_fusion(std::string_view text);

struct ModelConfig {
    std::size_t audio_dim = 128;
    std::size_t video_dim = 1024;
    std::size_t hidden = 512;
    std::size_t layers = 4;
    std::size_t classes = 33;
    // Node counts fix the length of the learned pooling vectors.
    std::size_t n_audio = 40;
    std::size_t n_video = 100;
    PoolingMode pooling = PoolingMode::kLearned;
    bool fusion_enabled = true;
    FusionKind fusion = FusionKind::kAttention;
    Modality modality = Modality::kBoth;

    bool uses_audio() const { return modality != Modality::kVideoOnly; }
    bool uses_video() const { return modality != Modality::kAudioOnly; }
    bool has_fusion() const { return fusion_enabled && modality == Modality::kBoth; }
    std::size_t embedding_width() const { return (uses_audio() && uses_video() ? 2 : 1) * hidden; }

    bool operator==(const ModelConfig&) const = default;
};

void validate(const ModelConfig& config);

template <typename T>
struct NamedParameter {
    std::string name;
    BasicTensor<T> tensor;
};

template <typename T>
struct ForwardResult {
    BasicTensor<T> embedding;  // h_G, [1 x embedding_width]
    BasicTensor<T> logits;     // [1 x C]
    BasicTensor<T> probs;      // sigmoid(logits)
    std::vector<BasicTensor<T>> attention;  // one alpha matrix per layer with attention fusion
};

template <typename T>
class HgnnModel {
   public:
    HgnnModel() = default;

    // Xavier-initialised weights; learned pooling vectors start at 1/n and the
    // classifier bias at zero.
    static HgnnModel init(const ModelConfig& config, Rng& rng);

    const ModelConfig& config() const { return config_; }
    const std::vector<HeteroLayer<T>>& layers() const { return layers_; }
    std::vector<HeteroLayer<T>>& layers() { return layers_; }
    const BasicTensor<T>& pool_audio() const { return pool_audio_; }
    const BasicTensor<T>& pool_video() const { return pool_video_; }
    const BasicTensor<T>& classifier_weight() const { return classifier_weight_; }
    const BasicTensor<T>& classifier_bias() const { return classifier_bias_; }

    // Learnable tensors in a fixed declared order (checkpoint order).
    std::vector<NamedParameter<T>> parameters() const;
    void zero_grad();

    // Throws DimensionError when the graph does not fit this model.
    void check_graph(const BasicHeteroGraph<T>& graph) const;

    // Same config, values converted to U.
    template <typename U>
    HgnnModel<U> cast() const;

   private:
    ModelConfig config_;
    std::vector<HeteroLayer<T>> layers_;
    BasicTensor<T> pool_audio_;  // [n_audio x 1], learned pooling only
    BasicTensor<T> pool_video_;  // [n_video x 1], learned pooling only
    BasicTensor<T> classifier_weight_;
    BasicTensor<T> classifier_bias_;
};

using Model = HgnnModel<float>;

// h_G = [Psi_a(H_a) | Psi_v(H_v)]; single-modality models pool one side.
template <typename T>
BasicTensor<T> pool(const HgnnModel<T>& model, const BasicTensor<T>& h_audio, const BasicTensor<T>& h_video);

// logits = h_G W + b.
template <typename T>
BasicTensor<T> classify(const HgnnModel<T>& model, const BasicTensor<T>& embedding);

template <typename T>
ForwardResult<T> model_forward(const HgnnModel<T>& model, const BasicHeteroGraph<T>& graph);

template <typename T>
std::size_t count_params(const HgnnModel<T>& model);

template <typename T>
template <typename U>
HgnnModel<U> HgnnModel<T>::cast() const {
    Rng rng(0);
    HgnnModel<U> out = HgnnModel<U>::init(config_, rng);
    auto src = parameters();
    auto dst = out.parameters();
    for (std::size_t i = 0; i < src.size(); ++i) {
        auto values = dst[i].tensor.mutable_values();
        const auto from = src[i].tensor.values();
        for (std::size_t j = 0; j < values.size(); ++j) values[j] = static_cast<U>(from[j]);
    }
    return out;
}

}  // namespace hgnn
