#pragma once

#include <cstddef>
#include <optional>

#include "hgnn/graph.hpp"
#include "hgnn/tensor.hpp"

namespace hgnn {

// Graph convolution: ReLU(A_norm H W).
template <typename T>
struct GcnLayer {
    BasicTensor<T> weight;  // [d_in x d_out]

    static GcnLayer init(std::size_t d_in, std::size_t d_out, Rng& rng);
};

template <typename T>
BasicTensor<T> gcn_forward(const GcnLayer<T>& layer, const BasicTensor<T>& h, const BasicTensor<T>& adj_norm);

// Single-head bipartite attention carrying video messages into audio nodes.
//
// Scores are e_ij = LeakyReLU(a^T [W_dst h_i^a || W h_j^v]) over the video
// neighbours j of audio node i, normalised with a masked softmax, and the
// message is sum_j alpha_ij W h_j^v. W_dst is W itself whenever the audio and
// video inputs share a width; the first layer, where raw feature widths
// differ, carries its own audio projection.
template <typename T>
struct GatFusionLayer {
    BasicTensor<T> weight;                      // [d_video_in x d_out]
    std::optional<BasicTensor<T>> dst_weight;   // [d_audio_in x d_out], first layer only
    BasicTensor<T> attention;                   // [2 d_out x 1]
    T negative_slope = T(0.2);

    static GatFusionLayer init(std::size_t d_audio_in, std::size_t d_video_in, std::size_t d_out, Rng& rng);
    std::size_t out_dim() const { return weight.cols(); }
};

template <typename T>
struct GatOutput {
    BasicTensor<T> message;  // [n_audio x d_out], no activation
    BasicTensor<T> alpha;    // [n_audio x n_video]
};

template <typename T>
GatOutput<T> gat_fusion_forward(const GatFusionLayer<T>& layer, const BasicTensor<T>& h_video,
                                const BinaryMatrix& mask_va, const BasicTensor<T>& h_audio);

// Three-flow layer. Either modality branch is absent in single-modality
// models; the fusion branch is attention, a plain GCN over the bipartite
// adjacency, or absent.
template <typename T>
struct HeteroLayer {
    std::optional<GcnLayer<T>> audio;
    std::optional<GcnLayer<T>> video;
    std::optional<GatFusionLayer<T>> attention_fusion;
    std::optional<GcnLayer<T>> conv_fusion;
};

template <typename T>
struct HeteroOutput {
    BasicTensor<T> audio;
    BasicTensor<T> video;
    std::optional<BasicTensor<T>> alpha;
};

// audio' = ReLU(A_a H_a W1) + ReLU(fusion(H_v)),  video' = ReLU(A_v H_v W3).
template <typename T>
HeteroOutput<T> hetero_forward(const HeteroLayer<T>& layer, const BasicHeteroGraph<T>& graph,
                               const BasicTensor<T>& h_audio, const BasicTensor<T>& h_video);

}  // namespace hgnn
