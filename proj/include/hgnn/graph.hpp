#pragma once

#include <cstddef>

#include "hgnn/tensor.hpp"

namespace hgnn {

// Temporal connection rule for one edge type: a node links to `span`
// neighbours per direction, spaced `dilation` indices apart.
struct EdgeRule {
    std::size_t span = 0;
    std::size_t dilation = 1;

    bool operator==(const EdgeRule&) const = default;
};

// One rule per edge type: audio-audio, video-video, video->audio.
struct EdgeRules {
    EdgeRule audio{6, 3};
    EdgeRule video{4, 4};
    EdgeRule cross{3, 1};

    bool operator==(const EdgeRules&) const = default;
};

void validate(const EdgeRule& rule);

// Undirected intra-modality adjacency without self-edges: i ~ j iff
// |i - j| = dilation * k for some 1 <= k <= span.
BinaryMatrix temporal_edges(std::size_t n_nodes, const EdgeRule& rule);

// Video index an audio node is aligned to: round(i * (n_video-1) / (n_audio-1)),
// with halves rounded up and 0 when n_audio == 1.
std::size_t cross_modal_anchor(std::size_t audio_index, std::size_t n_audio, std::size_t n_video);

// Bipartite mask [n_audio x n_video]; row i marks the video nodes within
// +-span dilated steps of the anchor, clipped to the valid range.
BinaryMatrix cross_modal_edges(std::size_t n_audio, std::size_t n_video, const EdgeRule& rule);

// D^-1/2 (A + I) D^-1/2 with D the degree matrix of A + I.
template <typename T>
BasicTensor<T> normalize_adjacency(const BinaryMatrix& adj);

// D_a^-1/2 A D_v^-1/2 for a bipartite mask; zero-degree rows/cols stay zero.
template <typename T>
BasicTensor<T> normalize_bipartite(const BinaryMatrix& adj);

template <typename T>
struct BasicHeteroGraph {
    BasicTensor<T> audio;  // [n_audio x d_audio]
    BasicTensor<T> video;  // [n_video x d_video]
    BinaryMatrix edges_aa;
    BinaryMatrix edges_vv;
    BinaryMatrix edges_va;  // rows receive (audio), cols send (video)
    BasicTensor<T> adj_aa;  // normalized
    BasicTensor<T> adj_vv;  // normalized
    BasicTensor<T> adj_va;  // bipartite-normalized, used by the non-attentive fusion

    std::size_t n_audio() const { return audio.rows(); }
    std::size_t n_video() const { return video.rows(); }

    template <typename U>
    BasicHeteroGraph<U> cast() const {
        return {audio.template cast<U>(),  video.template cast<U>(),  edges_aa,
                edges_vv,                  edges_va,                  adj_aa.template cast<U>(),
                adj_vv.template cast<U>(), adj_va.template cast<U>()};
    }
};

using HeteroGraph = BasicHeteroGraph<float>;

template <typename T>
BasicHeteroGraph<T> build_hetero_graph(BasicTensor<T> audio, BasicTensor<T> video, const EdgeRules& rules);

}  // namespace hgnn
