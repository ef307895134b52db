#include "hgnn/graph.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "hgnn/errors.hpp"

namespace hgnn {

void validate(const EdgeRule& rule) {
    if (rule.dilation < 1) throw ConfigError("edge rule dilation must be >= 1");
}

BinaryMatrix temporal_edges(std::size_t n_nodes, const EdgeRule& rule) {
    validate(rule);
    if (n_nodes == 0) throw DimensionError("temporal_edges requires at least one node");
    BinaryMatrix adj(n_nodes, n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
        for (std::size_t k = 1; k <= rule.span; ++k) {
            const std::size_t j = i + rule.dilation * k;
            if (j >= n_nodes) break;
            adj.set(i, j);
            adj.set(j, i);
        }
    }
    return adj;
}

std::size_t cross_modal_anchor(std::size_t audio_index, std::size_t n_audio, std::size_t n_video) {
    if (n_audio <= 1) return 0;
    // floor(x + 1/2) in integer arithmetic, x = i (n_video-1) / (n_audio-1).
    const std::size_t num = 2 * audio_index * (n_video - 1) + (n_audio - 1);
    return num / (2 * (n_audio - 1));
}

BinaryMatrix cross_modal_edges(std::size_t n_audio, std::size_t n_video, const EdgeRule& rule) {
    validate(rule);
    if (n_audio == 0 || n_video == 0) throw DimensionError("cross_modal_edges requires nodes in both modalities");
    BinaryMatrix adj(n_audio, n_video);
    const auto last = static_cast<long long>(n_video) - 1;
    const auto span = static_cast<long long>(rule.span);
    const auto step = static_cast<long long>(rule.dilation);
    for (std::size_t i = 0; i < n_audio; ++i) {
        const auto anchor = static_cast<long long>(cross_modal_anchor(i, n_audio, n_video));
        for (long long k = -span; k <= span; ++k) {
            const long long j = anchor + step * k;
            if (j >= 0 && j <= last) adj.set(i, static_cast<std::size_t>(j));
        }
    }
    return adj;
}

template <typename T>
BasicTensor<T> normalize_adjacency(const BinaryMatrix& adj) {
    if (adj.rows() != adj.cols()) {
        throw DimensionError("normalize_adjacency: adjacency is not square (" + std::to_string(adj.rows()) + "x" +
                             std::to_string(adj.cols()) + ")");
    }
    if (!adj.symmetric()) throw DimensionError("normalize_adjacency: adjacency is not symmetric");
    const std::size_t n = adj.rows();
    std::vector<double> inv_sqrt(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool self = adj(i, i);
        inv_sqrt[i] = 1.0 / std::sqrt(static_cast<double>(adj.row_count(i) + (self ? 0 : 1)));
    }
    std::vector<T> out(n * n, T(0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (adj(i, j) || i == j) out[i * n + j] = static_cast<T>(inv_sqrt[i] * inv_sqrt[j]);
        }
    }
    return BasicTensor<T>::from_values(n, n, std::move(out));
}

template <typename T>
BasicTensor<T> normalize_bipartite(const BinaryMatrix& adj) {
    const std::size_t m = adj.rows(), n = adj.cols();
    std::vector<double> row_deg(m, 0.0), col_deg(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (adj(i, j)) {
                row_deg[i] += 1.0;
                col_deg[j] += 1.0;
            }
    std::vector<T> out(m * n, T(0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (adj(i, j)) out[i * n + j] = static_cast<T>(1.0 / std::sqrt(row_deg[i] * col_deg[j]));
    return BasicTensor<T>::from_values(m, n, std::move(out));
}

template <typename T>
BasicHeteroGraph<T> build_hetero_graph(BasicTensor<T> audio, BasicTensor<T> video, const EdgeRules& rules) {
    if (audio.rows() == 0 || audio.cols() == 0) throw DimensionError("audio feature matrix is empty");
    if (video.rows() == 0 || video.cols() == 0) throw DimensionError("video feature matrix is empty");
    BasicHeteroGraph<T> g;
    g.edges_aa = temporal_edges(audio.rows(), rules.audio);
    g.edges_vv = temporal_edges(video.rows(), rules.video);
    g.edges_va = cross_modal_edges(audio.rows(), video.rows(), rules.cross);
    g.adj_aa = normalize_adjacency<T>(g.edges_aa);
    g.adj_vv = normalize_adjacency<T>(g.edges_vv);
    g.adj_va = normalize_bipartite<T>(g.edges_va);
    g.audio = std::move(audio);
    g.video = std::move(video);
    return g;
}

template BasicTensor<float> normalize_adjacency<float>(const BinaryMatrix&);
template BasicTensor<double> normalize_adjacency<double>(const BinaryMatrix&);
template BasicTensor<float> normalize_bipartite<float>(const BinaryMatrix&);
template BasicTensor<double> normalize_bipartite<double>(const BinaryMatrix&);
template BasicHeteroGraph<float> build_hetero_graph(BasicTensor<float>, BasicTensor<float>, const EdgeRules&);
template BasicHeteroGraph<double> build_hetero_graph(BasicTensor<double>, BasicTensor<double>, const EdgeRules&);

}  // namespace hgnn
