#include "hgnn/layers.hpp"

#include <string>

#include "hgnn/errors.hpp"

namespace hgnn {

template <typename T>
GcnLayer<T> GcnLayer<T>::init(std::size_t d_in, std::size_t d_out, Rng& rng) {
    return {xavier_init<T>(d_in, d_out, rng)};
}

template <typename T>
BasicTensor<T> gcn_forward(const GcnLayer<T>& layer, const BasicTensor<T>& h, const BasicTensor<T>& adj_norm) {
    if (adj_norm.cols() != h.rows()) {
        throw DimensionError("gcn_forward: adjacency " + adj_norm.shape() + " does not match features " + h.shape());
    }
    return relu(matmul(adj_norm, matmul(h, layer.weight)));
}

template <typename T>
GatFusionLayer<T> GatFusionLayer<T>::init(std::size_t d_audio_in, std::size_t d_video_in, std::size_t d_out,
                                          Rng& rng) {
    GatFusionLayer layer;
    layer.weight = xavier_init<T>(d_video_in, d_out, rng);
    if (d_audio_in != d_video_in) layer.dst_weight = xavier_init<T>(d_audio_in, d_out, rng);
    layer.attention = xavier_init<T>(2 * d_out, 1, rng);
    return layer;
}

template <typename T>
GatOutput<T> gat_fusion_forward(const GatFusionLayer<T>& layer, const BasicTensor<T>& h_video,
                                const BinaryMatrix& mask_va, const BasicTensor<T>& h_audio) {
    if (mask_va.rows() != h_audio.rows() || mask_va.cols() != h_video.rows()) {
        throw DimensionError("gat_fusion_forward: mask " + std::to_string(mask_va.rows()) + "x" +
                             std::to_string(mask_va.cols()) + " does not match audio " + h_audio.shape() +
                             " / video " + h_video.shape());
    }
    const std::size_t d = layer.out_dim();
    const BasicTensor<T> z_video = matmul(h_video, layer.weight);
    const BasicTensor<T> z_audio = matmul(h_audio, layer.dst_weight ? *layer.dst_weight : layer.weight);
    const BasicTensor<T> score_audio = matmul(z_audio, slice_rows(layer.attention, 0, d));
    const BasicTensor<T> score_video = matmul(z_video, slice_rows(layer.attention, d, 2 * d));
    const BasicTensor<T> scores = leaky_relu(outer_sum(score_audio, transpose(score_video)), layer.negative_slope);
    BasicTensor<T> alpha = row_softmax_masked(scores, mask_va);
    return {matmul(alpha, z_video), alpha};
}

template <typename T>
HeteroOutput<T> hetero_forward(const HeteroLayer<T>& layer, const BasicHeteroGraph<T>& graph,
                               const BasicTensor<T>& h_audio, const BasicTensor<T>& h_video) {
    HeteroOutput<T> out;
    if (layer.video) out.video = gcn_forward(*layer.video, h_video, graph.adj_vv);
    if (layer.audio) {
        out.audio = gcn_forward(*layer.audio, h_audio, graph.adj_aa);
        if (layer.attention_fusion) {
            auto fused = gat_fusion_forward(*layer.attention_fusion, h_video, graph.edges_va, h_audio);
            out.audio = add(out.audio, relu(fused.message));
            out.alpha = std::move(fused.alpha);
        } else if (layer.conv_fusion) {
            out.audio = add(out.audio, gcn_forward(*layer.conv_fusion, h_video, graph.adj_va));
        }
    }
    return out;
}

template struct GcnLayer<float>;
template struct GcnLayer<double>;
template struct GatFusionLayer<float>;
template struct GatFusionLayer<double>;
template BasicTensor<float> gcn_forward(const GcnLayer<float>&, const BasicTensor<float>&, const BasicTensor<float>&);
template BasicTensor<double> gcn_forward(const GcnLayer<double>&, const BasicTensor<double>&,
                                         const BasicTensor<double>&);
template GatOutput<float> gat_fusion_forward(const GatFusionLayer<float>&, const BasicTensor<float>&,
                                             const BinaryMatrix&, const BasicTensor<float>&);
template GatOutput<double> gat_fusion_forward(const GatFusionLayer<double>&, const BasicTensor<double>&,
                                              const BinaryMatrix&, const BasicTensor<double>&);
template HeteroOutput<float> hetero_forward(const HeteroLayer<float>&, const BasicHeteroGraph<float>&,
                                            const BasicTensor<float>&, const BasicTensor<float>&);
template HeteroOutput<double> hetero_forward(const HeteroLayer<double>&, const BasicHeteroGraph<double>&,
                                             const BasicTensor<double>&, const BasicTensor<double>&);

}  // namespace hgnn
