#include "hgnn/evaluate.hpp"

namespace hgnn {

EvalResult evaluate(const Model& model, const Dataset& dataset) {
    NoGradGuard no_grad;
    std::vector<std::vector<double>> scores;
    std::vector<std::vector<std::uint8_t>> labels;
    scores.reserve(dataset.size());
    labels.reserve(dataset.size());
    for (const auto& sample : dataset.samples) {
        const auto out = model_forward(model, sample.graph);
        scores.emplace_back(out.probs.values().begin(), out.probs.values().end());
        labels.push_back(sample.labels);
    }
    return evaluate_scores(scores, labels);
}

}  // namespace hgnn
