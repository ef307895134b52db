#include "hgnn/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "hgnn/errors.hpp"

namespace hgnn {

namespace {

void check_lengths(std::span<const double> scores, std::span<const std::uint8_t> labels) {
    if (scores.size() != labels.size()) {
        throw DimensionError("metric inputs differ in length: " + std::to_string(scores.size()) + " scores, " +
                             std::to_string(labels.size()) + " labels");
    }
}

bool has_ties(std::span<const double> scores) {
    std::vector<double> sorted(scores.begin(), scores.end());
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

std::optional<double> mean_of(const std::vector<std::optional<double>>& values) {
    double total = 0.0;
    std::size_t n = 0;
    for (const auto& v : values) {
        if (v) {
            total += *v;
            ++n;
        }
    }
    if (n == 0) return std::nullopt;
    return total / static_cast<double>(n);
}

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

}  // namespace

std::optional<double> average_precision(std::span<const double> scores, std::span<const std::uint8_t> labels) {
    check_lengths(scores, labels);
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    double hits = 0.0;
    double total = 0.0;
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        if (!labels[order[rank]]) continue;
        hits += 1.0;
        total += hits / static_cast<double>(rank + 1);
    }
    if (hits == 0.0) return std::nullopt;
    return total / hits;
}

std::optional<double> roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
    check_lengths(scores, labels);
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    // 1-based midranks.
    std::vector<double> rank(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = mid;
        i = j + 1;
    }
    double n_pos = 0.0, rank_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i]) {
            n_pos += 1.0;
            rank_sum += rank[i];
        }
    }
    const double n_neg = static_cast<double>(n) - n_pos;
    if (n_pos == 0.0 || n_neg == 0.0) return std::nullopt;
    return (rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

EvalResult evaluate_scores(const std::vector<std::vector<double>>& scores,
                           const std::vector<std::vector<std::uint8_t>>& labels) {
    if (scores.size() != labels.size()) throw DimensionError("score and label item counts differ");
    if (scores.empty()) throw DataError("cannot evaluate an empty dataset");
    const std::size_t classes = scores.front().size();
    EvalResult result;
    std::vector<double> column(scores.size());
    std::vector<std::uint8_t> truth(scores.size());
    for (std::size_t c = 0; c < classes; ++c) {
        for (std::size_t i = 0; i < scores.size(); ++i) {
            if (scores[i].size() != classes || labels[i].size() != classes) {
                throw DimensionError("item " + std::to_string(i) + " has the wrong number of classes");
            }
            column[i] = scores[i][c];
            truth[i] = labels[i][c];
        }
        const auto pos = static_cast<std::size_t>(std::count(truth.begin(), truth.end(), std::uint8_t{1}));
        result.positives.push_back(pos);
        result.negatives.push_back(truth.size() - pos);
        result.per_class_ap.push_back(average_precision(column, truth));
        result.per_class_auc.push_back(roc_auc(column, truth));
        result.tied_scores.push_back(has_ties(column));
        if (pos == 0) {
            result.warnings.push_back("class " + std::to_string(c) + " has no positives; excluded from mAP and ROC-AUC");
        } else if (pos == truth.size()) {
            result.warnings.push_back("class " + std::to_string(c) + " has no negatives; excluded from ROC-AUC");
        }
    }
    result.map = mean_of(result.per_class_ap);
    result.roc_auc = mean_of(result.per_class_auc);
    return result;
}

nlohmann::json to_json(const EvalResult& r) {
    nlohmann::json j;
    j["map"] = optional_json(r.map);
    j["roc_auc"] = optional_json(r.roc_auc);
    j["per_class_ap"] = nlohmann::json::array();
    j["per_class_auc"] = nlohmann::json::array();
    for (const auto& v : r.per_class_ap) j["per_class_ap"].push_back(optional_json(v));
    for (const auto& v : r.per_class_auc) j["per_class_auc"].push_back(optional_json(v));
    j["positives"] = r.positives;
    j["negatives"] = r.negatives;
    j["tied_scores"] = r.tied_scores;
    j["warnings"] = r.warnings;
    return j;
}

}  // namespace hgnn
