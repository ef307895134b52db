#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace hgnn {

// Non-interpolated average precision over a descending-score ranking; equal
// scores keep their original order. nullopt when there are no positives.
std::optional<double> average_precision(std::span<const double> scores, std::span<const std::uint8_t> labels);

// Mann-Whitney AUC with midranks for tied scores. nullopt unless both
// classes are present.
std::optional<double> roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

struct EvalResult {
    std::vector<std::optional<double>> per_class_ap;
    std::vector<std::optional<double>> per_class_auc;
    std::optional<double> map;      // over classes with >= 1 positive
    std::optional<double> roc_auc;  // over classes with both labels present
    std::vector<std::size_t> positives;
    std::vector<std::size_t> negatives;
    std::vector<bool> tied_scores;  // class had equal scores somewhere
    std::vector<std::string> warnings;
};

// scores[item][class], labels[item][class].
EvalResult evaluate_scores(const std::vector<std::vector<double>>& scores,
                           const std::vector<std::vector<std::uint8_t>>& labels);

nlohmann::json to_json(const EvalResult& result);

}  // namespace hgnn
