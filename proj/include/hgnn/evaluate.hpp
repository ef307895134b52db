#pragma once

#include "hgnn/dataset.hpp"
#include "hgnn/metrics.hpp"
#include "hgnn/model.hpp"

namespace hgnn {

// Scores every graph with gradients disabled and computes per-class AP/AUC.
EvalResult evaluate(const Model& model, const Dataset& dataset);

}  // namespace hgnn
