#pragma once

#include <iosfwd>
#include <vector>

#include "hgnn/tensor.hpp"

namespace hgnn {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitNumeric = 3 };

// Entry point for the `hgnn` tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Per-audio-node attention summary for one layer: max alpha over each node's
// video neighbours, min-max rescaled to [0, 1] (constant input maps to 1).
std::vector<double> attention_profile(const Tensor& alpha);

}  // namespace hgnn
