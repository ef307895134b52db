#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hgnn/container.hpp"
#include "hgnn/dataset.hpp"

namespace hgnn {

enum class SynthMode { kAudioOnlySolvable, kFusionRequired };

std::string to_string(SynthMode mode);
SynthMode parse_synth_mode(std::string_view text);

struct SynthSpec {
    std::size_t n_items = 500;
    std::size_t n_audio = 10;
    std::size_t n_video = 25;
    std::size_t d_audio = 16;
    std::size_t d_video = 32;
    std::size_t classes = 4;
    double noise_sigma = 0.5;
    SynthMode mode = SynthMode::kFusionRequired;
    std::uint64_t seed = 0;

    bool operator==(const SynthSpec&) const = default;
};

void validate(const SynthSpec& spec);
nlohmann::json to_json(const SynthSpec& spec);
// Missing keys keep their defaults.
SynthSpec synth_spec_from_json(const nlohmann::json& j, SynthSpec base = {});

struct SyntheticDataset {
    DatasetManifest manifest;
    std::vector<FeatureContainer> containers;  // parallel to manifest.items
};

// Every class c owns a fixed audio pattern u_c and video pattern v_c (mutually
// orthogonal within each modality, RMS 1 per entry), each planted at one
// segment ("event"); positives are drawn with probability 1/2 per class.
//
// kFusionRequired: every item carries one u_c event and one v_c event for
// every class. The audio event sits at a uniformly random slot s. For a
// positive the video event sits at the video node aligned with s; for a
// negative it sits at the node aligned with (s + offset) mod n_audio with
// offset uniform in [2, n_audio - 2]. Each modality on its own therefore has
// a label-independent distribution, and per-item mean features are identical.
//
// kAudioOnlySolvable: u_c is planted only for positive classes; every item
// gets v_c at random video nodes regardless of label.
SyntheticDataset generate_synthetic(const SynthSpec& spec);

// Writes manifest.json and item_XXXXX.hgav files into dir (created if needed).
void write_synthetic(const SyntheticDataset& data, const std::filesystem::path& dir);

}  // namespace hgnn
