#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hgnn/graph.hpp"

namespace hgnn {

struct ManifestItem {
    std::string id;
    std::string container_path;  // relative to the manifest's directory unless absolute
    std::vector<std::size_t> labels;

    bool operator==(const ManifestItem&) const = default;
};

struct DatasetManifest {
    std::uint32_t version = 1;
    std::size_t num_classes = 0;
    std::vector<std::string> class_names;
    std::vector<ManifestItem> items;

    bool operator==(const DatasetManifest&) const = default;
};

nlohmann::json to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(const nlohmann::json& j);
DatasetManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

struct Sample {
    std::string id;
    HeteroGraph graph;
    std::vector<std::uint8_t> labels;  // dense multi-hot, length C
};

struct Dataset {
    std::size_t num_classes = 0;
    std::size_t audio_dim = 0;
    std::size_t video_dim = 0;
    std::vector<std::string> class_names;
    std::vector<Sample> samples;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    // All items share (n_audio, n_video); required by learned pooling.
    bool uniform_node_counts() const;
};

// Reads every container, validates it against the manifest and builds one
// graph per item. All per-item problems are gathered into a single DataError.
Dataset load_dataset(const std::filesystem::path& manifest_path, const EdgeRules& rules);

// Seeded shuffle, then the first round(fraction * n) items train and the rest
// validate. With fraction < 1 and two or more items both halves are non-empty.
std::pair<Dataset, Dataset> split_dataset(const Dataset& dataset, std::uint64_t seed, double train_fraction);

}  // namespace hgnn
