#include "hgnn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "hgnn/container.hpp"
#include "hgnn/errors.hpp"
#include "hgnn/rng.hpp"

namespace hgnn {

nlohmann::json to_json(const DatasetManifest& m) {
    nlohmann::json j;
    j["version"] = m.version;
    j["num_classes"] = m.num_classes;
    j["class_names"] = m.class_names;
    j["items"] = nlohmann::json::array();
    for (const auto& item : m.items) {
        j["items"].push_back({{"id", item.id}, {"container_path", item.container_path}, {"labels", item.labels}});
    }
    return j;
}

DatasetManifest manifest_from_json(const nlohmann::json& j) {
    try {
        DatasetManifest m;
        m.version = j.at("version").get<std::uint32_t>();
        if (m.version != 1) throw DataError("unsupported manifest version " + std::to_string(m.version));
        m.num_classes = j.at("num_classes").get<std::size_t>();
        m.class_names = j.value("class_names", std::vector<std::string>{});
        if (!m.class_names.empty() && m.class_names.size() != m.num_classes) {
            throw DataError("manifest lists " + std::to_string(m.class_names.size()) + " class names for " +
                            std::to_string(m.num_classes) + " classes");
        }
        for (const auto& item : j.at("items")) {
            m.items.push_back({item.at("id").get<std::string>(), item.at("container_path").get<std::string>(),
                               item.at("labels").get<std::vector<std::size_t>>()});
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed manifest: ") + e.what());
    }
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError("manifest " + path.string() + " is not valid JSON: " + e.what());
    }
    return manifest_from_json(j);
}

void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write manifest " + path.string());
    out << to_json(manifest).dump(2) << '\n';
}

bool Dataset::uniform_node_counts() const {
    for (const auto& s : samples) {
        if (s.graph.n_audio() != samples.front().graph.n_audio() || s.graph.n_video() != samples.front().graph.n_video()) {
            return false;
        }
    }
    return true;
}

Dataset load_dataset(const std::filesystem::path& manifest_path, const EdgeRules& rules) {
    const DatasetManifest manifest = read_manifest(manifest_path);
    if (manifest.items.empty()) throw DataError("empty dataset: manifest " + manifest_path.string() + " has no items");
    if (manifest.num_classes == 0) throw DataError("manifest declares zero classes");

    Dataset data;
    data.num_classes = manifest.num_classes;
    data.class_names = manifest.class_names;
    const auto base = manifest_path.parent_path();
    std::ostringstream problems;
    std::size_t n_problems = 0;
    auto report = [&](const std::string& id, const std::string& what) {
        problems << "\n  item '" << id << "': " << what;
        ++n_problems;
    };

    for (const auto& item : manifest.items) {
        std::vector<std::uint8_t> labels(manifest.num_classes, 0);
        bool labels_ok = true;
        for (const auto label : item.labels) {
            if (label >= manifest.num_classes) {
                report(item.id, "label index " + std::to_string(label) + " >= num_classes " +
                                    std::to_string(manifest.num_classes));
                labels_ok = false;
            } else {
                labels[label] = 1;
            }
        }
        std::filesystem::path path(item.container_path);
        if (path.is_relative()) path = base / path;
        FeatureContainer c;
        try {
            c = read_container(path);
        } catch (const std::exception& e) {
            report(item.id, e.what());
            continue;
        }
        if (c.n_audio == 0 || c.n_video == 0 || c.d_audio == 0 || c.d_video == 0) {
            report(item.id, "container has an empty modality");
            continue;
        }
        if (data.audio_dim == 0) {
            data.audio_dim = c.d_audio;
            data.video_dim = c.d_video;
        }
        if (c.d_audio != data.audio_dim) {
            report(item.id, "audio dim " + std::to_string(c.d_audio) + " differs from " + std::to_string(data.audio_dim));
            continue;
        }
        if (c.d_video != data.video_dim) {
            report(item.id, "video dim " + std::to_string(c.d_video) + " differs from " + std::to_string(data.video_dim));
            continue;
        }
        if (!labels_ok) continue;
        auto audio = Tensor::from_values(c.n_audio, c.d_audio, std::move(c.audio));
        auto video = Tensor::from_values(c.n_video, c.d_video, std::move(c.video));
        data.samples.push_back({item.id, build_hetero_graph(std::move(audio), std::move(video), rules), std::move(labels)});
    }
    if (n_problems > 0) {
        throw DataError(std::to_string(n_problems) + " problem(s) loading " + manifest_path.string() + ":" +
                        problems.str());
    }
    return data;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& dataset, std::uint64_t seed, double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction <= 1.0)) throw ConfigError("train fraction must be in (0, 1]");
    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);
    auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(order.size())));
    if (order.size() >= 2 && train_fraction < 1.0) n_train = std::clamp<std::size_t>(n_train, 1, order.size() - 1);
    Dataset train, val;
    for (Dataset* part : {&train, &val}) {
        part->num_classes = dataset.num_classes;
        part->audio_dim = dataset.audio_dim;
        part->video_dim = dataset.video_dim;
        part->class_names = dataset.class_names;
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
        (i < n_train ? train : val).samples.push_back(dataset.samples[order[i]]);
    }
    return {std::move(train), std::move(val)};
}

}  // namespace hgnn
