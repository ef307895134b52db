#include "hgnn/synthetic.hpp"

#include <cmath>
#include <cstdio>

#include "hgnn/errors.hpp"
#include "hgnn/graph.hpp"
#include "hgnn/rng.hpp"

namespace hgnn {

namespace {

// `count` orthogonal vectors of length `dim` with norm sqrt(dim).
std::vector<std::vector<double>> orthogonal_patterns(std::size_t count, std::size_t dim, Rng& rng) {
    std::vector<std::vector<double>> basis;
    while (basis.size() < count) {
        std::vector<double> v(dim);
        for (auto& x : v) x = rng.normal();
        for (const auto& b : basis) {
            double dot = 0.0;
            for (std::size_t i = 0; i < dim; ++i) dot += v[i] * b[i];
            for (std::size_t i = 0; i < dim; ++i) v[i] -= dot * b[i];
        }
        double norm = 0.0;
        for (const double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm < 1e-6) continue;
        for (auto& x : v) x /= norm;
        basis.push_back(std::move(v));
    }
    const double scale = std::sqrt(static_cast<double>(dim));
    for (auto& b : basis)
        for (auto& x : b) x *= scale;
    return basis;
}

void plant(std::vector<double>& block, std::size_t dim, std::size_t row, const std::vector<double>& pattern) {
    for (std::size_t i = 0; i < dim; ++i) block[row * dim + i] += pattern[i];
}

}  // namespace

std::string to_string(SynthMode mode) {
    return mode == SynthMode::kFusionRequired ? "fusion_required" : "audio_only_solvable";
}

SynthMode parse_synth_mode(std::string_view text) {
    if (text == "fusion_required") return SynthMode::kFusionRequired;
    if (text == "audio_only_solvable") return SynthMode::kAudioOnlySolvable;
    throw ConfigError("invalid synthetic mode '" + std::string(text) +
                      "' (valid: audio_only_solvable, fusion_required)");
}

void validate(const SynthSpec& s) {
    if (s.n_items == 0 || s.n_audio == 0 || s.n_video == 0 || s.d_audio == 0 || s.d_video == 0 || s.classes == 0) {
        throw ConfigError("synthetic spec counts must be positive");
    }
    if (!(s.noise_sigma >= 0.0) || !std::isfinite(s.noise_sigma)) throw ConfigError("noise_sigma must be >= 0");
    if (s.classes > s.d_audio || s.classes > s.d_video) {
        throw ConfigError("synthetic patterns need classes <= d_audio and classes <= d_video");
    }
    if (s.mode == SynthMode::kFusionRequired && s.n_audio < 4) {
        throw ConfigError("fusion_required needs n_audio >= 4 so misaligned events are at least two slots apart");
    }
}

nlohmann::json to_json(const SynthSpec& s) {
    return {{"n_items", s.n_items}, {"n_audio", s.n_audio},         {"n_video", s.n_video},
            {"d_audio", s.d_audio}, {"d_video", s.d_video},         {"classes", s.classes},
            {"noise_sigma", s.noise_sigma}, {"mode", to_string(s.mode)}, {"seed", s.seed}};
}

SynthSpec synth_spec_from_json(const nlohmann::json& j, SynthSpec s) {
    try {
        s.n_items = j.value("n_items", s.n_items);
        s.n_audio = j.value("n_audio", s.n_audio);
        s.n_video = j.value("n_video", s.n_video);
        s.d_audio = j.value("d_audio", s.d_audio);
        s.d_video = j.value("d_video", s.d_video);
        s.classes = j.value("classes", s.classes);
        s.noise_sigma = j.value("noise_sigma", s.noise_sigma);
        if (j.contains("mode")) s.mode = parse_synth_mode(j.at("mode").get<std::string>());
        s.seed = j.value("seed", s.seed);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad synthetic spec: ") + e.what());
    }
    return s;
}

SyntheticDataset generate_synthetic(const SynthSpec& spec) {
    validate(spec);
    Rng rng(spec.seed);
    const auto audio_patterns = orthogonal_patterns(spec.classes, spec.d_audio, rng);
    const auto video_patterns = orthogonal_patterns(spec.classes, spec.d_video, rng);

    SyntheticDataset out;
    out.manifest.num_classes = spec.classes;
    for (std::size_t c = 0; c < spec.classes; ++c) out.manifest.class_names.push_back("class_" + std::to_string(c));

    for (std::size_t item = 0; item < spec.n_items; ++item) {
        std::vector<double> audio(spec.n_audio * spec.d_audio, 0.0);
        std::vector<double> video(spec.n_video * spec.d_video, 0.0);
        std::vector<std::size_t> labels;
        for (std::size_t c = 0; c < spec.classes; ++c) {
            const bool positive = rng.uniform() < 0.5;
            if (positive) labels.push_back(c);
            const std::size_t slot = rng.below(spec.n_audio);
            if (spec.mode == SynthMode::kFusionRequired) {
                std::size_t video_slot = slot;
                if (!positive) video_slot = (slot + 2 + rng.below(spec.n_audio - 3)) % spec.n_audio;
                plant(audio, spec.d_audio, slot, audio_patterns[c]);
                plant(video, spec.d_video, cross_modal_anchor(video_slot, spec.n_audio, spec.n_video),
                      video_patterns[c]);
            } else {
                if (positive) plant(audio, spec.d_audio, slot, audio_patterns[c]);
                plant(video, spec.d_video, rng.below(spec.n_video), video_patterns[c]);
            }
        }
        FeatureContainer container;
        container.n_audio = static_cast<std::uint32_t>(spec.n_audio);
        container.d_audio = static_cast<std::uint32_t>(spec.d_audio);
        container.n_video = static_cast<std::uint32_t>(spec.n_video);
        container.d_video = static_cast<std::uint32_t>(spec.d_video);
        for (const double v : audio) container.audio.push_back(static_cast<float>(v + spec.noise_sigma * rng.normal()));
        for (const double v : video) container.video.push_back(static_cast<float>(v + spec.noise_sigma * rng.normal()));

        char name[32];
        std::snprintf(name, sizeof(name), "item_%05zu", item);
        out.manifest.items.push_back({name, std::string(name) + ".hgav", std::move(labels)});
        out.containers.push_back(std::move(container));
    }
    return out;
}

void write_synthetic(const SyntheticDataset& data, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    for (std::size_t i = 0; i < data.containers.size(); ++i) {
        write_container(dir / data.manifest.items[i].container_path, data.containers[i]);
    }
    write_manifest(dir / "manifest.json", data.manifest);
}

}  // namespace hgnn
