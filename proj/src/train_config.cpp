#include "hgnn/train_config.hpp"

#include <cmath>
#include <string>

#include "hgnn/errors.hpp"

namespace hgnn {

namespace {

nlohmann::json rule_json(const EdgeRule& r) { return {{"span", r.span}, {"dilation", r.dilation}}; }

EdgeRule rule_from_json(const nlohmann::json& j, EdgeRule base) {
    base.span = j.value("span", base.span);
    base.dilation = j.value("dilation", base.dilation);
    return base;
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be positive");
}

}  // namespace

void validate(const TrainConfig& c) {
    require_positive(c.lr, "lr");
    require_positive(c.decay_factor, "decay_factor");
    if (!(c.gamma >= 0.0) || !std::isfinite(c.gamma)) throw ConfigError("focal gamma must be >= 0");
    if (c.layers < 1) throw ConfigError("layers must be >= 1");
    if (c.hidden < 1) throw ConfigError("hidden must be >= 1");
    if (c.batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (!(c.beta1 >= 0.0 && c.beta1 < 1.0) || !(c.beta2 >= 0.0 && c.beta2 < 1.0)) {
        throw ConfigError("Adam betas must be in [0, 1)");
    }
    require_positive(c.epsilon, "epsilon");
    if (!(c.train_fraction > 0.0 && c.train_fraction <= 1.0)) throw ConfigError("train_fraction must be in (0, 1]");
    validate(c.rules.audio);
    validate(c.rules.video);
    validate(c.rules.cross);
}

nlohmann::json to_json(const TrainConfig& c) {
    return {
        {"lr", c.lr},
        {"decay_factor", c.decay_factor},
        {"decay_at_iter", c.decay_at_iter},
        {"warmup_iters", c.warmup_iters},
        {"gamma", c.gamma},
        {"layers", c.layers},
        {"hidden", c.hidden},
        {"rules", {{"audio", rule_json(c.rules.audio)}, {"video", rule_json(c.rules.video)}, {"cross", rule_json(c.rules.cross)}}},
        {"seed", c.seed},
        {"max_iters", c.max_iters},
        {"batch_size", c.batch_size},
        {"pooling", to_string(c.pooling)},
        {"fusion_enabled", c.fusion_enabled},
        {"fusion", to_string(c.fusion)},
        {"modality", to_string(c.modality)},
        {"beta1", c.beta1},
        {"beta2", c.beta2},
        {"epsilon", c.epsilon},
        {"eval_every", c.eval_every},
        {"checkpoint_every", c.checkpoint_every},
        {"split_seed", c.split_seed},
        {"train_fraction", c.train_fraction},
    };
}

TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig c) {
    try {
        c.lr = j.value("lr", c.lr);
        c.decay_factor = j.value("decay_factor", c.decay_factor);
        c.decay_at_iter = j.value("decay_at_iter", c.decay_at_iter);
        c.warmup_iters = j.value("warmup_iters", c.warmup_iters);
        c.gamma = j.value("gamma", c.gamma);
        c.layers = j.value("layers", c.layers);
        c.hidden = j.value("hidden", c.hidden);
        if (j.contains("rules")) {
            const auto& r = j.at("rules");
            if (r.contains("audio")) c.rules.audio = rule_from_json(r.at("audio"), c.rules.audio);
            if (r.contains("video")) c.rules.video = rule_from_json(r.at("video"), c.rules.video);
            if (r.contains("cross")) c.rules.cross = rule_from_json(r.at("cross"), c.rules.cross);
        }
        c.seed = j.value("seed", c.seed);
        c.max_iters = j.value("max_iters", c.max_iters);
        c.batch_size = j.value("batch_size", c.batch_size);
        if (j.contains("pooling")) c.pooling = parse_pooling(j.at("pooling").get<std::string>());
        c.fusion_enabled = j.value("fusion_enabled", c.fusion_enabled);
        if (j.contains("fusion")) c.fusion = parse_fusion(j.at("fusion").get<std::string>());
        if (j.contains("modality")) c.modality = parse_modality(j.at("modality").get<std::string>());
        c.beta1 = j.value("beta1", c.beta1);
        c.beta2 = j.value("beta2", c.beta2);
        c.epsilon = j.value("epsilon", c.epsilon);
        c.eval_every = j.value("eval_every", c.eval_every);
        c.checkpoint_every = j.value("checkpoint_every", c.checkpoint_every);
        c.split_seed = j.value("split_seed", c.split_seed);
        c.train_fraction = j.value("train_fraction", c.train_fraction);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad training config: ") + e.what());
    }
    return c;
}

nlohmann::json to_json(const ModelConfig& c) {
    return {{"audio_dim", c.audio_dim},
            {"video_dim", c.video_dim},
            {"hidden", c.hidden},
            {"layers", c.layers},
            {"classes", c.classes},
            {"n_audio", c.n_audio},
            {"n_video", c.n_video},
            {"pooling", to_string(c.pooling)},
            {"fusion_enabled", c.fusion_enabled},
            {"fusion", to_string(c.fusion)},
            {"modality", to_string(c.modality)}};
}

ModelConfig model_config_from_json(const nlohmann::json& j) {
    try {
        ModelConfig c;
        c.audio_dim = j.at("audio_dim").get<std::size_t>();
        c.video_dim = j.at("video_dim").get<std::size_t>();
        c.hidden = j.at("hidden").get<std::size_t>();
        c.layers = j.at("layers").get<std::size_t>();
        c.classes = j.at("classes").get<std::size_t>();
        c.n_audio = j.at("n_audio").get<std::size_t>();
        c.n_video = j.at("n_video").get<std::size_t>();
        c.pooling = parse_pooling(j.at("pooling").get<std::string>());
        c.fusion_enabled = j.at("fusion_enabled").get<bool>();
        c.fusion = parse_fusion(j.at("fusion").get<std::string>());
        c.modality = parse_modality(j.at("modality").get<std::string>());
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad model config: ") + e.what());
    }
}

ModelConfig model_config_for(const TrainConfig& t, std::size_t audio_dim, std::size_t video_dim, std::size_t classes,
                             std::size_t n_audio, std::size_t n_video) {
    ModelConfig m;
    m.audio_dim = audio_dim;
    m.video_dim = video_dim;
    m.hidden = t.hidden;
    m.layers = t.layers;
    m.classes = classes;
    m.n_audio = n_audio;
    m.n_video = n_video;
    m.pooling = t.pooling;
    m.fusion_enabled = t.fusion_enabled;
    m.fusion = t.fusion;
    m.modality = t.modality;
    return m;
}

}  // namespace hgnn
