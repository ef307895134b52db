#include "hgnn/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "hgnn/errors.hpp"
#include "hgnn/evaluate.hpp"
#include "hgnn/synthetic.hpp"
#include "hgnn/training.hpp"

namespace hgnn {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json read_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + " is not valid JSON: " + e.what());
    }
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

// A config file holds optional "train" and "synth" sections; a file without
// either is read as a bare section.
json section(const json& file, const char* key) {
    if (file.contains(key)) return file.at(key);
    if (file.contains("train") || file.contains("synth")) return json::object();
    return file;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) {
        if (part.empty()) continue;
        try {
            std::size_t used = 0;
            seeds.push_back(std::stoull(part, &used));
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw ConfigError("bad seed '" + part + "' in --seeds");
        }
    }
    if (seeds.empty()) throw ConfigError("--seeds needs at least one value");
    return seeds;
}

json degree_stats(const BinaryMatrix& adj) {
    std::size_t lo = adj.cols(), hi = 0, total = 0;
    for (std::size_t r = 0; r < adj.rows(); ++r) {
        const std::size_t d = adj.row_count(r);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
        total += d;
    }
    return {{"min", lo}, {"max", hi}, {"mean", static_cast<double>(total) / static_cast<double>(adj.rows())}};
}

json undirected_edges(const BinaryMatrix& adj) {
    auto out = json::array();
    for (std::size_t i = 0; i < adj.rows(); ++i)
        for (std::size_t j = i + 1; j < adj.cols(); ++j)
            if (adj(i, j)) out.push_back({i, j});
    return out;
}

json bipartite_edges(const BinaryMatrix& adj) {
    auto out = json::array();
    for (std::size_t i = 0; i < adj.rows(); ++i)
        for (std::size_t j = 0; j < adj.cols(); ++j)
            if (adj(i, j)) out.push_back({i, j});
    return out;
}

struct RuleFlags {
    std::optional<std::size_t> audio_span, audio_dilation, video_span, video_dilation, cross_span, cross_dilation;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--audio-span", audio_span, "audio-audio span");
        cmd->add_option("--audio-dilation", audio_dilation, "audio-audio dilation");
        cmd->add_option("--video-span", video_span, "video-video span");
        cmd->add_option("--video-dilation", video_dilation, "video-video dilation");
        cmd->add_option("--cross-span", cross_span, "video->audio span");
        cmd->add_option("--cross-dilation", cross_dilation, "video->audio dilation");
    }

    void apply(EdgeRules& rules) const {
        if (audio_span) rules.audio.span = *audio_span;
        if (audio_dilation) rules.audio.dilation = *audio_dilation;
        if (video_span) rules.video.span = *video_span;
        if (video_dilation) rules.video.dilation = *video_dilation;
        if (cross_span) rules.cross.span = *cross_span;
        if (cross_dilation) rules.cross.dilation = *cross_dilation;
    }
};

struct TrainFlags {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> max_iters, batch_size, hidden, layers, eval_every, checkpoint_every, warmup_iters,
        decay_at_iter;
    std::optional<double> lr, gamma;
    std::optional<std::string> pooling, modality, fusion;
    bool no_fusion = false;
    RuleFlags rules;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--seed", seed, "training seed");
        cmd->add_option("--max-iters", max_iters, "number of iterations");
        cmd->add_option("--batch-size", batch_size, "graphs per iteration");
        cmd->add_option("--hidden", hidden, "hidden width");
        cmd->add_option("--layers", layers, "heterogeneous layers");
        cmd->add_option("--eval-every", eval_every, "held-out evaluation interval");
        cmd->add_option("--checkpoint-every", checkpoint_every, "intermediate checkpoint interval");
        cmd->add_option("--warmup-iters", warmup_iters, "linear warmup length");
        cmd->add_option("--decay-at", decay_at_iter, "iteration of the one-time lr decay");
        cmd->add_option("--lr", lr, "peak learning rate");
        cmd->add_option("--gamma", gamma, "focal loss gamma");
        cmd->add_option("--pooling", pooling, "learned|mean|max|sum")
            ->check(CLI::IsMember({"learned", "mean", "max", "sum"}));
        cmd->add_option("--modality", modality, "both|audio_only|video_only")
            ->check(CLI::IsMember({"both", "audio_only", "video_only"}));
        cmd->add_option("--fusion", fusion, "gat|gcn")->check(CLI::IsMember({"gat", "gcn"}));
        cmd->add_flag("--no-fusion", no_fusion, "drop the video->audio flow");
        rules.add_to(cmd);
    }

    void apply(TrainConfig& c) const {
        if (seed) c.seed = *seed;
        if (max_iters) c.max_iters = *max_iters;
        if (batch_size) c.batch_size = *batch_size;
        if (hidden) c.hidden = *hidden;
        if (layers) c.layers = *layers;
        if (eval_every) c.eval_every = *eval_every;
        if (checkpoint_every) c.checkpoint_every = *checkpoint_every;
        if (warmup_iters) c.warmup_iters = *warmup_iters;
        if (decay_at_iter) c.decay_at_iter = *decay_at_iter;
        if (lr) c.lr = *lr;
        if (gamma) c.gamma = *gamma;
        if (pooling) c.pooling = parse_pooling(*pooling);
        if (modality) c.modality = parse_modality(*modality);
        if (fusion) c.fusion = parse_fusion(*fusion);
        if (no_fusion) c.fusion_enabled = false;
        rules.apply(c.rules);
    }
};

int cmd_gen_synth(const std::optional<std::string>& spec_path, const std::string& out_dir,
                  const std::optional<std::uint64_t>& seed, const std::optional<std::string>& mode,
                  const std::optional<std::size_t>& n_items, const std::optional<double>& noise, std::ostream& out) {
    SynthSpec spec;
    if (spec_path) spec = synth_spec_from_json(section(read_json_file(*spec_path), "synth"));
    if (seed) spec.seed = *seed;
    if (mode) spec.mode = parse_synth_mode(*mode);
    if (n_items) spec.n_items = *n_items;
    if (noise) spec.noise_sigma = *noise;
    validate(spec);
    const auto data = generate_synthetic(spec);
    write_synthetic(data, out_dir);
    out << json{{"items", spec.n_items},
                {"n_audio", spec.n_audio},
                {"n_video", spec.n_video},
                {"d_audio", spec.d_audio},
                {"d_video", spec.d_video},
                {"classes", spec.classes},
                {"mode", to_string(spec.mode)},
                {"spec", to_json(spec)},
                {"manifest", (fs::path(out_dir) / "manifest.json").string()}}
               .dump(2)
        << '\n';
    return kExitOk;
}

void write_run(const fs::path& dir, const TrainResult& result) {
    ensure_dir(dir);
    write_checkpoint(dir / "checkpoint.hgck", result.checkpoint);
    write_text(dir / "history.csv", history_csv(result.history));
}

int cmd_train(const std::optional<std::string>& config_path, const std::string& data_path, const std::string& out_dir,
              const std::optional<std::string>& seeds_text, const std::optional<std::string>& resume_path,
              const TrainFlags& flags, std::ostream& out) {
    TrainConfig config;
    std::optional<Checkpoint> resume;
    if (resume_path) {
        resume = read_checkpoint(*resume_path);
        config = resume->train;
    }
    if (config_path) config = train_config_from_json(section(read_json_file(*config_path), "train"), config);
    flags.apply(config);
    validate(config);
    if (resume && seeds_text) throw ConfigError("--resume and --seeds cannot be combined");

    ensure_dir(out_dir);
    const json effective = {{"train", to_json(config)}, {"data", data_path}};
    write_text(fs::path(out_dir) / "effective_config.json", effective.dump(2) + "\n");
    out << "effective config: " << effective.dump() << '\n';

    const Dataset dataset = load_dataset(data_path, config.rules);
    preflight(dataset, config);

    if (seeds_text) {
        const auto seeds = parse_seed_list(*seeds_text);
        const auto summary = run_seeds(dataset, config, seeds, [&](std::uint64_t seed, const TrainResult& result) {
            write_run(fs::path(out_dir) / ("seed_" + std::to_string(seed)), result);
        });
        const json aggregate = to_json(summary);
        write_text(fs::path(out_dir) / "aggregate.json", aggregate.dump(2) + "\n");
        out << "aggregate: map " << summary.map_mean << " +- " << summary.map_std << ", roc_auc " << summary.auc_mean
            << " +- " << summary.auc_std << '\n';
        return kExitOk;
    }

    const auto [train_set, val_set] = split_dataset(dataset, config.split_seed, config.train_fraction);
    TrainOptions options;
    if (!val_set.empty()) options.validation = &val_set;
    if (resume) options.resume = &*resume;
    const fs::path dir(out_dir);
    options.on_step = [&](const Trainer& trainer, const MetricRow& row) {
        if (config.checkpoint_every > 0 && trainer.iteration() % config.checkpoint_every == 0) {
            write_checkpoint(dir / ("checkpoint_iter_" + std::to_string(trainer.iteration()) + ".hgck"),
                             trainer.checkpoint());
        }
        (void)row;
    };
    const auto result = train(train_set, config, options);
    write_run(dir, result);
    out << "trained " << result.history.size() << " iterations";
    if (!result.history.empty()) out << ", final loss " << result.history.back().loss;
    if (result.validation && result.validation->map) out << ", held-out map " << *result.validation->map;
    out << '\n';
    return kExitOk;
}

int cmd_eval(const std::string& checkpoint_path, const std::string& data_path, std::ostream& out) {
    const Checkpoint checkpoint = read_checkpoint(checkpoint_path);
    const Model model = model_from_checkpoint(checkpoint);
    const Dataset dataset = load_dataset(data_path, checkpoint.train.rules);
    check_compatible(dataset, model.config());
    out << to_json(evaluate(model, dataset)).dump(2) << '\n';
    return kExitOk;
}

int cmd_inspect_graph(const std::optional<std::string>& config_path, std::size_t n_audio, std::size_t n_video,
                      const RuleFlags& flags, std::ostream& out) {
    TrainConfig config;
    if (config_path) config = train_config_from_json(section(read_json_file(*config_path), "train"));
    flags.apply(config.rules);
    if (n_audio == 0 || n_video == 0) throw ConfigError("--n-audio and --n-video must be positive");
    const auto aa = temporal_edges(n_audio, config.rules.audio);
    const auto vv = temporal_edges(n_video, config.rules.video);
    const auto va = cross_modal_edges(n_audio, n_video, config.rules.cross);
    auto rule = [](const EdgeRule& r) { return json{{"span", r.span}, {"dilation", r.dilation}}; };
    json j;
    j["n_audio"] = n_audio;
    j["n_video"] = n_video;
    j["rules"] = {{"audio", rule(config.rules.audio)}, {"video", rule(config.rules.video)}, {"cross", rule(config.rules.cross)}};
    j["aa_edges"] = undirected_edges(aa);
    j["vv_edges"] = undirected_edges(vv);
    j["va_edges"] = bipartite_edges(va);
    j["degrees"] = {{"audio", degree_stats(aa)}, {"video", degree_stats(vv)}, {"cross_per_audio", degree_stats(va)}};
    out << j.dump(2) << '\n';
    return kExitOk;
}

int cmd_dump_attention(const std::string& checkpoint_path, const std::string& data_path, const std::string& item,
                       std::ostream& out) {
    const Checkpoint checkpoint = read_checkpoint(checkpoint_path);
    const Model model = model_from_checkpoint(checkpoint);
    if (!model.config().has_fusion() || model.config().fusion != FusionKind::kAttention) {
        throw ConfigError("no attention to dump: checkpoint has no attention fusion");
    }
    const Dataset dataset = load_dataset(data_path, checkpoint.train.rules);
    check_compatible(dataset, model.config());
    const auto it = std::find_if(dataset.samples.begin(), dataset.samples.end(),
                                 [&](const Sample& s) { return s.id == item; });
    if (it == dataset.samples.end()) throw DataError("item '" + item + "' not in " + data_path);
    NoGradGuard no_grad;
    const auto forward = model_forward(model, it->graph);
    out << "layer,audio_node,attention\n";
    for (std::size_t layer = 0; layer < forward.attention.size(); ++layer) {
        const auto profile = attention_profile(forward.attention[layer]);
        for (std::size_t node = 0; node < profile.size(); ++node) {
            out << layer << ',' << node << ',' << profile[node] << '\n';
        }
    }
    return kExitOk;
}

}  // namespace

std::vector<double> attention_profile(const Tensor& alpha) {
    std::vector<double> peak(alpha.rows(), 0.0);
    for (std::size_t i = 0; i < alpha.rows(); ++i)
        for (std::size_t j = 0; j < alpha.cols(); ++j) peak[i] = std::max(peak[i], static_cast<double>(alpha(i, j)));
    if (peak.empty()) return peak;
    const auto [lo, hi] = std::minmax_element(peak.begin(), peak.end());
    const double min = *lo, range = *hi - *lo;
    for (auto& v : peak) v = range > 0.0 ? (v - min) / range : 1.0;
    return peak;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Heterogeneous audio-visual graph networks for acoustic event classification"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen-synth", "generate a synthetic audio-visual dataset");
    std::optional<std::string> spec_path, gen_mode;
    std::string gen_out;
    std::optional<std::uint64_t> gen_seed;
    std::optional<std::size_t> gen_items;
    std::optional<double> gen_noise;
    gen->add_option("--spec", spec_path, "JSON synthetic spec")->check(CLI::ExistingFile);
    gen->add_option("--out", gen_out, "output directory")->required();
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--mode", gen_mode, "audio_only_solvable|fusion_required")
        ->check(CLI::IsMember({"audio_only_solvable", "fusion_required"}));
    gen->add_option("--n-items", gen_items, "number of items");
    gen->add_option("--noise-sigma", gen_noise, "Gaussian noise level");

    auto* trn = app.add_subcommand("train", "train a model");
    std::optional<std::string> train_config, seeds_text, resume_path;
    std::string train_data, train_out;
    TrainFlags train_flags;
    trn->add_option("--config", train_config, "JSON config")->check(CLI::ExistingFile);
    trn->add_option("--data", train_data, "dataset manifest")->required();
    trn->add_option("--out", train_out, "output directory")->required();
    trn->add_option("--seeds", seeds_text, "comma-separated seeds, one run each");
    trn->add_option("--resume", resume_path, "checkpoint to continue from");
    train_flags.add_to(trn);

    auto* ev = app.add_subcommand("eval", "evaluate a checkpoint");
    std::string eval_ckpt, eval_data;
    ev->add_option("--checkpoint", eval_ckpt, "checkpoint file")->required();
    ev->add_option("--data", eval_data, "dataset manifest")->required();

    auto* insp = app.add_subcommand("inspect-graph", "print the graph built for given node counts");
    std::optional<std::string> insp_config;
    std::size_t insp_audio = 0, insp_video = 0;
    RuleFlags insp_rules;
    insp->add_option("--config", insp_config, "JSON config")->check(CLI::ExistingFile);
    insp->add_option("--n-audio", insp_audio, "audio node count")->required();
    insp->add_option("--n-video", insp_video, "video node count")->required();
    insp_rules.add_to(insp);

    auto* dump = app.add_subcommand("dump-attention", "per-audio-node attention for one item");
    std::string dump_ckpt, dump_data, dump_item;
    dump->add_option("--checkpoint", dump_ckpt, "checkpoint file")->required();
    dump->add_option("--data", dump_data, "dataset manifest")->required();
    dump->add_option("--item", dump_item, "item id")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen->parsed()) return cmd_gen_synth(spec_path, gen_out, gen_seed, gen_mode, gen_items, gen_noise, out);
        if (trn->parsed()) return cmd_train(train_config, train_data, train_out, seeds_text, resume_path, train_flags, out);
        if (ev->parsed()) return cmd_eval(eval_ckpt, eval_data, out);
        if (insp->parsed()) return cmd_inspect_graph(insp_config, insp_audio, insp_video, insp_rules, out);
        if (dump->parsed()) return cmd_dump_attention(dump_ckpt, dump_data, dump_item, out);
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace hgnn
