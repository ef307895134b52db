#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hgnn/byte_io.hpp"
#include "hgnn/cli.hpp"
#include "hgnn/training.hpp"
#include "json.hpp"
#include "test_support.hpp"

namespace hgnn {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "hgnn");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::size_t count_lines(const std::string& text) { return std::count(text.begin(), text.end(), '\n'); }

class CliTest : public ::testing::Test {
   protected:
    test::TempDir dir{"cli"};

    std::string path(const std::string& name) const { return (dir / name).string(); }

    void make_data(const std::string& name, const std::string& mode = "fusion_required", int items = 16) {
        const auto r = run({"gen-synth", "--out", path(name), "--mode", mode, "--n-items", std::to_string(items),
                            "--seed", "3"});
        ASSERT_EQ(r.code, 0) << r.err;
    }

    std::vector<std::string> tiny_train(const std::string& data, const std::string& out, int iters = 50) const {
        return {"train", "--data",   path(data) + "/manifest.json", "--out", path(out), "--max-iters",
                std::to_string(iters), "--hidden", "8", "--layers", "2", "--batch-size", "4", "--warmup-iters", "5",
                "--decay-at", "30"};
    }
};

TEST_F(CliTest, GenSynthWritesManifestAndContainers) {
    make_data("d", "fusion_required", 12);
    std::size_t containers = 0;
    for (const auto& e : fs::directory_iterator(dir / "d")) containers += e.path().extension() == ".hgav";
    EXPECT_EQ(containers, 12u);
    EXPECT_TRUE(fs::exists(dir / "d" / "manifest.json"));
}

TEST_F(CliTest, GenSynthSameSeedSameBytes) {
    make_data("a");
    make_data("b");
    for (const auto& e : fs::directory_iterator(dir / "a"))
        EXPECT_EQ(byte_io::read_file(e.path()), byte_io::read_file(dir / "b" / e.path().filename()));
}

TEST_F(CliTest, GenSynthReadsSpecFileAndFlagsWin) {
    std::ofstream(dir / "spec.json") << R"({"synth": {"n_items": 7, "n_audio": 6, "seed": 1}})";
    const auto r = run({"gen-synth", "--spec", path("spec.json"), "--out", path("d"), "--n-items", "5"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto summary = json::parse(r.out);
    EXPECT_EQ(summary["items"], 5);
    EXPECT_EQ(read_manifest(dir / "d" / "manifest.json").items.size(), 5u);
    EXPECT_EQ(read_container(dir / "d" / "item_00000.hgav").n_audio, 6u);
}

TEST_F(CliTest, InvalidModeIsUsageErrorListingModes) {
    const auto r = run({"gen-synth", "--out", path("d"), "--mode", "video_only"});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_NE(r.err.find("fusion_required"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("audio_only_solvable"), std::string::npos) << r.err;
}

TEST_F(CliTest, MissingSubcommandAndUnknownFlagAreUsageErrors) {
    EXPECT_EQ(run({}).code, kExitUsage);
    EXPECT_EQ(run({"train", "--bogus"}).code, kExitUsage);
    EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST_F(CliTest, TrainWritesCsvCheckpointAndConfig) {
    make_data("d");
    const auto r = run(tiny_train("d", "run"));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto csv = read_text(dir / "run" / "history.csv");
    EXPECT_EQ(count_lines(csv), 51u);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "iter,loss,lr,map,roc_auc");
    EXPECT_TRUE(fs::exists(dir / "run" / "checkpoint.hgck"));
    const auto effective = json::parse(read_text(dir / "run" / "effective_config.json"));
    EXPECT_EQ(effective["train"]["max_iters"], 50);
    EXPECT_EQ(effective["train"]["hidden"], 8);
    EXPECT_NE(r.out.find("effective config"), std::string::npos);
}

TEST_F(CliTest, ConfigFileValuesYieldToFlags) {
    make_data("d");
    std::ofstream(dir / "cfg.json") << R"({"train": {"hidden": 6, "max_iters": 7, "gamma": 1.5}})";
    auto args = tiny_train("d", "run", 4);
    args.insert(args.begin() + 1, {"--config", path("cfg.json")});
    ASSERT_EQ(run(args).code, 0);
    const auto effective = json::parse(read_text(dir / "run" / "effective_config.json"));
    EXPECT_EQ(effective["train"]["hidden"], 8);
    EXPECT_EQ(effective["train"]["max_iters"], 4);
    EXPECT_EQ(effective["train"]["gamma"], 1.5);
}

TEST_F(CliTest, MultipleSeedsWriteOneRunEachAndAggregate) {
    make_data("d");
    auto args = tiny_train("d", "runs", 10);
    args.insert(args.end(), {"--seeds", "1,2,3"});
    const auto r = run(args);
    ASSERT_EQ(r.code, 0) << r.err;
    for (int s : {1, 2, 3}) EXPECT_TRUE(fs::exists(dir / "runs" / ("seed_" + std::to_string(s)) / "checkpoint.hgck"));
    const auto agg = json::parse(read_text(dir / "runs" / "aggregate.json"));
    EXPECT_EQ(agg["seeds"].size(), 3u);
    EXPECT_TRUE(agg.contains("map_mean"));
    EXPECT_TRUE(agg.contains("map_std"));
}

TEST_F(CliTest, ResumeContinuesCurveBitwise) {
    make_data("d");
    for (const char* name : {"full", "part"}) {
        auto args = tiny_train("d", name, 40);
        args.insert(args.end(), {"--checkpoint-every", "20"});
        ASSERT_EQ(run(args).code, 0);
    }
    auto resume = tiny_train("d", "resumed", 40);
    resume.insert(resume.end(), {"--resume", path("part/checkpoint_iter_20.hgck")});
    const auto r = run(resume);
    ASSERT_EQ(r.code, 0) << r.err;
    const auto full = read_text(dir / "full" / "history.csv");
    const auto tail = read_text(dir / "resumed" / "history.csv");
    const auto body = tail.substr(tail.find('\n') + 1);
    EXPECT_EQ(count_lines(body), 20u);
    EXPECT_NE(full.find(body), std::string::npos);
    EXPECT_EQ(byte_io::read_file(dir / "full" / "checkpoint.hgck"), byte_io::read_file(dir / "resumed" / "checkpoint.hgck"));
}

TEST_F(CliTest, DatasetMismatchFailsBeforeTraining) {
    make_data("d");
    ASSERT_EQ(run(tiny_train("d", "run", 5)).code, 0);
    std::ofstream(dir / "spec.json") << R"({"d_audio": 9})";
    ASSERT_EQ(run({"gen-synth", "--spec", path("spec.json"), "--out", path("other"), "--n-items", "4"}).code, 0);
    auto resume = tiny_train("other", "resumed", 10);
    resume.insert(resume.end(), {"--resume", path("run/checkpoint.hgck")});
    const auto r = run(resume);
    EXPECT_EQ(r.code, kExitData);
    EXPECT_FALSE(fs::exists(dir / "resumed" / "history.csv"));
    const auto e = run({"eval", "--checkpoint", path("run/checkpoint.hgck"), "--data", path("other/manifest.json")});
    EXPECT_EQ(e.code, kExitData);
    EXPECT_NE(e.err.find("audio dim"), std::string::npos) << e.err;
}

TEST_F(CliTest, EvalOnOverfitTrainingDataIsNearPerfect) {
    make_data("d", "audio_only_solvable", 8);
    auto args = tiny_train("d", "run", 300);
    args.erase(args.end() - 2, args.end());
    args.insert(args.end(), {"--decay-at", "1000", "--modality", "audio_only", "--lr", "0.01"});
    ASSERT_EQ(run(args).code, 0);
    const auto a = run({"eval", "--checkpoint", path("run/checkpoint.hgck"), "--data", path("d/manifest.json")});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_GE(json::parse(a.out)["map"].get<double>(), 0.99);
    const auto b = run({"eval", "--checkpoint", path("run/checkpoint.hgck"), "--data", path("d/manifest.json")});
    EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, EvalMissingCheckpointIsAnError) {
    make_data("d", "fusion_required", 4);
    const auto r = run({"eval", "--checkpoint", path("none.hgck"), "--data", path("d/manifest.json")});
    EXPECT_EQ(r.code, kExitData);
    EXPECT_NE(r.err.find("none.hgck"), std::string::npos);
}

TEST_F(CliTest, BadConfigValueIsConfigError) {
    make_data("d", "fusion_required", 4);
    auto args = tiny_train("d", "run", 5);
    args.insert(args.end(), {"--gamma", "-1"});
    EXPECT_EQ(run(args).code, kExitData);
}

TEST_F(CliTest, DivergingRunExitsWithNumericCode) {
    make_data("d", "fusion_required", 8);
    auto args = tiny_train("d", "run", 200);
    args.insert(args.end(), {"--lr", "1e30"});
    const auto r = run(args);
    EXPECT_EQ(r.code, kExitNumeric) << r.err;
}

TEST(CliInspect, ThreeNodePath) {
    const auto r = run({"inspect-graph", "--n-audio", "3", "--n-video", "3", "--audio-span", "1", "--audio-dilation",
                        "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["aa_edges"], json::parse("[[0,1],[1,2]]"));
}

TEST(CliInspect, SpanZeroKeepsOnlyAnchors) {
    const auto r = run({"inspect-graph", "--n-audio", "3", "--n-video", "5", "--audio-span", "0", "--video-span", "0",
                        "--cross-span", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j["aa_edges"].empty());
    EXPECT_TRUE(j["vv_edges"].empty());
    EXPECT_EQ(j["va_edges"], json::parse("[[0,0],[1,2],[2,4]]"));
    EXPECT_EQ(r.out, run({"inspect-graph", "--n-audio", "3", "--n-video", "5", "--audio-span", "0", "--video-span",
                          "0", "--cross-span", "0"})
                         .out);
}

TEST(AttentionProfile, SingleNodeMapsToOne) {
    EXPECT_EQ(attention_profile(Tensor::from_rows({{0.3f, 0.7f}})), std::vector<double>{1.0});
}

TEST(AttentionProfile, UniformAttentionIsConstant) {
    const auto p = attention_profile(Tensor::from_rows({{0.5f, 0.5f}, {0.5f, 0.5f}, {0.5f, 0.5f}}));
    EXPECT_EQ(p, std::vector<double>(3, 1.0));
}

TEST(AttentionProfile, ValuesStayInUnitInterval) {
    Rng rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        auto alpha = test::random_tensor(5, 4, rng, 0.0, 1.0, false).cast<float>();
        for (double v : attention_profile(alpha)) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
    }
}

TEST_F(CliTest, DumpAttentionWritesOneRowPerLayerAndNode) {
    make_data("d", "fusion_required", 6);
    ASSERT_EQ(run(tiny_train("d", "run", 5)).code, 0);
    const auto r = run({"dump-attention", "--checkpoint", path("run/checkpoint.hgck"), "--data",
                        path("d/manifest.json"), "--item", "item_00002"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "layer,audio_node,attention");
    EXPECT_EQ(count_lines(r.out), 1u + 2 * 10);
    const auto missing = run({"dump-attention", "--checkpoint", path("run/checkpoint.hgck"), "--data",
                              path("d/manifest.json"), "--item", "nope"});
    EXPECT_EQ(missing.code, kExitData);
}

TEST_F(CliTest, DumpAttentionWithoutFusionIsAnError) {
    make_data("d", "fusion_required", 6);
    auto args = tiny_train("d", "run", 5);
    args.push_back("--no-fusion");
    ASSERT_EQ(run(args).code, 0);
    const auto r = run({"dump-attention", "--checkpoint", path("run/checkpoint.hgck"), "--data",
                        path("d/manifest.json"), "--item", "item_00000"});
    EXPECT_EQ(r.code, kExitData);
    EXPECT_NE(r.err.find("no attention to dump"), std::string::npos) << r.err;
}

}  // namespace
}  // namespace hgnn
