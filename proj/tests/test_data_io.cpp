#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "hgnn/byte_io.hpp"
#include "hgnn/container.hpp"
#include "hgnn/dataset.hpp"
#include "hgnn/errors.hpp"
#include "hgnn/synthetic.hpp"
#include "test_support.hpp"

namespace hgnn {
namespace {

namespace fs = std::filesystem;

FeatureContainer random_container(Rng& rng, std::uint32_t na, std::uint32_t da, std::uint32_t nv, std::uint32_t dv) {
    FeatureContainer c{na, da, nv, dv, {}, {}};
    for (std::size_t i = 0; i < std::size_t{na} * da; ++i) c.audio.push_back(static_cast<float>(rng.normal()));
    for (std::size_t i = 0; i < std::size_t{nv} * dv; ++i) c.video.push_back(static_cast<float>(rng.normal()));
    return c;
}

std::string message_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

TEST(Container, RoundTripIsBitwise) {
    Rng rng(1);
    test::TempDir dir("container");
    for (int trial = 0; trial < 10; ++trial) {
        auto c = random_container(rng, 1 + rng.below(9), 1 + rng.below(9), 1 + rng.below(9), 1 + rng.below(9));
        write_container(dir / "c.hgav", c);
        EXPECT_EQ(read_container(dir / "c.hgav"), c);
    }
}

TEST(Container, MinimalFileIsThirtyTwoBytes) {
    const auto bytes = encode_container({1, 1, 1, 1, {0.5f}, {-2.0f}});
    EXPECT_EQ(bytes.size(), 32u);
    EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "HGAV");
    EXPECT_EQ(byte_io::get_u32(bytes, 4), kContainerVersion);
    EXPECT_EQ(byte_io::get_f32(bytes, 24), 0.5f);
    EXPECT_EQ(byte_io::get_f32(bytes, 28), -2.0f);
}

TEST(Container, HeaderFieldsAreLittleEndian) {
    Rng rng(2);
    const auto bytes = encode_container(random_container(rng, 3, 258, 2, 5));
    EXPECT_EQ(bytes[12], 2);  // 258 = 0x0102
    EXPECT_EQ(bytes[13], 1);
    EXPECT_EQ(bytes.size(), kContainerHeaderBytes + 4 * (3 * 258 + 2 * 5));
}

TEST(Container, MissingRowIsALengthError) {
    Rng rng(3);
    auto bytes = encode_container(random_container(rng, 10, 4, 2, 3));
    bytes.resize(bytes.size() - 4 * 4);  // drop one audio-sized row
    const auto msg = message_of([&] { decode_container(bytes); });
    EXPECT_NE(msg.find("expected " + std::to_string(bytes.size() + 16)), std::string::npos) << msg;
    EXPECT_NE(msg.find(std::to_string(bytes.size())), std::string::npos) << msg;
    EXPECT_THROW(decode_container(bytes), FormatError);
}

TEST(Container, BadMagicVersionAndShortHeader) {
    auto bytes = encode_container({1, 1, 1, 1, {0.5f}, {-2.0f}});
    auto bad = bytes;
    bad[1] = 'X';
    EXPECT_THROW(decode_container(bad), FormatError);
    bad = bytes;
    bad[4] = 2;
    EXPECT_THROW(decode_container(bad), FormatError);
    EXPECT_THROW(decode_container(std::span(bytes).first(10)), FormatError);
    EXPECT_THROW(read_container("/nonexistent/x.hgav"), IoError);
}

TEST(Container, NonFiniteValuesAreRejected) {
    FeatureContainer c{1, 1, 1, 1, {std::nanf("")}, {1.0f}};
    EXPECT_THROW(encode_container(c), NumericError);
    auto bytes = encode_container({1, 1, 1, 1, {0.5f}, {1.0f}});
    for (int i = 0; i < 4; ++i) bytes[28 + i] = 0xFF;
    EXPECT_THROW(decode_container(bytes), FormatError);
}

TEST(Manifest, JsonRoundTrip) {
    DatasetManifest m;
    m.num_classes = 3;
    m.class_names = {"dog", "siren", "speech"};
    m.items = {{"a", "a.hgav", {0, 2}}, {"b", "/abs/b.hgav", {}}};
    test::TempDir dir("manifest");
    write_manifest(dir / "m.json", m);
    EXPECT_EQ(read_manifest(dir / "m.json"), m);
    EXPECT_EQ(manifest_from_json(to_json(m)), m);
}

SynthSpec tiny_spec(SynthMode mode) {
    SynthSpec spec;
    spec.n_items = 10;
    spec.mode = mode;
    spec.seed = 7;
    return spec;
}

TEST(Synthetic, DefaultsMatchDeskScale) {
    SynthSpec spec;
    EXPECT_EQ(spec.n_audio, 10u);
    EXPECT_EQ(spec.n_video, 25u);
    EXPECT_EQ(spec.d_audio, 16u);
    EXPECT_EQ(spec.d_video, 32u);
    EXPECT_EQ(spec.classes, 4u);
}

TEST(Synthetic, SameSeedSameBytes) {
    test::TempDir dir("synth");
    const auto spec = tiny_spec(SynthMode::kFusionRequired);
    write_synthetic(generate_synthetic(spec), dir / "a");
    write_synthetic(generate_synthetic(spec), dir / "b");
    for (const auto& entry : fs::directory_iterator(dir / "a")) {
        const auto name = entry.path().filename().string();
        EXPECT_EQ(byte_io::read_file(entry.path()), byte_io::read_file(dir / "b" / name)) << name;
    }
    auto other = spec;
    other.seed = 8;
    EXPECT_NE(generate_synthetic(other).containers, generate_synthetic(spec).containers);
}

std::vector<double> mean_rows(const std::vector<float>& block, std::size_t rows, std::size_t cols) {
    std::vector<double> out(cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t c = 0; c < cols; ++c) out[c] += block[i * cols + c] / static_cast<double>(rows);
    return out;
}

TEST(Synthetic, NoiselessAudioSignalIsLinearlySeparable) {
    auto spec = tiny_spec(SynthMode::kAudioOnlySolvable);
    spec.n_items = 200;
    spec.noise_sigma = 0.0;
    const auto data = generate_synthetic(spec);
    std::vector<std::vector<double>> feats;
    for (const auto& c : data.containers) feats.push_back(mean_rows(c.audio, c.n_audio, c.d_audio));
    for (std::size_t cls = 0; cls < spec.classes; ++cls) {
        std::vector<double> mu_pos(spec.d_audio, 0.0), mu_neg(spec.d_audio, 0.0);
        std::vector<bool> pos;
        for (const auto& item : data.manifest.items)
            pos.push_back(std::find(item.labels.begin(), item.labels.end(), cls) != item.labels.end());
        const double n_pos = std::count(pos.begin(), pos.end(), true), n_neg = pos.size() - n_pos;
        ASSERT_GT(n_pos, 0);
        ASSERT_GT(n_neg, 0);
        for (std::size_t i = 0; i < feats.size(); ++i)
            for (std::size_t d = 0; d < spec.d_audio; ++d) (pos[i] ? mu_pos : mu_neg)[d] += feats[i][d] / (pos[i] ? n_pos : n_neg);
        double lowest_pos = INFINITY, highest_neg = -INFINITY;
        for (std::size_t i = 0; i < feats.size(); ++i) {
            double proj = 0;
            for (std::size_t d = 0; d < spec.d_audio; ++d) proj += (mu_pos[d] - mu_neg[d]) * feats[i][d];
            if (pos[i]) lowest_pos = std::min(lowest_pos, proj);
            else highest_neg = std::max(highest_neg, proj);
        }
        EXPECT_GT(lowest_pos, highest_neg) << "class " << cls;
    }
}

TEST(Synthetic, FusionTaskMarginalsCarryNoLabel) {
    auto spec = tiny_spec(SynthMode::kFusionRequired);
    spec.n_items = 200;
    spec.noise_sigma = 0.0;
    const auto data = generate_synthetic(spec);
    for (std::size_t cls = 0; cls < spec.classes; ++cls) {
        for (bool audio : {true, false}) {
            const std::size_t d = audio ? spec.d_audio : spec.d_video;
            std::vector<double> mu_pos(d, 0.0), mu_neg(d, 0.0);
            double n_pos = 0, n_neg = 0;
            for (std::size_t i = 0; i < data.containers.size(); ++i) {
                const auto& c = data.containers[i];
                const auto f = audio ? mean_rows(c.audio, c.n_audio, d) : mean_rows(c.video, c.n_video, d);
                const auto& labels = data.manifest.items[i].labels;
                const bool pos = std::find(labels.begin(), labels.end(), cls) != labels.end();
                (pos ? n_pos : n_neg) += 1;
                for (std::size_t k = 0; k < d; ++k) (pos ? mu_pos : mu_neg)[k] += f[k];
            }
            for (std::size_t k = 0; k < d; ++k) EXPECT_NEAR(mu_pos[k] / n_pos, mu_neg[k] / n_neg, 1e-6);
        }
    }
}

TEST(Synthetic, RejectsInvalidSpecs) {
    auto spec = tiny_spec(SynthMode::kFusionRequired);
    spec.noise_sigma = -1;
    EXPECT_THROW(generate_synthetic(spec), ConfigError);
    spec = tiny_spec(SynthMode::kFusionRequired);
    spec.n_items = 0;
    EXPECT_THROW(generate_synthetic(spec), ConfigError);
    spec = tiny_spec(SynthMode::kFusionRequired);
    spec.n_audio = 3;
    EXPECT_THROW(generate_synthetic(spec), ConfigError);
    EXPECT_THROW(parse_synth_mode("video_only"), ConfigError);
    EXPECT_EQ(synth_spec_from_json(to_json(tiny_spec(SynthMode::kAudioOnlySolvable))), tiny_spec(SynthMode::kAudioOnlySolvable));
}

TEST(LoadDataset, SyntheticTenItemsRoundTrip) {
    test::TempDir dir("load");
    const auto spec = tiny_spec(SynthMode::kFusionRequired);
    const auto generated = generate_synthetic(spec);
    write_synthetic(generated, dir.path());
    const auto data = load_dataset(dir / "manifest.json", EdgeRules{});
    ASSERT_EQ(data.size(), 10u);
    EXPECT_EQ(data.audio_dim, spec.d_audio);
    EXPECT_TRUE(data.uniform_node_counts());
    for (std::size_t i = 0; i < 10; ++i) {
        std::vector<std::uint8_t> expected(spec.classes, 0);
        for (auto c : generated.manifest.items[i].labels) expected[c] = 1;
        EXPECT_EQ(data.samples[i].labels, expected);
        EXPECT_EQ(data.samples[i].graph.n_audio(), spec.n_audio);
        EXPECT_TRUE(std::equal(generated.containers[i].video.begin(), generated.containers[i].video.end(),
                               data.samples[i].graph.video.values().begin()));
    }
}

TEST(LoadDataset, EmptyManifestIsAnError) {
    test::TempDir dir("empty");
    DatasetManifest m;
    m.num_classes = 2;
    m.class_names = {"a", "b"};
    write_manifest(dir / "manifest.json", m);
    const auto msg = message_of([&] { load_dataset(dir / "manifest.json", EdgeRules{}); });
    EXPECT_NE(msg.find("empty dataset"), std::string::npos) << msg;
}

TEST(LoadDataset, CollectsEveryBadItem) {
    test::TempDir dir("bad");
    Rng rng(4);
    write_container(dir / "ok.hgav", random_container(rng, 3, 4, 3, 5));
    write_container(dir / "wide.hgav", random_container(rng, 3, 6, 3, 5));
    DatasetManifest m;
    m.num_classes = 2;
    m.class_names = {"a", "b"};
    m.items = {{"good", "ok.hgav", {0}},
               {"mixed_dims", "wide.hgav", {1}},
               {"bad_label", "ok.hgav", {5}},
               {"missing", "nope.hgav", {}}};
    write_manifest(dir / "manifest.json", m);
    const auto msg = message_of([&] { load_dataset(dir / "manifest.json", EdgeRules{}); });
    for (const char* id : {"mixed_dims", "bad_label", "missing"}) EXPECT_NE(msg.find(id), std::string::npos) << msg;
    EXPECT_EQ(msg.find("'good'"), std::string::npos) << msg;
    EXPECT_THROW(load_dataset(dir / "manifest.json", EdgeRules{}), DataError);
    EXPECT_THROW(load_dataset(dir / "absent.json", EdgeRules{}), IoError);
}

TEST(Split, SeededAndDisjoint) {
    const auto data = test::synthetic_dataset(tiny_spec(SynthMode::kFusionRequired));
    auto [train_a, val_a] = split_dataset(data, 3, 0.8);
    auto [train_b, val_b] = split_dataset(data, 3, 0.8);
    EXPECT_EQ(train_a.size(), 8u);
    EXPECT_EQ(val_a.size(), 2u);
    std::vector<std::string> ids;
    for (const auto* part : {&train_a, &val_a})
        for (const auto& s : part->samples) ids.push_back(s.id);
    std::sort(ids.begin(), ids.end());
    EXPECT_EQ(std::unique(ids.begin(), ids.end()), ids.end());
    EXPECT_EQ(ids.size(), 10u);
    for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(train_a.samples[i].id, train_b.samples[i].id);
    auto [small_train, small_val] = split_dataset(data, 0, 0.99);
    EXPECT_EQ(small_val.size(), 1u);
}

}  // namespace
}  // namespace hgnn
