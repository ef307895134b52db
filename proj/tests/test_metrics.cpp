#include <gtest/gtest.h>

#include <cmath>

#include "hgnn/evaluate.hpp"
#include "hgnn/metrics.hpp"
#include "hgnn/model.hpp"
#include "hgnn/train_config.hpp"
#include "test_support.hpp"

namespace hgnn {
namespace {

using Scores = std::vector<double>;
using Labels = std::vector<std::uint8_t>;

// Precision at each positive's rank, where an item ranks above another if its
// score is higher or the scores tie and it comes first.
double ap_oracle(const Scores& s, const Labels& y) {
    double total = 0.0;
    std::size_t n_pos = 0;
    for (std::size_t p = 0; p < s.size(); ++p) {
        if (!y[p]) continue;
        ++n_pos;
        std::size_t rank = 0, hits = 0;
        for (std::size_t q = 0; q < s.size(); ++q) {
            if (s[q] > s[p] || (s[q] == s[p] && q <= p)) {
                ++rank;
                hits += y[q];
            }
        }
        total += static_cast<double>(hits) / static_cast<double>(rank);
    }
    return total / static_cast<double>(n_pos);
}

double auc_oracle(const Scores& s, const Labels& y) {
    double wins = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (!y[i] || y[j]) continue;
            ++pairs;
            wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
        }
    return wins / static_cast<double>(pairs);
}

TEST(AveragePrecision, HandRankedExample) {
    EXPECT_NEAR(*average_precision(Scores{0.9, 0.8, 0.7}, Labels{1, 0, 1}), (1.0 + 2.0 / 3.0) / 2.0, 1e-15);
}

TEST(AveragePrecision, PerfectRankingAndAllPositive) {
    EXPECT_DOUBLE_EQ(*average_precision(Scores{0.9, 0.8, 0.2, 0.1}, Labels{1, 1, 0, 0}), 1.0);
    EXPECT_DOUBLE_EQ(*average_precision(Scores{0.1, 0.7, 0.3}, Labels{1, 1, 1}), 1.0);
}

TEST(AveragePrecision, NoPositivesIsUndefined) {
    EXPECT_FALSE(average_precision(Scores{0.1, 0.2}, Labels{0, 0}).has_value());
}

TEST(AveragePrecision, TiesKeepOriginalOrder) {
    // Equal scores: the negative listed first outranks the positive.
    EXPECT_DOUBLE_EQ(*average_precision(Scores{0.5, 0.5}, Labels{0, 1}), 0.5);
    EXPECT_DOUBLE_EQ(*average_precision(Scores{0.5, 0.5}, Labels{1, 0}), 1.0);
}

TEST(AveragePrecision, MatchesOracleOnRandomCases) {
    Rng rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.below(15);
        Scores s(n);
        Labels y(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = static_cast<double>(rng.below(6)) / 5.0;  // coarse grid forces ties
            y[i] = rng.below(2);
        }
        if (std::count(y.begin(), y.end(), 1) == 0) y[0] = 1;
        EXPECT_NEAR(*average_precision(s, y), ap_oracle(s, y), 1e-12);
    }
}

TEST(RocAuc, SeparatedPair) { EXPECT_DOUBLE_EQ(*roc_auc(Scores{0.9, 0.1}, Labels{1, 0}), 1.0); }

TEST(RocAuc, IdenticalScoresGiveHalf) {
    EXPECT_DOUBLE_EQ(*roc_auc(Scores{0.3, 0.3, 0.3, 0.3}, Labels{1, 0, 0, 1}), 0.5);
}

TEST(RocAuc, SingleClassIsUndefined) {
    EXPECT_FALSE(roc_auc(Scores{0.1, 0.2}, Labels{1, 1}).has_value());
    EXPECT_FALSE(roc_auc(Scores{0.1}, Labels{0}).has_value());
}

TEST(RocAuc, EightSampleCaseMatchesPairCount) {
    const Scores s{0.2, 0.9, 0.4, 0.4, 0.7, 0.1, 0.4, 0.8};
    const Labels y{0, 1, 1, 0, 0, 1, 0, 1};
    EXPECT_NEAR(*roc_auc(s, y), auc_oracle(s, y), 1e-15);
}

// Every labelling of every size up to 12, on tie-heavy score vectors.
TEST(RocAuc, ExhaustiveAgainstPairCounting) {
    Rng rng(2);
    for (std::size_t n = 2; n <= 12; ++n) {
        Scores s(n);
        for (double& v : s) v = static_cast<double>(rng.below(4));
        for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
            Labels y(n);
            for (std::size_t i = 0; i < n; ++i) y[i] = (bits >> i) & 1u;
            const auto auc = roc_auc(s, y);
            const auto pos = std::count(y.begin(), y.end(), 1);
            if (pos == 0 || pos == static_cast<long>(n)) {
                ASSERT_FALSE(auc.has_value());
                continue;
            }
            ASSERT_NEAR(*auc, auc_oracle(s, y), 1e-12) << n << " " << bits;
        }
    }
}

TEST(Metrics, InvariantUnderMonotoneTransforms) {
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.below(20);
        Scores s(n), t(n);
        Labels y(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = rng.uniform(-3, 3);
            t[i] = std::exp(2.0 * s[i]) + 5.0;
            y[i] = rng.below(2);
        }
        y[0] = 1;
        y[1] = 0;
        EXPECT_DOUBLE_EQ(*average_precision(s, y), *average_precision(t, y));
        EXPECT_DOUBLE_EQ(*roc_auc(s, y), *roc_auc(t, y));
    }
}

TEST(EvaluateScores, ExactLabelsScorePerfectly) {
    const std::vector<std::vector<std::uint8_t>> labels{{1, 0}, {0, 1}, {1, 1}, {0, 0}};
    std::vector<std::vector<double>> scores;
    for (const auto& row : labels) scores.emplace_back(row.begin(), row.end());
    const auto r = evaluate_scores(scores, labels);
    EXPECT_DOUBLE_EQ(*r.map, 1.0);
    EXPECT_DOUBLE_EQ(*r.roc_auc, 1.0);
    EXPECT_EQ(r.positives, (std::vector<std::size_t>{2, 2}));
}

TEST(EvaluateScores, RandomScoresGiveChanceAuc) {
    Rng rng(4);
    std::vector<std::vector<double>> scores;
    std::vector<std::vector<std::uint8_t>> labels;
    for (int i = 0; i < 1000; ++i) {
        scores.push_back({rng.uniform()});
        labels.push_back({static_cast<std::uint8_t>(i % 2)});
    }
    const auto r = evaluate_scores(scores, labels);
    EXPECT_GE(*r.roc_auc, 0.45);
    EXPECT_LE(*r.roc_auc, 0.55);
}

TEST(EvaluateScores, MapIsMeanOfPerClassAndSkipsEmptyClasses) {
    Rng rng(5);
    std::vector<std::vector<double>> scores;
    std::vector<std::vector<std::uint8_t>> labels;
    for (int i = 0; i < 30; ++i) {
        scores.push_back({rng.uniform(), rng.uniform(), rng.uniform()});
        labels.push_back({static_cast<std::uint8_t>(rng.below(2)), 0, static_cast<std::uint8_t>(rng.below(2))});
    }
    const auto r = evaluate_scores(scores, labels);
    ASSERT_FALSE(r.per_class_ap[1].has_value());
    EXPECT_FALSE(r.warnings.empty());
    for (std::size_t c : {0, 2}) {
        Scores s;
        Labels y;
        for (std::size_t i = 0; i < 30; ++i) s.push_back(scores[i][c]), y.push_back(labels[i][c]);
        EXPECT_NEAR(*r.per_class_ap[c], ap_oracle(s, y), 1e-12);
        EXPECT_NEAR(*r.per_class_auc[c], auc_oracle(s, y), 1e-12);
    }
    EXPECT_NEAR(*r.map, (*r.per_class_ap[0] + *r.per_class_ap[2]) / 2, 1e-15);
    const auto j = to_json(r);
    EXPECT_TRUE(j["per_class_ap"][1].is_null());
    EXPECT_EQ(j["positives"][1], 0);
}

TEST(EvaluateScores, FlagsTies) {
    const auto r = evaluate_scores({{0.5}, {0.5}, {0.1}}, {{1}, {0}, {0}});
    EXPECT_TRUE(r.tied_scores[0]);
}

TEST(Evaluate, RepeatedCallsAreIdentical) {
    SynthSpec spec;
    spec.n_items = 12;
    auto data = test::synthetic_dataset(spec);
    TrainConfig config;
    config.hidden = 8;
    config.layers = 2;
    Rng rng(0);
    auto model = Model::init(model_config_for(config, spec.d_audio, spec.d_video, spec.classes, spec.n_audio,
                                              spec.n_video),
                             rng);
    const auto a = evaluate(model, data);
    const auto b = evaluate(model, data);
    EXPECT_EQ(a.per_class_ap, b.per_class_ap);
    EXPECT_EQ(a.per_class_auc, b.per_class_auc);
    for (const auto& p : model.parameters()) EXPECT_FALSE(p.tensor.has_grad()) << p.name;
}

}  // namespace
}  // namespace hgnn
