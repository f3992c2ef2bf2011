#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "qseal/harness.hpp"
#include "qseal/io.hpp"

using namespace qseal;

namespace {

ExperimentConfig make(Scenario s, std::size_t bits, std::size_t trials, std::uint64_t seed) {
    ExperimentConfig c;
    c.scenario = s;
    c.message_bits = bits;
    c.trials = trials;
    c.seed = seed;
    return c;
}

double sigma3(double p, double n) { return 3.0 * std::sqrt(p * (1.0 - p) / n); }

}  // namespace

TEST(Experiment, CollectiveAttackIsPerfectAndSilent) {
    const auto r = run_experiment(make(Scenario::CollectiveAttack, 8, 1000, 42));
    EXPECT_EQ(r.bit_accuracy, 1.0);
    EXPECT_EQ(r.detection_rate, 0.0);
    ASSERT_TRUE(r.bob_detection_rate.has_value());
    EXPECT_EQ(*r.bob_detection_rate, 0.0);
    EXPECT_GE(r.mean_fidelity, 1.0 - 1e-12);
    EXPECT_GE(r.min_fidelity, 1.0 - 1e-12);
}

TEST(Experiment, HonestReadSingleBit) {
    const auto r = run_experiment(make(Scenario::HonestRead, 1, 10000, 7));
    EXPECT_EQ(r.bit_accuracy, 1.0);
    EXPECT_NEAR(r.detection_rate, 0.5, sigma3(0.5, 10000));
    EXPECT_NEAR(r.mean_fidelity, 0.5, 1e-12);
}

TEST(Experiment, HonestReadEightBits) {
    const auto r = run_experiment(make(Scenario::HonestRead, 8, 10000, 8));
    const double expect = 1.0 - std::pow(0.5, 8);
    EXPECT_EQ(r.bit_accuracy, 1.0);
    EXPECT_NEAR(r.detection_rate, expect, sigma3(expect, 10000));
}

TEST(Experiment, SwapTestSuiteCatchesReads) {
    // Bob's per-control failure after a z-read is 1/4; two triplets.
    const auto r = run_experiment(make(Scenario::SwapTestSuite, 2, 10000, 9));
    ASSERT_TRUE(r.bob_detection_rate.has_value());
    const double expect = 1.0 - 0.75 * 0.75;
    EXPECT_NEAR(*r.bob_detection_rate, expect, sigma3(expect, 10000));
    EXPECT_EQ(r.bit_accuracy, 1.0);
}

TEST(Experiment, AnalyzerDemoBehavesLikeCollectiveAttack) {
    const auto r = run_experiment(make(Scenario::AnalyzerDemo, 5, 300, 10));
    EXPECT_EQ(r.bit_accuracy, 1.0);
    EXPECT_EQ(r.detection_rate, 0.0);
    EXPECT_GE(r.min_fidelity, 1.0 - 1e-12);
}

TEST(Experiment, SingleQubitAttackScenario) {
    const auto r = run_experiment(make(Scenario::SingleQubitAttack, 1, 10000, 11));
    EXPECT_EQ(r.bit_accuracy, 1.0);
    EXPECT_NEAR(r.detection_rate, 0.5, sigma3(0.5, 10000));
}

TEST(Experiment, ReproducibleAcrossThreadCounts) {
    for (auto s : {Scenario::HonestRead, Scenario::SwapTestSuite, Scenario::CollectiveAttack}) {
        auto c = make(s, 4, 500, 1234);
        c.per_trial = true;
        const auto a = report_to_json(run_experiment(c, 1), false).dump();
        const auto b = report_to_json(run_experiment(c, 4), false).dump();
        const auto again = report_to_json(run_experiment(c, 3), false).dump();
        EXPECT_EQ(a, b);
        EXPECT_EQ(a, again);
    }
    auto c1 = make(Scenario::HonestRead, 4, 200, 1);
    auto c2 = make(Scenario::HonestRead, 4, 200, 2);
    EXPECT_NE(report_to_json(run_experiment(c1), false).dump(), report_to_json(run_experiment(c2), false).dump());
}

TEST(Experiment, PerTrialRecordsConsistentWithAccuracy) {
    auto c = make(Scenario::HonestRead, 3, 50, 5);
    c.per_trial = true;
    const auto j = report_to_json(run_experiment(c));
    ASSERT_EQ(j.at("records").size(), 50u);
    std::size_t correct = 0, total = 0;
    for (const auto& rec : j.at("records")) {
        const auto s = rec.at("bits_sealed").get<std::string>(), rd = rec.at("bits_read").get<std::string>();
        for (std::size_t i = 0; i < s.size(); ++i) correct += s[i] == rd[i];
        total += s.size();
    }
    EXPECT_EQ(static_cast<double>(correct) / static_cast<double>(total), j.at("bit_accuracy").get<double>());
}

TEST(Experiment, CsvColumns) {
    const auto r = run_experiment(make(Scenario::CollectiveAttack, 2, 3, 1));
    std::istringstream in(report_to_csv(r));
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "scenario,trial,bits_sealed,bits_read,detected,mean_fidelity");
    int rows = 0;
    while (std::getline(in, line)) {
        EXPECT_EQ(line.rfind("collective_attack,", 0), 0u);
        ++rows;
    }
    EXPECT_EQ(rows, 3);
}

TEST(Config, ParsesAndRejects) {
    using nlohmann::json;
    const auto c = config_from_json(json::parse(
        R"({"scenario": "swap_test_suite", "message_bits": 3, "trials": 9, "seed": 18446744073709551615, "output_format": "csv"})"));
    EXPECT_EQ(c.scenario, Scenario::SwapTestSuite);
    EXPECT_EQ(c.message_bits, 3u);
    EXPECT_EQ(c.trials, 9u);
    EXPECT_EQ(c.seed, 18446744073709551615ULL);
    EXPECT_EQ(c.output_format, OutputFormat::Csv);

    auto field_of = [](const char* text) {
        try {
            config_from_json(json::parse(text));
        } catch (const ConfigError& e) {
            return e.field();
        }
        return std::string("<none>");
    };
    EXPECT_EQ(field_of(R"({"scenario": "telepathy"})"), "scenario");
    EXPECT_EQ(field_of(R"({"trials": 3})"), "scenario");
    EXPECT_EQ(field_of(R"({"scenario": "honest_read", "trials": 0})"), "trials");
    EXPECT_EQ(field_of(R"({"scenario": "honest_read", "message_bits": -1})"), "message_bits");
    EXPECT_EQ(field_of(R"({"scenario": "honest_read", "seed": -5})"), "seed");
    EXPECT_EQ(field_of(R"({"scenario": "honest_read", "output_format": "xml"})"), "output_format");
    EXPECT_EQ(field_of(R"({"scenario": "honest_read", "colour": 1})"), "colour");
}

TEST(RoundTrip, SaveLoadDoesNotChangeReads) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        RandomStream rng(seed);
        const auto bits = bits_from_string("01101001");
        auto sealed = seal_message(bits, rng);
        auto loaded = io::memory_from_json(nlohmann::json::parse(io::to_json(sealed.memory).dump()));

        RandomStream r1(seed + 1000), r2(seed + 1000);
        EXPECT_EQ(honest_read(sealed.memory, r1), honest_read(loaded, r2));
        EXPECT_EQ(io::to_json(sealed.memory).dump(), io::to_json(loaded).dump());
    }
}

TEST(RandomStream, SplitIsIndependentOfParentConsumption) {
    RandomStream a(5), b(5);
    for (int i = 0; i < 10; ++i) b.next_u64();
    EXPECT_EQ(a.split(3).next_u64(), b.split(3).next_u64());
    EXPECT_NE(a.split(3).next_u64(), a.split(4).next_u64());
}
