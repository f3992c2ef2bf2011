#pragma once

// Monte Carlo experiment runner. Each trial seals a fresh random message,
// applies one reader scenario, and ends with Alice's control check. Trial i
// draws all randomness from RandomStream(seed).split(i), so reports do not
// depend on thread count or scheduling.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qseal/analyzer.hpp"
#include "qseal/attack.hpp"
#include "qseal/errors.hpp"
#include "qseal/random.hpp"
#include "qseal/seal.hpp"

namespace qseal {

enum class Scenario { HonestRead, SingleQubitAttack, CollectiveAttack, SwapTestSuite, AnalyzerDemo };
enum class OutputFormat { Json, Csv };

inline const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::HonestRead: return "honest_read";
        case Scenario::SingleQubitAttack: return "single_qubit_attack";
        case Scenario::CollectiveAttack: return "collective_attack";
        case Scenario::SwapTestSuite: return "swap_test_suite";
        case Scenario::AnalyzerDemo: return "analyzer_demo";
    }
    return "?";
}

inline Scenario parse_scenario(const std::string& s) {
    for (auto sc : {Scenario::HonestRead, Scenario::SingleQubitAttack, Scenario::CollectiveAttack,
                    Scenario::SwapTestSuite, Scenario::AnalyzerDemo})
        if (s == to_string(sc)) return sc;
    throw ConfigError("scenario", "unknown scenario '" + s + "'");
}

inline OutputFormat parse_format(const std::string& s) {
    if (s == "json") return OutputFormat::Json;
    if (s == "csv") return OutputFormat::Csv;
    throw ConfigError("output_format", "must be 'json' or 'csv', got '" + s + "'");
}

struct ExperimentConfig {
    Scenario scenario = Scenario::HonestRead;
    std::size_t message_bits = 1;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    OutputFormat output_format = OutputFormat::Json;
    bool per_trial = false;  // include per-trial records in JSON output

    void validate() const {
        if (message_bits < 1) throw ConfigError("message_bits", "must be >= 1");
        if (trials < 1) throw ConfigError("trials", "must be >= 1");
    }
};

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config", "must be a JSON object");
    ExperimentConfig c;
    auto positive = [&](const char* name, std::size_t& out) {
        if (!j.contains(name)) return;
        const auto& v = j.at(name);
        if (!v.is_number_integer() || v.get<long long>() < 1) throw ConfigError(name, "must be an integer >= 1");
        out = v.get<std::size_t>();
    };
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& k = it.key();
        if (k != "scenario" && k != "message_bits" && k != "trials" && k != "seed" && k != "output_format" &&
            k != "per_trial")
            throw ConfigError(k, "unknown field");
    }
    if (!j.contains("scenario") || !j.at("scenario").is_string()) throw ConfigError("scenario", "required string");
    c.scenario = parse_scenario(j.at("scenario").get<std::string>());
    positive("message_bits", c.message_bits);
    positive("trials", c.trials);
    if (j.contains("seed")) {
        const auto& v = j.at("seed");
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
            throw ConfigError("seed", "must be a non-negative integer");
        c.seed = v.get<std::uint64_t>();
    }
    if (j.contains("output_format")) {
        if (!j.at("output_format").is_string()) throw ConfigError("output_format", "must be a string");
        c.output_format = parse_format(j.at("output_format").get<std::string>());
    }
    if (j.contains("per_trial")) {
        if (!j.at("per_trial").is_boolean()) throw ConfigError("per_trial", "must be a boolean");
        c.per_trial = j.at("per_trial").get<bool>();
    }
    c.validate();
    return c;
}

struct TrialRecord {
    std::size_t trial = 0;
    std::vector<Bit> bits_sealed;
    std::vector<Bit> bits_read;
    bool detected = false;          // Alice's check
    std::optional<bool> bob_detected;  // SWAP tests, when the scenario runs them
    double mean_fidelity = 0.0;
    std::vector<double> fidelities;

    std::size_t correct_bits() const {
        std::size_t c = 0;
        for (std::size_t i = 0; i < bits_sealed.size(); ++i) c += bits_sealed[i] == bits_read[i];
        return c;
    }
};

struct ExperimentReport {
    ExperimentConfig config;
    double bit_accuracy = 0.0;
    double detection_rate = 0.0;
    double detection_rate_3sigma = 0.0;
    std::optional<double> bob_detection_rate;
    double mean_fidelity = 0.0;
    double min_fidelity = 1.0;
    double wall_time_s = 0.0;
    std::vector<TrialRecord> records;
};

inline std::string bits_to_string(std::span<const Bit> bits) {
    std::string s;
    for (Bit b : bits) s.push_back(b ? '1' : '0');
    return s;
}

inline std::vector<Bit> bits_from_string(const std::string& s) {
    std::vector<Bit> bits;
    for (char ch : s) {
        if (ch != '0' && ch != '1') throw FormatError("bit string may contain only '0' and '1'");
        bits.push_back(static_cast<Bit>(ch - '0'));
    }
    return bits;
}

/// Three-sigma half width of a binomial proportion estimate.
inline double binomial_3sigma(double p, std::size_t n) { return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n)); }

namespace detail {

inline const DiscriminationMeasurement& triplet_breaker() {
    static const DiscriminationMeasurement m = synthesize_breaker(triplet_families());
    return m;
}

inline std::vector<Bit> analyzer_read(SealedMemory& memory, RandomStream& rng) {
    const auto& m = triplet_breaker();
    std::vector<Bit> bits;
    for (std::size_t i = 0; i < memory.size(); ++i) {
        const auto r = read_logical_bit(m, memory.triplet(i), rng);
        bits.push_back(r.bit);
        memory.replace(i, StateVector::normalize(m.projector(r.bit).apply(memory.triplet(i))));
    }
    return bits;
}

}  // namespace detail

inline TrialRecord run_trial(const ExperimentConfig& config, std::size_t trial) {
    RandomStream rng = RandomStream(config.seed).split(trial);
    TrialRecord rec;
    rec.trial = trial;
    rec.bits_sealed.reserve(config.message_bits);
    for (std::size_t i = 0; i < config.message_bits; ++i) rec.bits_sealed.push_back(rng.bit() ? 1 : 0);

    auto [memory, record] = seal_message(rec.bits_sealed, rng);
    const SealedMemory before = memory;

    auto bob = [&] {
        const auto req = control_slot_requests(record);
        auto grant = distribute_copies(record, req);
        rec.bob_detected = bob_check(memory, grant, rng).detected;
    };

    switch (config.scenario) {
        case Scenario::HonestRead:
            rec.bits_read = honest_read(memory, rng);
            break;
        case Scenario::SingleQubitAttack:
            rec.bits_read = single_qubit_attack(memory, rng).bits;
            break;
        case Scenario::CollectiveAttack:
            rec.bits_read = collective_attack(memory).bits;
            bob();
            break;
        case Scenario::SwapTestSuite:
            rec.bits_read = honest_read(memory, rng);
            bob();
            break;
        case Scenario::AnalyzerDemo:
            rec.bits_read = detail::analyzer_read(memory, rng);
            break;
    }

    rec.fidelities = disturbance_report(before, memory);
    double s = 0.0;
    for (double f : rec.fidelities) s += f;
    rec.mean_fidelity = s / static_cast<double>(rec.fidelities.size());
    rec.detected = alice_check(memory, record, rng).detected;
    return rec;
}

/// Worker count: QSEAL_THREADS if set and positive, else hardware concurrency.
inline unsigned default_threads() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("QSEAL_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) n = static_cast<unsigned>(v);
    }
    return n;
}

inline ExperimentReport run_experiment(const ExperimentConfig& config, unsigned threads = 0) {
    config.validate();
    if (threads == 0) threads = default_threads();
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<TrialRecord> records(config.trials);
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, config.trials));
    if (threads <= 1) {
        for (std::size_t t = 0; t < config.trials; ++t) records[t] = run_trial(config, t);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(threads);
        for (unsigned w = 0; w < threads; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t t = w; t < config.trials; t += threads) records[t] = run_trial(config, t);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    // Aggregate in trial order so the result is independent of scheduling.
    ExperimentReport rep;
    rep.config = config;
    std::size_t correct = 0, total = 0, detected = 0, bob_detected = 0, bob_trials = 0;
    double fsum = 0.0;
    for (const auto& r : records) {
        correct += r.correct_bits();
        total += r.bits_sealed.size();
        detected += r.detected;
        if (r.bob_detected) {
            ++bob_trials;
            bob_detected += *r.bob_detected;
        }
        fsum += r.mean_fidelity;
        for (double f : r.fidelities) rep.min_fidelity = std::min(rep.min_fidelity, f);
    }
    const auto n = static_cast<double>(config.trials);
    rep.bit_accuracy = static_cast<double>(correct) / static_cast<double>(total);
    rep.detection_rate = static_cast<double>(detected) / n;
    rep.detection_rate_3sigma = binomial_3sigma(rep.detection_rate, config.trials);
    if (bob_trials) rep.bob_detection_rate = static_cast<double>(bob_detected) / static_cast<double>(bob_trials);
    rep.mean_fidelity = fsum / n;
    rep.records = std::move(records);
    rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

/// JSON report. `include_wall_time` is off when comparing reports for
/// reproducibility.
inline nlohmann::json report_to_json(const ExperimentReport& r, bool include_wall_time = true) {
    nlohmann::json j = {{"scenario", to_string(r.config.scenario)},
                        {"message_bits", r.config.message_bits},
                        {"trials", r.config.trials},
                        {"seed", r.config.seed},
                        {"bit_accuracy", r.bit_accuracy},
                        {"detection_rate", r.detection_rate},
                        {"detection_rate_3sigma", r.detection_rate_3sigma},
                        {"mean_fidelity", r.mean_fidelity},
                        {"min_fidelity", r.min_fidelity}};
    if (r.bob_detection_rate) j["bob_detection_rate"] = *r.bob_detection_rate;
    if (include_wall_time) j["wall_time_s"] = r.wall_time_s;
    if (r.config.per_trial) {
        nlohmann::json recs = nlohmann::json::array();
        for (const auto& t : r.records) {
            nlohmann::json x = {{"trial", t.trial},
                                {"bits_sealed", bits_to_string(t.bits_sealed)},
                                {"bits_read", bits_to_string(t.bits_read)},
                                {"detected", t.detected},
                                {"mean_fidelity", t.mean_fidelity}};
            if (t.bob_detected) x["bob_detected"] = *t.bob_detected;
            recs.push_back(std::move(x));
        }
        j["records"] = std::move(recs);
    }
    return j;
}

inline constexpr const char* kCsvHeader = "scenario,trial,bits_sealed,bits_read,detected,mean_fidelity";

/// One row per trial with the fixed column set of kCsvHeader.
inline std::string report_to_csv(const ExperimentReport& r) {
    std::ostringstream out;
    out << kCsvHeader << '\n';
    char buf[64];
    for (const auto& t : r.records) {
        std::snprintf(buf, sizeof buf, "%.17g", t.mean_fidelity);
        out << to_string(r.config.scenario) << ',' << t.trial << ',' << bits_to_string(t.bits_sealed) << ','
            << bits_to_string(t.bits_read) << ',' << (t.detected ? 1 : 0) << ',' << buf << '\n';
    }
    return out.str();
}

}  // namespace qseal
