// qseal: command-line front end for sealing, reading, attacking, verifying,
// analyzing encoding families and running Monte Carlo experiments.
//
// Exit codes: 0 success, 1 runtime error, 2 usage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qseal/qseal.hpp"

namespace {

using qseal::io::json;

constexpr int kUsageError = 2;
constexpr int kRuntimeError = 1;

std::vector<qseal::SlotRequest> parse_slots(const std::vector<std::string>& specs) {
    std::vector<qseal::SlotRequest> req;
    for (const auto& s : specs) {
        const auto colon = s.find(':');
        if (colon == std::string::npos) throw CLI::ValidationError("--slot", "expected TRIPLET:POSITION, got '" + s + "'");
        try {
            std::size_t used = 0;
            const auto idx = std::stoul(s.substr(0, colon), &used);
            if (used != colon) throw std::invalid_argument(s);
            const auto pos = std::stoul(s.substr(colon + 1), &used);
            if (used != s.size() - colon - 1) throw std::invalid_argument(s);
            req.push_back({idx, pos});
        } catch (const std::logic_error&) {
            throw CLI::ValidationError("--slot", "expected TRIPLET:POSITION, got '" + s + "'");
        }
    }
    return req;
}

void print_flags(const std::vector<bool>& flags, const char* name) {
    std::cout << name << ":";
    for (bool f : flags) std::cout << ' ' << (f ? 1 : 0);
    std::cout << '\n';
}

void print_fidelities(const std::vector<double>& f) {
    std::cout << "fidelity:";
    for (double x : f) std::cout << ' ' << x;
    std::cout << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum seal simulator: seal bits into qubit triplets, read, attack, verify and analyze."};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    std::string memory_path, record_path, grant_path, out_path;

    // seal
    auto* seal = app.add_subcommand("seal", "Seal a bit string; writes the public memory and Alice's record");
    std::string bits_text;
    std::string seal_grant_path;
    seal->add_option("--bits", bits_text, "Message as a string of 0/1")->required();
    seal->add_option("--seed", seed, "RNG seed");
    seal->add_option("--out", memory_path, "Sealed memory JSON to write")->required();
    seal->add_option("--record", record_path, "Seal record JSON to write")->required();
    seal->add_option("--grant-controls", seal_grant_path, "Also write a copy grant for every control slot");

    // grant
    auto* grant = app.add_subcommand("grant", "Issue qubit copies for an intended reader");
    std::vector<std::string> slot_specs;
    bool grant_controls = false;
    grant->add_option("--record", record_path, "Seal record JSON")->required()->check(CLI::ExistingFile);
    grant->add_option("--out", out_path, "Copy grant JSON to write")->required();
    grant->add_option("--slot", slot_specs, "Slot TRIPLET:POSITION to copy (repeatable)");
    grant->add_flag("--controls", grant_controls, "Copy every control slot");

    // read
    auto* read = app.add_subcommand("read", "Announced z-basis read with majority vote; rewrites the memory");
    read->add_option("--memory", memory_path, "Sealed memory JSON")->required()->check(CLI::ExistingFile);
    read->add_option("--seed", seed, "RNG seed");

    // attack
    auto* attack = app.add_subcommand("attack", "Read the memory as an attacker; rewrites the memory");
    std::string mode;
    attack->add_option("--mode", mode, "single or collective")
        ->required()
        ->check(CLI::IsMember({"single", "collective"}));
    attack->add_option("--memory", memory_path, "Sealed memory JSON")->required()->check(CLI::ExistingFile);
    attack->add_option("--seed", seed, "RNG seed (single mode)");

    // verify
    auto* verify = app.add_subcommand("verify", "Check the seal as Alice (record) or as Bob (copy grant)");
    std::string role;
    verify->add_option("--as", role, "alice or bob")->required()->check(CLI::IsMember({"alice", "bob"}));
    verify->add_option("--memory", memory_path, "Sealed memory JSON")->required()->check(CLI::ExistingFile);
    verify->add_option("--record", record_path, "Seal record JSON (alice)")->check(CLI::ExistingFile);
    verify->add_option("--grant", grant_path, "Copy grant JSON (bob)")->check(CLI::ExistingFile);
    verify->add_option("--seed", seed, "RNG seed");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Decompose encoding families and synthesize the perfect reader");
    std::string families_path;
    bool use_triplets = false;
    analyze->add_option("--families", families_path, "Encoding families JSON")->check(CLI::ExistingFile);
    analyze->add_flag("--triplets", use_triplets, "Analyze the built-in 12+12 triplet families");
    analyze->add_option("--out", out_path, "Write the report here instead of stdout");

    // families
    auto* families = app.add_subcommand("families", "Write the built-in triplet encoding families as JSON");
    families->add_option("--out", out_path, "Families JSON to write")->required();

    // experiment
    auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo experiment");
    std::string config_path, scenario_name = "honest_read", format_name = "json";
    std::size_t message_bits = 1, trials = 1;
    unsigned threads = 0;
    bool per_trial = false;
    experiment->add_option("--config", config_path, "ExperimentConfig JSON")->check(CLI::ExistingFile);
    experiment->add_option("--scenario", scenario_name,
                           "honest_read|single_qubit_attack|collective_attack|swap_test_suite|analyzer_demo");
    experiment->add_option("--bits", message_bits, "Message bits per trial");
    experiment->add_option("--trials", trials, "Number of trials");
    experiment->add_option("--seed", seed, "RNG seed");
    experiment->add_option("--format", format_name, "json or csv");
    experiment->add_flag("--per-trial", per_trial, "Include per-trial records in JSON output");
    experiment->add_option("--threads", threads, "Worker threads (default: QSEAL_THREADS or all cores)");
    experiment->add_option("--out", out_path, "Write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    try {
        qseal::RandomStream rng(seed);

        if (*seal) {
            const auto bits = qseal::bits_from_string(bits_text);
            auto [memory, record] = qseal::seal_message(bits, rng);
            qseal::io::write_file(memory_path, qseal::io::to_json(memory));
            qseal::io::write_file(record_path, qseal::io::to_json(record));
            if (!seal_grant_path.empty()) {
                const auto req = qseal::control_slot_requests(record);
                qseal::io::write_file(seal_grant_path, qseal::io::to_json(qseal::distribute_copies(record, req)));
            }
            std::cout << "sealed " << bits.size() << " bits\n";
        } else if (*grant) {
            const auto record = qseal::io::record_from_json(qseal::io::read_file(record_path));
            auto req = parse_slots(slot_specs);
            if (grant_controls) {
                const auto c = qseal::control_slot_requests(record);
                req.insert(req.end(), c.begin(), c.end());
            }
            if (req.empty()) throw CLI::ValidationError("grant", "need --slot or --controls");
            qseal::io::write_file(out_path, qseal::io::to_json(qseal::distribute_copies(record, req)));
            std::cout << "granted " << req.size() << " copies\n";
        } else if (*read) {
            auto memory = qseal::io::memory_from_json(qseal::io::read_file(memory_path));
            const auto bits = qseal::honest_read(memory, rng);
            qseal::io::write_file(memory_path, qseal::io::to_json(memory));
            std::cout << qseal::bits_to_string(bits) << '\n';
        } else if (*attack) {
            auto memory = qseal::io::memory_from_json(qseal::io::read_file(memory_path));
            const auto out = mode == "collective" ? qseal::collective_attack(memory)
                                                  : qseal::single_qubit_attack(memory, rng);
            qseal::io::write_file(memory_path, qseal::io::to_json(memory));
            std::cout << qseal::bits_to_string(out.bits) << '\n';
            print_fidelities(out.per_triplet_fidelity);
        } else if (*verify) {
            auto memory = qseal::io::memory_from_json(qseal::io::read_file(memory_path));
            bool detected = false;
            if (role == "alice") {
                if (record_path.empty()) throw CLI::ValidationError("--record", "required with --as alice");
                const auto record = qseal::io::record_from_json(qseal::io::read_file(record_path));
                const auto rep = qseal::alice_check(memory, record, rng);
                detected = rep.detected;
                print_flags(rep.per_triplet, "flagged");
            } else {
                if (grant_path.empty()) throw CLI::ValidationError("--grant", "required with --as bob");
                auto g = qseal::io::grant_from_json(qseal::io::read_file(grant_path));
                const auto rep = qseal::bob_check(memory, g, rng);
                detected = rep.detected;
                print_flags(rep.passed, "passed");
                qseal::io::write_file(grant_path, qseal::io::to_json(g));
            }
            qseal::io::write_file(memory_path, qseal::io::to_json(memory));
            std::cout << (detected ? "tampered" : "intact") << '\n';
        } else if (*analyze) {
            if (use_triplets == !families_path.empty())
                throw CLI::ValidationError("analyze", "give exactly one of --families or --triplets");
            const auto fam = use_triplets ? qseal::triplet_families()
                                          : qseal::io::families_from_json(qseal::io::read_file(families_path));
            const auto d = qseal::decompose(fam);
            json report = {{"decomposition", qseal::io::to_json(d)}, {"breakable", d.orthogonal()}};
            if (d.orthogonal()) {
                const auto m = qseal::synthesize_breaker(fam);
                const qseal::BinaryPovm povm{m.projector0, m.projector1};
                report["breaker"] = qseal::io::to_json(m);
                report["readability_max_error"] = qseal::check_perfect_readability(fam, povm);
                report["embedding_check"] = qseal::check_embedding(m.embedding, fam, m.sector_dim).ok;
                report["residual_dim"] = m.residual_dim;
            }
            if (out_path.empty())
                std::cout << report.dump(2) << '\n';
            else
                qseal::io::write_file(out_path, report);
        } else if (*families) {
            qseal::io::write_file(out_path, qseal::io::to_json(qseal::triplet_families()));
        } else if (*experiment) {
            qseal::ExperimentConfig cfg;
            if (!config_path.empty()) {
                cfg = qseal::config_from_json(qseal::io::read_file(config_path));
            } else {
                cfg.scenario = qseal::parse_scenario(scenario_name);
                cfg.output_format = qseal::parse_format(format_name);
                cfg.message_bits = message_bits;
                cfg.trials = trials;
                cfg.seed = seed;
                cfg.per_trial = per_trial;
                cfg.validate();
            }
            const auto rep = qseal::run_experiment(cfg, threads);
            const std::string text = cfg.output_format == qseal::OutputFormat::Csv
                                         ? qseal::report_to_csv(rep)
                                         : qseal::report_to_json(rep).dump(2) + "\n";
            if (out_path.empty()) {
                std::cout << text;
            } else {
                std::ofstream f(out_path);
                if (!(f << text)) throw qseal::FormatError("cannot write '" + out_path + "'");
            }
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const qseal::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return 0;
}
