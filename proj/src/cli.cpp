#include "qsim/cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "qsim/csv.hpp"
#include "qsim/metrics.hpp"
#include "qsim/scenario.hpp"
#include "qsim/sim_run.hpp"

namespace qsim {

namespace {

void write_run_outputs(const ScenarioConfig& cfg, const RunOutput& out,
                       const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto drops = drops_over_time(out.records, cfg.run.bucket_s);
    write_drops_csv((dir / "drops.csv").string(), drops_rows(drops));
    write_delivered_csv((dir / "delivered.csv").string(),
                        delivered_rows(out.records, cfg.run.bucket_s));
    write_delay_csv((dir / "delay.csv").string(), delay_rows(out.records));
    write_summary_csv((dir / "summary.csv").string(),
                      summary_rows(out.records, cfg.scheduler.kind));
    write_manifest((dir / "manifest").string(), cfg);
}

void print_run_line(const ScenarioConfig& cfg, const RunOutput& out) {
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    for (const auto& s : summarize(out.records)) {
        delivered += s.delivered_pkts;
        dropped += s.dropped_pkts;
    }
    std::cout << cfg.name << " scheduler=" << cfg.scheduler.kind << " seed=" << cfg.run.seed
              << " emitted=" << out.records.size() << " delivered=" << delivered
              << " dropped=" << dropped << '\n';
    for (const auto& line : out.log) {
        std::cout << "  " << line << '\n';
    }
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"deterministic packet-scheduler and QoS scenario simulator"};
    app.name("qsim");

    int scenario = 0;
    std::string scheduler;
    bool all_schedulers = false;
    std::string rsvp_mode;
    std::optional<std::uint64_t> seed;
    std::optional<double> duration_s;
    std::optional<double> bucket_s;
    std::string config_file;
    std::string out_dir = "out";

    app.add_option("--scenario", scenario, "built-in scenario id")
        ->check(CLI::IsMember({1, 2, 3}));
    app.add_option("--scheduler", scheduler,
                   "fifo|pq|cq|cq_llq|wfq|wfq_llq|pwfq_rr (subject to the scenario's set)");
    app.add_flag("--all-schedulers", all_schedulers,
                 "run every scheduler the scenario supports, one subdirectory each");
    app.add_option("--rsvp", rsvp_mode, "on|off (scenario 2 reservation toggle)")
        ->check(CLI::IsMember({"on", "off"}));
    app.add_option("--seed", seed, "random seed");
    app.add_option("--duration", duration_s, "simulated seconds");
    app.add_option("--bucket", bucket_s, "metrics bucket width in seconds");
    app.add_option("--config", config_file, "scenario config file (JSON)");
    app.add_option("--out", out_dir, "output directory");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help and friends
            std::cout << app.help();
            return 0;
        }
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (config_file.empty() && scenario == 0) {
            std::cerr << "error: either --scenario or --config is required\n";
            return 2;
        }
        if (all_schedulers && scenario == 0) {
            std::cerr << "error: --all-schedulers needs --scenario\n";
            return 2;
        }

        ScenarioOverrides ov;
        if (!scheduler.empty()) {
            ov.scheduler = scheduler;
        }
        if (seed) {
            ov.seed = *seed;
        }
        if (duration_s) {
            ov.duration_s = *duration_s;
        }
        if (bucket_s) {
            ov.bucket_s = *bucket_s;
        }
        if (!rsvp_mode.empty()) {
            ov.rsvp_enabled = rsvp_mode == "on";
        }

        std::vector<std::string> kinds;
        if (all_schedulers) {
            kinds = scenario_scheduler_choices(scenario);
        } else {
            kinds.push_back(scheduler); // may be empty: keep the config default
        }

        for (const auto& kind : kinds) {
            ScenarioConfig cfg;
            ScenarioOverrides run_ov = ov;
            if (!kind.empty()) {
                run_ov.scheduler = kind;
            }
            if (!config_file.empty()) {
                cfg = load_scenario_file(config_file);
                if (run_ov.scheduler) {
                    cfg.scheduler.kind = *run_ov.scheduler;
                }
                if (run_ov.seed) {
                    cfg.run.seed = *run_ov.seed;
                }
                if (run_ov.duration_s) {
                    cfg.run.duration_s = *run_ov.duration_s;
                }
                if (run_ov.bucket_s) {
                    cfg.run.bucket_s = *run_ov.bucket_s;
                }
                if (run_ov.rsvp_enabled) {
                    cfg.rsvp.enabled = *run_ov.rsvp_enabled;
                }
                cfg.validate();
            } else {
                cfg = build_scenario(scenario, run_ov);
            }

            const auto out = run_scenario(cfg);
            std::filesystem::path dir = out_dir;
            if (all_schedulers) {
                dir /= cfg.scheduler.kind;
            }
            write_run_outputs(cfg, out, dir);
            print_run_line(cfg, out);
        }
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return 1;
    }
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run_cli(args);
}

} // namespace qsim
