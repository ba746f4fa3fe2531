#include "qev/cli.hpp"

#include <array>
#include <cstdlib>
#include <ostream>

#include "CLI11.hpp"

#include "qev/config_io.hpp"
#include "qev/errors.hpp"
#include "qev/experiments.hpp"

namespace qev::harness {

namespace {

std::uint64_t default_seed() {
    if (const char* env = std::getenv("QEV_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw ConfigError("QEV_SEED is not an integer");
        }
    }
    return 20240901;
}

int cmd_fig1(std::ostream& out) {
    // The fixed worked election: 4 voters, voting order (4,2,1,3), round votes
    // (0,1,1,1). d[k][l] is agent k's Hadamard outcome in round l.
    const std::array<std::array<int, 4>, 4> d = {{{0, 1, 1, 0}, {0, 0, 0, 1}, {1, 1, 1, 1}, {1, 0, 0, 0}}};
    const std::array<int, 4> omega = {2, 1, 3, 0};        // agent -> round (0-based)
    const std::array<int, 4> votes_by_agent = {1, 1, 1, 0};

    std::vector<Bits> rows(4, Bits(4, 0));
    for (int k = 0; k < 4; ++k) {
        for (int l = 0; l < 4; ++l) {
            int bit = d[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
            if (omega[static_cast<std::size_t>(k)] == l) bit ^= votes_by_agent[static_cast<std::size_t>(k)];
            rows[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(bit);
        }
    }
    const auto [board, evec, tally] = election::assemble_and_tally(rows, 4);

    out << "B =\n";
    for (const auto& row : board.rows) {
        out << "  ";
        for (auto b : row) out << static_cast<int>(b) << ' ';
        out << '\n';
    }
    out << "E = (";
    for (std::size_t i = 0; i < evec.e.size(); ++i) out << (i ? "," : "") << static_cast<int>(evec.e[i]);
    out << ")\nT = (" << tally.counts[0] << "," << tally.counts[1] << ")\n";

    const bool ok = evec.e == Bits{0, 1, 1, 1} && tally.counts == std::vector<int>{1, 3};
    out << (ok ? "reproduction OK\n" : "reproduction MISMATCH\n");
    return ok ? 0 : 1;
}

int cmd_bounds(const std::string& config_path, election::ElectionConfig cfg, std::ostream& out) {
    if (!config_path.empty()) {
        cfg = load_election_file(config_path).config;
    }
    const BoundSet b = compute_bounds(cfg);
    b.print(out);
    out << b.record_line() << '\n';
    if (b.clamped()) out << "note: at least one probability was clamped to [0,1]\n";
    return 0;
}

int cmd_run(const std::string& config_path, const std::string& out_path, bool dump_states,
            std::ostream& out) {
    const ElectionSpec spec = load_election_file(config_path);
    const auto art = run_to_file(spec, out_path, dump_states);
    out << "outcome " << art.outcome_record << '\n';
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(art.transcript_hash));
    out << "events " << art.events << "\nhash " << buf << '\n';
    out << "transcript written to " << out_path << '\n';
    return 0;
}

int cmd_replay(const std::string& path, std::ostream& out) {
    const auto res = replay_from_file(path);
    out << "recorded  " << res.recorded_outcome << '\n';
    out << "replayed  " << res.replayed_outcome << '\n';
    out << (res.matches ? "replay identical\n" : "replay MISMATCH\n");
    return res.matches ? 0 : 1;
}

int cmd_experiment(const std::string& name, std::uint64_t trials, std::uint64_t seed, int workers,
                   bool full, std::ostream& out) {
    std::vector<ExperimentReport> reports;

    election::ElectionConfig base;
    base.n_agents = 4;
    base.epsilon = 0.6;
    base.delta = 0.05;
    base.eta = 0.001;
    base.seed = seed;

    if (name == "t1") {
        base.m_coins = full ? 12 : 6;
        reports.push_back(experiment_theorem1(base, trials ? trials : 2000, workers));
        reports.push_back(experiment_theorem1(base, trials ? trials : 500, workers, true));
    } else if (name == "t2") {
        reports.push_back(experiment_theorem2_grid());
    } else if (name == "t3") {
        for (double eps : {0.3, 0.6}) {
            auto cfg = base;
            cfg.epsilon = eps;
            cfg.delta = 0.0;
            reports.push_back(experiment_theorem3(cfg, trials ? trials : 100000, workers));
        }
    } else if (name == "correctness") {
        election::ElectionConfig cfg = base;
        cfg.epsilon = 0.1;
        cfg.delta = 0.002;
        cfg.eta = 0.01;
        cfg.gamma = 5;
        cfg.sigma = 3;
        reports.push_back(experiment_correctness(cfg, trials ? trials : 2000, false, workers));
        cfg.epsilon = 0.44;
        cfg.delta = 0.04;
        reports.push_back(experiment_correctness(cfg, trials ? trials : 2000, true, workers));
    } else if (name == "privacy") {
        reports.push_back(experiment_privacy(base, {3}, trials ? trials : 200));
        auto cfg = base;
        cfg.amplification_rounds = 5;
        reports.push_back(experiment_privacy(cfg, {3}, trials ? trials / 2 : 100));
    } else if (name == "logicalor") {
        const anoncast::OrParams params{3, 4};
        for (int j = 0; j <= 3; ++j) {
            reports.push_back(experiment_logicalor(4, params, j, trials ? trials : 100000, workers));
        }
    } else if (name == "example") {
        reports = experiment_example(full, seed);
    } else {
        throw ConfigError("unknown experiment '" + name +
                          "' (expected t1|t2|t3|correctness|privacy|logicalor|example)");
    }

    bool all_pass = true;
    for (const auto& r : reports) {
        r.print(out);
        out << r.record_line() << "\n\n";
        all_pass = all_pass && r.pass;
    }
    out << (all_pass ? "ALL PASS\n" : "FAILURES PRESENT\n");
    return all_pass ? 0 : 1;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Simulator and analysis toolkit for an authority-free quantum e-voting protocol"};
    app.require_subcommand(1);

    std::string config_path, out_path = "transcript.qev", transcript_path, experiment_name;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    bool have_seed = false;
    int workers = 1;
    bool full = false;
    bool dump_states = false;

    election::ElectionConfig flag_cfg;

    auto* bounds = app.add_subcommand("bounds", "print every closed-form security bound");
    bounds->add_option("--config", config_path, "election file to read parameters from");
    bounds->add_option("--n", flag_cfg.n_agents, "number of agents");
    bounds->add_option("--eps", flag_cfg.epsilon, "distance parameter");
    bounds->add_option("--delta", flag_cfg.delta, "rejection-ratio threshold");
    bounds->add_option("--eta", flag_cfg.eta, "verification failure target");
    bounds->add_option("--gamma", flag_cfg.gamma, "coins per agent");
    bounds->add_option("--sigma", flag_cfg.sigma, "repetitions per ordering");
    bounds->add_option("--lambda", flag_cfg.lambda, "distortion slack");
    bounds->add_option("--candidates", flag_cfg.candidates, "number of candidates");
    bounds->add_option("--q", flag_cfg.amplification_rounds, "amplification rounds");

    auto* run = app.add_subcommand("run", "run one election from an input file");
    run->add_option("--config", config_path, "election input file")->required();
    run->add_option("--out", out_path, "transcript output path");
    run->add_flag("--dump-states", dump_states, "record source state amplitudes");

    auto* replay = app.add_subcommand("replay", "re-execute a transcript and verify bit-exactness");
    replay->add_option("--transcript", transcript_path, "transcript file")->required();

    auto* experiment = app.add_subcommand("experiment", "run a named validation experiment");
    experiment->add_option("name", experiment_name,
                           "t1|t2|t3|correctness|privacy|logicalor|example")->required();
    experiment->add_option("--trials", trials, "trial count (0 = default)");
    auto* seed_opt = experiment->add_option("--seed", seed, "random seed");
    experiment->add_option("--workers", workers, "worker threads");
    experiment->add_flag("--full", full, "full-scale variant where available");

    auto* fig1 = app.add_subcommand("fig1", "reproduce the worked four-voter election");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }
    have_seed = seed_opt->count() > 0;

    try {
        if (bounds->parsed()) return cmd_bounds(config_path, flag_cfg, out);
        if (run->parsed()) return cmd_run(config_path, out_path, dump_states, out);
        if (replay->parsed()) return cmd_replay(transcript_path, out);
        if (experiment->parsed()) {
            return cmd_experiment(experiment_name, trials, have_seed ? seed : default_seed(),
                                  workers, full, out);
        }
        if (fig1->parsed()) return cmd_fig1(out);
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    err << app.help();
    return 2;
}

} // namespace qev::harness
