// Acceptance suite: end-to-end checks of the protocol simulator against its
// contract, one criterion per function, each printing a single verdict line.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <thread>
#include <vector>

#include "qev/cli.hpp"
#include "qev/config_io.hpp"
#include "qev/experiments.hpp"
#include "qev/stats.hpp"

using namespace qev;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::uint64_t kSeed = 0xacce97ull;

struct Criterion {
    bool pass = false;
    std::string detail;
};

int worker_count() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

std::string fmt(double v, int prec = 4) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    return buf;
}

// 1. Fixed worked election: E = (0,1,1,1), T = (1,3), under one second.
Criterion figure1_reproduction() {
    const auto start = Clock::now();
    std::ostringstream out, err;
    const int rc = harness::run_cli({"fig1"}, out, err);
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    Criterion c;
    c.pass = rc == 0 && out.str().find("E = (0,1,1,1)") != std::string::npos &&
             out.str().find("T = (1,3)") != std::string::npos && secs < 1.0;
    c.detail = "exit=" + std::to_string(rc) + " runtime=" + fmt(secs) + "s";
    return c;
}

// 2. Hadamard-basis samples of the shared state: even parity always, uniform
//    over the even strings.
Criterion ghz_parity_law() {
    Criterion c;
    c.pass = true;
    Rng root(kSeed + 2);
    for (int n = 2; n <= 5; ++n) {
        Rng rng = root.stream(static_cast<std::uint64_t>(n));
        std::vector<std::uint64_t> counts(1ull << (n - 1), 0);
        int odd = 0;
        for (int i = 0; i < 10000; ++i) {
            auto s = qsim::ghz_state(n);
            const auto bits = qsim::measure_all_hadamard(s, rng);
            if (parity(bits) != 0) {
                ++odd;
                continue;
            }
            std::uint64_t w = 0;
            for (auto b : bits) w = (w << 1) | b;
            ++counts[w >> 1];  // parity fixes the last bit
        }
        const double p = stats::chi2_uniform(counts).p_value;
        c.pass = c.pass && odd == 0 && p > 0.01;
        c.detail += "n" + std::to_string(n) + ":odd=" + std::to_string(odd) + ",p=" + fmt(p) + " ";
    }
    return c;
}

// 3. Ideal-state verification never rejects.
Criterion verification_completeness() {
    Rng rng(kSeed + 3);
    Transcript tr;
    Net net(4, tr);
    int rejections = 0;
    for (int i = 0; i < 10000; ++i) {
        auto s = qsim::ghz_state(4);
        if (!verify::verification_round(s, i % 4, net, rng).accepted) ++rejections;
    }
    Criterion c;
    c.pass = rejections == 0;
    c.detail = "rejections=" + std::to_string(rejections) + "/10000";
    return c;
}

// 4. Far states fail verification at the quadratic rate; the Monte Carlo rate
//    agrees with the exact oracle.
Criterion verification_soundness() {
    Criterion c;
    c.pass = true;
    Rng root(kSeed + 4);
    for (double eps : {0.3, 0.6}) {
        Rng rng = root.stream(static_cast<std::uint64_t>(eps * 10));
        Transcript tr;
        Net net(4, tr);
        const auto state = qsim::state_at_trace_distance(4, eps, qsim::canonical_far_direction(4));
        const std::uint64_t trials = 100000;
        std::uint64_t rejections = 0;
        for (std::uint64_t i = 0; i < trials; ++i) {
            auto s = state;
            if (!verify::verification_round(s, 0, net, rng).accepted) ++rejections;
        }
        const double rate = static_cast<double>(rejections) / static_cast<double>(trials);
        const double se = stats::binom_std_error(rate, trials);
        const double oracle = verify::expected_rejection_rate(state, 10000, rng);
        const bool ok = rate >= eps * eps / 4.0 - 3.0 * se && std::fabs(rate - oracle) < 0.01;
        c.pass = c.pass && ok;
        c.detail += "eps" + fmt(eps, 2) + ":rate=" + fmt(rate) + ",floor=" + fmt(eps * eps / 4.0) +
                    ",oracle=" + fmt(oracle) + " ";
    }
    return c;
}

// 5. No-abort probability with the far source at reduced coin count.
Criterion theorem1_reduced_scale() {
    election::ElectionConfig cfg;
    cfg.n_agents = 4;
    cfg.epsilon = 0.6;
    cfg.delta = 0.05;
    cfg.eta = 0.001;
    cfg.m_coins = 6;
    cfg.seed = kSeed + 5;
    const auto rep = harness::experiment_theorem1(cfg, 2000, worker_count());
    Criterion c;
    c.pass = rep.pass && rep.runtime_sec < 600.0 && rep.trials >= 1000;
    c.detail = "no_abort=" + fmt(rep.estimate) + " bound=" + fmt(rep.bound) +
               " runtime=" + fmt(rep.runtime_sec) + "s";
    return c;
}

// 6. Per-round tally error with the far source stays under the trace distance.
Criterion theorem3_tally_error() {
    Criterion c;
    c.pass = true;
    for (double eps : {0.3, 0.6}) {
        election::ElectionConfig cfg;
        cfg.n_agents = 4;
        cfg.epsilon = eps;
        cfg.delta = 0.0;
        cfg.seed = kSeed + 6;
        const auto rep = harness::experiment_theorem3(cfg, 100000, worker_count());
        c.pass = c.pass && rep.pass;
        c.detail += "eps" + fmt(eps, 2) + ":err=" + fmt(rep.estimate) + " ";
    }
    return c;
}

// 7. Exact identity-discrimination sweep against 1/H + eps~.
Criterion theorem2_pgm_grid() {
    const auto rep = harness::experiment_theorem2_grid();
    Criterion c;
    c.pass = rep.pass && rep.runtime_sec < 300.0;
    c.detail = "worst_excess=" + fmt(rep.estimate, 3) + " combos=" + std::to_string(rep.trials) +
               " runtime=" + fmt(rep.runtime_sec) + "s";
    return c;
}

// 8. Worked-example numbers to two significant figures.
Criterion example_numbers() {
    const auto reports = harness::experiment_example(false, kSeed + 8);
    Criterion c;
    c.pass = true;
    for (const auto& r : reports) {
        c.pass = c.pass && r.pass;
        c.detail += r.id + "=" + fmt(r.estimate, 5) + " ";
    }
    return c;
}

// 9. Anonymous-OR output law against the enumeration oracle and the S^j bound.
Criterion logical_or_laws() {
    Criterion c;
    c.pass = true;
    const anoncast::OrParams params{3, 4};
    for (int j = 0; j <= 3; ++j) {
        const auto rep = harness::experiment_logicalor(4, params, j, 100000, worker_count());
        c.pass = c.pass && rep.pass;
        if (j == 0) {
            c.pass = c.pass && rep.estimate == 1.0;
        }
        c.detail += "j" + std::to_string(j) + ":p0=" + fmt(rep.estimate) + " ";
    }
    return c;
}

// 10. Index assignment: always a bijection, uniform over the 24 permutations.
Criterion unique_index_uniformity() {
    Rng root(kSeed + 10);
    Transcript tr;
    std::map<std::uint64_t, std::uint64_t> hist;
    int non_bijections = 0;
    const int runs = 10000;
    for (int i = 0; i < runs; ++i) {
        Rng rng = root.stream(static_cast<std::uint64_t>(i));
        Net net(4, tr);
        const auto a = anoncast::unique_index(4, anoncast::OrParams{2, 4}, net, rng);
        if (!a.is_bijection()) {
            ++non_bijections;
            continue;
        }
        std::uint64_t w = 0;
        for (int v : a.omega) w = w * 4 + static_cast<std::uint64_t>(v);
        ++hist[w];
    }
    std::vector<std::uint64_t> counts;
    for (const auto& [w, n] : hist) counts.push_back(n);
    const double p = counts.size() == 24 ? stats::chi2_uniform(counts).p_value : 0.0;
    Criterion c;
    c.pass = non_bijections == 0 && counts.size() == 24 && p > 0.01;
    c.detail = "non_bijections=" + std::to_string(non_bijections) +
               " perms=" + std::to_string(counts.size()) + " p=" + fmt(p);
    return c;
}

// 11. Board tampering: grown boards always rejected, single-bit row flips
//     always drive the deterministic objection phase to abort.
Criterion tamper_defenses() {
    Criterion c;
    int grow_caught = 0, flip_caught = 0;
    const int runs = 200;
    Rng pick(kSeed + 11);
    for (int i = 0; i < runs; ++i) {
        election::ElectionConfig cfg;
        cfg.n_agents = 4;
        cfg.epsilon = 0.6;
        cfg.delta = 0.05;
        cfg.gamma = 0;  // deterministic objection
        cfg.sigma = 1;
        cfg.m_coins = 1;
        cfg.seed = kSeed + 1000 + static_cast<std::uint64_t>(i);

        cfg.adversary_model = "tamper:grow";
        Transcript t1;
        const auto grown = election::run_election(cfg, {0, 1, 1, 1}, t1);
        if (!grown.accepted() && grown.reason == election::AbortReason::malformed_board) ++grow_caught;

        cfg.adversary_model = "tamper:flip:" + std::to_string(pick.uniform_int(4)) + "," +
                              std::to_string(pick.uniform_int(4));
        Transcript t2;
        const auto flipped = election::run_election(cfg, {0, 1, 1, 1}, t2);
        if (!flipped.accepted() && flipped.reason == election::AbortReason::phase3_objection) {
            ++flip_caught;
        }
    }
    c.pass = grow_caught == runs && flip_caught == runs;
    c.detail = "grow=" + std::to_string(grow_caught) + "/" + std::to_string(runs) +
               " flip=" + std::to_string(flip_caught) + "/" + std::to_string(runs);
    return c;
}

// 12. Four-candidate election reproduces the combined digit table on every seed.
Criterion multi_candidate_table() {
    const std::vector<int> votes = {3, 3, 1, 2, 0, 0, 0};
    int good = 0;
    const int runs = 100;
    for (int i = 0; i < runs; ++i) {
        election::ElectionConfig cfg;
        cfg.n_agents = 7;
        cfg.epsilon = 0.6;
        cfg.delta = 0.05;
        cfg.candidates = 4;
        cfg.m_coins = 2;
        cfg.seed = kSeed + 2000 + static_cast<std::uint64_t>(i);
        Transcript tr;
        auto source = adversary::make_source("ideal", 7, cfg.qubit_cap);
        const auto out = election::multi_candidate_election(cfg, votes, *source,
                                                            adversary::AdversaryConfig::none(), tr);
        if (!out.accepted()) continue;
        std::map<std::string, int> hist;
        for (const auto& row : out.combined) ++hist[bits_to_string(row)];
        if (hist["11"] == 2 && hist["10"] == 1 && hist["01"] == 1 && hist["00"] == 3) ++good;
    }
    Criterion c;
    c.pass = good == runs;
    c.detail = "table_matches=" + std::to_string(good) + "/" + std::to_string(runs);
    return c;
}

// 13. Run-then-replay determinism over randomized configurations.
Criterion determinism_replay() {
    Rng gen(kSeed + 13);
    int identical = 0;
    const int runs = 100;
    for (int i = 0; i < runs; ++i) {
        harness::ElectionSpec spec;
        auto& cfg = spec.config;
        cfg.n_agents = 3 + static_cast<int>(gen.uniform_int(4));
        cfg.epsilon = 0.35 + 0.45 * gen.uniform();
        cfg.delta = gen.uniform() * cfg.epsilon * cfg.epsilon / 4.0 * 0.8;
        cfg.eta = 0.0001 + 0.01 * gen.uniform();
        cfg.gamma = 1 + static_cast<int>(gen.uniform_int(4));
        cfg.sigma = 1 + static_cast<int>(gen.uniform_int(4));
        cfg.lambda = 0.3 * gen.uniform();
        cfg.m_coins = 1 + static_cast<int>(gen.uniform_int(4));
        cfg.amplification_rounds = 1 + static_cast<int>(gen.uniform_int(3));
        cfg.seed = gen.u64();
        cfg.source_model = gen.bit() ? "ideal" : "eps_far:" + std::to_string(cfg.epsilon);
        spec.votes.resize(static_cast<std::size_t>(cfg.n_agents));
        for (auto& v : spec.votes) v = gen.bit();

        const auto first = harness::run_hashed(spec);
        const auto second = harness::run_hashed(spec);
        bool ok = first.outcome_record == second.outcome_record &&
                  first.transcript_hash == second.transcript_hash;
        if (ok && i % 10 == 0) {
            // every tenth config additionally goes through the file round trip
            const std::string path = "/tmp/qev_acceptance_replay.qevt";
            const auto art = harness::run_to_file(spec, path);
            const auto rep = harness::replay_from_file(path);
            ok = rep.matches && art.outcome_record == first.outcome_record;
            std::remove(path.c_str());
        }
        if (ok) ++identical;
    }
    Criterion c;
    c.pass = identical == runs;
    c.detail = "identical=" + std::to_string(identical) + "/" + std::to_string(runs);
    return c;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Criterion()>>> criteria = {
        {"figure-1 reproduction", figure1_reproduction},
        {"GHZ parity law", ghz_parity_law},
        {"verification completeness", verification_completeness},
        {"verification soundness", verification_soundness},
        {"theorem-1 no-abort bound (reduced scale)", theorem1_reduced_scale},
        {"theorem-3 tally-error bound", theorem3_tally_error},
        {"theorem-2 discrimination grid", theorem2_pgm_grid},
        {"worked-example numbers", example_numbers},
        {"anonymous-OR laws", logical_or_laws},
        {"unique-index bijection and uniformity", unique_index_uniformity},
        {"tamper defenses", tamper_defenses},
        {"multi-candidate digit table", multi_candidate_table},
        {"run/replay determinism", determinism_replay},
    };

    bool all = true;
    int idx = 0;
    for (const auto& [label, fn] : criteria) {
        ++idx;
        const auto start = Clock::now();
        Criterion c;
        try {
            c = fn();
        } catch (const std::exception& e) {
            c.pass = false;
            c.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(Clock::now() - start).count();
        std::printf("[%s] %02d %s (%.2f s) %s\n", c.pass ? "PASS" : "FAIL", idx, label.c_str(),
                    secs, c.detail.c_str());
        std::fflush(stdout);
        all = all && c.pass;
    }
    std::printf("%s\n", all ? "ACCEPTANCE: ALL CRITERIA PASS" : "ACCEPTANCE: FAILURES PRESENT");
    return all ? 0 : 1;
}
