#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>

#include "qev/election.hpp"
#include "qev/errors.hpp"
#include "qev/experiments.hpp"
#include "test_util.hpp"

using namespace qev;
using election::ElectionConfig;
using election::ElectionOutcome;

namespace {

ElectionConfig base_config(std::uint64_t seed, int m_coins = 2) {
    ElectionConfig cfg;
    cfg.n_agents = 4;
    cfg.epsilon = 0.6;
    cfg.delta = 0.05;
    cfg.eta = 0.001;
    cfg.gamma = 3;
    cfg.sigma = 4;
    cfg.seed = seed;
    cfg.m_coins = m_coins;
    return cfg;
}

/// Index assignment plus one full sweep of voting rounds, exposing the
/// secrets the packaged outcome rightly hides.
struct ManualRun {
    anoncast::IndexAssignment omega;
    std::vector<int> round_voter;
    std::vector<Bits> rows;
};

ManualRun run_rounds(const ElectionConfig& cfg, const std::vector<int>& votes,
                     adversary::SourceStrategy& source, Net& net, Rng& rng) {
    ManualRun out;
    net.set_phase("phase1");
    out.omega = anoncast::unique_index(cfg.n_agents, cfg.or_params(), net, rng);
    out.round_voter = out.omega.round_to_agent();
    const auto adv = adversary::AdversaryConfig::none();
    for (int l = 0; l < cfg.n_agents; ++l) {
        const int voter = out.round_voter[static_cast<std::size_t>(l)];
        auto r = election::run_phase2_round(cfg, l, voter, votes[static_cast<std::size_t>(voter)],
                                            source, adv, net, rng);
        REQUIRE_FALSE(r.aborted);
        out.rows.push_back(std::move(r.row));
    }
    return out;
}

} // namespace

TEST_CASE("coin count reproduces the worked-example value by ceiling") {
    REQUIRE(election::coin_count_raw(4, 0.6, 0.05, 0.001) == doctest::Approx(12.602).epsilon(1e-3));
    REQUIRE(election::coin_count(4, 0.6, 0.05, 0.001) == 13);
    REQUIRE_THROWS_AS(election::coin_count(4, 0.6, 0.05, 1.0), ConfigError);
    REQUIRE_THROWS_AS(election::coin_count(4, 0.4, 0.05, 0.001), ConfigError);  // eps^2 <= 4 delta

    // independent arithmetic check in extended precision
    const long double bracket = 16.0L * 4 * 0.6L * 0.6L /
                                ((0.6L * 0.6L - 4 * 0.05L) * (0.6L * 0.6L - 4 * 0.05L)) *
                                std::log(1.0L / 0.001L);
    const double expected = static_cast<double>(std::log2(bracket));
    REQUIRE(election::coin_count_raw(4, 0.6, 0.05, 0.001) ==
            doctest::Approx(expected).epsilon(1e-12));

    REQUIRE(election::coin_count(4, 0.6, 0.0, 0.001) ==
            static_cast<int>(std::ceil(std::log2(16.0 * 4 / 0.36 * std::log(1000.0)))));
}

TEST_CASE("config validation rejects bad parameter domains") {
    auto cfg = base_config(1);
    REQUIRE_NOTHROW(cfg.validate());
    cfg.delta = 0.09;  // eps^2 = 0.36 <= 4*0.09
    REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
    cfg = base_config(1);
    cfg.epsilon = 1.0;
    REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
    cfg = base_config(1);
    cfg.candidates = 4;
    cfg.amplification_rounds = 5;
    REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
    cfg = base_config(1);
    cfg.n_agents = 17;
    REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("voting round parity encodes the vote on the ideal state") {
    Rng rng(test::kSeed);
    Transcript tr;
    Net net(4, tr);
    for (int i = 0; i < 2000; ++i) {
        auto s = qsim::ghz_state(4);
        REQUIRE(parity(election::voting_round(s, i % 4, 1, net, rng)) == 1);
    }
    for (int i = 0; i < 2000; ++i) {
        auto s = qsim::ghz_state(4);
        REQUIRE(parity(election::voting_round(s, i % 4, 0, net, rng)) == 0);
    }
    auto spent = qsim::ghz_state(4);
    (void)election::voting_round(spent, 0, 0, net, rng);
    REQUIRE_THROWS_AS(election::voting_round(spent, 0, 0, net, rng), OneShotViolation);
}

TEST_CASE("voting round error rate on a far state stays under the distance") {
    Rng rng(test::kSeed + 1);
    Transcript tr;
    Net net(4, tr);
    const auto far = qsim::state_at_trace_distance(4, 0.3, qsim::canonical_far_direction(4));
    int errors = 0;
    const int trials = 20000;
    for (int i = 0; i < trials; ++i) {
        auto s = far;
        errors += parity(election::voting_round(s, 0, 0, net, rng)) != 0 ? 1 : 0;
    }
    const double rate = static_cast<double>(errors) / trials;
    REQUIRE(rate <= 0.3 + 3.0 * stats::binom_std_error(rate, trials));
}

TEST_CASE("assemble_and_tally reproduces the worked board") {
    const std::vector<Bits> rows = {
        bits_from_string("0011"), bits_from_string("1110"),
        bits_from_string("0010"), bits_from_string("0100")};
    const auto [board, evec, tally] = election::assemble_and_tally(rows, 4);
    REQUIRE(evec.e == bits_from_string("0111"));
    REQUIRE(tally.counts == std::vector<int>{1, 3});
    REQUIRE(tally.winner() == 1);
    REQUIRE_FALSE(tally.tie());

    const auto [b0, e0, t0] = election::assemble_and_tally(std::vector<Bits>(4, Bits(4, 0)), 4);
    REQUIRE(e0.e == Bits(4, 0));
    REQUIRE(t0.counts == std::vector<int>{4, 0});

    REQUIRE_THROWS_AS(election::assemble_and_tally(std::vector<Bits>(5, Bits(5, 0)), 4),
                      election::MalformedBoard);
}

TEST_CASE("objection phase accepts silence and rejects a deterministic objection") {
    Rng rng(test::kSeed + 2);
    Transcript tr;
    Net net(4, tr);
    for (int i = 0; i < 500; ++i) {
        REQUIRE(election::phase3_objection(Bits{0, 0, 0, 0}, anoncast::OrParams{3, 4}, net, rng));
        REQUIRE_FALSE(
            election::phase3_objection(Bits{0, 1, 0, 0}, anoncast::OrParams::deterministic(), net, rng));
    }
    // two objections under coin randomization: empirical accept rate matches
    // the oracle and stays under S^2
    const anoncast::OrParams params{3, 4};
    int accepted = 0;
    const int trials = 20000;
    for (int i = 0; i < trials; ++i) {
        accepted += election::phase3_objection(Bits{1, 1, 0, 0}, params, net, rng) ? 1 : 0;
    }
    const double rate = static_cast<double>(accepted) / trials;
    const double oracle = harness::or_zero_probability_oracle(4, 2, params);
    REQUIRE(test::abs_err(rate, oracle) < 3.0 * stats::binom_std_error(oracle, trials));
    REQUIRE(rate <= std::pow(params.security(), 2) + 3.0 * stats::binom_std_error(rate, trials));
}

TEST_CASE("ideal election accepts with the expected tally on every seed") {
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
        auto cfg = base_config(seed);
        Transcript tr;
        const auto out = election::run_election(cfg, {0, 1, 1, 1}, tr);
        REQUIRE(out.accepted());
        REQUIRE(out.tally->counts == std::vector<int>{1, 3});
        REQUIRE_FALSE(out.tie);
        // tally conservation and board/evec consistency
        REQUIRE(out.tally->counts[0] + out.tally->counts[1] == 4);
        for (int l = 0; l < 4; ++l) {
            REQUIRE(parity(out.board->rows[static_cast<std::size_t>(l)]) ==
                    out.votes->e[static_cast<std::size_t>(l)]);
        }
    }
}

TEST_CASE("a tie is reported as accepted with the flag set") {
    auto cfg = base_config(7);
    Transcript tr;
    const auto out = election::run_election(cfg, {0, 0, 1, 1}, tr);
    REQUIRE(out.accepted());
    REQUIRE(out.tie);
}

TEST_CASE("elections replay bit-exactly from the seed") {
    auto cfg = base_config(99, 3);
    Transcript a = Transcript::hashing();
    const auto out1 = election::run_election(cfg, {1, 0, 1, 0}, a);
    Transcript b = Transcript::hashing();
    const auto out2 = election::run_election(cfg, {1, 0, 1, 0}, b);
    REQUIRE(a.hash() == b.hash());
    REQUIRE(out1.record() == out2.record());
}

TEST_CASE("far-state elections abort at least at the bound rate") {
    auto cfg = base_config(31, 6);
    cfg.source_model = "eps_far:0.6";
    int aborts = 0;
    const int trials = 250;
    for (int i = 0; i < trials; ++i) {
        cfg.seed = 1000 + static_cast<std::uint64_t>(i);
        Transcript tr;
        const auto out = election::run_election(cfg, {0, 1, 1, 1}, tr);
        if (!out.accepted()) {
            REQUIRE(out.reason == election::AbortReason::verification_threshold);
            ++aborts;
        }
    }
    const double rate = static_cast<double>(aborts) / trials;
    const double bound = harness::theorem1_bound(6, 4, 0.6, 0.05);
    REQUIRE(rate >= 1.0 - bound - 3.0 * stats::binom_std_error(rate, trials));
}

TEST_CASE("round parity law and verifiability hold exactly on ideal rounds") {
    Rng rng(test::kSeed + 3);
    auto cfg = base_config(5, 0);
    adversary::IdealSource source(4);
    for (int rep = 0; rep < 50; ++rep) {
        Transcript tr;
        Net net(4, tr);
        const std::vector<int> votes = {rng.bit(), rng.bit(), rng.bit(), rng.bit()};
        const auto run = run_rounds(cfg, votes, source, net, rng);
        const auto [board, evec, tally] = election::assemble_and_tally(run.rows, 4);
        for (int l = 0; l < 4; ++l) {
            REQUIRE(parity(board.rows[static_cast<std::size_t>(l)]) ==
                    votes[static_cast<std::size_t>(run.round_voter[static_cast<std::size_t>(l)])]);
        }
        // the verifiability witness: g(B, (omega_k, v_k)) = 1 for every voter
        for (int k = 0; k < 4; ++k) {
            const int my_round = run.omega.omega[static_cast<std::size_t>(k)];
            REQUIRE(evec.e[static_cast<std::size_t>(my_round)] == votes[static_cast<std::size_t>(k)]);
        }
        REQUIRE(tally.counts[0] + tally.counts[1] == 4);
    }
}

TEST_CASE("lowering the threshold never rescues an aborting election") {
    auto strict = base_config(0, 5);
    strict.delta = 0.02;
    strict.source_model = "eps_far:0.6";
    auto loose = strict;
    loose.delta = 0.08;
    int flipped = 0;
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        strict.seed = loose.seed = seed;
        Transcript t1, t2;
        const bool strict_aborted = !election::run_election(strict, {0, 1, 1, 1}, t1).accepted();
        const bool loose_aborted = !election::run_election(loose, {0, 1, 1, 1}, t2).accepted();
        if (loose_aborted) REQUIRE(strict_aborted);
        if (strict_aborted != loose_aborted) ++flipped;
    }
    (void)flipped;
}

TEST_CASE("board tampering is caught") {
    auto cfg = base_config(11, 1);
    cfg.gamma = 0;  // deterministic objection phase
    cfg.sigma = 1;

    cfg.adversary_model = "tamper:flip:2,1";
    Transcript t1;
    const auto flipped = election::run_election(cfg, {0, 1, 1, 1}, t1);
    REQUIRE_FALSE(flipped.accepted());
    REQUIRE(flipped.reason == election::AbortReason::phase3_objection);

    cfg.adversary_model = "tamper:grow";
    Transcript t2;
    const auto grown = election::run_election(cfg, {0, 1, 1, 1}, t2);
    REQUIRE_FALSE(grown.accepted());
    REQUIRE(grown.reason == election::AbortReason::malformed_board);
}

TEST_CASE("a source emitting the wrong state size is a strategy fault") {
    auto cfg = base_config(3, 1);
    adversary::AdaptiveSource bad([](const adversary::SourceContext&, Rng&) { return qsim::ghz_state(3); },
                                  "wrong_size");
    const auto adv = adversary::AdversaryConfig::none();
    Transcript tr;
    REQUIRE_THROWS_AS(election::run_election(cfg, {0, 1, 1, 1}, bad, adv, tr), PreconditionError);
}

TEST_CASE("four-candidate election reproduces the combined digit table") {
    // votes: two for candidate 3, one each for 1 and 2, three abstentions
    const std::vector<int> votes = {3, 3, 1, 2, 0, 0, 0};
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        election::ElectionConfig cfg;
        cfg.n_agents = 7;
        cfg.epsilon = 0.6;
        cfg.delta = 0.05;
        cfg.eta = 0.001;
        cfg.candidates = 4;
        cfg.m_coins = 1;
        cfg.seed = seed;
        Transcript tr;
        auto source = adversary::make_source("ideal", 7, cfg.qubit_cap);
        const auto out = election::multi_candidate_election(cfg, votes, *source,
                                                            adversary::AdversaryConfig::none(), tr);
        REQUIRE(out.accepted());
        REQUIRE(out.sub.size() == 2);
        std::map<std::string, int> hist;
        for (const auto& row : out.combined) ++hist[bits_to_string(row)];
        REQUIRE(hist["11"] == 2);
        REQUIRE(hist["10"] == 1);
        REQUIRE(hist["01"] == 1);
        REQUIRE(hist["00"] == 3);
        REQUIRE(out.tally->counts == std::vector<int>{3, 1, 1, 2});
    }
}

TEST_CASE("a two-candidate election degenerates to exactly one binary election") {
    auto cfg = base_config(77, 2);
    cfg.candidates = 2;
    const std::vector<int> votes = {0, 1, 1, 0};

    Transcript t1 = Transcript::hashing();
    auto s1 = adversary::make_source("ideal", 4, cfg.qubit_cap);
    const auto multi = election::multi_candidate_election(cfg, votes, *s1,
                                                          adversary::AdversaryConfig::none(), t1);
    Transcript t2 = Transcript::hashing();
    auto s2 = adversary::make_source("ideal", 4, cfg.qubit_cap);
    const auto binary = election::run_election(cfg, votes, *s2,
                                               adversary::AdversaryConfig::none(), t2);
    REQUIRE(t1.hash() == t2.hash());
    REQUIRE(multi.sub.size() == 1);
    REQUIRE(multi.sub[0].record() == binary.record());
}

TEST_CASE("single-round amplification is identical to the binary election") {
    auto cfg = base_config(78, 2);
    cfg.amplification_rounds = 1;
    const std::vector<int> votes = {1, 1, 0, 1};

    Transcript t1 = Transcript::hashing();
    auto s1 = adversary::make_source("ideal", 4, cfg.qubit_cap);
    const auto amplified = election::amplified_election(cfg, votes, *s1,
                                                        adversary::AdversaryConfig::none(), t1);
    Transcript t2 = Transcript::hashing();
    auto s2 = adversary::make_source("ideal", 4, cfg.qubit_cap);
    const auto binary = election::run_election(cfg, votes, *s2,
                                               adversary::AdversaryConfig::none(), t2);
    REQUIRE(t1.hash() == t2.hash());
    REQUIRE(amplified.record() == binary.record());
}

TEST_CASE("amplified elections recover every vote through the XOR encoding") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto cfg = base_config(seed, 0);
        cfg.amplification_rounds = 15;
        Rng vote_rng(seed);
        const std::vector<int> votes = {vote_rng.bit(), vote_rng.bit(), vote_rng.bit(), vote_rng.bit()};
        Transcript tr;
        auto source = adversary::make_source("ideal", 4, cfg.qubit_cap);
        const auto out = election::amplified_election(cfg, votes, *source,
                                                      adversary::AdversaryConfig::none(), tr);
        REQUIRE(out.accepted());
        int cast_ones = 0;
        for (int v : votes) cast_ones += v;
        REQUIRE(out.tally->counts[1] == cast_ones);
    }
}

TEST_CASE("each amplification sub-election row is marginally uniform") {
    // compose the rounds manually so the per-sub-election vote vectors are visible
    auto cfg = base_config(0, 0);
    const int q_rounds = 3;
    adversary::IdealSource source(4);
    const auto adv = adversary::AdversaryConfig::none();
    std::vector<std::uint64_t> first_row_ones(static_cast<std::size_t>(q_rounds), 0);
    const int runs = 2000;
    Rng root(test::kSeed + 4);
    for (int i = 0; i < runs; ++i) {
        Rng rng = root.stream(static_cast<std::uint64_t>(i));
        Transcript tr;
        Net net(4, tr);
        net.set_phase("phase1");
        const auto omega = anoncast::unique_index(4, cfg.or_params(), net, rng);
        const auto round_voter = omega.round_to_agent();
        std::vector<std::vector<int>> cast(4, std::vector<int>(static_cast<std::size_t>(q_rounds), 0));
        const std::vector<int> votes = {1, 1, 1, 1};
        for (int q = 0; q < q_rounds; ++q) {
            for (int l = 0; l < 4; ++l) {
                const int voter = round_voter[static_cast<std::size_t>(l)];
                int bit;
                if (q + 1 < q_rounds) {
                    bit = rng.bit();
                } else {
                    bit = votes[static_cast<std::size_t>(voter)] ^
                          cast[static_cast<std::size_t>(voter)][0] ^
                          cast[static_cast<std::size_t>(voter)][1];
                }
                cast[static_cast<std::size_t>(voter)][static_cast<std::size_t>(q)] = bit;
                auto r = election::run_phase2_round(cfg, l, voter, bit, source, adv, net, rng, q);
                if (l == 0) first_row_ones[static_cast<std::size_t>(q)] += parity(r.row);
            }
        }
    }
    for (int q = 0; q < q_rounds; ++q) {
        const double rate = static_cast<double>(first_row_ones[static_cast<std::size_t>(q)]) / runs;
        REQUIRE(test::abs_err(rate, 0.5) < 3.0 * stats::binom_std_error(0.5, runs));
    }
}

TEST_CASE("public transcripts are distributionally blind to who cast which vote") {
    // permuting the voter/vote assignment with a matched seed set leaves the
    // public board distribution unchanged (receipt-freeness structural check)
    election::ElectionConfig cfg;
    cfg.n_agents = 3;
    cfg.epsilon = 0.6;
    cfg.delta = 0.05;
    cfg.gamma = 2;
    cfg.sigma = 2;
    cfg.m_coins = 0;
    std::vector<std::uint64_t> hist_a(24, 0), hist_b(24, 0);
    const int runs = 1500;
    for (int which = 0; which < 2; ++which) {
        const std::vector<int> votes = which == 0 ? std::vector<int>{0, 1, 1}
                                                  : std::vector<int>{1, 1, 0};
        auto& hist = which == 0 ? hist_a : hist_b;
        for (int i = 0; i < runs; ++i) {
            cfg.seed = 10000ull * static_cast<std::uint64_t>(which + 1) + static_cast<std::uint64_t>(i);
            Transcript tr;
            const auto out = election::run_election(cfg, votes, tr);
            REQUIRE(out.accepted());
            for (int l = 0; l < 3; ++l) {
                const auto w = test::bits_word(out.board->rows[static_cast<std::size_t>(l)]);
                ++hist[static_cast<std::size_t>(l) * 8 + w];
            }
        }
    }
    REQUIRE(stats::chi2_two_sample(hist_a, hist_b).p_value > 0.01);
}
