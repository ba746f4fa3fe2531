#include "qev/election.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qev/errors.hpp"

namespace qev::election {

void ElectionConfig::validate() const {
    if (n_agents < 2) throw ConfigError("n_agents must be at least 2");
    if (qubit_cap < 1 || qubit_cap > 24) throw ConfigError("qubit_cap out of sensible range");
    if (n_agents > qubit_cap) {
        throw ConfigError("n_agents exceeds the exact-simulation qubit cap of " +
                          std::to_string(qubit_cap));
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0,1)");
    if (!(delta >= 0.0 && delta < 1.0)) throw ConfigError("delta must lie in [0,1)");
    if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("eta must lie in (0,1)");
    if (epsilon * epsilon <= 4.0 * delta) {
        throw ConfigError("epsilon^2 must exceed 4*delta (alpha = 1 - 4*delta/epsilon^2 "
                          "must lie in (0,1))");
    }
    if (gamma < 0) throw ConfigError("gamma must be nonnegative");
    if (sigma < 1) throw ConfigError("sigma must be positive");
    if (lambda < 0.0) throw ConfigError("lambda must be nonnegative");
    if (candidates < 2) throw ConfigError("need at least two candidates");
    if (amplification_rounds < 1) throw ConfigError("amplification_rounds must be at least 1");
    if (candidates > 2 && amplification_rounds > 1) {
        throw ConfigError("privacy amplification is defined for binary elections");
    }
    if (m_coins.has_value() && *m_coins < 0) throw ConfigError("m_coins must be nonnegative");
}

double coin_count_raw(int n, double epsilon, double delta, double eta) {
    if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("eta must lie in (0,1)");
    if (epsilon * epsilon <= 4.0 * delta) {
        throw ConfigError("epsilon^2 must exceed 4*delta (alpha condition)");
    }
    const double gap = epsilon * epsilon - 4.0 * delta;
    const double bracket = 16.0 * n * epsilon * epsilon / (gap * gap) * std::log(1.0 / eta);
    return std::log2(bracket);
}

int coin_count(int n, double epsilon, double delta, double eta) {
    const double raw = coin_count_raw(n, epsilon, delta, eta);
    const int m = static_cast<int>(std::ceil(raw));
    return std::max(m, 0);
}

int ElectionConfig::coin_count() const {
    if (m_coins.has_value()) return *m_coins;
    return election::coin_count(n_agents, epsilon, delta, eta);
}

double ElectionConfig::security_param() const { return or_params().security(); }

int ElectionConfig::digits() const {
    int bits = 0;
    while ((1 << bits) < candidates) ++bits;
    return std::max(bits, 1);
}

int Tally::winner() const {
    return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

bool Tally::tie() const {
    const int top = *std::max_element(counts.begin(), counts.end());
    return std::count(counts.begin(), counts.end(), top) > 1;
}

std::string abort_reason_name(AbortReason reason) {
    switch (reason) {
        case AbortReason::verification_threshold: return "verification-threshold";
        case AbortReason::phase3_objection: return "phase3-objection";
        case AbortReason::malformed_board: return "malformed-board";
    }
    return "unknown";
}

namespace {

std::string tally_to_string(const Tally& t) {
    std::string s;
    for (std::size_t i = 0; i < t.counts.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(t.counts[i]);
    }
    return s;
}

std::string board_to_string(const BulletinBoard& b) {
    std::string s;
    for (std::size_t i = 0; i < b.rows.size(); ++i) {
        if (i) s += ';';
        s += bits_to_string(b.rows[i]);
    }
    return s;
}

} // namespace

std::string ElectionOutcome::record() const {
    std::ostringstream os;
    os << "status=" << (accepted() ? "accepted" : "aborted");
    os << " reason=" << (reason ? abort_reason_name(*reason) : "-");
    os << " tie=" << (tie ? 1 : 0);
    os << " verifications=" << verifications;
    os << " e=" << (votes ? bits_to_string(votes->e) : "-");
    os << " t=" << (tally ? tally_to_string(*tally) : "-");
    os << " b=" << (board ? board_to_string(*board) : "-");
    return os.str();
}

std::string MultiOutcome::record() const {
    std::ostringstream os;
    os << "status=" << (accepted() ? "accepted" : "aborted");
    os << " reason=" << (reason ? abort_reason_name(*reason) : "-");
    os << " tie=" << (tie ? 1 : 0);
    os << " table=";
    if (combined.empty()) {
        os << '-';
    } else {
        for (std::size_t i = 0; i < combined.size(); ++i) {
            if (i) os << ';';
            os << bits_to_string(combined[i]);
        }
    }
    os << " t=" << (tally ? tally_to_string(*tally) : "-");
    return os.str();
}

Bits voting_round(qsim::PureState& state, int voter, int vote, Net& net, Rng& rng) {
    const int n = net.n();
    if (state.n_qubits() != n) throw PreconditionError("voting_round: state size != agent count");
    if (voter < 0 || voter >= n) throw PreconditionError("voting_round: bad voter index");
    if (vote != 0 && vote != 1) throw PreconditionError("voting_round: vote must be a bit");
    state.ensure_unspent();

    Bits d = qsim::measure_all_hadamard(state, rng);
    d[static_cast<std::size_t>(voter)] ^= static_cast<std::uint8_t>(vote);
    for (int k = 0; k < n; ++k) {
        net.broadcast("vote_bit", k, std::to_string(static_cast<int>(d[static_cast<std::size_t>(k)])));
    }
    return d;
}

std::tuple<BulletinBoard, VoteVector, Tally> assemble_and_tally(const std::vector<Bits>& rows,
                                                                int n_agents) {
    if (static_cast<int>(rows.size()) != n_agents) {
        throw MalformedBoard("bulletin board has " + std::to_string(rows.size()) +
                             " rows, expected " + std::to_string(n_agents));
    }
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != n_agents) {
            throw MalformedBoard("bulletin board row has length " + std::to_string(r.size()) +
                                 ", expected " + std::to_string(n_agents));
        }
    }
    BulletinBoard board{rows};
    VoteVector evec;
    evec.e.reserve(rows.size());
    for (const auto& r : rows) evec.e.push_back(static_cast<std::uint8_t>(parity(r)));
    Tally tally;
    tally.counts.assign(2, 0);
    for (auto b : evec.e) ++tally.counts[static_cast<std::size_t>(b)];
    return {std::move(board), std::move(evec), std::move(tally)};
}

bool phase3_objection(const Bits& objections, const anoncast::OrParams& params,
                      Net& net, Rng& rng) {
    auto schedule = anoncast::OrderingSchedule::draw(net.n(), rng);
    const auto res = anoncast::logical_or(objections, params, schedule, net, rng);
    return res.output == 0;
}

namespace {

/// Voting round under the coalition's PGM attack, run in the rotated frame:
/// a vote of 1 is the voter transformation, honest agents measure in the
/// computational basis, the coalition consumes its qubits in the
/// discrimination measurement and broadcasts fabricated bits.
Bits pgm_attack_voting_round(qsim::PureState& state, int voter, int vote, int digit,
                             int round_index, adversary::CoalitionGuesser& guesser,
                             Net& net, Rng& rng) {
    const int n = net.n();
    state.ensure_unspent();
    if (vote == 1) qsim::voter_transform(state, voter);

    const auto& honest = guesser.honest_agents();
    qsim::PureState cond = qsim::PureState::computational_basis(1, 0);
    const Bits hb = qsim::measure_qubits_computational(state, honest, rng, &cond);
    const int guess = guesser.sample_guess(hb, cond, rng);
    guesser.records.push_back({digit, round_index, voter, guess});

    Bits row(static_cast<std::size_t>(n), 0);
    for (std::size_t j = 0; j < honest.size(); ++j) {
        row[static_cast<std::size_t>(honest[j])] = hb[j];
    }
    for (int a : guesser.coalition()) {
        row[static_cast<std::size_t>(a)] = static_cast<std::uint8_t>(rng.bit());
    }
    for (int k = 0; k < n; ++k) {
        net.broadcast("vote_bit", k, std::to_string(static_cast<int>(row[static_cast<std::size_t>(k)])));
    }
    return row;
}

} // namespace

Phase2Result run_phase2_round(const ElectionConfig& config, int round_index, int voter,
                              int vote_bit, adversary::SourceStrategy& source,
                              const adversary::AdversaryConfig& adv, Net& net, Rng& rng,
                              int digit) {
    const int n = config.n_agents;
    const int m = config.coin_count();
    net.set_phase("phase2");
    net.set_round(round_index);

    verify::VerifierCounters counters(n);
    Phase2Result result;
    const auto det = anoncast::OrParams::deterministic();

    for (std::uint64_t iteration = 0;; ++iteration) {
        adversary::SourceContext ctx;
        ctx.round = round_index;
        ctx.iteration = iteration;
        ctx.trials_total = static_cast<std::uint64_t>(
            std::accumulate(counters.trials.begin(), counters.trials.end(), 0));
        ctx.rejections_total = static_cast<std::uint64_t>(
            std::accumulate(counters.rejections.begin(), counters.rejections.end(), 0));

        qsim::PureState state = source.next_state(ctx, rng);
        if (state.n_qubits() != n) {
            throw PreconditionError("source emitted a state of the wrong size (strategy fault)");
        }
        net.note("state_issued", std::to_string(round_index) + "." + std::to_string(iteration));

        const bool all_heads = rng.all_heads(m);
        net.event("coins", voter, all_heads ? "voting" : "verification", voter);

        Bits announce(static_cast<std::size_t>(n), 0);
        announce[static_cast<std::size_t>(voter)] = all_heads ? 0 : 1;
        auto schedule = anoncast::OrderingSchedule::draw(n, rng);
        const int y = anoncast::logical_or(announce, det, schedule, net, rng).output;

        if (y == 1) {
            auto pick_schedule = anoncast::OrderingSchedule::draw(n, rng);
            const int verifier = anoncast::random_agent(voter, n, det, pick_schedule, net, rng);
            verify::VerificationOutcome out;
            if (adv.in_coalition(verifier)) {
                out = adversary::lying_verifier_round(state, verifier, net, rng);
            } else {
                out = verify::verification_round(state, verifier, net, rng);
            }
            verify::record_trial(counters, verifier, out.accepted);
            ++result.verifications;
            continue;
        }

        if (verify::threshold_abort(counters, config.delta)) {
            net.note("abort", "verification-threshold");
            result.aborted = true;
            return result;
        }
        if (adv.guesser) {
            result.row = pgm_attack_voting_round(state, voter, vote_bit, digit, round_index,
                                                 *adv.guesser, net, rng);
        } else {
            result.row = voting_round(state, voter, vote_bit, net, rng);
        }
        return result;
    }
}

namespace {

enum class CastMode { binary, multi, amplified };

struct GeneralOutcome {
    ElectionOutcome::Status status = ElectionOutcome::Status::aborted;
    std::optional<AbortReason> reason;
    std::vector<BulletinBoard> boards;
    std::vector<VoteVector> evecs;
    std::uint64_t verifications = 0;
};

GeneralOutcome run_general(const ElectionConfig& config, CastMode mode,
                           const std::vector<int>& votes, adversary::SourceStrategy& source,
                           const adversary::AdversaryConfig& adv, Transcript& transcript) {
    config.validate();
    const int n = config.n_agents;
    if (static_cast<int>(votes.size()) != n) throw ConfigError("need exactly one vote per agent");
    const int limit = mode == CastMode::multi ? config.candidates : 2;
    for (int v : votes) {
        if (v < 0 || v >= limit) throw ConfigError("vote value out of range");
    }
    const int n_digits = mode == CastMode::binary ? 1
                        : mode == CastMode::multi ? config.digits()
                                                  : config.amplification_rounds;

    Net net(n, transcript);
    Rng rng(config.seed);
    net.set_phase("setup");
    net.note("source", source.describe());
    net.note("adversary", adv.describe());
    net.note("coins", std::to_string(config.coin_count()));

    net.set_phase("phase1");
    net.set_round(-1);
    const auto omega = anoncast::unique_index(n, config.or_params(), net, rng);
    const auto round_voter = omega.round_to_agent();

    // cast[k][d]: the bit agent k put on the board in sub-election d
    std::vector<std::vector<int>> cast(static_cast<std::size_t>(n),
                                       std::vector<int>(static_cast<std::size_t>(n_digits), -1));
    auto cast_bit = [&](int agent, int digit) {
        const std::size_t a = static_cast<std::size_t>(agent);
        int bit = 0;
        switch (mode) {
            case CastMode::binary:
                bit = votes[a];
                break;
            case CastMode::multi:
                bit = (votes[a] >> (n_digits - 1 - digit)) & 1;
                break;
            case CastMode::amplified: {
                if (digit + 1 < n_digits) {
                    bit = rng.bit();
                } else {
                    int acc = 0;
                    for (int d = 0; d + 1 < n_digits; ++d) acc ^= cast[a][static_cast<std::size_t>(d)];
                    bit = votes[a] ^ acc;
                }
                break;
            }
        }
        cast[a][static_cast<std::size_t>(digit)] = bit;
        return bit;
    };

    GeneralOutcome out;
    for (int digit = 0; digit < n_digits; ++digit) {
        std::vector<Bits> rows;
        rows.reserve(static_cast<std::size_t>(n));
        for (int l = 0; l < n; ++l) {
            const int voter = round_voter[static_cast<std::size_t>(l)];
            const int bit = cast_bit(voter, digit);
            auto r = run_phase2_round(config, l, voter, bit, source, adv, net, rng, digit);
            out.verifications += r.verifications;
            if (r.aborted) {
                out.status = ElectionOutcome::Status::aborted;
                out.reason = AbortReason::verification_threshold;
                return out;
            }
            rows.push_back(std::move(r.row));
        }
        if (digit == 0 && adv.tamper == adversary::TamperKind::grow) {
            rows = adversary::board_tamper_grow(rows);
            net.note("tamper", "grow");
        }
        if (digit == 0 && adv.tamper == adversary::TamperKind::flip) {
            rows = adversary::board_tamper_flip(std::move(rows), adv.flip_row, adv.flip_col);
            net.note("tamper", "flip." + std::to_string(adv.flip_row) + "." + std::to_string(adv.flip_col));
        }
        try {
            auto [board, evec, tally] = assemble_and_tally(rows, n);
            net.note("board", board_to_string(board));
            net.note("evec", bits_to_string(evec.e));
            out.boards.push_back(std::move(board));
            out.evecs.push_back(std::move(evec));
        } catch (const MalformedBoard&) {
            net.set_phase("phase3");
            net.note("abort", "malformed-board");
            out.status = ElectionOutcome::Status::aborted;
            out.reason = AbortReason::malformed_board;
            return out;
        }
    }

    net.set_phase("phase3");
    net.set_round(-1);
    Bits objections(static_cast<std::size_t>(n), 0);
    for (int k = 0; k < n; ++k) {
        const int my_round = omega.omega[static_cast<std::size_t>(k)];
        for (int d = 0; d < n_digits; ++d) {
            const int tallied = out.evecs[static_cast<std::size_t>(d)].e[static_cast<std::size_t>(my_round)];
            if (tallied != cast[static_cast<std::size_t>(k)][static_cast<std::size_t>(d)]) {
                objections[static_cast<std::size_t>(k)] = 1;
            }
        }
    }
    const bool accept = phase3_objection(objections, config.or_params(), net, rng);
    if (!accept) {
        net.note("abort", "phase3-objection");
        out.status = ElectionOutcome::Status::aborted;
        out.reason = AbortReason::phase3_objection;
        return out;
    }
    out.status = ElectionOutcome::Status::accepted;
    return out;
}

ElectionOutcome package_binary(GeneralOutcome g) {
    ElectionOutcome o;
    o.status = g.status;
    o.reason = g.reason;
    o.verifications = g.verifications;
    if (g.status == ElectionOutcome::Status::accepted) {
        Tally tally;
        tally.counts.assign(2, 0);
        for (auto b : g.evecs.front().e) ++tally.counts[static_cast<std::size_t>(b)];
        o.tie = tally.tie();
        o.board = std::move(g.boards.front());
        o.votes = std::move(g.evecs.front());
        o.tally = std::move(tally);
    }
    return o;
}

} // namespace

ElectionOutcome run_election(const ElectionConfig& config, const std::vector<int>& votes,
                             adversary::SourceStrategy& source,
                             const adversary::AdversaryConfig& adv, Transcript& transcript) {
    return package_binary(run_general(config, CastMode::binary, votes, source, adv, transcript));
}

ElectionOutcome run_election(const ElectionConfig& config, const std::vector<int>& votes,
                             Transcript& transcript) {
    auto source = adversary::make_source(config.source_model, config.n_agents, config.qubit_cap);
    auto adv = adversary::AdversaryConfig::parse(config.adversary_model);
    return run_election(config, votes, *source, adv, transcript);
}

MultiOutcome multi_candidate_election(const ElectionConfig& config, const std::vector<int>& votes,
                                      adversary::SourceStrategy& source,
                                      const adversary::AdversaryConfig& adv,
                                      Transcript& transcript) {
    auto g = run_general(config, CastMode::multi, votes, source, adv, transcript);
    const int n = config.n_agents;
    const int n_digits = config.digits();

    MultiOutcome out;
    out.status = g.status;
    out.reason = g.reason;
    for (std::size_t d = 0; d < g.evecs.size(); ++d) {
        ElectionOutcome sub;
        sub.status = g.status;
        sub.reason = g.reason;
        sub.verifications = g.verifications;
        Tally t;
        t.counts.assign(2, 0);
        for (auto b : g.evecs[d].e) ++t.counts[static_cast<std::size_t>(b)];
        sub.tie = t.tie();
        sub.board = g.boards[d];
        sub.votes = g.evecs[d];
        sub.tally = std::move(t);
        out.sub.push_back(std::move(sub));
    }
    if (g.status == ElectionOutcome::Status::accepted) {
        out.combined.assign(static_cast<std::size_t>(n), Bits(static_cast<std::size_t>(n_digits), 0));
        Tally tally;
        tally.counts.assign(static_cast<std::size_t>(config.candidates), 0);
        for (int l = 0; l < n; ++l) {
            int candidate = 0;
            for (int d = 0; d < n_digits; ++d) {
                const int bit = g.evecs[static_cast<std::size_t>(d)].e[static_cast<std::size_t>(l)];
                out.combined[static_cast<std::size_t>(l)][static_cast<std::size_t>(d)] =
                    static_cast<std::uint8_t>(bit);
                candidate = (candidate << 1) | bit;
            }
            if (candidate < config.candidates) {
                ++tally.counts[static_cast<std::size_t>(candidate)];
            }
        }
        out.tie = tally.tie();
        out.tally = std::move(tally);
    }
    return out;
}

ElectionOutcome amplified_election(const ElectionConfig& config, const std::vector<int>& votes,
                                   adversary::SourceStrategy& source,
                                   const adversary::AdversaryConfig& adv, Transcript& transcript) {
    auto g = run_general(config, CastMode::amplified, votes, source, adv, transcript);
    if (config.amplification_rounds == 1) return package_binary(std::move(g));

    ElectionOutcome o;
    o.status = g.status;
    o.reason = g.reason;
    o.verifications = g.verifications;
    if (g.status == ElectionOutcome::Status::accepted) {
        const int n = config.n_agents;
        VoteVector final_votes;
        final_votes.e.assign(static_cast<std::size_t>(n), 0);
        for (const auto& evec : g.evecs) {
            for (int l = 0; l < n; ++l) {
                final_votes.e[static_cast<std::size_t>(l)] ^= evec.e[static_cast<std::size_t>(l)];
            }
        }
        Tally tally;
        tally.counts.assign(2, 0);
        for (auto b : final_votes.e) ++tally.counts[static_cast<std::size_t>(b)];
        o.tie = tally.tie();
        o.votes = std::move(final_votes);
        o.tally = std::move(tally);
    }
    return o;
}

} // namespace qev::election
