#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "qev/adversary.hpp"
#include "qev/anoncast.hpp"
#include "qev/net.hpp"
#include "qev/qsim.hpp"
#include "qev/rng.hpp"
#include "qev/transcript.hpp"
#include "qev/verify.hpp"

namespace qev::election {

/// All protocol parameters and derived quantities for one election.
struct ElectionConfig {
    int n_agents = 4;
    double epsilon = 0.6;   // analysis distance from the perfect shared state
    double delta = 0.05;    // verification rejection-ratio threshold
    double eta = 0.001;     // target failure probability of verification
    int gamma = 3;          // coins per agent in the anonymous OR
    int sigma = 4;          // repetitions per ordering
    double lambda = 0.1;    // slack factor in the tally-distortion threshold
    int candidates = 2;     // K
    int amplification_rounds = 1;  // Q
    std::uint64_t seed = 1;
    int qubit_cap = qsim::kDefaultQubitCap;
    std::optional<int> m_coins;  // coin-count override (experiments)
    std::string source_model = "ideal";
    std::string adversary_model = "none";

    void validate() const;
    int coin_count() const;        // derived unless overridden
    double security_param() const; // S
    anoncast::OrParams or_params() const { return anoncast::OrParams{gamma, sigma}; }
    int digits() const;            // sub-elections for K candidates
};

/// ceil(log2(16 N eps^2 / (eps^2 - 4 delta)^2 * ln(1/eta))), clamped at 0.
int coin_count(int n, double epsilon, double delta, double eta);
/// The un-rounded log2 value.
double coin_count_raw(int n, double epsilon, double delta, double eta);

struct BulletinBoard {
    std::vector<Bits> rows;  // row l = broadcast vector of round l
    int n() const { return static_cast<int>(rows.size()); }
};

struct VoteVector {
    Bits e;  // e_l = parity of board row l
};

struct Tally {
    std::vector<int> counts;  // per candidate

    int winner() const;
    bool tie() const;
};

/// Board of the wrong shape (double-voting defense).
class MalformedBoard : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class AbortReason { verification_threshold, phase3_objection, malformed_board };
std::string abort_reason_name(AbortReason reason);

struct ElectionOutcome {
    enum class Status { accepted, aborted };

    Status status = Status::aborted;
    std::optional<AbortReason> reason;
    std::optional<BulletinBoard> board;
    std::optional<VoteVector> votes;
    std::optional<Tally> tally;
    bool tie = false;
    std::uint64_t verifications = 0;  // verification rounds run in total

    bool accepted() const { return status == Status::accepted; }
    /// Public single-line record (no secrets); byte-stable across replays.
    std::string record() const;
};

/// Outcome of a K-candidate election: one binary sub-election per digit plus
/// the combined per-round digit table.
struct MultiOutcome {
    ElectionOutcome::Status status = ElectionOutcome::Status::aborted;
    std::optional<AbortReason> reason;
    std::vector<ElectionOutcome> sub;   // one per digit, in order run
    std::vector<Bits> combined;         // row l = digit bits of round l's vote
    std::optional<Tally> tally;         // histogram over candidate ids
    bool tie = false;

    bool accepted() const { return status == ElectionOutcome::Status::accepted; }
    std::string record() const;
};

// --- operations ----------------------------------------------------------------

/// One voting round: everyone measures in the Hadamard basis, the voter XORs
/// their vote into their outcome, everyone broadcasts. Returns the board row.
Bits voting_round(qsim::PureState& state, int voter, int vote, Net& net, Rng& rng);

/// Shape-check the board, fold row parities into the vote vector, histogram
/// into the tally. Throws MalformedBoard when the board is not n x n.
std::tuple<BulletinBoard, VoteVector, Tally> assemble_and_tally(const std::vector<Bits>& rows,
                                                                int n_agents);

/// Phase-3 anonymous objection; returns true (accept) iff the OR outputs 0.
bool phase3_objection(const Bits& objections, const anoncast::OrParams& params,
                      Net& net, Rng& rng);

/// One Phase-2 voting round in isolation with fresh counters: the repeat loop
/// of coin toss / announcement / verification until Voting, the threshold
/// check, then the voting measurement. Used directly by the experiments.
struct Phase2Result {
    bool aborted = false;
    std::uint64_t verifications = 0;
    Bits row;  // valid when !aborted
};
Phase2Result run_phase2_round(const ElectionConfig& config, int round_index, int voter,
                              int vote_bit, adversary::SourceStrategy& source,
                              const adversary::AdversaryConfig& adv, Net& net, Rng& rng,
                              int digit = 0);

/// The full protocol: unique-index assignment, N voting rounds (each gated by
/// the coin-toss verification loop), bulletin-board assembly and the
/// anonymous objection round. Deterministic given (config, seed, votes).
ElectionOutcome run_election(const ElectionConfig& config, const std::vector<int>& votes,
                             adversary::SourceStrategy& source,
                             const adversary::AdversaryConfig& adv, Transcript& transcript);

/// Convenience overload building source and adversary from the config strings.
ElectionOutcome run_election(const ElectionConfig& config, const std::vector<int>& votes,
                             Transcript& transcript);

/// K-candidate extension: ceil(log2 K) binary sub-elections sharing one index
/// assignment, objection once at the end over all digits.
MultiOutcome multi_candidate_election(const ElectionConfig& config, const std::vector<int>& votes,
                                      adversary::SourceStrategy& source,
                                      const adversary::AdversaryConfig& adv,
                                      Transcript& transcript);

/// Privacy amplification: Q binary sub-elections sharing one index assignment;
/// each voter casts Q uniform bits XOR-constrained to their vote, and the
/// recovered vote of round l is the XOR of the Q vote vectors at l.
ElectionOutcome amplified_election(const ElectionConfig& config, const std::vector<int>& votes,
                                   adversary::SourceStrategy& source,
                                   const adversary::AdversaryConfig& adv, Transcript& transcript);

} // namespace qev::election
