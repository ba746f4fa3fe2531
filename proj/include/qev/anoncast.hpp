#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qev/net.hpp"
#include "qev/rng.hpp"
#include "qev/transcript.hpp"

namespace qev::anoncast {

/// Coin and repetition parameters of the anonymous-OR subroutine. The derived
/// security parameter S = (1 - 2^-gamma)^sigma is the probability that a
/// single dissenting input fails to surface in one ordering's repetitions;
/// gamma = 0 degenerates to the deterministic variant (p_k = x_k).
struct OrParams {
    int gamma = 3;
    int sigma = 4;

    double security() const;
    void validate() const;

    static OrParams deterministic() { return OrParams{0, 1}; }
};

/// N broadcast orderings, each agent in the last position exactly once.
struct OrderingSchedule {
    std::vector<std::vector<int>> orderings;

    static OrderingSchedule draw(int n, Rng& rng);
    void validate(int n) const;
};

/// Result of one anonymous-OR execution.
struct OrResult {
    int output = 0;                 // y
    Bits saw_other_one;             // per agent: OR over repetitions of w_k
    bool forced_one = false;        // an agent refused to broadcast
};

/// Secret random round indices, one per agent (0-based rounds).
struct IndexAssignment {
    std::vector<int> omega;         // agent -> round

    bool is_bijection() const;
    std::vector<int> round_to_agent() const;  // inverse map
};

/// Anonymous multiparty OR of one bit per agent via XOR secret sharing,
/// repeated over the schedule's N orderings x sigma repetitions. Returns the
/// OR output together with each agent's collision indicator. A refused
/// broadcast forces output 1 (reliability); a withheld share aborts with the
/// culprit identified.
///
/// `slot_to_agent`, when given, fixes the order in which per-agent random
/// draws are consumed (slot order instead of agent order); the protocol is
/// label-equivariant under it.
OrResult logical_or(const Bits& inputs, const OrParams& params,
                    const OrderingSchedule& schedule, Net& net, Rng& rng,
                    const std::vector<int>* slot_to_agent = nullptr);

/// The voting agent feeds a fresh uniform bit into the OR, everyone else 0.
/// With the deterministic variant the output equals that bit exactly.
int random_bit(int voting_agent, const OrParams& params,
               const OrderingSchedule& schedule, Net& net, Rng& rng);

/// ceil(log2 n) random bits, rejection-sampled into [0, n); uniform, and the
/// draw is known only to the anonymous voting agent.
int random_agent(int voting_agent, int n, const OrParams& params,
                 const OrderingSchedule& schedule, Net& net, Rng& rng);

/// Anonymous assignment of a secret random permutation of rounds to agents.
/// Runs rounds of claim ORs (inputs drawn at rate 1/t among the t agents
/// without an index), collision detection through the w_k trace, and a
/// deterministic notification OR closing each round.
IndexAssignment unique_index(int n, const OrParams& params, Net& net, Rng& rng,
                             std::uint64_t or_budget = 10000,
                             const std::vector<int>* slot_to_agent = nullptr);

} // namespace qev::anoncast
