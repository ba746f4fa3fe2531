#include "qev/anoncast.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qev/errors.hpp"

namespace qev::anoncast {

double OrParams::security() const {
    return std::pow(1.0 - std::pow(2.0, -gamma), sigma);
}

void OrParams::validate() const {
    if (gamma < 0) throw PreconditionError("OrParams: gamma must be nonnegative");
    if (sigma < 1) throw PreconditionError("OrParams: sigma must be positive");
}

OrderingSchedule OrderingSchedule::draw(int n, Rng& rng) {
    OrderingSchedule s;
    std::vector<int> last(static_cast<std::size_t>(n));
    std::iota(last.begin(), last.end(), 0);
    rng.shuffle(last);
    for (int i = 0; i < n; ++i) {
        std::vector<int> rest;
        rest.reserve(static_cast<std::size_t>(n - 1));
        for (int a = 0; a < n; ++a) {
            if (a != last[static_cast<std::size_t>(i)]) rest.push_back(a);
        }
        rng.shuffle(rest);
        rest.push_back(last[static_cast<std::size_t>(i)]);
        s.orderings.push_back(std::move(rest));
    }
    return s;
}

void OrderingSchedule::validate(int n) const {
    if (static_cast<int>(orderings.size()) != n) {
        throw PreconditionError("OrderingSchedule: need exactly N orderings");
    }
    std::vector<int> last_count(static_cast<std::size_t>(n), 0);
    for (const auto& ord : orderings) {
        if (static_cast<int>(ord.size()) != n) {
            throw PreconditionError("OrderingSchedule: ordering has wrong length");
        }
        std::vector<int> seen(static_cast<std::size_t>(n), 0);
        for (int a : ord) {
            if (a < 0 || a >= n || seen[static_cast<std::size_t>(a)]++) {
                throw PreconditionError("OrderingSchedule: ordering is not a permutation");
            }
        }
        ++last_count[static_cast<std::size_t>(ord.back())];
    }
    for (int c : last_count) {
        if (c != 1) throw PreconditionError("OrderingSchedule: each agent must be last exactly once");
    }
}

bool IndexAssignment::is_bijection() const {
    const int n = static_cast<int>(omega.size());
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    for (int w : omega) {
        if (w < 0 || w >= n || seen[static_cast<std::size_t>(w)]++) return false;
    }
    return true;
}

std::vector<int> IndexAssignment::round_to_agent() const {
    std::vector<int> inv(omega.size(), -1);
    for (std::size_t a = 0; a < omega.size(); ++a) {
        inv.at(static_cast<std::size_t>(omega[a])) = static_cast<int>(a);
    }
    return inv;
}

namespace {

std::string tag(std::uint64_t inst, int ord, int rep, int bit) {
    return std::to_string(inst) + "." + std::to_string(ord) + "." +
           std::to_string(rep) + "." + std::to_string(bit);
}

} // namespace

OrResult logical_or(const Bits& inputs, const OrParams& params,
                    const OrderingSchedule& schedule, Net& net, Rng& rng,
                    const std::vector<int>* slot_to_agent) {
    const int n = net.n();
    params.validate();
    schedule.validate(n);
    if (static_cast<int>(inputs.size()) != n) {
        throw PreconditionError("logical_or: need one input bit per agent");
    }
    if (slot_to_agent != nullptr && static_cast<int>(slot_to_agent->size()) != n) {
        throw PreconditionError("logical_or: bad slot mapping");
    }
    auto agent_of = [&](int slot) { return slot_to_agent ? (*slot_to_agent)[static_cast<std::size_t>(slot)] : slot; };

    const std::uint64_t inst = net.next_instance();
    OrResult result;
    result.saw_other_one.assign(static_cast<std::size_t>(n), 0);

    std::vector<std::uint8_t> p(static_cast<std::size_t>(n));
    // shares[s * n + t]: bit sent by the agent in slot s to the agent in slot t
    std::vector<std::uint8_t> shares(static_cast<std::size_t>(n) * n);
    std::vector<std::uint8_t> z(static_cast<std::size_t>(n));

    for (int ord = 0; ord < n; ++ord) {
        for (int rep = 0; rep < params.sigma; ++rep) {
            // fresh coin-gated inputs every repetition
            for (int s = 0; s < n; ++s) {
                const int a = agent_of(s);
                p[static_cast<std::size_t>(s)] =
                    inputs[static_cast<std::size_t>(a)] ? (rng.all_heads(params.gamma) ? 1 : 0) : 0;
            }
            // XOR secret sharing: each agent splits p into n bits
            for (int s = 0; s < n; ++s) {
                std::uint8_t acc = 0;
                for (int t = 0; t + 1 < n; ++t) {
                    const std::uint8_t b = static_cast<std::uint8_t>(rng.bit());
                    shares[static_cast<std::size_t>(s) * n + t] = b;
                    acc ^= b;
                }
                shares[static_cast<std::size_t>(s) * n + (n - 1)] =
                    static_cast<std::uint8_t>(acc ^ p[static_cast<std::size_t>(s)]);
            }
            // deliver shares (slot s keeps its own)
            for (int s = 0; s < n; ++s) {
                const int a = agent_of(s);
                for (int t = 0; t < n; ++t) {
                    if (t == s) continue;
                    const int b = shares[static_cast<std::size_t>(s) * n + t];
                    if (!net.send_private("share", a, agent_of(t), tag(inst, ord, rep, b))) {
                        net.event("abort_culprit", a, std::to_string(a));
                        throw ProtocolFault("agent withheld a share during anonymous OR", a);
                    }
                }
            }
            // column parities, broadcast in the ordering's sequence
            for (int t = 0; t < n; ++t) {
                std::uint8_t acc = 0;
                for (int s = 0; s < n; ++s) acc ^= shares[static_cast<std::size_t>(s) * n + t];
                z[static_cast<std::size_t>(t)] = acc;
            }
            for (int pos = 0; pos < n; ++pos) {
                const int slot = schedule.orderings[static_cast<std::size_t>(ord)][static_cast<std::size_t>(pos)];
                const int a = agent_of(slot);
                const int b = z[static_cast<std::size_t>(slot)];
                if (!net.broadcast("or_bcast", a, tag(inst, ord, rep, b))) {
                    // reliability rule: a refused broadcast makes the output 1
                    net.event("forced_one", a, std::to_string(inst));
                    result.output = 1;
                    result.forced_one = true;
                    std::fill(result.saw_other_one.begin(), result.saw_other_one.end(), 1);
                    return result;
                }
            }
            std::uint8_t y_rep = 0;
            for (int t = 0; t < n; ++t) y_rep ^= z[static_cast<std::size_t>(t)];
            if (y_rep) result.output = 1;
            for (int s = 0; s < n; ++s) {
                const std::uint8_t w = static_cast<std::uint8_t>(y_rep ^ p[static_cast<std::size_t>(s)]);
                if (w) result.saw_other_one[static_cast<std::size_t>(agent_of(s))] = 1;
            }
        }
    }
    net.note("or_out", std::to_string(inst) + "." + std::to_string(result.output));
    return result;
}

int random_bit(int voting_agent, const OrParams& params,
               const OrderingSchedule& schedule, Net& net, Rng& rng) {
    const int n = net.n();
    if (voting_agent < 0 || voting_agent >= n) throw PreconditionError("random_bit: bad agent");
    Bits inputs(static_cast<std::size_t>(n), 0);
    inputs[static_cast<std::size_t>(voting_agent)] = static_cast<std::uint8_t>(rng.bit());
    return logical_or(inputs, params, schedule, net, rng).output;
}

int random_agent(int voting_agent, int n, const OrParams& params,
                 const OrderingSchedule& schedule, Net& net, Rng& rng) {
    if (n < 2) throw PreconditionError("random_agent: need at least two agents");
    int bits = 0;
    while ((1 << bits) < n) ++bits;
    for (int attempt = 0; attempt < 10000; ++attempt) {
        int value = 0;
        for (int b = 0; b < bits; ++b) {
            value = (value << 1) | random_bit(voting_agent, params, schedule, net, rng);
        }
        if (value < n) {
            net.note("verifier_pick", std::to_string(value));
            return value;
        }
    }
    throw RoundCapExceeded("random_agent: rejection sampling failed to terminate");
}

IndexAssignment unique_index(int n, const OrParams& params, Net& net, Rng& rng,
                             std::uint64_t or_budget,
                             const std::vector<int>* slot_to_agent) {
    params.validate();
    if (net.n() != n) throw PreconditionError("unique_index: agent count mismatch");
    auto agent_of = [&](int slot) { return slot_to_agent ? (*slot_to_agent)[static_cast<std::size_t>(slot)] : slot; };

    // The claim ORs need coin randomization: with the deterministic variant an
    // odd-sized collision would leave every collider seeing w = 0 and all of
    // them would claim the same round.
    OrParams claim = params;
    claim.gamma = std::max(claim.gamma, 1);
    const OrParams notify = OrParams::deterministic();

    IndexAssignment assignment;
    assignment.omega.assign(static_cast<std::size_t>(n), -1);

    std::uint64_t ors_used = 0;
    int round = 0;         // publicly known: number of successful notifications
    int assigned = 0;
    Bits inputs(static_cast<std::size_t>(n), 0);
    Bits notif(static_cast<std::size_t>(n), 0);

    while (round < n) {
        if (assigned == n) {
            throw ProtocolFault("unique_index: collision escaped detection (over-assignment)", -1);
        }
        if (ors_used + 2 > or_budget) {
            throw RoundCapExceeded("unique_index: OR budget exhausted after " +
                                   std::to_string(ors_used) + " invocations");
        }
        const int t = n - round;  // agents everyone believes are unassigned
        for (int s = 0; s < n; ++s) {
            const int a = agent_of(s);
            const bool has_index = assignment.omega[static_cast<std::size_t>(a)] >= 0;
            inputs[static_cast<std::size_t>(a)] =
                has_index ? 0 : static_cast<std::uint8_t>(rng.bernoulli(1.0 / static_cast<double>(t)) ? 1 : 0);
        }
        OrderingSchedule schedule = OrderingSchedule::draw(n, rng);
        const OrResult claim_res = logical_or(inputs, claim, schedule, net, rng, slot_to_agent);
        ++ors_used;
        if (claim_res.output == 0) continue;  // nobody surfaced; redraw

        std::vector<int> claimers;
        for (int s = 0; s < n; ++s) {
            const int a = agent_of(s);
            if (inputs[static_cast<std::size_t>(a)] && !claim_res.saw_other_one[static_cast<std::size_t>(a)]) {
                claimers.push_back(a);
            }
        }
        std::fill(notif.begin(), notif.end(), 0);
        for (int a : claimers) notif[static_cast<std::size_t>(a)] = 1;
        OrderingSchedule schedule2 = OrderingSchedule::draw(n, rng);
        const OrResult notif_res = logical_or(notif, notify, schedule2, net, rng, slot_to_agent);
        ++ors_used;
        if (notif_res.output != 1) continue;  // no assignment announced this time

        for (int a : claimers) {
            assignment.omega[static_cast<std::size_t>(a)] = round;
            ++assigned;
            net.event("index_claimed", a, std::to_string(round), a);
        }
        ++round;
    }

    if (!assignment.is_bijection()) {
        throw ProtocolFault("unique_index: result is not a bijection", -1);
    }
    return assignment;
}

} // namespace qev::anoncast
