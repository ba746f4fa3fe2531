#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qev/transcript.hpp"

namespace qev {

/// Per-agent misbehavior knobs for robustness tests. Honest by default.
struct AgentBehavior {
    /// Refuse every broadcast once the agent's broadcast counter reaches this
    /// value; -1 means never.
    std::int64_t silent_after_broadcasts = -1;
    /// Withhold private share messages (non-participation).
    bool drop_shares = false;

    bool honest() const { return silent_after_broadcasts < 0 && !drop_shares; }
};

/// Simulated network among N agents: authenticated broadcast plus pairwise
/// private channels, both perfectly reliable and confidential. Every message
/// is emitted as a transcript event. Single-threaded, delivery is immediate.
class Net {
public:
    Net(int n_agents, Transcript& transcript);

    int n() const { return n_; }
    Transcript& transcript() { return *transcript_; }

    void set_phase(std::string phase) { phase_ = std::move(phase); }
    void set_round(int round) { round_ = round; }
    int round() const { return round_; }

    /// Monotone counter distinguishing nested subroutine instances.
    std::uint64_t next_instance() { return instance_counter_++; }

    /// Returns false when the sender refuses (silence behavior triggered).
    bool broadcast(std::string_view kind, int sender, std::string payload);
    /// Returns false when the sender withholds the message.
    bool send_private(std::string_view kind, int sender, int receiver, std::string payload);

    void note(std::string_view kind, std::string payload);

    /// Non-message protocol event attributed to one agent (claim, fault, ...).
    /// `receiver` defaults to broadcast; pass the agent itself for a private
    /// self-record (e.g. a secret the agent alone learns).
    void event(std::string_view kind, int sender, std::string payload,
               std::int32_t receiver = kEveryone);

    AgentBehavior& behavior(int agent) { return behaviors_.at(static_cast<std::size_t>(agent)); }
    const AgentBehavior& behavior(int agent) const { return behaviors_.at(static_cast<std::size_t>(agent)); }

private:
    int n_;
    Transcript* transcript_;
    std::string phase_ = "setup";
    int round_ = -1;
    std::uint64_t instance_counter_ = 0;
    std::vector<AgentBehavior> behaviors_;
    std::vector<std::int64_t> broadcasts_made_;
};

} // namespace qev
