#include "qev/net.hpp"

#include "qev/errors.hpp"

namespace qev {

Net::Net(int n_agents, Transcript& transcript)
    : n_(n_agents), transcript_(&transcript),
      behaviors_(static_cast<std::size_t>(n_agents)),
      broadcasts_made_(static_cast<std::size_t>(n_agents), 0) {
    if (n_agents < 2) throw PreconditionError("Net: need at least two agents");
}

bool Net::broadcast(std::string_view kind, int sender, std::string payload) {
    auto& made = broadcasts_made_.at(static_cast<std::size_t>(sender));
    const auto& b = behavior(sender);
    if (b.silent_after_broadcasts >= 0 && made >= b.silent_after_broadcasts) {
        transcript_->emit(phase_, round_, "silent", sender, kEveryone, std::string(kind));
        return false;
    }
    ++made;
    transcript_->emit(phase_, round_, kind, sender, kEveryone, std::move(payload));
    return true;
}

bool Net::send_private(std::string_view kind, int sender, int receiver, std::string payload) {
    if (receiver < 0 || receiver >= n_) throw PreconditionError("send_private: bad receiver");
    if (behavior(sender).drop_shares) {
        transcript_->emit(phase_, round_, "withheld", sender, receiver, std::string(kind));
        return false;
    }
    transcript_->emit(phase_, round_, kind, sender, receiver, std::move(payload));
    return true;
}

void Net::note(std::string_view kind, std::string payload) {
    transcript_->emit(phase_, round_, kind, kSystem, kEveryone, std::move(payload));
}

void Net::event(std::string_view kind, int sender, std::string payload, std::int32_t receiver) {
    transcript_->emit(phase_, round_, kind, sender, receiver, std::move(payload));
}

} // namespace qev
