#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qev/election.hpp"

namespace qev::harness {

/// A full election specification: the configuration plus the votes.
struct ElectionSpec {
    election::ElectionConfig config;
    std::vector<int> votes;
};

/// Parse the key = value election input file (comments with '#').
/// Keys: n_agents, votes, epsilon, delta, eta, gamma, sigma, lambda,
/// candidates, amplification_rounds, seed, source_model, adversary_model,
/// and optional m_coins, qubit_cap.
ElectionSpec parse_election_file(std::istream& in);
ElectionSpec load_election_file(const std::string& path);

/// Transcript-header serialization. Floats are stored as IEEE-754 bit
/// patterns so a replay reconstructs the configuration exactly.
std::string config_record(const election::ElectionConfig& config);
election::ElectionConfig parse_config_record(const std::string& line);
std::string votes_record(const std::vector<int>& votes);
std::vector<int> parse_votes_record(const std::string& line);

/// Execute the spec (binary, multi-candidate or amplified per the config)
/// with a full transcript written to `path`. The file carries the header,
/// every event, the outcome record and the event-stream hash.
struct RunArtifacts {
    std::string outcome_record;
    std::uint64_t transcript_hash = 0;
    std::uint64_t events = 0;
    bool accepted = false;
};
RunArtifacts run_to_file(const ElectionSpec& spec, const std::string& path,
                         bool dump_states = false);

/// Re-execute the election recorded in a transcript file and compare both the
/// event-stream hash and the outcome record byte for byte.
struct ReplayResult {
    bool matches = false;
    std::string recorded_outcome;
    std::string replayed_outcome;
    std::uint64_t recorded_hash = 0;
    std::uint64_t replayed_hash = 0;
};
ReplayResult replay_from_file(const std::string& path);

/// Run the spec with an off/hashing transcript; returns outcome record and hash.
RunArtifacts run_hashed(const ElectionSpec& spec);

} // namespace qev::harness
