#include "qev/config_io.hpp"

#include <fstream>
#include <sstream>

#include "qev/errors.hpp"
#include "qev/transcript.hpp"

namespace qev::harness {

namespace {

constexpr const char* kMagic = "qev-transcript v1";

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

long long to_ll(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const long long out = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(key);
        return out;
    } catch (const std::exception&) {
        throw ConfigError("bad integer for '" + key + "': '" + v + "'");
    }
}

std::uint64_t to_u64(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const unsigned long long out = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(key);
        return static_cast<std::uint64_t>(out);
    } catch (const std::exception&) {
        throw ConfigError("bad integer for '" + key + "': '" + v + "'");
    }
}

double to_dbl(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double out = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(key);
        return out;
    } catch (const std::exception&) {
        throw ConfigError("bad number for '" + key + "': '" + v + "'");
    }
}

std::vector<int> parse_votes_value(const std::string& value) {
    std::vector<int> votes;
    if (value.find(',') == std::string::npos) {
        for (char c : value) {
            if (c == '0' || c == '1') {
                votes.push_back(c - '0');
            } else {
                throw ConfigError("votes must be a bit string or comma-separated candidate ids");
            }
        }
        return votes;
    }
    std::stringstream ss(value);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        votes.push_back(static_cast<int>(to_ll(trim(tok), "votes")));
    }
    return votes;
}

RunArtifacts execute(const ElectionSpec& spec, Transcript& transcript, bool dump_states) {
    const auto& cfg = spec.config;
    cfg.validate();
    auto source = adversary::make_source(cfg.source_model, cfg.n_agents, cfg.qubit_cap);
    const auto adv = adversary::AdversaryConfig::parse(cfg.adversary_model);

    if (dump_states && transcript.active()) {
        adversary::SourceContext ctx;
        Rng probe(cfg.seed);
        auto s = source->next_state(ctx, probe);
        qsim::dump_state(s, transcript, "source_sample");
        source = adversary::make_source(cfg.source_model, cfg.n_agents, cfg.qubit_cap);
    }

    RunArtifacts art;
    if (cfg.candidates > 2) {
        const auto out = election::multi_candidate_election(cfg, spec.votes, *source, adv, transcript);
        art.outcome_record = out.record();
        art.accepted = out.accepted();
    } else if (cfg.amplification_rounds > 1) {
        const auto out = election::amplified_election(cfg, spec.votes, *source, adv, transcript);
        art.outcome_record = out.record();
        art.accepted = out.accepted();
    } else {
        const auto out = election::run_election(cfg, spec.votes, *source, adv, transcript);
        art.outcome_record = out.record();
        art.accepted = out.accepted();
    }
    art.transcript_hash = transcript.hash();
    art.events = transcript.count();
    return art;
}

} // namespace

ElectionSpec parse_election_file(std::istream& in) {
    ElectionSpec spec;
    bool have_votes = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        auto& c = spec.config;
        if (key == "n_agents") c.n_agents = static_cast<int>(to_ll(value, key));
        else if (key == "votes") { spec.votes = parse_votes_value(value); have_votes = true; }
        else if (key == "epsilon") c.epsilon = to_dbl(value, key);
        else if (key == "delta") c.delta = to_dbl(value, key);
        else if (key == "eta") c.eta = to_dbl(value, key);
        else if (key == "gamma") c.gamma = static_cast<int>(to_ll(value, key));
        else if (key == "sigma") c.sigma = static_cast<int>(to_ll(value, key));
        else if (key == "lambda") c.lambda = to_dbl(value, key);
        else if (key == "candidates") c.candidates = static_cast<int>(to_ll(value, key));
        else if (key == "amplification_rounds") c.amplification_rounds = static_cast<int>(to_ll(value, key));
        else if (key == "seed") c.seed = to_u64(value, key);
        else if (key == "qubit_cap") c.qubit_cap = static_cast<int>(to_ll(value, key));
        else if (key == "m_coins") c.m_coins = static_cast<int>(to_ll(value, key));
        else if (key == "source_model") c.source_model = value;
        else if (key == "adversary_model") c.adversary_model = value;
        else throw ConfigError("unknown configuration key '" + key + "'");
    }
    if (!have_votes) throw ConfigError("election file is missing the votes");
    spec.config.validate();
    if (static_cast<int>(spec.votes.size()) != spec.config.n_agents) {
        throw ConfigError("votes length does not match n_agents");
    }
    return spec;
}

ElectionSpec load_election_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open election file '" + path + "'");
    return parse_election_file(in);
}

std::string config_record(const election::ElectionConfig& c) {
    std::ostringstream os;
    os << "config n_agents=" << c.n_agents
       << " epsilon=" << double_to_hex(c.epsilon)
       << " delta=" << double_to_hex(c.delta)
       << " eta=" << double_to_hex(c.eta)
       << " gamma=" << c.gamma
       << " sigma=" << c.sigma
       << " lambda=" << double_to_hex(c.lambda)
       << " candidates=" << c.candidates
       << " amplification_rounds=" << c.amplification_rounds
       << " seed=" << c.seed
       << " qubit_cap=" << c.qubit_cap
       << " m_coins=" << (c.m_coins ? std::to_string(*c.m_coins) : std::string("-"))
       << " source_model=" << c.source_model
       << " adversary_model=" << c.adversary_model;
    return os.str();
}

election::ElectionConfig parse_config_record(const std::string& line) {
    std::istringstream is(line);
    std::string tag;
    is >> tag;
    if (tag != "config") throw ConfigError("transcript header: expected config record");
    election::ElectionConfig c;
    std::string field;
    while (is >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw ConfigError("bad config field '" + field + "'");
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "n_agents") c.n_agents = static_cast<int>(to_ll(value, key));
        else if (key == "epsilon") c.epsilon = hex_to_double(value);
        else if (key == "delta") c.delta = hex_to_double(value);
        else if (key == "eta") c.eta = hex_to_double(value);
        else if (key == "gamma") c.gamma = static_cast<int>(to_ll(value, key));
        else if (key == "sigma") c.sigma = static_cast<int>(to_ll(value, key));
        else if (key == "lambda") c.lambda = hex_to_double(value);
        else if (key == "candidates") c.candidates = static_cast<int>(to_ll(value, key));
        else if (key == "amplification_rounds") c.amplification_rounds = static_cast<int>(to_ll(value, key));
        else if (key == "seed") c.seed = to_u64(value, key);
        else if (key == "qubit_cap") c.qubit_cap = static_cast<int>(to_ll(value, key));
        else if (key == "m_coins") { if (value != "-") c.m_coins = static_cast<int>(to_ll(value, key)); }
        else if (key == "source_model") c.source_model = value;
        else if (key == "adversary_model") c.adversary_model = value;
        else throw ConfigError("unknown config field '" + key + "'");
    }
    return c;
}

std::string votes_record(const std::vector<int>& votes) {
    std::string s = "votes ";
    for (std::size_t i = 0; i < votes.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(votes[i]);
    }
    return s;
}

std::vector<int> parse_votes_record(const std::string& line) {
    if (line.rfind("votes ", 0) != 0) throw ConfigError("transcript header: expected votes record");
    return parse_votes_value(trim(line.substr(6)));
}

RunArtifacts run_to_file(const ElectionSpec& spec, const std::string& path, bool dump_states) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    out << kMagic << '\n';
    out << config_record(spec.config) << '\n';
    out << votes_record(spec.votes) << '\n';

    StreamSink sink(out);
    Transcript transcript = Transcript::with_sink(sink);
    const auto art = execute(spec, transcript, dump_states);
    out << "outcome " << art.outcome_record << '\n';
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(art.transcript_hash));
    out << "hash " << buf << '\n';
    return art;
}

RunArtifacts run_hashed(const ElectionSpec& spec) {
    Transcript transcript = Transcript::hashing();
    return execute(spec, transcript, false);
}

ReplayResult replay_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open transcript file '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || trim(line) != kMagic) {
        throw ConfigError("not a transcript file: '" + path + "'");
    }
    ElectionSpec spec;
    if (!std::getline(in, line)) throw ConfigError("truncated transcript header");
    spec.config = parse_config_record(trim(line));
    if (!std::getline(in, line)) throw ConfigError("truncated transcript header");
    spec.votes = parse_votes_record(trim(line));

    ReplayResult res;
    bool have_hash = false;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.rfind("outcome ", 0) == 0) {
            res.recorded_outcome = line.substr(8);
        } else if (line.rfind("hash ", 0) == 0) {
            res.recorded_hash = std::stoull(line.substr(5), nullptr, 16);
            have_hash = true;
        }
    }
    if (!have_hash || res.recorded_outcome.empty()) {
        throw ConfigError("transcript file is missing the outcome or hash trailer");
    }

    const auto art = run_hashed(spec);
    res.replayed_outcome = art.outcome_record;
    res.replayed_hash = art.transcript_hash;
    res.matches = res.replayed_hash == res.recorded_hash &&
                  res.replayed_outcome == res.recorded_outcome;
    return res;
}

} // namespace qev::harness
