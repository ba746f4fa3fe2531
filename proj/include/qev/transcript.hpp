#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace qev {

/// Bit sequence used throughout the protocol layer.
using Bits = std::vector<std::uint8_t>;

int parity(const Bits& bits);
std::string bits_to_string(const Bits& bits);
Bits bits_from_string(std::string_view s);

/// Receiver value meaning "broadcast to everyone".
inline constexpr std::int32_t kEveryone = -2;
/// Sender value for the simulator itself (source, scheduler).
inline constexpr std::int32_t kSystem = -1;

/// One logged protocol message or decision; the persistence and replay unit.
struct TranscriptEvent {
    std::uint64_t seq = 0;        // strictly increasing
    std::string phase;            // setup | phase1 | phase2 | phase3 | outcome
    std::int32_t round = -1;      // voting round, -1 when not applicable
    std::string kind;
    std::int32_t sender = kSystem;
    std::int32_t receiver = kEveryone;
    std::string payload;          // single token, no spaces
};

/// Line-delimited structured text: one event per line, key=value fields in
/// fixed order. Chosen for diff-ability and replay simplicity.
std::string format_event(const TranscriptEvent& ev);
TranscriptEvent parse_event(std::string_view line);

std::uint64_t fnv1a64(std::uint64_t h, std::string_view s);
inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;

/// IEEE-754 bit-pattern serialization for floats that must replay exactly.
std::string double_to_hex(double v);
double hex_to_double(std::string_view s);

class TranscriptSink {
public:
    virtual ~TranscriptSink() = default;
    virtual void on_event(const TranscriptEvent& ev, std::string_view line) = 0;
};

/// Keeps every event in memory; used by the audits and the `run` command.
class VecSink : public TranscriptSink {
public:
    void on_event(const TranscriptEvent& ev, std::string_view) override { events.push_back(ev); }
    std::vector<TranscriptEvent> events;
};

/// Streams formatted lines to an ostream.
class StreamSink : public TranscriptSink {
public:
    explicit StreamSink(std::ostream& os) : os_(os) {}
    void on_event(const TranscriptEvent& ev, std::string_view line) override;

private:
    std::ostream& os_;
};

/// Event log facade. Three operating modes:
///   off      — events are dropped without formatting (hot Monte Carlo loops)
///   hashing  — events are formatted and folded into an FNV-1a hash
///   sink     — additionally forwarded to a TranscriptSink
class Transcript {
public:
    Transcript() = default; // off

    static Transcript off() { return Transcript(); }
    static Transcript hashing() {
        Transcript t;
        t.enabled_ = true;
        return t;
    }
    static Transcript with_sink(TranscriptSink& sink) {
        Transcript t;
        t.enabled_ = true;
        t.sink_ = &sink;
        return t;
    }

    bool active() const { return enabled_; }

    void emit(std::string_view phase, int round, std::string_view kind,
              int sender, int receiver, std::string payload);
    void emit_bits(std::string_view phase, int round, std::string_view kind,
                   int sender, int receiver, const Bits& payload);

    std::uint64_t hash() const { return hash_; }
    std::uint64_t count() const { return next_seq_; }

private:
    bool enabled_ = false;
    TranscriptSink* sink_ = nullptr;
    std::uint64_t next_seq_ = 0;
    std::uint64_t hash_ = kFnvOffset;
};

} // namespace qev
