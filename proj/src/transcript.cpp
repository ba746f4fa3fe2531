#include "qev/transcript.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace qev {

int parity(const Bits& bits) {
    int p = 0;
    for (auto b : bits) p ^= (b & 1);
    return p;
}

std::string bits_to_string(const Bits& bits) {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
}

Bits bits_from_string(std::string_view s) {
    Bits out;
    out.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1') throw std::invalid_argument("bits_from_string: not a bit string");
        out.push_back(c == '1' ? 1 : 0);
    }
    return out;
}

std::string format_event(const TranscriptEvent& ev) {
    char buf[160];
    std::string recv = ev.receiver == kEveryone ? "*" : std::to_string(ev.receiver);
    int n = std::snprintf(buf, sizeof(buf), "seq=%llu phase=%s round=%d kind=%s from=%d to=%s payload=",
                          static_cast<unsigned long long>(ev.seq), ev.phase.c_str(), ev.round,
                          ev.kind.c_str(), ev.sender, recv.c_str());
    std::string line(buf, static_cast<std::size_t>(n));
    line += ev.payload.empty() ? "-" : ev.payload;
    return line;
}

namespace {

std::string_view take_field(std::string_view& rest, std::string_view key) {
    if (rest.substr(0, key.size()) != key) {
        throw std::invalid_argument("parse_event: expected field " + std::string(key));
    }
    rest.remove_prefix(key.size());
    const auto sp = rest.find(' ');
    std::string_view value = rest.substr(0, sp);
    rest = sp == std::string_view::npos ? std::string_view{} : rest.substr(sp + 1);
    return value;
}

std::int64_t to_int(std::string_view v) {
    std::int64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) {
        throw std::invalid_argument("parse_event: bad integer field");
    }
    return out;
}

} // namespace

TranscriptEvent parse_event(std::string_view line) {
    TranscriptEvent ev;
    std::string_view rest = line;
    ev.seq = static_cast<std::uint64_t>(to_int(take_field(rest, "seq=")));
    ev.phase = std::string(take_field(rest, "phase="));
    ev.round = static_cast<std::int32_t>(to_int(take_field(rest, "round=")));
    ev.kind = std::string(take_field(rest, "kind="));
    ev.sender = static_cast<std::int32_t>(to_int(take_field(rest, "from=")));
    const auto to = take_field(rest, "to=");
    ev.receiver = to == "*" ? kEveryone : static_cast<std::int32_t>(to_int(to));
    auto payload = take_field(rest, "payload=");
    ev.payload = payload == "-" ? std::string{} : std::string(payload);
    return ev;
}

std::uint64_t fnv1a64(std::uint64_t h, std::string_view s) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x00000100000001b3ull;
    }
    return h;
}

std::string double_to_hex(double v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(v)));
    return std::string(buf);
}

double hex_to_double(std::string_view s) {
    std::uint64_t bits = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), bits, 16);
    if (ec != std::errc() || p != s.data() + s.size()) {
        throw std::invalid_argument("hex_to_double: bad bit pattern");
    }
    return std::bit_cast<double>(bits);
}

void StreamSink::on_event(const TranscriptEvent&, std::string_view line) {
    os_ << line << '\n';
}

void Transcript::emit(std::string_view phase, int round, std::string_view kind,
                      int sender, int receiver, std::string payload) {
    if (!enabled_) return;
    TranscriptEvent ev;
    ev.seq = next_seq_++;
    ev.phase = std::string(phase);
    ev.round = round;
    ev.kind = std::string(kind);
    ev.sender = sender;
    ev.receiver = receiver;
    ev.payload = std::move(payload);
    const std::string line = format_event(ev);
    hash_ = fnv1a64(hash_, line);
    hash_ = fnv1a64(hash_, "\n");
    if (sink_) sink_->on_event(ev, line);
}

void Transcript::emit_bits(std::string_view phase, int round, std::string_view kind,
                           int sender, int receiver, const Bits& payload) {
    if (!enabled_) return;
    emit(phase, round, kind, sender, receiver, bits_to_string(payload));
}

} // namespace qev
