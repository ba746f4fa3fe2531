#pragma once

#include <stdexcept>
#include <string>

namespace qev {

// Parameter-domain violation in a configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An operation precondition was violated by the caller.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Exact-simulation resource cap exceeded.
class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A distributed quantum state was consumed twice.
class OneShotViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// A participant misbehaved in a way the protocol cannot absorb
// (malformed share, non-participation outside the broadcast step).
class ProtocolFault : public std::runtime_error {
public:
    ProtocolFault(const std::string& what, int culprit_agent)
        : std::runtime_error(what), culprit(culprit_agent) {}
    int culprit;
};

// A diagnostic iteration cap was exhausted; not a protocol outcome.
class RoundCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qev
