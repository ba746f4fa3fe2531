#pragma once

#include <vector>

#include "qev/net.hpp"
#include "qev/qsim.hpp"
#include "qev/rng.hpp"

namespace qev::verify {

/// Per-agent trial/rejection counters for rounds where that agent verified.
struct VerifierCounters {
    std::vector<int> trials;
    std::vector<int> rejections;

    explicit VerifierCounters(int n_agents)
        : trials(static_cast<std::size_t>(n_agents), 0),
          rejections(static_cast<std::size_t>(n_agents), 0) {}

    /// rejections_j / trials_j, defined as 0 when trials_j = 0.
    double rejection_ratio(int agent) const;
    int n_agents() const { return static_cast<int>(trials.size()); }
};

struct VerificationOutcome {
    int verifier = -1;
    qsim::MeasurementAngles angles;
    Bits outcomes;
    bool accepted = false;
};

/// Draw n-1 angles uniformly in [0, pi) and force the last so the sum is an
/// exact multiple of pi.
qsim::MeasurementAngles generate_angles(int n, Rng& rng);

/// One verification test: the verifier draws angles, distributes them over
/// private channels, everyone measures in the rotated basis and broadcasts
/// the outcome bit; the state passes when the XOR of all outcomes equals the
/// angle-sum parity. Consumes the state.
VerificationOutcome verification_round(qsim::PureState& state, int verifier,
                                       Net& net, Rng& rng);

/// Record one finished test for the verifier.
void record_trial(VerifierCounters& counters, int verifier, bool accepted);

/// True iff some agent's rejection ratio strictly exceeds the threshold.
bool threshold_abort(const VerifierCounters& counters, double delta);

/// Exact probability that `verification_round` with these angles rejects the
/// state; oracle backing the Monte Carlo soundness checks.
double rejection_probability(const qsim::PureState& state,
                             const qsim::MeasurementAngles& angles);

/// Rejection probability averaged over `angle_draws` honest angle draws,
/// each evaluated exactly from the outcome distribution.
double expected_rejection_rate(const qsim::PureState& state, int angle_draws, Rng& rng);

} // namespace qev::verify
