#include "qev/verify.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qev/errors.hpp"

namespace qev::verify {

namespace {
constexpr double kPi = std::numbers::pi;
} // namespace


namespace {

std::string outcome_summary(const VerificationOutcome& out) {
    std::string s = "v=" + std::to_string(out.verifier) + ";t=";
    for (std::size_t j = 0; j < out.angles.thetas.size(); ++j) {
        if (j) s += '|';
        s += std::to_string(std::lround(out.angles.thetas[j] * 1e6));
    }
    s += ";y=" + bits_to_string(out.outcomes);
    s += ";a=" + std::to_string(out.accepted ? 1 : 0);
    return s;
}

} // namespace

double VerifierCounters::rejection_ratio(int agent) const {
    const auto a = static_cast<std::size_t>(agent);
    if (trials.at(a) == 0) return 0.0;
    return static_cast<double>(rejections[a]) / static_cast<double>(trials[a]);
}

qsim::MeasurementAngles generate_angles(int n, Rng& rng) {
    if (n < 1) throw PreconditionError("generate_angles: n must be positive");
    std::vector<double> thetas(static_cast<std::size_t>(n), 0.0);
    double sum = 0.0;
    for (int j = 0; j + 1 < n; ++j) {
        thetas[static_cast<std::size_t>(j)] = rng.uniform() * kPi;
        sum += thetas[static_cast<std::size_t>(j)];
    }
    double last = std::fmod(-sum, kPi);
    if (last < 0.0) last += kPi;
    if (last >= kPi) last = 0.0;
    thetas[static_cast<std::size_t>(n - 1)] = last;
    return qsim::MeasurementAngles::from_thetas(std::move(thetas));
}

VerificationOutcome verification_round(qsim::PureState& state, int verifier,
                                       Net& net, Rng& rng) {
    const int n = state.n_qubits();
    if (verifier < 0 || verifier >= net.n()) throw PreconditionError("verification_round: bad verifier");
    if (n != net.n()) throw PreconditionError("verification_round: state size != agent count");
    state.ensure_unspent();

    VerificationOutcome out;
    out.verifier = verifier;
    out.angles = generate_angles(n, rng);
    if (net.transcript().active()) {
        for (int j = 0; j < n; ++j) {
            const long micro = std::lround(out.angles.thetas[static_cast<std::size_t>(j)] * 1e6);
            net.send_private("theta", verifier, j, std::to_string(micro));
        }
    }
    out.outcomes = qsim::measure_all_rotated(state, out.angles, rng);
    for (int j = 0; j < n; ++j) {
        net.broadcast("verify_outcome", j, std::to_string(static_cast<int>(out.outcomes[static_cast<std::size_t>(j)])));
    }
    out.accepted = parity(out.outcomes) == out.angles.parity_target;
    net.event("verify_decision", verifier, out.accepted ? "accept" : "reject");
    net.event("verify_summary", verifier, outcome_summary(out));
    return out;
}

void record_trial(VerifierCounters& counters, int verifier, bool accepted) {
    const auto v = static_cast<std::size_t>(verifier);
    counters.trials.at(v) += 1;
    if (!accepted) counters.rejections.at(v) += 1;
}

bool threshold_abort(const VerifierCounters& counters, double delta) {
    if (delta < 0.0 || delta >= 1.0) throw PreconditionError("threshold_abort: delta must be in [0,1)");
    for (int j = 0; j < counters.n_agents(); ++j) {
        if (counters.rejection_ratio(j) > delta) return true;
    }
    return false;
}

double rejection_probability(const qsim::PureState& state,
                             const qsim::MeasurementAngles& angles) {
    const auto probs = qsim::outcome_distribution(state, angles);
    const int n = state.n_qubits();
    double rej = 0.0;
    for (std::uint64_t i = 0; i < probs.size(); ++i) {
        int par = 0;
        for (int q = 0; q < n; ++q) par ^= qsim::index_bit(i, n, q);
        if (par != angles.parity_target) rej += probs[i];
    }
    return rej;
}

double expected_rejection_rate(const qsim::PureState& state, int angle_draws, Rng& rng) {
    double acc = 0.0;
    for (int i = 0; i < angle_draws; ++i) {
        acc += rejection_probability(state, generate_angles(state.n_qubits(), rng));
    }
    return acc / static_cast<double>(angle_draws);
}

} // namespace qev::verify
