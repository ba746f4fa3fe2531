#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qev/net.hpp"
#include "qev/qsim.hpp"
#include "qev/rng.hpp"
#include "qev/verify.hpp"

namespace qev::adversary {

/// Public information a (possibly adaptive) source may condition on.
struct SourceContext {
    int round = 0;
    std::uint64_t iteration = 0;
    std::uint64_t trials_total = 0;
    std::uint64_t rejections_total = 0;
};

/// A state source strategy: emits one N-qubit state per repeat-iteration.
class SourceStrategy {
public:
    virtual ~SourceStrategy() = default;
    virtual qsim::PureState next_state(const SourceContext& ctx, Rng& rng) = 0;
    virtual std::string describe() const = 0;
};

class IdealSource : public SourceStrategy {
public:
    IdealSource(int n, int qubit_cap = qsim::kDefaultQubitCap);
    qsim::PureState next_state(const SourceContext&, Rng&) override;
    std::string describe() const override { return "ideal"; }

private:
    qsim::PureState state_;
};

/// Emits the canonical state at fixed trace distance eps from GHZ every round
/// (the optimal stationary cheating family).
class FixedTraceDistanceSource : public SourceStrategy {
public:
    FixedTraceDistanceSource(int n, double eps, int qubit_cap = qsim::kDefaultQubitCap);
    FixedTraceDistanceSource(int n, double eps, const qsim::PureState& direction,
                             int qubit_cap = qsim::kDefaultQubitCap);
    qsim::PureState next_state(const SourceContext&, Rng&) override;
    std::string describe() const override;

private:
    qsim::PureState state_;
    double eps_;
};

/// Emits the state with fixed GHZ overlap amplitude a (canonical direction).
class FixedOverlapAmpSource : public SourceStrategy {
public:
    FixedOverlapAmpSource(int n, double amp, int qubit_cap = qsim::kDefaultQubitCap);
    qsim::PureState next_state(const SourceContext&, Rng&) override;
    std::string describe() const override;

private:
    qsim::PureState state_;
    double amp_;
};

/// Cycles through a fixed list of per-round states.
class ScheduleSource : public SourceStrategy {
public:
    ScheduleSource(std::vector<qsim::PureState> states, std::string label);
    qsim::PureState next_state(const SourceContext&, Rng&) override;
    std::string describe() const override { return label_; }

private:
    std::vector<qsim::PureState> states_;
    std::string label_;
    std::uint64_t cursor_ = 0;
};

/// Arbitrary strategy over the public history. The shipped worst-case
/// instance ignores the history and always emits the fixed eps-far state.
class AdaptiveSource : public SourceStrategy {
public:
    using Fn = std::function<qsim::PureState(const SourceContext&, Rng&)>;
    AdaptiveSource(Fn fn, std::string label);
    static std::unique_ptr<AdaptiveSource> worst_case(int n, double eps,
                                                      int qubit_cap = qsim::kDefaultQubitCap);
    qsim::PureState next_state(const SourceContext& ctx, Rng& rng) override;
    std::string describe() const override { return label_; }

private:
    Fn fn_;
    std::string label_;
};

/// Parse a source-model string: "ideal" | "eps_far:<eps>" | "overlap_amp:<a>"
/// | "schedule:<entry>,<entry>,..." (entries "ideal" or "eps_far:<eps>").
std::unique_ptr<SourceStrategy> make_source(const std::string& model, int n, int qubit_cap);

// --- bulletin-board tampering -------------------------------------------------

/// Grow the board by one row and one column (a smuggled extra vote); the
/// result fails the N x N shape check downstream.
std::vector<Bits> board_tamper_grow(const std::vector<Bits>& rows);

/// Flip a single bit, changing that row's parity. Involution.
std::vector<Bits> board_tamper_flip(std::vector<Bits> rows, int row, int col);

// --- dishonest verifier --------------------------------------------------------

/// A coalition verifier always passes the test: honest agents measure and
/// broadcast honestly; the verifier broadcasts the parity-completing bit
/// instead of their measured outcome.
verify::VerificationOutcome lying_verifier_round(qsim::PureState& state, int verifier,
                                                 Net& net, Rng& rng);

// --- identity discrimination ---------------------------------------------------

struct PgmResult {
    double success = 0.0;
    std::vector<std::vector<double>> confusion;  // [true i][guess j]
    std::vector<double> guess_frequency;         // marginal over guesses
    bool pseudo_inverse_used = false;
    std::optional<double> bound;
    bool within_bound = true;
};

/// Pretty-good measurement over a state family with the given priors:
/// Pi_i = p_i rhobar^{-1/2} rho_i rhobar^{-1/2}, completed on the null space
/// with (I - P)/H. Returns the exact success probability sum p_i Tr(Pi_i rho_i).
PgmResult pgm_identity_guess(const std::vector<qsim::DensityOperator>& states,
                             const std::vector<double>& priors,
                             std::optional<double> bound = std::nullopt);

/// Exact two-state discrimination optimum (1 + trace distance)/2.
double helstrom_success(const qsim::DensityOperator& a, const qsim::DensityOperator& b);

/// Canonical rotated-frame family for the identity-guessing experiment:
/// overlap amplitude (1-eps^2)^{1/4} against the even basis state, with the
/// orthogonal tail split 3:1 between the odd partner state and an asymmetric
/// direction so that distinct voters are genuinely distinguishable.
qsim::PureState discrimination_family_state(int n, double eps,
                                            int qubit_cap = qsim::kDefaultQubitCap);

/// Literal reduced states on the coalition qubits after each honest agent's
/// voter transformation. These are provably identical across voters (the
/// transformation acts on a traced-out subsystem); kept as the degenerate
/// baseline family.
std::vector<qsim::DensityOperator> coalition_reduced_family(const qsim::PureState& psi,
                                                            const std::vector<int>& coalition);

/// Coalition view family: the honest agents' public measurement outcomes as a
/// classical register tensored with the coalition's conditional qubit state,
/// one state per candidate voter. This is what a colluding subset actually
/// holds after a voting round.
std::vector<qsim::DensityOperator> coalition_view_family(const qsim::PureState& psi,
                                                         const std::vector<int>& coalition);

/// Precomputed in-protocol PGM attack for a coalition: measurement blocks per
/// honest-broadcast word, sampled against the conditional coalition state.
class CoalitionGuesser {
public:
    CoalitionGuesser(int n, double eps, std::vector<int> coalition,
                     int qubit_cap = qsim::kDefaultQubitCap);

    const std::vector<int>& coalition() const { return coalition_; }
    const std::vector<int>& honest_agents() const { return honest_; }
    int n_honest() const { return static_cast<int>(honest_.size()); }

    /// Sample the coalition's voter guess given the honest agents' broadcast
    /// bits (ascending agent order) and the coalition's collapsed state.
    int sample_guess(const Bits& honest_bits, const qsim::PureState& coalition_state, Rng& rng);

    struct GuessRecord {
        int digit = 0;
        int round = 0;
        int true_voter = -1;
        int guessed = -1;
    };
    std::vector<GuessRecord> records;

private:
    int n_;
    std::vector<int> coalition_;
    std::vector<int> honest_;
    // povm_[y][j]: PGM block for honest word y, candidate honest voter j
    std::vector<std::vector<Eigen::MatrixXcd>> povm_;
};

enum class TamperKind { none, grow, flip };

/// Dishonest-behavior configuration for an election run.
struct AdversaryConfig {
    std::vector<int> coalition;    // sorted agent ids; lying verifiers
    TamperKind tamper = TamperKind::none;
    int flip_row = 0;
    int flip_col = 0;
    std::shared_ptr<CoalitionGuesser> guesser;  // in-protocol PGM attack

    static AdversaryConfig none() { return {}; }
    /// "none" | "coalition:[ids]" | "tamper:flip:<row>,<col>" | "tamper:grow"
    static AdversaryConfig parse(const std::string& model);

    bool in_coalition(int agent) const;
    bool passive() const { return coalition.empty() && tamper == TamperKind::none && !guesser; }
    std::string describe() const;
};

} // namespace qev::adversary
