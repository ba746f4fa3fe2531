#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qev/rng.hpp"
#include "qev/transcript.hpp"

namespace qev::qsim {

using cplx = std::complex<double>;

/// Default cap on exact statevector size (2^16 amplitudes). Keeps dense
/// simulation and the discrimination computations desk-scale.
inline constexpr int kDefaultQubitCap = 16;

/// Basis-index convention: qubit j holds bit (n-1-j) of the amplitude index,
/// so the binary string of an index read left-to-right is qubits 0..n-1.
inline int index_bit(std::uint64_t index, int n_qubits, int qubit) {
    return static_cast<int>((index >> (n_qubits - 1 - qubit)) & 1ull);
}

/// Complex amplitude vector for n qubits; the simulated shared resource.
/// A distributed state is consumed by exactly one measurement ("spent" flag),
/// mirroring the physics and catching double-measurement bugs.
class PureState {
public:
    PureState(int n_qubits, std::vector<cplx> amplitudes);

    static PureState computational_basis(int n_qubits, std::uint64_t index);

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    std::span<const cplx> amplitudes() const { return amps_; }
    cplx amplitude(std::uint64_t index) const { return amps_[index]; }

    bool spent() const { return spent_; }
    void mark_spent() { spent_ = true; }
    void ensure_unspent() const;

    double norm_sq() const;
    cplx inner_product(const PureState& other) const;

    /// Apply a 2x2 unitary (row-major [u00 u01; u10 u11]) to one qubit.
    void apply_single_qubit(int qubit, const std::array<cplx, 4>& u);

    /// In-place renormalization (numerical upkeep after long gate chains).
    void renormalize();

private:
    int n_qubits_;
    std::vector<cplx> amps_;
    bool spent_ = false;
};

/// Verifier-chosen rotated-measurement angles, one per qubit, summing to an
/// integer multiple of pi.
struct MeasurementAngles {
    std::vector<double> thetas;  // radians, each in [0, pi)
    int parity_target = 0;       // (sum(thetas)/pi) mod 2

    static MeasurementAngles from_thetas(std::vector<double> thetas);
};

/// dim x dim density operator; Hermitian, unit trace, positive semidefinite
/// within numerical tolerance (validated on construction).
class DensityOperator {
public:
    explicit DensityOperator(Eigen::MatrixXcd matrix);

    int dim() const { return static_cast<int>(matrix_.rows()); }
    const Eigen::MatrixXcd& matrix() const { return matrix_; }

    double purity() const;

private:
    Eigen::MatrixXcd matrix_;
};

/// Trace distance (1/2)||rho - tau||_1.
double trace_distance(const DensityOperator& rho, const DensityOperator& tau);

// --- state constructors -----------------------------------------------------

/// (|0...0> + |1...1>)/sqrt(2). Throws ResourceLimitError above the cap.
PureState ghz_state(int n, int qubit_cap = kDefaultQubitCap);

/// The rotated-frame basis pair. which=0: equal-weight even-Hamming-weight
/// strings signed -1 at weight 2 (mod 4) — the image of the GHZ state under a
/// per-qubit Hadamard followed by a sqrt(Z) phase. which=1: the odd-weight
/// partner, signed -1 at weight 3 (mod 4).
PureState phi_basis_state(int n, int which, int qubit_cap = kDefaultQubitCap);

/// sqrt(1-eps^2)|GHZ> + eps|direction>; pure-state trace distance to GHZ is
/// exactly eps. `direction` must be a unit vector orthogonal to the GHZ state.
PureState state_at_trace_distance(int n, double eps, const PureState& direction,
                                  int qubit_cap = kDefaultQubitCap);

/// amp|GHZ> + sqrt(1-amp^2)|direction>; <GHZ|psi> = amp (real, nonnegative).
PureState state_at_overlap_amp(int n, double amp, const PureState& direction,
                               int qubit_cap = kDefaultQubitCap);

/// Canonical orthogonal direction: the odd-weight basis partner orthogonalized
/// against the GHZ state. Used as the worst-case-style direction for the
/// epsilon-far source family.
PureState canonical_far_direction(int n, int qubit_cap = kDefaultQubitCap);

// --- unitaries ---------------------------------------------------------------

/// Apply sigma_x sigma_z to one agent's qubit (the voter's transformation in
/// the rotated frame). Unitary; applying it twice yields -identity.
void voter_transform(PureState& state, int agent);
PureState voter_transformed(PureState state, int agent);

/// Apply the per-qubit frame rotation sqrt(Z)*H (or its inverse) to every
/// qubit: maps the GHZ state onto phi_basis_state(n, 0).
void apply_frame_rotation(PureState& state, bool inverse = false);

// --- measurement -------------------------------------------------------------

/// Sample a full outcome string from the exact Born distribution of measuring
/// qubit j in the basis [ |+_theta_j>, |-_theta_j> ]. Consumes the state.
Bits measure_all_rotated(PureState& state, const MeasurementAngles& angles, Rng& rng);

/// Hadamard-basis sampling: measure_all_rotated with all angles zero.
Bits measure_all_hadamard(PureState& state, Rng& rng);

/// Measure a subset of qubits in the computational basis. Returns the outcome
/// bits (in ascending qubit order) and collapses the caller-provided state to
/// the resulting pure state on the remaining qubits. Consumes `state`.
Bits measure_qubits_computational(PureState& state, const std::vector<int>& qubits,
                                  Rng& rng, PureState* remaining);

/// Exact outcome distribution for measure_all_rotated: probability of every
/// length-n outcome string, indexed by the usual bit convention. This is the
/// oracle the samplers are validated against.
std::vector<double> outcome_distribution(const PureState& state,
                                         const MeasurementAngles& angles);

// --- reductions and distances ------------------------------------------------

/// Reduced density operator on the kept qubits (ascending order).
DensityOperator partial_trace(const PureState& state, const std::vector<int>& keep);

/// |<state|GHZ>|^2. For pure states the trace distance to GHZ is
/// sqrt(1 - returned value).
double ghz_fidelity_sq(const PureState& state);

/// sqrt(1 - |<a|b>|^2).
double pure_trace_distance(const PureState& a, const PureState& b);

/// Debug dump: one transcript event per nonzero amplitude, payload
/// "index,re_bits,im_bits" with IEEE-754 hex bit patterns.
void dump_state(const PureState& state, Transcript& transcript, std::string_view label);

} // namespace qev::qsim
