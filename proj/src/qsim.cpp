#include "qev/qsim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "qev/errors.hpp"

namespace qev::qsim {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

std::uint64_t dim_for(int n_qubits) { return 1ull << n_qubits; }

void check_qubit_count(int n, int cap) {
    if (n < 1) throw PreconditionError("qubit count must be positive");
    if (n > cap) {
        throw ResourceLimitError("requested " + std::to_string(n) +
                                 " qubits exceeds the exact-simulation cap of " +
                                 std::to_string(cap));
    }
}

int hamming(std::uint64_t x) { return std::popcount(x); }

} // namespace

PureState::PureState(int n_qubits, std::vector<cplx> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
    if (n_qubits_ < 1) throw PreconditionError("PureState: qubit count must be positive");
    if (amps_.size() != dim_for(n_qubits_)) {
        throw PreconditionError("PureState: amplitude vector must have length 2^n");
    }
    double n2 = 0.0;
    for (const auto& a : amps_) n2 += std::norm(a);
    if (std::fabs(n2 - 1.0) > 1e-12 * std::max<double>(1.0, static_cast<double>(amps_.size()))) {
        // tolerance scales mildly with dimension to absorb accumulation error
        if (std::fabs(n2 - 1.0) > 1e-9) {
            throw PreconditionError("PureState: amplitudes are not normalized");
        }
    }
}

PureState PureState::computational_basis(int n_qubits, std::uint64_t index) {
    std::vector<cplx> amps(dim_for(n_qubits), cplx{0.0, 0.0});
    amps.at(index) = 1.0;
    return PureState(n_qubits, std::move(amps));
}

void PureState::ensure_unspent() const {
    if (spent_) {
        throw OneShotViolation("state has already been measured (one-shot resource)");
    }
}

double PureState::norm_sq() const {
    double n2 = 0.0;
    for (const auto& a : amps_) n2 += std::norm(a);
    return n2;
}

cplx PureState::inner_product(const PureState& other) const {
    if (other.n_qubits_ != n_qubits_) {
        throw PreconditionError("inner_product: qubit-count mismatch");
    }
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        acc += std::conj(amps_[i]) * other.amps_[i];
    }
    return acc;
}

void PureState::apply_single_qubit(int qubit, const std::array<cplx, 4>& u) {
    if (qubit < 0 || qubit >= n_qubits_) throw PreconditionError("apply_single_qubit: qubit out of range");
    const std::uint64_t stride = 1ull << (n_qubits_ - 1 - qubit);
    const std::uint64_t dim = amps_.size();
    for (std::uint64_t base = 0; base < dim; ++base) {
        if (base & stride) continue;
        const cplx a0 = amps_[base];
        const cplx a1 = amps_[base | stride];
        amps_[base] = u[0] * a0 + u[1] * a1;
        amps_[base | stride] = u[2] * a0 + u[3] * a1;
    }
}

void PureState::renormalize() {
    const double n = std::sqrt(norm_sq());
    if (n <= 0.0) throw PreconditionError("renormalize: zero vector");
    for (auto& a : amps_) a /= n;
}

MeasurementAngles MeasurementAngles::from_thetas(std::vector<double> thetas) {
    if (thetas.empty()) throw PreconditionError("MeasurementAngles: empty");
    double sum = 0.0;
    for (double t : thetas) sum += t;
    const double multiple = sum / kPi;
    const long long rounded = std::llround(multiple);
    if (std::fabs(multiple - static_cast<double>(rounded)) > 1e-9) {
        throw PreconditionError("MeasurementAngles: angle sum is not a multiple of pi");
    }
    MeasurementAngles m;
    m.thetas = std::move(thetas);
    m.parity_target = static_cast<int>(((rounded % 2) + 2) % 2);
    return m;
}

DensityOperator::DensityOperator(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1) {
        throw PreconditionError("DensityOperator: matrix must be square");
    }
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
        throw PreconditionError("DensityOperator: matrix is not Hermitian");
    }
    if (std::fabs(matrix_.trace().real() - 1.0) > 1e-10 || std::fabs(matrix_.trace().imag()) > 1e-10) {
        throw PreconditionError("DensityOperator: trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) {
        throw PreconditionError("DensityOperator: negative eigenvalue");
    }
}

double DensityOperator::purity() const {
    return (matrix_ * matrix_).trace().real();
}

double trace_distance(const DensityOperator& rho, const DensityOperator& tau) {
    if (rho.dim() != tau.dim()) throw PreconditionError("trace_distance: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix() - tau.matrix(),
                                                       Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

PureState ghz_state(int n, int qubit_cap) {
    check_qubit_count(n, qubit_cap);
    std::vector<cplx> amps(dim_for(n), cplx{0.0, 0.0});
    const double r = 1.0 / std::sqrt(2.0);
    amps.front() = r;
    amps.back() = r;
    return PureState(n, std::move(amps));
}

PureState phi_basis_state(int n, int which, int qubit_cap) {
    check_qubit_count(n, qubit_cap);
    if (which != 0 && which != 1) throw PreconditionError("phi_basis_state: which must be 0 or 1");
    std::vector<cplx> amps(dim_for(n), cplx{0.0, 0.0});
    const double r = 1.0 / std::sqrt(static_cast<double>(dim_for(n)) / 2.0);
    for (std::uint64_t i = 0; i < dim_for(n); ++i) {
        const int w = hamming(i) % 4;
        if (which == 0) {
            if (w == 0) amps[i] = r;
            else if (w == 2) amps[i] = -r;
        } else {
            if (w == 1) amps[i] = r;
            else if (w == 3) amps[i] = -r;
        }
    }
    return PureState(n, std::move(amps));
}

PureState state_at_trace_distance(int n, double eps, const PureState& direction, int qubit_cap) {
    check_qubit_count(n, qubit_cap);
    if (eps < 0.0 || eps > 1.0) throw PreconditionError("state_at_trace_distance: eps outside [0,1]");
    return state_at_overlap_amp(n, std::sqrt(1.0 - eps * eps), direction, qubit_cap);
}

PureState state_at_overlap_amp(int n, double amp, const PureState& direction, int qubit_cap) {
    check_qubit_count(n, qubit_cap);
    if (amp < 0.0 || amp > 1.0) throw PreconditionError("state_at_overlap_amp: amplitude outside [0,1]");
    if (direction.n_qubits() != n) throw PreconditionError("direction has wrong qubit count");
    const PureState ghz = ghz_state(n, qubit_cap);
    if (std::abs(direction.inner_product(ghz)) > 1e-10) {
        throw PreconditionError("direction is not orthogonal to the GHZ state");
    }
    if (std::fabs(direction.norm_sq() - 1.0) > 1e-9) {
        throw PreconditionError("direction is not a unit vector");
    }
    const double tail = std::sqrt(std::max(0.0, 1.0 - amp * amp));
    std::vector<cplx> amps(dim_for(n));
    for (std::uint64_t i = 0; i < dim_for(n); ++i) {
        amps[i] = amp * ghz.amplitude(i) + tail * direction.amplitude(i);
    }
    PureState out(n, std::move(amps));
    return out;
}

PureState canonical_far_direction(int n, int qubit_cap) {
    const PureState ghz = ghz_state(n, qubit_cap);
    const PureState odd = phi_basis_state(n, 1, qubit_cap);
    const cplx overlap = ghz.inner_product(odd);
    std::vector<cplx> amps(dim_for(n));
    double norm2 = 0.0;
    for (std::uint64_t i = 0; i < dim_for(n); ++i) {
        amps[i] = odd.amplitude(i) - overlap * ghz.amplitude(i);
        norm2 += std::norm(amps[i]);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& a : amps) a *= inv;
    return PureState(n, std::move(amps));
}

void voter_transform(PureState& state, int agent) {
    if (agent < 0 || agent >= state.n_qubits()) {
        throw PreconditionError("voter_transform: agent index out of range");
    }
    // sigma_x * sigma_z = [[0,-1],[1,0]]
    state.apply_single_qubit(agent, {cplx{0, 0}, cplx{-1, 0}, cplx{1, 0}, cplx{0, 0}});
}

PureState voter_transformed(PureState state, int agent) {
    voter_transform(state, agent);
    return state;
}

void apply_frame_rotation(PureState& state, bool inverse) {
    const double r = 1.0 / std::sqrt(2.0);
    // sqrt(Z)*H: apply Hadamard first, then the phase. Inverse is H*sqrt(Z)^dag.
    const std::array<cplx, 4> fwd = {cplx{r, 0}, cplx{r, 0}, kI * r, -kI * r};
    const std::array<cplx, 4> inv = {cplx{r, 0}, -kI * r, cplx{r, 0}, kI * r};
    for (int q = 0; q < state.n_qubits(); ++q) {
        state.apply_single_qubit(q, inverse ? inv : fwd);
    }
}

namespace {

// Basis change mapping |+_theta> -> |0>, |-_theta> -> |1>.
std::array<cplx, 4> rotated_basis_gate(double theta) {
    const double r = 1.0 / std::sqrt(2.0);
    const cplx e = std::exp(cplx{0.0, -theta});
    return {cplx{r, 0}, r * e, cplx{r, 0}, -r * e};
}

PureState rotated_copy(const PureState& state, const MeasurementAngles& angles) {
    if (static_cast<int>(angles.thetas.size()) != state.n_qubits()) {
        throw PreconditionError("measurement angles length does not match qubit count");
    }
    PureState work = state;
    for (int q = 0; q < state.n_qubits(); ++q) {
        work.apply_single_qubit(q, rotated_basis_gate(angles.thetas[q]));
    }
    return work;
}

std::uint64_t sample_index(std::span<const cplx> amps, Rng& rng) {
    double total = 0.0;
    for (const auto& a : amps) total += std::norm(a);
    double r = rng.uniform() * total;
    for (std::size_t i = 0; i + 1 < amps.size(); ++i) {
        r -= std::norm(amps[i]);
        if (r < 0.0) return i;
    }
    return amps.size() - 1;
}

Bits index_to_bits(std::uint64_t index, int n) {
    Bits out(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) out[q] = static_cast<std::uint8_t>(index_bit(index, n, q));
    return out;
}

} // namespace

Bits measure_all_rotated(PureState& state, const MeasurementAngles& angles, Rng& rng) {
    state.ensure_unspent();
    const PureState work = rotated_copy(state, angles);
    const std::uint64_t idx = sample_index(work.amplitudes(), rng);
    state.mark_spent();
    return index_to_bits(idx, state.n_qubits());
}

Bits measure_all_hadamard(PureState& state, Rng& rng) {
    return measure_all_rotated(
        state, MeasurementAngles::from_thetas(std::vector<double>(state.n_qubits(), 0.0)), rng);
}

Bits measure_qubits_computational(PureState& state, const std::vector<int>& qubits,
                                  Rng& rng, PureState* remaining) {
    state.ensure_unspent();
    const int n = state.n_qubits();
    for (int q : qubits) {
        if (q < 0 || q >= n) throw PreconditionError("measure_qubits_computational: qubit out of range");
    }
    std::vector<int> rest;
    for (int q = 0; q < n; ++q) {
        if (std::find(qubits.begin(), qubits.end(), q) == qubits.end()) rest.push_back(q);
    }
    const int m = static_cast<int>(qubits.size());
    const int k = static_cast<int>(rest.size());

    // marginal over the measured qubits
    std::vector<double> marg(1ull << m, 0.0);
    for (std::uint64_t i = 0; i < state.dim(); ++i) {
        std::uint64_t y = 0;
        for (int j = 0; j < m; ++j) y = (y << 1) | static_cast<std::uint64_t>(index_bit(i, n, qubits[j]));
        marg[y] += std::norm(state.amplitude(i));
    }
    double total = 0.0;
    for (double p : marg) total += p;
    double r = rng.uniform() * total;
    std::uint64_t outcome = marg.size() - 1;
    for (std::size_t y = 0; y + 1 < marg.size(); ++y) {
        r -= marg[y];
        if (r < 0.0) { outcome = y; break; }
    }

    if (remaining != nullptr) {
        if (k == 0) throw PreconditionError("measure_qubits_computational: no qubits left to keep");
        std::vector<cplx> sub(1ull << k, cplx{0.0, 0.0});
        for (std::uint64_t i = 0; i < state.dim(); ++i) {
            std::uint64_t y = 0;
            for (int j = 0; j < m; ++j) y = (y << 1) | static_cast<std::uint64_t>(index_bit(i, n, qubits[j]));
            if (y != outcome) continue;
            std::uint64_t z = 0;
            for (int j = 0; j < k; ++j) z = (z << 1) | static_cast<std::uint64_t>(index_bit(i, n, rest[j]));
            sub[z] = state.amplitude(i);
        }
        const double inv = 1.0 / std::sqrt(marg[outcome]);
        for (auto& a : sub) a *= inv;
        *remaining = PureState(k, std::move(sub));
    }
    state.mark_spent();

    Bits out(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) out[j] = static_cast<std::uint8_t>((outcome >> (m - 1 - j)) & 1ull);
    return out;
}

std::vector<double> outcome_distribution(const PureState& state, const MeasurementAngles& angles) {
    const PureState work = rotated_copy(state, angles);
    std::vector<double> probs(work.dim());
    for (std::uint64_t i = 0; i < work.dim(); ++i) probs[i] = std::norm(work.amplitude(i));
    return probs;
}

DensityOperator partial_trace(const PureState& state, const std::vector<int>& keep) {
    const int n = state.n_qubits();
    if (keep.empty()) throw PreconditionError("partial_trace: keep-set is empty");
    std::vector<int> sorted = keep;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw PreconditionError("partial_trace: duplicate qubit in keep-set");
    }
    for (int q : sorted) {
        if (q < 0 || q >= n) throw PreconditionError("partial_trace: qubit out of range");
    }
    std::vector<int> rest;
    for (int q = 0; q < n; ++q) {
        if (!std::binary_search(sorted.begin(), sorted.end(), q)) rest.push_back(q);
    }
    const int k = static_cast<int>(sorted.size());
    const int t = static_cast<int>(rest.size());
    const std::uint64_t dk = 1ull << k;
    const std::uint64_t dt = 1ull << t;

    auto full_index = [&](std::uint64_t a, std::uint64_t e) {
        std::uint64_t idx = 0;
        for (int j = 0; j < k; ++j) {
            if ((a >> (k - 1 - j)) & 1ull) idx |= 1ull << (n - 1 - sorted[j]);
        }
        for (int j = 0; j < t; ++j) {
            if ((e >> (t - 1 - j)) & 1ull) idx |= 1ull << (n - 1 - rest[j]);
        }
        return idx;
    };

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dk),
                                                  static_cast<Eigen::Index>(dk));
    for (std::uint64_t a = 0; a < dk; ++a) {
        for (std::uint64_t b = 0; b < dk; ++b) {
            cplx acc{0.0, 0.0};
            for (std::uint64_t e = 0; e < dt; ++e) {
                acc += state.amplitude(full_index(a, e)) * std::conj(state.amplitude(full_index(b, e)));
            }
            rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc;
        }
    }
    return DensityOperator(std::move(rho));
}

double ghz_fidelity_sq(const PureState& state) {
    const PureState ghz = ghz_state(state.n_qubits(), state.n_qubits());
    return std::norm(state.inner_product(ghz));
}

double pure_trace_distance(const PureState& a, const PureState& b) {
    const double f = std::norm(a.inner_product(b));
    return std::sqrt(std::max(0.0, 1.0 - f));
}

void dump_state(const PureState& state, Transcript& transcript, std::string_view label) {
    if (!transcript.active()) return;
    for (std::uint64_t i = 0; i < state.dim(); ++i) {
        const cplx a = state.amplitude(i);
        if (std::norm(a) == 0.0) continue;
        std::string payload = std::string(label) + ":" + std::to_string(i) + "," +
                              double_to_hex(a.real()) + "," + double_to_hex(a.imag());
        transcript.emit("debug", -1, "state_amp", kSystem, kEveryone, std::move(payload));
    }
}

} // namespace qev::qsim
