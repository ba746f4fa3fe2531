#include "qev/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qev/errors.hpp"

namespace qev::adversary {

namespace {

using qsim::cplx;
using qsim::PureState;

double parse_double(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(what);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(std::string("could not parse number in ") + what + ": '" + s + "'");
    }
}

} // namespace

IdealSource::IdealSource(int n, int qubit_cap) : state_(qsim::ghz_state(n, qubit_cap)) {}

qsim::PureState IdealSource::next_state(const SourceContext&, Rng&) { return state_; }

FixedTraceDistanceSource::FixedTraceDistanceSource(int n, double eps, int qubit_cap)
    : FixedTraceDistanceSource(n, eps, qsim::canonical_far_direction(n, qubit_cap), qubit_cap) {}

FixedTraceDistanceSource::FixedTraceDistanceSource(int n, double eps,
                                                   const qsim::PureState& direction, int qubit_cap)
    : state_(qsim::state_at_trace_distance(n, eps, direction, qubit_cap)), eps_(eps) {}

qsim::PureState FixedTraceDistanceSource::next_state(const SourceContext&, Rng&) { return state_; }

std::string FixedTraceDistanceSource::describe() const {
    std::ostringstream os;
    os << "eps_far:" << eps_;
    return os.str();
}

FixedOverlapAmpSource::FixedOverlapAmpSource(int n, double amp, int qubit_cap)
    : state_(qsim::state_at_overlap_amp(n, amp, qsim::canonical_far_direction(n, qubit_cap), qubit_cap)),
      amp_(amp) {}

qsim::PureState FixedOverlapAmpSource::next_state(const SourceContext&, Rng&) { return state_; }

std::string FixedOverlapAmpSource::describe() const {
    std::ostringstream os;
    os << "overlap_amp:" << amp_;
    return os.str();
}

ScheduleSource::ScheduleSource(std::vector<qsim::PureState> states, std::string label)
    : states_(std::move(states)), label_(std::move(label)) {
    if (states_.empty()) throw ConfigError("schedule source needs at least one state");
}

qsim::PureState ScheduleSource::next_state(const SourceContext&, Rng&) {
    return states_[static_cast<std::size_t>(cursor_++ % states_.size())];
}

AdaptiveSource::AdaptiveSource(Fn fn, std::string label)
    : fn_(std::move(fn)), label_(std::move(label)) {}

std::unique_ptr<AdaptiveSource> AdaptiveSource::worst_case(int n, double eps, int qubit_cap) {
    auto state = qsim::state_at_trace_distance(n, eps, qsim::canonical_far_direction(n, qubit_cap),
                                               qubit_cap);
    return std::make_unique<AdaptiveSource>(
        [state](const SourceContext&, Rng&) { return state; }, "adaptive_worst_case");
}

qsim::PureState AdaptiveSource::next_state(const SourceContext& ctx, Rng& rng) {
    qsim::PureState s = fn_(ctx, rng);
    if (std::fabs(s.norm_sq() - 1.0) > 1e-9) {
        throw PreconditionError("adaptive source emitted an unnormalized state (strategy fault)");
    }
    return s;
}

std::unique_ptr<SourceStrategy> make_source(const std::string& model, int n, int qubit_cap) {
    if (model.empty() || model == "ideal") return std::make_unique<IdealSource>(n, qubit_cap);
    if (model.rfind("eps_far:", 0) == 0) {
        return std::make_unique<FixedTraceDistanceSource>(n, parse_double(model.substr(8), "eps_far"),
                                                          qubit_cap);
    }
    if (model.rfind("overlap_amp:", 0) == 0) {
        return std::make_unique<FixedOverlapAmpSource>(n, parse_double(model.substr(12), "overlap_amp"),
                                                       qubit_cap);
    }
    if (model.rfind("schedule:", 0) == 0) {
        std::vector<qsim::PureState> states;
        std::stringstream ss(model.substr(9));
        std::string entry;
        while (std::getline(ss, entry, ',')) {
            if (entry == "ideal") {
                states.push_back(qsim::ghz_state(n, qubit_cap));
            } else if (entry.rfind("eps_far:", 0) == 0) {
                states.push_back(qsim::state_at_trace_distance(
                    n, parse_double(entry.substr(8), "schedule eps_far"),
                    qsim::canonical_far_direction(n, qubit_cap), qubit_cap));
            } else {
                throw ConfigError("unknown schedule entry '" + entry + "'");
            }
        }
        return std::make_unique<ScheduleSource>(std::move(states), model);
    }
    throw ConfigError("unknown source model '" + model + "'");
}

std::vector<Bits> board_tamper_grow(const std::vector<Bits>& rows) {
    std::vector<Bits> out = rows;
    for (auto& r : out) r.push_back(0);
    Bits extra(out.empty() ? 1 : out.front().size(), 0);
    extra.front() = 1;  // the smuggled vote
    out.push_back(std::move(extra));
    return out;
}

std::vector<Bits> board_tamper_flip(std::vector<Bits> rows, int row, int col) {
    auto& r = rows.at(static_cast<std::size_t>(row));
    auto& b = r.at(static_cast<std::size_t>(col));
    b ^= 1;
    return rows;
}

verify::VerificationOutcome lying_verifier_round(qsim::PureState& state, int verifier,
                                                 Net& net, Rng& rng) {
    const int n = state.n_qubits();
    if (verifier < 0 || verifier >= net.n()) throw PreconditionError("lying_verifier_round: bad verifier");
    state.ensure_unspent();

    verify::VerificationOutcome out;
    out.verifier = verifier;
    out.angles = verify::generate_angles(n, rng);
    if (net.transcript().active()) {
        for (int j = 0; j < n; ++j) {
            const long micro = std::lround(out.angles.thetas[static_cast<std::size_t>(j)] * 1e6);
            net.send_private("theta", verifier, j, std::to_string(micro));
        }
    }
    out.outcomes = qsim::measure_all_rotated(state, out.angles, rng);
    // the verifier announces whatever bit completes the required parity
    int others = 0;
    for (int j = 0; j < n; ++j) {
        if (j != verifier) others ^= out.outcomes[static_cast<std::size_t>(j)];
    }
    out.outcomes[static_cast<std::size_t>(verifier)] =
        static_cast<std::uint8_t>(others ^ out.angles.parity_target);
    for (int j = 0; j < n; ++j) {
        net.broadcast("verify_outcome", j,
                      std::to_string(static_cast<int>(out.outcomes[static_cast<std::size_t>(j)])));
    }
    out.accepted = true;
    net.event("verify_decision", verifier, "accept");
    {
        std::string s = "v=" + std::to_string(out.verifier) + ";t=";
        for (std::size_t j = 0; j < out.angles.thetas.size(); ++j) {
            if (j) s += '|';
            s += std::to_string(std::lround(out.angles.thetas[j] * 1e6));
        }
        s += ";y=" + bits_to_string(out.outcomes) + ";a=1";
        net.event("verify_summary", verifier, std::move(s));
    }
    return out;
}

namespace {

Eigen::MatrixXcd inverse_sqrt_on_support(const Eigen::MatrixXcd& m, bool* pseudo) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    const auto& vals = es.eigenvalues();
    const double cutoff = 1e-12 * std::max(1.0, vals.maxCoeff());
    Eigen::VectorXd inv(vals.size());
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        if (vals(i) > cutoff) {
            inv(i) = 1.0 / std::sqrt(vals(i));
        } else {
            inv(i) = 0.0;
            *pseudo = true;
        }
    }
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<Eigen::MatrixXcd> pgm_elements(const std::vector<Eigen::MatrixXcd>& rho,
                                           const std::vector<double>& priors, bool* pseudo) {
    const auto dim = rho.front().rows();
    Eigen::MatrixXcd avg = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t i = 0; i < rho.size(); ++i) avg += priors[i] * rho[i];
    const Eigen::MatrixXcd isq = inverse_sqrt_on_support(avg, pseudo);

    std::vector<Eigen::MatrixXcd> povm;
    povm.reserve(rho.size());
    Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t i = 0; i < rho.size(); ++i) {
        povm.push_back(priors[i] * (isq * rho[i] * isq));
        total += povm.back();
    }
    // complete the measurement on the null space so probabilities sum to 1
    const Eigen::MatrixXcd slack =
        (Eigen::MatrixXcd::Identity(dim, dim) - total) / static_cast<double>(rho.size());
    for (auto& p : povm) p += slack;
    return povm;
}

} // namespace

PgmResult pgm_identity_guess(const std::vector<qsim::DensityOperator>& states,
                             const std::vector<double>& priors,
                             std::optional<double> bound) {
    if (states.empty() || states.size() != priors.size()) {
        throw PreconditionError("pgm_identity_guess: family/priors mismatch");
    }
    const int dim = states.front().dim();
    std::vector<Eigen::MatrixXcd> rho;
    rho.reserve(states.size());
    for (const auto& s : states) {
        if (s.dim() != dim) throw PreconditionError("pgm_identity_guess: dimension mismatch");
        rho.push_back(s.matrix());
    }

    PgmResult res;
    const auto povm = pgm_elements(rho, priors, &res.pseudo_inverse_used);

    const std::size_t h = states.size();
    res.confusion.assign(h, std::vector<double>(h, 0.0));
    res.guess_frequency.assign(h, 0.0);
    for (std::size_t i = 0; i < h; ++i) {
        for (std::size_t j = 0; j < h; ++j) {
            const double p = (povm[j] * rho[i]).trace().real();
            res.confusion[i][j] = p;
            res.guess_frequency[j] += priors[i] * p;
        }
        res.success += priors[i] * res.confusion[i][i];
    }
    res.bound = bound;
    if (bound.has_value()) res.within_bound = res.success <= *bound + 1e-9;
    return res;
}

double helstrom_success(const qsim::DensityOperator& a, const qsim::DensityOperator& b) {
    return 0.5 + 0.5 * qsim::trace_distance(a, b);
}

qsim::PureState discrimination_family_state(int n, double eps, int qubit_cap) {
    if (eps < 0.0 || eps >= 1.0) throw PreconditionError("discrimination_family_state: eps in [0,1)");
    const qsim::PureState even = qsim::phi_basis_state(n, 0, qubit_cap);
    const qsim::PureState odd = qsim::phi_basis_state(n, 1, qubit_cap);

    // asymmetric direction: |10...0> orthogonalized against the basis pair
    std::vector<cplx> asym(even.dim(), cplx{0.0, 0.0});
    const std::uint64_t pivot = 1ull << (n - 1);
    asym[pivot] = 1.0;
    {
        const cplx c0 = std::conj(even.amplitude(pivot));
        const cplx c1 = std::conj(odd.amplitude(pivot));
        double norm2 = 0.0;
        for (std::size_t i = 0; i < asym.size(); ++i) {
            asym[i] -= c0 * even.amplitude(i) + c1 * odd.amplitude(i);
            norm2 += std::norm(asym[i]);
        }
        for (auto& a : asym) a /= std::sqrt(norm2);
    }

    const double alpha = std::pow(1.0 - eps * eps, 0.25);
    const double beta = std::sqrt(std::max(0.0, 1.0 - std::sqrt(1.0 - eps * eps)));
    const double w_sym = std::sqrt(3.0) / 2.0;
    const double w_asym = 0.5;
    std::vector<cplx> amps(even.dim());
    for (std::size_t i = 0; i < amps.size(); ++i) {
        amps[i] = alpha * even.amplitude(i) +
                  beta * (w_sym * odd.amplitude(i) + w_asym * asym[i]);
    }
    qsim::PureState out(n, std::move(amps));
    return out;
}

namespace {

std::vector<int> honest_complement(int n, const std::vector<int>& coalition) {
    std::vector<int> honest;
    for (int q = 0; q < n; ++q) {
        if (std::find(coalition.begin(), coalition.end(), q) == coalition.end()) honest.push_back(q);
    }
    return honest;
}

void check_coalition(int n, const std::vector<int>& coalition) {
    if (coalition.empty()) throw PreconditionError("coalition must be nonempty");
    if (static_cast<int>(coalition.size()) >= n - 1) {
        throw PreconditionError("coalition must leave at least two honest agents");
    }
    for (int q : coalition) {
        if (q < 0 || q >= n) throw PreconditionError("coalition member out of range");
    }
}

/// Block-diagonal view state for voter i: classical honest-outcome register
/// tensored with the coalition's conditional state.
Eigen::MatrixXcd view_state_matrix(const qsim::PureState& transformed, int n,
                                   const std::vector<int>& honest,
                                   const std::vector<int>& coalition) {
    const int h = static_cast<int>(honest.size());
    const int c = static_cast<int>(coalition.size());
    const Eigen::Index dim = static_cast<Eigen::Index>(1ull << (h + c));
    const std::uint64_t dc = 1ull << c;
    Eigen::MatrixXcd sigma = Eigen::MatrixXcd::Zero(dim, dim);

    std::vector<cplx> cond(dc);
    for (std::uint64_t y = 0; y < (1ull << h); ++y) {
        std::fill(cond.begin(), cond.end(), cplx{0.0, 0.0});
        for (std::uint64_t i = 0; i < transformed.dim(); ++i) {
            std::uint64_t yy = 0;
            for (int j = 0; j < h; ++j) {
                yy = (yy << 1) | static_cast<std::uint64_t>(qsim::index_bit(i, n, honest[static_cast<std::size_t>(j)]));
            }
            if (yy != y) continue;
            std::uint64_t z = 0;
            for (int j = 0; j < c; ++j) {
                z = (z << 1) | static_cast<std::uint64_t>(qsim::index_bit(i, n, coalition[static_cast<std::size_t>(j)]));
            }
            cond[z] = transformed.amplitude(i);
        }
        const Eigen::Index base = static_cast<Eigen::Index>(y * dc);
        for (std::uint64_t za = 0; za < dc; ++za) {
            for (std::uint64_t zb = 0; zb < dc; ++zb) {
                sigma(base + static_cast<Eigen::Index>(za), base + static_cast<Eigen::Index>(zb)) =
                    cond[za] * std::conj(cond[zb]);
            }
        }
    }
    return sigma;
}

} // namespace

std::vector<qsim::DensityOperator> coalition_reduced_family(const qsim::PureState& psi,
                                                            const std::vector<int>& coalition) {
    const int n = psi.n_qubits();
    check_coalition(n, coalition);
    const auto honest = honest_complement(n, coalition);
    std::vector<qsim::DensityOperator> family;
    family.reserve(honest.size());
    for (int voter : honest) {
        family.push_back(qsim::partial_trace(qsim::voter_transformed(psi, voter), coalition));
    }
    return family;
}

std::vector<qsim::DensityOperator> coalition_view_family(const qsim::PureState& psi,
                                                         const std::vector<int>& coalition) {
    const int n = psi.n_qubits();
    check_coalition(n, coalition);
    const auto honest = honest_complement(n, coalition);
    std::vector<qsim::DensityOperator> family;
    family.reserve(honest.size());
    for (int voter : honest) {
        family.emplace_back(view_state_matrix(qsim::voter_transformed(psi, voter), n, honest, coalition));
    }
    return family;
}

CoalitionGuesser::CoalitionGuesser(int n, double eps, std::vector<int> coalition, int qubit_cap)
    : n_(n), coalition_(std::move(coalition)) {
    std::sort(coalition_.begin(), coalition_.end());
    check_coalition(n, coalition_);
    honest_ = honest_complement(n, coalition_);

    const qsim::PureState psi = discrimination_family_state(n, eps, qubit_cap);
    const auto family = coalition_view_family(psi, coalition_);
    const int h = static_cast<int>(honest_.size());
    std::vector<Eigen::MatrixXcd> rho;
    rho.reserve(family.size());
    for (const auto& f : family) rho.push_back(f.matrix());

    bool pseudo = false;
    const auto povm = pgm_elements(rho, std::vector<double>(family.size(), 1.0 / family.size()), &pseudo);

    const std::uint64_t dc = 1ull << coalition_.size();
    povm_.resize(1ull << h);
    for (std::uint64_t y = 0; y < povm_.size(); ++y) {
        povm_[y].reserve(povm.size());
        const Eigen::Index base = static_cast<Eigen::Index>(y * dc);
        for (const auto& p : povm) {
            povm_[y].push_back(p.block(base, base, static_cast<Eigen::Index>(dc),
                                       static_cast<Eigen::Index>(dc)));
        }
    }
}

int CoalitionGuesser::sample_guess(const Bits& honest_bits, const qsim::PureState& coalition_state,
                                   Rng& rng) {
    if (static_cast<int>(honest_bits.size()) != n_honest()) {
        throw PreconditionError("sample_guess: honest outcome length mismatch");
    }
    std::uint64_t y = 0;
    for (auto b : honest_bits) y = (y << 1) | static_cast<std::uint64_t>(b & 1);

    const auto& blocks = povm_.at(y);
    Eigen::VectorXcd phi(static_cast<Eigen::Index>(coalition_state.dim()));
    for (std::uint64_t i = 0; i < coalition_state.dim(); ++i) {
        phi(static_cast<Eigen::Index>(i)) = coalition_state.amplitude(i);
    }
    std::vector<double> probs(blocks.size());
    double total = 0.0;
    for (std::size_t j = 0; j < blocks.size(); ++j) {
        probs[j] = std::max(0.0, (phi.adjoint() * blocks[j] * phi).value().real());
        total += probs[j];
    }
    double r = rng.uniform() * total;
    std::size_t pick = probs.size() - 1;
    for (std::size_t j = 0; j + 1 < probs.size(); ++j) {
        r -= probs[j];
        if (r < 0.0) { pick = j; break; }
    }
    return honest_[pick];
}

AdversaryConfig AdversaryConfig::parse(const std::string& model) {
    AdversaryConfig cfg;
    if (model.empty() || model == "none") return cfg;
    if (model.rfind("coalition:", 0) == 0) {
        std::string list = model.substr(10);
        if (!list.empty() && list.front() == '[') list = list.substr(1);
        if (!list.empty() && list.back() == ']') list.pop_back();
        std::stringstream ss(list);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (!tok.empty()) cfg.coalition.push_back(static_cast<int>(parse_double(tok, "coalition id")));
        }
        if (cfg.coalition.empty()) throw ConfigError("coalition adversary needs at least one member");
        std::sort(cfg.coalition.begin(), cfg.coalition.end());
        return cfg;
    }
    if (model == "tamper:grow") {
        cfg.tamper = TamperKind::grow;
        return cfg;
    }
    if (model.rfind("tamper:flip:", 0) == 0) {
        const std::string coords = model.substr(12);
        const auto comma = coords.find(',');
        if (comma == std::string::npos) throw ConfigError("tamper:flip needs row,col");
        cfg.tamper = TamperKind::flip;
        cfg.flip_row = static_cast<int>(parse_double(coords.substr(0, comma), "flip row"));
        cfg.flip_col = static_cast<int>(parse_double(coords.substr(comma + 1), "flip col"));
        return cfg;
    }
    throw ConfigError("unknown adversary model '" + model + "'");
}

bool AdversaryConfig::in_coalition(int agent) const {
    return std::find(coalition.begin(), coalition.end(), agent) != coalition.end();
}

std::string AdversaryConfig::describe() const {
    if (passive()) return "none";
    std::ostringstream os;
    if (!coalition.empty()) {
        os << "coalition:[";
        for (std::size_t i = 0; i < coalition.size(); ++i) {
            if (i) os << ',';
            os << coalition[i];
        }
        os << ']';
    }
    if (tamper == TamperKind::grow) os << (os.str().empty() ? "" : "+") << "tamper:grow";
    if (tamper == TamperKind::flip) {
        os << (os.str().empty() ? "" : "+") << "tamper:flip:" << flip_row << ',' << flip_col;
    }
    if (guesser) os << (os.str().empty() ? "" : "+") << "pgm";
    return os.str();
}

} // namespace qev::adversary
