#include "qev/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace qev::harness {

namespace {
double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }
} // namespace

double theorem1_bound(int m, int n, double epsilon, double delta) {
    const double gap = epsilon * epsilon - 4.0 * delta;
    const double exponent = std::ldexp(1.0, m) * gap * gap / (16.0 * n * epsilon * epsilon);
    return std::exp(-exponent);
}

double eps_tilde(double epsilon) {
    return std::sqrt(epsilon * epsilon + std::pow(epsilon, 4.0));
}

double sigma_h(int n, double epsilon, double s) {
    return std::pow(1.0 - epsilon * (1.0 - s), n);
}

double gamma_threshold(double epsilon, double eta, double lambda) {
    return (1.0 + lambda) * (epsilon * (1.0 - eta) + eta);
}

double sigma_d(int n, double gamma_thresh, double s) {
    return std::pow(s, n * gamma_thresh);
}

double zeta(int n, double epsilon, double eta) {
    const double keep = std::pow(1.0 - eta, n);
    return keep * epsilon * std::sqrt(1.0 + epsilon * epsilon) + (1.0 - keep);
}

double eps_star(double epsilon, int digits) {
    return 1.0 - std::pow(1.0 - epsilon, digits);
}

double zeta_star(double zeta_value, int digits) {
    return 1.0 - std::pow(1.0 - zeta_value, digits);
}

BoundSet compute_bounds(const election::ElectionConfig& config) {
    config.validate();
    BoundSet b;
    b.n = config.n_agents;
    b.epsilon = config.epsilon;
    b.delta = config.delta;
    b.eta = config.eta;
    b.lambda = config.lambda;
    b.gamma = config.gamma;
    b.sigma = config.sigma;
    b.candidates = config.candidates;
    b.q_rounds = config.amplification_rounds;

    b.s = config.security_param();
    b.m_raw = election::coin_count_raw(config.n_agents, config.epsilon, config.delta, config.eta);
    b.m_ceil = std::max(static_cast<int>(std::ceil(b.m_raw)), 0);
    b.m_floor = std::max(static_cast<int>(std::floor(b.m_raw)), 0);
    b.m_used = config.coin_count();

    b.theorem1_bound_raw = theorem1_bound(b.m_used, b.n, b.epsilon, b.delta);
    b.theorem1_bound = clamp01(b.theorem1_bound_raw);
    b.eps_tilde = eps_tilde(b.epsilon);
    b.sigma_h_raw = sigma_h(b.n, b.epsilon, b.s);
    b.sigma_h = clamp01(b.sigma_h_raw);
    b.gamma_threshold = gamma_threshold(b.epsilon, b.eta, b.lambda);
    b.sigma_d_raw = sigma_d(b.n, b.gamma_threshold, b.s);
    b.sigma_d = clamp01(b.sigma_d_raw);
    b.zeta_raw = zeta(b.n, b.epsilon, b.eta);
    b.zeta = clamp01(b.zeta_raw);

    const int digits = config.digits();
    b.eps_star = eps_star(b.epsilon, digits);
    b.sigma_h_star_raw = sigma_h(b.n, b.eps_star, b.s);
    b.sigma_h_star = clamp01(b.sigma_h_star_raw);
    b.zeta_star_raw = zeta_star(b.zeta_raw, digits);
    b.zeta_star = clamp01(b.zeta_star_raw);
    b.zeta_tilde_raw = std::pow(b.zeta_raw, b.q_rounds);
    b.zeta_tilde = clamp01(b.zeta_tilde_raw);
    return b;
}

bool BoundSet::clamped() const {
    return theorem1_bound != theorem1_bound_raw || sigma_h != sigma_h_raw ||
           sigma_d != sigma_d_raw || zeta != zeta_raw || sigma_h_star != sigma_h_star_raw ||
           zeta_star != zeta_star_raw || zeta_tilde != zeta_tilde_raw;
}

void BoundSet::print(std::ostream& os) const {
    os << std::setprecision(6);
    os << "parameters: N=" << n << " eps=" << epsilon << " delta=" << delta << " eta=" << eta
       << " Gamma=" << gamma << " Sigma=" << sigma << " lambda=" << lambda
       << " K=" << candidates << " Q=" << q_rounds << "\n";
    os << "  S (anonymous-OR security)      = " << s << "\n";
    os << "  M raw                          = " << m_raw << "  (ceil " << m_ceil
       << ", floor " << m_floor << ", used " << m_used << ")\n";
    if (m_ceil != m_floor) {
        os << "    note: the coin-count formula is non-integer; the conservative ceiling is\n"
              "    used unless overridden, the round-down value is shown for comparison\n";
        os << "    no-abort bound at floor M=" << m_floor << "  = "
           << harness::theorem1_bound(m_floor, n, epsilon, delta) << "\n";
        os << "    no-abort bound at ceil  M=" << m_ceil << "  = "
           << harness::theorem1_bound(m_ceil, n, epsilon, delta) << "\n";
    }
    os << "  no-abort bound (at used M)     = " << theorem1_bound
       << (theorem1_bound != theorem1_bound_raw ? " [clamped]" : "") << "\n";
    os << "  eps~ = sqrt(eps^2+eps^4)       = " << eps_tilde << "\n";
    os << "  sigma_H (completeness)         = " << sigma_h << "\n";
    os << "  gamma (tally distortion)       = " << gamma_threshold << "\n";
    os << "  sigma_D (soundness)            = " << sigma_d << "\n";
    os << "  zeta (privacy)                 = " << zeta << "\n";
    os << "  eps* (multi-candidate)         = " << eps_star << "\n";
    os << "  sigma_H*                       = " << sigma_h_star << "\n";
    os << "  zeta*                          = " << zeta_star << "\n";
    os << "  zeta~ = zeta^Q                 = " << zeta_tilde << "\n";
}

std::string BoundSet::record_line() const {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "bounds n=" << n << " eps=" << epsilon << " delta=" << delta << " eta=" << eta
       << " gamma=" << gamma << " sigma=" << sigma << " lambda=" << lambda
       << " k=" << candidates << " q=" << q_rounds << " s=" << s << " m_raw=" << m_raw
       << " m_used=" << m_used << " t1=" << theorem1_bound << " eps_tilde=" << eps_tilde
       << " sigma_h=" << sigma_h << " gamma_t=" << gamma_threshold << " sigma_d=" << sigma_d
       << " zeta=" << zeta << " eps_star=" << eps_star << " sigma_h_star=" << sigma_h_star
       << " zeta_star=" << zeta_star << " zeta_tilde=" << zeta_tilde;
    return os.str();
}

} // namespace qev::harness
