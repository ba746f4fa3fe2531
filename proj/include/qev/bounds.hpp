#pragma once

#include <iosfwd>
#include <string>

#include "qev/election.hpp"

namespace qev::harness {

/// Every closed-form security and correctness quantity derived from one
/// configuration. Raw (unclamped) values are retained next to the [0,1]
/// probability clamps.
struct BoundSet {
    // inputs echoed
    int n = 0;
    double epsilon = 0, delta = 0, eta = 0, lambda = 0;
    int gamma = 0, sigma = 0, candidates = 2, q_rounds = 1;

    double s = 0;                 // (1 - 2^-gamma)^sigma
    double m_raw = 0;             // un-rounded coin count
    int m_ceil = 0;               // conservative rounding (used by default)
    int m_floor = 0;              // round-down alternative
    int m_used = 0;               // ceiling unless overridden in the config
    double theorem1_bound_raw = 0;  // exp bound at m_used
    double theorem1_bound = 0;      // clamped
    double eps_tilde = 0;         // sqrt(eps^2 + eps^4)
    double sigma_h_raw = 0, sigma_h = 0;
    double gamma_threshold = 0;   // (1+lambda)(eps(1-eta)+eta)
    double sigma_d_raw = 0, sigma_d = 0;
    double zeta_raw = 0, zeta = 0;
    double eps_star = 0;
    double sigma_h_star_raw = 0, sigma_h_star = 0;
    double zeta_star_raw = 0, zeta_star = 0;
    double zeta_tilde_raw = 0, zeta_tilde = 0;

    /// True when any clamp actually changed a value.
    bool clamped() const;

    void print(std::ostream& os) const;
    std::string record_line() const;
};

/// Evaluate every closed form for the configuration. Parameter-domain
/// violations raise ConfigError.
BoundSet compute_bounds(const election::ElectionConfig& config);

// Individual closed forms (pure functions used by the grids and tests).
double theorem1_bound(int m, int n, double epsilon, double delta);
double eps_tilde(double epsilon);
double sigma_h(int n, double epsilon, double s);
double gamma_threshold(double epsilon, double eta, double lambda);
double sigma_d(int n, double gamma_thresh, double s);
double zeta(int n, double epsilon, double eta);
double eps_star(double epsilon, int digits);
double zeta_star(double zeta_value, int digits);

} // namespace qev::harness
