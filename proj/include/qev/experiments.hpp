#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qev/anoncast.hpp"
#include "qev/bounds.hpp"
#include "qev/election.hpp"

namespace qev::harness {

/// Result of one named experiment. The verdict is a pure function of the
/// stored fields: the estimate must respect the bound direction within three
/// standard errors.
struct ExperimentReport {
    std::string id;
    std::uint64_t trials = 0;
    double estimate = 0.0;
    double std_error = 0.0;
    double bound = 0.0;
    std::string direction = "le";  // le | ge | eq
    bool pass = false;
    double runtime_sec = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> extras;

    bool recompute_verdict() const;
    std::string record_line() const;
    void print(std::ostream& os) const;
};

/// Exact Pr[anonymous OR outputs 0 | j agents input 1], by brute-force
/// enumeration of the per-repetition coin patterns. Independent of the
/// message-passing implementation.
double or_zero_probability_oracle(int n_agents, int j_ones, const anoncast::OrParams& params);

/// Monte Carlo check of the no-abort bound: voting rounds driven with the
/// fixed eps-far source, empirical Pr[no abort] against exp(-2^M (eps^2-4d)^2
/// / (16 N eps^2)). `ideal_control` instead runs the ideal source and checks
/// the abort rate is zero.
ExperimentReport experiment_theorem1(const election::ElectionConfig& config, std::uint64_t trials,
                                     int workers = 1, bool ideal_control = false);

/// Row-parity error rate of voting rounds with the eps-far source, against
/// the trace-distance bound; also reports the exact oracle error probability.
ExperimentReport experiment_theorem3(const election::ElectionConfig& config, std::uint64_t trials,
                                     int workers = 1);

/// Exact identity-discrimination sweep: PGM success on the coalition view
/// family over N in [3,6], eps in {0, 0.3, 0.6}, coalition sizes 1..N-2,
/// against 1/H + sqrt(eps^2+eps^4); plus the two-state optimum sandwich.
ExperimentReport experiment_theorem2_grid();

/// In-protocol PGM identity guessing across full election rounds (index
/// assignment, immediate voting, objection phase). Reports the empirical
/// guess rate against 1/H + eps~, the vote-guess advantage against zeta, and,
/// when config.amplification_rounds > 1, the joint-recovery independence
/// check across sub-elections.
ExperimentReport experiment_privacy(const election::ElectionConfig& config,
                                    const std::vector<int>& coalition, std::uint64_t trials);

/// Completeness (acceptance rate >= sigma_H with the eps-far source) or
/// soundness (acceptance rate <= sigma_D with ceil(N*gamma) rows corrupted).
ExperimentReport experiment_correctness(const election::ElectionConfig& config,
                                        std::uint64_t trials, bool soundness, int workers = 1);

/// Empirical Pr[OR outputs 0] with j dissenting inputs against both the
/// enumeration oracle (chi-squared agreement) and the S^j bound.
ExperimentReport experiment_logicalor(int n_agents, const anoncast::OrParams& params, int j_ones,
                                      std::uint64_t trials, int workers = 1);

/// Reproduction of the headline worked-example numbers. With `full` set, also
/// runs voting rounds at the full coin count and reports the verification
/// cost per vote.
std::vector<ExperimentReport> experiment_example(bool full, std::uint64_t seed);

/// Deterministic parallel map over trial indices; each trial gets its own
/// generator stream so results do not depend on the worker count.
std::vector<double> run_trials(std::uint64_t trials, int workers, const Rng& root,
                               const std::function<double(std::uint64_t, Rng&)>& fn);

} // namespace qev::harness
