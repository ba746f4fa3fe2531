#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "qev/errors.hpp"
#include "qev/qsim.hpp"
#include "qev/verify.hpp"
#include "test_util.hpp"

using namespace qev;
using qsim::cplx;
using qsim::PureState;

namespace {

constexpr double kPi = std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

PureState apply_2x2_chain(PureState s, int qubit, const std::vector<std::array<cplx, 4>>& gates) {
    for (const auto& g : gates) s.apply_single_qubit(qubit, g);
    return s;
}

} // namespace

TEST_CASE("ghz_state amplitudes") {
    const auto g1 = qsim::ghz_state(1);
    REQUIRE(std::abs(g1.amplitude(0) - kInvSqrt2) < 1e-12);
    REQUIRE(std::abs(g1.amplitude(1) - kInvSqrt2) < 1e-12);

    const auto g2 = qsim::ghz_state(2);
    REQUIRE(std::abs(g2.amplitude(0) - kInvSqrt2) < 1e-12);
    REQUIRE(std::abs(g2.amplitude(1)) == 0.0);
    REQUIRE(std::abs(g2.amplitude(2)) == 0.0);
    REQUIRE(std::abs(g2.amplitude(3) - kInvSqrt2) < 1e-12);

    const auto g4 = qsim::ghz_state(4);
    for (std::uint64_t i = 0; i < 16; ++i) {
        if (i == 0 || i == 15) {
            REQUIRE(std::abs(g4.amplitude(i) - kInvSqrt2) < 1e-12);
        } else {
            REQUIRE(std::abs(g4.amplitude(i)) == 0.0);
        }
    }
}

TEST_CASE("ghz_state enforces the qubit cap, naming it") {
    REQUIRE_THROWS_AS(qsim::ghz_state(17), ResourceLimitError);
    try {
        qsim::ghz_state(17);
    } catch (const ResourceLimitError& e) {
        REQUIRE(std::string(e.what()).find("16") != std::string::npos);
    }
    REQUIRE_THROWS_AS(qsim::ghz_state(9, 8), ResourceLimitError);
    REQUIRE_THROWS_AS(qsim::ghz_state(0), PreconditionError);
}

TEST_CASE("phi basis state matches the explicit per-qubit construction") {
    // Hadamard then sqrt(Z), per qubit, applied to the GHZ state.
    const std::array<cplx, 4> hadamard = {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2};
    const std::array<cplx, 4> sqrt_z = {cplx{1, 0}, 0, 0, cplx{0, 1}};
    for (int n = 1; n <= 4; ++n) {
        PureState rotated = qsim::ghz_state(n);
        for (int q = 0; q < n; ++q) {
            rotated = apply_2x2_chain(std::move(rotated), q, {hadamard, sqrt_z});
        }
        const auto phi0 = qsim::phi_basis_state(n, 0);
        REQUIRE(std::abs(rotated.inner_product(phi0)) ==
                doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("phi basis pair is orthogonal") {
    const auto p0 = qsim::phi_basis_state(3, 0);
    const auto p1 = qsim::phi_basis_state(3, 1);
    REQUIRE(std::abs(p0.inner_product(p1)) < 1e-12);
}

TEST_CASE("voter transform maps the basis pair onto each other") {
    for (int agent = 0; agent < 3; ++agent) {
        auto s = qsim::phi_basis_state(3, 0);
        qsim::voter_transform(s, agent);
        const auto p1 = qsim::phi_basis_state(3, 1);
        // s == +phi1 exactly
        REQUIRE(std::abs(s.inner_product(p1) - cplx{1, 0}) < 1e-12);

        auto t = qsim::phi_basis_state(3, 1);
        qsim::voter_transform(t, agent);
        const auto p0 = qsim::phi_basis_state(3, 0);
        REQUIRE(std::abs(t.inner_product(p0) - cplx{-1, 0}) < 1e-12);
    }
}

TEST_CASE("voter transform applied twice negates the state") {
    Rng rng(test::kSeed);
    auto s = qsim::state_at_trace_distance(3, 0.4, qsim::canonical_far_direction(3));
    const auto original = s;
    qsim::voter_transform(s, 1);
    qsim::voter_transform(s, 1);
    REQUIRE(std::abs(s.inner_product(original) - cplx{-1, 0}) < 1e-12);
    REQUIRE_THROWS_AS(qsim::voter_transform(s, 3), PreconditionError);
}

TEST_CASE("state_at_trace_distance endpoints and overlap") {
    const auto dir = qsim::canonical_far_direction(4);
    const auto ghz = qsim::ghz_state(4);

    const auto s0 = qsim::state_at_trace_distance(4, 0.0, dir);
    REQUIRE(std::abs(s0.inner_product(ghz)) == doctest::Approx(1.0).epsilon(1e-12));

    const auto s1 = qsim::state_at_trace_distance(4, 1.0, dir);
    REQUIRE(std::abs(s1.inner_product(dir)) == doctest::Approx(1.0).epsilon(1e-12));

    const auto s = qsim::state_at_trace_distance(4, 0.3, dir);
    const double recomputed = std::sqrt(1.0 - std::norm(s.inner_product(ghz)));
    REQUIRE(recomputed == doctest::Approx(0.3).epsilon(1e-10));

    // non-orthogonal direction is rejected
    REQUIRE_THROWS_AS(qsim::state_at_trace_distance(4, 0.3, ghz), PreconditionError);
}

TEST_CASE("state_at_overlap_amp sets the GHZ amplitude directly") {
    const auto dir = qsim::canonical_far_direction(3);
    const auto s = qsim::state_at_overlap_amp(3, 0.9, dir);
    const auto ghz = qsim::ghz_state(3);
    const cplx overlap = ghz.inner_product(s);
    REQUIRE(overlap.real() == doctest::Approx(0.9).epsilon(1e-12));
    REQUIRE(std::abs(overlap.imag()) < 1e-12);
}

TEST_CASE("rotated measurement satisfies the parity identity on the ideal state") {
    Rng rng(test::kSeed);
    const auto zero = qsim::MeasurementAngles::from_thetas({0.0, 0.0, 0.0});
    for (int i = 0; i < 2000; ++i) {
        auto s = qsim::ghz_state(3);
        const auto bits = qsim::measure_all_rotated(s, zero, rng);
        REQUIRE(parity(bits) == 0);
    }
    const auto half = qsim::MeasurementAngles::from_thetas({kPi / 2, kPi / 2, 0.0});
    REQUIRE(half.parity_target == 1);
    for (int i = 0; i < 2000; ++i) {
        auto s = qsim::ghz_state(3);
        REQUIRE(parity(qsim::measure_all_rotated(s, half, rng)) == 1);
    }
}

TEST_CASE("rotated measurement of a product state gives independent fair bits") {
    Rng rng(test::kSeed + 1);
    const auto zero = qsim::MeasurementAngles::from_thetas({0.0, 0.0, 0.0});
    std::vector<std::uint64_t> counts(8, 0);
    const int trials = 40000;
    for (int i = 0; i < trials; ++i) {
        auto s = PureState::computational_basis(3, 0);
        ++counts[test::bits_word(qsim::measure_all_rotated(s, zero, rng))];
    }
    REQUIRE(stats::chi2_uniform(counts).p_value > 0.01);
}

TEST_CASE("measurement consumes the state") {
    Rng rng(test::kSeed);
    auto s = qsim::ghz_state(2);
    (void)qsim::measure_all_hadamard(s, rng);
    REQUIRE(s.spent());
    REQUIRE_THROWS_AS(qsim::measure_all_hadamard(s, rng), OneShotViolation);
}

TEST_CASE("angle-length mismatch is rejected") {
    Rng rng(test::kSeed);
    auto s = qsim::ghz_state(3);
    const auto two = qsim::MeasurementAngles::from_thetas({0.0, 0.0});
    REQUIRE_THROWS_AS(qsim::measure_all_rotated(s, two, rng), PreconditionError);
}

TEST_CASE("hadamard measurement of GHZ(2) returns 00 or 11 equally often") {
    Rng rng(test::kSeed + 2);
    int ones = 0;
    const int trials = 20000;
    for (int i = 0; i < trials; ++i) {
        auto s = qsim::ghz_state(2);
        const auto bits = qsim::measure_all_hadamard(s, rng);
        REQUIRE(bits[0] == bits[1]);
        ones += bits[0];
    }
    const double rate = static_cast<double>(ones) / trials;
    REQUIRE(test::abs_err(rate, 0.5) < 3.0 * stats::binom_std_error(0.5, trials));
}

TEST_CASE("hadamard measurement of GHZ(4) is uniform over even strings") {
    Rng rng(test::kSeed + 3);
    std::vector<std::uint64_t> counts(8, 0);
    const int trials = 20000;
    for (int i = 0; i < trials; ++i) {
        auto s = qsim::ghz_state(4);
        const auto bits = qsim::measure_all_hadamard(s, rng);
        const auto w = test::bits_word(bits);
        REQUIRE(test::outcome_parity(w, 4) == 0);
        // even strings enumerated by dropping the forced last bit
        ++counts[w >> 1];
    }
    REQUIRE(stats::chi2_uniform(counts).p_value > 0.01);
}

TEST_CASE("outcome distribution oracle values") {
    const auto zero2 = qsim::MeasurementAngles::from_thetas({0.0, 0.0});
    const auto d = qsim::outcome_distribution(qsim::ghz_state(2), zero2);
    REQUIRE(d[0] == doctest::Approx(0.5).epsilon(1e-12));
    REQUIRE(d[1] == doctest::Approx(0.0).epsilon(1e-12));
    REQUIRE(d[2] == doctest::Approx(0.0).epsilon(1e-12));
    REQUIRE(d[3] == doctest::Approx(0.5).epsilon(1e-12));

    const auto d1 = qsim::outcome_distribution(PureState::computational_basis(1, 0),
                                               qsim::MeasurementAngles::from_thetas({0.0}));
    REQUIRE(d1[0] == doctest::Approx(0.5));
    REQUIRE(d1[1] == doctest::Approx(0.5));
}

TEST_CASE("sampler agrees with the distribution oracle in total variation") {
    Rng rng(test::kSeed + 4);
    const int n = 4;
    const auto dir = qsim::canonical_far_direction(n);
    const auto state = qsim::state_at_trace_distance(n, 0.5, dir);
    const auto angles = qsim::MeasurementAngles::from_thetas({0.3, 1.1, 0.9, kPi - 2.3 + kPi});
    const auto probs = qsim::outcome_distribution(state, angles);

    std::vector<std::uint64_t> counts(16, 0);
    const int trials = 100000;
    for (int i = 0; i < trials; ++i) {
        auto s = state;
        ++counts[test::bits_word(qsim::measure_all_rotated(s, angles, rng))];
    }
    double tv = 0.0;
    for (int i = 0; i < 16; ++i) {
        tv += std::fabs(static_cast<double>(counts[i]) / trials - probs[i]);
    }
    tv /= 2.0;
    REQUIRE(tv < 0.02);
}

TEST_CASE("partial trace marginals") {
    const auto bell = qsim::partial_trace(qsim::ghz_state(2), {0});
    REQUIRE(bell.dim() == 2);
    REQUIRE(bell.matrix()(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
    REQUIRE(bell.matrix()(1, 1).real() == doctest::Approx(0.5).epsilon(1e-12));
    REQUIRE(std::abs(bell.matrix()(0, 1)) < 1e-12);

    const auto zz = qsim::partial_trace(PureState::computational_basis(2, 0), {1});
    REQUIRE(zz.matrix()(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(zz.matrix()(1, 1).real() == doctest::Approx(0.0).epsilon(1e-12));

    const auto two = qsim::partial_trace(qsim::ghz_state(3), {0, 1});
    REQUIRE(two.dim() == 4);
    REQUIRE(two.matrix()(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
    REQUIRE(two.matrix()(3, 3).real() == doctest::Approx(0.5).epsilon(1e-12));
    REQUIRE(std::abs(two.matrix()(0, 3)) < 1e-12);
    REQUIRE(std::abs(two.matrix()(1, 1)) < 1e-12);

    REQUIRE_THROWS_AS(qsim::partial_trace(qsim::ghz_state(3), {}), PreconditionError);
    REQUIRE_THROWS_AS(qsim::partial_trace(qsim::ghz_state(3), {3}), PreconditionError);
}

TEST_CASE("GHZ marginals have purity one half on every strict subset") {
    for (int n = 2; n <= 5; ++n) {
        const auto g = qsim::ghz_state(n);
        for (int k = 1; k < n; ++k) {
            std::vector<int> keep;
            for (int q = 0; q < k; ++q) keep.push_back(q);
            REQUIRE(qsim::partial_trace(g, keep).purity() == doctest::Approx(0.5).epsilon(1e-10));
        }
    }
}

TEST_CASE("ghz fidelity squared") {
    REQUIRE(qsim::ghz_fidelity_sq(qsim::ghz_state(4)) == doctest::Approx(1.0).epsilon(1e-12));

    auto pulled = qsim::phi_basis_state(4, 1);
    qsim::apply_frame_rotation(pulled, /*inverse=*/true);
    REQUIRE(qsim::ghz_fidelity_sq(pulled) == doctest::Approx(0.0).epsilon(1e-12));

    const auto far = qsim::state_at_trace_distance(4, 0.6, qsim::canonical_far_direction(4));
    REQUIRE(qsim::ghz_fidelity_sq(far) == doctest::Approx(0.64).epsilon(1e-10));
}

TEST_CASE("frame rotation maps GHZ onto the even basis state and back") {
    auto s = qsim::ghz_state(5);
    qsim::apply_frame_rotation(s);
    REQUIRE(std::abs(s.inner_product(qsim::phi_basis_state(5, 0))) ==
            doctest::Approx(1.0).epsilon(1e-12));
    qsim::apply_frame_rotation(s, /*inverse=*/true);
    REQUIRE(std::abs(s.inner_product(qsim::ghz_state(5))) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("norm is preserved under long gate chains") {
    Rng rng(test::kSeed + 5);
    auto s = qsim::ghz_state(4);
    for (int i = 0; i < 1000; ++i) {
        qsim::voter_transform(s, static_cast<int>(rng.uniform_int(4)));
    }
    REQUIRE(test::abs_err(s.norm_sq(), 1.0) < 1e-10);
}

TEST_CASE("verification parity identity holds for every honest angle draw") {
    Rng rng(test::kSeed + 6);
    for (int n : {2, 3, 4, 5}) {
        for (int i = 0; i < 2500; ++i) {
            const auto angles = verify::generate_angles(n, rng);
            auto s = qsim::ghz_state(n);
            REQUIRE(parity(qsim::measure_all_rotated(s, angles, rng)) == angles.parity_target);
        }
    }
}

TEST_CASE("measurement angles validate the pi-multiple constraint") {
    REQUIRE_THROWS_AS(qsim::MeasurementAngles::from_thetas({0.3, 0.2}), PreconditionError);
    const auto ok = qsim::MeasurementAngles::from_thetas({kPi / 2, kPi / 2});
    REQUIRE(ok.parity_target == 1);
}

TEST_CASE("subset computational measurement collapses consistently") {
    Rng rng(test::kSeed + 7);
    // Bell pair in the computational basis: measuring one qubit forces the other.
    int ones = 0;
    const int trials = 4000;
    for (int i = 0; i < trials; ++i) {
        auto s = qsim::ghz_state(2);
        PureState rest = PureState::computational_basis(1, 0);
        const auto bits = qsim::measure_qubits_computational(s, {0}, rng, &rest);
        ones += bits[0];
        REQUIRE(std::abs(rest.amplitude(bits[0])) == doctest::Approx(1.0).epsilon(1e-12));
    }
    const double rate = static_cast<double>(ones) / trials;
    REQUIRE(test::abs_err(rate, 0.5) < 3.0 * stats::binom_std_error(0.5, trials));
}

TEST_CASE("pure state invariants are validated") {
    REQUIRE_THROWS_AS(PureState(2, std::vector<cplx>(3, 0.5)), PreconditionError);
    REQUIRE_THROWS_AS((PureState(1, {cplx{1, 0}, cplx{1, 0}})), PreconditionError);
}

TEST_CASE("state dump emits one event per nonzero amplitude") {
    VecSink sink;
    Transcript tr = Transcript::with_sink(sink);
    qsim::dump_state(qsim::ghz_state(3), tr, "g3");
    REQUIRE(sink.events.size() == 2);
    REQUIRE(sink.events[0].kind == "state_amp");
    REQUIRE(sink.events[0].payload.rfind("g3:0,", 0) == 0);
}
