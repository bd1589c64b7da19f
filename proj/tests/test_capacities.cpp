#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "sc/capacities.hpp"

using namespace sc;
using namespace test_helpers;

namespace {

ensemble uniform_basis_ensemble(int d) {
    std::vector<double> p(d, 1.0 / d);
    std::vector<density_operator> s;
    for (int i = 0; i < d; ++i) s.push_back(density_operator::pure(basis_ket(d, i)));
    return ensemble(p, s);
}

budget quick() {
    budget b;
    b.restarts = 6;
    return b;
}

}  // namespace

TEST_CASE("holevo_of_ensemble: closed forms") {
    CHECK(holevo_of_ensemble(uniform_basis_ensemble(2), identity_channel(2)) ==
          doctest::Approx(1.0).epsilon(1e-10));

    rng gen(1);
    density_operator omega = random_state(2, 2, gen);
    CHECK(std::abs(holevo_of_ensemble(uniform_basis_ensemble(2), replacement_channel(omega))) <=
          1e-9);

    // BSC embedding with uniform classical inputs: 1 - h2(p)
    CHECK(holevo_of_ensemble(uniform_basis_ensemble(2), bsc_channel(0.2)) ==
          doctest::Approx(1.0 - binary_entropy(0.2)).epsilon(1e-9));
}

TEST_CASE("holevo_information: identity, depolarizing, BSC") {
    capacity_result id = holevo_information(identity_channel(2), quick());
    CHECK(std::abs(id.value - 1.0) <= 1e-5);
    CHECK(id.gap_estimate <= 1e-4);

    for (double lam : {0.3, 0.6}) {
        capacity_result dep = holevo_information(depolarizing_channel(lam), quick());
        const double expect = 1.0 - binary_entropy(0.5 * (1.0 + lam));
        CHECK(std::abs(dep.value - expect) <= 1e-4);
    }

    capacity_result bsc = holevo_information(bsc_channel(0.1), quick());
    CHECK(std::abs(bsc.value - (1.0 - binary_entropy(0.1))) <= 1e-5);
}

TEST_CASE("information_radius: replacement, identity, equals chi") {
    rng gen(2);
    density_operator omega = random_state(2, 2, gen);
    capacity_result rep = information_radius(replacement_channel(omega), quick());
    CHECK(std::abs(rep.value) <= 1e-7);
    CHECK(max_abs(rep.sigma_witness->op - omega.op) <= 1e-6);

    capacity_result id = information_radius(identity_channel(2), quick());
    CHECK(std::abs(id.value - 1.0) <= 1e-5);
    CHECK(max_abs(id.sigma_witness->op - 0.5 * complex_matrix::identity(2)) <= 1e-4);

    for (std::uint64_t seed : {11u, 12u}) {
        rng g2(seed);
        kraus_channel ch = random_channel(2, 2, 3, g2);
        const double k = information_radius(ch, quick()).value;
        const double chi = holevo_information(ch, quick()).value;
        CHECK(std::abs(k - chi) <= 2e-4);
    }
}

TEST_CASE("alpha_information_radius: closed forms and limit") {
    // noiseless classical bit: 1.0 for every order
    kraus_channel bit = classical_channel({{1.0, 0.0}, {0.0, 1.0}});
    for (double alpha : {1.5, 2.0, 8.0})
        CHECK(std::abs(alpha_information_radius(bit, alpha, quick()).value - 1.0) <= 1e-5);

    rng gen(3);
    density_operator omega = random_state(2, 2, gen);
    CHECK(std::abs(alpha_information_radius(replacement_channel(omega), 2.0, quick()).value) <=
          1e-6);

    // K_alpha decreases toward K as alpha -> 1+
    kraus_channel ch = random_channel(2, 2, 3, gen);
    const double k = information_radius(ch, quick()).value;
    double prev = 1e300;
    for (double alpha : {1.5, 1.1, 1.01, 1.001}) {
        const double ka = alpha_information_radius(ch, alpha, quick()).value;
        CHECK(ka <= prev + 1e-5);
        prev = ka;
    }
    CHECK(std::abs(prev - k) <= 1e-3);
}

TEST_CASE("alpha_holevo: both routes agree on closed forms") {
    rng gen(4);
    density_operator omega = random_state(2, 2, gen);
    capacity_result rep = alpha_holevo(replacement_channel(omega), 2.0, quick());
    CHECK(std::abs(rep.value) <= 1e-6);
    CHECK(std::abs(rep.lower_bound) <= 1e-6);

    kraus_channel bit = classical_channel({{1.0, 0.0}, {0.0, 1.0}});
    capacity_result nb = alpha_holevo(bit, 2.0, quick());
    CHECK(std::abs(nb.value - 1.0) <= 1e-5);
    CHECK(std::abs(nb.lower_bound - 1.0) <= 5e-3);

    // EB qubit channel: ensemble route lower-bounds the radius route
    capacity_result dep = alpha_holevo(depolarizing_channel(0.25), 2.0, quick());
    CHECK(dep.lower_bound <= dep.value + 1e-4);
    CHECK(dep.lower_bound >= dep.value - 5e-3);
}

TEST_CASE("alpha_holevo: monotone in alpha and above chi") {
    rng gen(5);
    kraus_channel ch = random_channel(2, 2, 3, gen);
    const double chi = holevo_information(ch, quick()).value;
    double prev = -1e300;
    for (double alpha : {1.2, 1.7, 2.5, 4.0}) {
        const double v = alpha_information_radius(ch, alpha, quick()).value;
        CHECK(v >= prev - 1e-4);
        CHECK(v >= chi - 1e-4);
        prev = v;
    }
}

TEST_CASE("strong_converse_exponent: noiseless bit at rate 2") {
    kraus_channel bit = classical_channel({{1.0, 0.0}, {0.0, 1.0}});
    exponent_curve curve = strong_converse_exponent(bit, 2.0, {}, quick());
    // chi_alpha is identically 1, so the grid value alone reaches (31/32)(2-1)
    CHECK(curve.exponent >= 0.96);
    // endpoint extension pushes the term toward its supremum R - 1 = 1
    CHECK(curve.exponent <= 1.0 + 1e-9);
    CHECK(curve.exponent >= 1.0 - 1e-5);
    // chi_alpha samples are non-decreasing within optimizer slack
    for (size_t i = 1; i < curve.chi_alphas.size(); ++i)
        CHECK(curve.chi_alphas[i] >= curve.chi_alphas[i - 1] - 1e-4);
}

TEST_CASE("strong_converse_exponent: trivial at rate 0, positive above capacity") {
    rng gen(6);
    kraus_channel ch = random_channel(2, 2, 3, gen);
    exponent_curve zero = strong_converse_exponent(ch, 0.0, {1.5, 2.0, 3.0}, quick());
    CHECK(zero.exponent <= 0.0 + 1e-12);

    kraus_channel dep = depolarizing_channel(0.25);
    const double chi = holevo_information(dep, quick()).value;
    exponent_curve curve = strong_converse_exponent(dep, chi + 0.1, {}, quick());
    CHECK(curve.exponent > 0.0);

    // exponent non-decreasing in the rate
    exponent_curve higher = strong_converse_exponent(dep, chi + 0.3, {}, quick());
    CHECK(higher.exponent >= curve.exponent - 1e-9);
}

TEST_CASE("additivity_check: replacement, identity, EB depolarizing") {
    rng gen(7);
    density_operator omega = random_state(2, 2, gen);
    additivity_report rep = additivity_check(replacement_channel(omega), quick());
    CHECK(std::abs(rep.chi_single) <= 1e-7);
    CHECK(std::abs(rep.chi_tensor_lower) <= 1e-6);
    CHECK(rep.lower_ok);

    additivity_report id = additivity_check(identity_channel(2), quick());
    CHECK(id.chi_tensor_lower >= 2.0 - 1e-3);
    CHECK(id.lower_ok);

    additivity_report dep = additivity_check(depolarizing_channel(0.2), quick());
    CHECK(dep.lower_ok);
    CHECK(dep.additive_within_tol);

    CHECK_THROWS_AS(additivity_check(identity_channel(3), quick()), dimension_cap_error);
}
