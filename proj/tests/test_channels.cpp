#include <doctest.h>

#include <cmath>

#include "sc/channels.hpp"

using namespace sc;

namespace {

kraus_channel random_channel(int din, int dout, int env, rng& gen) {
    // Stinespring: isometry = first din columns of a Haar unitary on dout*env
    complex_matrix u = haar_random_unitary(dout * env, gen);
    std::vector<complex_matrix> ops;
    for (int k = 0; k < env; ++k) {
        complex_matrix op(dout, din);
        for (int a = 0; a < dout; ++a)
            for (int i = 0; i < din; ++i) op(a, i) = u(a * env + k, i);
        ops.push_back(std::move(op));
    }
    return kraus_channel(std::move(ops), din, dout);
}

density_operator bell_state() {
    std::vector<cplx> v = {1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0)};
    return density_operator::pure(v, {2, 2});
}

}  // namespace

TEST_CASE("apply: identity and replacement") {
    rng gen(1);
    density_operator rho(random_density_matrix(2, 2, gen), {2});
    density_operator out = apply(identity_channel(2), rho);
    CHECK(max_abs(out.op - rho.op) <= 1e-12);

    density_operator omega(random_density_matrix(2, 1, gen), {2});
    kraus_channel rep = replacement_channel(omega);
    density_operator out2 = apply(rep, rho);
    CHECK(max_abs(out2.op - omega.op) <= 1e-10);
}

TEST_CASE("apply via Kraus equals apply via Choi reconstruction") {
    rng gen(2);
    kraus_channel ch = random_channel(2, 2, 3, gen);
    kraus_channel rt = from_choi(to_choi(ch));
    density_operator rho(random_density_matrix(2, 2, gen), {2});
    CHECK(max_abs(apply(ch, rho).op - apply(rt, rho).op) <= 1e-9);
}

TEST_CASE("apply_on_subsystem: identity, replacement, embedding oracle") {
    rng gen(3);
    density_operator rho(random_density_matrix(8, 8, gen), {2, 2, 2});

    density_operator same = apply_on_subsystem(identity_channel(2), rho, 1);
    CHECK(max_abs(same.op - rho.op) <= 1e-12);

    // replacement on B of rho_AB -> rho_A (x) omega
    density_operator rho_ab(random_density_matrix(4, 4, gen), {2, 2});
    density_operator omega(random_density_matrix(2, 2, gen), {2});
    density_operator replaced = apply_on_subsystem(replacement_channel(omega), rho_ab, 1);
    complex_matrix expect = kron(partial_trace(rho_ab.op, {2, 2}, {0}), omega.op);
    CHECK(max_abs(replaced.op - expect) <= 1e-10);

    // embedding oracle: (I (x) K (x) I) built explicitly
    kraus_channel ch = random_channel(2, 3, 2, gen);
    density_operator out = apply_on_subsystem(ch, rho, 1);
    complex_matrix brute(2 * 3 * 2, 2 * 3 * 2);
    for (const auto& k : ch.ops) {
        complex_matrix big = kron(kron(complex_matrix::identity(2), k),
                                  complex_matrix::identity(2));
        brute = brute + big * rho.op * dagger(big);
    }
    CHECK(max_abs(out.op - brute) <= 1e-10);
    CHECK(out.dims == std::vector<int>{2, 3, 2});
}

TEST_CASE("to_choi: identity gives Bell, replacement gives I/d (x) omega") {
    choi_matrix c = to_choi(identity_channel(2));
    CHECK(max_abs(c.m - bell_state().op) <= 1e-12);

    rng gen(4);
    density_operator omega(random_density_matrix(2, 2, gen), {2});
    choi_matrix cr = to_choi(replacement_channel(omega));
    CHECK(max_abs(cr.m - kron(0.5 * complex_matrix::identity(2), omega.op)) <= 1e-10);
}

TEST_CASE("choi round-trip") {
    rng gen(5);
    for (int rep = 0; rep < 5; ++rep) {
        kraus_channel ch = random_channel(2, 2, 4, gen);
        choi_matrix c = to_choi(ch);
        choi_matrix c2 = to_choi(from_choi(c));
        CHECK(max_abs(c.m - c2.m) <= 1e-8);
    }
}

TEST_CASE("from_choi: rejects non-CPTP") {
    choi_matrix bad{partial_transpose(bell_state(), {2, 2}), 2, 2};
    CHECK_THROWS_AS(from_choi(bad), not_cptp_error);
}

TEST_CASE("is_entanglement_breaking: depolarizing family and identity") {
    CHECK(is_entanglement_breaking(depolarizing_channel(0.2)).verdict == eb_verdict::eb);
    CHECK(is_entanglement_breaking(depolarizing_channel(0.5)).verdict == eb_verdict::not_eb);
    CHECK(is_entanglement_breaking(identity_channel(2)).verdict == eb_verdict::not_eb);

    // bisection for the PPT boundary of the depolarizing family; bisect on the
    // sign of the min PT eigenvalue so the PPT tolerance does not bias lambda
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        if (is_entanglement_breaking(depolarizing_channel(mid)).choi_min_pt_eigenvalue >= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    CHECK(std::abs(0.5 * (lo + hi) - 1.0 / 3.0) <= 1e-9);
}

TEST_CASE("measure_prepare: dephasing action and replacement special case") {
    // POVM {|0><0|,|1><1|}, prepare the same: fully dephasing channel
    povm basis({outer(basis_ket(2, 0)), outer(basis_ket(2, 1))});
    measure_prepare_channel mp(basis, {density_operator::pure(basis_ket(2, 0)),
                                       density_operator::pure(basis_ket(2, 1))});
    CHECK(is_entanglement_breaking(mp).verdict == eb_verdict::eb);
    kraus_channel ch = measure_prepare_to_kraus(mp);
    rng gen(6);
    density_operator rho(random_density_matrix(2, 2, gen), {2});
    density_operator out = apply(ch, rho);
    CHECK(std::abs(out.op(0, 0).real() - rho.op(0, 0).real()) <= 1e-10);
    CHECK(std::abs(out.op(0, 1)) <= 1e-12);

    // single-element POVM {I}, prepare omega -> replacement
    density_operator omega(random_density_matrix(2, 2, gen), {2});
    measure_prepare_channel mp2(povm({complex_matrix::identity(2)}), {omega});
    density_operator out2 = apply(measure_prepare_to_kraus(mp2), rho);
    CHECK(max_abs(out2.op - omega.op) <= 1e-9);
}

TEST_CASE("measure_prepare: random 3-outcome channel matches definition") {
    rng gen(7);
    // random 3-outcome qubit POVM from a Haar isometry split
    complex_matrix u = haar_random_unitary(6, gen);
    std::vector<complex_matrix> els;
    for (int m = 0; m < 3; ++m) {
        complex_matrix em(2, 2);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                cplx acc = 0.0;
                for (int j = 0; j < 2; ++j) acc += std::conj(u(m * 2 + j, r)) * u(m * 2 + j, c);
                em(r, c) = acc;
            }
        els.push_back(hermitize(em));
    }
    povm pv(els);
    std::vector<density_operator> prep;
    for (int m = 0; m < 3; ++m)
        prep.emplace_back(random_density_matrix(2, 2, gen), std::vector<int>{2});
    measure_prepare_channel mp(pv, prep);
    kraus_channel ch = measure_prepare_to_kraus(mp);

    density_operator rho(random_density_matrix(2, 2, gen), {2});
    complex_matrix direct(2, 2);
    for (int m = 0; m < 3; ++m)
        direct = direct + trace(pv.elements[m] * rho.op).real() * prep[m].op;
    CHECK(max_abs(apply(ch, rho).op - direct) <= 1e-9);
}

TEST_CASE("channel zoo: depolarizing, classical, dephasing") {
    rng gen(8);
    density_operator rho(random_density_matrix(2, 2, gen), {2});
    // lambda = 1 is the identity
    CHECK(max_abs(apply(depolarizing_channel(1.0), rho).op - rho.op) <= 1e-12);
    CHECK_THROWS_AS(depolarizing_channel(-0.5), invalid_parameter_error);

    // noiseless classical bit
    kraus_channel perm = classical_channel({{1.0, 0.0}, {0.0, 1.0}});
    density_operator zero = density_operator::pure(basis_ket(2, 0));
    CHECK(max_abs(apply(perm, zero).op - zero.op) <= 1e-12);

    // BSC on |0><0| gives diag(1-p, p)
    density_operator out = apply(bsc_channel(0.1), zero);
    CHECK(out.op(0, 0).real() == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(out.op(1, 1).real() == doctest::Approx(0.1).epsilon(1e-12));

    // dephasing q=1/2 kills off-diagonals
    density_operator deph = apply(dephasing_channel(0.5), rho);
    CHECK(std::abs(deph.op(0, 1)) <= 1e-12);
}

TEST_CASE("tensor_channels: identities and product factorization") {
    rng gen(9);
    kraus_channel a = random_channel(2, 2, 2, gen);
    kraus_channel b = random_channel(2, 2, 2, gen);
    density_operator ra(random_density_matrix(2, 2, gen), {2});
    density_operator rb(random_density_matrix(2, 2, gen), {2});

    kraus_channel ab = tensor_channels(a, b);
    density_operator joint = density_operator::unchecked(kron(ra.op, rb.op), {2, 2});
    complex_matrix lhs = ab.apply(joint.op);
    complex_matrix rhs = kron(a.apply(ra.op), b.apply(rb.op));
    CHECK(max_abs(lhs - rhs) <= 1e-10);

    kraus_channel idid = tensor_channels(identity_channel(2), identity_channel(2));
    density_operator r4(random_density_matrix(4, 4, gen), {4});
    CHECK(max_abs(apply(idid, r4).op - r4.op) <= 1e-12);

    // R_omega (x) id on rho_AB -> omega (x) rho_B
    density_operator omega(random_density_matrix(2, 2, gen), {2});
    kraus_channel rep_id = tensor_channels(replacement_channel(omega), identity_channel(2));
    density_operator rho_ab(random_density_matrix(4, 4, gen), {2, 2});
    complex_matrix expect = kron(omega.op, partial_trace(rho_ab.op, {2, 2}, {1}));
    CHECK(max_abs(rep_id.apply(rho_ab.op) - expect) <= 1e-10);
}

TEST_CASE("every zoo constructor is trace preserving") {
    // kraus_channel construction validates sum K^dagger K = I; instantiate the zoo
    CHECK_NOTHROW(identity_channel(3));
    CHECK_NOTHROW(depolarizing_channel(0.0));
    CHECK_NOTHROW(depolarizing_channel(-1.0 / 3.0));
    CHECK_NOTHROW(dephasing_channel(1.0));
    CHECK_NOTHROW(bsc_channel(0.5));
    rng gen(10);
    CHECK_NOTHROW(replacement_channel(density_operator(random_density_matrix(3, 2, gen), {3})));
}

TEST_CASE("EB verdict consistency: Bell-state probe") {
    rng gen(11);
    for (int rep = 0; rep < 6; ++rep) {
        kraus_channel ch = random_channel(2, 2, rep % 2 ? 2 : 4, gen);
        eb_report verdict = is_entanglement_breaking(ch);
        kraus_channel probe = tensor_channels(ch, identity_channel(2));
        density_operator out =
            density_operator::unchecked(hermitize(probe.apply(bell_state().op)), {2, 2});
        ppt_report pt = is_ppt(out, {2, 2});
        if (verdict.verdict == eb_verdict::eb) CHECK(pt.ppt);
        if (verdict.verdict == eb_verdict::not_eb) CHECK_FALSE(pt.ppt);
    }
}
