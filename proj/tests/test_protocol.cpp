#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "sc/protocol.hpp"

using namespace sc;
using namespace test_helpers;

namespace {

budget quick() {
    budget b;
    b.restarts = 4;
    return b;
}

// n=1 protocol that prepares |m> and sends it straight through a channel of
// input dimension L; trivial feedback and memories.
feedback_protocol prepare_protocol(int l) {
    feedback_protocol p;
    p.n_rounds = 1;
    p.message_count = l;
    p.feedback_dims = {1};
    p.alice_dims = {l, 1};
    p.bob_dims = {1};
    for (int m = 0; m < l; ++m)
        p.initial_alice.push_back(density_operator::pure(basis_ket(l, m)));
    p.initial_bob = ensemble({1.0}, {density_operator::pure(basis_ket(1, 0))});
    p.encoders.push_back(identity_channel(l));
    std::vector<complex_matrix> els;
    for (int m = 0; m < l; ++m) els.push_back(outer(basis_ket(l, m)));
    p.final_povm = povm(std::move(els));
    return p;
}

// entangled-encoder control: the encoder emits a Bell pair across A'_1:A_1
// and the channel is the identity, so the Alice:Bob cut becomes entangled
feedback_protocol entangled_control() {
    feedback_protocol p;
    p.n_rounds = 1;
    p.message_count = 2;
    p.feedback_dims = {1};
    p.alice_dims = {2, 2};
    p.bob_dims = {1};
    p.initial_alice = {density_operator::pure(basis_ket(2, 0)),
                       density_operator::pure(basis_ket(2, 1))};
    p.initial_bob = ensemble({1.0}, {density_operator::pure(basis_ket(1, 0))});
    p.encoders.push_back(replacement_channel(bell_state(), 2));
    p.separable_inputs = false;
    return p;
}

}  // namespace

TEST_CASE("simulate: orthogonal preparation through the identity channel") {
    feedback_protocol p = prepare_protocol(4);
    protocol_trajectory t = simulate(p, identity_channel(4));
    auto finals = t.final_bob_states();
    // final states stay orthogonal
    for (int m = 0; m < 4; ++m)
        for (int k = m + 1; k < 4; ++k)
            CHECK(std::abs(trace(finals[m].op * finals[k].op).real()) <= 1e-12);
    CHECK(success_probability(finals, *p.final_povm) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("simulate: replacement channel erases the message") {
    rng gen(1);
    density_operator omega = random_state(2, 2, gen);
    kraus_channel rep = replacement_channel(omega, 4);

    feedback_protocol p = prepare_protocol(4);
    // output dimension 2: reuse a computational POVM padded to 4 elements
    p.final_povm.reset();
    protocol_trajectory t = simulate(p, rep);
    auto finals = t.final_bob_states();
    // message independence in trace norm
    complex_matrix bar(finals[0].dim(), finals[0].dim());
    for (const auto& f : finals) bar = bar + 0.25 * f.op;
    for (int m = 0; m < 4; ++m)
        CHECK(schatten_norm(finals[m].op - bar, 1.0) <= 1e-9);

    // any POVM gives success exactly 1/L; use the uniform one {I/L}
    std::vector<complex_matrix> els(4, 0.25 * complex_matrix::identity(2));
    CHECK(success_probability(finals, povm(std::move(els))) ==
          doctest::Approx(0.25).epsilon(1e-12));

    // PGM also cannot beat guessing here
    CHECK(success_probability(finals, pgm_decoder(finals)) ==
          doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("simulate: two-round protocol matches hand composition") {
    kraus_channel ch = dephasing_channel(0.3);
    feedback_protocol p = random_protocol(ch, 2, 2, 2, 2, 2, 99);
    protocol_trajectory t = simulate(p, ch);

    // hand-compose message 0: initial, encoder, channel, decoder, encoder, channel
    density_operator s = density_operator::unchecked(
        kron(p.initial_alice[0].op, cq_state(p.initial_bob).op), {2, 2, 2});
    auto grouped = [&](const kraus_channel& c, const density_operator& st, int first, int count,
                       std::vector<int> outdims) {
        std::vector<int> flat;
        int g = 1;
        for (int i = 0; i < static_cast<int>(st.dims.size()); ++i) {
            if (i < first || i >= first + count)
                flat.push_back(st.dims[i]);
            else {
                g *= st.dims[i];
                if (i == first + count - 1) flat.push_back(g);
            }
        }
        complex_matrix out = apply_on_subsystem(static_cast<const kraus_map&>(c), st.op, flat, first);
        std::vector<int> nd;
        for (int i = 0; i < static_cast<int>(flat.size()); ++i) {
            if (i == first)
                for (int dd : outdims) nd.push_back(dd);
            else
                nd.push_back(flat[i]);
        }
        return density_operator::unchecked(hermitize(out), nd);
    };
    s = grouped(p.encoders[0], s, 0, 2, {2, 2});
    s = grouped(ch, s, 1, 1, {2});
    s = grouped(p.decoders[0], s, 1, 2, {2, 2});
    s = grouped(p.encoders[1], s, 0, 2, {2, 2});
    s = grouped(ch, s, 1, 1, {2});
    CHECK(max_abs(s.op - t.final_point().per_message[0].op) <= 1e-9);
}

TEST_CASE("pgm and helstrom decoders") {
    // orthogonal states: PGM discriminates perfectly
    std::vector<density_operator> orth = {density_operator::pure(basis_ket(2, 0)),
                                          density_operator::pure(basis_ket(2, 1))};
    CHECK(success_probability(orth, pgm_decoder(orth)) == doctest::Approx(1.0).epsilon(1e-10));

    // identical states: Helstrom gives 1/2
    rng gen(2);
    density_operator rho = random_state(2, 2, gen);
    std::vector<density_operator> same = {rho, rho};
    CHECK(success_probability(same, helstrom_decoder(same)) ==
          doctest::Approx(0.5).epsilon(1e-10));

    // Helstrom achieves 1/2 + ||rho1 - rho2||_1 / 4 and dominates PGM and
    // arbitrary two-outcome measurements
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<density_operator> pair = {random_state(2, 2, gen), random_state(2, 2, gen)};
        const double hl = success_probability(pair, helstrom_decoder(pair));
        const double expect = 0.5 + 0.25 * schatten_norm(pair[0].op - pair[1].op, 1.0);
        CHECK(hl == doctest::Approx(expect).epsilon(1e-9));
        CHECK(success_probability(pair, pgm_decoder(pair)) <= hl + 1e-9);
        CHECK(success_probability(pair, random_povm(2, 2, gen)) <= hl + 1e-9);
    }
}

TEST_CASE("random_protocol: determinism and classical feedback") {
    kraus_channel ch = depolarizing_channel(0.25);
    feedback_protocol a = random_protocol(ch, 2, 3, 2, 2, 2, 7);
    feedback_protocol b = random_protocol(ch, 2, 3, 2, 2, 2, 7);
    for (size_t i = 0; i < a.encoders.size(); ++i)
        for (size_t k = 0; k < a.encoders[i].ops.size(); ++k)
            CHECK(max_abs(a.encoders[i].ops[k] - b.encoders[i].ops[k]) == 0.0);

    // simulating keeps X registers exactly classical (asserted inside simulate)
    protocol_trajectory t = simulate(a, ch);
    CHECK(t.points.size() == 1 + 3 * 2 - 1);  // initial + (enc, chn, dec) + (enc, chn)

    CHECK_THROWS_AS(random_protocol(ch, 1, 2, 2, 2, 5, 3), dimension_cap_error);
}

TEST_CASE("random_protocol: smoke sweep simulates cleanly") {
    kraus_channel ch = depolarizing_channel(0.25);
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        feedback_protocol p = random_protocol(ch, 2, 2, 2, 2, 2, seed);
        CHECK_NOTHROW(simulate(p, ch));
    }
}

TEST_CASE("verify_separability: EB protocols pass, entangled control fails") {
    kraus_channel ch = depolarizing_channel(0.25);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        feedback_protocol p = random_protocol(ch, 2, 2, 2, 2, 2, seed);
        auto entries = verify_separability(simulate(p, ch));
        for (const auto& e : entries) CHECK(e.ppt);
    }

    feedback_protocol control = entangled_control();
    auto entries = verify_separability(simulate(control, identity_channel(2)));
    bool violated = false;
    for (const auto& e : entries)
        if (!e.ppt && e.stage == stage_kind::post_channel) violated = true;
    CHECK(violated);
}

TEST_CASE("verify_weak_converse_chain: replacement and saturation cases") {
    rng gen(3);
    density_operator omega = random_state(2, 2, gen);
    kraus_channel rep = replacement_channel(omega, 2);
    feedback_protocol p = random_protocol(rep, 2, 2, 2, 2, 2, 11);
    chain_report chain = verify_weak_converse_chain(simulate(p, rep), 0.0);
    CHECK(chain.holds);
    for (const auto& r : chain.rounds) {
        CHECK(std::abs(r.mi_bob) <= 1e-9);
        CHECK(std::abs(r.mi_memory) <= 1e-9);
    }

    // noiseless bit, orthogonal encoding: I(M;B_1) = 1 = chi exactly
    kraus_channel bit = classical_channel({{1.0, 0.0}, {0.0, 1.0}});
    feedback_protocol prep = prepare_protocol(2);
    chain_report sat = verify_weak_converse_chain(simulate(prep, bit), 1.0);
    CHECK(sat.holds);
    CHECK(sat.rounds.front().mi_bob == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("verify_weak_converse_chain: dephasing sweep") {
    kraus_channel ch = dephasing_channel(0.5);  // fully dephasing, EB
    const double chi = holevo_information(ch, quick()).value;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        feedback_protocol p = random_protocol(ch, 2, 2, 2, 2, 2, seed);
        chain_report chain = verify_weak_converse_chain(simulate(p, ch), chi);
        CHECK(chain.holds);
        CHECK(chain.max_identity_defect <= 1e-9);
    }
}

TEST_CASE("verify_strong_converse_bound: replacement channel meets the bound with equality") {
    rng gen(4);
    density_operator omega = random_state(2, 2, gen);
    kraus_channel rep = replacement_channel(omega, 2);
    feedback_protocol p = random_protocol(rep, 1, 4, 2, 2, 2, 5);
    simulation_report r =
        verify_strong_converse_bound(p, rep, decoder_strategy::best, nullptr, quick());
    CHECK(r.bound_holds);
    CHECK(r.p_succ == doctest::Approx(0.25).epsilon(1e-9));
    // chi_alpha = 0 for every alpha, so E(R) -> R and the bound -> 1/L
    CHECK(r.bound == doctest::Approx(0.25).epsilon(1e-5));
    CHECK(std::abs(r.bound - r.p_succ) <= 1e-6);
}

TEST_CASE("verify_strong_converse_bound: guards the EB hypothesis") {
    feedback_protocol control = entangled_control();
    CHECK_THROWS_AS(verify_strong_converse_bound(control, identity_channel(2),
                                                 decoder_strategy::pgm, nullptr, quick()),
                    not_entanglement_breaking_error);

    // flagged separable-inputs protocols are allowed through
    feedback_protocol prep = prepare_protocol(2);
    prep.separable_inputs = true;
    simulation_report r = verify_strong_converse_bound(prep, identity_channel(2),
                                                       decoder_strategy::given, nullptr, quick());
    CHECK(r.bound_holds);
}

TEST_CASE("verify_strong_converse_bound: EB depolarizing with random protocols") {
    kraus_channel ch = depolarizing_channel(0.25);
    budget b = quick();
    const double chi = holevo_information(ch, b).value;
    const int n = 2;
    const double target_rate = chi + 0.5;
    const int l = std::max(2, static_cast<int>(std::ceil(std::exp2(n * target_rate))));
    feedback_protocol p0 = random_protocol(ch, n, l, 2, 2, 2, 21);
    exponent_curve curve = strong_converse_exponent(ch, p0.rate(), {}, b);
    for (std::uint64_t seed = 21; seed < 24; ++seed) {
        feedback_protocol p = random_protocol(ch, n, l, 2, 2, 2, seed);
        simulation_report r =
            verify_strong_converse_bound(p, ch, decoder_strategy::best, &curve, b);
        CHECK(r.bound_holds);
        CHECK(r.margin >= 0.0);
        CHECK(r.separability_ok);
        CHECK(r.chain_ok);
    }
}
