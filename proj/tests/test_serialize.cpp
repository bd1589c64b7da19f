#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "sc/serialize.hpp"

using namespace sc;
using namespace test_helpers;

TEST_CASE("matrix json round trip with complex entries") {
    rng gen(1);
    complex_matrix m(3, 2);
    for (auto& z : m.a) z = cplx(gen.gaussian(), gen.gaussian());
    complex_matrix back = matrix_from_json(matrix_to_json(m));
    CHECK(max_abs(back - m) == 0.0);

    // plain numbers are accepted as real entries
    json j = json::parse("[[1, 0], [0, 1]]");
    CHECK(max_abs(matrix_from_json(j) - complex_matrix::identity(2)) == 0.0);
}

TEST_CASE("ensemble and povm round trips") {
    rng gen(2);
    ensemble e({0.25, 0.75}, {random_state(2, 2, gen), random_state(2, 1, gen)});
    ensemble back = ensemble_from_json(ensemble_to_json(e));
    CHECK(back.probs == e.probs);
    CHECK(max_abs(back.states[1].op - e.states[1].op) <= 1e-15);

    povm pv = random_povm(2, 3, gen);
    povm pback = povm_from_json(povm_to_json(pv));
    for (size_t i = 0; i < pv.size(); ++i)
        CHECK(max_abs(pback.elements[i] - pv.elements[i]) <= 1e-15);
}

TEST_CASE("channel json: kraus round trip and named forms") {
    rng gen(3);
    kraus_channel ch = random_channel(2, 3, 2, gen);
    channel_spec back = channel_from_json(channel_to_json(ch));
    CHECK(back.channel.d_in == 2);
    CHECK(back.channel.d_out == 3);
    density_operator rho = random_state(2, 2, gen);
    CHECK(max_abs(apply(back.channel, rho).op - apply(ch, rho).op) <= 1e-12);

    channel_spec dep = channel_from_json(
        json{{"kind", "named"}, {"name", "depolarizing"}, {"params", {{"lambda", 0.3}}}});
    CHECK(dep.family == "depolarizing");
    CHECK(dep.params.at("lambda") == 0.3);

    channel_spec mp = channel_from_json(
        json{{"kind", "measure_prepare"},
             {"povm", json::array({matrix_to_json(outer(basis_ket(2, 0))),
                                   matrix_to_json(outer(basis_ket(2, 1)))})},
             {"states", json::array({matrix_to_json(outer(basis_ket(2, 0))),
                                     matrix_to_json(outer(basis_ket(2, 1)))})}});
    CHECK(is_entanglement_breaking(mp.channel).verdict == eb_verdict::eb);
}

TEST_CASE("parse_channel_arg: shorthand names") {
    CHECK(parse_channel_arg("depolarizing:0.25").family == "depolarizing");
    CHECK(parse_channel_arg("identity:3").channel.d_in == 3);
    CHECK(parse_channel_arg("bsc:0.1").family == "bsc");
    CHECK(parse_channel_arg("bit").family == "bit");
    CHECK_THROWS_AS(parse_channel_arg("nonsense:1"), usage_error);
    CHECK_THROWS_AS(parse_channel_arg("depolarizing"), usage_error);
}

TEST_CASE("protocol json round trip preserves the simulation") {
    kraus_channel ch = depolarizing_channel(0.25);
    feedback_protocol p = random_protocol(ch, 2, 2, 2, 2, 2, 5);
    feedback_protocol back = protocol_from_json(protocol_to_json(p));
    protocol_trajectory t1 = simulate(p, ch);
    protocol_trajectory t2 = simulate(back, ch);
    const auto& f1 = t1.final_point().per_message;
    const auto& f2 = t2.final_point().per_message;
    for (size_t m = 0; m < f1.size(); ++m) CHECK(max_abs(f1[m].op - f2[m].op) <= 1e-12);
}

TEST_CASE("exponent curve csv layout") {
    exponent_curve c;
    c.alphas = {1.5, 2.0};
    c.chi_alphas = {0.25, 0.5};
    c.terms = {0.125, 0.25};
    c.rate = 1.0;
    c.exponent = 0.25;
    const std::string csv = exponent_curve_to_csv(c);
    CHECK(csv == "alpha,chi_alpha,term\n1.5,0.25,0.125\n2,0.5,0.25\n");
}

TEST_CASE("format_double: 15 significant digits round trip") {
    for (double v : {0.1, 1.0 / 3.0, 1e-15, 123456.789012345, -2.5e-9}) {
        const std::string s = format_double(v);
        CHECK(std::abs(std::stod(s) - v) <= 1e-15 * std::max(1.0, std::abs(v)));
        CHECK(s.find(',') == std::string::npos);
    }
}

TEST_CASE("simulation report csv is flat (round, quantity, value)") {
    simulation_report r;
    r.p_succ = 0.5;
    r.rate = 1.0;
    round_mi m;
    m.round = 1;
    m.mi_bob = 0.25;
    r.mi_chain.push_back(m);
    const std::string csv = simulation_report_to_csv(r);
    CHECK(csv.find("round,quantity,value\n") == 0);
    CHECK(csv.find("0,p_succ,0.5\n") != std::string::npos);
    CHECK(csv.find("1,mi_bob,0.25\n") != std::string::npos);
}
