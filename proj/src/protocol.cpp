#include "sc/protocol.hpp"

#include <algorithm>
#include <cmath>

namespace sc {

namespace {

constexpr long long joint_dim_cap = 1 << 12;

// channel on the contiguous register group [first, first+count) of `s`
density_operator apply_grouped(const kraus_channel& ch, const density_operator& s, int first,
                               int count, std::vector<int> out_group_dims) {
    std::vector<int> flat;
    int grouped = 1;
    for (int i = 0; i < static_cast<int>(s.dims.size()); ++i) {
        if (i < first || i >= first + count) {
            flat.push_back(s.dims[i]);
        } else {
            grouped *= s.dims[i];
            if (i == first + count - 1) flat.push_back(grouped);
        }
    }
    const int target = first;
    complex_matrix out = apply_on_subsystem(static_cast<const kraus_map&>(ch), s.op, flat, target);
    std::vector<int> out_dims;
    for (int i = 0; i < static_cast<int>(flat.size()); ++i) {
        if (i == target)
            for (int dgrp : out_group_dims) out_dims.push_back(dgrp);
        else
            out_dims.push_back(flat[i]);
    }
    return density_operator::unchecked(hermitize(out), std::move(out_dims));
}

void audit_state(const density_operator& s, int round, const char* where) {
    if (std::abs(trace(s.op).real() - 1.0) > 1e-7)
        throw state_invalid_error(std::string("simulate: trace drift at ") + where +
                                  " round " + std::to_string(round));
    spectrum sp = eigh(s.op, 1e-7);
    if (!sp.eigenvalues.empty() && sp.eigenvalues.back() < -1e-7)
        throw state_invalid_error(std::string("simulate: negativity at ") + where + " round " +
                                  std::to_string(round));
}

// largest off-diagonal block mass of the X register (index 1 of {a, f, b})
double x_offdiag_mass(const density_operator& s) {
    const int a = s.dims[0], f = s.dims[1], b = s.dims[2];
    double mass = 0.0;
    for (int ia = 0; ia < a; ++ia)
        for (int x = 0; x < f; ++x)
            for (int ib = 0; ib < b; ++ib)
                for (int ja = 0; ja < a; ++ja)
                    for (int y = 0; y < f; ++y)
                        for (int jb = 0; jb < b; ++jb) {
                            if (x == y) continue;
                            mass = std::max(mass,
                                            std::abs(s.op((ia * f + x) * b + ib,
                                                          (ja * f + y) * b + jb)));
                        }
    return mass;
}

double uniform_mi_with_m(const std::vector<complex_matrix>& conditionals) {
    // I(M;S) for uniform M and conditional states rho^m_S
    const int l = static_cast<int>(conditionals.size());
    const int d = conditionals.front().dim();
    complex_matrix bar(d, d);
    double hcond = 0.0;
    for (const auto& m : conditionals) {
        bar = bar + (1.0 / l) * m;
        hcond += von_neumann_entropy(m) / l;
    }
    return von_neumann_entropy(hermitize(bar)) - hcond;
}

}  // namespace

void feedback_protocol::validate_against(const kraus_channel& ch) const {
    if (n_rounds < 1) throw invalid_parameter_error("protocol: n_rounds must be >= 1");
    if (message_count < 2) throw invalid_parameter_error("protocol: need at least 2 messages");
    if (static_cast<int>(feedback_dims.size()) != n_rounds ||
        static_cast<int>(alice_dims.size()) != n_rounds + 1 ||
        static_cast<int>(bob_dims.size()) != n_rounds)
        throw dimension_mismatch_error("protocol: register dimension lists have wrong length");
    if (static_cast<int>(initial_alice.size()) != message_count)
        throw dimension_mismatch_error("protocol: one initial Alice state per message required");
    for (const auto& s : initial_alice)
        if (s.dim() != alice_dims[0])
            throw dimension_mismatch_error("protocol: initial Alice state dimension mismatch");
    if (static_cast<int>(initial_bob.size()) != feedback_dims[0])
        throw dimension_mismatch_error("protocol: Bob's initial ensemble must have |X_0| entries");
    if (initial_bob.states.front().dim() != bob_dims[0])
        throw dimension_mismatch_error("protocol: Bob's initial state dimension mismatch");
    if (static_cast<int>(encoders.size()) != n_rounds ||
        static_cast<int>(decoders.size()) != n_rounds - 1)
        throw dimension_mismatch_error("protocol: need n encoders and n-1 decoders");
    for (int i = 1; i <= n_rounds; ++i) {
        const kraus_channel& e = encoders[i - 1];
        if (e.d_in != alice_dims[i - 1] * feedback_dims[i - 1] ||
            e.d_out != alice_dims[i] * ch.d_in)
            throw dimension_mismatch_error("protocol: encoder " + std::to_string(i) +
                                           " dimensions mismatch");
        if (i < n_rounds) {
            const kraus_channel& d = decoders[i - 1];
            if (d.d_in != ch.d_out * bob_dims[i - 1] || d.d_out != feedback_dims[i] * bob_dims[i])
                throw dimension_mismatch_error("protocol: decoder " + std::to_string(i) +
                                               " dimensions mismatch");
        }
    }
    if (final_povm && final_povm->dim() != ch.d_out * bob_dims[n_rounds - 1])
        throw dimension_mismatch_error("protocol: final POVM dimension mismatch");
    long long worst = 0;
    for (int i = 1; i <= n_rounds; ++i) {
        const long long stage = static_cast<long long>(alice_dims[i]) *
                                std::max(ch.d_in, ch.d_out) * bob_dims[i - 1];
        worst = std::max(worst, stage);
    }
    if (worst > joint_dim_cap)
        throw dimension_cap_error("protocol: joint dimension exceeds 2^12");
}

kraus_channel compose_output_dephasing(const kraus_channel& ch, int head, int tail) {
    if (head * tail != ch.d_out)
        throw dimension_mismatch_error("compose_output_dephasing: head*tail != d_out");
    std::vector<complex_matrix> ops;
    ops.reserve(ch.ops.size() * head);
    for (int x = 0; x < head; ++x) {
        complex_matrix proj(ch.d_out, ch.d_out);
        for (int t = 0; t < tail; ++t) proj(x * tail + t, x * tail + t) = 1.0;
        for (const auto& k : ch.ops) ops.push_back(proj * k);
    }
    return kraus_channel(std::move(ops), ch.d_in, ch.d_out);
}

feedback_protocol feedback_protocol::with_classical_feedback_enforced() const {
    feedback_protocol out = *this;
    for (int i = 0; i < static_cast<int>(out.decoders.size()); ++i)
        out.decoders[i] =
            compose_output_dephasing(out.decoders[i], feedback_dims[i + 1], bob_dims[i + 1]);
    return out;
}

std::vector<density_operator> protocol_trajectory::final_bob_states() const {
    const trajectory_point& fin = final_point();
    std::vector<density_operator> out;
    for (const auto& s : fin.per_message) {
        complex_matrix m = partial_trace(s.op, s.dims, {1, 2});
        out.push_back(
            density_operator::unchecked(std::move(m), {s.dims[1], s.dims[2]}));
    }
    return out;
}

protocol_trajectory simulate(const feedback_protocol& p, const kraus_channel& ch) {
    p.validate_against(ch);
    protocol_trajectory traj;

    const density_operator bob0 = cq_state(p.initial_bob);  // X_0 (x) B'_0
    trajectory_point init;
    init.round = 0;
    init.stage = stage_kind::initial;
    init.registers = {"A'0", "X0", "B'0"};
    for (int m = 0; m < p.message_count; ++m) {
        density_operator s = density_operator::unchecked(
            kron(p.initial_alice[m].op, bob0.op),
            {p.alice_dims[0], p.feedback_dims[0], p.bob_dims[0]});
        init.per_message.push_back(std::move(s));
    }
    traj.points.push_back(std::move(init));

    for (int i = 1; i <= p.n_rounds; ++i) {
        const trajectory_point& prev = traj.points.back();
        trajectory_point enc, chn;
        enc.round = chn.round = i;
        enc.stage = stage_kind::post_encode;
        chn.stage = stage_kind::post_channel;
        enc.registers = {"A'" + std::to_string(i), "A" + std::to_string(i),
                         "B'" + std::to_string(i - 1)};
        chn.registers = {"A'" + std::to_string(i), "B" + std::to_string(i),
                         "B'" + std::to_string(i - 1)};
        for (int m = 0; m < p.message_count; ++m) {
            density_operator after_enc = apply_grouped(p.encoders[i - 1], prev.per_message[m], 0,
                                                       2, {p.alice_dims[i], ch.d_in});
            density_operator after_ch = apply_grouped(ch, after_enc, 1, 1, {ch.d_out});
            audit_state(after_ch, i, "post-channel");
            enc.per_message.push_back(std::move(after_enc));
            chn.per_message.push_back(std::move(after_ch));
        }
        traj.points.push_back(std::move(enc));
        traj.points.push_back(std::move(chn));

        if (i < p.n_rounds) {
            const trajectory_point& post = traj.points.back();
            trajectory_point dec;
            dec.round = i;
            dec.stage = stage_kind::post_decode;
            dec.registers = {"A'" + std::to_string(i), "X" + std::to_string(i),
                             "B'" + std::to_string(i)};
            for (int m = 0; m < p.message_count; ++m) {
                density_operator after_dec =
                    apply_grouped(p.decoders[i - 1], post.per_message[m], 1, 2,
                                  {p.feedback_dims[i], p.bob_dims[i]});
                audit_state(after_dec, i, "post-decode");
                if (x_offdiag_mass(after_dec) > 1e-12)
                    throw state_invalid_error(
                        "simulate: decoder output is not classical on X at round " +
                        std::to_string(i));
                dec.per_message.push_back(std::move(after_dec));
            }
            traj.points.push_back(std::move(dec));
        }
    }
    return traj;
}

double success_probability(const std::vector<density_operator>& final_bob, const povm& decoder) {
    const int l = static_cast<int>(final_bob.size());
    if (static_cast<int>(decoder.size()) != l)
        throw dimension_mismatch_error("success_probability: need one POVM element per message");
    double p = 0.0;
    for (int m = 0; m < l; ++m) {
        if (final_bob[m].dim() != decoder.dim())
            throw dimension_mismatch_error("success_probability: dimension mismatch");
        p += trace(decoder.elements[m] * final_bob[m].op).real() / l;
    }
    return std::clamp(p, 0.0, 1.0);
}

povm pgm_decoder(const std::vector<density_operator>& final_bob) {
    const int l = static_cast<int>(final_bob.size());
    const int d = final_bob.front().dim();
    complex_matrix s(d, d);
    for (const auto& rho : final_bob) s = s + (1.0 / l) * rho.op;
    complex_matrix root = fractional_power(hermitize(s), -0.5);  // inverse sqrt on the support
    std::vector<complex_matrix> els;
    complex_matrix sum(d, d);
    for (const auto& rho : final_bob) {
        complex_matrix e = hermitize(root * ((1.0 / l) * rho.op) * root);
        sum = sum + e;
        els.push_back(std::move(e));
    }
    // fold the kernel remainder I - sum uniformly so the POVM is complete
    complex_matrix rem = complex_matrix::identity(d) - sum;
    for (auto& e : els) e = hermitize(e + (1.0 / l) * rem);
    return povm(std::move(els), 1e-7, 1e-7);
}

povm helstrom_decoder(const std::vector<density_operator>& final_bob) {
    if (final_bob.size() != 2)
        throw invalid_parameter_error("helstrom_decoder: exactly two hypotheses required");
    const int d = final_bob.front().dim();
    spectrum sp = eigh(hermitize(final_bob[0].op - final_bob[1].op), 1e-8);
    std::vector<double> pos(sp.eigenvalues.size());
    for (size_t i = 0; i < pos.size(); ++i) pos[i] = sp.eigenvalues[i] > 0.0 ? 1.0 : 0.0;
    complex_matrix proj = sp.apply(pos);
    return povm({hermitize(proj), hermitize(complex_matrix::identity(d) - proj)}, 1e-9, 1e-8);
}

std::vector<separability_entry> verify_separability(const protocol_trajectory& t) {
    std::vector<separability_entry> out;
    for (const auto& pt : t.points) {
        // Alice's side holds A' and, before transmission, the channel input
        // A_i and the received feedback X_{i-1}; after the channel B_i and
        // the fresh X_i sit with Bob.
        bipartite_cut cut;
        if (pt.stage == stage_kind::initial || pt.stage == stage_kind::post_encode) {
            cut = {pt.per_message.front().dims[0] * pt.per_message.front().dims[1],
                   pt.per_message.front().dims[2]};
        } else {
            cut = {pt.per_message.front().dims[0],
                   pt.per_message.front().dims[1] * pt.per_message.front().dims[2]};
        }
        for (int m = 0; m < static_cast<int>(pt.per_message.size()); ++m) {
            ppt_report rep = is_ppt(pt.per_message[m], cut);
            separability_entry e;
            e.round = pt.round;
            e.stage = pt.stage;
            e.message = m;
            e.min_pt_eigenvalue = rep.min_eigenvalue;
            e.ppt = rep.ppt;
            e.conclusive = rep.conclusive_for_separability;
            out.push_back(e);
        }
    }
    return out;
}

chain_report verify_weak_converse_chain(const protocol_trajectory& t, double chi, double slack) {
    chain_report rep;
    rep.chi = chi;
    rep.holds = true;

    const trajectory_point* prev_memory = &t.points.front();  // {A', X, B'}
    for (const auto& pt : t.points) {
        if (pt.stage != stage_kind::post_channel) {
            if (pt.stage == stage_kind::post_decode || pt.stage == stage_kind::initial)
                prev_memory = &pt;
            continue;
        }
        round_mi r;
        r.round = pt.round;

        // I(M; B_i B'_{i-1}) from the post-channel marginals
        std::vector<complex_matrix> bob_pair, bob_mem;
        const int db = pt.per_message.front().dims[1];
        const int dbp = pt.per_message.front().dims[2];
        for (const auto& s : pt.per_message)
            bob_pair.push_back(partial_trace(s.op, s.dims, {1, 2}));
        r.mi_bob = uniform_mi_with_m(bob_pair);

        // I(M; B'_{i-1}) from the round-start memory
        for (const auto& s : prev_memory->per_message)
            bob_mem.push_back(partial_trace(s.op, s.dims, {2}));
        r.mi_memory = uniform_mi_with_m(bob_mem);

        // conditional mutual information from the explicit cq joint over
        // {M, B_i, B'_{i-1}} and the chain-rule identity
        const int l = static_cast<int>(pt.per_message.size());
        complex_matrix cq(l * db * dbp, l * db * dbp);
        for (int m = 0; m < l; ++m)
            for (int r1 = 0; r1 < db * dbp; ++r1)
                for (int c1 = 0; c1 < db * dbp; ++c1)
                    cq(m * db * dbp + r1, m * db * dbp + c1) =
                        bob_pair[m](r1, c1) / static_cast<double>(l);
        density_operator cq_state_op =
            density_operator::unchecked(hermitize(cq), {l, db, dbp});
        r.cmi = conditional_mutual_information(cq_state_op, {{0}, {1}, {2}});
        r.identity_defect = std::abs(r.cmi - (r.mi_bob - r.mi_memory));
        rep.max_identity_defect = std::max(rep.max_identity_defect, r.identity_defect);

        r.chain_slack = r.mi_memory + chi + slack - r.mi_bob;
        if (r.chain_slack < 0.0 || r.identity_defect > 1e-9) rep.holds = false;
        rep.cumulative_mi = r.mi_bob;
        rep.rounds.push_back(r);
    }
    if (rep.cumulative_mi > t.points.back().round * chi + slack) rep.holds = false;
    return rep;
}

simulation_report verify_strong_converse_bound(const feedback_protocol& p,
                                               const kraus_channel& ch,
                                               decoder_strategy strategy,
                                               const exponent_curve* precomputed,
                                               const budget& b) {
    eb_report verdict = is_entanglement_breaking(ch);
    if (verdict.verdict == eb_verdict::not_eb && !p.separable_inputs)
        throw not_entanglement_breaking_error(
            "verify_strong_converse_bound: channel is not EB and protocol is not flagged "
            "separable-inputs");

    protocol_trajectory traj = simulate(p, ch);
    std::vector<density_operator> finals = traj.final_bob_states();

    simulation_report rep;
    rep.rate = p.rate();

    auto try_povm = [&](const povm& d, const char* name) {
        const double ps = success_probability(finals, d);
        if (ps > rep.p_succ) {
            rep.p_succ = ps;
            rep.decoder = name;
        }
    };
    switch (strategy) {
        case decoder_strategy::pgm:
            try_povm(pgm_decoder(finals), "pgm");
            break;
        case decoder_strategy::helstrom:
            try_povm(helstrom_decoder(finals), "helstrom");
            break;
        case decoder_strategy::given:
            if (!p.final_povm)
                throw invalid_parameter_error("verify_strong_converse_bound: no POVM given");
            try_povm(*p.final_povm, "given");
            break;
        case decoder_strategy::best:
            try_povm(pgm_decoder(finals), "pgm");
            if (finals.size() == 2) try_povm(helstrom_decoder(finals), "helstrom");
            if (p.final_povm) try_povm(*p.final_povm, "given");
            break;
    }

    exponent_curve curve;
    if (precomputed != nullptr && std::abs(precomputed->rate - rep.rate) < 1e-12) {
        curve = *precomputed;
    } else {
        curve = strong_converse_exponent(ch, rep.rate, {}, b);
    }
    rep.exponent = curve.exponent;
    rep.bound = std::exp2(-static_cast<double>(p.n_rounds) * curve.exponent);
    rep.margin = rep.bound - rep.p_succ;
    rep.bound_holds = rep.p_succ <= rep.bound + 1e-9;

    rep.separability = verify_separability(traj);
    rep.separability_ok = true;
    for (const auto& e : rep.separability)
        if (!e.ppt) rep.separability_ok = false;

    capacity_result chi = holevo_information(ch, b);
    rep.chi = chi.value;
    chain_report chain = verify_weak_converse_chain(traj, chi.value);
    rep.mi_chain = chain.rounds;
    rep.chain_ok = chain.holds;
    rep.cumulative_mi = chain.cumulative_mi;
    return rep;
}

feedback_protocol random_protocol(const kraus_channel& ch, int n_rounds, int message_count,
                                  int alice_dim, int bob_dim, int feedback_dim,
                                  std::uint64_t seed) {
    if (feedback_dim > 4)
        throw dimension_cap_error("random_protocol: feedback alphabets capped at 4");
    feedback_protocol p;
    p.n_rounds = n_rounds;
    p.message_count = message_count;
    p.feedback_dims.assign(n_rounds, feedback_dim);
    p.alice_dims.assign(n_rounds + 1, alice_dim);
    p.bob_dims.assign(n_rounds, bob_dim);

    rng gen = rng::derived(seed, 0xF00D);
    for (int m = 0; m < message_count; ++m)
        p.initial_alice.push_back(
            density_operator(random_density_matrix(alice_dim, alice_dim, gen), {alice_dim}));
    {
        std::vector<double> probs(feedback_dim);
        double z = 0.0;
        for (double& x : probs) {
            x = -std::log(std::max(gen.uniform(), 1e-12));
            z += x;
        }
        for (double& x : probs) x /= z;
        std::vector<density_operator> states;
        for (int x = 0; x < feedback_dim; ++x)
            states.push_back(
                density_operator(random_density_matrix(bob_dim, bob_dim, gen), {bob_dim}));
        p.initial_bob = ensemble(probs, states);
    }

    auto random_cptp = [&](int din, int dout) {
        const int env = std::max(2, (din + dout - 1) / dout);
        complex_matrix u = haar_random_unitary(dout * env, gen);
        std::vector<complex_matrix> ops;
        for (int k = 0; k < env; ++k) {
            complex_matrix op(dout, din);
            for (int a = 0; a < dout; ++a)
                for (int i = 0; i < din; ++i) op(a, i) = u(a * env + k, i);
            ops.push_back(std::move(op));
        }
        return kraus_channel(std::move(ops), din, dout);
    };

    for (int i = 1; i <= n_rounds; ++i)
        p.encoders.push_back(random_cptp(alice_dim * feedback_dim, alice_dim * ch.d_in));
    for (int i = 1; i < n_rounds; ++i)
        p.decoders.push_back(random_cptp(ch.d_out * bob_dim, feedback_dim * bob_dim));

    feedback_protocol enforced = p.with_classical_feedback_enforced();
    enforced.validate_against(ch);
    return enforced;
}

}  // namespace sc
