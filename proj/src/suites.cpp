#include "sc/suites.hpp"

#include <algorithm>
#include <cmath>

namespace sc {

namespace {

void note_failure(suite_result& r, const std::string& what) {
    ++r.failures;
    if (r.failure_notes.size() < 32) r.failure_notes.push_back(what);
}

void metric(suite_result& r, const std::string& key, double v) {
    r.metrics.emplace_back(key, v);
}

double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

kraus_channel random_cptp(int din, int dout, int env, rng& gen) {
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

povm random_povm(int d, int n, rng& gen) {
    complex_matrix u = haar_random_unitary(d * n, gen);
    std::vector<complex_matrix> els;
    for (int m = 0; m < n; ++m) {
        complex_matrix em(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) {
                cplx acc = 0.0;
                for (int j = 0; j < d; ++j) acc += std::conj(u(m * d + j, r)) * u(m * d + j, c);
                em(r, c) = acc;
            }
        els.push_back(hermitize(em));
    }
    return povm(std::move(els));
}

// fast 2x2 PSD alpha-norm of a CP map applied to a Bloch state; the dense
// grid oracle for nu_alpha at qubit scale
double qubit_map_output_norm(const kraus_map& m, double ct, double st_re, double st_im,
                             double alpha) {
    // rho = |psi><psi| for psi = (ct, st); output = sum K rho K^dagger
    double a = 0.0, d = 0.0;
    cplx b = 0.0;
    for (const auto& k : m.ops) {
        const cplx v0 = k(0, 0) * ct + k(0, 1) * cplx(st_re, st_im);
        const cplx v1 = k(1, 0) * ct + k(1, 1) * cplx(st_re, st_im);
        a += std::norm(v0);
        d += std::norm(v1);
        b += v0 * std::conj(v1);
    }
    const double mid = 0.5 * (a + d);
    const double rad = std::sqrt(std::max(0.0, 0.25 * (a - d) * (a - d) + std::norm(b)));
    const double l1 = std::max(0.0, mid + rad), l2 = std::max(0.0, mid - rad);
    if (l1 <= 0.0) return 0.0;
    return l1 * std::pow(1.0 + std::pow(l2 / l1, alpha), 1.0 / alpha);
}

double nu_alpha_grid(const kraus_map& m, double alpha, int n_phi, int n_theta) {
    const double pi = 3.14159265358979323846;
    double best = 0.0;
    for (int t = 0; t < n_theta; ++t) {
        const double theta = pi * t / (n_theta - 1);
        const double ct = std::cos(0.5 * theta), st = std::sin(0.5 * theta);
        const int phis = (t == 0 || t == n_theta - 1) ? 1 : n_phi;
        for (int p = 0; p < phis; ++p) {
            const double phi = 2.0 * pi * p / n_phi;
            best = std::max(best, qubit_map_output_norm(m, ct, st * std::cos(phi),
                                                        st * std::sin(phi), alpha));
        }
    }
    return best;
}

// Random full-rank state mixed toward I/d.  The mixing pins the smallest
// eigenvalue at 0.25/d, which bounds the second-order coefficient of the
// alpha -> 1 expansion so the 1e-3 tolerance at eps = 1e-4 has slack.
density_operator smoothed_random_state(int d, rng& gen) {
    complex_matrix m = 0.75 * random_density_matrix(d, d, gen) +
                       (0.25 / d) * complex_matrix::identity(d);
    return density_operator(hermitize(m), {d});
}

suite_result suite_axioms(std::uint64_t seed, int) {
    suite_result r;
    r.name = "axioms";
    rng gen = rng::derived(seed, 0xA1);
    const int pairs = 200;
    double worst_limit = 0.0;
    for (int i = 0; i < pairs; ++i) {
        const int d = 2 + i % 3;
        density_operator rho = smoothed_random_state(d, gen);
        density_operator sigma = smoothed_random_state(d, gen);
        ++r.cases;

        double prev = -1e300;
        for (double alpha = 0.5; alpha <= 5.0 + 1e-12; alpha += 0.1) {
            if (std::abs(alpha - 1.0) < 1e-9) continue;
            const double v = sandwiched_renyi(rho, sigma, alpha);
            if (v < prev - 1e-8)
                note_failure(r, "monotonicity violated at pair " + std::to_string(i));
            prev = v;
        }

        const double dkl = relative_entropy(rho, sigma);
        if (std::abs(sandwiched_renyi(rho, sigma, 1.0 + 1e-4) - dkl) > 1e-3 ||
            std::abs(sandwiched_renyi(rho, sigma, 1.0 - 1e-4) - dkl) > 1e-3)
            note_failure(r, "alpha->1 limit off at pair " + std::to_string(i));
        worst_limit = std::max(worst_limit,
                               std::abs(sandwiched_renyi(rho, sigma, 1.0 + 1e-4) - dkl));
    }
    // data processing under 50 random channels
    rng dpi_gen = rng::derived(seed, 0xA2);
    for (int c = 0; c < 50; ++c) {
        const int d = 2 + c % 2;
        kraus_channel ch = random_cptp(d, d, 2 + c % 3, dpi_gen);
        density_operator rho = smoothed_random_state(d, dpi_gen);
        density_operator sigma = smoothed_random_state(d, dpi_gen);
        ++r.cases;
        for (double alpha : {0.5, 0.75, 1.5, 2.0, 3.0, 5.0}) {
            const double before = sandwiched_renyi(rho, sigma, alpha);
            const double after = sandwiched_renyi(apply(ch, rho), apply(ch, sigma), alpha);
            if (after > before + 1e-7)
                note_failure(r, "DPI violated at channel " + std::to_string(c));
        }
    }
    metric(r, "worst_alpha1_limit_gap", worst_limit);
    r.passed = r.failures == 0;
    return r;
}

suite_result suite_nagaoka(std::uint64_t seed, int) {
    suite_result r;
    r.name = "nagaoka";
    rng gen = rng::derived(seed, 0xB1);
    const double alphas[4] = {1.2, 1.5, 2.0, 3.0};
    double worst_slack = 1e300;
    for (int i = 0; i < 1000; ++i) {
        const int d = 2 + i % 2;
        density_operator rho(random_density_matrix(d, d, gen), {d});
        density_operator sigma(random_density_matrix(d, d, gen), {d});
        povm pv = random_povm(d, 2, gen);
        const double alpha = alphas[i % 4];
        nagaoka_check c = verify_nagaoka(rho, sigma, pv.elements[0], alpha);
        ++r.cases;
        if (!c.holds) note_failure(r, "case " + std::to_string(i));
        if (std::isfinite(c.divergence))
            worst_slack = std::min(worst_slack, c.divergence - c.bound);
    }
    metric(r, "min_divergence_minus_bound", worst_slack);
    r.passed = r.failures == 0;
    return r;
}

suite_result suite_king(std::uint64_t seed, int restarts) {
    suite_result r;
    r.name = "king";
    rng gen = rng::derived(seed, 0xC1);
    budget b{std::max(8, restarts / 2), 2000, seed ^ 0xC2};
    double worst_nu_gap = 0.0;
    for (int i = 0; i < 200; ++i) {
        std::vector<std::pair<complex_matrix, complex_matrix>> terms;
        const int nt = 1 + static_cast<int>(gen.uniform_index(4));
        for (int t = 0; t < nt; ++t)
            terms.emplace_back(gen.uniform(0.2, 2.0) * random_density_matrix(2, 2, gen),
                               gen.uniform(0.2, 2.0) * random_density_matrix(2, 2, gen));
        kraus_channel ch = random_cptp(2, 2, 2 + static_cast<int>(gen.uniform_index(3)), gen);
        ++r.cases;
        for (double alpha : {1.0, 1.5, 2.0, 4.0}) {
            king_check kc = verify_king(ch, terms, alpha, 1e-6, b);
            if (!kc.holds)
                note_failure(r, "king inequality failed, case " + std::to_string(i) + " alpha " +
                                    std::to_string(alpha));
            // certify nu against the dense Bloch grid
            const double nu_grid = nu_alpha_grid(ch, alpha, 721, 361);
            worst_nu_gap = std::max(worst_nu_gap, std::abs(kc.nu - nu_grid));
            if (std::abs(kc.nu - nu_grid) > 1e-4)
                note_failure(r, "nu certification failed, case " + std::to_string(i) + " alpha " +
                                    std::to_string(alpha));
        }
    }
    metric(r, "worst_nu_vs_grid_gap", worst_nu_gap);
    r.passed = r.failures == 0;
    return r;
}

suite_result suite_chi_alpha(std::uint64_t seed, int restarts) {
    suite_result r;
    r.name = "chi-alpha";
    budget b{restarts, 2000, seed ^ 0xD1};
    rng gen = rng::derived(seed, 0xD2);
    double worst_over = -1e300, worst_under = -1e300;
    for (int i = 0; i < 20; ++i) {
        kraus_channel ch = random_cptp(2, 2, 2 + i % 3, gen);
        capacity_result chi = holevo_information(ch, b);
        for (double alpha : {1.5, 2.0, 3.0}) {
            capacity_result res = alpha_holevo(ch, alpha, b, &chi);
            ++r.cases;
            const double over = res.lower_bound - res.value;  // must be <= 1e-4
            const double under = res.value - res.lower_bound;  // must be <= 5e-3
            worst_over = std::max(worst_over, over);
            worst_under = std::max(worst_under, under);
            if (over > 1e-4)
                note_failure(r, "ensemble route exceeds radius at channel " + std::to_string(i));
            if (under > 5e-3)
                note_failure(r, "ensemble route too far below radius at channel " +
                                    std::to_string(i));
        }
    }
    metric(r, "worst_ensemble_minus_radius", worst_over);
    metric(r, "worst_radius_minus_ensemble", worst_under);
    r.passed = r.failures == 0;
    return r;
}

suite_result suite_limits(std::uint64_t seed, int restarts) {
    suite_result r;
    r.name = "limits";
    budget b{restarts, 2000, seed ^ 0xE1};
    rng gen = rng::derived(seed, 0xE2);
    double worst_chi = 0.0, worst_k = 0.0, worst_eq = 0.0;
    for (int i = 0; i < 10; ++i) {
        kraus_channel ch = random_cptp(2, 2, 2 + i % 3, gen);
        capacity_result chi_full = holevo_information(ch, b);
        const double chi = chi_full.value;
        const double k = information_radius(ch, b).value;
        capacity_result near_one = alpha_holevo(ch, 1.001, b, &chi_full);
        ++r.cases;
        worst_eq = std::max(worst_eq, std::abs(chi - k));
        worst_chi = std::max(worst_chi, std::abs(near_one.lower_bound - chi));
        worst_k = std::max(worst_k, std::abs(near_one.value - k));
        if (std::abs(chi - k) > 2e-4)
            note_failure(r, "chi != K at channel " + std::to_string(i));
        if (std::abs(near_one.lower_bound - chi) > 5e-3)
            note_failure(r, "chi_alpha(1.001) far from chi at channel " + std::to_string(i));
        if (std::abs(near_one.value - k) > 5e-3)
            note_failure(r, "K_alpha(1.001) far from K at channel " + std::to_string(i));
    }
    metric(r, "worst_abs_chi_minus_k", worst_eq);
    metric(r, "worst_chi_limit_gap", worst_chi);
    metric(r, "worst_k_limit_gap", worst_k);
    r.passed = r.failures == 0;
    return r;
}

suite_result suite_closed_forms(std::uint64_t seed, int restarts) {
    suite_result r;
    r.name = "closed-forms";
    budget b{restarts, 2000, seed ^ 0xF1};
    for (double p : {0.05, 0.1, 0.25}) {
        const double got = holevo_information(bsc_channel(p), b).value;
        const double expect = 1.0 - binary_entropy(p);
        ++r.cases;
        if (std::abs(got - expect) > 1e-5)
            note_failure(r, "BSC capacity off at p=" + std::to_string(p));
    }
    for (double lam : {0.2, 0.5, 0.9}) {
        const double got = holevo_information(depolarizing_channel(lam), b).value;
        const double expect = 1.0 - binary_entropy(0.5 * (1.0 + lam));
        ++r.cases;
        if (std::abs(got - expect) > 1e-4)
            note_failure(r, "depolarizing capacity off at lambda=" + std::to_string(lam));
    }
    {
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (is_entanglement_breaking(depolarizing_channel(mid)).choi_min_pt_eigenvalue >= 0.0)
                lo = mid;
            else
                hi = mid;
        }
        const double boundary = 0.5 * (lo + hi);
        ++r.cases;
        metric(r, "eb_boundary", boundary);
        if (std::abs(boundary - 1.0 / 3.0) > 1e-9) note_failure(r, "EB boundary bisection off");
    }
    r.passed = r.failures == 0;
    return r;
}

suite_result suite_success_bound(std::uint64_t seed, int restarts) {
    suite_result r;
    r.name = "success-bound";
    budget b{restarts, 2000, seed ^ 0x71};

    // replacement channel: bound met with equality
    rng gen = rng::derived(seed, 0x72);
    density_operator omega(random_density_matrix(2, 2, gen), {2});
    kraus_channel rep = replacement_channel(omega, 2);
    for (int n : {1, 2}) {
        for (int l : {2, 4}) {
            feedback_protocol p = random_protocol(rep, n, l, 2, 2, 2, seed + 10 * n + l);
            simulation_report sr =
                verify_strong_converse_bound(p, rep, decoder_strategy::best, nullptr, b);
            ++r.cases;
            if (!sr.bound_holds)
                note_failure(r, "replacement bound violated n=" + std::to_string(n));
            if (std::abs(sr.p_succ - 1.0 / l) > 1e-9 || std::abs(sr.bound - 1.0 / l) > 1e-6)
                note_failure(r, "replacement equality off n=" + std::to_string(n) +
                                    " L=" + std::to_string(l));
        }
    }

    // EB depolarizing at rate chi + 0.5, twenty random two-round protocols
    kraus_channel dep = depolarizing_channel(0.25);
    const double chi = holevo_information(dep, b).value;
    const int n = 2;
    const int l = std::max(2, static_cast<int>(std::ceil(std::exp2(n * (chi + 0.5)))));
    feedback_protocol probe = random_protocol(dep, n, l, 2, 2, 2, seed);
    exponent_curve curve = strong_converse_exponent(dep, probe.rate(), {}, b);
    double min_margin = 1e300;
    for (int s = 0; s < 20; ++s) {
        feedback_protocol p = random_protocol(dep, n, l, 2, 2, 2, seed + 100 + s);
        simulation_report sr =
            verify_strong_converse_bound(p, dep, decoder_strategy::best, &curve, b);
        ++r.cases;
        min_margin = std::min(min_margin, sr.margin);
        if (!sr.bound_holds)
            note_failure(r, "depolarizing bound violated at seed " + std::to_string(s));
    }
    metric(r, "min_margin", min_margin);
    metric(r, "exponent_at_rate", curve.exponent);
    r.passed = r.failures == 0;
    return r;
}

suite_result suite_separability(std::uint64_t seed, int restarts) {
    suite_result r;
    r.name = "separability";
    (void)restarts;

    kraus_channel dep = depolarizing_channel(0.25);
    const int n = 2;
    double min_pt = 1e300;
    for (int s = 0; s < 20; ++s) {
        feedback_protocol p = random_protocol(dep, n, 3, 2, 2, 2, seed + 100 + s);
        auto entries = verify_separability(simulate(p, dep));
        ++r.cases;
        for (const auto& e : entries) {
            min_pt = std::min(min_pt, e.min_pt_eigenvalue);
            if (!e.ppt)
                note_failure(r, "PPT violated in EB run seed " + std::to_string(s) + " round " +
                                    std::to_string(e.round));
        }
    }
    metric(r, "min_pt_eigenvalue_eb_runs", min_pt);

    // control: entangled encoder over the identity channel must violate PPT
    {
        feedback_protocol control;
        control.n_rounds = 1;
        control.message_count = 2;
        control.feedback_dims = {1};
        control.alice_dims = {2, 2};
        control.bob_dims = {1};
        control.initial_alice = {density_operator::pure(basis_ket(2, 0)),
                                 density_operator::pure(basis_ket(2, 1))};
        control.initial_bob = ensemble({1.0}, {density_operator::pure(basis_ket(1, 0))});
        std::vector<cplx> bell = {1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0)};
        control.encoders.push_back(
            replacement_channel(density_operator::pure(bell, {2, 2}), 2));
        auto entries = verify_separability(simulate(control, identity_channel(2)));
        ++r.cases;
        bool violated = false;
        for (const auto& e : entries)
            if (!e.ppt && e.stage == stage_kind::post_channel) violated = true;
        if (!violated) note_failure(r, "entangled control case did not violate PPT");
    }
    r.passed = r.failures == 0;
    return r;
}

suite_result suite_chain(std::uint64_t seed, int restarts) {
    suite_result r;
    r.name = "chain";
    budget b{restarts, 2000, seed ^ 0x91};
    rng mp_gen = rng::derived(seed, 0x92);

    std::vector<std::pair<std::string, kraus_channel>> channels;
    channels.emplace_back("depolarizing(0.25)", depolarizing_channel(0.25));
    channels.emplace_back("dephasing(0.5)", dephasing_channel(0.5));
    {
        // random qubit measure-and-prepare channel (EB by construction)
        povm pv = random_povm(2, 3, mp_gen);
        std::vector<density_operator> prep;
        for (int m = 0; m < 3; ++m)
            prep.emplace_back(random_density_matrix(2, 2, mp_gen), std::vector<int>{2});
        channels.emplace_back("measure-prepare", measure_prepare_to_kraus(
                                                     measure_prepare_channel(pv, prep)));
    }

    std::vector<double> chis;
    for (const auto& [label, ch] : channels) chis.push_back(holevo_information(ch, b).value);

    double min_slack = 1e300, worst_defect = 0.0;
    for (int idx = 0; idx < 10; ++idx) {
        const auto& [label, ch] = channels[idx % channels.size()];
        const double chi = chis[idx % channels.size()];
        const int n = 1 + idx % 3;
        feedback_protocol p = random_protocol(ch, n, 2, 2, 2, 2, seed + 200 + idx);
        chain_report chain = verify_weak_converse_chain(simulate(p, ch), chi);
        ++r.cases;
        worst_defect = std::max(worst_defect, chain.max_identity_defect);
        for (const auto& rr : chain.rounds) min_slack = std::min(min_slack, rr.chain_slack);
        if (!chain.holds) note_failure(r, "chain violated for " + label + " n=" + std::to_string(n));
        if (chain.cumulative_mi > n * chi + 1e-6)
            note_failure(r, "cumulative bound violated for " + label);
    }
    metric(r, "min_chain_slack", min_slack);
    metric(r, "max_cmi_identity_defect", worst_defect);
    r.passed = r.failures == 0;
    return r;
}

suite_result suite_additivity(std::uint64_t seed, int restarts) {
    suite_result r;
    r.name = "additivity";
    budget b{restarts, 2000, seed ^ 0xAA};
    for (double lam : {0.2, 0.3}) {
        additivity_report rep = additivity_check(depolarizing_channel(lam), b);
        ++r.cases;
        metric(r, "gap_lambda_" + std::to_string(lam), rep.gap);
        if (!rep.lower_ok)
            note_failure(r, "two-copy search below 2*chi at lambda=" + std::to_string(lam));
        if (!rep.additive_within_tol)
            note_failure(r, "additivity gap above tolerance at lambda=" + std::to_string(lam));
    }
    r.passed = r.failures == 0;
    return r;
}

}  // namespace

std::vector<std::string> suite_names() {
    return {"axioms",       "nagaoka",      "king",  "chi-alpha", "limits",
            "closed-forms", "success-bound",     "separability", "chain", "additivity"};
}

suite_result run_suite(const std::string& name, std::uint64_t seed, int restarts) {
    if (name == "axioms") return suite_axioms(seed, restarts);
    if (name == "nagaoka") return suite_nagaoka(seed, restarts);
    if (name == "king") return suite_king(seed, restarts);
    if (name == "chi-alpha") return suite_chi_alpha(seed, restarts);
    if (name == "limits") return suite_limits(seed, restarts);
    if (name == "closed-forms") return suite_closed_forms(seed, restarts);
    if (name == "success-bound") return suite_success_bound(seed, restarts);
    if (name == "separability") return suite_separability(seed, restarts);
    if (name == "chain") return suite_chain(seed, restarts);
    if (name == "additivity") return suite_additivity(seed, restarts);
    throw usage_error("unknown suite '" + name + "'");
}

}  // namespace sc
