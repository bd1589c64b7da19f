#include "sc/divergences.hpp"

#include <algorithm>
#include <cmath>

namespace sc {

namespace {

// log2 Tr[S^alpha] for PSD S given by its eigenvalues, computed in log space
// so very large alpha cannot overflow.
double log2_trace_power(const std::vector<double>& eigs, double alpha) {
    double smax = 0.0;
    for (double s : eigs) smax = std::max(smax, s);
    if (smax <= 0.0) return -divergence_infinity;
    double acc = 0.0;
    for (double s : eigs) {
        if (s <= 0.0) continue;
        acc += std::exp2(alpha * std::log2(s / smax));
    }
    return alpha * std::log2(smax) + std::log2(acc);
}

struct support_info {
    spectrum sp;
    double cutoff = 0.0;
    double kernel_mass = 0.0;   // Tr[Pi_perp rho]
    double support_mass = 0.0;  // Tr[Pi rho]
};

support_info sigma_support_against(const complex_matrix& sigma, const complex_matrix& rho) {
    support_info info;
    info.sp = eigh(sigma, 1e-8);
    const double lam_max = info.sp.eigenvalues.empty() ? 0.0 : info.sp.eigenvalues.front();
    info.cutoff = support_cutoff_rel * std::max(lam_max, 0.0);
    const int d = sigma.rows;
    for (int j = 0; j < d; ++j) {
        // <v_j| rho |v_j>
        cplx acc = 0.0;
        for (int r = 0; r < d; ++r) {
            cplx row = 0.0;
            for (int c = 0; c < d; ++c) row += rho(r, c) * info.sp.vectors(c, j);
            acc += std::conj(info.sp.vectors(r, j)) * row;
        }
        const double mass = std::max(0.0, acc.real());
        if (info.sp.eigenvalues[j] <= info.cutoff)
            info.kernel_mass += mass;
        else
            info.support_mass += mass;
    }
    return info;
}

}  // namespace

renyi_order::renyi_order(double a) : alpha(a) {
    if (!(a > 0.0) || a == 1.0)
        throw invalid_order_error("renyi_order: alpha must lie in (0,1) u (1,inf)");
}

double sandwiched_renyi(const density_operator& rho, const density_operator& sigma,
                        double alpha) {
    if (rho.dim() != sigma.dim())
        throw dimension_mismatch_error("sandwiched_renyi: dimension mismatch");
    if (!(alpha > 0.0) || alpha == 1.0)
        throw invalid_order_error("sandwiched_renyi: alpha must lie in (0,1) u (1,inf)");

    support_info info = sigma_support_against(sigma.op, rho.op);
    if (info.support_mass <= 1e-12) return divergence_infinity;  // rho orthogonal to sigma
    if (alpha > 1.0 && info.kernel_mass > 1e-9) return divergence_infinity;

    const double c = (1.0 - alpha) / (2.0 * alpha);
    std::vector<double> f(info.sp.eigenvalues.size());
    for (size_t j = 0; j < f.size(); ++j) {
        const double lam = info.sp.eigenvalues[j];
        f[j] = (lam <= info.cutoff) ? 0.0 : std::pow(lam, c);
    }
    complex_matrix a = info.sp.apply(f);
    complex_matrix s = hermitize(a * rho.op * a);
    spectrum ssp = eigh(s, 1e-6 * std::max(1.0, max_abs(s)));
    // drop round-off eigenvalues of the sandwich: for alpha < 1 a spurious
    // 1e-16 eigenvalue would contribute at the 1e-8 level after powering
    const double s_cut =
        support_cutoff_rel * std::max(0.0, ssp.eigenvalues.empty() ? 0.0 : ssp.eigenvalues.front());
    std::vector<double> eigs(ssp.eigenvalues.size());
    for (size_t i = 0; i < eigs.size(); ++i)
        eigs[i] = (ssp.eigenvalues[i] <= s_cut) ? 0.0 : ssp.eigenvalues[i];
    const double lt = log2_trace_power(eigs, alpha);
    if (lt == -divergence_infinity) return divergence_infinity;
    return lt / (alpha - 1.0);
}

double sandwiched_renyi(const density_operator& rho, const density_operator& sigma,
                        const renyi_order& a) {
    return sandwiched_renyi(rho, sigma, a.alpha);
}

double relative_entropy(const density_operator& rho, const density_operator& sigma) {
    if (rho.dim() != sigma.dim())
        throw dimension_mismatch_error("relative_entropy: dimension mismatch");
    support_info info = sigma_support_against(sigma.op, rho.op);
    if (info.kernel_mass > 1e-9) return divergence_infinity;

    // Tr[rho log2 rho]
    spectrum rsp = eigh(rho.op, 1e-8);
    double term1 = 0.0;
    for (double lam : rsp.eigenvalues)
        if (lam > 0.0) term1 += lam * std::log2(lam);

    // Tr[rho log2 sigma] on sigma's support
    const int d = rho.dim();
    double term2 = 0.0;
    for (int j = 0; j < d; ++j) {
        const double lam = info.sp.eigenvalues[j];
        if (lam <= info.cutoff) continue;
        cplx acc = 0.0;
        for (int r = 0; r < d; ++r) {
            cplx row = 0.0;
            for (int c2 = 0; c2 < d; ++c2) row += rho.op(r, c2) * info.sp.vectors(c2, j);
            acc += std::conj(info.sp.vectors(r, j)) * row;
        }
        term2 += std::max(0.0, acc.real()) * std::log2(lam);
    }
    return term1 - term2;
}

double von_neumann_entropy(const complex_matrix& psd) {
    spectrum sp = eigh(psd, 1e-7 * std::max(1.0, max_abs(psd)));
    double h = 0.0;
    for (double lam : sp.eigenvalues)
        if (lam > 0.0) h -= lam * std::log2(lam);
    return h;
}

double von_neumann_entropy(const density_operator& rho) { return von_neumann_entropy(rho.op); }

double mutual_information(const density_operator& rho, const bipartite_cut& cut) {
    if (cut.d_a * cut.d_b != rho.dim())
        throw dimension_mismatch_error("mutual_information: cut does not factor the state");
    const std::vector<int> dims = {cut.d_a, cut.d_b};
    const double ha = von_neumann_entropy(partial_trace(rho.op, dims, {0}));
    const double hb = von_neumann_entropy(partial_trace(rho.op, dims, {1}));
    const double hab = von_neumann_entropy(rho.op);
    return ha + hb - hab;
}

double conditional_mutual_information(const density_operator& rho, const mi_partition& p) {
    const int n = static_cast<int>(rho.dims.size());
    std::vector<int> seen(n, 0);
    auto mark = [&](const std::vector<int>& g) {
        for (int i : g) {
            if (i < 0 || i >= n || seen[i])
                throw dimension_mismatch_error("conditional_mutual_information: bad partition");
            seen[i] = 1;
        }
    };
    mark(p.a);
    mark(p.b);
    mark(p.c);

    auto keep_sorted = [](std::vector<int> u, const std::vector<int>& v) {
        u.insert(u.end(), v.begin(), v.end());
        std::sort(u.begin(), u.end());
        return u;
    };
    auto h_of = [&](const std::vector<int>& keep) {
        if (keep.empty()) return 0.0;
        return von_neumann_entropy(partial_trace(rho.op, rho.dims, keep));
    };
    const double hac = h_of(keep_sorted(p.a, p.c));
    const double hbc = h_of(keep_sorted(p.b, p.c));
    const double habc = h_of(keep_sorted(keep_sorted(p.a, p.b), p.c));
    const double hc = h_of(keep_sorted(p.c, {}));
    return hac + hbc - habc - hc;
}

complex_matrix theta_conjugation(const complex_matrix& sigma, const complex_matrix& rho) {
    complex_matrix root = fractional_power(sigma, 0.5);
    return hermitize(root * rho * root);
}

kraus_map theta_composed_channel(const complex_matrix& sigma_power_half, const kraus_map& channel) {
    std::vector<complex_matrix> ops;
    ops.reserve(channel.ops.size());
    for (const auto& k : channel.ops) ops.push_back(sigma_power_half * k);
    return kraus_map(std::move(ops), channel.d_in, channel.d_out);
}

sandwich_evaluator::sandwich_evaluator(const complex_matrix& sigma, double alpha)
    : alpha_(alpha) {
    if (!(alpha > 0.0) || alpha == 1.0)
        throw invalid_order_error("sandwich_evaluator: alpha must lie in (0,1) u (1,inf)");
    spectrum sp = eigh(hermitize(sigma), 1e-8);
    const double lam_max = sp.eigenvalues.empty() ? 0.0 : sp.eigenvalues.front();
    const double cutoff = support_cutoff_rel * std::max(lam_max, 0.0);
    const double c = (1.0 - alpha) / (2.0 * alpha);
    const int d = sigma.rows;
    std::vector<double> f(sp.eigenvalues.size()), k(sp.eigenvalues.size());
    for (size_t j = 0; j < f.size(); ++j) {
        const bool in_kernel = sp.eigenvalues[j] <= cutoff;
        f[j] = in_kernel ? 0.0 : std::pow(sp.eigenvalues[j], c);
        k[j] = in_kernel ? 1.0 : 0.0;
        if (in_kernel) full_support_ = false;
    }
    half_power_ = sp.apply(f);
    kernel_proj_ = full_support_ ? complex_matrix(d, d) : sp.apply(k);
}

double sandwich_evaluator::operator()(const complex_matrix& rho) const {
    if (!full_support_) {
        double kernel_mass = 0.0;
        for (int i = 0; i < rho.rows; ++i)
            for (int j = 0; j < rho.cols; ++j)
                kernel_mass += (kernel_proj_(j, i) * rho(i, j)).real();
        if (1.0 - kernel_mass <= 1e-12) return divergence_infinity;  // orthogonal
        if (alpha_ > 1.0 && kernel_mass > 1e-9) return divergence_infinity;
    }
    complex_matrix s = hermitize(half_power_ * rho * half_power_);
    spectrum ssp = eigh(s, 1e-6 * std::max(1.0, max_abs(s)));
    const double s_cut =
        support_cutoff_rel * std::max(0.0, ssp.eigenvalues.empty() ? 0.0 : ssp.eigenvalues.front());
    std::vector<double> eigs(ssp.eigenvalues.size());
    for (size_t i = 0; i < eigs.size(); ++i)
        eigs[i] = (ssp.eigenvalues[i] <= s_cut) ? 0.0 : ssp.eigenvalues[i];
    const double lt = log2_trace_power(eigs, alpha_);
    if (lt == -divergence_infinity) return divergence_infinity;
    return lt / (alpha_ - 1.0);
}

relent_evaluator::relent_evaluator(const complex_matrix& sigma) {
    spectrum sp = eigh(hermitize(sigma), 1e-8);
    const double lam_max = sp.eigenvalues.empty() ? 0.0 : sp.eigenvalues.front();
    const double cutoff = support_cutoff_rel * std::max(lam_max, 0.0);
    const int d = sigma.rows;
    std::vector<double> f(sp.eigenvalues.size()), k(sp.eigenvalues.size());
    for (size_t j = 0; j < f.size(); ++j) {
        const bool in_kernel = sp.eigenvalues[j] <= cutoff;
        f[j] = in_kernel ? 0.0 : std::log2(sp.eigenvalues[j]);
        k[j] = in_kernel ? 1.0 : 0.0;
        if (in_kernel) full_support_ = false;
    }
    log_sigma_ = sp.apply(f);
    kernel_proj_ = full_support_ ? complex_matrix(d, d) : sp.apply(k);
}

double relent_evaluator::operator()(const complex_matrix& rho) const {
    if (!full_support_) {
        double kernel_mass = 0.0;
        for (int i = 0; i < rho.rows; ++i)
            for (int j = 0; j < rho.cols; ++j)
                kernel_mass += (kernel_proj_(j, i) * rho(i, j)).real();
        if (kernel_mass > 1e-9) return divergence_infinity;
    }
    spectrum rsp = eigh(hermitize(rho), 1e-7 * std::max(1.0, max_abs(rho)));
    double term1 = 0.0;
    for (double lam : rsp.eigenvalues)
        if (lam > 0.0) term1 += lam * std::log2(lam);
    double term2 = 0.0;
    for (int i = 0; i < rho.rows; ++i)
        for (int j = 0; j < rho.cols; ++j) term2 += (log_sigma_(j, i) * rho(i, j)).real();
    return term1 - term2;
}

norm_estimate one_to_alpha_norm(const kraus_map& m, double alpha, const budget& b) {
    if (alpha < 1.0) throw invalid_order_error("one_to_alpha_norm: alpha must be >= 1");
    norm_estimate est;

    if (alpha == 1.0) {
        // for CP maps and PSD inputs, ||M(rho)||_1 = Tr[rho M^adj(I)]
        spectrum sp = eigh(hermitize(m.apply_adjoint(complex_matrix::identity(m.d_out))), 1e-8);
        est.value = sp.eigenvalues.front();
        est.witness.resize(m.d_in);
        for (int i = 0; i < m.d_in; ++i) est.witness[i] = sp.vectors(i, 0);
        est.evaluations = 1;
        return est;
    }

    auto f = [&](const std::vector<cplx>& psi) {
        return schatten_norm(hermitize(m.apply(outer(psi))), alpha);
    };

    // fixed-point ascent: psi <- top eigenvector of M^adj((Y/ymax)^(alpha-1)),
    // the first-order condition of the norm on the sphere
    auto fixed_point_ascend = [&](std::vector<cplx> psi, rng& gen) {
        pure_state_opt cur;
        cur.state = std::move(psi);
        cur.value = f(cur.state);
        ++est.evaluations;
        int stall = 0;
        for (int it = 0; it < 200 && stall < 3; ++it) {
            complex_matrix y = hermitize(m.apply(outer(cur.state)));
            spectrum ysp = eigh(y, 1e-7 * std::max(1.0, max_abs(y)));
            const double ymax = ysp.eigenvalues.empty() ? 0.0 : ysp.eigenvalues.front();
            if (ymax <= 0.0) break;
            std::vector<double> w(ysp.eigenvalues.size());
            for (size_t i = 0; i < w.size(); ++i) {
                const double s = std::max(0.0, ysp.eigenvalues[i]) / ymax;
                w[i] = (s > 0.0) ? std::pow(s, alpha - 1.0) : 0.0;
            }
            complex_matrix g = hermitize(m.apply_adjoint(ysp.apply(w)));
            spectrum gsp = eigh(g, 1e-7 * std::max(1.0, max_abs(g)));
            std::vector<cplx> cand(m.d_in);
            for (int i = 0; i < m.d_in; ++i) cand[i] = gsp.vectors(i, 0);
            const double v = f(cand);
            ++est.evaluations;
            if (v > cur.value + 1e-13 * std::max(1.0, std::abs(cur.value))) {
                cur.value = v;
                cur.state = std::move(cand);
                stall = 0;
            } else {
                if (v > cur.value) {
                    cur.value = v;
                    cur.state = std::move(cand);
                }
                ++stall;
            }
        }
        // short stochastic polish in case the fixed point is a saddle
        pure_state_opt polished = climb_pure_state(f, cur.state, gen, 150);
        est.evaluations += polished.evaluations;
        if (polished.value < cur.value) return cur;
        return polished;
    };

    const int restarts = std::max(1, b.restarts);
    for (int r = 0; r < restarts; ++r) {
        rng gen = rng::derived(b.seed, 7000 + static_cast<std::uint64_t>(r));
        std::vector<cplx> start = (r < m.d_in) ? basis_ket(m.d_in, r)
                                               : random_pure_state(m.d_in, gen);
        pure_state_opt got = fixed_point_ascend(std::move(start), gen);
        if (r == 0 || got.value > est.value) {
            est.value = got.value;
            est.witness = std::move(got.state);
        }
    }
    return est;
}

double nagaoka_bound(double p, double q, double alpha) {
    if (alpha <= 1.0) throw invalid_order_error("nagaoka_bound: alpha must be > 1");
    if (p < -1e-9 || p > 1.0 + 1e-9 || q < -1e-9 || q > 1.0 + 1e-9)
        throw invalid_probability_error("nagaoka_bound: p, q must lie in [0, 1]");
    p = std::clamp(p, 0.0, 1.0);
    q = std::clamp(q, 0.0, 1.0);
    if (p == 0.0) return -divergence_infinity;
    if (q == 0.0) return divergence_infinity;
    return (alpha * std::log2(p) + (1.0 - alpha) * std::log2(q)) / (alpha - 1.0);
}

nagaoka_check verify_nagaoka(const density_operator& rho, const density_operator& sigma,
                             const complex_matrix& test_op, double alpha, double slack) {
    if (test_op.dim() != rho.dim())
        throw dimension_mismatch_error("verify_nagaoka: test operator dimension mismatch");
    spectrum tsp = eigh(hermitize(test_op), 1e-8);
    if (tsp.eigenvalues.back() < -1e-9 || tsp.eigenvalues.front() > 1.0 + 1e-9)
        throw invalid_probability_error("verify_nagaoka: test operator outside [0, I]");

    const double p = std::clamp(trace(test_op * rho.op).real(), 0.0, 1.0);
    const double q = std::clamp(trace(test_op * sigma.op).real(), 0.0, 1.0);
    nagaoka_check out;
    out.bound = nagaoka_bound(p, q, alpha);
    out.divergence = sandwiched_renyi(rho, sigma, alpha);
    out.holds = out.divergence >= out.bound - slack;
    return out;
}

king_check verify_king(const kraus_map& m,
                       const std::vector<std::pair<complex_matrix, complex_matrix>>& terms,
                       double alpha, double slack, const budget& b) {
    if (terms.empty()) throw invalid_parameter_error("verify_king: no product terms");
    const int da = terms.front().first.dim();
    const int db = terms.front().second.dim();
    if (da != m.d_in) throw dimension_mismatch_error("verify_king: A factor dim != map input");

    complex_matrix p_ab(da * db, da * db);
    for (const auto& [cj, dj] : terms) {
        for (const auto* part : {&cj, &dj}) {
            spectrum sp = eigh(hermitize(*part), 1e-8);
            if (!sp.eigenvalues.empty() &&
                sp.eigenvalues.back() < -1e-9 * std::max(1.0, sp.eigenvalues.front()))
                throw not_separable_input_error("verify_king: product factor is not PSD");
        }
        p_ab = p_ab + kron(cj, dj);
    }

    kraus_map extended(
        [&] {
            std::vector<complex_matrix> ops;
            for (const auto& k : m.ops) ops.push_back(kron(k, complex_matrix::identity(db)));
            return ops;
        }(),
        da * db, m.d_out * db);

    king_check out;
    out.lhs = schatten_norm(hermitize(extended.apply(p_ab)), alpha);
    out.nu = one_to_alpha_norm(m, alpha, b).value;
    out.rhs = out.nu * schatten_norm(hermitize(partial_trace(p_ab, {da, db}, {1})), alpha);
    out.holds = out.lhs <= out.rhs + slack;
    return out;
}

}  // namespace sc
