#include "sc/capacities.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

namespace sc {

namespace {

complex_matrix apply_pure(const kraus_channel& ch, const std::vector<cplx>& psi) {
    return hermitize(ch.apply(outer(psi)));
}

// (1 - delta) m + delta I/d, keeping sigma iterates strictly positive so the
// divergence evaluators never hit the +inf branch during certification.
complex_matrix mix_delta(const complex_matrix& m, double delta) {
    const int d = m.dim();
    return (1.0 - delta) * m + (delta / d) * complex_matrix::identity(d);
}

complex_matrix log2_regularized(const complex_matrix& psd, double rel_eps = 1e-13) {
    spectrum sp = eigh(hermitize(psd), 1e-7 * std::max(1.0, max_abs(psd)));
    const double scale = std::max(sp.eigenvalues.empty() ? 0.0 : sp.eigenvalues.front(), 1e-300);
    std::vector<double> f(sp.eigenvalues.size());
    for (size_t i = 0; i < f.size(); ++i)
        f[i] = std::log2(std::max(sp.eigenvalues[i], rel_eps * scale));
    return sp.apply(f);
}

void normalize_ket(std::vector<cplx>& v) {
    double n = 0.0;
    for (const cplx& z : v) n += std::norm(z);
    n = std::sqrt(n);
    for (cplx& z : v) z /= n;
}

// sup over pure inputs of f(N(psi)); dense Bloch scan plus polish for qubit
// inputs, multi-start hill climbing otherwise.
pure_state_opt sup_over_inputs(const kraus_channel& ch,
                               const std::function<double(const complex_matrix&)>& f,
                               const budget& b, bool thorough) {
    auto g = [&](const std::vector<cplx>& psi) { return f(apply_pure(ch, psi)); };
    if (ch.d_in == 2) {
        const int nphi = thorough ? 241 : 61;
        const int ntheta = thorough ? 121 : 31;
        pure_state_opt grid = bloch_grid_max(g, nphi, ntheta, b.seed ^ 0xb10c);
        budget asc{thorough ? 4 : 2, 300, b.seed ^ 0xa5ce};
        pure_state_opt climb = maximize_over_pure_states(2, g, asc);
        return climb.value > grid.value ? climb : grid;
    }
    budget asc{std::max(4, b.restarts), 500, b.seed ^ 0xa5ce};
    return maximize_over_pure_states(ch.d_in, g, asc);
}

struct finite_center {
    std::vector<double> weights;
    complex_matrix sigma;   // barycenter of the active outputs
    double value = 0.0;     // radius of the finite set (lower bound on K)
    int iterations = 0;
};

// Minimax center of a finite output set under the Umegaki divergence:
// Blahut-Arimoto weight iteration on sigma = sum_j w_j omega_j.
finite_center umegaki_center(const std::vector<complex_matrix>& outs, int max_iter = 4000) {
    finite_center fc;
    const size_t n = outs.size();
    fc.weights.assign(n, 1.0 / static_cast<double>(n));
    const int d = outs.front().dim();
    std::vector<double> dj(n);
    for (int it = 0; it < max_iter; ++it) {
        complex_matrix sigma(d, d);
        for (size_t j = 0; j < n; ++j) sigma = sigma + fc.weights[j] * outs[j];
        fc.sigma = hermitize(sigma);
        relent_evaluator ev(fc.sigma);
        double val = 0.0, worst = -1e300;
        for (size_t j = 0; j < n; ++j) {
            dj[j] = ev(outs[j]);
            val += fc.weights[j] * dj[j];
            worst = std::max(worst, dj[j]);
        }
        fc.value = val;
        fc.iterations = it + 1;
        if (worst - val < 1e-10) break;
        double z = 0.0;
        for (size_t j = 0; j < n; ++j) {
            fc.weights[j] *= std::exp2(dj[j]);
            z += fc.weights[j];
        }
        for (double& w : fc.weights) w /= z;
    }
    return fc;
}

// Weighted sandwich power sum T = sum_j u_j (sigma^c omega_j sigma^c)^alpha,
// accumulated in log scale across j so large alpha cannot overflow.
complex_matrix sandwich_power_sum(const complex_matrix& sigma_c,
                                  const std::vector<const complex_matrix*>& outs,
                                  const std::vector<double>& u, double alpha) {
    const int d = sigma_c.dim();
    struct piece {
        spectrum sp;
        double log2_lead;  // log2(u_j) + alpha log2(m_j)
        double m;
    };
    std::vector<piece> pieces;
    double lead_max = -1e300;
    for (size_t j = 0; j < outs.size(); ++j) {
        if (u[j] <= 0.0) continue;
        complex_matrix s = hermitize(sigma_c * (*outs[j]) * sigma_c);
        spectrum sp = eigh(s, 1e-6 * std::max(1.0, max_abs(s)));
        const double m = sp.eigenvalues.empty() ? 0.0 : std::max(sp.eigenvalues.front(), 0.0);
        if (m <= 0.0) continue;
        const double lead = std::log2(u[j]) + alpha * std::log2(m);
        lead_max = std::max(lead_max, lead);
        pieces.push_back({std::move(sp), lead, m});
    }
    complex_matrix t(d, d);
    if (pieces.empty()) return t;
    for (auto& pc : pieces) {
        const double scale = std::exp2(pc.log2_lead - lead_max);
        if (scale <= 0.0) continue;
        std::vector<double> f(pc.sp.eigenvalues.size());
        for (size_t i = 0; i < f.size(); ++i) {
            const double s = std::max(0.0, pc.sp.eigenvalues[i]) / pc.m;
            f[i] = (s > 0.0) ? scale * std::exp2(alpha * std::log2(s)) : 0.0;
        }
        t = t + pc.sp.apply(f);
    }
    return hermitize(t);
}

struct alpha_center_result {
    complex_matrix sigma;
    double value = 0.0;
    int iterations = 0;
    std::vector<double> mixture;  // minimax mode: tracked fixed-point weights
};

// inf_sigma of either max_j D_alpha(omega_j || sigma) (minimax mode, weights
// empty) or of the ensemble route objective
// (1/(alpha-1)) log2 sum_j p_j 2^((alpha-1) D_j) (weights = p).
//
// sigma follows the damped sandwich fixed point
//   sigma <- 0.5 sigma + 0.5 normalize(sum_j u_j (sigma^c omega_j sigma^c)^alpha);
// in minimax mode the mixture weights u track the worst members through a
// multiplicative update, so the iteration settles on the balanced center
// instead of chattering between near-active vertices.  The best iterate is
// kept throughout and polished by a stochastic descent on the square-root
// parameterization before returning.
alpha_center_result alpha_center(const std::vector<complex_matrix>& outs,
                                 const std::vector<double>& weights, double alpha,
                                 std::uint64_t seed, const complex_matrix* init = nullptr,
                                 int max_iter = 60) {
    const int d = outs.front().dim();
    const double delta = 1e-12;
    const bool route_mode = !weights.empty();
    const double c = (1.0 - alpha) / (2.0 * alpha);

    complex_matrix sigma;
    std::vector<double> umegaki_w(outs.size(), 1.0 / outs.size());
    if (!route_mode) {
        // the Umegaki center is an excellent warm start at any order, and
        // its weights seed the fixed-point mixture tracker
        finite_center fc = umegaki_center(outs);
        umegaki_w = fc.weights;
        sigma = (init != nullptr && init->dim() == d) ? mix_delta(*init, delta)
                                                      : mix_delta(fc.sigma, delta);
    } else if (init != nullptr && init->dim() == d) {
        sigma = mix_delta(*init, delta);
    } else {
        complex_matrix avg(d, d);
        for (size_t j = 0; j < outs.size(); ++j) avg = avg + weights[j] * outs[j];
        sigma = mix_delta(hermitize(avg), delta);
    }

    std::vector<double> dj(outs.size());
    auto objective = [&](const complex_matrix& sig, std::vector<double>& div) {
        sandwich_evaluator ev(sig, alpha);
        if (!route_mode) {
            double worst = -1e300;
            for (size_t j = 0; j < outs.size(); ++j) {
                div[j] = ev(outs[j]);
                worst = std::max(worst, div[j]);
            }
            return worst;
        }
        // log-sum-exp of (alpha-1) D_j + log2 p_j
        double lead = -1e300;
        for (size_t j = 0; j < outs.size(); ++j) {
            div[j] = ev(outs[j]);
            if (weights[j] > 0.0 && std::isfinite(div[j]))
                lead = std::max(lead, (alpha - 1.0) * div[j] + std::log2(weights[j]));
        }
        if (lead == -1e300) return divergence_infinity;
        double acc = 0.0;
        for (size_t j = 0; j < outs.size(); ++j) {
            if (weights[j] <= 0.0 || !std::isfinite(div[j])) continue;
            acc += std::exp2((alpha - 1.0) * div[j] + std::log2(weights[j]) - lead);
        }
        return (lead + std::log2(acc)) / (alpha - 1.0);
    };

    alpha_center_result res;
    std::vector<double> dj_tmp(outs.size());
    double f_cur = objective(sigma, dj);
    std::vector<const complex_matrix*> ptrs(outs.size());
    for (size_t j = 0; j < outs.size(); ++j) ptrs[j] = &outs[j];

    // persistent mixture weights for the fixed-point direction; tracks the
    // worst members multiplicatively (BA-like at alpha near 1)
    std::vector<double> wtrack = umegaki_w;

    // exact golden-section minimization of F along one Bloch coordinate;
    // the objective is convex along straight lines in sigma
    auto bloch_coordinate_pass = [&]() {
        if (d != 2) return false;
        bool improved = false;
        complex_matrix paulis[3];
        for (auto& p : paulis) p = complex_matrix(2, 2);
        paulis[0](0, 1) = 1.0;
        paulis[0](1, 0) = 1.0;
        paulis[1](0, 1) = cplx(0.0, -1.0);
        paulis[1](1, 0) = cplx(0.0, 1.0);
        paulis[2](0, 0) = 1.0;
        paulis[2](1, 1) = -1.0;
        for (int axis = 0; axis < 3; ++axis) {
            // current Bloch coordinate and admissible range inside the ball
            double coords[3];
            for (int k = 0; k < 3; ++k) coords[k] = trace(paulis[k] * sigma).real();
            const double other =
                coords[(axis + 1) % 3] * coords[(axis + 1) % 3] +
                coords[(axis + 2) % 3] * coords[(axis + 2) % 3];
            const double reach = std::sqrt(std::max(0.0, (1.0 - 1e-9) - other));
            auto g = [&](double t) {
                complex_matrix cand = sigma + (0.5 * (t - coords[axis])) * paulis[axis];
                std::vector<double> djc(outs.size());
                return objective(mix_delta(hermitize(cand), delta), djc);
            };
            double lo = -reach, hi = reach;
            const double gr = 0.6180339887498949;
            double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
            double f1 = g(x1), f2 = g(x2);
            for (int k = 0; k < 40; ++k) {
                if (f1 > f2) {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + gr * (hi - lo);
                    f2 = g(x2);
                } else {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - gr * (hi - lo);
                    f1 = g(x1);
                }
            }
            const double tbest = (f1 < f2) ? x1 : x2;
            const double fbest = std::min(f1, f2);
            if (fbest < f_cur - 1e-13) {
                sigma = mix_delta(
                    hermitize(sigma + (0.5 * (tbest - coords[axis])) * paulis[axis]), delta);
                f_cur = objective(sigma, dj);
                improved = true;
            }
        }
        return improved;
    };

    // the objective is convex along chords in sigma, so each candidate
    // direction is handled by a golden-section line search
    auto line_search = [&](const complex_matrix& dir) {
        auto g = [&](double gamma) {
            complex_matrix cand =
                mix_delta(hermitize((1.0 - gamma) * sigma + gamma * dir), delta);
            return objective(cand, dj_tmp);
        };
        double lo = 0.0, hi = 0.98;
        const double gr = 0.6180339887498949;
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = g(x1), f2 = g(x2);
        for (int k = 0; k < 18; ++k) {
            if (f1 > f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = g(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = g(x1);
            }
        }
        const double gbest = (f1 < f2) ? x1 : x2;
        return std::pair<double, double>(std::min(f1, f2), gbest);
    };

    for (int sweep = 0; sweep < max_iter; ++sweep) {
        res.iterations = sweep + 1;
        const double f_before = f_cur;
        bool improved = bloch_coordinate_pass();

        if (!route_mode) {
            const double worst = *std::max_element(dj.begin(), dj.end());
            double z = 0.0;
            for (size_t j = 0; j < outs.size(); ++j) {
                wtrack[j] = std::max(wtrack[j], 1e-18) *
                            (std::isfinite(dj[j]) ? std::exp2(4.0 * (dj[j] - worst)) : 1e-18);
                z += wtrack[j];
            }
            for (double& w : wtrack) w /= z;
        }

        std::vector<complex_matrix> dirs;
        // fixed-point directions: tracked weights and a sharp softmax
        for (int mode = 0; mode < 2; ++mode) {
            std::vector<double> u(outs.size(), 0.0);
            if (route_mode) {
                u = weights;
            } else if (mode == 0) {
                u = wtrack;
            } else {
                const double rate = std::min(alpha, 40.0);
                const double worst = *std::max_element(dj.begin(), dj.end());
                double z = 0.0;
                for (size_t j = 0; j < outs.size(); ++j) {
                    u[j] = std::isfinite(dj[j]) ? std::exp2(rate * (dj[j] - worst)) : 0.0;
                    z += u[j];
                }
                if (z <= 0.0) continue;
                for (double& w : u) w /= z;
            }
            complex_matrix t = sandwich_power_sum(fractional_power(sigma, c), ptrs, u, alpha);
            const double tr = trace(t).real();
            if (tr > 0.0) dirs.push_back((1.0 / tr) * t);
            if (route_mode) break;  // weights fixed, one direction suffices
        }
        dirs.push_back((1.0 / d) * complex_matrix::identity(d));
        {
            size_t worst_j = 0;
            for (size_t j = 1; j < outs.size(); ++j)
                if (dj[j] > dj[worst_j]) worst_j = j;
            dirs.push_back(outs[worst_j]);
        }

        double best_f = f_cur;
        complex_matrix best_sigma;
        for (const auto& dir : dirs) {
            auto [fv, gamma] = line_search(dir);
            if (fv < best_f - 1e-13) {
                best_f = fv;
                best_sigma = mix_delta(hermitize((1.0 - gamma) * sigma + gamma * dir), delta);
            }
        }
        if (best_sigma.rows == 0) {
            // kink stall: chords toward random states span the remaining
            // feasible directions the structured dictionary missed
            rng gen = rng::derived(seed, 0x5ca7 + static_cast<std::uint64_t>(sweep));
            for (int k = 0; k < 12; ++k) {
                complex_matrix tau = random_density_matrix(d, d, gen);
                auto [fv, gamma] = line_search(tau);
                if (fv < best_f - 1e-13) {
                    best_f = fv;
                    best_sigma =
                        mix_delta(hermitize((1.0 - gamma) * sigma + gamma * tau), delta);
                }
            }
        }
        if (best_sigma.rows != 0) {
            sigma = std::move(best_sigma);
            f_cur = objective(sigma, dj);
            improved = true;
        }
        if (!improved) break;
        if (f_before - f_cur < 1e-12 && sweep > 2) break;
    }

    res.sigma = std::move(sigma);
    res.value = f_cur;
    res.mixture = std::move(wtrack);
    return res;
}

std::vector<std::vector<cplx>> initial_states(int d, int count, std::uint64_t seed, int restart) {
    std::vector<std::vector<cplx>> st;
    if (restart == 0) {
        for (int i = 0; i < d && static_cast<int>(st.size()) < count; ++i)
            st.push_back(basis_ket(d, i));
        for (int i = 0; i < d && static_cast<int>(st.size()) < count; ++i)
            for (int j = i + 1; j < d && static_cast<int>(st.size()) < count; ++j) {
                std::vector<cplx> v(d, cplx(0.0, 0.0));
                v[i] = 1.0 / std::sqrt(2.0);
                v[j] = 1.0 / std::sqrt(2.0);
                st.push_back(std::move(v));
                std::vector<cplx> w(d, cplx(0.0, 0.0));
                w[i] = 1.0 / std::sqrt(2.0);
                w[j] = cplx(0.0, 1.0 / std::sqrt(2.0));
                if (static_cast<int>(st.size()) < count) st.push_back(std::move(w));
            }
    }
    rng gen = rng::derived(seed, 0xd1ce + static_cast<std::uint64_t>(restart));
    while (static_cast<int>(st.size()) < count) st.push_back(random_pure_state(d, gen));
    return st;
}

struct ba_run {
    double value = 0.0;
    std::vector<double> probs;
    std::vector<std::vector<cplx>> states;
    complex_matrix rho_bar;
    int iterations = 0;
};

double chi_of(const std::vector<double>& p, const std::vector<complex_matrix>& outs) {
    const int d = outs.front().dim();
    complex_matrix bar(d, d);
    for (size_t x = 0; x < p.size(); ++x) bar = bar + p[x] * outs[x];
    double h = von_neumann_entropy(hermitize(bar));
    for (size_t x = 0; x < p.size(); ++x) h -= p[x] * von_neumann_entropy(outs[x]);
    return h;
}

ba_run holevo_ba(const kraus_channel& ch, std::vector<std::vector<cplx>> states,
                 std::vector<double> probs, const budget& b, std::uint64_t salt) {
    ba_run run;
    run.states = std::move(states);
    if (probs.empty()) probs.assign(run.states.size(), 1.0 / run.states.size());
    run.probs = std::move(probs);
    const int max_iter = std::min(b.max_iter, 600);
    const size_t cap = run.states.size();

    std::vector<complex_matrix> outs;
    for (const auto& psi : run.states) outs.push_back(apply_pure(ch, psi));

    double prev = -1.0;
    int stable = 0;
    for (int it = 0; it < max_iter; ++it) {
        run.iterations = it + 1;
        const int d = ch.d_out;
        complex_matrix bar(d, d);
        for (size_t x = 0; x < run.probs.size(); ++x) bar = bar + run.probs[x] * outs[x];
        bar = hermitize(bar);
        relent_evaluator ev(bar);
        std::vector<double> dx(run.probs.size());
        double val = 0.0;
        for (size_t x = 0; x < run.probs.size(); ++x) {
            dx[x] = ev(outs[x]);
            // rho_bar >= p_x sigma_x, so D <= log2(1/p_x); replaces the +inf
            // that the support cutoff reports for nearly dead members
            if (!std::isfinite(dx[x])) dx[x] = std::log2(1.0 / std::max(run.probs[x], 1e-300));
            val += run.probs[x] * dx[x];
        }
        run.value = val;
        run.rho_bar = bar;

        // multiplicative weight update
        double z = 0.0;
        for (size_t x = 0; x < run.probs.size(); ++x) {
            run.probs[x] *= std::exp2(dx[x]);
            z += run.probs[x];
        }
        for (double& p : run.probs) p /= z;

        // prune dead members
        for (size_t x = run.probs.size(); x-- > 0;) {
            if (run.probs[x] < 1e-14 && run.probs.size() > 1) {
                run.probs.erase(run.probs.begin() + x);
                run.states.erase(run.states.begin() + x);
                outs.erase(outs.begin() + x);
            }
        }
        double renorm = 0.0;
        for (double p : run.probs) renorm += p;
        for (double& p : run.probs) p /= renorm;

        // gradient-directed state moves
        if (it % 4 == 3 || it == max_iter - 1) {
            complex_matrix logbar = log2_regularized(run.rho_bar);
            bool moved = false;
            for (size_t x = 0; x < run.states.size(); ++x) {
                complex_matrix g = hermitize(
                    ch.apply_adjoint(log2_regularized(outs[x]) - logbar));
                spectrum gsp = eigh(g, 1e-7 * std::max(1.0, max_abs(g)));
                std::vector<cplx> v(ch.d_in);
                for (int i = 0; i < ch.d_in; ++i) v[i] = gsp.vectors(i, 0);
                // phase-align v with the current state for stable interpolation
                cplx ov = 0.0;
                for (int i = 0; i < ch.d_in; ++i) ov += std::conj(run.states[x][i]) * v[i];
                if (std::abs(ov) > 1e-14)
                    for (auto& z2 : v) z2 *= std::conj(ov) / std::abs(ov);
                const double base = chi_of(run.probs, outs);
                double best = base;
                std::vector<cplx> best_state;
                for (double gamma : {1.0, 0.5, 0.25}) {
                    std::vector<cplx> cand(ch.d_in);
                    for (int i = 0; i < ch.d_in; ++i)
                        cand[i] = (1.0 - gamma) * run.states[x][i] + gamma * v[i];
                    normalize_ket(cand);
                    complex_matrix out_c = apply_pure(ch, cand);
                    std::vector<complex_matrix> outs_c = outs;
                    outs_c[x] = out_c;
                    const double cv = chi_of(run.probs, outs_c);
                    if (cv > best + 1e-13) {
                        best = cv;
                        best_state = std::move(cand);
                    }
                }
                if (!best_state.empty()) {
                    run.states[x] = best_state;
                    outs[x] = apply_pure(ch, run.states[x]);
                    moved = true;
                }
            }
            if (moved) continue;
        }

        // worst-case-state insertion keeps the search global
        if (it % 8 == 7 && run.states.size() < cap + 4) {
            relent_evaluator evd(mix_delta(run.rho_bar, 1e-9));
            budget probe{2, 150, b.seed ^ salt ^ static_cast<std::uint64_t>(it)};
            pure_state_opt viol = sup_over_inputs(
                ch, [&](const complex_matrix& m) { return evd(m); }, probe, false);
            if (viol.value > run.value + 1e-9) {
                run.states.push_back(viol.state);
                outs.push_back(apply_pure(ch, viol.state));
                for (double& p : run.probs) p *= 0.95;
                run.probs.push_back(0.05);
                continue;
            }
        }

        if (std::abs(run.value - prev) < 1e-12) {
            if (++stable >= 3) break;
        } else {
            stable = 0;
        }
        prev = run.value;
    }
    run.value = chi_of(run.probs, outs);
    return run;
}

ensemble make_ensemble(const std::vector<double>& probs,
                       const std::vector<std::vector<cplx>>& states) {
    std::vector<double> p;
    std::vector<density_operator> sts;
    double z = 0.0;
    for (size_t x = 0; x < probs.size(); ++x) {
        if (probs[x] < 1e-12) continue;
        p.push_back(probs[x]);
        sts.push_back(density_operator::pure(states[x]));
        z += probs[x];
    }
    for (double& v : p) v /= z;
    return ensemble(p, sts);
}

}  // namespace

double holevo_of_ensemble(const ensemble& e, const kraus_channel& ch) {
    std::vector<complex_matrix> outs;
    std::vector<double> p = e.probs;
    for (const auto& s : e.states) outs.push_back(hermitize(ch.apply(s.op)));
    return chi_of(p, outs);
}

capacity_result holevo_information(const kraus_channel& ch, const budget& b,
                                   const ensemble* warm_start) {
    const int cap = ch.d_in * ch.d_in;
    ba_run best;
    bool have = false;
    int total_iters = 0;
    const int restarts = std::max(1, b.restarts);
    for (int r = 0; r < restarts; ++r) {
        std::vector<std::vector<cplx>> init;
        std::vector<double> probs;
        if (r == 0 && warm_start != nullptr) {
            for (const auto& s : warm_start->states) {
                spectrum sp = eigh(s.op, 1e-8);
                std::vector<cplx> v(s.dim());
                for (int i = 0; i < s.dim(); ++i) v[i] = sp.vectors(i, 0);
                init.push_back(std::move(v));
            }
            probs = warm_start->probs;
        } else {
            init = initial_states(ch.d_in, cap, b.seed, r);
        }
        ba_run run = holevo_ba(ch, std::move(init), std::move(probs), b, 0x0badULL + r);
        total_iters += run.iterations;
        if (!have || run.value > best.value) {
            best = std::move(run);
            have = true;
        }
        if (r >= 2 && best.value > 0.0) {
            // early exit once restarts agree to optimizer precision
            if (std::abs(best.value - run.value) < 1e-9 && r >= std::min(4, restarts - 1)) break;
        }
    }

    // certify through the radius characterization: chi <= sup_rho D(N(rho)||rho_bar)
    relent_evaluator ev(mix_delta(best.rho_bar, 1e-9));
    pure_state_opt sup = sup_over_inputs(
        ch, [&](const complex_matrix& m) { return ev(m); }, b, true);

    // fold a discovered violator back in and re-polish once
    if (sup.value > best.value + 1e-7) {
        std::vector<std::vector<cplx>> states = best.states;
        std::vector<double> probs = best.probs;
        states.push_back(sup.state);
        for (double& p : probs) p *= 0.9;
        probs.push_back(0.1);
        ba_run polish = holevo_ba(ch, std::move(states), std::move(probs), b, 0x9011ULL);
        total_iters += polish.iterations;
        if (polish.value > best.value) best = std::move(polish);
        relent_evaluator ev2(mix_delta(best.rho_bar, 1e-9));
        sup = sup_over_inputs(
            ch, [&](const complex_matrix& m) { return ev2(m); }, b, true);
    }

    capacity_result res;
    res.value = best.value;
    res.lower_bound = best.value;
    res.ensemble_witness = make_ensemble(best.probs, best.states);
    res.sigma_witness = density_operator::unchecked(best.rho_bar, {ch.d_out});
    res.iterations = total_iters;
    res.gap_estimate = std::max(0.0, sup.value - best.value);
    return res;
}

capacity_result information_radius(const kraus_channel& ch, const budget& b) {
    std::vector<complex_matrix> active;
    for (int i = 0; i < ch.d_in; ++i) active.push_back(apply_pure(ch, basis_ket(ch.d_in, i)));
    {
        rng gen = rng::derived(b.seed, 0xaad5);
        active.push_back(apply_pure(ch, random_pure_state(ch.d_in, gen)));
        active.push_back(apply_pure(ch, random_pure_state(ch.d_in, gen)));
    }

    capacity_result res;
    finite_center fc;
    pure_state_opt sup;
    for (int round = 0; round < 60; ++round) {
        fc = umegaki_center(active);
        res.iterations += fc.iterations;
        relent_evaluator ev(mix_delta(fc.sigma, 1e-9));
        sup = sup_over_inputs(
            ch, [&](const complex_matrix& m) { return ev(m); }, b, true);
        res.gap_estimate = std::max(0.0, sup.value - fc.value);
        if (sup.value - fc.value <= 1e-7) break;
        complex_matrix cand = apply_pure(ch, sup.state);
        bool dup = false;
        for (const auto& m : active)
            if (max_abs(m - cand) < 1e-12) dup = true;
        if (dup) break;
        active.push_back(std::move(cand));
        if (active.size() > 40) {
            // drop the least-weighted pre-existing member, never the new one
            size_t drop = 0;
            for (size_t j = 1; j < fc.weights.size(); ++j)
                if (fc.weights[j] < fc.weights[drop]) drop = j;
            active.erase(active.begin() + drop);
        }
    }
    res.value = sup.value;
    res.sigma_witness = density_operator::unchecked(mix_delta(fc.sigma, 1e-9), {ch.d_out});
    return res;
}

capacity_result alpha_information_radius(const kraus_channel& ch, double alpha,
                                         const budget& b) {
    if (!(alpha > 1.0))
        throw invalid_order_error("alpha_information_radius: alpha must be > 1");
    std::vector<complex_matrix> active;
    std::vector<std::vector<cplx>> active_in;
    for (int i = 0; i < ch.d_in; ++i) {
        active_in.push_back(basis_ket(ch.d_in, i));
        active.push_back(apply_pure(ch, active_in.back()));
    }
    {
        rng gen = rng::derived(b.seed, 0xaad6);
        for (int k = 0; k < 2; ++k) {
            active_in.push_back(random_pure_state(ch.d_in, gen));
            active.push_back(apply_pure(ch, active_in.back()));
        }
    }

    capacity_result res;
    alpha_center_result ac;
    pure_state_opt sup;
    const complex_matrix* warm = nullptr;
    for (int round = 0; round < 60; ++round) {
        ac = alpha_center(active, {}, alpha, b.seed + round, warm);
        warm = &ac.sigma;
        res.iterations += ac.iterations;
        sandwich_evaluator ev(ac.sigma, alpha);
        sup = sup_over_inputs(
            ch, [&](const complex_matrix& m) { return ev(m); }, b, true);
        res.gap_estimate = std::max(0.0, sup.value - ac.value);
        if (sup.value - ac.value <= 2e-6) break;
        complex_matrix cand = apply_pure(ch, sup.state);
        bool dup = false;
        for (const auto& m : active)
            if (max_abs(m - cand) < 1e-12) dup = true;
        if (dup) break;
        active_in.push_back(sup.state);
        active.push_back(std::move(cand));
        if (active.size() > 40) {
            active.erase(active.begin());
            active_in.erase(active_in.begin());
        }
    }
    res.value = sup.value;
    res.lower_bound = ac.value;
    res.sigma_witness = density_operator::unchecked(ac.sigma, {ch.d_out});
    // the radius-achieving inputs; a natural seed for the ensemble route
    {
        std::vector<double> p(active_in.size(), 1.0 / active_in.size());
        std::vector<density_operator> sts;
        for (const auto& psi : active_in) sts.push_back(density_operator::pure(psi));
        res.ensemble_witness = ensemble(p, sts);
    }
    return res;
}

double alpha_holevo_of_ensemble(const ensemble& outputs, double alpha, const budget& b) {
    if (!(alpha > 1.0))
        throw invalid_order_error("alpha_holevo_of_ensemble: alpha must be > 1");
    std::vector<complex_matrix> outs;
    for (const auto& s : outputs.states) outs.push_back(s.op);
    alpha_center_result ac = alpha_center(outs, outputs.probs, alpha, b.seed ^ 0xe25);
    return ac.value;
}

capacity_result alpha_holevo(const kraus_channel& ch, double alpha, const budget& b,
                             const capacity_result* chi_hint) {
    capacity_result radius = alpha_information_radius(ch, alpha, b);
    capacity_result chi =
        (chi_hint != nullptr && chi_hint->ensemble_witness) ? *chi_hint
                                                            : holevo_information(ch, b);

    auto to_kets = [](const ensemble& e) {
        std::vector<std::vector<cplx>> kets;
        for (const auto& s : e.states) {
            spectrum sp = eigh(s.op, 1e-8);
            std::vector<cplx> v(s.dim());
            for (int i = 0; i < s.dim(); ++i) v[i] = sp.vectors(i, 0);
            kets.push_back(std::move(v));
        }
        return kets;
    };

    // The saddle carrying chi_alpha = K_alpha is supported on the maximizers
    // of D_alpha(N(psi) || sigma*) at the radius-optimal sigma*.  Collect the
    // distinct near-maximizers there, then add the chi-optimal ensemble
    // states and the radius-loop inputs as extras.
    std::vector<std::vector<cplx>> states;
    sandwich_evaluator ev_star(radius.sigma_witness->op, alpha);
    auto f_star = [&](const std::vector<cplx>& psi) { return ev_star(apply_pure(ch, psi)); };
    // keep only near-maximizers, spaced so a curve of maximizers is covered
    auto add_state = [&](const std::vector<cplx>& ket) {
        if (f_star(ket) < radius.value - 2e-3) return;
        for (const auto& have : states) {
            cplx ov = 0.0;
            for (size_t i = 0; i < ket.size(); ++i) ov += std::conj(have[i]) * ket[i];
            if (std::abs(ov) > 0.999) return;
        }
        if (states.size() < 32) states.push_back(ket);
    };
    {
        const sandwich_evaluator& ev = ev_star;
        auto f = [&](const std::vector<cplx>& psi) { return ev(apply_pure(ch, psi)); };
        const double sup = radius.value;
        if (ch.d_in == 2) {
            // the argmax set can be a curve on the Bloch sphere, so sample it
            // densely rather than keeping isolated maximizers
            const double pi = 3.14159265358979323846;
            for (int t = 0; t <= 120; ++t)
                for (int ph = 0; ph < 240; ++ph) {
                    auto psi = bloch_state(pi * t / 120.0, 2.0 * pi * ph / 240.0);
                    if (f(psi) >= sup - 1e-3) add_state(psi);
                    if (t == 0 || t == 120) break;
                }
        } else {
            for (int r = 0; r < std::max(8, b.restarts); ++r) {
                rng g2 = rng::derived(b.seed, 0xcafe + r);
                std::vector<cplx> start =
                    (r < ch.d_in) ? basis_ket(ch.d_in, r) : random_pure_state(ch.d_in, g2);
                pure_state_opt got = climb_pure_state(f, std::move(start), g2, 600);
                if (got.value >= sup - 1e-4) add_state(got.state);
            }
        }
    }
    for (auto& ket : to_kets(*chi.ensemble_witness)) add_state(ket);
    for (auto& ket : to_kets(*radius.ensemble_witness)) add_state(ket);
    if (states.empty()) {
        // fall back to the single best witness found during the radius run
        pure_state_opt sup = sup_over_inputs(
            ch, [&](const complex_matrix& m) { return ev_star(m); }, b, true);
        states.push_back(sup.state);
    }
    std::vector<complex_matrix> outs;
    for (const auto& psi : states) outs.push_back(apply_pure(ch, psi));

    // Double-oracle saddle solve: exponentiated-gradient ascent on the
    // weights over the current support (the route objective is concave in p,
    // with envelope gradient proportional to Q_x = 2^((alpha-1) D_x)), then
    // augment the support with the best-response state at the route's own
    // sigma until no column improves.
    std::vector<double> p(states.size(), 1.0 / states.size());
    complex_matrix sigma = radius.sigma_witness->op;
    double best_route = -1e300;
    std::vector<double> best_p = p;

    // EG ascent with iterate averaging (fictitious-play style): the averaged
    // trajectory converges for saddle problems even when the raw iterates
    // circle, and every evaluated weight vector yields a valid lower bound.
    auto eg_solve = [&]() {
        double eta = std::min(8.0 / (alpha - 1.0), 30.0);
        const double eta_floor = std::min(1.0 / (alpha - 1.0), 4.0);
        double prev = -1e300;
        double local_best = -1e300;
        std::vector<double> local_p = p;
        std::vector<double> pbar(p.size(), 0.0);
        int navg = 0;
        int stall = 0;
        for (int it = 0; it < 160 && stall < 8; ++it) {
            alpha_center_result ac = alpha_center(outs, p, alpha, b.seed ^ 0x707e, &sigma, 24);
            sigma = ac.sigma;
            if (ac.value > local_best) {
                local_best = ac.value;
                local_p = p;
            }
            if (it >= 10) {
                for (size_t x = 0; x < p.size(); ++x) pbar[x] += p[x];
                ++navg;
            }
            // cool down only on a real overshoot; inner-solver noise is tiny
            if (ac.value < prev - 1e-6) eta = std::max(0.5 * eta, eta_floor);
            stall = (std::abs(ac.value - prev) < 1e-10) ? stall + 1 : 0;
            prev = ac.value;

            sandwich_evaluator ev(sigma, alpha);
            std::vector<double> lx(states.size());
            double lmax = -1e300;
            for (size_t x = 0; x < states.size(); ++x) {
                const double dx = ev(outs[x]);
                lx[x] = std::isfinite(dx) ? (alpha - 1.0) * dx : -1e300;
                lmax = std::max(lmax, lx[x]);
            }
            double z = 0.0;
            for (size_t x = 0; x < states.size(); ++x) {
                p[x] = std::max(p[x], 1e-15) * std::exp2(eta * (lx[x] - lmax));
                z += p[x];
            }
            for (double& w : p) w /= z;
        }
        if (navg > 0) {
            for (double& w : pbar) w /= navg;
            alpha_center_result avg =
                alpha_center(outs, pbar, alpha, b.seed ^ 0x707e, &sigma, 60);
            if (avg.value > local_best) {
                local_best = avg.value;
                local_p = pbar;
            }
        }
        p = local_p;
        // re-evaluate at the retained weights so sigma matches them
        alpha_center_result fin = alpha_center(outs, p, alpha, b.seed ^ 0x707e, &sigma, 60);
        sigma = fin.sigma;
        return std::max(fin.value, local_best);
    };

    // seed the weights from the minimax fixed-point mixture on the support
    {
        alpha_center_result mm = alpha_center(outs, {}, alpha, b.seed ^ 0x707e, &sigma, 40);
        if (mm.mixture.size() == p.size()) {
            double z = 0.0;
            for (size_t x = 0; x < p.size(); ++x) {
                p[x] = std::max(mm.mixture[x], 1e-12);
                z += p[x];
            }
            for (double& w : p) w /= z;
        }
        sigma = mm.sigma;
    }

    std::vector<std::vector<cplx>> best_states = states;
    for (int column = 0; column < 6; ++column) {
        const double route = eg_solve();
        if (route > best_route) {
            best_route = route;
            best_p = p;
            best_states = states;
        }
        // best response at the route's sigma
        sandwich_evaluator ev(sigma, alpha);
        pure_state_opt br = sup_over_inputs(
            ch, [&](const complex_matrix& m) { return ev(m); }, b, true);
        if (br.value <= route + 1e-5) break;  // no improving column: saddle reached
        bool dup = false;
        for (const auto& have : states) {
            cplx ov = 0.0;
            for (size_t i = 0; i < br.state.size(); ++i) ov += std::conj(have[i]) * br.state[i];
            if (std::abs(ov) > 1.0 - 1e-9) dup = true;
        }
        if (dup) break;
        states.push_back(br.state);
        outs.push_back(apply_pure(ch, br.state));
        for (double& w : p) w *= 1.0 - 1.0 / (states.size() + 1.0);
        p.push_back(1.0 / (states.size() + 1.0));
        if (states.size() > 36) {
            size_t drop = 0;
            for (size_t x = 1; x < p.size(); ++x)
                if (p[x] < p[drop]) drop = x;
            states.erase(states.begin() + drop);
            outs.erase(outs.begin() + drop);
            p.erase(p.begin() + drop);
            double z = 0.0;
            for (double w : p) z += w;
            for (double& w : p) w /= z;
        }
    }

    capacity_result res;
    res.value = radius.value;
    res.lower_bound = best_route;
    res.gap_estimate = std::max(0.0, radius.value - best_route);
    res.iterations = radius.iterations + chi.iterations;
    res.ensemble_witness = make_ensemble(best_p, best_states);
    res.sigma_witness = radius.sigma_witness;
    return res;
}

std::vector<double> default_alpha_grid() {
    std::vector<double> g;
    for (int k = 0; k <= 10; ++k) g.push_back(1.0 + std::exp2(-k));
    for (double a : {3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0}) g.push_back(a);
    std::sort(g.begin(), g.end());
    return g;
}

exponent_curve strong_converse_exponent(const kraus_channel& ch, double rate,
                                        std::vector<double> alpha_grid, const budget& b) {
    if (rate < 0.0) throw invalid_parameter_error("strong_converse_exponent: rate must be >= 0");
    if (alpha_grid.empty()) alpha_grid = default_alpha_grid();
    std::sort(alpha_grid.begin(), alpha_grid.end());

    exponent_curve curve;
    curve.rate = rate;

    struct sample {
        double chi;
        double gap;
        complex_matrix sigma;
    };
    std::map<double, sample> memo;
    auto chi_at = [&](double alpha) {
        auto it = memo.find(alpha);
        if (it != memo.end()) return it->second.chi;
        capacity_result r = alpha_information_radius(ch, alpha, b);
        memo[alpha] = {r.value, r.gap_estimate, r.sigma_witness->op};
        return r.value;
    };
    auto term_at = [&](double alpha) {
        return (alpha - 1.0) / alpha * (rate - chi_at(alpha));
    };

    for (double a : alpha_grid) term_at(a);

    auto best_alpha = [&] {
        double ba = memo.begin()->first, bt = -1e300;
        for (const auto& [a, cg] : memo) {
            const double t = (a - 1.0) / a * (rate - cg.chi);
            if (t > bt) {
                bt = t;
                ba = a;
            }
        }
        return std::pair<double, double>(ba, bt);
    };

    // extend by doubling while the maximum sits on the right endpoint
    auto [amax, tmax] = best_alpha();
    while (amax == memo.rbegin()->first && memo.rbegin()->first < std::exp2(20)) {
        const double next = memo.rbegin()->first * 2.0;
        const double t = term_at(next);
        if (t <= tmax + 1e-12) break;
        std::tie(amax, tmax) = best_alpha();
    }

    // golden-section refinement in x = log2(alpha - 1) around the best point
    {
        std::tie(amax, tmax) = best_alpha();
        auto it = memo.find(amax);
        double lo, hi;
        if (it == memo.begin())
            lo = 1.0 + 0.5 * (amax - 1.0);
        else
            lo = std::prev(it)->first;
        auto nx = std::next(it);
        hi = (nx == memo.end()) ? 1.0 + 2.0 * (amax - 1.0) : nx->first;
        double xlo = std::log2(lo - 1.0), xhi = std::log2(hi - 1.0);
        const double gr = 0.6180339887498949;
        double x1 = xhi - gr * (xhi - xlo), x2 = xlo + gr * (xhi - xlo);
        double f1 = term_at(1.0 + std::exp2(x1)), f2 = term_at(1.0 + std::exp2(x2));
        for (int round = 0; round < 3; ++round) {
            if (f1 < f2) {
                xlo = x1;
                x1 = x2;
                f1 = f2;
                x2 = xlo + gr * (xhi - xlo);
                f2 = term_at(1.0 + std::exp2(x2));
            } else {
                xhi = x2;
                x2 = x1;
                f2 = f1;
                x1 = xhi - gr * (xhi - xlo);
                f1 = term_at(1.0 + std::exp2(x1));
            }
        }
    }

    for (const auto& [a, cg] : memo) {
        curve.alphas.push_back(a);
        curve.chi_alphas.push_back(cg.chi);
        curve.terms.push_back((a - 1.0) / a * (rate - cg.chi));
        curve.sigma_witnesses.push_back(cg.sigma);
        curve.gap_estimate = std::max(curve.gap_estimate, cg.gap);
    }
    curve.exponent = *std::max_element(curve.terms.begin(), curve.terms.end());
    return curve;
}

additivity_report additivity_check(const kraus_channel& ch, const budget& b) {
    if (ch.d_in > 2)
        throw dimension_cap_error("additivity_check: input dimension capped at 2");
    additivity_report rep;
    capacity_result single = holevo_information(ch, b);
    rep.chi_single = single.value;

    // seed the two-copy search with the product of the optimal ensemble,
    // which achieves exactly twice the single-copy value
    const ensemble& e = *single.ensemble_witness;
    std::vector<double> probs;
    std::vector<density_operator> states;
    for (size_t x = 0; x < e.size(); ++x)
        for (size_t y = 0; y < e.size(); ++y) {
            probs.push_back(e.probs[x] * e.probs[y]);
            states.push_back(density_operator::unchecked(
                kron(e.states[x].op, e.states[y].op), {e.states[x].dim() * e.states[y].dim()}));
        }
    ensemble warm(probs, states);

    kraus_channel two = tensor_channels(ch, ch);
    budget b2 = b;
    b2.restarts = std::max(2, b.restarts / 4);
    capacity_result tensor = holevo_information(two, b2, &warm);
    rep.chi_tensor_lower = tensor.value;
    rep.gap = rep.chi_tensor_lower - 2.0 * rep.chi_single;
    rep.lower_ok = 2.0 * rep.chi_single <= rep.chi_tensor_lower + 1e-4;
    rep.additive_within_tol = rep.gap <= 5e-3;
    return rep;
}

}  // namespace sc
