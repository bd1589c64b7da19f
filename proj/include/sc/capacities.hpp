#pragma once

#include <optional>

#include "sc/divergences.hpp"

namespace sc {

// Result of a capacity-style optimization.  `value` is the reported
// estimate; `gap_estimate` bounds the distance between the lower and upper
// certificates produced during the run (0 means converged to tolerance).
// For the radius quantities `value` is the sup-side (upper) certificate,
// which is the safe direction for the converse bound.
struct capacity_result {
    double value = 0.0;
    std::optional<ensemble> ensemble_witness;
    std::optional<density_operator> sigma_witness;
    int iterations = 0;
    double gap_estimate = 0.0;
    // best ensemble-route value where one is computed (alpha_holevo)
    double lower_bound = 0.0;
};

// I(X;B) of the classical-quantum state sum_x p_x |x><x| (x) N(rho_x),
// evaluated as H(N(rho_bar)) - sum_x p_x H(N(rho_x)).
double holevo_of_ensemble(const ensemble& e, const kraus_channel& ch);

// chi(N) = sup over ensembles of I(X;B), maximized over ensembles of at most
// d_in^2 pure states by alternating Blahut-Arimoto weight updates and
// gradient-directed state moves, with worst-case-state insertion.  The
// reported gap certifies optimality through the radius characterization:
// chi <= sup_rho D(N(rho) || rho_bar).
capacity_result holevo_information(const kraus_channel& ch, const budget& b = {},
                                   const ensemble* warm_start = nullptr);

// K(N) = inf_sigma sup_rho D(N(rho) || sigma) by an active-set barycenter
// scheme: the center of the collected worst-case outputs is re-weighted by a
// Blahut-Arimoto pass, then new worst-case states are added until the
// sup-side and set-side values agree.
capacity_result information_radius(const kraus_channel& ch, const budget& b = {});

// K_alpha(N) = inf_sigma sup_rho D_alpha(N(rho) || sigma) for alpha > 1;
// sigma is driven by a damped sandwich fixed point with a descent fallback.
capacity_result alpha_information_radius(const kraus_channel& ch, double alpha,
                                         const budget& b = {});

// chi_alpha(N), returned through the radius equality; also computes the
// direct ensemble-route lower bound inf_sigma D_alpha(rho_XR || rho_X (x) sigma)
// for the best ensemble found and reports it in `lower_bound`.  A
// precomputed holevo_information result for the same channel may be passed
// to avoid recomputation.
capacity_result alpha_holevo(const kraus_channel& ch, double alpha, const budget& b = {},
                             const capacity_result* chi_hint = nullptr);

// chi_alpha of a fixed ensemble of channel outputs (the ensemble route).
double alpha_holevo_of_ensemble(const ensemble& outputs, double alpha, const budget& b = {});

struct exponent_curve {
    std::vector<double> alphas;
    std::vector<double> chi_alphas;
    std::vector<double> terms;  // (alpha-1)/alpha * (rate - chi_alpha)
    std::vector<complex_matrix> sigma_witnesses;  // radius center per sample
    double rate = 0.0;
    double exponent = 0.0;
    double gap_estimate = 0.0;
};

std::vector<double> default_alpha_grid();

// E(R) = max over evaluated alpha of (alpha-1)/alpha (R - chi_alpha(N)).
// The default grid approaches 1 geometrically and is extended by doubling
// whenever the maximum sits on the right endpoint, then refined by three
// golden-section rounds around the best point.
exponent_curve strong_converse_exponent(const kraus_channel& ch, double rate,
                                        std::vector<double> alpha_grid = {},
                                        const budget& b = {});

struct additivity_report {
    double chi_single = 0.0;
    double chi_tensor_lower = 0.0;  // ensemble-search lower bound on chi(N (x) N)
    double gap = 0.0;               // chi_tensor_lower - 2 chi_single
    bool lower_ok = false;          // 2 chi <= chi_tensor_lower + 1e-4
    bool additive_within_tol = false;  // gap <= 5e-3
};

// Two-copy additivity probe; requires d_in <= 2.
additivity_report additivity_check(const kraus_channel& ch, const budget& b = {});

}  // namespace sc
