#pragma once

#include <vector>

#include "sc/quantum.hpp"

namespace sc {

// Completely positive map in Kraus form; not necessarily trace preserving.
// Compositions such as Theta_sigma o N live here.
struct kraus_map {
    std::vector<complex_matrix> ops;  // each d_out x d_in
    int d_in = 0;
    int d_out = 0;

    kraus_map() = default;
    kraus_map(std::vector<complex_matrix> kraus_ops, int din, int dout);

    complex_matrix apply(const complex_matrix& m) const;          // sum K m K^dagger
    complex_matrix apply_adjoint(const complex_matrix& m) const;  // sum K^dagger m K
};

// CPTP map: kraus_map with sum K^dagger K = I validated (within 1e-8).
struct kraus_channel : kraus_map {
    kraus_channel() = default;
    kraus_channel(std::vector<complex_matrix> kraus_ops, int din, int dout,
                  double tp_tol = 1e-8);

    density_operator operator()(const density_operator& rho) const;
};

density_operator apply(const kraus_channel& ch, const density_operator& rho);

// (id (x) N (x) id) on the subsystem at `target`; output dims replace
// dims[target] with d_out.
density_operator apply_on_subsystem(const kraus_channel& ch, const density_operator& rho,
                                    int target);
complex_matrix apply_on_subsystem(const kraus_map& ch, const complex_matrix& m,
                                  const std::vector<int>& dims, int target);

// Choi state (id (x) N)(|Phi><Phi|) with |Phi> maximally entangled;
// trace-one convention, first factor is the input copy.
struct choi_matrix {
    complex_matrix m;
    int d_in = 0;
    int d_out = 0;
};

choi_matrix to_choi(const kraus_map& ch);
kraus_channel from_choi(const choi_matrix& c, double tol = 1e-8);

struct measure_prepare_channel {
    povm measurement;
    std::vector<density_operator> prepared;

    measure_prepare_channel(povm m, std::vector<density_operator> states);
    int d_in() const { return measurement.dim(); }
    int d_out() const { return prepared.front().dim(); }
};

kraus_channel measure_prepare_to_kraus(const measure_prepare_channel& mp);

enum class eb_verdict { eb, not_eb, inconclusive };

struct eb_report {
    eb_verdict verdict = eb_verdict::inconclusive;
    double choi_min_pt_eigenvalue = 0.0;
    bool ppt = false;
};

// PPT test on the Choi state across the in:out cut.  NotEB is conclusive in
// any dimension; EB only where PPT implies separability (2x2, 2x3, 3x2).
eb_report is_entanglement_breaking(const kraus_map& ch, double tol = 1e-9);
inline eb_report is_entanglement_breaking(const measure_prepare_channel&, double = 1e-9) {
    return {eb_verdict::eb, 0.0, true};
}

// channel zoo
kraus_channel identity_channel(int d);
// R_omega(rho) = Tr(rho) * omega; d_in defaults to omega's dimension
kraus_channel replacement_channel(const density_operator& omega, int d_in = 0);
// lambda*rho + (1-lambda)*I/2 on a qubit; CPTP for lambda in [-1/3, 1]
kraus_channel depolarizing_channel(double lambda);
// (1-q)*rho + q*Z rho Z on a qubit
kraus_channel dephasing_channel(double q);
// column-stochastic P embedded as a computational-basis cq channel
kraus_channel classical_channel(const std::vector<std::vector<double>>& p);
kraus_channel bsc_channel(double flip_probability);

kraus_channel tensor_channels(const kraus_channel& a, const kraus_channel& b);

}  // namespace sc
