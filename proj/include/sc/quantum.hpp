#pragma once

#include <vector>

#include "sc/linalg.hpp"

namespace sc {

// Positive semidefinite, unit-trace operator with subsystem dimension
// metadata.  Construction validates Hermiticity, trace and (via eigh)
// positivity; use density_operator::unchecked only where validity is
// guaranteed by construction.
struct density_operator {
    complex_matrix op;
    std::vector<int> dims;

    density_operator() = default;
    density_operator(complex_matrix m, std::vector<int> subsystem_dims, double psd_tol = 1e-9,
                     double trace_tol = 1e-9);

    static density_operator unchecked(complex_matrix m, std::vector<int> subsystem_dims);
    static density_operator pure(const std::vector<cplx>& ket);
    static density_operator pure(const std::vector<cplx>& ket, std::vector<int> subsystem_dims);
    static density_operator maximally_mixed(int d);

    int dim() const { return op.rows; }
    double min_eigenvalue() const;
};

struct povm {
    std::vector<complex_matrix> elements;

    povm() = default;
    explicit povm(std::vector<complex_matrix> elems, double psd_tol = 1e-9,
                  double completeness_tol = 1e-8);
    int dim() const { return elements.empty() ? 0 : elements.front().rows; }
    size_t size() const { return elements.size(); }
};

struct ensemble {
    std::vector<double> probs;
    std::vector<density_operator> states;

    ensemble() = default;
    ensemble(std::vector<double> p, std::vector<density_operator> s, double prob_tol = 1e-10);
    size_t size() const { return probs.size(); }
};

struct bipartite_cut {
    int d_a = 0;
    int d_b = 0;
};

std::vector<double> measurement_probabilities(const density_operator& rho, const povm& m);

// Transpose of the B factor; Hermiticity and trace are preserved.
complex_matrix partial_transpose(const complex_matrix& m, const bipartite_cut& cut);
complex_matrix partial_transpose(const density_operator& rho, const bipartite_cut& cut);

struct ppt_report {
    bool ppt = false;
    double min_eigenvalue = 0.0;
    // PPT decides separability only at 2x2, 2x3, 3x2
    bool conclusive_for_separability = false;
};

ppt_report is_ppt(const density_operator& rho, const bipartite_cut& cut, double tol = 1e-9);
ppt_report is_ppt(const complex_matrix& m, const bipartite_cut& cut, double tol = 1e-9);

density_operator mix_ensemble(const ensemble& e);

// Block-diagonal classical-quantum state sum_x p_x |x><x| (x) rho_x,
// dims = [ensemble size, state dim].
density_operator cq_state(const ensemble& e);

}  // namespace sc
