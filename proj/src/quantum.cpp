#include "sc/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sc {

namespace {

long long dims_product(const std::vector<int>& dims) {
    long long p = 1;
    for (int d : dims) p *= d;
    return p;
}

}  // namespace

density_operator::density_operator(complex_matrix m, std::vector<int> subsystem_dims,
                                   double psd_tol, double trace_tol) {
    const int d = m.dim();
    if (subsystem_dims.empty()) subsystem_dims = {d};
    if (dims_product(subsystem_dims) != d)
        throw dimension_mismatch_error("density_operator: dims do not factor the matrix");
    if (hermiticity_defect(m) > 1e-8)
        throw non_hermitian_error("density_operator: matrix is not Hermitian");
    const double tr = trace(m).real();
    if (std::abs(tr - 1.0) > trace_tol)
        throw state_invalid_error("density_operator: trace differs from 1");
    spectrum sp = eigh(hermitize(m), 1e-8);
    if (!sp.eigenvalues.empty() && sp.eigenvalues.back() < -psd_tol)
        throw negative_eigenvalue_error("density_operator: negative eigenvalue " +
                                        std::to_string(sp.eigenvalues.back()));
    op = hermitize(m);
    dims = std::move(subsystem_dims);
}

density_operator density_operator::unchecked(complex_matrix m, std::vector<int> subsystem_dims) {
    density_operator r;
    if (subsystem_dims.empty()) subsystem_dims = {m.rows};
    if (dims_product(subsystem_dims) != m.dim())
        throw dimension_mismatch_error("density_operator: dims do not factor the matrix");
    r.op = std::move(m);
    r.dims = std::move(subsystem_dims);
    return r;
}

density_operator density_operator::pure(const std::vector<cplx>& ket) {
    return unchecked(outer(ket), {static_cast<int>(ket.size())});
}

density_operator density_operator::pure(const std::vector<cplx>& ket,
                                        std::vector<int> subsystem_dims) {
    return unchecked(outer(ket), std::move(subsystem_dims));
}

density_operator density_operator::maximally_mixed(int d) {
    return unchecked((1.0 / d) * complex_matrix::identity(d), {d});
}

double density_operator::min_eigenvalue() const {
    spectrum sp = eigh(op, 1e-8);
    return sp.eigenvalues.empty() ? 0.0 : sp.eigenvalues.back();
}

povm::povm(std::vector<complex_matrix> elems, double psd_tol, double completeness_tol) {
    if (elems.empty()) throw invalid_parameter_error("povm: no elements");
    const int d = elems.front().dim();
    complex_matrix sum(d, d);
    for (const auto& e : elems) {
        if (e.dim() != d) throw dimension_mismatch_error("povm: element dimension mismatch");
        if (hermiticity_defect(e) > 1e-9)
            throw non_hermitian_error("povm: element is not Hermitian");
        spectrum sp = eigh(hermitize(e), 1e-8);
        if (!sp.eigenvalues.empty() && sp.eigenvalues.back() < -psd_tol)
            throw negative_eigenvalue_error("povm: element has negative eigenvalue");
        sum = sum + e;
    }
    if (max_abs(sum - complex_matrix::identity(d)) > completeness_tol)
        throw invalid_parameter_error("povm: elements do not sum to identity");
    elements = std::move(elems);
}

ensemble::ensemble(std::vector<double> p, std::vector<density_operator> s, double prob_tol) {
    if (p.size() != s.size()) throw dimension_mismatch_error("ensemble: probs/states size mismatch");
    if (p.empty()) throw invalid_parameter_error("ensemble: empty");
    double sum = 0.0;
    for (double x : p) {
        if (x < -1e-12) throw invalid_probability_error("ensemble: negative probability");
        sum += x;
    }
    if (std::abs(sum - 1.0) > prob_tol)
        throw invalid_probability_error("ensemble: probabilities do not sum to 1");
    const int d = s.front().dim();
    for (const auto& st : s)
        if (st.dim() != d) throw dimension_mismatch_error("ensemble: state dimension mismatch");
    probs = std::move(p);
    states = std::move(s);
}

std::vector<double> measurement_probabilities(const density_operator& rho, const povm& m) {
    if (rho.dim() != m.dim())
        throw dimension_mismatch_error("measurement_probabilities: dimension mismatch");
    std::vector<double> p(m.size());
    double sum = 0.0;
    for (size_t i = 0; i < m.size(); ++i) {
        double v = trace(m.elements[i] * rho.op).real();
        if (v < -1e-9 || v > 1.0 + 1e-9)
            throw invalid_probability_error("measurement_probabilities: outcome out of range");
        p[i] = std::clamp(v, 0.0, 1.0);
        sum += p[i];
    }
    if (std::abs(sum - 1.0) > 1e-8)
        throw invalid_probability_error("measurement_probabilities: probabilities do not sum to 1");
    return p;
}

complex_matrix partial_transpose(const complex_matrix& m, const bipartite_cut& cut) {
    const int d = m.dim();
    if (cut.d_a * cut.d_b != d)
        throw dimension_mismatch_error("partial_transpose: cut does not factor the matrix");
    complex_matrix r(d, d);
    for (int ia = 0; ia < cut.d_a; ++ia)
        for (int ib = 0; ib < cut.d_b; ++ib)
            for (int ja = 0; ja < cut.d_a; ++ja)
                for (int jb = 0; jb < cut.d_b; ++jb)
                    r(ia * cut.d_b + ib, ja * cut.d_b + jb) =
                        m(ia * cut.d_b + jb, ja * cut.d_b + ib);
    return r;
}

complex_matrix partial_transpose(const density_operator& rho, const bipartite_cut& cut) {
    return partial_transpose(rho.op, cut);
}

ppt_report is_ppt(const complex_matrix& m, const bipartite_cut& cut, double tol) {
    complex_matrix pt = partial_transpose(m, cut);
    spectrum sp = eigh(hermitize(pt), 1e-8);
    ppt_report rep;
    rep.min_eigenvalue = sp.eigenvalues.empty() ? 0.0 : sp.eigenvalues.back();
    rep.ppt = rep.min_eigenvalue >= -tol;
    const int a = cut.d_a, b = cut.d_b;
    rep.conclusive_for_separability =
        (a == 2 && b == 2) || (a == 2 && b == 3) || (a == 3 && b == 2);
    return rep;
}

ppt_report is_ppt(const density_operator& rho, const bipartite_cut& cut, double tol) {
    return is_ppt(rho.op, cut, tol);
}

density_operator mix_ensemble(const ensemble& e) {
    const int d = e.states.front().dim();
    complex_matrix m(d, d);
    for (size_t i = 0; i < e.size(); ++i) m = m + e.probs[i] * e.states[i].op;
    return density_operator::unchecked(hermitize(m), e.states.front().dims);
}

density_operator cq_state(const ensemble& e) {
    const int k = static_cast<int>(e.size());
    const int d = e.states.front().dim();
    complex_matrix m(k * d, k * d);
    for (int x = 0; x < k; ++x)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                m(x * d + i, x * d + j) = e.probs[x] * e.states[x].op(i, j);
    return density_operator::unchecked(std::move(m), {k, d});
}

}  // namespace sc
