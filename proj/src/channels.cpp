#include "sc/channels.hpp"

#include <cmath>

namespace sc {

kraus_map::kraus_map(std::vector<complex_matrix> kraus_ops, int din, int dout)
    : ops(std::move(kraus_ops)), d_in(din), d_out(dout) {
    if (ops.empty()) throw invalid_parameter_error("kraus_map: no Kraus operators");
    for (const auto& k : ops)
        if (k.rows != d_out || k.cols != d_in)
            throw dimension_mismatch_error("kraus_map: operator shape mismatch");
}

complex_matrix kraus_map::apply(const complex_matrix& m) const {
    if (m.dim() != d_in) throw dimension_mismatch_error("kraus_map::apply: dimension mismatch");
    complex_matrix r(d_out, d_out);
    for (const auto& k : ops) r = r + k * m * dagger(k);
    return r;
}

complex_matrix kraus_map::apply_adjoint(const complex_matrix& m) const {
    if (m.dim() != d_out)
        throw dimension_mismatch_error("kraus_map::apply_adjoint: dimension mismatch");
    complex_matrix r(d_in, d_in);
    for (const auto& k : ops) r = r + dagger(k) * m * k;
    return r;
}

kraus_channel::kraus_channel(std::vector<complex_matrix> kraus_ops, int din, int dout,
                             double tp_tol)
    : kraus_map(std::move(kraus_ops), din, dout) {
    complex_matrix sum(d_in, d_in);
    for (const auto& k : ops) sum = sum + dagger(k) * k;
    if (max_abs(sum - complex_matrix::identity(d_in)) > tp_tol)
        throw not_cptp_error("kraus_channel: map is not trace preserving");
}

density_operator kraus_channel::operator()(const density_operator& rho) const {
    return sc::apply(*this, rho);
}

density_operator apply(const kraus_channel& ch, const density_operator& rho) {
    if (rho.dim() != ch.d_in) throw dimension_mismatch_error("apply: dimension mismatch");
    return density_operator::unchecked(hermitize(ch.apply(rho.op)), {ch.d_out});
}

complex_matrix apply_on_subsystem(const kraus_map& ch, const complex_matrix& m,
                                  const std::vector<int>& dims, int target) {
    if (target < 0 || target >= static_cast<int>(dims.size()))
        throw dimension_mismatch_error("apply_on_subsystem: target out of range");
    if (dims[target] != ch.d_in)
        throw dimension_mismatch_error("apply_on_subsystem: target dim != channel input dim");
    long long dl = 1, dr = 1;
    for (int i = 0; i < target; ++i) dl *= dims[i];
    for (size_t i = target + 1; i < dims.size(); ++i) dr *= dims[i];
    const int din = ch.d_in, dout = ch.d_out;
    if (dl * din * dr != m.dim())
        throw dimension_mismatch_error("apply_on_subsystem: dims do not factor the matrix");

    // contract each Kraus operator into the target index directly
    const long long out_dim = dl * dout * dr;
    complex_matrix r(static_cast<int>(out_dim), static_cast<int>(out_dim));
    std::vector<cplx> tmp(static_cast<size_t>(out_dim) * m.dim());
    for (const auto& k : ch.ops) {
        // tmp = (I (x) K (x) I) m
        std::fill(tmp.begin(), tmp.end(), cplx(0.0, 0.0));
        for (long long l = 0; l < dl; ++l)
            for (int a = 0; a < dout; ++a)
                for (int b = 0; b < din; ++b) {
                    const cplx kab = k(a, b);
                    if (kab == cplx(0.0, 0.0)) continue;
                    for (long long rr = 0; rr < dr; ++rr) {
                        const long long row_out = (l * dout + a) * dr + rr;
                        const long long row_in = (l * din + b) * dr + rr;
                        const cplx* src = &m.a[static_cast<size_t>(row_in) * m.cols];
                        cplx* dst = &tmp[static_cast<size_t>(row_out) * m.cols];
                        for (int j = 0; j < m.cols; ++j) dst[j] += kab * src[j];
                    }
                }
        // r += tmp (I (x) K (x) I)^dagger
        for (long long i = 0; i < out_dim; ++i) {
            const cplx* trow = &tmp[static_cast<size_t>(i) * m.cols];
            cplx* rrow = &r.a[static_cast<size_t>(i) * out_dim];
            for (long long l = 0; l < dl; ++l)
                for (int a = 0; a < dout; ++a)
                    for (int b = 0; b < din; ++b) {
                        const cplx kab = std::conj(k(a, b));
                        if (kab == cplx(0.0, 0.0)) continue;
                        for (long long rr = 0; rr < dr; ++rr) {
                            const long long col_out = (l * dout + a) * dr + rr;
                            const long long col_in = (l * din + b) * dr + rr;
                            rrow[col_out] += trow[col_in] * kab;
                        }
                    }
        }
    }
    return r;
}

density_operator apply_on_subsystem(const kraus_channel& ch, const density_operator& rho,
                                    int target) {
    complex_matrix out = apply_on_subsystem(static_cast<const kraus_map&>(ch), rho.op,
                                            rho.dims, target);
    std::vector<int> new_dims = rho.dims;
    new_dims[target] = ch.d_out;
    return density_operator::unchecked(hermitize(out), new_dims);
}

choi_matrix to_choi(const kraus_map& ch) {
    const int din = ch.d_in, dout = ch.d_out;
    complex_matrix c(din * dout, din * dout);
    for (const auto& k : ch.ops)
        for (int i = 0; i < din; ++i)
            for (int j = 0; j < din; ++j)
                for (int a = 0; a < dout; ++a)
                    for (int b = 0; b < dout; ++b)
                        c(i * dout + a, j * dout + b) +=
                            k(a, i) * std::conj(k(b, j)) / static_cast<double>(din);
    return {hermitize(c), din, dout};
}

kraus_channel from_choi(const choi_matrix& c, double tol) {
    const int din = c.d_in, dout = c.d_out;
    if (c.m.dim() != din * dout)
        throw dimension_mismatch_error("from_choi: matrix does not match dims");
    if (hermiticity_defect(c.m) > 1e-8) throw not_cptp_error("from_choi: Choi is not Hermitian");
    spectrum sp = eigh(hermitize(c.m), 1e-8);
    if (!sp.eigenvalues.empty() && sp.eigenvalues.back() < -tol)
        throw not_cptp_error("from_choi: Choi is not PSD");
    // marginal condition Tr_out(Choi) = I/d_in
    complex_matrix marg = partial_trace(c.m, {din, dout}, {0});
    if (max_abs(marg - (1.0 / din) * complex_matrix::identity(din)) > tol)
        throw not_cptp_error("from_choi: Choi marginal differs from I/d_in");

    const double lam_max = sp.eigenvalues.empty() ? 0.0 : std::max(sp.eigenvalues.front(), 0.0);
    const double cutoff = support_cutoff_rel * std::max(lam_max * din, 1.0);
    std::vector<complex_matrix> ops;
    for (size_t v = 0; v < sp.eigenvalues.size(); ++v) {
        const double lam = sp.eigenvalues[v] * din;  // unnormalized Choi eigenvalue
        if (lam <= cutoff) continue;
        complex_matrix k(dout, din);
        const double w = std::sqrt(lam);
        for (int i = 0; i < din; ++i)
            for (int a = 0; a < dout; ++a) k(a, i) = w * sp.vectors(i * dout + a, v);
        ops.push_back(std::move(k));
    }
    return kraus_channel(std::move(ops), din, dout);
}

measure_prepare_channel::measure_prepare_channel(povm m, std::vector<density_operator> states)
    : measurement(std::move(m)), prepared(std::move(states)) {
    if (measurement.size() != prepared.size())
        throw dimension_mismatch_error("measure_prepare_channel: POVM/state count mismatch");
    const int d = prepared.front().dim();
    for (const auto& s : prepared)
        if (s.dim() != d)
            throw dimension_mismatch_error("measure_prepare_channel: output dim mismatch");
}

kraus_channel measure_prepare_to_kraus(const measure_prepare_channel& mp) {
    const int din = mp.d_in(), dout = mp.d_out();
    std::vector<complex_matrix> ops;
    for (size_t m = 0; m < mp.measurement.size(); ++m) {
        spectrum povm_sp = eigh(hermitize(mp.measurement.elements[m]), 1e-8);
        spectrum st_sp = eigh(mp.prepared[m].op, 1e-8);
        for (size_t k = 0; k < povm_sp.eigenvalues.size(); ++k) {
            const double mu = povm_sp.eigenvalues[k];
            if (mu <= support_cutoff_rel) continue;
            for (size_t j = 0; j < st_sp.eigenvalues.size(); ++j) {
                const double s = st_sp.eigenvalues[j];
                if (s <= support_cutoff_rel) continue;
                // sqrt(s * mu) |e_j><f_k|
                complex_matrix op(dout, din);
                const double w = std::sqrt(s * mu);
                for (int a = 0; a < dout; ++a)
                    for (int b = 0; b < din; ++b)
                        op(a, b) = w * st_sp.vectors(a, j) * std::conj(povm_sp.vectors(b, k));
                ops.push_back(std::move(op));
            }
        }
    }
    return kraus_channel(std::move(ops), din, dout);
}

eb_report is_entanglement_breaking(const kraus_map& ch, double tol) {
    choi_matrix c = to_choi(ch);
    ppt_report rep = is_ppt(c.m, {c.d_in, c.d_out}, tol);
    eb_report out;
    out.choi_min_pt_eigenvalue = rep.min_eigenvalue;
    out.ppt = rep.ppt;
    if (!rep.ppt)
        out.verdict = eb_verdict::not_eb;
    else if (rep.conclusive_for_separability)
        out.verdict = eb_verdict::eb;
    else
        out.verdict = eb_verdict::inconclusive;
    return out;
}

kraus_channel identity_channel(int d) {
    return kraus_channel({complex_matrix::identity(d)}, d, d);
}

kraus_channel replacement_channel(const density_operator& omega, int d_in) {
    const int dout = omega.dim();
    const int din = d_in > 0 ? d_in : dout;
    // measure with {I_din}, prepare omega
    spectrum sp = eigh(omega.op, 1e-8);
    std::vector<complex_matrix> ops;
    for (size_t j = 0; j < sp.eigenvalues.size(); ++j) {
        const double s = sp.eigenvalues[j];
        if (s <= support_cutoff_rel) continue;
        for (int k = 0; k < din; ++k) {
            complex_matrix op(dout, din);
            const double w = std::sqrt(s);
            for (int a = 0; a < dout; ++a) op(a, k) = w * sp.vectors(a, j);
            ops.push_back(std::move(op));
        }
    }
    return kraus_channel(std::move(ops), din, dout);
}

kraus_channel depolarizing_channel(double lambda) {
    if (lambda < -1.0 / 3.0 - 1e-12 || lambda > 1.0 + 1e-12)
        throw invalid_parameter_error("depolarizing_channel: lambda outside [-1/3, 1]");
    const double p = 1.0 - lambda;
    const double w0 = std::sqrt(std::max(0.0, 1.0 - 0.75 * p));
    const double w = std::sqrt(std::max(0.0, p)) * 0.5;
    complex_matrix k0 = complex_matrix::identity(2);
    k0 = w0 * k0;
    complex_matrix kx(2, 2), ky(2, 2), kz(2, 2);
    kx(0, 1) = w;
    kx(1, 0) = w;
    ky(0, 1) = cplx(0.0, -w);
    ky(1, 0) = cplx(0.0, w);
    kz(0, 0) = w;
    kz(1, 1) = -w;
    return kraus_channel({k0, kx, ky, kz}, 2, 2);
}

kraus_channel dephasing_channel(double q) {
    if (q < -1e-12 || q > 1.0 + 1e-12)
        throw invalid_parameter_error("dephasing_channel: q outside [0, 1]");
    complex_matrix k0 = std::sqrt(std::max(0.0, 1.0 - q)) * complex_matrix::identity(2);
    complex_matrix kz(2, 2);
    kz(0, 0) = std::sqrt(std::max(0.0, q));
    kz(1, 1) = -std::sqrt(std::max(0.0, q));
    return kraus_channel({k0, kz}, 2, 2);
}

kraus_channel classical_channel(const std::vector<std::vector<double>>& p) {
    if (p.empty() || p.front().empty())
        throw invalid_parameter_error("classical_channel: empty matrix");
    const int dout = static_cast<int>(p.size());
    const int din = static_cast<int>(p.front().size());
    for (const auto& row : p)
        if (static_cast<int>(row.size()) != din)
            throw invalid_parameter_error("classical_channel: ragged matrix");
    for (int x = 0; x < din; ++x) {
        double col = 0.0;
        for (int y = 0; y < dout; ++y) {
            if (p[y][x] < -1e-12)
                throw invalid_parameter_error("classical_channel: negative entry");
            col += p[y][x];
        }
        if (std::abs(col - 1.0) > 1e-10)
            throw invalid_parameter_error("classical_channel: column is not stochastic");
    }
    std::vector<complex_matrix> ops;
    for (int y = 0; y < dout; ++y)
        for (int x = 0; x < din; ++x) {
            if (p[y][x] <= 0.0) continue;
            complex_matrix k(dout, din);
            k(y, x) = std::sqrt(p[y][x]);
            ops.push_back(std::move(k));
        }
    // include zero-probability columns' completeness via remaining entries;
    // sum_k K^dagger K = diag(col sums) = I by the stochasticity check
    return kraus_channel(std::move(ops), din, dout);
}

kraus_channel bsc_channel(double flip_probability) {
    if (flip_probability < 0.0 || flip_probability > 1.0)
        throw invalid_parameter_error("bsc_channel: probability outside [0, 1]");
    const double p = flip_probability;
    return classical_channel({{1.0 - p, p}, {p, 1.0 - p}});
}

kraus_channel tensor_channels(const kraus_channel& a, const kraus_channel& b) {
    std::vector<complex_matrix> ops;
    ops.reserve(a.ops.size() * b.ops.size());
    for (const auto& ka : a.ops)
        for (const auto& kb : b.ops) ops.push_back(kron(ka, kb));
    return kraus_channel(std::move(ops), a.d_in * b.d_in, a.d_out * b.d_out);
}

}  // namespace sc
