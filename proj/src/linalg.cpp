#include "sc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sc {

complex_matrix complex_matrix::identity(int d) {
    complex_matrix m(d, d);
    for (int i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
}

int complex_matrix::dim() const {
    if (!square()) throw non_square_error("matrix is not square");
    return rows;
}

complex_matrix operator+(const complex_matrix& x, const complex_matrix& y) {
    if (x.rows != y.rows || x.cols != y.cols)
        throw dimension_mismatch_error("matrix addition: shape mismatch");
    complex_matrix r(x.rows, x.cols);
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.a[i] + y.a[i];
    return r;
}

complex_matrix operator-(const complex_matrix& x, const complex_matrix& y) {
    if (x.rows != y.rows || x.cols != y.cols)
        throw dimension_mismatch_error("matrix subtraction: shape mismatch");
    complex_matrix r(x.rows, x.cols);
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.a[i] - y.a[i];
    return r;
}

complex_matrix operator*(const complex_matrix& x, const complex_matrix& y) {
    if (x.cols != y.rows) throw dimension_mismatch_error("matrix product: inner dim mismatch");
    complex_matrix r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i) {
        for (int k = 0; k < x.cols; ++k) {
            const cplx xik = x(i, k);
            if (xik == cplx(0.0, 0.0)) continue;
            const cplx* yrow = &y.a[static_cast<size_t>(k) * y.cols];
            cplx* rrow = &r.a[static_cast<size_t>(i) * r.cols];
            for (int j = 0; j < y.cols; ++j) rrow[j] += xik * yrow[j];
        }
    }
    return r;
}

complex_matrix operator*(cplx s, const complex_matrix& x) {
    complex_matrix r(x.rows, x.cols);
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = s * x.a[i];
    return r;
}

complex_matrix dagger(const complex_matrix& m) {
    complex_matrix r(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r(j, i) = std::conj(m(i, j));
    return r;
}

cplx trace(const complex_matrix& m) {
    cplx t = 0.0;
    const int d = m.dim();
    for (int i = 0; i < d; ++i) t += m(i, i);
    return t;
}

double frobenius_norm(const complex_matrix& m) {
    double s = 0.0;
    for (const cplx& z : m.a) s += std::norm(z);
    return std::sqrt(s);
}

double max_abs(const complex_matrix& m) {
    double s = 0.0;
    for (const cplx& z : m.a) s = std::max(s, std::abs(z));
    return s;
}

double hermiticity_defect(const complex_matrix& m) {
    if (!m.square()) throw non_square_error("hermiticity_defect: matrix is not square");
    double s = 0.0;
    for (int i = 0; i < m.rows; ++i)
        for (int j = i; j < m.cols; ++j) s = std::max(s, std::abs(m(i, j) - std::conj(m(j, i))));
    return s;
}

complex_matrix hermitize(const complex_matrix& m) {
    const int d = m.dim();
    complex_matrix r(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) r(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    return r;
}

bool all_finite(const complex_matrix& m) {
    for (const cplx& z : m.a)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

complex_matrix spectrum::reconstruct() const {
    return apply(eigenvalues);
}

complex_matrix spectrum::apply(const std::vector<double>& fvals) const {
    const int d = vectors.rows;
    complex_matrix scaled(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) scaled(i, j) = vectors(i, j) * fvals[j];
    return scaled * dagger(vectors);
}

namespace {

// One complex Jacobi rotation zeroing W(p,q).  The rotation is the unitary
//   U = [[c, s], [-s*e^{-i phi}, c*e^{-i phi}]]  on the (p,q) plane,
// with phi the phase of W(p,q), which reduces the pivot to the real
// symmetric case.
void jacobi_rotate(complex_matrix& w, complex_matrix& v, int p, int q) {
    const cplx apq = w(p, q);
    const double b = std::abs(apq);
    if (b == 0.0) return;
    const cplx phase = apq / b;  // e^{i phi}
    const double app = w(p, p).real();
    const double aqq = w(q, q).real();
    const double mu = (app - aqq) / (2.0 * b);
    // smaller root of t^2 - 2 mu t - 1, written to avoid cancellation
    double t;
    if (mu >= 0.0)
        t = -1.0 / (mu + std::sqrt(mu * mu + 1.0));
    else
        t = 1.0 / (-mu + std::sqrt(mu * mu + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;
    const cplx se_m = s * std::conj(phase);  // s*e^{-i phi}
    const cplx ce_m = c * std::conj(phase);  // c*e^{-i phi}

    const int d = w.rows;
    // W <- W U (columns p, q)
    for (int i = 0; i < d; ++i) {
        const cplx wp = w(i, p), wq = w(i, q);
        w(i, p) = wp * c - wq * se_m;
        w(i, q) = wp * s + wq * ce_m;
    }
    // W <- U^dagger W (rows p, q)
    for (int j = 0; j < d; ++j) {
        const cplx wp = w(p, j), wq = w(q, j);
        w(p, j) = c * wp - s * phase * wq;
        w(q, j) = s * wp + c * phase * wq;
    }
    // V <- V U
    for (int i = 0; i < d; ++i) {
        const cplx vp = v(i, p), vq = v(i, q);
        v(i, p) = vp * c - vq * se_m;
        v(i, q) = vp * s + vq * ce_m;
    }
    // clean the pivot exactly
    w(p, q) = 0.0;
    w(q, p) = 0.0;
    w(p, p) = cplx(w(p, p).real(), 0.0);
    w(q, q) = cplx(w(q, q).real(), 0.0);
}

double offdiag_frobenius(const complex_matrix& w) {
    double s = 0.0;
    for (int i = 0; i < w.rows; ++i)
        for (int j = i + 1; j < w.cols; ++j) s += 2.0 * std::norm(w(i, j));
    return std::sqrt(s);
}

}  // namespace

spectrum eigh(const complex_matrix& m, double hermiticity_tolerance) {
    const int d = m.dim();
    if (!all_finite(m)) throw error("eigh: non-finite entries");
    if (hermiticity_defect(m) > hermiticity_tolerance)
        throw non_hermitian_error("eigh: matrix is not Hermitian within tolerance");

    complex_matrix w = hermitize(m);
    complex_matrix v = complex_matrix::identity(d);
    const double fnorm = frobenius_norm(w);
    const double target = 1e-14 * std::max(fnorm, 1e-300);

    bool converged = false;
    for (int sweep = 0; sweep < 128; ++sweep) {
        const double off = offdiag_frobenius(w);
        if (off < target) {
            converged = true;
            break;
        }
        // skip pivots too small to matter this sweep
        const double skip = off / (static_cast<double>(d) * d) * 1e-2;
        for (int p = 0; p < d - 1; ++p)
            for (int q = p + 1; q < d; ++q)
                if (std::abs(w(p, q)) > skip) jacobi_rotate(w, v, p, q);
    }
    if (!converged && offdiag_frobenius(w) >= target)
        throw convergence_error("eigh: Jacobi did not converge");

    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(d);
    for (int i = 0; i < d; ++i) diag[i] = w(i, i).real();
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return diag[i] > diag[j]; });

    spectrum sp;
    sp.eigenvalues.resize(d);
    sp.vectors = complex_matrix(d, d);
    for (int j = 0; j < d; ++j) {
        sp.eigenvalues[j] = diag[order[j]];
        for (int i = 0; i < d; ++i) sp.vectors(i, j) = v(i, order[j]);
    }
    return sp;
}

complex_matrix fractional_power(const complex_matrix& m, double p) {
    spectrum sp = eigh(m);
    const double lam_max = sp.eigenvalues.empty() ? 0.0 : sp.eigenvalues.front();
    const double floor_tol = std::max(1e-8 * lam_max, 1e-10);
    const double cutoff = support_cutoff_rel * std::max(lam_max, 0.0);
    std::vector<double> f(sp.eigenvalues.size());
    for (size_t i = 0; i < f.size(); ++i) {
        const double lam = sp.eigenvalues[i];
        if (lam < -floor_tol)
            throw negative_eigenvalue_error("fractional_power: matrix is not PSD");
        f[i] = (lam <= cutoff) ? 0.0 : std::pow(lam, p);
    }
    return sp.apply(f);
}

std::vector<double> singular_values(const complex_matrix& m) {
    // via eigh of M^dagger M; adequate at desk scale
    spectrum sp = eigh(dagger(m) * m);
    std::vector<double> s(sp.eigenvalues.size());
    for (size_t i = 0; i < s.size(); ++i) s[i] = std::sqrt(std::max(0.0, sp.eigenvalues[i]));
    return s;
}

double schatten_norm(const complex_matrix& m, double alpha) {
    if (alpha < 1.0) throw invalid_order_error("schatten_norm: alpha must be >= 1");
    if (!all_finite(m)) throw error("schatten_norm: non-finite entries");
    std::vector<double> s;
    if (m.square() && hermiticity_defect(m) <= 1e-10 * std::max(1.0, max_abs(m))) {
        spectrum sp = eigh(m, 1e-9 * std::max(1.0, max_abs(m)));
        s.resize(sp.eigenvalues.size());
        for (size_t i = 0; i < s.size(); ++i) s[i] = std::abs(sp.eigenvalues[i]);
    } else {
        s = singular_values(m);
    }
    double smax = 0.0;
    for (double x : s) smax = std::max(smax, x);
    if (smax == 0.0) return 0.0;
    // factor out the largest singular value so s^alpha cannot overflow
    double acc = 0.0;
    for (double x : s) acc += std::pow(x / smax, alpha);
    return smax * std::pow(acc, 1.0 / alpha);
}

complex_matrix kron(const complex_matrix& x, const complex_matrix& y) {
    complex_matrix r(x.rows * y.rows, x.cols * y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) {
            const cplx xij = x(i, j);
            if (xij == cplx(0.0, 0.0)) continue;
            for (int k = 0; k < y.rows; ++k)
                for (int l = 0; l < y.cols; ++l)
                    r(i * y.rows + k, j * y.cols + l) = xij * y(k, l);
        }
    return r;
}

complex_matrix partial_trace(const complex_matrix& m, const std::vector<int>& dims,
                             const std::vector<int>& keep) {
    const int d = m.dim();
    long long prod = 1;
    for (int x : dims) {
        if (x <= 0) throw dimension_mismatch_error("partial_trace: nonpositive dim");
        prod *= x;
    }
    if (prod != d) throw dimension_mismatch_error("partial_trace: dims do not factor the matrix");
    const int n = static_cast<int>(dims.size());
    std::vector<bool> kept(n, false);
    for (int k : keep) {
        if (k < 0 || k >= n) throw dimension_mismatch_error("partial_trace: keep index out of range");
        kept[k] = true;
    }

    // strides of each subsystem in the flat index
    std::vector<long long> stride(n, 1);
    for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];

    long long dk = 1, dt = 1;
    std::vector<int> keep_idx, tr_idx;
    for (int i = 0; i < n; ++i) {
        if (kept[i]) {
            dk *= dims[i];
            keep_idx.push_back(i);
        } else {
            dt *= dims[i];
            tr_idx.push_back(i);
        }
    }

    // flat offsets of every kept / traced multi-index combination
    std::vector<long long> keep_off(static_cast<size_t>(dk), 0);
    for (long long c = 0; c < dk; ++c) {
        long long rem = c, off = 0;
        for (int i = static_cast<int>(keep_idx.size()) - 1; i >= 0; --i) {
            const int sub = keep_idx[i];
            off += (rem % dims[sub]) * stride[sub];
            rem /= dims[sub];
        }
        keep_off[static_cast<size_t>(c)] = off;
    }
    std::vector<long long> tr_off(static_cast<size_t>(dt), 0);
    for (long long c = 0; c < dt; ++c) {
        long long rem = c, off = 0;
        for (int i = static_cast<int>(tr_idx.size()) - 1; i >= 0; --i) {
            const int sub = tr_idx[i];
            off += (rem % dims[sub]) * stride[sub];
            rem /= dims[sub];
        }
        tr_off[static_cast<size_t>(c)] = off;
    }

    complex_matrix r(static_cast<int>(dk), static_cast<int>(dk));
    for (long long i = 0; i < dk; ++i)
        for (long long j = 0; j < dk; ++j) {
            cplx acc = 0.0;
            for (long long t = 0; t < dt; ++t)
                acc += m(static_cast<int>(keep_off[i] + tr_off[t]),
                         static_cast<int>(keep_off[j] + tr_off[t]));
            r(static_cast<int>(i), static_cast<int>(j)) = acc;
        }
    return r;
}

complex_matrix haar_random_unitary(int d, rng& gen) {
    if (d < 1) throw invalid_parameter_error("haar_random_unitary: d must be >= 1");
    complex_matrix g(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) g(i, j) = cplx(gen.gaussian(), gen.gaussian());
    // modified Gram-Schmidt; R has positive diagonal, so Q is Haar
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < j; ++k) {
            cplx dot = 0.0;
            for (int i = 0; i < d; ++i) dot += std::conj(g(i, k)) * g(i, j);
            for (int i = 0; i < d; ++i) g(i, j) -= dot * g(i, k);
        }
        double nrm = 0.0;
        for (int i = 0; i < d; ++i) nrm += std::norm(g(i, j));
        nrm = std::sqrt(nrm);
        for (int i = 0; i < d; ++i) g(i, j) /= nrm;
    }
    return g;
}

complex_matrix haar_random_unitary(int d, std::uint64_t seed) {
    rng gen(seed);
    return haar_random_unitary(d, gen);
}

complex_matrix random_density_matrix(int d, int rank, rng& gen) {
    if (d < 1 || rank < 1 || rank > d)
        throw invalid_parameter_error("random_density_matrix: need 1 <= rank <= d");
    complex_matrix g(d, rank);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < rank; ++j) g(i, j) = cplx(gen.gaussian(), gen.gaussian());
    complex_matrix rho = g * dagger(g);
    const double t = trace(rho).real();
    rho = (1.0 / t) * rho;
    return hermitize(rho);
}

complex_matrix random_density_matrix(int d, int rank, std::uint64_t seed) {
    rng gen(seed);
    return random_density_matrix(d, rank, gen);
}

std::vector<cplx> random_pure_state(int d, rng& gen) {
    std::vector<cplx> v(d);
    double nrm = 0.0;
    for (int i = 0; i < d; ++i) {
        v[i] = cplx(gen.gaussian(), gen.gaussian());
        nrm += std::norm(v[i]);
    }
    nrm = std::sqrt(nrm);
    for (auto& z : v) z /= nrm;
    return v;
}

complex_matrix outer(const std::vector<cplx>& v) {
    const int d = static_cast<int>(v.size());
    complex_matrix r(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) r(i, j) = v[i] * std::conj(v[j]);
    return r;
}

std::vector<cplx> basis_ket(int d, int i) {
    std::vector<cplx> v(d, cplx(0.0, 0.0));
    v[i] = 1.0;
    return v;
}

}  // namespace sc
