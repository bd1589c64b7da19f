#pragma once

#include <complex>
#include <vector>

#include "sc/errors.hpp"
#include "sc/rng.hpp"

namespace sc {

using cplx = std::complex<double>;

// Relative eigenvalue threshold below which a PSD matrix is treated as
// rank-deficient.  Fractional powers, Kraus extraction and support tests all
// share this cutoff so kernel/support splits agree across modules.
inline constexpr double support_cutoff_rel = 1e-10;

// Dense complex matrix, row-major.
struct complex_matrix {
    int rows = 0;
    int cols = 0;
    std::vector<cplx> a;

    complex_matrix() = default;
    complex_matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    static complex_matrix identity(int d);

    cplx& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const cplx& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    bool square() const { return rows == cols; }
    int dim() const;  // throws non_square_error unless square
};

complex_matrix operator+(const complex_matrix& x, const complex_matrix& y);
complex_matrix operator-(const complex_matrix& x, const complex_matrix& y);
complex_matrix operator*(const complex_matrix& x, const complex_matrix& y);
complex_matrix operator*(cplx s, const complex_matrix& x);
inline complex_matrix operator*(double s, const complex_matrix& x) { return cplx(s, 0.0) * x; }

complex_matrix dagger(const complex_matrix& m);
cplx trace(const complex_matrix& m);
double frobenius_norm(const complex_matrix& m);
double max_abs(const complex_matrix& m);
// ||M - M^dagger||_max
double hermiticity_defect(const complex_matrix& m);
// (M + M^dagger)/2, cheap cleanup after round-off-heavy products
complex_matrix hermitize(const complex_matrix& m);
bool all_finite(const complex_matrix& m);

// Eigendecomposition result; eigenvalues sorted descending, eigenvectors are
// the matching columns of `vectors`.
struct spectrum {
    std::vector<double> eigenvalues;
    complex_matrix vectors;

    complex_matrix reconstruct() const;
    // V diag(f(lambda)) V^dagger
    complex_matrix apply(const std::vector<double>& fvals) const;
};

// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
// Convergence: off-diagonal Frobenius mass < 1e-14 * ||M||_F.
spectrum eigh(const complex_matrix& m, double hermiticity_tolerance = 1e-10);

// M^p on the support of M (eigenvalues <= support_cutoff_rel * lambda_max map
// to zero for any p, including p < 0).  Requires M PSD up to round-off.
complex_matrix fractional_power(const complex_matrix& m, double p);

// Schatten alpha-norm (Tr |X|^alpha)^(1/alpha), alpha >= 1.
double schatten_norm(const complex_matrix& m, double alpha);

std::vector<double> singular_values(const complex_matrix& m);

complex_matrix kron(const complex_matrix& x, const complex_matrix& y);

// Partial trace over the subsystems not listed in `keep`.  `dims` lists the
// subsystem dimensions in row-major index order; `keep` is a strictly
// increasing list of subsystem indices retained in the output.
complex_matrix partial_trace(const complex_matrix& m, const std::vector<int>& dims,
                             const std::vector<int>& keep);

complex_matrix haar_random_unitary(int d, rng& gen);
complex_matrix haar_random_unitary(int d, std::uint64_t seed);

// Random rank-r density matrix (Ginibre construction), unit trace.
complex_matrix random_density_matrix(int d, int rank, rng& gen);
complex_matrix random_density_matrix(int d, int rank, std::uint64_t seed);

// Random unit vector in C^d.
std::vector<cplx> random_pure_state(int d, rng& gen);

complex_matrix outer(const std::vector<cplx>& v);  // |v><v|
std::vector<cplx> basis_ket(int d, int i);

}  // namespace sc
