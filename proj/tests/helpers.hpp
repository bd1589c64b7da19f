#pragma once

#include <cmath>

#include "sc/channels.hpp"

namespace test_helpers {

using namespace sc;

// Random CPTP map via Stinespring: the isometry is the first d_in columns of
// a Haar unitary on C^(d_out * env).
inline kraus_channel random_channel(int din, int dout, int env, rng& gen) {
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

inline density_operator bell_state() {
    std::vector<cplx> v = {1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0)};
    return density_operator::pure(v, {2, 2});
}

inline density_operator random_state(int d, int rank, rng& gen) {
    return density_operator(random_density_matrix(d, rank, gen), {d});
}

inline povm computational_povm(int d) {
    std::vector<complex_matrix> els;
    for (int i = 0; i < d; ++i) els.push_back(outer(basis_ket(d, i)));
    return povm(std::move(els));
}

// POVM with n outcomes on C^d obtained by splitting the rows of a Haar
// isometry; always complete by construction.
inline povm random_povm(int d, int n, rng& gen) {
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

inline double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

}  // namespace test_helpers
