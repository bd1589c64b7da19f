#include <doctest.h>

#include <cmath>

#include "sc/linalg.hpp"

using namespace sc;

namespace {

complex_matrix random_hermitian(int d, std::uint64_t seed) {
    rng gen(seed);
    complex_matrix m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = cplx(gen.gaussian(), gen.gaussian());
    return hermitize(m);
}

complex_matrix diag2(double a, double b) {
    complex_matrix m(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

}  // namespace

TEST_CASE("eigh: diagonal input") {
    spectrum sp = eigh(diag2(2.0, 1.0));
    CHECK(sp.eigenvalues[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(sp.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));
    // eigenvectors are the standard basis up to phase
    CHECK(std::abs(sp.vectors(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(sp.vectors(1, 1)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eigh: Pauli-X spectrum") {
    complex_matrix x(2, 2);
    x(0, 1) = 1.0;
    x(1, 0) = 1.0;
    spectrum sp = eigh(x);
    CHECK(sp.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sp.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("eigh: reconstruction oracle on random Hermitian up to d=16") {
    for (int d : {2, 3, 4, 8, 16}) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            complex_matrix h = random_hermitian(d, 100 * d + seed);
            spectrum sp = eigh(h);
            const double err = max_abs(sp.reconstruct() - h);
            CHECK(err <= 1e-8 * std::max(1.0, max_abs(h)));
            // orthonormality
            const double orth = max_abs(dagger(sp.vectors) * sp.vectors -
                                        complex_matrix::identity(d));
            CHECK(orth <= 1e-9);
            // descending order
            for (size_t i = 1; i < sp.eigenvalues.size(); ++i)
                CHECK(sp.eigenvalues[i - 1] >= sp.eigenvalues[i]);
        }
    }
}

TEST_CASE("eigh: rejects non-hermitian and non-square") {
    complex_matrix m(2, 2);
    m(0, 1) = 1.0;  // not Hermitian: m(1,0) = 0
    CHECK_THROWS_AS(eigh(m), non_hermitian_error);
    complex_matrix ns(2, 3);
    CHECK_THROWS_AS(eigh(ns), non_square_error);
}

TEST_CASE("fractional_power: diagonal cases") {
    complex_matrix m = diag2(4.0, 9.0);
    complex_matrix r = fractional_power(m, 0.5);
    CHECK(r(0, 0).real() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r(1, 1).real() == doctest::Approx(3.0).epsilon(1e-12));

    // rank-deficient support convention: diag(1,0)^(-1/2) = diag(1,0)
    complex_matrix s = fractional_power(diag2(1.0, 0.0), -0.5);
    CHECK(s(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(s(1, 1)) <= 1e-14);
}

TEST_CASE("fractional_power: cube-root composition oracle") {
    for (std::uint64_t seed : {7u, 8u, 9u}) {
        complex_matrix m = random_density_matrix(4, 4, seed);
        complex_matrix c = fractional_power(m, 1.0 / 3.0);
        complex_matrix m3 = c * c * c;
        CHECK(max_abs(m3 - m) <= 1e-7);
    }
}

TEST_CASE("fractional_power: power additivity on the support") {
    rng gen(21);
    complex_matrix m = random_density_matrix(3, 2, gen);
    complex_matrix a = fractional_power(m, 0.7) * fractional_power(m, 0.3);
    complex_matrix b = fractional_power(m, 1.0);
    CHECK(max_abs(a - b) <= 1e-7);
}

TEST_CASE("fractional_power: rejects indefinite input") {
    CHECK_THROWS_AS(fractional_power(diag2(1.0, -0.5), 0.5), negative_eigenvalue_error);
}

TEST_CASE("schatten_norm: trace and Frobenius cases") {
    CHECK(schatten_norm(diag2(3.0, 4.0), 1.0) == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(schatten_norm(diag2(3.0, 4.0), 2.0) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK_THROWS_AS(schatten_norm(diag2(1.0, 1.0), 0.5), invalid_order_error);
}

TEST_CASE("schatten_norm: trace norm equals singular value sum") {
    rng gen(5);
    complex_matrix m(3, 3);
    for (auto& z : m.a) z = cplx(gen.gaussian(), gen.gaussian());
    double s1 = schatten_norm(m, 1.0);
    double brute = 0.0;
    for (double s : singular_values(m)) brute += s;
    CHECK(std::abs(s1 - brute) <= 1e-9);
}

TEST_CASE("schatten_norm: non-increasing in alpha") {
    rng gen(11);
    for (int rep = 0; rep < 200; ++rep) {
        const int d = 2 + static_cast<int>(gen.uniform_index(3));
        complex_matrix m(d, d);
        for (auto& z : m.a) z = cplx(gen.gaussian(), gen.gaussian());
        double prev = schatten_norm(m, 1.0);
        for (double alpha : {1.5, 2.0, 3.0, 5.0}) {
            double cur = schatten_norm(m, alpha);
            CHECK(cur <= prev + 1e-10);
            prev = cur;
        }
    }
}

TEST_CASE("kron: basics and mixed-product") {
    complex_matrix i2 = complex_matrix::identity(2);
    CHECK(max_abs(kron(i2, i2) - complex_matrix::identity(4)) == 0.0);

    complex_matrix d12 = diag2(1.0, 2.0), d34 = diag2(3.0, 4.0);
    complex_matrix k = kron(d12, d34);
    CHECK(k(0, 0).real() == doctest::Approx(3.0));
    CHECK(k(1, 1).real() == doctest::Approx(4.0));
    CHECK(k(2, 2).real() == doctest::Approx(6.0));
    CHECK(k(3, 3).real() == doctest::Approx(8.0));

    rng gen(3);
    auto rnd = [&] {
        complex_matrix m(2, 2);
        for (auto& z : m.a) z = cplx(gen.gaussian(), gen.gaussian());
        return m;
    };
    complex_matrix a = rnd(), b = rnd(), c = rnd(), d = rnd();
    CHECK(max_abs(kron(a, b) * kron(c, d) - kron(a * c, b * d)) <= 1e-10);
}

TEST_CASE("partial_trace: Bell state marginal") {
    std::vector<cplx> bell = {1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0)};
    complex_matrix rho = outer(bell);
    complex_matrix a = partial_trace(rho, {2, 2}, {0});
    CHECK(max_abs(a - 0.5 * complex_matrix::identity(2)) <= 1e-12);
}

TEST_CASE("partial_trace: product state and associativity") {
    rng gen(17);
    complex_matrix ra = random_density_matrix(2, 2, gen);
    complex_matrix rb = random_density_matrix(2, 2, gen);
    complex_matrix prod = kron(ra, rb);
    CHECK(max_abs(partial_trace(prod, {2, 2}, {0}) - ra) <= 1e-12);

    complex_matrix rabc = random_density_matrix(8, 8, gen);
    complex_matrix step = partial_trace(rabc, {2, 2, 2}, {0, 2});  // trace B
    complex_matrix two = partial_trace(step, {2, 2}, {0});         // then C
    complex_matrix direct = partial_trace(rabc, {2, 2, 2}, {0});
    CHECK(max_abs(two - direct) <= 1e-12);
    // trace preservation
    CHECK(std::abs(trace(direct).real() - 1.0) <= 1e-12);
}

TEST_CASE("partial_trace: rejects bad dims") {
    complex_matrix m = complex_matrix::identity(4);
    CHECK_THROWS_AS(partial_trace(m, {3, 2}, {0}), dimension_mismatch_error);
}

TEST_CASE("haar_random_unitary: unitarity and determinism") {
    complex_matrix u1 = haar_random_unitary(4, 7u);
    complex_matrix u2 = haar_random_unitary(4, 7u);
    CHECK(max_abs(dagger(u1) * u1 - complex_matrix::identity(4)) <= 1e-9);
    CHECK(max_abs(u1 - u2) == 0.0);  // bit-identical

    complex_matrix u = haar_random_unitary(1, 3u);
    CHECK(std::abs(std::abs(u(0, 0)) - 1.0) <= 1e-12);
}

TEST_CASE("random_density_matrix: rank and trace") {
    complex_matrix rho = random_density_matrix(3, 2, 42u);
    CHECK(std::abs(trace(rho).real() - 1.0) <= 1e-12);
    spectrum sp = eigh(rho);
    CHECK(sp.eigenvalues[0] > 1e-3);
    CHECK(sp.eigenvalues[1] > 1e-12);
    CHECK(std::abs(sp.eigenvalues[2]) < 1e-12);  // exactly one eigenvalue below 1e-12
}
