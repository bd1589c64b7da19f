#include "sc/optim.hpp"

#include <cmath>

namespace sc {

namespace {

void normalize(std::vector<cplx>& v) {
    double n = 0.0;
    for (const cplx& z : v) n += std::norm(z);
    n = std::sqrt(n);
    for (cplx& z : v) z /= n;
}

}  // namespace

pure_state_opt climb_pure_state(const std::function<double(const std::vector<cplx>&)>& f,
                                std::vector<cplx> start, rng& gen, int max_iter) {
    pure_state_opt best;
    normalize(start);
    best.state = std::move(start);
    best.value = f(best.state);
    best.evaluations = 1;

    const int d = static_cast<int>(best.state.size());
    double step = 0.5;
    int fails = 0;
    for (int it = 0; it < max_iter && step > 1e-9; ++it) {
        std::vector<cplx> cand = best.state;
        for (int i = 0; i < d; ++i) cand[i] += step * cplx(gen.gaussian(), gen.gaussian());
        normalize(cand);
        const double v = f(cand);
        ++best.evaluations;
        if (v > best.value) {
            best.value = v;
            best.state = std::move(cand);
            fails = 0;
        } else if (++fails >= 10) {
            step *= 0.6;
            fails = 0;
        }
    }
    return best;
}

pure_state_opt maximize_over_pure_states(int d,
                                         const std::function<double(const std::vector<cplx>&)>& f,
                                         const budget& b) {
    pure_state_opt best;
    const int restarts = std::max(1, b.restarts);
    for (int r = 0; r < restarts; ++r) {
        rng gen = rng::derived(b.seed, static_cast<std::uint64_t>(r) + 1);
        std::vector<cplx> start =
            (r < d) ? basis_ket(d, r) : random_pure_state(d, gen);
        pure_state_opt got = climb_pure_state(f, std::move(start), gen, b.max_iter);
        if (r == 0 || got.value > best.value) {
            best.value = got.value;
            best.state = std::move(got.state);
        }
        best.evaluations += got.evaluations;
    }
    return best;
}

std::vector<cplx> bloch_state(double theta, double phi) {
    return {cplx(std::cos(0.5 * theta), 0.0),
            std::polar(std::sin(0.5 * theta), phi)};
}

pure_state_opt bloch_grid_max(const std::function<double(const std::vector<cplx>&)>& f,
                              int n_phi, int n_theta, std::uint64_t polish_seed) {
    pure_state_opt best;
    bool first = true;
    const double pi = 3.14159265358979323846;
    for (int t = 0; t < n_theta; ++t) {
        const double theta = pi * t / (n_theta - 1);
        // poles contribute a single state; scanning phi there is redundant
        const int phis = (t == 0 || t == n_theta - 1) ? 1 : n_phi;
        for (int p = 0; p < phis; ++p) {
            const double phi = 2.0 * pi * p / n_phi;
            std::vector<cplx> psi = bloch_state(theta, phi);
            const double v = f(psi);
            ++best.evaluations;
            if (first || v > best.value) {
                first = false;
                best.value = v;
                best.state = std::move(psi);
            }
        }
    }
    rng gen(polish_seed);
    pure_state_opt polished = climb_pure_state(f, best.state, gen, 400);
    polished.evaluations += best.evaluations;
    return polished;
}

}  // namespace sc
