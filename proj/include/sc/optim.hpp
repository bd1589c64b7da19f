#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sc/linalg.hpp"

namespace sc {

// Search effort knobs shared by the optimizing routines.  Restart seeds are
// derived from `seed` by fixed arithmetic, so results are reproducible and
// independent of evaluation order.
struct budget {
    int restarts = 20;
    int max_iter = 2000;
    std::uint64_t seed = 42;
};

struct pure_state_opt {
    double value = 0.0;
    std::vector<cplx> state;
    int evaluations = 0;
};

// Random-direction hill climbing on the unit sphere of C^d from a given
// start; generic fallback when no structure is available.
pure_state_opt climb_pure_state(const std::function<double(const std::vector<cplx>&)>& f,
                                std::vector<cplx> start, rng& gen, int max_iter);

// Multi-start maximization of f over pure states in C^d.  The first d starts
// are the computational basis kets, the rest are random.
pure_state_opt maximize_over_pure_states(int d,
                                         const std::function<double(const std::vector<cplx>&)>& f,
                                         const budget& b);

// psi(theta, phi) = (cos(theta/2), e^{i phi} sin(theta/2))
std::vector<cplx> bloch_state(double theta, double phi);

// Dense scan of a function of a qubit pure state over the Bloch sphere,
// n_phi x n_theta points, followed by a short local polish.
pure_state_opt bloch_grid_max(const std::function<double(const std::vector<cplx>&)>& f,
                              int n_phi, int n_theta, std::uint64_t polish_seed = 1);

}  // namespace sc
