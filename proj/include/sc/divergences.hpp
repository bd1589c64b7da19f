#pragma once

#include "sc/channels.hpp"
#include "sc/optim.hpp"

namespace sc {

// Order parameter of the sandwiched Renyi relative entropy.
struct renyi_order {
    double alpha;

    explicit renyi_order(double a);
    // data-processing holds for alpha in [1/2, 1) u (1, inf)
    bool dpi_valid() const { return (alpha >= 0.5 && alpha < 1.0) || alpha > 1.0; }
};

// Divergences return bits; +infinity encodes the support-violation branch.
inline constexpr double divergence_infinity = std::numeric_limits<double>::infinity();

// Sandwiched Renyi relative entropy
//   (1/(alpha-1)) log2 Tr[(sigma^{(1-alpha)/(2alpha)} rho sigma^{(1-alpha)/(2alpha)})^alpha]
// evaluated on supports.  Returns +inf when alpha > 1 and supp(rho) is not
// contained in supp(sigma), or when rho and sigma are orthogonal.
// alpha = 1 is rejected; use relative_entropy for the Umegaki limit.
double sandwiched_renyi(const density_operator& rho, const density_operator& sigma,
                        double alpha);
double sandwiched_renyi(const density_operator& rho, const density_operator& sigma,
                        const renyi_order& a);

// Umegaki relative entropy D(rho||sigma) in bits; +inf outside the support.
double relative_entropy(const density_operator& rho, const density_operator& sigma);

double von_neumann_entropy(const complex_matrix& psd);
double von_neumann_entropy(const density_operator& rho);

// I(A;B) = H(A) + H(B) - H(AB) across the cut.
double mutual_information(const density_operator& rho, const bipartite_cut& cut);

// Disjoint subsystem index groups (A;B|C) over rho.dims; c may be empty.
struct mi_partition {
    std::vector<int> a, b, c;
};

// I(A;B|C) = H(AC) + H(BC) - H(ABC) - H(C)
double conditional_mutual_information(const density_operator& rho, const mi_partition& p);

// Theta_sigma(rho) = sigma^{1/2} rho sigma^{1/2}
complex_matrix theta_conjugation(const complex_matrix& sigma, const complex_matrix& rho);

// Theta_{sigma^{(1-alpha)/alpha}} o N as a CP Kraus map, the composition
// whose 1 -> alpha norm drives the success-probability bound; sigma lives
// on the channel output space.
kraus_map theta_composed_channel(const complex_matrix& sigma_power_half,
                                 const kraus_map& channel);

// Precomputed context for many D_alpha(rho || sigma) evaluations at a fixed
// sigma (the inner loops of the radius optimizers).
class sandwich_evaluator {
  public:
    sandwich_evaluator(const complex_matrix& sigma, double alpha);
    // rho must be a unit-trace PSD matrix of matching dimension
    double operator()(const complex_matrix& rho) const;

  private:
    double alpha_;
    complex_matrix half_power_;   // sigma^{(1-alpha)/(2alpha)} on the support
    complex_matrix kernel_proj_;  // projector onto ker(sigma)
    bool full_support_ = true;
};

// Same for the Umegaki relative entropy D(rho || sigma).
class relent_evaluator {
  public:
    explicit relent_evaluator(const complex_matrix& sigma);
    double operator()(const complex_matrix& rho) const;

  private:
    complex_matrix log_sigma_;    // log2 sigma on the support
    complex_matrix kernel_proj_;
    bool full_support_ = true;
};

struct norm_estimate {
    double value = 0.0;
    std::vector<cplx> witness;
    int evaluations = 0;
};

// 1 -> alpha norm nu_alpha(M) = sup_X ||M(X)||_alpha / ||X||_1 of a CP map,
// computed as a supremum over pure input states (multi-start ascent with a
// fixed-point accelerator).  The reported value is a certified lower bound
// and best estimate.  Requires alpha >= 1; alpha = 1 is evaluated in closed
// form as lambda_max(M^adj(I)).
norm_estimate one_to_alpha_norm(const kraus_map& m, double alpha, const budget& b = {});

// Hypothesis-testing lower bound (1/(alpha-1)) log2[p^alpha q^(1-alpha)],
// with conventions p = 0 -> -inf and q = 0 (p > 0) -> +inf.
double nagaoka_bound(double p, double q, double alpha);

// Checks D_alpha(rho||sigma) >= nagaoka_bound(Tr[L rho], Tr[L sigma], alpha) - slack
// for a test operator 0 <= L <= I.
struct nagaoka_check {
    bool holds = false;
    double divergence = 0.0;
    double bound = 0.0;
};
nagaoka_check verify_nagaoka(const density_operator& rho, const density_operator& sigma,
                             const complex_matrix& test_op, double alpha, double slack = 1e-7);

// Checks ||(M (x) id)(P_AB)||_alpha <= nu_alpha(M) ||P_B||_alpha for a
// separable PSD operator P_AB given as product terms {C_j (x) D_j}.
struct king_check {
    bool holds = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double nu = 0.0;
};
king_check verify_king(const kraus_map& m,
                       const std::vector<std::pair<complex_matrix, complex_matrix>>& terms,
                       double alpha, double slack = 1e-6, const budget& b = {});

}  // namespace sc
