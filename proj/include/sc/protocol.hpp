#pragma once

#include <optional>
#include <string>

#include "sc/capacities.hpp"

namespace sc {

// n-round classical-feedback-assisted classical communication protocol.
// Round i: encoder E^i: A'_{i-1} (x) X_{i-1} -> A'_i (x) A_i, the channel
// N: A_i -> B_i, then (for i < n) decoder D^i: B_i (x) B'_{i-1} -> X_i (x) B'_i
// whose X output is classical.  Bob measures B_n (x) B'_{n-1} at the end.
struct feedback_protocol {
    int n_rounds = 1;
    int message_count = 2;  // L
    std::vector<int> feedback_dims;  // |X_i|, i = 0..n-1
    std::vector<int> alice_dims;     // A'_i, i = 0..n
    std::vector<int> bob_dims;       // B'_i, i = 0..n-1
    std::vector<density_operator> initial_alice;  // per message, on A'_0
    ensemble initial_bob;                         // {p_x, rho_x on B'_0}, |X_0| entries
    std::vector<kraus_channel> encoders;          // i = 1..n
    std::vector<kraus_channel> decoders;          // i = 1..n-1
    std::optional<povm> final_povm;               // on B_n (x) B'_{n-1}
    // set when a non-EB channel is used with encoders known not to entangle
    // the channel input with the rest of Alice's registers
    bool separable_inputs = false;

    double rate() const { return std::log2(static_cast<double>(message_count)) / n_rounds; }
    // throws dimension_mismatch_error if the register chain is inconsistent
    void validate_against(const kraus_channel& ch) const;
    // compose every decoder with computational-basis dephasing on X_i
    feedback_protocol with_classical_feedback_enforced() const;
};

// Dephase the first factor (dim head) of a channel's output space.
kraus_channel compose_output_dephasing(const kraus_channel& ch, int head, int tail);

enum class stage_kind { initial, post_encode, post_channel, post_decode };

struct trajectory_point {
    int round = 0;  // 0 for the initial point, 1..n otherwise
    stage_kind stage = stage_kind::initial;
    std::vector<density_operator> per_message;
    std::vector<std::string> registers;
};

struct protocol_trajectory {
    std::vector<trajectory_point> points;
    const trajectory_point& final_point() const { return points.back(); }
    // marginals of the final conditional states on B_n (x) B'_{n-1}
    std::vector<density_operator> final_bob_states() const;
};

// Exact density-matrix evolution of the conditional states, one per message.
// Throws state_invalid_error if accumulated negativity exceeds 1e-7 and
// dimension_cap_error if the per-message joint dimension exceeds 2^12.
protocol_trajectory simulate(const feedback_protocol& p, const kraus_channel& ch);

double success_probability(const std::vector<density_operator>& final_bob, const povm& decoder);

// Pretty-good measurement D^m = S^{-1/2} (rho^m / L) S^{-1/2} with the
// rank-deficient remainder folded in uniformly.
povm pgm_decoder(const std::vector<density_operator>& final_bob);
// Optimal two-state discrimination; requires exactly two states.
povm helstrom_decoder(const std::vector<density_operator>& final_bob);

enum class decoder_strategy { pgm, helstrom, given, best };

struct separability_entry {
    int round = 0;
    stage_kind stage = stage_kind::initial;
    int message = 0;
    double min_pt_eigenvalue = 0.0;
    bool ppt = false;
    bool conclusive = false;
};

struct round_mi {
    int round = 0;
    double mi_bob = 0.0;        // I(M; B_i B'_{i-1})
    double mi_memory = 0.0;     // I(M; B'_{i-1})
    double cmi = 0.0;           // I(M; B_i | B'_{i-1})
    double chain_slack = 0.0;   // mi_memory + chi - mi_bob
    double identity_defect = 0.0;
};

struct simulation_report {
    double p_succ = 0.0;
    double rate = 0.0;
    double exponent = 0.0;
    double bound = 0.0;   // 2^{-n E(R)}
    double margin = 0.0;  // bound - p_succ
    bool bound_holds = false;
    std::string decoder;
    double chi = 0.0;
    std::vector<round_mi> mi_chain;
    bool chain_ok = false;
    double cumulative_mi = 0.0;
    std::vector<separability_entry> separability;
    bool separability_ok = false;
};

// Checks p_succ <= 2^{-n E(R)} for the simulated protocol.  Throws
// not_entanglement_breaking_error when the channel verdict is NotEB and the
// protocol is not flagged separable-inputs.  A precomputed exponent curve
// for the protocol rate may be supplied to avoid recomputation.
simulation_report verify_strong_converse_bound(const feedback_protocol& p,
                                               const kraus_channel& ch,
                                               decoder_strategy strategy,
                                               const exponent_curve* precomputed = nullptr,
                                               const budget& b = {});

// PPT of every per-round, per-message state across the Alice:Bob cut.
std::vector<separability_entry> verify_separability(const protocol_trajectory& t);

struct chain_report {
    std::vector<round_mi> rounds;
    double cumulative_mi = 0.0;
    double chi = 0.0;
    bool holds = false;
    double max_identity_defect = 0.0;
};

// Mutual-information chain bound: per round
// I(M;B_i B'_{i-1}) <= I(M;B'_{i-1}) + chi + 1e-6, and cumulatively
// I(M;B_n B'_{n-1}) <= n chi + 1e-6.
chain_report verify_weak_converse_chain(const protocol_trajectory& t, double chi,
                                        double slack = 1e-6);

// Random protocol over the given channel: Haar-dilation CPTP encoders and
// decoders (decoders dephased on X), random initial states.  Deterministic
// per seed.  Feedback alphabets are capped at 4.
feedback_protocol random_protocol(const kraus_channel& ch, int n_rounds, int message_count,
                                  int alice_dim, int bob_dim, int feedback_dim,
                                  std::uint64_t seed);

}  // namespace sc
