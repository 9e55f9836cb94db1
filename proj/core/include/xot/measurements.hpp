#pragma once

#include <array>
#include <string>
#include <vector>

#include "xot/linalg.hpp"
#include "xot/state_family.hpp"

namespace xot::measure {

// Positive operator-valued measure: PSD operators summing to the identity.
struct Povm {
  std::vector<linalg::CMat> ops;
  std::vector<std::string> labels;

  int dim() const { return ops.empty() ? 0 : ops.front().rows(); }
  int size() const { return static_cast<int>(ops.size()); }
  // Largest violation of positivity / completeness / Hermiticity.
  double validity_residual() const;
  void validate() const; // throws on residual beyond tolerance
  // Outcome probabilities for a pure state (clamped at 0).
  std::vector<double> outcome_probabilities(const linalg::CVec& state) const;
  std::vector<double> outcome_probabilities(const linalg::CMat& rho) const;
};

// Mixed-state ensemble with prior probabilities.
struct StateEnsemble {
  std::vector<linalg::CMat> states;
  std::vector<double> priors;

  static StateEnsemble equiprobable_pure(const std::vector<linalg::CVec>& kets);
  int size() const { return static_cast<int>(states.size()); }
  void validate() const;
};

// The six-outcome unambiguous elimination measurement of the qutrit protocol.
// Outcome order: (x0=0, x0=1, x1=0, x1=1, x2=0, x2=1); each operator
// annihilates the two states it eliminates.
Povm elimination_povm();
// Bit index (0,1,2) and bit value announced by elimination outcome o.
int elimination_outcome_bit(int o);
int elimination_outcome_value(int o);
// Family indices (cyclic order) of the two states outcome o rules out.
std::array<int, 2> eliminated_states(int o);

// Square-root measurement rho^{-1/2} p_i |psi_i><psi_i| rho^{-1/2} for an
// equiprobable pure-state ensemble. If the ensemble does not span the space a
// residual operator (label "rest") completes the identity. Unequal priors are
// rejected.
Povm square_root_measurement(const StateEnsemble& e);

// Average success probability sum_i prior_i Tr(rho_i Pi_o) over the accepted
// outcomes o in correct[i]. Every ensemble member must have at least one
// accepted outcome.
double success_probability(const Povm& p, const StateEnsemble& e,
                           const std::vector<std::vector<int>>& correct);

struct CertReport {
  bool optimal = false;
  double max_violation = 0.0;
};

// Minimum-error optimality certificate: with Gamma = sum_o prior_{g(o)}
// rho_{g(o)} Pi_o, the measurement (with guess map g) is optimal iff Gamma is
// Hermitian and Gamma - prior_j rho_j is PSD for every j. The report carries
// the largest violation found; the measurement is certified optimal when it is
// below 1e-9. An empty guess map means outcome o guesses state o.
CertReport min_error_certificate(const Povm& p, const StateEnsemble& e,
                                 const std::vector<int>& guess = {});

// Orthonormal six-dimensional basis whose first-three-coordinates blocks
// reproduce the elimination operators (the projective dilation used to run the
// six-outcome measurement with orthogonal projectors).
std::array<linalg::CVec, 6> elimination_lift_basis();

// Reversed protocol: the receiver's four-outcome measurement
// Pi_m = |Phi_m><Phi_m| with |Phi_m> = (|0> + (-1)^x1 |1> + (-1)^x0 |2>)/2,
// in cyclic order. Identical to the square-root measurement of the qutrit
// family.
Povm reversed_receiver_povm();

// Reversed protocol: the three mixed states {rho_x0, rho_x1, rho_x2} a
// cheating receiver must discriminate (pairs of sender states, priors 1/3).
StateEnsemble reversed_pair_ensemble();

// Reversed protocol: optimal bit-index guessing measurement
// Pi_{x_i} = (|a><a| + |b><b|)/2 over the basis pair supporting rho_{x_i}.
Povm reversed_index_guess_povm();

// Conditional 4x4 register states held by a cheating sender who keeps half of
// an entangled superposition, given the honest receiver learnt bit index b.
// Entries depend only on the overlaps (F, G).
std::array<linalg::CMat, 3> conditional_register_states(const states::OverlapParams& p);

// The projective measurement on the kept register that extracts the best
// guess of b: projectors onto (1,i,1,i)/2, (1,-i,1,-i)/2, (1,1,-1,-1)/2,
// (1,-1,-1,1)/2.
Povm register_guess_povm();

}  // namespace xot::measure
