#pragma once

#include <array>
#include <optional>

#include "xot/linalg.hpp"
#include "xot/measurements.hpp"
#include "xot/state_family.hpp"

namespace xot::cheat {

// Receiver's best probability of learning both bits, as a function of the
// overlaps: (1/16) |sum of sqrt(1 +- G +- 2ReF/2ImF)|^2. Total in (F, G);
// radicands below -1e-12 mean the overlaps admit no state family and are
// rejected.
double bob_cheat_closed_form(const states::OverlapParams& p);

// Independent route: build the family, build the square-root measurement,
// evaluate its success probability.
double bob_cheat_oracle(const states::OverlapParams& p);

// Lower bound on the sender's index-guessing probability when the receiver
// tests a fraction of the states (entangled-superposition strategy):
//   1/3 + |ImF|/2 + max(|ReF|, |G|)/2   for G <= 0,
//   1/3 + |ReF|/2 + max(|ImF|, |G|)/2   for G > 0.
double alice_test_bound_closed_form(const states::OverlapParams& p);

// Independent route: conditional register states + the four-outcome register
// measurement with a best-guess map.
double alice_test_oracle(const states::OverlapParams& p);

// Sender cheating without testing: the best pure state in the span maximises
// one of the receiver's three index probabilities. Branch eigenvalues of the
// rescaled quadratic forms; NaN marks directions dropped because the family
// does not occupy them (zero Fourier weight).
struct AliceNoTest {
  double lam00, lam01, lam02, lam03;
  std::array<double, 4> lam2;
  double p01_max; // best p(b=0) = best p(b=1)
  double p2_max;  // best p(b=2)
  double overall;
  bool support_reduced = false; // some branch evaluated on a reduced support
};

AliceNoTest alice_notest_closed_form(const states::OverlapParams& p);

// The rescaled-ellipsoid eigenproblem behind the no-test analysis: quadratic
// forms m0/m1/m2 for the three index probabilities, the Fourier eigenvector
// matrix v of their sum, and the diagonal square root d_sq of its eigenvalues.
struct EigProblem {
  linalg::CMat m0, m1, m2;
  linalg::CMat v;
  std::array<double, 4> ellipsoid_eigs; // 1+G+2ReF, 1-G+2ImF, 1+G-2ReF, 1-G-2ImF
  linalg::CMat d_sq;
};

EigProblem build_eig_problem(const states::OverlapParams& p);

struct NoTestOracle {
  double p01_max;
  double p2_max;
  double prob_sum_residual; // |p(b=0)+p(b=1)+p(b=2) - 1| at the maximiser
};

// Independent route: top eigenvalues of the support-restricted transformed
// quadratic forms, via the generic eigensolver.
NoTestOracle alice_notest_oracle(const states::OverlapParams& p);

enum class ReceiverTest { none, active };

// Reversed protocol, cheating sender: largest eigenvalue of the receiver's
// operators (no test) or the entangled strategy with uniform coefficients
// followed by a square-root measurement on the kept register (test). Both
// give 3/4.
double reversed_bob_cheat(ReceiverTest mode);

// Reversed protocol, cheating receiver: minimum-error discrimination of the
// three pair mixtures; returns 1/2. Also evaluates the computational-basis
// measurement with a best-guess map and checks it achieves the same value.
double reversed_alice_cheat();

struct ClassicalPoint {
  double a_ot;
  double b_ot;
  double metric; // 3 a + 4 b, which telescopes to exactly 5 for every s
};

// Mixture of the two trivial classical protocols: protocol 1 (sender keeps
// the choice, cheats perfectly) with probability s, protocol 2 (receiver
// reads everything, cheats perfectly) otherwise.
ClassicalPoint classical_tradeoff(double s);

// Everything above for one parameter point. Closed forms and their oracle
// values are carried side by side, with the residuals between the two routes.
struct CheatReport {
  states::OverlapParams params;
  double b_ot = 0.0;
  double a_ot_test_bound = 0.0; // bound, not a proven optimum
  double a_ot_notest = 0.0;
  AliceNoTest branches;
  double b_ot_oracle = 0.0;
  double a_ot_test_oracle = 0.0; // value of the stated strategy
  NoTestOracle notest_oracle;
  double bob_residual = 0.0;
  double alice_test_residual = 0.0;
  double alice_notest_residual = 0.0;
};

CheatReport make_cheat_report(const states::OverlapParams& p);

// Reduced branch expressions for real F (labels (i)-(iv)); absent when a
// denominator degenerates.
struct RealBranches {
  std::optional<double> i, ii, iii, iv;
};

RealBranches real_f_branches(const states::OverlapParams& p);

}  // namespace xot::cheat
