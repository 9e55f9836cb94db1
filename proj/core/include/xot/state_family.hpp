#pragma once

#include <array>
#include <utility>
#include <vector>

#include "xot/linalg.hpp"

namespace xot::states {

// Overlap coordinates of a symmetric four-state family: F = <next|prev> for
// cyclically adjacent states (complex), G = <first|third> across the diagonal
// (always real for a family generated by a fourth-root unitary).
struct OverlapParams {
  double re_f = 0.0;
  double im_f = 0.0;
  double g = 0.0;

  linalg::cdouble f() const { return {re_f, im_f}; }
  double abs_f() const;
  double theta_f() const; // arg(F)

  // Weights of the seed state over the four eigenlines of the cycling
  // unitary (eigenvalue i^k): lambda_k >= 0 iff a state family exists.
  std::array<double, 4> fourier_weights() const;
  bool state_realizable(double tol = 1e-12) const;
  // Realizable and |F| <= 1/3, |G| <= 1/3, the range on which an honest
  // receiver can extract one of the three bits with probability 1/3 each.
  bool honest_feasible(double tol = 1e-12) const;
};

// Four pure states |psi_m> = U^m |psi_0> in the cyclic bit order
// 00 -> 01 -> 11 -> 10, together with the cycling unitary (U^4 = 1) and the
// Fourier weights that realise the requested overlaps.
struct SymmetricFamily {
  std::array<linalg::CVec, 4> states;
  linalg::CMat u;
  std::array<double, 4> fourier_weights{};

  int dim() const { return states[0].dim(); }
  // gram().at(i, j) = <psi_i|psi_j>
  linalg::CMat gram() const;
};

// Constructs the family in the eigenbasis of U. Zero Fourier weights drop the
// corresponding dimension, so the family lives in the span of its states.
// Throws if any weight is below -tolerance (not state-realizable).
SymmetricFamily build_symmetric_family(const OverlapParams& p);

// Cyclic order index for a bit pair; 00 -> 0, 01 -> 1, 11 -> 2, 10 -> 3.
int bits_to_index(int x0, int x1);
std::pair<int, int> index_to_bits(int m);

// The four qutrit protocol states (|0> + (-1)^x1 |1> + (-1)^x0 |2>)/sqrt(3),
// in cyclic order. Their overlaps are F = 1/3, G = -1/3.
std::array<linalg::CVec, 4> qutrit_states();

// The qutrit cycling unitary taking each protocol state to the next.
linalg::CMat qutrit_cycle_unitary();

// The six sender states of the reversed protocol. Index 2*b + v is the state
// announcing bit index b in {0,1,2} with value v.
std::array<linalg::CVec, 6> reversed_states();

// Three-qutrit encoding (dimension 27) of the same four bit pairs; its Gram
// matrix coincides with the qutrit family's.
std::array<linalg::CVec, 4> three_qutrit_states();

}  // namespace xot::states
