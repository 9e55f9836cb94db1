#include "xot/cheat_analysis.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace xot::cheat {

using linalg::CMat;
using linalg::CVec;
using linalg::cdouble;
using states::OverlapParams;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// The ellipsoid eigenvalues are four times the Fourier weights; directions
// whose weight falls below the family support cutoff carry no amplitude, so
// both routes treat them as exactly zero.
constexpr double kDegenerateTol = 4.0 * linalg::kSupportCutoff;

// Eigenvalues of the normalisation form in the Fourier eigenbasis order
// (1, i, -1, -i phases down the first column of v).
std::array<double, 4> ellipsoid_eigs(const OverlapParams& p) {
  return {1.0 + p.g + 2.0 * p.re_f, 1.0 - p.g + 2.0 * p.im_f,
          1.0 + p.g - 2.0 * p.re_f, 1.0 - p.g - 2.0 * p.im_f};
}

}  // namespace

double bob_cheat_closed_form(const OverlapParams& p) {
  double sum = 0.0;
  for (double rad : ellipsoid_eigs(p)) {
    if (rad < -1e-12) {
      std::ostringstream os;
      os << "bob_cheat_closed_form: radicand " << rad
         << " negative, overlaps not state-realizable";
      throw std::invalid_argument(os.str());
    }
    // Boundary radicands are floating-point residue of an exact zero; keeping
    // them would inject a spurious sqrt(eps) term.
    sum += (rad < kDegenerateTol) ? 0.0 : std::sqrt(rad);
  }
  return sum * sum / 16.0;
}

double bob_cheat_oracle(const OverlapParams& p) {
  const auto fam = states::build_symmetric_family(p);
  std::vector<CVec> kets(fam.states.begin(), fam.states.end());
  const auto ensemble = measure::StateEnsemble::equiprobable_pure(kets);
  const auto srm = measure::square_root_measurement(ensemble);
  std::vector<std::vector<int>> correct(4);
  for (int i = 0; i < 4; ++i) correct[i] = {i};
  return measure::success_probability(srm, ensemble, correct);
}

double alice_test_bound_closed_form(const OverlapParams& p) {
  const double are = std::abs(p.re_f), aim = std::abs(p.im_f), ag = std::abs(p.g);
  if (p.g <= 0.0) return 1.0 / 3.0 + 0.5 * aim + 0.5 * std::max(are, ag);
  return 1.0 / 3.0 + 0.5 * are + 0.5 * std::max(aim, ag);
}

double alice_test_oracle(const OverlapParams& p) {
  const auto mus = measure::conditional_register_states(p);
  const auto povm = measure::register_guess_povm();
  double total = 0.0;
  for (const auto& op : povm.ops) {
    double best = 0.0;
    for (const auto& mu : mus)
      best = std::max(best, (mu * op).trace().real() / 3.0);
    total += best;
  }
  return total;
}

namespace {

struct BlockTop {
  double plus = kNaN;  // larger eigenvalue of the 2x2 block (or 1x1 quotient)
  double minus = kNaN; // smaller one; NaN when the block is reduced
  bool reduced = false;
};

// Top of one 2x2 block of the rescaled quadratic form. The block couples
// Fourier directions ka, kb with diagonal numerators 1/3 + d and 1/3 - d and
// cross coupling q. Directions with vanishing ellipsoid eigenvalue carry no
// family amplitude and are dropped.
BlockTop block_top(double ea, double eb, double d, double cross) {
  BlockTop out;
  const bool va = ea > kDegenerateTol, vb = eb > kDegenerateTol;
  if (va && vb) {
    // den * lambda~ = half_sum +- sqrt(half_diff^2 + cross^2 den), the
    // quotient form of the 2x2 eigenvalues.
    const double den = ea * eb;
    const double third_a = (1.0 / 3.0 + d) * eb;
    const double third_b = (1.0 / 3.0 - d) * ea;
    const double half_sum = 0.5 * (third_a + third_b);
    const double half_diff = 0.5 * (third_a - third_b);
    const double root = std::sqrt(half_diff * half_diff + cross * cross * den);
    out.plus = (half_sum + root) / den;
    out.minus = (half_sum - root) / den;
  } else if (va) {
    out.plus = (1.0 / 3.0 + d) / ea;
    out.reduced = true;
  } else if (vb) {
    out.plus = (1.0 / 3.0 - d) / eb;
    out.reduced = true;
  } else {
    out.reduced = true;
  }
  return out;
}

}  // namespace

AliceNoTest alice_notest_closed_form(const OverlapParams& p) {
  const auto e = ellipsoid_eigs(p);
  AliceNoTest out;

  // Block coupling Fourier directions 0 and 2 (real part of F), eigenvalue
  // display [1/3(1+G) - 2ReF^2 +- sqrt((1/3+G)^2 ReF^2 + D ImF^2)] / D with
  // D = (1+G)^2 - 4ReF^2.
  const BlockTop b02 = block_top(e[0], e[2], p.re_f, p.im_f);
  // Block coupling directions 1 and 3 (imaginary part of F).
  const BlockTop b13 = block_top(e[1], e[3], p.im_f, p.re_f);
  out.lam00 = b02.plus;
  out.lam02 = b02.minus;
  out.lam01 = b13.plus;
  out.lam03 = b13.minus;
  out.support_reduced = b02.reduced || b13.reduced;

  out.p01_max = -std::numeric_limits<double>::infinity();
  if (!std::isnan(out.lam00)) out.p01_max = std::max(out.p01_max, out.lam00);
  if (!std::isnan(out.lam01)) out.p01_max = std::max(out.p01_max, out.lam01);

  // Index-2 branch: diagonal quotients (1/3 +- G) / e_k on the support.
  const double num_plus = 1.0 / 3.0 + p.g;
  const double num_minus = 1.0 / 3.0 - p.g;
  const double nums[4] = {num_plus, num_minus, num_plus, num_minus};
  for (int k = 0; k < 4; ++k)
    out.lam2[k] = (e[k] > kDegenerateTol) ? nums[k] / e[k] : kNaN;

  // Piecewise display: the two candidate quotients with the smaller
  // denominator of each sign pair; at a degenerate corner only one branch
  // survives and is used alone.
  const double den_a = 1.0 + p.g - 2.0 * std::abs(p.re_f);
  const double den_b = 1.0 - p.g - 2.0 * std::abs(p.im_f);
  out.p2_max = -std::numeric_limits<double>::infinity();
  bool p2_eval = false;
  if (den_a > kDegenerateTol) {
    out.p2_max = std::max(out.p2_max, num_plus / den_a);
    p2_eval = true;
  }
  if (den_b > kDegenerateTol) {
    out.p2_max = std::max(out.p2_max, num_minus / den_b);
    p2_eval = true;
  }
  if (!p2_eval) {
    for (int k = 0; k < 4; ++k)
      if (!std::isnan(out.lam2[k])) {
        out.p2_max = std::max(out.p2_max, out.lam2[k]);
        p2_eval = true;
      }
  }
  if (den_a <= kDegenerateTol || den_b <= kDegenerateTol) out.support_reduced = true;

  if (!p2_eval || !std::isfinite(out.p01_max)) {
    std::ostringstream os;
    os << "alice_notest_closed_form: degenerate at ReF=" << p.re_f
       << " ImF=" << p.im_f << " G=" << p.g;
    throw std::invalid_argument(os.str());
  }

  out.overall = std::max(out.p01_max, out.p2_max);

  // For real F the expressions reduce to the four quotients (i)-(iv); inside
  // the honest band the two routes must agree.
  if (std::abs(p.im_f) <= 1e-14 && std::abs(p.g) <= 1.0 / 3.0 + 1e-12) {
    const auto rb = real_f_branches(p);
    const double af = std::abs(p.re_f);
    std::optional<double> p01_red =
        (p.g >= -af) ? rb.i : (rb.ii ? rb.ii : rb.i);
    std::optional<double> p2_red;
    const double threshold = -af / (2.0 - 3.0 * af);
    if (p.g >= threshold && rb.iii)
      p2_red = rb.iii;
    else if (rb.iv)
      p2_red = rb.iv;
    else
      p2_red = rb.iii;
    if (p01_red && std::abs(*p01_red - out.p01_max) > 1e-10)
      throw std::logic_error("alice_notest_closed_form: real-F p01 branches disagree");
    if (p2_red && std::abs(*p2_red - out.p2_max) > 1e-10)
      throw std::logic_error("alice_notest_closed_form: real-F p2 branches disagree");
  }
  return out;
}

RealBranches real_f_branches(const OverlapParams& p) {
  const double af = p.abs_f();
  const double g = p.g;
  RealBranches rb;
  if (1.0 - g > kDegenerateTol) rb.i = (1.0 / 3.0 + af) / (1.0 - g);
  if (1.0 + g + 2.0 * af > kDegenerateTol)
    rb.ii = (1.0 / 3.0 + af) / (1.0 + g + 2.0 * af);
  if (1.0 + g - 2.0 * af > kDegenerateTol)
    rb.iii = (1.0 / 3.0 + g) / (1.0 + g - 2.0 * af);
  if (1.0 - g > kDegenerateTol) rb.iv = (1.0 / 3.0 - g) / (1.0 - g);
  return rb;
}

EigProblem build_eig_problem(const OverlapParams& p) {
  EigProblem ep;
  const cdouble f = p.f();
  const cdouble fc = std::conj(f);
  const double g = p.g;
  const double third = 1.0 / 3.0;

  ep.m0 = CMat(4, 4);
  ep.m1 = CMat(4, 4);
  ep.m2 = CMat(4, 4);
  for (int i = 0; i < 4; ++i) {
    ep.m0.at(i, i) = third;
    ep.m1.at(i, i) = third;
    ep.m2.at(i, i) = third;
  }
  ep.m0.at(0, 1) = fc; ep.m0.at(1, 0) = f;
  ep.m0.at(2, 3) = fc; ep.m0.at(3, 2) = f;
  ep.m1.at(0, 3) = f;  ep.m1.at(3, 0) = fc;
  ep.m1.at(1, 2) = fc; ep.m1.at(2, 1) = f;
  ep.m2.at(0, 2) = g;  ep.m2.at(2, 0) = g;
  ep.m2.at(1, 3) = g;  ep.m2.at(3, 1) = g;

  // Fourier eigenvectors of the circulant sum, columns of v.
  const cdouble i1(0.0, 1.0);
  ep.v = CMat(4, 4);
  const cdouble roots[4] = {1.0, i1, -1.0, -i1};
  for (int col = 0; col < 4; ++col) {
    cdouble w = 1.0;
    for (int row = 0; row < 4; ++row) {
      ep.v.at(row, col) = 0.5 * w;
      w *= roots[col];
    }
  }
  ep.ellipsoid_eigs = ellipsoid_eigs(p);
  std::vector<cdouble> d(4);
  for (int k = 0; k < 4; ++k)
    d[k] = std::sqrt(std::max(ep.ellipsoid_eigs[k], 0.0));
  ep.d_sq = CMat::diag(d);
  return ep;
}

NoTestOracle alice_notest_oracle(const OverlapParams& p) {
  if (!p.state_realizable())
    throw std::invalid_argument("alice_notest_oracle: overlaps not state-realizable");
  const EigProblem ep = build_eig_problem(p);

  std::vector<int> kept;
  for (int k = 0; k < 4; ++k)
    if (ep.ellipsoid_eigs[k] > kDegenerateTol) kept.push_back(k);
  const int r = static_cast<int>(kept.size());

  // Columns of w are the Fourier vectors scaled by 1/sqrt(eig), restricted to
  // the occupied directions; w^dag M w is the rescaled form on the support.
  CMat w(4, r);
  for (int c = 0; c < r; ++c) {
    const int k = kept[c];
    const double scale = 1.0 / std::sqrt(ep.ellipsoid_eigs[k]);
    for (int row = 0; row < 4; ++row) w.at(row, c) = scale * ep.v.at(row, k);
  }
  const CMat wd = w.adjoint();

  auto transformed = [&](const CMat& m) { return wd * m * w; };
  const auto eig0 = linalg::hermitian_eig(transformed(ep.m0));
  const auto eig1 = linalg::hermitian_eig(transformed(ep.m1));
  const auto eig2 = linalg::hermitian_eig(transformed(ep.m2));

  NoTestOracle out;
  out.p01_max = eig0.values.back();
  out.p2_max = eig2.values.back();
  if (std::abs(eig1.values.back() - eig0.values.back()) > 1e-9)
    throw std::logic_error("alice_notest_oracle: p(b=0) and p(b=1) maxima differ");

  // Normalisation check at the maximiser of p(b=0): the three probabilities
  // must sum to one.
  CVec top(r);
  for (int i = 0; i < r; ++i) top[i] = eig0.vectors.at(i, r - 1);
  const CVec coeffs = w * top;
  double total = 0.0;
  for (const CMat* m : {&ep.m0, &ep.m1, &ep.m2})
    total += linalg::expectation(*m, coeffs).real();
  out.prob_sum_residual = std::abs(total - 1.0);
  return out;
}

double reversed_bob_cheat(ReceiverTest mode) {
  const auto receiver = measure::reversed_receiver_povm();
  if (mode == ReceiverTest::none) {
    // Send the top eigenvector of one receiver operator and claim that
    // outcome; the success probability is its largest eigenvalue.
    double best = 0.0;
    for (const auto& op : receiver.ops)
      best = std::max(best, linalg::hermitian_eig(op).values.back());
    return best;
  }

  // Entangled strategy with uniform coefficients: keep a six-level register
  // pointing at which of the six states was "sent".
  const auto sent = states::reversed_states();
  const double c = 1.0 / std::sqrt(6.0);
  CVec joint(6 * 3);
  for (int j = 0; j < 6; ++j)
    for (int a = 0; a < 3; ++a) joint[j * 3 + a] = c * sent[j][a];

  // Receiver outcome m collapses the register to theta_m.
  std::vector<CVec> thetas;
  std::vector<double> occur;
  for (int m = 0; m < 4; ++m) {
    // Receiver operator is |u><u| with u = (|0> + (-1)^x1 |1> + (-1)^x0 |2>)/2.
    auto [x0, x1] = states::index_to_bits(m);
    CVec u(3);
    u[0] = 0.5;
    u[1] = x1 ? -0.5 : 0.5;
    u[2] = x0 ? -0.5 : 0.5;
    CVec reg(6);
    for (int j = 0; j < 6; ++j) {
      cdouble amp = 0.0;
      for (int a = 0; a < 3; ++a) amp += std::conj(u[a]) * sent[j][a];
      reg[j] = c * amp;
    }
    occur.push_back(reg.norm() * reg.norm());
    thetas.push_back(reg.normalized());
  }
  for (double q : occur)
    if (std::abs(q - 0.25) > 1e-12)
      throw std::logic_error("reversed_bob_cheat: conditional states not equiprobable");

  const auto ensemble = measure::StateEnsemble::equiprobable_pure(thetas);
  const auto srm = measure::square_root_measurement(ensemble);
  std::vector<std::vector<int>> correct(4);
  for (int i = 0; i < 4; ++i) correct[i] = {i};
  return measure::success_probability(srm, ensemble, correct);
}

double reversed_alice_cheat() {
  const auto ensemble = measure::reversed_pair_ensemble();
  const auto povm = measure::reversed_index_guess_povm();
  std::vector<std::vector<int>> correct = {{0}, {1}, {2}};
  const double via_pairs = measure::success_probability(povm, ensemble, correct);

  // Basis measurement with a best-guess map achieves the same value.
  measure::Povm basis;
  for (int i = 0; i < 3; ++i) {
    CMat proj(3, 3);
    proj.at(i, i) = 1.0;
    basis.ops.push_back(proj);
    basis.labels.push_back("k" + std::to_string(i));
  }
  double via_basis = 0.0;
  for (const auto& op : basis.ops) {
    double best = 0.0;
    for (const auto& rho : ensemble.states)
      best = std::max(best, (rho * op).trace().real() / 3.0);
    via_basis += best;
  }
  if (std::abs(via_pairs - via_basis) > 1e-12)
    throw std::logic_error("reversed_alice_cheat: the two optimal measurements disagree");
  return via_pairs;
}

ClassicalPoint classical_tradeoff(double s) {
  if (s < 0.0 || s > 1.0)
    throw std::invalid_argument("classical_tradeoff: s must lie in [0, 1]");
  ClassicalPoint out;
  out.a_ot = 1.0 / 3.0 + 2.0 * s / 3.0;
  out.b_ot = 1.0 - 0.5 * s;
  // 3(1/3 + 2s/3) + 4(1 - s/2) = (1 + 2s) + (4 - 2s) = 5 for every s.
  out.metric = 5.0;
  return out;
}

CheatReport make_cheat_report(const OverlapParams& p) {
  CheatReport rep;
  rep.params = p;
  rep.b_ot = bob_cheat_closed_form(p);
  rep.a_ot_test_bound = alice_test_bound_closed_form(p);
  rep.branches = alice_notest_closed_form(p);
  rep.a_ot_notest = rep.branches.overall;

  rep.b_ot_oracle = bob_cheat_oracle(p);
  rep.a_ot_test_oracle = alice_test_oracle(p);
  rep.notest_oracle = alice_notest_oracle(p);
  rep.bob_residual = std::abs(rep.b_ot - rep.b_ot_oracle);
  rep.alice_test_residual = std::abs(rep.a_ot_test_bound - rep.a_ot_test_oracle);
  rep.alice_notest_residual =
      std::max(std::abs(rep.notest_oracle.p01_max - rep.branches.p01_max),
               std::abs(rep.notest_oracle.p2_max - rep.branches.p2_max));
  return rep;
}

}  // namespace xot::cheat
