#include "xot/measurements.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace xot::measure {

using linalg::CMat;
using linalg::CVec;
using linalg::cdouble;

double Povm::validity_residual() const {
  if (ops.empty()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  CMat sum(dim(), dim());
  for (const auto& op : ops) {
    worst = std::max(worst, op.max_asymmetry());
    worst = std::max(worst, -linalg::min_eigenvalue(0.5 * (op + op.adjoint())));
    sum += op;
  }
  worst = std::max(worst, linalg::max_abs_diff(sum, CMat::identity(dim())));
  return worst;
}

void Povm::validate() const {
  const double r = validity_residual();
  if (r > linalg::kPsdTol) {
    std::ostringstream os;
    os << "Povm::validate: completeness/positivity residual " << r;
    throw std::invalid_argument(os.str());
  }
}

std::vector<double> Povm::outcome_probabilities(const CVec& state) const {
  std::vector<double> probs(ops.size());
  for (std::size_t i = 0; i < ops.size(); ++i)
    probs[i] = std::max(0.0, linalg::expectation(ops[i], state).real());
  return probs;
}

std::vector<double> Povm::outcome_probabilities(const CMat& rho) const {
  std::vector<double> probs(ops.size());
  for (std::size_t i = 0; i < ops.size(); ++i)
    probs[i] = std::max(0.0, (rho * ops[i]).trace().real());
  return probs;
}

StateEnsemble StateEnsemble::equiprobable_pure(const std::vector<CVec>& kets) {
  StateEnsemble e;
  for (const auto& k : kets) {
    e.states.push_back(linalg::outer(k, k));
    e.priors.push_back(1.0 / static_cast<double>(kets.size()));
  }
  return e;
}

void StateEnsemble::validate() const {
  if (states.size() != priors.size())
    throw std::invalid_argument("StateEnsemble: states/priors size mismatch");
  double total = 0.0;
  for (double p : priors) {
    if (p < 0.0) throw std::invalid_argument("StateEnsemble: negative prior");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("StateEnsemble: priors do not sum to 1");
  for (const auto& rho : states) {
    if (std::abs(rho.trace().real() - 1.0) > linalg::kPsdTol || !linalg::is_psd(rho))
      throw std::invalid_argument("StateEnsemble: state not a density operator");
  }
}

namespace {

CVec qutrit_two_mode(int i, int j, double sign) {
  CVec v(3);
  v[i] = 1.0;
  v[j] = sign;
  return v;
}

}  // namespace

Povm elimination_povm() {
  // Pi = (1/4)(|i> +- |j>)(<i| +- <j|); each outcome keeps the two states
  // consistent with its announced bit and annihilates the other two.
  Povm p;
  const double quarter = 0.25;
  struct Spec {
    int i, j;
    double sign;
    const char* label;
  };
  static const Spec specs[6] = {
      {0, 2, +1.0, "x0=0"}, {0, 2, -1.0, "x0=1"}, {0, 1, +1.0, "x1=0"},
      {0, 1, -1.0, "x1=1"}, {1, 2, +1.0, "x2=0"}, {1, 2, -1.0, "x2=1"},
  };
  for (const auto& s : specs) {
    CVec v = qutrit_two_mode(s.i, s.j, s.sign);
    p.ops.push_back(quarter * linalg::outer(v, v));
    p.labels.emplace_back(s.label);
  }
  return p;
}

int elimination_outcome_bit(int o) { return o / 2; }
int elimination_outcome_value(int o) { return o % 2; }

std::array<int, 2> eliminated_states(int o) {
  static const std::array<int, 2> table[6] = {
      {2, 3}, // x0=0 rules out 11, 10
      {0, 1}, // x0=1 rules out 00, 01
      {1, 2}, // x1=0 rules out 01, 11
      {0, 3}, // x1=1 rules out 00, 10
      {1, 3}, // x2=0 rules out 01, 10
      {0, 2}, // x2=1 rules out 00, 11
  };
  return table[o];
}

Povm square_root_measurement(const StateEnsemble& e) {
  e.validate();
  const int n = e.size();
  const double equal = 1.0 / static_cast<double>(n);
  for (double p : e.priors)
    if (std::abs(p - equal) > 1e-12)
      throw std::invalid_argument(
          "square_root_measurement: priors must be equal");
  for (const auto& rho : e.states) {
    const double purity = (rho * rho).trace().real();
    if (std::abs(purity - 1.0) > 1e-9)
      throw std::invalid_argument("square_root_measurement: states must be pure");
  }

  CMat rho_ave(e.states[0].rows(), e.states[0].cols());
  for (int i = 0; i < n; ++i) rho_ave += e.priors[i] * e.states[i];
  const CMat root_inv = linalg::mat_pow_half(rho_ave, -1);

  Povm out;
  CMat sum(rho_ave.rows(), rho_ave.cols());
  for (int i = 0; i < n; ++i) {
    CMat op = root_inv * (e.priors[i] * e.states[i]) * root_inv;
    sum += op;
    out.ops.push_back(std::move(op));
    out.labels.push_back("m" + std::to_string(i));
  }
  // The operators sum to the projector onto the support of rho_ave; complete
  // with the orthogonal remainder when the ensemble does not span the space.
  CMat rest = CMat::identity(rho_ave.rows()) - sum;
  if (rest.frobenius_norm() > 1e-9) {
    out.ops.push_back(std::move(rest));
    out.labels.emplace_back("rest");
  }
  return out;
}

double success_probability(const Povm& p, const StateEnsemble& e,
                           const std::vector<std::vector<int>>& correct) {
  if (correct.size() != e.states.size())
    throw std::invalid_argument("success_probability: unmapped ensemble state");
  double total = 0.0;
  for (std::size_t i = 0; i < e.states.size(); ++i) {
    if (correct[i].empty())
      throw std::invalid_argument("success_probability: unmapped ensemble state");
    for (int o : correct[i])
      total += e.priors[i] * (e.states[i] * p.ops.at(o)).trace().real();
  }
  return total;
}

CertReport min_error_certificate(const Povm& p, const StateEnsemble& e,
                                 const std::vector<int>& guess) {
  // Guess -1 marks an outcome that never fires on the ensemble (for example
  // the completion operator outside the span); it contributes nothing.
  std::vector<int> g = guess;
  if (g.empty()) {
    g.resize(p.ops.size());
    for (std::size_t o = 0; o < g.size(); ++o)
      g[o] = (o < e.states.size()) ? static_cast<int>(o) : -1;
  }
  if (g.size() != p.ops.size())
    throw std::invalid_argument("min_error_certificate: guess map size mismatch");

  const int d = p.dim();
  CMat gamma(d, d);
  for (std::size_t o = 0; o < p.ops.size(); ++o) {
    if (g[o] < 0) continue;
    gamma += e.priors.at(g[o]) * (e.states.at(g[o]) * p.ops[o]);
  }

  CertReport rep;
  rep.max_violation = gamma.max_asymmetry();
  const CMat herm = 0.5 * (gamma + gamma.adjoint());
  for (std::size_t j = 0; j < e.states.size(); ++j) {
    const CMat diff = herm - e.priors[j] * e.states[j];
    rep.max_violation = std::max(rep.max_violation, -linalg::min_eigenvalue(diff));
  }
  rep.optimal = rep.max_violation <= 1e-9;
  return rep;
}

std::array<CVec, 6> elimination_lift_basis() {
  auto make = [](std::array<double, 6> xs) {
    CVec v(6);
    for (int i = 0; i < 6; ++i) v[i] = 0.5 * xs[i];
    return v;
  };
  return {
      make({1, 0, 1, 1, 0, -1}),  // x0=0
      make({1, 0, -1, 1, 0, 1}),  // x0=1
      make({1, 1, 0, -1, 1, 0}),  // x1=0
      make({1, -1, 0, -1, -1, 0}), // x1=1
      make({0, 1, 1, 0, -1, 1}),  // x2=0
      make({0, 1, -1, 0, -1, -1}), // x2=1
  };
}

Povm reversed_receiver_povm() {
  Povm p;
  for (int m = 0; m < 4; ++m) {
    auto [x0, x1] = states::index_to_bits(m);
    CVec v(3);
    v[0] = 0.5;
    v[1] = (x1 ? -0.5 : 0.5);
    v[2] = (x0 ? -0.5 : 0.5);
    p.ops.push_back(linalg::outer(v, v));
    p.labels.push_back("m" + std::to_string(m));
  }
  return p;
}

StateEnsemble reversed_pair_ensemble() {
  const auto sent = states::reversed_states();
  StateEnsemble e;
  for (int b = 0; b < 3; ++b) {
    CMat rho = 0.5 * linalg::outer(sent[2 * b], sent[2 * b]) +
               0.5 * linalg::outer(sent[2 * b + 1], sent[2 * b + 1]);
    e.states.push_back(std::move(rho));
    e.priors.push_back(1.0 / 3.0);
  }
  return e;
}

Povm reversed_index_guess_povm() {
  auto pair_op = [](int i, int j) {
    CMat m(3, 3);
    m.at(i, i) = 0.5;
    m.at(j, j) = 0.5;
    return m;
  };
  Povm p;
  p.ops = {pair_op(0, 2), pair_op(0, 1), pair_op(1, 2)};
  p.labels = {"b=0", "b=1", "b=2"};
  return p;
}

std::array<CMat, 3> conditional_register_states(const states::OverlapParams& p) {
  const cdouble f = p.f();
  const cdouble fc = std::conj(f);
  const double g = p.g;
  auto quarter = [](CMat m) { return 0.25 * m; };

  CMat b0(4, 4), b1(4, 4), b2(4, 4);
  for (int i = 0; i < 4; ++i) {
    b0.at(i, i) = 1.0;
    b1.at(i, i) = 1.0;
    b2.at(i, i) = 1.0;
  }
  // Receiver learnt x0: registers pair up along adjacent states.
  b0.at(0, 1) = 3.0 * f;
  b0.at(1, 0) = 3.0 * fc;
  b0.at(2, 3) = 3.0 * f;
  b0.at(3, 2) = 3.0 * fc;
  // Receiver learnt x1: the other adjacency.
  b1.at(0, 3) = 3.0 * fc;
  b1.at(3, 0) = 3.0 * f;
  b1.at(1, 2) = 3.0 * f;
  b1.at(2, 1) = 3.0 * fc;
  // Receiver learnt the XOR: diagonal pairing through G.
  b2.at(0, 2) = 3.0 * g;
  b2.at(2, 0) = 3.0 * g;
  b2.at(1, 3) = 3.0 * g;
  b2.at(3, 1) = 3.0 * g;
  return {quarter(b0), quarter(b1), quarter(b2)};
}

Povm register_guess_povm() {
  const cdouble i(0.0, 1.0);
  auto make = [](std::array<cdouble, 4> xs) {
    CVec v(4);
    for (int k = 0; k < 4; ++k) v[k] = 0.5 * xs[k];
    return v;
  };
  const CVec plus_r = make({1.0, i, 1.0, i});
  const CVec plus_l = make({1.0, -i, 1.0, -i});
  const CVec minus_p = make({1.0, 1.0, -1.0, -1.0});
  const CVec minus_m = make({1.0, -1.0, -1.0, 1.0});
  Povm p;
  p.ops = {linalg::outer(plus_r, plus_r), linalg::outer(plus_l, plus_l),
           linalg::outer(minus_p, minus_p), linalg::outer(minus_m, minus_m)};
  p.labels = {"+R", "+L", "-+", "--"};
  return p;
}

}  // namespace xot::measure
