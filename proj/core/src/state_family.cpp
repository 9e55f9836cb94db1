#include "xot/state_family.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace xot::states {

using linalg::CMat;
using linalg::CVec;
using linalg::cdouble;

double OverlapParams::abs_f() const { return std::hypot(re_f, im_f); }

double OverlapParams::theta_f() const { return std::atan2(im_f, re_f); }

std::array<double, 4> OverlapParams::fourier_weights() const {
  return {(1.0 + g + 2.0 * re_f) / 4.0, (1.0 - g - 2.0 * im_f) / 4.0,
          (1.0 + g - 2.0 * re_f) / 4.0, (1.0 - g + 2.0 * im_f) / 4.0};
}

bool OverlapParams::state_realizable(double tol) const {
  for (double w : fourier_weights())
    if (w < -tol) return false;
  return true;
}

bool OverlapParams::honest_feasible(double tol) const {
  return state_realizable(tol) && abs_f() <= 1.0 / 3.0 + tol &&
         std::abs(g) <= 1.0 / 3.0 + tol;
}

CMat SymmetricFamily::gram() const {
  CMat g(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g.at(i, j) = linalg::inner(states[i], states[j]);
  return g;
}

SymmetricFamily build_symmetric_family(const OverlapParams& p) {
  const auto w = p.fourier_weights();
  for (int k = 0; k < 4; ++k) {
    if (w[k] < -1e-12) {
      std::ostringstream os;
      os << "build_symmetric_family: not state-realizable, weight lambda_" << k
         << " = " << w[k];
      throw std::invalid_argument(os.str());
    }
  }

  // Keep only eigenlines with nonzero weight; the family spans exactly those.
  std::vector<int> kept;
  for (int k = 0; k < 4; ++k)
    if (w[k] > linalg::kSupportCutoff) kept.push_back(k);
  const int dim = static_cast<int>(kept.size());
  if (dim == 0)
    throw std::invalid_argument("build_symmetric_family: all weights vanish");

  static const cdouble phases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}}; // i^k

  SymmetricFamily fam;
  fam.fourier_weights = w;
  fam.u = CMat(dim, dim);
  CVec seed(dim);
  for (int idx = 0; idx < dim; ++idx) {
    fam.u.at(idx, idx) = phases[kept[idx]];
    seed[idx] = std::sqrt(std::max(w[kept[idx]], 0.0));
  }
  fam.states[0] = seed;
  for (int m = 1; m < 4; ++m) fam.states[m] = fam.u * fam.states[m - 1];
  return fam;
}

int bits_to_index(int x0, int x1) {
  static const int table[2][2] = {{0, 1}, {3, 2}}; // [x0][x1]
  return table[x0][x1];
}

std::pair<int, int> index_to_bits(int m) {
  static const std::pair<int, int> table[4] = {{0, 0}, {0, 1}, {1, 1}, {1, 0}};
  return table[m];
}

std::array<CVec, 4> qutrit_states() {
  const double r = 1.0 / std::sqrt(3.0);
  std::array<CVec, 4> out;
  for (int m = 0; m < 4; ++m) {
    auto [x0, x1] = index_to_bits(m);
    CVec v(3);
    v[0] = r;
    v[1] = (x1 ? -r : r);
    v[2] = (x0 ? -r : r);
    out[m] = v;
  }
  return out;
}

CMat qutrit_cycle_unitary() {
  CMat u(3, 3);
  u.at(0, 0) = 1.0;
  u.at(1, 2) = -1.0;
  u.at(2, 1) = 1.0;
  return u;
}

std::array<CVec, 6> reversed_states() {
  const double r = 1.0 / std::sqrt(2.0);
  auto make = [&](int i, int j, double sign) {
    CVec v(3);
    v[i] = r;
    v[j] = sign * r;
    return v;
  };
  // b=0 announces x0 (|0> +- |2>), b=1 announces x1 (|0> +- |1>),
  // b=2 announces the XOR (|1> +- |2>).
  return {make(0, 2, +1.0), make(0, 2, -1.0), make(0, 1, +1.0),
          make(0, 1, -1.0), make(1, 2, +1.0), make(1, 2, -1.0)};
}

std::array<CVec, 4> three_qutrit_states() {
  const double r = 1.0 / std::sqrt(6.0);
  auto idx = [](int a, int b, int c) { return 9 * a + 3 * b + c; };
  std::array<CVec, 4> out;
  for (int m = 0; m < 4; ++m) {
    auto [x0, x1] = index_to_bits(m);
    const double s0 = (x0 ? -r : r);
    const double s1 = (x1 ? -r : r);
    CVec v(27);
    // (s0|00> + |22>) (x) |0>  +  (s1|11> + |22>) (x) |1>  +  (s0|00> + s1|11>) (x) |2>
    v[idx(0, 0, 0)] = s0;
    v[idx(2, 2, 0)] = r;
    v[idx(1, 1, 1)] = s1;
    v[idx(2, 2, 1)] = r;
    v[idx(0, 0, 2)] = s0;
    v[idx(1, 1, 2)] = s1;
    out[m] = v;
  }
  return out;
}

}  // namespace xot::states
