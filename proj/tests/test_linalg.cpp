#include <doctest.h>

#include <cmath>
#include <complex>

#include "xot/linalg.hpp"
#include "xot/measurements.hpp"
#include "xot/rng.hpp"
#include "xot/state_family.hpp"

using namespace xot;
using linalg::CMat;
using linalg::CVec;
using linalg::cdouble;

namespace {

CMat random_hermitian(Rng& rng, int n) {
  CMat m(n, n);
  for (int i = 0; i < n; ++i) {
    m.at(i, i) = 2.0 * rng.uniform() - 1.0;
    for (int j = i + 1; j < n; ++j) {
      const cdouble z(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
      m.at(i, j) = z;
      m.at(j, i) = std::conj(z);
    }
  }
  return m;
}

CMat random_psd(Rng& rng, int n) {
  CMat r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      r.at(i, j) = cdouble(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
  return r.adjoint() * r;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("identity eigenvalues are all one") {
  const auto eig = linalg::hermitian_eig(CMat::identity(3));
  for (double v : eig.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("normalisation eigenvalues at the optimal overlaps") {
  // diag(1+G+2ReF, 1-G+2ImF, 1+G-2ReF, 1-G-2ImF) at F=1/3, G=-1/3.
  const double g = -1.0 / 3.0, re = 1.0 / 3.0, im = 0.0;
  const CMat m = CMat::diag({1.0 + g + 2.0 * re, 1.0 - g + 2.0 * im,
                             1.0 + g - 2.0 * re, 1.0 - g - 2.0 * im});
  const auto eig = linalg::hermitian_eig(m);
  CHECK(eig.values[0] == doctest::Approx(0.0).epsilon(1e-14));
  for (int k = 1; k < 4; ++k)
    CHECK(eig.values[k] == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("random Hermitian reconstruction") {
  Rng rng(7);
  const CMat m = random_hermitian(rng, 5);
  const auto eig = linalg::hermitian_eig(m);
  CMat recon(5, 5);
  for (int k = 0; k < 5; ++k)
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        recon.at(i, j) +=
            eig.values[k] * eig.vectors.at(i, k) * std::conj(eig.vectors.at(j, k));
  CHECK(linalg::max_abs_diff(recon, m) <= 1e-10);
  // eigenvectors orthonormal, eigenvalue equation satisfied
  CHECK(linalg::max_abs_diff(eig.vectors.adjoint() * eig.vectors,
                             CMat::identity(5)) <= 1e-10);
  for (int k = 0; k < 5; ++k) {
    CVec v(5);
    for (int i = 0; i < 5; ++i) v[i] = eig.vectors.at(i, k);
    const CVec mv = m * v;
    CVec lv = v;
    lv *= eig.values[k];
    CHECK((mv - lv).norm() <= 1e-10);
  }
}

TEST_CASE("non-Hermitian input rejected with diagnostic") {
  CMat m(2, 2);
  m.at(0, 1) = 1.0;
  m.at(1, 0) = 0.5;
  CHECK_THROWS_WITH_AS(linalg::hermitian_eig(m),
                       doctest::Contains("not Hermitian"), std::invalid_argument);
}

TEST_CASE("matrix square root on diagonals") {
  const CMat m = CMat::diag({4.0, 9.0});
  const CMat root = linalg::mat_pow_half(m, 1);
  CHECK(std::abs(root.at(0, 0) - 2.0) <= 1e-12);
  CHECK(std::abs(root.at(1, 1) - 3.0) <= 1e-12);

  // Inverse root on the support only.
  const CMat rank1 = CMat::diag({1.0, 0.0});
  const CMat inv_root = linalg::mat_pow_half(rank1, -1);
  CHECK(linalg::max_abs_diff(inv_root, rank1) <= 1e-12);
}

TEST_CASE("negative eigenvalue rejected") {
  const CMat m = CMat::diag({1.0, -0.5});
  CHECK_THROWS_AS(linalg::mat_pow_half(m, 1), std::invalid_argument);
}

TEST_CASE("inverse root of the average state rebuilds the pair measurement") {
  // rho_ave of the qutrit family is I/3; the square-root measurement built
  // from it must reproduce the explicit (3/4)|phi><phi| operators.
  const auto qutrits = states::qutrit_states();
  CMat rho(3, 3);
  for (const auto& q : qutrits) rho += 0.25 * linalg::outer(q, q);
  const CMat root_inv = linalg::mat_pow_half(rho, -1);
  const auto explicit_povm = measure::reversed_receiver_povm();
  for (int m = 0; m < 4; ++m) {
    const CMat srm_op =
        root_inv * (0.25 * linalg::outer(qutrits[m], qutrits[m])) * root_inv;
    CHECK(linalg::max_abs_diff(srm_op, explicit_povm.ops[m]) <= 1e-10);
  }
}

TEST_CASE("kron identities") {
  CHECK(linalg::max_abs_diff(linalg::kron(CMat::identity(2), CMat::identity(3)),
                             CMat::identity(6)) == 0.0);

  const auto qutrits = states::qutrit_states();
  CVec e0 = CVec::basis(2, 0);
  const CMat joint =
      linalg::kron(linalg::outer(e0, e0), linalg::outer(qutrits[0], qutrits[0]));
  CHECK(std::abs(joint.trace().real() - 1.0) <= 1e-12);

  // (A (x) B)(C (x) D) = AC (x) BD
  Rng rng(3);
  const CMat a = random_psd(rng, 2), b = random_psd(rng, 3);
  const CMat c = random_psd(rng, 2), d = random_psd(rng, 3);
  CHECK(linalg::max_abs_diff(linalg::kron(a, b) * linalg::kron(c, d),
                             linalg::kron(a * c, b * d)) <= 1e-10);

  // trace_out(kron(a,b), second) = a * tr(b)
  const CMat traced = linalg::partial_trace(linalg::kron(a, b), 2, 3,
                                            linalg::Keep::first);
  CHECK(linalg::max_abs_diff(traced, b.trace() * a) <= 1e-10);
}

TEST_CASE("partial trace of a maximally entangled pair") {
  CVec bell(4);
  bell[0] = 1.0 / std::sqrt(2.0);
  bell[3] = 1.0 / std::sqrt(2.0);
  const CMat rho = linalg::outer(bell, bell);
  const CMat reduced = linalg::partial_trace(rho, 2, 2, linalg::Keep::first);
  CHECK(linalg::max_abs_diff(reduced, 0.5 * CMat::identity(2)) <= 1e-12);
}

TEST_CASE("conditional register state via explicit projection") {
  // Keep a register pointing at which protocol state was sent, project the
  // transmitted qutrit onto the XOR outcome pair, trace it out, and compare
  // against the closed-form conditional state.
  const auto qutrits = states::qutrit_states();
  CVec joint(12);
  for (int m = 0; m < 4; ++m)
    for (int i = 0; i < 3; ++i) joint[m * 3 + i] = 0.5 * qutrits[m][i];
  const auto elim = measure::elimination_povm();
  const CMat group = elim.ops[4] + elim.ops[5]; // XOR outcomes
  const CMat sandwich =
      linalg::kron(CMat::identity(4), linalg::mat_pow_half(group, 1));
  const CMat projected = sandwich * linalg::outer(joint, joint) * sandwich;
  const double prob = projected.trace().real();
  CHECK(prob == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  const CMat mu =
      cdouble(1.0 / prob, 0.0) *
      linalg::partial_trace(projected, 4, 3, linalg::Keep::first);
  const auto closed =
      measure::conditional_register_states({1.0 / 3.0, 0.0, -1.0 / 3.0});
  CHECK(linalg::max_abs_diff(mu, closed[2]) <= 1e-10);
}

TEST_CASE("product state recovered by partial trace") {
  Rng rng(11);
  CMat a = random_psd(rng, 2), b = random_psd(rng, 3);
  a *= cdouble(1.0 / a.trace().real(), 0.0);
  b *= cdouble(1.0 / b.trace().real(), 0.0);
  const CMat joint = linalg::kron(a, b);
  CHECK(linalg::max_abs_diff(
            linalg::partial_trace(joint, 2, 3, linalg::Keep::first), a) <= 1e-12);
  CHECK(linalg::max_abs_diff(
            linalg::partial_trace(joint, 2, 3, linalg::Keep::second), b) <= 1e-12);
}

TEST_CASE("square root squared reproduces random PSD inputs") {
  Rng rng(2024);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int n = 2 + rng.uniform_int(7);
    const CMat m = random_psd(rng, n);
    const CMat root = linalg::mat_pow_half(m, 1);
    worst = std::max(worst, linalg::max_abs_diff(root * root, m));
    // PSD spectra stay above the tolerance floor
    CHECK(linalg::hermitian_eig(m).values.front() >= -1e-10);
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("partial trace preserves trace and positivity") {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const CMat m = random_psd(rng, 6);
    for (auto keep : {linalg::Keep::first, linalg::Keep::second}) {
      const CMat red = linalg::partial_trace(m, 2, 3, keep);
      CHECK(std::abs(red.trace().real() - m.trace().real()) <= 1e-10);
      CHECK(linalg::min_eigenvalue(red) >= -1e-10);
    }
  }
}

TEST_CASE("dimension mismatch rejected") {
  CHECK_THROWS_AS(linalg::partial_trace(CMat::identity(5), 2, 3, linalg::Keep::first),
                  std::invalid_argument);
}

}  // TEST_SUITE
