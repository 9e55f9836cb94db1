#include <doctest.h>

#include <array>
#include <cmath>

#include "xot/cheat_analysis.hpp"
#include "xot/linalg.hpp"
#include "xot/measurements.hpp"
#include "xot/rng.hpp"
#include "xot/state_family.hpp"

using namespace xot;
using linalg::CMat;
using linalg::CVec;
using linalg::cdouble;
using states::OverlapParams;

namespace {

const OverlapParams kStar{1.0 / 3.0, 0.0, -1.0 / 3.0};

OverlapParams random_realizable(Rng& rng, double min_weight) {
  std::array<double, 4> w{};
  double total = 0.0;
  for (auto& x : w) {
    x = min_weight + rng.uniform();
    total += x;
  }
  for (auto& x : w) x /= total;
  return {w[0] - w[2], w[3] - w[1], 2.0 * (w[0] + w[2]) - 1.0};
}

}  // namespace

TEST_SUITE("cheat_analysis") {

TEST_CASE("receiver closed form at the anchor points") {
  CHECK(cheat::bob_cheat_closed_form(kStar) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(cheat::bob_cheat_closed_form({0.0, 0.0, 0.0}) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(cheat::bob_cheat_closed_form({0.0, 1.0 / 3.0, 1.0 / 3.0}) ==
        doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("receiver closed form rejects non-realizable overlaps") {
  CHECK_THROWS_AS(cheat::bob_cheat_closed_form({0.5, 0.0, -0.5}),
                  std::invalid_argument);
}

TEST_CASE("receiver oracle equals closed form") {
  CHECK(cheat::bob_cheat_oracle(kStar) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(cheat::bob_cheat_oracle({0.0, 0.0, 0.0}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  Rng rng(17);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto p = random_realizable(rng, 1e-3);
    worst = std::max(worst, std::abs(cheat::bob_cheat_oracle(p) -
                                     cheat::bob_cheat_closed_form(p)));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("square-root success at a mid-band point matches the closed form") {
  const OverlapParams p{1.0 / 6.0, 0.0, -1.0 / 6.0};
  CHECK(std::abs(cheat::bob_cheat_oracle(p) - cheat::bob_cheat_closed_form(p)) <=
        1e-10);
}

TEST_CASE("sender bound closed form") {
  CHECK(cheat::alice_test_bound_closed_form(kStar) ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK(cheat::alice_test_bound_closed_form({0.0, 0.0, 0.0}) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(cheat::alice_test_bound_closed_form({0.0, 1.0 / 3.0, 1.0 / 3.0}) ==
        doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("sender bound oracle through the register measurement") {
  // At the optimal overlaps, the large outcome probability is (1+3*1/3)/4.
  const auto mus = measure::conditional_register_states(kStar);
  const auto povm = measure::register_guess_povm();
  const double p_mp = (mus[0] * povm.ops[2]).trace().real();
  CHECK(p_mp == doctest::Approx(0.5).epsilon(1e-12));

  CHECK(cheat::alice_test_oracle(kStar) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cheat::alice_test_oracle({0.0, 0.0, 0.0}) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  Rng rng(19);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const auto p = random_realizable(rng, 1e-3);
    worst = std::max(worst, std::abs(cheat::alice_test_oracle(p) -
                                     cheat::alice_test_bound_closed_form(p)));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("no-test closed form at the anchor points") {
  const auto star = cheat::alice_notest_closed_form(kStar);
  CHECK(star.overall == doctest::Approx(0.5).epsilon(1e-12));
  // branch (iv) evaluates to (1/3+1/3)/(1+1/3) there
  const auto rb = cheat::real_f_branches(kStar);
  REQUIRE(rb.iv.has_value());
  CHECK(*rb.iv == doctest::Approx(0.5).epsilon(1e-14));

  const auto flat = cheat::alice_notest_closed_form({0.0, 0.0, 0.0});
  CHECK(flat.p01_max == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(flat.p2_max == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(flat.overall == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("no-test reduced branches at F=1/6, G=0") {
  const OverlapParams p{1.0 / 6.0, 0.0, 0.0};
  const auto rb = cheat::real_f_branches(p);
  REQUIRE(rb.i.has_value());
  REQUIRE(rb.iii.has_value());
  CHECK(*rb.i == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(*rb.iii == doctest::Approx(0.5).epsilon(1e-14));
  const auto ant = cheat::alice_notest_closed_form(p);
  CHECK(ant.overall == doctest::Approx(0.5).epsilon(1e-12));
  const auto oracle = cheat::alice_notest_oracle(p);
  CHECK(oracle.p01_max == doctest::Approx(ant.p01_max).epsilon(1e-10));
  CHECK(oracle.p2_max == doctest::Approx(ant.p2_max).epsilon(1e-10));
}

TEST_CASE("eigenproblem structure") {
  Rng rng(23);
  const auto p = random_realizable(rng, 0.01);
  const auto ep = cheat::build_eig_problem(p);
  // the Fourier matrix diagonalises the sum with the stated eigenvalues
  const CMat sum = ep.m0 + ep.m1 + ep.m2;
  const CMat diag = ep.v.adjoint() * sum * ep.v;
  for (int k = 0; k < 4; ++k) {
    CHECK(std::abs(diag.at(k, k).real() - ep.ellipsoid_eigs[k]) <= 1e-12);
    for (int j = 0; j < 4; ++j)
      if (j != k) CHECK(std::abs(diag.at(k, j)) <= 1e-12);
    CHECK(std::abs(ep.d_sq.at(k, k) * ep.d_sq.at(k, k) -
                   cdouble(ep.ellipsoid_eigs[k], 0.0)) <= 1e-12);
  }
}

TEST_CASE("no-test oracle equals closed form") {
  const auto star = cheat::alice_notest_oracle(kStar);
  CHECK(star.p01_max == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(star.p2_max == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(star.prob_sum_residual <= 1e-10);

  const auto flat = cheat::alice_notest_oracle({0.0, 0.0, 0.0});
  CHECK(flat.p01_max == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(flat.p2_max == doctest::Approx(1.0 / 3.0).epsilon(1e-10));

  Rng rng(29);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto p = random_realizable(rng, 0.0125);
    const auto closed = cheat::alice_notest_closed_form(p);
    const auto oracle = cheat::alice_notest_oracle(p);
    worst = std::max(worst, std::abs(closed.p01_max - oracle.p01_max));
    worst = std::max(worst, std::abs(closed.p2_max - oracle.p2_max));
    worst = std::max(worst, oracle.prob_sum_residual);
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("index-2 eigenvalue quotients match the generic eigensolver") {
  Rng rng(31);
  for (int t = 0; t < 20; ++t) {
    const auto p = random_realizable(rng, 0.02);
    const auto ep = cheat::build_eig_problem(p);
    // transformed index-2 form is diagonal with entries (1/3 +- G)/e_k
    CMat w(4, 4);
    for (int k = 0; k < 4; ++k) {
      const double scale = 1.0 / std::sqrt(ep.ellipsoid_eigs[k]);
      for (int row = 0; row < 4; ++row) w.at(row, k) = scale * ep.v.at(row, k);
    }
    const CMat t2 = w.adjoint() * ep.m2 * w;
    const auto eig = linalg::hermitian_eig(t2);
    const auto closed = cheat::alice_notest_closed_form(p);
    std::array<double, 4> expect = closed.lam2;
    std::sort(expect.begin(), expect.end());
    for (int k = 0; k < 4; ++k)
      CHECK(std::abs(eig.values[k] - expect[k]) <= 1e-10);
  }
}

TEST_CASE("reversed sender cheating value") {
  CHECK(cheat::reversed_bob_cheat(cheat::ReceiverTest::none) ==
        doctest::Approx(0.75).epsilon(1e-12));
  CHECK(cheat::reversed_bob_cheat(cheat::ReceiverTest::active) ==
        doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("entangled register states reproduce the qutrit overlaps") {
  // Uniform coefficients give conditional register states
  // (|0>+|2>+|4>)/sqrt3, (|0>+|3>-|5>)/sqrt3, (|1>+|3>-|4>)/sqrt3,
  // (|1>+|2>+|5>)/sqrt3 whose Gram matrix is the qutrit one.
  auto make = [](std::array<double, 6> xs) {
    CVec v(6);
    for (int i = 0; i < 6; ++i) v[i] = xs[i] / std::sqrt(3.0);
    return v;
  };
  const std::array<CVec, 4> theta = {
      make({1, 0, 1, 0, 1, 0}), make({1, 0, 0, 1, 0, -1}),
      make({0, 1, 0, 1, -1, 0}), make({0, 1, 1, 0, 0, 1})};
  const auto q = states::qutrit_states();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(std::abs(linalg::inner(theta[i], theta[j]) -
                     linalg::inner(q[i], q[j])) <= 1e-12);
}

TEST_CASE("reversed receiver cheating value") {
  CHECK(cheat::reversed_alice_cheat() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("classical tradeoff line") {
  const auto p0 = cheat::classical_tradeoff(0.0);
  CHECK(p0.a_ot == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(p0.b_ot == 1.0);
  CHECK(p0.metric == 5.0);
  const auto p1 = cheat::classical_tradeoff(1.0);
  CHECK(p1.a_ot == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p1.b_ot == 0.5);
  CHECK(p1.metric == 5.0);
  for (int i = 0; i <= 20; ++i) {
    const auto pt = cheat::classical_tradeoff(i / 20.0);
    CHECK(std::abs(3.0 * pt.a_ot + 4.0 * pt.b_ot - 5.0) <= 1e-12);
    CHECK(pt.metric == 5.0);
  }
  CHECK(3.0 * 0.5 + 4.0 * 0.75 == 4.5);
  CHECK_THROWS_AS(cheat::classical_tradeoff(1.5), std::invalid_argument);
}

TEST_CASE("closed forms are even in F") {
  Rng rng(37);
  for (int t = 0; t < 100; ++t) {
    const auto p = random_realizable(rng, 1e-3);
    const OverlapParams neg{-p.re_f, -p.im_f, p.g};
    CHECK(std::abs(cheat::bob_cheat_closed_form(p) -
                   cheat::bob_cheat_closed_form(neg)) <= 1e-12);
    CHECK(cheat::alice_test_bound_closed_form(p) ==
          cheat::alice_test_bound_closed_form(neg));
  }
}

TEST_CASE("no-test values respect the real/imaginary exchange") {
  Rng rng(41);
  for (int t = 0; t < 100; ++t) {
    const auto p = random_realizable(rng, 1e-3);
    const OverlapParams swapped{p.im_f, p.re_f, -p.g};
    const auto a = cheat::alice_notest_closed_form(p);
    const auto b = cheat::alice_notest_closed_form(swapped);
    CHECK(std::abs(a.p01_max - b.p01_max) <= 1e-10);
    CHECK(std::abs(a.p2_max - b.p2_max) <= 1e-10);
  }
}

TEST_CASE("perfect cheating away from the optimal phase corners") {
  Rng rng(43);
  for (int t = 0; t < 25; ++t) {
    const double theta = 0.2 + 1.1 * rng.uniform(); // off the axes
    const double g = (rng.bit() ? 1.0 : -1.0) / 3.0;
    const OverlapParams p{std::cos(theta) / 3.0, std::sin(theta) / 3.0, g};
    REQUIRE(p.state_realizable());
    const auto ant = cheat::alice_notest_closed_form(p);
    CHECK(ant.overall == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("cheat report aggregates residuals and ranges") {
  Rng rng(47);
  for (int t = 0; t < 20; ++t) {
    const auto p = random_realizable(rng, 0.0125);
    const auto rep = cheat::make_cheat_report(p);
    CHECK(rep.bob_residual <= 1e-8);
    CHECK(rep.alice_test_residual <= 1e-8);
    CHECK(rep.alice_notest_residual <= 1e-8);
    CHECK(rep.b_ot >= 0.25 - 1e-9);
    CHECK(rep.b_ot <= 1.0 + 1e-9);
    CHECK(rep.a_ot_test_bound >= 1.0 / 3.0 - 1e-9);
    CHECK(rep.a_ot_notest >= 1.0 / 3.0 - 1e-9);
  }
  // honest-feasible floor for the receiver
  const auto rep = cheat::make_cheat_report(kStar);
  CHECK(rep.b_ot >= 0.5 - 1e-9);
}

}  // TEST_SUITE
