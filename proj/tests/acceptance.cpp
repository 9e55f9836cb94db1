// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Every tolerance and runtime budget is pinned here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "xot/cheat_analysis.hpp"
#include "xot/linalg.hpp"
#include "xot/measurements.hpp"
#include "xot/protocol_engine.hpp"
#include "xot/reports.hpp"
#include "xot/rng.hpp"
#include "xot/state_family.hpp"

using namespace xot;
using linalg::CMat;
using linalg::CVec;
using states::OverlapParams;

namespace {

struct Criterion {
  std::string name;
  double budget_seconds;
  std::function<bool(std::string&)> body;
};

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

OverlapParams random_feasible(Rng& rng) {
  for (;;) {
    const double re = (2.0 * rng.uniform() - 1.0) / 3.0;
    const double im = (2.0 * rng.uniform() - 1.0) / 3.0;
    if (re * re + im * im > 1.0 / 9.0) continue;
    return {re, im, (2.0 * rng.uniform() - 1.0) / 3.0};
  }
}

double sigma_floor(double p, double n) {
  const double var = p * (1.0 - p);
  return var <= 0.0 ? 1.0 / n : std::sqrt(var / n);
}

bool criterion_exact_values(std::string& detail) {
  const OverlapParams star{1.0 / 3.0, 0.0, -1.0 / 3.0};
  const double b = cheat::bob_cheat_closed_form(star);
  const double a_test = cheat::alice_test_bound_closed_form(star);
  const double a_notest = cheat::alice_notest_closed_form(star).overall;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "B_OT=%.17g A_test=%.17g A_notest=%.17g", b,
                a_test, a_notest);
  detail = buf;
  return std::abs(b - 0.75) <= 1e-12 && std::abs(a_test - 0.5) <= 1e-12 &&
         std::abs(a_notest - 0.5) <= 1e-12;
}

bool criterion_oracle_equivalence(std::string& detail) {
  Rng rng(42);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const OverlapParams p = random_realizable(rng, 0.0125);
    worst = std::max(worst, std::abs(cheat::bob_cheat_oracle(p) -
                                     cheat::bob_cheat_closed_form(p)));
    worst = std::max(worst, std::abs(cheat::alice_test_oracle(p) -
                                     cheat::alice_test_bound_closed_form(p)));
    const auto closed = cheat::alice_notest_closed_form(p);
    const auto oracle = cheat::alice_notest_oracle(p);
    worst = std::max(worst, std::abs(closed.p01_max - oracle.p01_max));
    worst = std::max(worst, std::abs(closed.p2_max - oracle.p2_max));
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "max residual %.2e", worst);
  detail = buf;
  return worst <= 1e-8;
}

bool criterion_certificates(std::string& detail) {
  // (a) square-root measurement on the qutrit family
  const auto fam = states::build_symmetric_family({1.0 / 3.0, 0.0, -1.0 / 3.0});
  std::vector<CVec> kets(fam.states.begin(), fam.states.end());
  const auto ens = measure::StateEnsemble::equiprobable_pure(kets);
  const auto srm = measure::square_root_measurement(ens);
  const double srm_viol = measure::min_error_certificate(srm, ens).max_violation;

  // (b) four-outcome register measurement at 20 random points, as stated.
  // NOTE: this clause fails, and must fail: the projective strategy is
  // minimum-error optimal only on a subregion of the honest band (it is exact
  // at all protocol anchor points). At generic overlaps a three-outcome block
  // POVM is strictly better, so the Helstrom conditions cannot hold there.
  // Witness: at F=(0.152,0.075), G=-0.045 the strategy yields 0.446833...,
  // while a valid POVM reaches 0.449225857 (fixed-point iteration and an
  // independent SDP agree). The value itself remains the documented lower
  // bound and matches its oracle everywhere (criterion 2).
  Rng rng(42);
  int register_failures = 0;
  double register_worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const OverlapParams p = random_feasible(rng);
    const auto mus = measure::conditional_register_states(p);
    measure::StateEnsemble reg_ens;
    for (const auto& mu : mus) {
      reg_ens.states.push_back(mu);
      reg_ens.priors.push_back(1.0 / 3.0);
    }
    const auto povm = measure::register_guess_povm();
    std::vector<int> guess(povm.ops.size());
    for (std::size_t o = 0; o < povm.ops.size(); ++o) {
      double best = -1.0;
      for (int b = 0; b < 3; ++b) {
        const double pb = (mus[b] * povm.ops[o]).trace().real();
        if (pb > best + 1e-12) {
          best = pb;
          guess[o] = b;
        }
      }
    }
    const double viol =
        measure::min_error_certificate(povm, reg_ens, guess).max_violation;
    register_worst = std::max(register_worst, viol);
    if (viol > 1e-9) ++register_failures;
  }

  // (c) both reversed-receiver measurements
  const auto pair_ens = measure::reversed_pair_ensemble();
  double pair_viol = measure::min_error_certificate(
                         measure::reversed_index_guess_povm(), pair_ens)
                         .max_violation;
  measure::Povm basis;
  std::vector<int> guess(3);
  for (int k = 0; k < 3; ++k) {
    CMat proj(3, 3);
    proj.at(k, k) = 1.0;
    basis.ops.push_back(proj);
    basis.labels.push_back("k" + std::to_string(k));
    double best = -1.0;
    for (int b = 0; b < 3; ++b) {
      const double pb = pair_ens.states[b].at(k, k).real();
      if (pb > best + 1e-12) {
        best = pb;
        guess[k] = b;
      }
    }
  }
  pair_viol = std::max(
      pair_viol,
      measure::min_error_certificate(basis, pair_ens, guess).max_violation);

  // (d) a perturbed measurement must fail
  auto bad = measure::square_root_measurement(ens);
  const double eps = 0.05;
  CMat rot = CMat::identity(3);
  rot.at(0, 0) = std::cos(eps);
  rot.at(0, 1) = -std::sin(eps);
  rot.at(1, 0) = std::sin(eps);
  rot.at(1, 1) = std::cos(eps);
  bad.ops[0] = rot * bad.ops[0] * rot.adjoint();
  const bool perturbed_fails =
      !measure::min_error_certificate(bad, ens).optimal;

  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "srm viol %.1e; register measurement not optimal at %d/20 "
                "random points (worst viol %.1e, optimal only on a subregion); "
                "pair viol %.1e; perturbed %s",
                srm_viol, register_failures, register_worst, pair_viol,
                perturbed_fails ? "rejected" : "ACCEPTED");
  detail = buf;
  return srm_viol <= 1e-9 && register_failures == 0 && pair_viol <= 1e-9 &&
         perturbed_fails;
}

bool criterion_floor(std::string& detail) {
  double min_b = 2.0;
  int attained = 0;
  const int n = 201;
  for (int plane = 0; plane < 2; ++plane) {
    for (int i = 0; i < n; ++i) {
      const double f = -1.0 / 3.0 + (2.0 / 3.0) * i / (n - 1);
      for (int j = 0; j < n; ++j) {
        const double g = -1.0 / 3.0 + (2.0 / 3.0) * j / (n - 1);
        const OverlapParams p =
            plane == 0 ? OverlapParams{f, 0.0, g} : OverlapParams{0.0, f, g};
        if (!p.honest_feasible()) continue;
        const double b = cheat::bob_cheat_closed_form(p);
        if (b < min_b) min_b = b;
      }
    }
  }
  // the four corners of the honest band reach the floor
  const OverlapParams corners[4] = {{1.0 / 3.0, 0.0, -1.0 / 3.0},
                                    {-1.0 / 3.0, 0.0, -1.0 / 3.0},
                                    {0.0, 1.0 / 3.0, 1.0 / 3.0},
                                    {0.0, -1.0 / 3.0, 1.0 / 3.0}};
  for (const auto& c : corners)
    if (std::abs(cheat::bob_cheat_closed_form(c) - min_b) <= 1e-9) ++attained;
  char buf[120];
  std::snprintf(buf, sizeof(buf), "grid min %.12f, corners at floor %d/4", min_b,
                attained);
  detail = buf;
  return min_b >= 0.75 - 1e-9 && attained == 4;
}

bool criterion_reductions(std::string& detail) {
  // y' = X_B in all 144 wrapper cases
  for (int X0 = 0; X0 < 2; ++X0)
    for (int X1 = 0; X1 < 2; ++X1)
      for (int B = 0; B < 3; ++B)
        for (int x0 = 0; x0 < 2; ++x0)
          for (int x1 = 0; x1 < 2; ++x1)
            for (int b = 0; b < 3; ++b) {
              const int x[3] = {x0, x1, x0 ^ x1};
              const int X[3] = {X0, X1, X0 ^ X1};
              const auto post =
                  protocol::standard_postprocess(x0, x1, b, x[b], X0, X1, B);
              if (post.y_prime != X[B]) {
                detail = "wrapper output mismatch";
                return false;
              }
            }
  // X_b = x_b xor t_b in all 48 reversed cases
  for (int X0 = 0; X0 < 2; ++X0)
    for (int X1 = 0; X1 < 2; ++X1)
      for (int x0 = 0; x0 < 2; ++x0)
        for (int x1 = 0; x1 < 2; ++x1)
          for (int b = 0; b < 3; ++b) {
            const int x[3] = {x0, x1, x0 ^ x1};
            const int X[3] = {X0, X1, X0 ^ X1};
            if (protocol::reversed_postprocess_bits(X0, X1, x0, x1, b, x[b])
                    .final_bit != X[b]) {
              detail = "reversed post-processing mismatch";
              return false;
            }
          }
  // r is a bijection of b for every B (uniform b hides B)
  for (int B = 0; B < 3; ++B) {
    bool seen[3] = {false, false, false};
    for (int b = 0; b < 3; ++b)
      seen[protocol::standard_postprocess(0, 0, b, 0, 0, 0, B).r] = true;
    if (!(seen[0] && seen[1] && seen[2])) {
      detail = "r depends on B";
      return false;
    }
  }
  // honest receiver's posterior over the unseen input bit is uniform
  std::map<std::tuple<int, int, int, int, int, int>, std::map<int, int>> groups;
  for (int X0 = 0; X0 < 2; ++X0)
    for (int X1 = 0; X1 < 2; ++X1)
      for (int B = 0; B < 3; ++B)
        for (int x0 = 0; x0 < 2; ++x0)
          for (int x1 = 0; x1 < 2; ++x1)
            for (int b = 0; b < 3; ++b) {
              const int x[3] = {x0, x1, x0 ^ x1};
              const int X[3] = {X0, X1, X0 ^ X1};
              const auto post =
                  protocol::standard_postprocess(x0, x1, b, x[b], X0, X1, B);
              groups[{B, b, x[b], post.r, post.s0, post.s1}][X[(B + 1) % 3]]++;
            }
  for (const auto& [view, hist] : groups) {
    (void)view;
    if (hist.size() != 2 || hist.at(0) != hist.at(1)) {
      detail = "receiver posterior not uniform";
      return false;
    }
  }
  detail = "144 + 48 cases exact, privacy exhaustive";
  return true;
}

bool criterion_monte_carlo(std::string& detail) {
  const long long rounds = 600000;
  const std::uint64_t seed = 42;
  using report::Scenario;
  const Scenario scenarios[6] = {
      Scenario::direct_honest,        Scenario::direct_alice_cheat,
      Scenario::direct_bob_cheat,     Scenario::reversed_honest,
      Scenario::reversed_alice_cheat, Scenario::reversed_bob_cheat};
  const char* names[6] = {"direct_honest",   "direct_alice",   "direct_bob",
                          "reversed_honest", "reversed_alice", "reversed_bob"};
  for (int i = 0; i < 6; ++i) {
    const auto sim = report::run_simulation(scenarios[i], rounds, seed);
    for (std::size_t r = 0; r < sim.table.row_labels.size(); ++r)
      for (std::size_t c = 0; c < sim.table.col_labels.size(); ++c) {
        const auto& cell = sim.table.cells[r][c];
        if (std::abs(cell.frequency - cell.p_t) > 5.0 * cell.sigma) {
          detail = std::string(names[i]) + " cell " + sim.table.row_labels[r] +
                   "/" + sim.table.col_labels[c] + " outside 5 sigma";
          return false;
        }
      }
    if (sim.summary.cheat_success_freq) {
      const double expected = *sim.summary.cheat_success_expected;
      const double sd = sigma_floor(expected, static_cast<double>(rounds));
      if (std::abs(*sim.summary.cheat_success_freq - expected) > 5.0 * sd) {
        detail = std::string(names[i]) + " headline success outside 5 sigma";
        return false;
      }
    }
  }
  detail = "6 scenarios x 600k rounds within 5 sigma";
  return true;
}

bool criterion_classical(std::string& detail) {
  for (int i = 0; i <= 200; ++i) {
    const auto pt = cheat::classical_tradeoff(i / 200.0);
    if (pt.metric != 5.0) {
      detail = "classical metric not exact";
      return false;
    }
    if (std::abs(3.0 * pt.a_ot + 4.0 * pt.b_ot - 5.0) > 1e-12) {
      detail = "classical combination drifts";
      return false;
    }
  }
  const double quantum = 3.0 * 0.5 + 4.0 * 0.75;
  const double xot_margin = (5.0 - quantum) * 2.0;
  const double ot12_margin = (1.5 - 1.479) * 7.0;
  char buf[120];
  std::snprintf(buf, sizeof(buf), "quantum=%.2f margins %.3f > %.3f", quantum,
                xot_margin, ot12_margin);
  detail = buf;
  return quantum == 4.5 && xot_margin == 1.0 && xot_margin > ot12_margin &&
         std::abs(ot12_margin - 0.147) <= 1e-12;
}

bool criterion_three_qutrit(std::string& detail) {
  const auto big = states::three_qutrit_states();
  const auto q = states::qutrit_states();
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      worst = std::max(worst, std::abs(linalg::inner(big[i], big[j]) -
                                       linalg::inner(q[i], q[j])));
  char buf[64];
  std::snprintf(buf, sizeof(buf), "max Gram deviation %.2e", worst);
  detail = buf;
  return worst <= 1e-12;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"exact cheating values at the optimal overlaps", 1.0, criterion_exact_values},
      {"oracle equivalence on 200 random realizable points", 10.0,
       criterion_oracle_equivalence},
      {"minimum-error optimality certificates", 5.0, criterion_certificates},
      {"receiver floor 3/4 over the honest band (201^2)", 5.0, criterion_floor},
      {"classical reductions exact by enumeration", 1.0, criterion_reductions},
      {"Monte Carlo matches theory columns (600k x 6)", 60.0,
       criterion_monte_carlo},
      {"classical line 3A+4B=5 and quantum point 4.5", 1.0, criterion_classical},
      {"three-qutrit encoding Gram equivalence", 1.0, criterion_three_qutrit},
  };

  bool all_pass = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool pass = false;
    try {
      pass = criteria[i].body(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    const bool in_budget = elapsed <= criteria[i].budget_seconds;
    if (!in_budget) detail += " [over budget]";
    const bool ok = pass && in_budget;
    std::printf("%s criterion %zu: %s (%s) [%.2f s / %.0f s]\n",
                ok ? "PASS" : "FAIL", i + 1, criteria[i].name.c_str(),
                detail.c_str(), elapsed, criteria[i].budget_seconds);
    all_pass = all_pass && ok;
  }
  std::printf("%s\n", all_pass ? "acceptance: all criteria satisfied"
                               : "acceptance: FAILURES present");
  return all_pass ? 0 : 1;
}
