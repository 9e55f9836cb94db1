#include "xot/protocol_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "xot/measurements.hpp"

namespace xot::protocol {

using linalg::CVec;
using linalg::cdouble;

namespace {

// Cached Born tables for the direct protocol. All state/POVM constructions are
// deterministic, so computing them once is safe (values immutable afterwards).
struct DirectTables {
  std::array<CVec, 4> states;
  measure::Povm elimination;
  measure::Povm srm;
  // elim_probs[m][o]: elimination outcome o on protocol state m
  std::array<std::vector<double>, 4> elim_probs;
  // basis_probs[k][o]: elimination outcome o on injected basis state k
  std::array<std::vector<double>, 3> basis_probs;
  // srm_probs[m][o]: square-root-measurement outcome o on protocol state m
  std::array<std::vector<double>, 4> srm_probs;
  std::array<int, 3> inject_guess; // argmax_b P(b | injected k), ties to low b

  DirectTables() {
    states = states::qutrit_states();
    elimination = measure::elimination_povm();
    std::vector<CVec> kets(states.begin(), states.end());
    srm = measure::square_root_measurement(
        measure::StateEnsemble::equiprobable_pure(kets));
    for (int m = 0; m < 4; ++m) {
      elim_probs[m] = elimination.outcome_probabilities(states[m]);
      srm_probs[m] = srm.outcome_probabilities(states[m]);
    }
    for (int k = 0; k < 3; ++k) {
      basis_probs[k] = elimination.outcome_probabilities(CVec::basis(3, k));
      double best = -1.0;
      int arg = 0;
      for (int b = 0; b < 3; ++b) {
        const double pb = basis_probs[k][2 * b] + basis_probs[k][2 * b + 1];
        if (pb > best + 1e-15) {
          best = pb;
          arg = b;
        }
      }
      inject_guess[k] = arg;
    }
  }
};

const DirectTables& direct_tables() {
  static const DirectTables t;
  return t;
}

// Entangled sender against an honest receiver: the sender keeps a four-level
// register entangled with the transmitted state, sum_m (1/2)|m> (x) |phi_m>.
// Register and elimination measurements commute, so one joint distribution
// covers both orders.
struct EntangledTables {
  measure::Povm register_povm;
  // joint[a][o]: register outcome a and elimination outcome o
  std::array<std::array<double, 6>, 4> joint{};
  std::array<int, 4> best_index; // guess of b per register outcome

  EntangledTables() {
    register_povm = measure::register_guess_povm();
    const auto& t = direct_tables();

    CVec psi(12);
    for (int m = 0; m < 4; ++m)
      for (int i = 0; i < 3; ++i) psi[m * 3 + i] = 0.5 * t.states[m][i];
    for (int a = 0; a < 4; ++a)
      for (int o = 0; o < 6; ++o) {
        const auto op = linalg::kron(register_povm.ops[a], t.elimination.ops[o]);
        joint[a][o] = std::max(0.0, linalg::expectation(op, psi).real());
      }

    // Best index guess per register outcome, from the conditional register
    // states at the qutrit overlaps; ties resolve to the lower index.
    const auto mus = measure::conditional_register_states({1.0 / 3.0, 0.0, -1.0 / 3.0});
    for (int a = 0; a < 4; ++a) {
      double best = -1.0;
      int arg = 0;
      for (int b = 0; b < 3; ++b) {
        const double pb = (mus[b] * register_povm.ops[a]).trace().real();
        if (pb > best + 1e-12) {
          best = pb;
          arg = b;
        }
      }
      best_index[a] = arg;
    }
  }
};

const EntangledTables& entangled_tables() {
  static const EntangledTables t;
  return t;
}

// Reversed-direction Born tables. The cheating receiver realises her optimal
// measurement as a basis measurement followed by a best-guess map (the pair
// mixtures are diagonal, so this achieves the same value as the pair POVM).
struct ReversedTables {
  std::array<CVec, 6> sent;
  measure::Povm receiver; // four-outcome pair measurement
  std::array<std::vector<double>, 6> receiver_probs;
  std::array<std::vector<double>, 6> basis_probs;
  std::array<int, 3> basis_guess; // index guess per basis outcome, ties low
  // Cheating sender (max eigenvector): sends the receiver ket of target m.
  std::array<std::vector<double>, 4> fake_probs;
  // Entangled cheating sender: conditional register states and their SRM.
  std::array<CVec, 4> thetas;
  measure::Povm theta_srm;
  std::array<std::vector<double>, 4> theta_srm_probs;

  ReversedTables() {
    sent = states::reversed_states();
    receiver = measure::reversed_receiver_povm();
    for (int j = 0; j < 6; ++j) {
      receiver_probs[j] = receiver.outcome_probabilities(sent[j]);
      basis_probs[j].resize(3);
      for (int k = 0; k < 3; ++k) basis_probs[j][k] = std::norm(sent[j][k]);
    }
    const auto pairs = measure::reversed_pair_ensemble();
    for (int k = 0; k < 3; ++k) {
      double best = -1.0;
      int arg = 0;
      for (int b = 0; b < 3; ++b) {
        const double pb = pairs.states[b].at(k, k).real();
        if (pb > best + 1e-12) {
          best = pb;
          arg = b;
        }
      }
      basis_guess[k] = arg;
    }
    const auto fakes = states::qutrit_states();
    for (int m = 0; m < 4; ++m)
      fake_probs[m] = receiver.outcome_probabilities(fakes[m]);

    const double c = 1.0 / std::sqrt(6.0);
    for (int m = 0; m < 4; ++m) {
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
      thetas[m] = reg.normalized();
    }
    std::vector<CVec> kets(thetas.begin(), thetas.end());
    theta_srm = measure::square_root_measurement(
        measure::StateEnsemble::equiprobable_pure(kets));
    for (int m = 0; m < 4; ++m)
      theta_srm_probs[m] = theta_srm.outcome_probabilities(thetas[m]);
  }
};

const ReversedTables& reversed_tables() {
  static const ReversedTables t;
  return t;
}

int mod3(int v) { return ((v % 3) + 3) % 3; }

}  // namespace

RoundRecord run_semirandom(const PartyStrategy& alice, const PartyStrategy& bob,
                           std::uint64_t seed) {
  const auto& t = direct_tables();
  Rng rng(seed);
  RoundRecord rec;
  rec.alice_mode = alice.mode;
  rec.bob_mode = bob.mode;

  if (bob.mode == Mode::cheat && bob.kind != CheatKind::srm_guess)
    throw std::invalid_argument("run_semirandom: receiver cheat must be srm_guess");
  if (alice.mode == Mode::cheat && alice.kind != CheatKind::inject_basis &&
      alice.kind != CheatKind::entangled)
    throw std::invalid_argument("run_semirandom: sender cheat must be inject_basis or entangled");

  if (alice.mode == Mode::honest) {
    rec.x0 = rng.bit();
    rec.x1 = rng.bit();
    rec.x2 = rec.x0 ^ rec.x1;
    rec.sent_state = states::bits_to_index(rec.x0, rec.x1);
    if (bob.mode == Mode::honest) {
      rec.outcome = rng.sample(t.elim_probs[rec.sent_state]);
      rec.b = measure::elimination_outcome_bit(rec.outcome);
      rec.y = measure::elimination_outcome_value(rec.outcome);
    } else {
      rec.outcome = rng.sample(t.srm_probs[rec.sent_state]);
      rec.pair_guess = states::index_to_bits(rec.outcome);
      rec.cheat_success = (rec.outcome == rec.sent_state);
    }
    return rec;
  }

  if (alice.kind == CheatKind::inject_basis) {
    const int k = (alice.inject_state >= 0) ? alice.inject_state : rng.uniform_int(3);
    rec.sent_state = k;
    rec.outcome = rng.sample(t.basis_probs[k]);
    rec.b = measure::elimination_outcome_bit(rec.outcome);
    rec.y = measure::elimination_outcome_value(rec.outcome);
    rec.index_guess = t.inject_guess[k];
    rec.cheat_success = (*rec.index_guess == rec.b);
    return rec;
  }

  // Entangled sender against an honest receiver: sample the joint
  // (register outcome, elimination outcome) distribution.
  const auto& et = entangled_tables();
  std::vector<double> flat(24);
  for (int a = 0; a < 4; ++a)
    for (int o = 0; o < 6; ++o) flat[a * 6 + o] = et.joint[a][o];
  const int cell = rng.sample(flat);
  const int a = cell / 6;
  rec.outcome = cell % 6;
  rec.b = measure::elimination_outcome_bit(rec.outcome);
  rec.y = measure::elimination_outcome_value(rec.outcome);
  rec.index_guess = et.best_index[a];
  rec.cheat_success = (*rec.index_guess == rec.b);
  return rec;
}

StandardPost standard_postprocess(int x0, int x1, int b, int y, int X0, int X1, int B) {
  StandardPost out;
  const int x[3] = {x0, x1, x0 ^ x1};
  const int X[3] = {X0, X1, X0 ^ X1};
  out.r = mod3(b + 2 * B);
  int xp[3];
  for (int c = 0; c < 3; ++c) xp[c] = x[mod3(c + out.r)];
  out.s0 = xp[0] ^ X[0];
  out.s1 = xp[1] ^ X[1];
  out.s2 = out.s0 ^ out.s1;
  const int s[3] = {out.s0, out.s1, out.s2};
  out.y_prime = y ^ s[B];
  return out;
}

RoundRecord standard_from_semirandom(int X0, int X1, int B, const PartyStrategy& alice,
                                     const PartyStrategy& bob, std::uint64_t seed) {
  RoundRecord rec = run_semirandom(alice, bob, seed);
  rec.B = B;
  rec.X0 = X0;
  rec.X1 = X1;
  rec.X2 = X0 ^ X1;

  // Dummy bits are required for the wrapper even when the sender cheats at
  // the quantum level; cheating Alice still answers with s-messages.
  Rng wrap_rng(seed ^ 0xD1B54A32D192ED03ULL);
  int x0 = rec.x0, x1 = rec.x1;
  if (x0 < 0) {
    x0 = wrap_rng.bit();
    x1 = wrap_rng.bit();
  }
  const int b_used = rec.b >= 0 ? rec.b : 0;
  const int y_used = rec.y >= 0 ? rec.y : 0;
  const StandardPost post = standard_postprocess(x0, x1, b_used, y_used, X0, X1, B);
  rec.r = post.r;
  rec.s0 = post.s0;
  rec.s1 = post.s1;
  rec.s2 = post.s2;
  if (rec.b >= 0 && rec.y >= 0) rec.y_prime = post.y_prime;
  return rec;
}

RoundRecord semirandom_from_standard(const PartyStrategy& alice, const PartyStrategy& bob,
                                     std::uint64_t seed) {
  Rng rng(seed ^ 0x94D049BB133111EBULL);
  const int X0 = rng.bit();
  const int X1 = rng.bit();
  const int B = rng.uniform_int(3);
  RoundRecord rec = standard_from_semirandom(X0, X1, B, alice, bob, seed);
  // Present the standard outputs in semi-random form: the receiver's index is
  // his uniformly drawn B, his value the wrapped output.
  rec.x0 = X0;
  rec.x1 = X1;
  rec.x2 = X0 ^ X1;
  rec.b = B;
  if (rec.y_prime) rec.y = *rec.y_prime;
  return rec;
}

RoundRecord run_reversed(const PartyStrategy& alice, const PartyStrategy& bob,
                         std::uint64_t seed) {
  const auto& t = reversed_tables();
  Rng rng(seed);
  RoundRecord rec;
  rec.alice_mode = alice.mode;
  rec.bob_mode = bob.mode;

  if (alice.mode == Mode::cheat && alice.kind != CheatKind::index_guess)
    throw std::invalid_argument("run_reversed: receiver cheat must be index_guess");
  if (bob.mode == Mode::cheat && bob.kind != CheatKind::max_eigenvector &&
      bob.kind != CheatKind::entangled)
    throw std::invalid_argument(
        "run_reversed: sender cheat must be max_eigenvector or entangled");

  if (bob.mode == Mode::honest) {
    const int j = rng.uniform_int(6);
    rec.sent_state = j;
    rec.b = j / 2;
    rec.y = j % 2;
    if (alice.mode == Mode::honest) {
      rec.outcome = rng.sample(t.receiver_probs[j]);
      auto [x0, x1] = states::index_to_bits(rec.outcome);
      rec.x0 = x0;
      rec.x1 = x1;
      rec.x2 = x0 ^ x1;
    } else {
      rec.outcome = rng.sample(t.basis_probs[j]);
      rec.index_guess = t.basis_guess[rec.outcome];
      rec.cheat_success = (*rec.index_guess == rec.b);
    }
    return rec;
  }

  if (bob.kind == CheatKind::max_eigenvector) {
    const int target = rng.uniform_int(4);
    rec.sent_state = target;
    rec.outcome = rng.sample(t.fake_probs[target]);
    auto [x0, x1] = states::index_to_bits(rec.outcome);
    rec.x0 = x0;
    rec.x1 = x1;
    rec.x2 = x0 ^ x1;
    rec.pair_guess = states::index_to_bits(target);
    rec.cheat_success = (rec.outcome == target);
    return rec;
  }

  // Entangled sender: the receiver's outcome is uniform over the four pairs
  // and collapses the kept register to theta_m; the sender then applies the
  // square-root measurement over the thetas.
  const int m = rng.uniform_int(4);
  rec.outcome = m;
  rec.sent_state = m; // collapsed declaration
  auto [x0, x1] = states::index_to_bits(m);
  rec.x0 = x0;
  rec.x1 = x1;
  rec.x2 = x0 ^ x1;
  const int guess = rng.sample(t.theta_srm_probs[m]);
  if (guess < 4) rec.pair_guess = states::index_to_bits(guess);
  rec.cheat_success = (guess == m);
  return rec;
}

ReversedPost reversed_postprocess_bits(int X0, int X1, int x0, int x1, int b, int xb) {
  ReversedPost out;
  const int x[3] = {x0, x1, x0 ^ x1};
  const int X[3] = {X0, X1, X0 ^ X1};
  out.t0 = x[0] ^ X[0];
  out.t1 = x[1] ^ X[1];
  out.t2 = x[2] ^ X[2];
  const int tb = (b == 0 ? out.t0 : (b == 1 ? out.t1 : out.t2));
  out.final_bit = xb ^ tb;
  return out;
}

RoundRecord reversed_postprocess(int X0, int X1, RoundRecord rec) {
  if (rec.x0 < 0 || rec.x1 < 0 || rec.b < 0 || rec.y < 0)
    throw std::invalid_argument("reversed_postprocess: record lacks a completed round");
  const ReversedPost post =
      reversed_postprocess_bits(X0, X1, rec.x0, rec.x1, rec.b, rec.y);
  rec.X0 = X0;
  rec.X1 = X1;
  rec.X2 = X0 ^ X1;
  rec.t0 = post.t0;
  rec.t1 = post.t1;
  rec.t2 = post.t2;
  rec.y_prime = post.final_bit;
  return rec;
}

TestingReport testing_subprotocol(int n_rounds, double test_fraction,
                                  const PartyStrategy& sender, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw std::invalid_argument("testing_subprotocol: test_fraction must be in (0, 1)");
  if (n_rounds <= 0)
    throw std::invalid_argument("testing_subprotocol: need at least one round");

  const auto& t = direct_tables();
  TestingReport rep;
  rep.rounds = n_rounds;

  // Receiver picks the test subset only after all states arrived.
  Rng subset_rng(seed ^ 0xA0761D6478BD642FULL);
  std::vector<int> order(n_rounds);
  std::iota(order.begin(), order.end(), 0);
  const int n_test = std::max(1, static_cast<int>(std::floor(test_fraction * n_rounds)));
  for (int i = 0; i < n_test; ++i) {
    const int j = i + subset_rng.uniform_int(n_rounds - i);
    std::swap(order[i], order[j]);
  }
  std::vector<char> tested(n_rounds, 0);
  for (int i = 0; i < n_test; ++i) tested[order[i]] = 1;
  rep.tested = n_test;

  for (int pos = 0; pos < n_rounds; ++pos) {
    if (!tested[pos]) continue;
    Rng rng = Rng::for_round(seed, static_cast<std::uint64_t>(pos));
    int declared;
    int outcome;
    if (sender.mode == Mode::honest) {
      declared = rng.uniform_int(4);
      outcome = rng.sample(t.elim_probs[declared]);
    } else if (sender.kind == CheatKind::entangled) {
      // Measuring the kept register in its pointer basis collapses the
      // transmitted state to a uniformly random protocol state; declaring the
      // register result is always consistent.
      declared = rng.uniform_int(4);
      outcome = rng.sample(t.elim_probs[declared]);
    } else if (sender.kind == CheatKind::inject_basis) {
      const int k = (sender.inject_state >= 0) ? sender.inject_state : 0;
      outcome = rng.sample(t.basis_probs[k]);
      declared = rng.uniform_int(4); // no consistent story exists
    } else {
      throw std::invalid_argument("testing_subprotocol: unsupported sender strategy");
    }
    const auto ruled_out = measure::eliminated_states(outcome);
    if (declared == ruled_out[0] || declared == ruled_out[1]) ++rep.mismatches;
  }
  rep.aborted = rep.mismatches > 0;
  return rep;
}

RoundRecord classical_protocol(int which, double s, Mode alice, Mode bob,
                               std::uint64_t seed) {
  if (which < 1 || which > 3)
    throw std::invalid_argument("classical_protocol: which must be 1, 2, or 3");
  Rng rng(seed);
  if (which == 3) {
    if (s < 0.0 || s > 1.0)
      throw std::invalid_argument("classical_protocol: s must lie in [0, 1]");
    which = (rng.uniform() < s) ? 1 : 2;
  }

  RoundRecord rec;
  rec.alice_mode = alice;
  rec.bob_mode = bob;
  rec.x0 = rng.bit();
  rec.x1 = rng.bit();
  rec.x2 = rec.x0 ^ rec.x1;
  const int x[3] = {rec.x0, rec.x1, rec.x2};

  if (which == 1) {
    // Sender forwards one bit of her choice and "forgets" which.
    const int c = rng.uniform_int(3);
    rec.b = c;
    rec.y = x[c];
    if (alice == Mode::cheat) {
      rec.index_guess = c; // she did not forget
      rec.cheat_success = true;
    }
    if (bob == Mode::cheat) {
      // He knows x_c; one more uniform guess fixes all three bits.
      int guess[3];
      guess[c] = x[c];
      const int g1 = rng.bit();
      guess[mod3(c + 1)] = g1;
      guess[mod3(c + 2)] = guess[c] ^ g1;
      rec.pair_guess = std::make_pair(guess[0], guess[1]);
      rec.cheat_success = (guess[0] == rec.x0 && guess[1] == rec.x1);
    }
    return rec;
  }

  // Protocol 2: all three bits cross the channel; honest receiver reads one.
  rec.b = rng.uniform_int(3);
  rec.y = x[rec.b];
  if (bob == Mode::cheat) {
    rec.pair_guess = std::make_pair(rec.x0, rec.x1);
    rec.cheat_success = true;
  }
  if (alice == Mode::cheat) {
    rec.index_guess = rng.uniform_int(3);
    rec.cheat_success = (*rec.index_guess == rec.b);
  }
  return rec;
}

}  // namespace xot::protocol
