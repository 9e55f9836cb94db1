#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "xot/rng.hpp"
#include "xot/state_family.hpp"

namespace xot::protocol {

enum class Mode { honest, cheat };

// Cheating sub-strategies. Which ones apply depends on the party and the
// protocol direction; run_* validates the combination.
enum class CheatKind {
  none,
  srm_guess,       // receiver applies the square-root measurement (direct Bob)
  inject_basis,    // sender injects a basis state and guesses the index (direct Alice)
  entangled,       // sender keeps an entangled register (passes all tests)
  index_guess,     // reversed Alice: pair measurement guessing the bit index
  max_eigenvector, // reversed Bob: send the top eigenvector of one receiver operator
};

struct PartyStrategy {
  Mode mode = Mode::honest;
  CheatKind kind = CheatKind::none;
  // For inject_basis: basis state 0..2, or -1 to draw uniformly per round.
  int inject_state = -1;

  static PartyStrategy honest() { return {}; }
  static PartyStrategy bob_srm() { return {Mode::cheat, CheatKind::srm_guess, -1}; }
  static PartyStrategy alice_inject(int state = -1) {
    return {Mode::cheat, CheatKind::inject_basis, state};
  }
  static PartyStrategy alice_entangled() { return {Mode::cheat, CheatKind::entangled, -1}; }
  static PartyStrategy reversed_alice_index_guess() {
    return {Mode::cheat, CheatKind::index_guess, -1};
  }
  static PartyStrategy reversed_bob_max_eigenvector() {
    return {Mode::cheat, CheatKind::max_eigenvector, -1};
  }
  static PartyStrategy reversed_bob_entangled() {
    return {Mode::cheat, CheatKind::entangled, -1};
  }
};

// One protocol execution. Semi-random fields are always set for honest runs;
// wrapper and post-processing fields are set by the corresponding operations.
struct RoundRecord {
  // sender's protocol bits (dummy bits inside the standard wrapper)
  int x0 = -1, x1 = -1, x2 = -1;
  int b = -1; // receiver's obtained bit index
  int y = -1; // receiver's obtained bit value
  bool abort = false;

  int sent_state = -1; // index of the transmitted (or declared) state
  int outcome = -1;    // receiver's raw measurement outcome

  // standard-XOT wrapper fields
  std::optional<int> B, r, s0, s1, s2;
  std::optional<int> X0, X1, X2;
  std::optional<int> y_prime;

  // reversed post-processing fields
  std::optional<int> t0, t1, t2;

  // cheat bookkeeping
  std::optional<std::pair<int, int>> pair_guess; // guessed (x0, x1)
  std::optional<int> index_guess;                // guessed b
  std::optional<bool> cheat_success;

  Mode alice_mode = Mode::honest;
  Mode bob_mode = Mode::honest;

  bool operator==(const RoundRecord&) const = default;
};

// Semi-random protocol: sender transmits a state encoding two uniform bits,
// receiver eliminates two of the four candidates and learns one bit index
// plus its value.
RoundRecord run_semirandom(const PartyStrategy& alice, const PartyStrategy& bob,
                           std::uint64_t seed);

// Classical post-processing turning one semi-random round (x0, x1, b, y) into
// standard XOT with chosen inputs X0, X1 and chosen index B.
struct StandardPost {
  int r, s0, s1, s2, y_prime;
};
StandardPost standard_postprocess(int x0, int x1, int b, int y, int X0, int X1, int B);

// Runs a semi-random round with dummy bits, then applies the wrapper so the
// receiver obtains X_B.
RoundRecord standard_from_semirandom(int X0, int X1, int B, const PartyStrategy& alice,
                                     const PartyStrategy& bob, std::uint64_t seed);

// The opposite reduction: draws uniform inputs, runs the standard protocol,
// and returns the outputs in semi-random form.
RoundRecord semirandom_from_standard(const PartyStrategy& alice, const PartyStrategy& bob,
                                     std::uint64_t seed);

// Reversed protocol: the bit receiver (Bob) now sends one of six states, the
// bit sender (Alice) measures and obtains both bits.
RoundRecord run_reversed(const PartyStrategy& alice, const PartyStrategy& bob,
                         std::uint64_t seed);

// Post-processing for the reversed protocol: the sender corrects her random
// pair towards the desired bits via t_c = x_c xor X_c, and the receiver
// updates his value to X_b = x_b xor t_b.
struct ReversedPost {
  int t0, t1, t2;
  int final_bit;
};
ReversedPost reversed_postprocess_bits(int X0, int X1, int x0, int x1, int b, int xb);
RoundRecord reversed_postprocess(int X0, int X1, RoundRecord record);

// Receiver tests a random fraction of transmitted positions against the
// sender's declarations and aborts on any outcome that eliminates a declared
// state.
struct TestingReport {
  bool aborted = false;
  int mismatches = 0;
  int tested = 0;
  int rounds = 0;
};
TestingReport testing_subprotocol(int n_rounds, double test_fraction,
                                  const PartyStrategy& sender, std::uint64_t seed);

// The classical baselines: 1 = sender forwards one bit of her choice,
// 2 = sender forwards all three bits, 3 = mixture (1 with probability s).
RoundRecord classical_protocol(int which, double s, Mode alice, Mode bob,
                               std::uint64_t seed);

}  // namespace xot::protocol
