// Command line front end: verification suite, parameter sweeps, seeded
// protocol simulation, and the classical/quantum tradeoff dataset.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "xot/reports.hpp"

namespace {

struct OutputTarget {
  std::ostream* os = &std::cout;
  std::unique_ptr<std::ofstream> file;

  static OutputTarget open(const std::string& path) {
    OutputTarget t;
    if (path.empty() || path == "-") return t;
    t.file = std::make_unique<std::ofstream>(path);
    if (!*t.file) throw std::runtime_error("cannot open output file: " + path);
    t.os = t.file.get();
    return t;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum XOR oblivious transfer: analysis and simulation"};
  app.require_subcommand(1);
  app.fallthrough(); // lets --seed appear after the subcommand name

  std::uint64_t seed = 42;
  app.add_option("--seed", seed, "Master seed for all randomised work")
      ->capture_default_str();

  // verify
  auto* verify = app.add_subcommand("verify", "Run the full invariant suite");
  std::string inject_fault;
  verify->add_option("--inject-fault", inject_fault,
                     "Deliberately corrupt a component to exercise the failure "
                     "path (value: elimination)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Emit cheating probabilities over a grid");
  std::string plane = "reF-g";
  int grid = 0;
  double lo = -1.0 / 3.0, hi = 1.0 / 3.0;
  std::string sweep_out = "-", sweep_format = "csv";
  sweep->add_option("--plane", plane, "reF-g | imF-g | 3d")->capture_default_str();
  sweep->add_option("--grid", grid, "Points per axis (default 201, 3d default 51)");
  sweep->add_option("--lo", lo, "Axis lower bound")->capture_default_str();
  sweep->add_option("--hi", hi, "Axis upper bound")->capture_default_str();
  sweep->add_option("--out", sweep_out, "Output path or - for stdout")
      ->capture_default_str();
  sweep->add_option("--format", sweep_format, "csv | json")->capture_default_str();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Seeded Monte Carlo protocol runs");
  std::string protocol = "direct", alice = "honest", bob = "honest";
  long long rounds = 100000;
  std::optional<double> test_fraction;
  std::string sim_out = "-", sim_format = "csv";
  simulate->add_option("--protocol", protocol, "direct | reversed")
      ->capture_default_str();
  simulate->add_option("--alice", alice, "honest | cheat")->capture_default_str();
  simulate->add_option("--bob", bob, "honest | cheat")->capture_default_str();
  simulate->add_option("--rounds", rounds, "Number of protocol rounds")
      ->capture_default_str();
  simulate->add_option("--test-fraction", test_fraction,
                       "Receiver tests this fraction (cheating sender only)");
  simulate->add_option("--out", sim_out, "Output path or - for stdout")
      ->capture_default_str();
  simulate->add_option("--format", sim_format, "csv | json")->capture_default_str();

  // tradeoff
  auto* tradeoff = app.add_subcommand("tradeoff", "Classical line and quantum point");
  int s_points = 11;
  std::string tr_out = "-", tr_format = "csv";
  tradeoff->add_option("--s-points", s_points, "Classical mixing weights sampled")
      ->capture_default_str();
  tradeoff->add_option("--out", tr_out, "Output path or - for stdout")
      ->capture_default_str();
  tradeoff->add_option("--format", tr_format, "csv | json")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (verify->parsed()) {
      xot::report::VerifyOptions opts;
      opts.seed = seed;
      if (!inject_fault.empty()) {
        if (inject_fault != "elimination") {
          std::cerr << "unknown fault target: " << inject_fault << '\n';
          return 2;
        }
        opts.tamper_elimination = true;
      }
      return xot::report::print_verification(std::cout, opts);
    }

    if (sweep->parsed()) {
      xot::report::Plane pl;
      if (plane == "reF-g")
        pl = xot::report::Plane::ref_g;
      else if (plane == "imF-g")
        pl = xot::report::Plane::imf_g;
      else if (plane == "3d")
        pl = xot::report::Plane::grid3d;
      else {
        std::cerr << "unknown plane: " << plane << '\n';
        return 2;
      }
      if (grid == 0) grid = (pl == xot::report::Plane::grid3d) ? 51 : 201;
      if (grid < 2) {
        std::cerr << "grid must be at least 2\n";
        return 2;
      }
      if (!(lo < hi)) {
        std::cerr << "--lo must be below --hi\n";
        return 2;
      }
      if (sweep_format != "csv" && sweep_format != "json") {
        std::cerr << "unknown format: " << sweep_format << '\n';
        return 2;
      }
      const auto rows = xot::report::run_sweep(pl, grid, lo, hi);
      auto target = OutputTarget::open(sweep_out);
      if (sweep_format == "csv")
        xot::report::write_sweep_csv(*target.os, rows);
      else
        xot::report::write_sweep_json(*target.os, rows, seed);
      return 0;
    }

    if (simulate->parsed()) {
      const bool alice_cheat = alice == "cheat";
      const bool bob_cheat = bob == "cheat";
      if ((alice != "honest" && alice != "cheat") ||
          (bob != "honest" && bob != "cheat") ||
          (protocol != "direct" && protocol != "reversed")) {
        std::cerr << "invalid --protocol/--alice/--bob value\n";
        return 2;
      }
      if (alice_cheat && bob_cheat) {
        std::cerr << "at most one party may cheat per scenario\n";
        return 2;
      }
      if (rounds < 1) {
        std::cerr << "rounds must be positive\n";
        return 2;
      }
      if (sim_format != "csv" && sim_format != "json") {
        std::cerr << "unknown format: " << sim_format << '\n';
        return 2;
      }
      xot::report::Scenario sc;
      if (protocol == "direct")
        sc = alice_cheat ? xot::report::Scenario::direct_alice_cheat
             : bob_cheat ? xot::report::Scenario::direct_bob_cheat
                         : xot::report::Scenario::direct_honest;
      else
        sc = alice_cheat ? xot::report::Scenario::reversed_alice_cheat
             : bob_cheat ? xot::report::Scenario::reversed_bob_cheat
                         : xot::report::Scenario::reversed_honest;
      if (test_fraction &&
          sc != xot::report::Scenario::direct_alice_cheat &&
          sc != xot::report::Scenario::reversed_bob_cheat) {
        std::cerr << "--test-fraction needs a cheating state sender\n";
        return 2;
      }
      const auto sim = xot::report::run_simulation(sc, rounds, seed, test_fraction);
      auto target = OutputTarget::open(sim_out);
      if (sim_format == "csv")
        xot::report::write_simulation_csv(*target.os, sim);
      else
        xot::report::write_simulation_json(*target.os, sim, seed);
      return 0;
    }

    if (tradeoff->parsed()) {
      if (s_points < 2) {
        std::cerr << "s-points must be at least 2\n";
        return 2;
      }
      if (tr_format != "csv" && tr_format != "json") {
        std::cerr << "unknown format: " << tr_format << '\n';
        return 2;
      }
      const auto rows = xot::report::tradeoff_rows(s_points);
      auto target = OutputTarget::open(tr_out);
      if (tr_format == "csv")
        xot::report::write_tradeoff_csv(*target.os, rows);
      else
        xot::report::write_tradeoff_json(*target.os, rows, seed);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
