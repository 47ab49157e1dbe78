// Command-line surface for the tripartite entanglement library: pure-state
// tau, quasi-pure tau_a, mixed-state convex-roof upper bounds, Fig-style
// sweep data, and batch verification suites.
//
// Exit codes: 0 success, 1 verification failure, 2 usage/parse error.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ttau/ttau.hpp"

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10f", v);
  return buf;
}

ttau::PureState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open state file: " + path);
  return ttau::read_state(in);
}

ttau::DensityMatrix load_density(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open density file: " + path);
  return ttau::read_density(in);
}

int run_tau(const std::string& input, bool expanded) {
  const ttau::PureState s = load_state(input);
  if (expanded) {
    const double via_gram = ttau::tau(s);
    const double via_expansion = ttau::tau_expanded(s);
    std::cout << fmt(via_expansion) << "\n";
    std::cout << "delta=" << std::abs(via_expansion - via_gram) << "\n";
  } else {
    std::cout << fmt(ttau::tau(s)) << "\n";
  }
  return 0;
}

int run_tau_a(const std::string& input) {
  const ttau::DensityMatrix rho = load_density(input);
  std::cout << fmt(ttau::tau_a(rho, rho.party_c_dim())) << "\n";
  return 0;
}

int run_mixed(const std::string& input, ttau::Index ensemble, ttau::Index restarts,
              std::uint64_t seed, ttau::Index max_rank) {
  const ttau::DensityMatrix rho = load_density(input);
  const ttau::SpectralDecomposition sd = ttau::eigendecompose(rho);
  if (sd.rank > max_rank) {
    std::cerr << "rank " << sd.rank << " exceeds the mixed-state bound " << max_rank
              << "; use `tau-a` (quasi-pure approximation) instead\n";
    return 1;
  }
  const ttau::RoofResult result = ttau::minimize_roof(rho, ensemble, restarts, seed);
  std::cout << "tau_upper_bound=" << fmt(result.upper_bound)
            << " N=" << result.ensemble_size << " restarts=" << restarts
            << " seed=" << seed << "\n";
  for (std::size_t i = 0; i < result.per_member.size(); ++i)
    std::cout << "member " << i << " p=" << fmt(result.per_member[i].first)
              << " tau=" << fmt(result.per_member[i].second) << "\n";
  return 0;
}

int run_sweep(const std::string& state, double x_min, double x_max,
              ttau::Index steps, const std::string& out_path) {
  const auto records = ttau::fig1_sweep(state, x_min, x_max, steps);
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "cannot write to " << out_path << "\n";
    return 1;
  }
  ttau::write_sweep_csv(out, records);
  for (const auto& rec : records)
    if (!rec.ok) std::cerr << "point x=" << rec.x << " failed\n";
  return 0;
}

int verify_monotonicity(ttau::Index trials, std::uint64_t seed) {
  ttau::Index violations = 0;
  double worst = 0.0;
  for (ttau::Index n : {2, 3}) {
    const auto report = ttau::check_monotonicity(n, trials, seed + 1000 * n);
    violations += report.violations;
    worst = std::max(worst, report.worst_excess);
  }
  if (violations == 0) {
    std::cout << "pass: 0 violations (worst excess " << worst << ")\n";
    return 0;
  }
  std::cout << "fail: " << violations << " violations, worst excess " << worst << "\n";
  return 1;
}

int verify_lu_invariance(ttau::Index trials, std::uint64_t seed) {
  double worst = 0.0;
  for (ttau::Index n : {2, 3, 4})
    worst = std::max(worst,
                     ttau::check_lu_invariance(n, trials, seed + 1000 * n).max_deviation);
  if (worst < 1e-9) {
    std::cout << "pass: max deviation " << worst << "\n";
    return 0;
  }
  std::cout << "fail: max deviation " << worst << "\n";
  return 1;
}

int verify_reduction(ttau::Index trials, std::uint64_t seed) {
  double worst = 0.0;
  for (ttau::Index t = 0; t < trials; ++t) {
    const ttau::PureState s = ttau::random_pure(2, seed + static_cast<std::uint64_t>(t));
    const double lhs = ttau::tau(s) * ttau::tau(s);
    worst = std::max(worst, std::abs(lhs - ttau::three_tangle(s) / 2.0));
  }
  if (worst < 1e-8) {
    std::cout << "pass: max|tau^2 - tangle/2| = " << worst << "\n";
    return 0;
  }
  std::cout << "fail: max|tau^2 - tangle/2| = " << worst << "\n";
  return 1;
}

int verify_zero_set(ttau::Index trials, std::uint64_t seed) {
  double worst = ttau::tau(ttau::w_222());
  ttau::GaussianStream g(seed);
  for (ttau::Index n : {2, 3, 4}) {
    for (ttau::Index t = 0; t < trials; ++t) {
      Eigen::Vector4cd phi_ab;
      for (int i = 0; i < 4; ++i) phi_ab(i) = g.next_complex();
      ttau::CVector chi_c(n);
      for (ttau::Index k = 0; k < n; ++k) chi_c(k) = g.next_complex();
      worst = std::max(worst, ttau::tau(ttau::semiseparable_ab_c(phi_ab, chi_c)));

      Eigen::Vector2cd chi_a;
      chi_a << g.next_complex(), g.next_complex();
      ttau::CVector phi_bc(2 * n);
      for (ttau::Index k = 0; k < 2 * n; ++k) phi_bc(k) = g.next_complex();
      worst = std::max(worst, ttau::tau(ttau::semiseparable_a_bc(chi_a, phi_bc)));
    }
  }
  if (worst < 1e-10) {
    std::cout << "pass: max tau on zero set = " << worst << "\n";
    return 0;
  }
  std::cout << "fail: max tau on zero set = " << worst << "\n";
  return 1;
}

int verify_path_equivalence(ttau::Index trials, std::uint64_t seed) {
  double worst = 0.0;
  std::uint64_t counter = seed;
  for (ttau::Index t = 0; t < trials; ++t) {
    const ttau::Index n = 2 + static_cast<ttau::Index>(t % 4);
    const ttau::PureState s = ttau::random_pure(n, counter++);
    worst = std::max(worst, std::abs(ttau::tau(s) - ttau::tau_expanded(s)));
  }
  if (worst < 1e-10) {
    std::cout << "pass: max path delta = " << worst << "\n";
    return 0;
  }
  std::cout << "fail: max path delta = " << worst << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"genuine tripartite entanglement semi-monotone for (2x2xn) systems"};
  app.require_subcommand(1);

  std::string input, out_path, state_tag = "ghz-prime", suite;
  bool expanded = false;
  double x_min = 0.3, x_max = 1.0;
  ttau::Index steps = 71, ensemble = 0, restarts = 4, max_rank = 8;
  ttau::Index trials = 1000;
  std::uint64_t seed = 1;

  auto* cmd_tau = app.add_subcommand("tau", "tau of a pure state file");
  cmd_tau->add_option("input", input, "state file")->required();
  cmd_tau->add_flag("--expanded", expanded, "use the expanded-form path and print the cross-path delta");

  auto* cmd_tau_a = app.add_subcommand("tau-a", "quasi-pure tau_a of a density file");
  cmd_tau_a->add_option("input", input, "density file")->required();

  auto* cmd_mixed = app.add_subcommand("mixed", "convex-roof upper bound of a density file");
  cmd_mixed->add_option("input", input, "density file")->required();
  cmd_mixed->add_option("--ensemble-size", ensemble, "ensemble size N (default 2r)");
  cmd_mixed->add_option("--restarts", restarts, "optimizer restarts");
  cmd_mixed->add_option("--seed", seed, "random seed");
  cmd_mixed->add_option("--max-rank", max_rank, "refuse densities above this rank");

  auto* cmd_sweep = app.add_subcommand("sweep", "tau_a sweep over isotropic mixtures");
  cmd_sweep->add_option("--state", state_tag, "ghz-prime | w-prime");
  cmd_sweep->add_option("--x-min", x_min, "lower mixing parameter");
  cmd_sweep->add_option("--x-max", x_max, "upper mixing parameter");
  cmd_sweep->add_option("--steps", steps, "grid points")->check(CLI::PositiveNumber);
  cmd_sweep->add_option("--out", out_path, "output CSV path")->required();

  auto* cmd_verify = app.add_subcommand("verify", "run a verification suite");
  cmd_verify
      ->add_option("--suite", suite,
                   "monotonicity | lu-invariance | reduction | zero-set | path-equivalence")
      ->required();
  cmd_verify->add_option("--trials", trials, "trials per case");
  cmd_verify->add_option("--seed", seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_tau->parsed()) return run_tau(input, expanded);
    if (cmd_tau_a->parsed()) return run_tau_a(input);
    if (cmd_mixed->parsed()) return run_mixed(input, ensemble, restarts, seed, max_rank);
    if (cmd_sweep->parsed()) return run_sweep(state_tag, x_min, x_max, steps, out_path);
    if (cmd_verify->parsed()) {
      if (suite == "monotonicity") return verify_monotonicity(trials, seed);
      if (suite == "lu-invariance") return verify_lu_invariance(trials, seed);
      if (suite == "reduction") return verify_reduction(trials, seed);
      if (suite == "zero-set") return verify_zero_set(trials, seed);
      if (suite == "path-equivalence") return verify_path_equivalence(trials, seed);
      std::cerr << "unknown suite: " << suite << "\n";
      return 2;
    }
  } catch (const ttau::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 2;
}
