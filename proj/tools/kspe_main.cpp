#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kspe/config.hpp"
#include "kspe/regime.hpp"
#include "kspe/sweeps.hpp"

namespace {

// Exit codes: 0 ok, 1 failed check or broken invariant, 2 bad input or
// configuration, 3 solver non-convergence.
constexpr int exit_ok = 0;
constexpr int exit_check_failed = 1;
constexpr int exit_bad_config = 2;
constexpr int exit_no_convergence = 3;

int print_exponents(int dim, const std::string& m_text) {
  const kspe::regime::Rational m = kspe::regime::parse_rational(m_text);
  const kspe::regime::RegimeReport rep = kspe::regime::classify(m, dim);
  std::cout << "dim = " << rep.dim << ", m = " << kspe::regime::to_string(rep.m) << "\n";
  std::cout << "regime: " << kspe::regime::to_string(rep.regime) << "\n";
  if (rep.m_star) std::cout << "m* = " << kspe::regime::to_string(*rep.m_star) << "\n";
  if (rep.m_dstar) std::cout << "m** = " << kspe::regime::to_string(*rep.m_dstar) << "\n";
  if (rep.gamma)
    std::cout << "energy power = " << kspe::regime::to_string(*rep.gamma) << "\n";
  if (!rep.predicted_spaces.empty()) {
    std::cout << "predicted spaces:\n";
    for (const auto& claim : rep.predicted_spaces)
      std::cout << "  " << claim.to_text() << "\n";
  }
  return exit_ok;
}

int run_harness(kspe::HarnessMode mode, const std::string& config_path,
                const std::string& outdir, int jobs) {
  const kspe::HarnessConfig cfg = kspe::load_config(config_path);
  std::vector<kspe::ScenarioProducts> products;
  products.reserve(cfg.scenarios.size());

  if (jobs > 1 && cfg.scenarios.size() > 1) {
    std::vector<std::future<kspe::ScenarioProducts>> futures;
    futures.reserve(cfg.scenarios.size());
    for (const auto& s : cfg.scenarios)
      futures.push_back(std::async(std::launch::async,
                                   [&s, mode] { return kspe::run_scenario(s, mode); }));
    for (auto& f : futures) products.push_back(f.get());
  } else {
    for (const auto& s : cfg.scenarios) products.push_back(kspe::run_scenario(s, mode));
  }

  kspe::emit_products(outdir, products);

  bool any_failed = false;
  for (const auto& p : products) {
    const bool failed = p.failed();
    any_failed = any_failed || failed;
    std::cout << (failed ? "[FAIL] " : "[ok]   ") << p.id << "\n";
    for (const auto& c : p.checks)
      if (!c.pass) std::cout << "       " << c.name << ": " << c.detail << "\n";
  }
  std::cout << "outputs written to " << outdir << "\n";
  return any_failed ? exit_check_failed : exit_ok;
}

int print_stampacchia(double big_m, double delta, double gamma, double psi0) {
  const double d = kspe::regime::stampacchia_zero(big_m, delta, gamma, psi0);
  std::cout << "vanishing level d = " << d << "\n";
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-difference harness for a truncated parabolic-elliptic system"};
  app.require_subcommand(1);

  int dim = 3;
  std::string m_text = "2";
  auto* exponents = app.add_subcommand("exponents", "print the regime classification for (dim, m)");
  exponents->add_option("--dim", dim, "space dimension")->required();
  exponents->add_option("--m", m_text, "data integrability, an integer or fraction like 6/5")
      ->required();

  std::string config_path, outdir = "out";
  int jobs = 1;
  auto add_harness_options = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON experiment description")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", outdir, "output directory (default: out)");
    cmd->add_option("--jobs", jobs, "run scenarios concurrently")->check(CLI::PositiveNumber);
  };
  auto* solve = app.add_subcommand("solve", "run every scenario and record its norms");
  add_harness_options(solve);
  auto* sweep = app.add_subcommand("sweep", "solve plus truncation and refinement sweeps");
  add_harness_options(sweep);
  auto* verify = app.add_subcommand("verify", "solve plus the a priori estimate checks");
  add_harness_options(verify);

  double big_m = 1.0, delta = 2.0, gamma = 2.0, psi0 = 1.0;
  auto* stamp = app.add_subcommand("stampacchia", "vanishing level of the decay recursion");
  stamp->add_option("--M", big_m, "constant in the decay hypothesis")->required();
  stamp->add_option("--delta", delta, "superlinearity exponent, > 1")->required();
  stamp->add_option("--gamma", gamma, "level-gap exponent, > 0")->required();
  stamp->add_option("--psi0", psi0, "value at level zero")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_bad_config;
  }

  try {
    if (*exponents) return print_exponents(dim, m_text);
    if (*solve) return run_harness(kspe::HarnessMode::solve, config_path, outdir, jobs);
    if (*sweep) return run_harness(kspe::HarnessMode::sweep, config_path, outdir, jobs);
    if (*verify) return run_harness(kspe::HarnessMode::verify, config_path, outdir, jobs);
    if (*stamp) return print_stampacchia(big_m, delta, gamma, psi0);
  } catch (const kspe::config_error& e) {
    std::cerr << e.what() << "\n";
    return exit_bad_config;
  } catch (const kspe::unsupported_anisotropy& e) {
    std::cerr << e.what() << "\n";
    return exit_bad_config;
  } catch (const kspe::invalid_input& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_bad_config;
  } catch (const kspe::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_bad_config;
  } catch (const kspe::iteration_limit& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_no_convergence;
  } catch (const kspe::step_failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_no_convergence;
  } catch (const kspe::invariant_violation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_check_failed;
  }
  return exit_bad_config;
}
