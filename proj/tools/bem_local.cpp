// bem-local: convergence experiments for Symm's equation and the stabilized
// hypersingular equation on polygons.
//
// Exit codes: 0 pass, 1 rate check failed, 2 input error, 3 numerical failure.

#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "bemloc/acceptance.hpp"
#include "bemloc/errors.hpp"
#include "bemloc/harness.hpp"

namespace {

enum Exit { kPass = 0, kRateFailure = 1, kInputError = 2, kNumericalFailure = 3 };

struct RunOptions {
  std::string geometry = "lshape";
  std::string equation = "symm";
  std::string alpha = "1/3";
  int levels = 7;
  double region_dist = 0.3;
  int eoc_window = 4;
  int refine_local = 4;
  std::size_t per_edge = 6;
  bool no_negative_norm = false;
  bool global_l2 = false;
  std::string csv;
  std::string plot;
  int threads = 0;
};

int run_command(const RunOptions& o) {
  bemloc::ExperimentConfig c;
  c.geometry = o.geometry;
  c.equation = bemloc::parse_equation(o.equation);
  c.alpha = bemloc::parse_rational(o.alpha);
  c.levels = o.levels;
  c.region_dist = o.region_dist;
  c.eoc_window = o.eoc_window;
  c.refine_local = o.refine_local;
  c.elements_per_edge = o.per_edge;
  c.local_negative_norm = !o.no_negative_norm;
  c.global_l2 = o.global_l2;
  if (o.threads > 0) omp_set_num_threads(o.threads);

  const bemloc::ConvergenceTable t = bemloc::run_experiment(c, &std::cerr);
  bemloc::emit_csv(t, o.csv);
  if (!o.plot.empty()) bemloc::emit_plot_data(t, o.plot);
  bemloc::print_summary(t, std::cout);
  return t.passed() ? kPass : kRateFailure;
}

int predict_command(const std::string& geometry, const std::string& alpha_text) {
  const double alpha = bemloc::parse_rational(alpha_text);
  const auto symm = bemloc::predicted_rates(geometry, alpha, bemloc::Equation::symm);
  const auto hyp = bemloc::predicted_rates(geometry, alpha, bemloc::Equation::hypsing);
  std::cout << "alpha_D " << symm.alpha_D << '\n'
            << "global_energy " << symm.global_energy << '\n'
            << "local_l2_symm " << symm.local << '\n'
            << "local_h1_hypsing " << hyp.local << '\n';
  return kPass;
}

int verify_command() {
  bool ok = true;
  for (const auto& r : bemloc::run_acceptance(&std::cerr)) {
    std::cout << bemloc::format_result(r) << std::endl;
    ok = ok && r.passed;
  }
  return ok ? kPass : kRateFailure;
}

// Replaces "--config FILE" by the file's key=value items as "--key=value"
// arguments placed before the remaining ones, so command-line flags win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::vector<std::string> from_file;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + i);
    } else {
      continue;
    }
    for (const auto& item : CLI::ConfigINI().from_file(path)) {
      if (item.name == "++" || item.name == "--") continue;
      std::string value;
      for (const auto& v : item.inputs) value += (value.empty() ? "" : " ") + v;
      from_file.push_back("--" + item.name + "=" + value);
    }
    break;
  }
  auto cmd = std::find(args.begin(), args.end(), "run");
  if (cmd != args.end()) args.insert(cmd + 1, from_file.begin(), from_file.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Galerkin boundary element convergence experiments on polygons"};
  app.require_subcommand(1);

  RunOptions ro;
  auto* run = app.add_subcommand("run", "run a convergence experiment and write CSV");
  std::string config_path;
  run->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  run->add_option("--config", config_path, "key=value file mirroring the flags");
  run->add_option("--geometry", ro.geometry, "lshape, zshape, square or file:PATH")->capture_default_str();
  run->add_option("--equation", ro.equation, "symm or hypsing")->capture_default_str();
  run->add_option("--alpha", ro.alpha, "exponent of r^alpha cos(alpha theta), e.g. 1/3")->capture_default_str();
  run->add_option("--levels", ro.levels, "number of refinement levels (>= 3)")->capture_default_str();
  run->add_option("--region-dist", ro.region_dist, "local region: distance from the corner as a fraction of diam")
      ->capture_default_str();
  run->add_option("--eoc-window", ro.eoc_window, "levels used in the rate fit")->capture_default_str();
  run->add_option("--refine-local", ro.refine_local, "projection refinement of the local H^-1/2 norm")
      ->capture_default_str();
  run->add_option("--per-edge", ro.per_edge, "coarse elements per polygon edge")->capture_default_str();
  run->add_flag("--no-negative-norm", ro.no_negative_norm, "skip the local H^-1/2 norm");
  run->add_flag("--global-l2", ro.global_l2, "also report the global L2 error (alpha > 1/2 only)");
  run->add_option("--csv", ro.csv, "output CSV path")->required();
  run->add_option("--plot", ro.plot, "output plot data path");
  run->add_option("--threads", ro.threads, "worker threads (default: OpenMP default)");

  std::string pgeom = "lshape";
  std::string palpha;
  auto* predict = app.add_subcommand("predict", "print predicted convergence rates");
  predict->add_option("--geometry", pgeom, "lshape, zshape, square or file:PATH")->capture_default_str();
  predict->add_option("--alpha", palpha, "solution exponent")->required();

  auto* verify = app.add_subcommand("verify", "run the acceptance suite");

  try {
    std::vector<std::string> args = expand_config({argv + 1, argv + argc});
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::FileError& e) {
    std::cerr << e.what() << '\n';
    return kInputError;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }

  try {
    if (*run) return run_command(ro);
    if (*predict) return predict_command(pgeom, palpha);
    if (*verify) return verify_command();
  } catch (const bemloc::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const bemloc::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kInputError;
}
