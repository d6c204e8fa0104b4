// Command-line front end: utility subcommands around the library plus the
// config-driven verification experiments.
#include "algnn/config.hpp"
#include "algnn/filter_class.hpp"
#include "algnn/harness.hpp"
#include "algnn/matrix_io.hpp"
#include "algnn/network.hpp"
#include "algnn/perturbation.hpp"
#include "algnn/polynomial_filter.hpp"
#include "algnn/types.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace algnn;

struct CommonFlags {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> jobs;
  bool no_timestamp = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "experiment config file");
  cmd->add_option("--out", f.out, "output directory (default: current)");
  cmd->add_option("--seed", f.seed, "base RNG seed");
  cmd->add_option("--trials", f.trials, "override the trial count");
  cmd->add_option("--jobs", f.jobs, "worker pool size (default: all processors)");
  cmd->add_flag("--no-timestamp", f.no_timestamp,
                "suppress the generated-at header line in CSV output");
}

// Load config (or defaults), pin the experiment kind, apply flag overrides.
ExperimentConfig make_config(const CommonFlags& f, const std::string& experiment) {
  ExperimentConfig cfg =
      f.config.empty() ? ExperimentConfig::defaults() : ExperimentConfig::load(f.config);
  if (!cfg.experiment.empty() && cfg.experiment != experiment)
    throw ConfigError("config file requests experiment '" + cfg.experiment +
                      "' but this subcommand runs '" + experiment + "'");
  cfg.experiment = experiment;
  if (!f.out.empty()) cfg.out_dir = f.out;
  if (f.seed) cfg.seed = *f.seed;
  if (f.trials) cfg.trials = *f.trials;
  if (f.jobs) cfg.jobs = *f.jobs;
  if (f.no_timestamp) cfg.timestamp = false;
  return cfg;
}

std::vector<std::string> split_on(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  for (char ch : text) {
    if (ch == sep) {
      parts.push_back(item);
      item.clear();
    } else {
      item += ch;
    }
  }
  parts.push_back(item);
  return parts;
}

Interval parse_interval(const std::string& text) {
  const std::vector<std::string> parts = split_on(text, ':');
  if (parts.size() != 2)
    throw ConfigError("interval must be 'lo:hi', got '" + text + "'");
  try {
    const Interval iv{std::stod(parts[0]), std::stod(parts[1])};
    if (!(iv.lo < iv.hi)) throw ConfigError("interval is empty: '" + text + "'");
    return iv;
  } catch (const std::invalid_argument&) {
    throw ConfigError("bad interval '" + text + "'");
  }
}

// Shared source resolution: an explicit matrix file, or a generator kind at
// dimension n.
struct ShiftSource {
  std::string file;
  std::string kind = "er:0.5:adjacency";
  int n = 0;
};

void add_shift_source(CLI::App* cmd, ShiftSource& src) {
  cmd->add_option("--shift-file", src.file, "matrix file holding the shift operator");
  cmd->add_option("--kind", src.kind,
                  "generator spec (er:p[:variant], path[:variant], ring, complete, "
                  "random, graphon-const:c, graphon-product, graphon-min, cyclic, "
                  "file:PATH)");
  cmd->add_option("--n", src.n, "dimension for generated shifts");
}

ShiftOperator resolve_shift(const ShiftSource& src, std::uint64_t seed) {
  if (!src.file.empty()) return ShiftOperator(read_matrix_file(src.file));
  if (src.n <= 0)
    throw ConfigError("generated shifts need --n >= 1 (or pass --shift-file)");
  return build_shift(parse_shift_spec(src.kind), src.n, seed);
}

int cmd_gen_shift(const CommonFlags& f, const ShiftSource& src, const std::string& name) {
  const std::uint64_t seed = f.seed ? *f.seed : 42;
  const ShiftOperator s = resolve_shift(src, seed);
  std::filesystem::create_directories(f.out);
  const std::filesystem::path path = std::filesystem::path(f.out) / name;
  write_matrix_file(path.string(), s.matrix());
  std::cout << "wrote " << path.string() << "\n";
  std::cout << "n = " << s.dim() << "\n";
  std::cout << "norm = " << format_double(s.norm()) << "\n";
  if (s.symmetric()) {
    const Interval iv = spectral_interval(s);
    std::cout << "interval = [" << format_double(iv.lo) << ", " << format_double(iv.hi)
              << "]\n";
  }
  return 0;
}

int cmd_design_filter(const CommonFlags& f, const std::string& target_spec, int degree,
                      int samples, const std::string& interval_spec,
                      std::optional<double> l0_max, std::optional<double> l1_max,
                      const std::string& name) {
  const Interval iv = parse_interval(interval_spec);
  require(samples >= 2, "need at least 2 target samples");

  const std::vector<std::string> parts = split_on(target_spec, ':');
  std::function<double(double)> target;
  if (parts[0] == "bump" && parts.size() == 3) {
    const double c = std::stod(parts[1]), w = std::stod(parts[2]);
    require(w > 0.0, "bump width must be positive");
    target = [c, w](double lam) { return std::exp(-(lam - c) * (lam - c) / (2 * w * w)); };
  } else if (parts[0] == "lowpass" && parts.size() == 2) {
    const double sg = std::stod(parts[1]);
    require(sg > 0.0, "lowpass sigma must be positive");
    target = [sg](double lam) { return std::exp(-lam * lam / (2 * sg * sg)); };
  } else {
    throw ConfigError("target must be 'bump:center:width' or 'lowpass:sigma', got '" +
                      target_spec + "'");
  }

  std::vector<std::pair<double, double>> points;
  for (int k = 0; k < samples; ++k) {
    const double lam = iv.lo + (iv.hi - iv.lo) * k / (samples - 1);
    points.emplace_back(lam, target(lam));
  }
  DesignConstraints constraints;
  constraints.l0_max = l0_max;
  constraints.l1_max = l1_max;
  const DesignResult result = design_filter(points, degree, constraints, iv);

  std::filesystem::create_directories(f.out);
  const std::filesystem::path path = std::filesystem::path(f.out) / name;
  write_filter_file(path.string(), result.filter.coefficients());
  std::cout << "wrote " << path.string() << "\n";
  std::cout << "l0 = " << format_double(result.certificate.l0) << "\n";
  std::cout << "l1 = " << format_double(result.certificate.l1) << "\n";
  std::cout << "scaling_iterations = " << result.scaling_iterations << "\n";
  std::cout << "constraints_met = " << (result.constraints_met ? 1 : 0) << "\n";
  return result.constraints_met ? 0 : 2;
}

int cmd_certify(const CommonFlags& f, const std::string& filter_path,
                const std::string& interval_spec, const ShiftSource& src, double margin) {
  const PolynomialFilter p(read_filter_file(filter_path));
  Interval iv{};
  if (!interval_spec.empty()) {
    iv = parse_interval(interval_spec);
  } else {
    const std::uint64_t seed = f.seed ? *f.seed : 42;
    iv = spectral_interval(resolve_shift(src, seed), margin);
  }
  const FilterClassCertificate cert = certify_class(p, iv);
  std::cout << "degree = " << p.degree() << "\n";
  std::cout << "interval = [" << format_double(iv.lo) << ", " << format_double(iv.hi)
            << "]\n";
  std::cout << "l0 = " << format_double(cert.l0) << "\n";
  std::cout << "l1 = " << format_double(cert.l1) << "\n";
  return 0;
}

int cmd_perturb(const CommonFlags& f, const ShiftSource& src, double epsilon,
                double t1_norm, const std::string& mode, bool symmetrize,
                const std::string& name) {
  const std::uint64_t seed = f.seed ? *f.seed : 42;
  const ShiftOperator s = resolve_shift(src, seed);

  Matrix t1;
  if (t1_norm == 0.0) {
    t1 = Matrix::Zero(s.dim(), s.dim());
  } else if (mode == "commuting") {
    t1 = make_commuting_t1(s, t1_norm, mix_seed(seed, 7));
  } else if (mode == "scalar") {
    t1 = t1_norm * Matrix::Identity(s.dim(), s.dim());
  } else if (mode == "random") {
    t1 = make_random_t1(s.dim(), t1_norm, mix_seed(seed, 7));
  } else {
    throw ConfigError("t1 mode must be random, commuting, or scalar; got '" + mode + "'");
  }
  const PerturbationModel model(epsilon, t1);

  std::filesystem::create_directories(f.out);
  const std::filesystem::path path = std::filesystem::path(f.out) / name;
  write_matrix_file(path.string(), perturbed_shift(s, model, symmetrize).matrix());
  std::cout << "wrote " << path.string() << "\n";
  std::cout << "epsilon = " << format_double(epsilon) << "\n";
  std::cout << "t1_norm = " << format_double(model.t1_norm()) << "\n";
  std::cout << "perturbation_norm = " << format_double(perturbation_norm(s, model, symmetrize))
            << "\n";
  std::cout << "frechet_norm = " << format_double(perturbation_frechet_norm(model)) << "\n";
  if (s.symmetric() && model.t1_norm() > 0.0) {
    const CommutationAnalysis an = commutation_factor(s, t1);
    std::cout << "delta = " << format_double(an.delta) << "\n";
    if (an.degenerate_pairing) std::cout << "degenerate_pairing = 1\n";
  }
  return 0;
}

int dispatch(const ExperimentConfig& cfg) { return run_experiment(cfg); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"algebraic filter and network stability toolkit"};
  app.require_subcommand(1);

  // gen-shift
  CommonFlags gen_flags;
  ShiftSource gen_src;
  std::string gen_name = "shift.txt";
  CLI::App* gen = app.add_subcommand("gen-shift", "generate a shift operator matrix");
  add_common(gen, gen_flags);
  add_shift_source(gen, gen_src);
  gen->add_option("--name", gen_name, "output file name (default shift.txt)");

  // design-filter
  CommonFlags design_flags;
  std::string design_target, design_interval = "-1.05:1.05", design_name = "filter.txt";
  int design_degree = 12, design_samples = 129;
  std::optional<double> design_l0_max, design_l1_max;
  CLI::App* design =
      app.add_subcommand("design-filter", "least-squares filter design with certificates");
  add_common(design, design_flags);
  design->add_option("--target", design_target,
                     "'bump:center:width' or 'lowpass:sigma'")
      ->required();
  design->add_option("--degree", design_degree, "polynomial degree (default 12)");
  design->add_option("--samples", design_samples, "target sample count (default 129)");
  design->add_option("--interval", design_interval, "design interval 'lo:hi'");
  design->add_option("--l0-max", design_l0_max, "Lipschitz constraint");
  design->add_option("--l1-max", design_l1_max, "integral-Lipschitz constraint");
  design->add_option("--name", design_name, "output file name (default filter.txt)");

  // certify
  CommonFlags cert_flags;
  ShiftSource cert_src;
  std::string cert_filter, cert_interval;
  double cert_margin = 0.05;
  CLI::App* cert = app.add_subcommand("certify", "certify filter-class constants");
  add_common(cert, cert_flags);
  cert->add_option("--filter", cert_filter, "filter coefficient file")->required();
  cert->add_option("--interval", cert_interval, "explicit interval 'lo:hi'");
  add_shift_source(cert, cert_src);
  cert->add_option("--margin", cert_margin, "spectral margin when deriving from a shift");

  // perturb
  CommonFlags pert_flags;
  ShiftSource pert_src;
  std::string pert_mode = "random", pert_name = "perturbed.txt";
  double pert_epsilon = 0.0, pert_t1 = 0.05;
  bool pert_symmetrize = false;
  CLI::App* pert = app.add_subcommand("perturb", "apply a perturbation model to a shift");
  add_common(pert, pert_flags);
  add_shift_source(pert, pert_src);
  pert->add_option("--epsilon", pert_epsilon, "absolute term coefficient");
  pert->add_option("--t1-norm", pert_t1, "relative term norm, in [0, 1)");
  pert->add_option("--t1-mode", pert_mode, "random | commuting | scalar");
  pert->add_flag("--symmetrize", pert_symmetrize, "symmetrize the relative term");
  pert->add_option("--name", pert_name, "output file name (default perturbed.txt)");

  // verify-*
  CommonFlags vf_flags, vl_flags, vn_flags;
  CLI::App* vf = app.add_subcommand("verify-filter", "filter-level stability experiment");
  add_common(vf, vf_flags);
  CLI::App* vl = app.add_subcommand("verify-layer", "single-layer stability experiment");
  add_common(vl, vl_flags);
  CLI::App* vn = app.add_subcommand("verify-network", "deep-network stability experiment");
  add_common(vn, vn_flags);

  // response
  CommonFlags resp_flags;
  std::string resp_preset = "dilation-contrast";
  CLI::App* resp =
      app.add_subcommand("response", "render the stability vs selectivity figure");
  add_common(resp, resp_flags);
  resp->add_option("--preset", resp_preset, "figure preset (dilation-contrast)");

  // sweep
  CommonFlags sweep_flags;
  std::string sweep_param, sweep_values, sweep_exp;
  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep over an experiment");
  add_common(sweep, sweep_flags);
  sweep->add_option("--parameter", sweep_param, "epsilon | t1_norm | depth | degree");
  sweep->add_option("--values", sweep_values, "comma-separated sweep values");
  sweep->add_option("--experiment", sweep_exp,
                    "experiment to repeat (default filter-stability)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 3;  // flag errors are config errors
  }

  try {
    if (gen->parsed()) return cmd_gen_shift(gen_flags, gen_src, gen_name);
    if (design->parsed())
      return cmd_design_filter(design_flags, design_target, design_degree, design_samples,
                               design_interval, design_l0_max, design_l1_max, design_name);
    if (cert->parsed())
      return cmd_certify(cert_flags, cert_filter, cert_interval, cert_src, cert_margin);
    if (pert->parsed())
      return cmd_perturb(pert_flags, pert_src, pert_epsilon, pert_t1, pert_mode,
                         pert_symmetrize, pert_name);
    if (vf->parsed()) return dispatch(make_config(vf_flags, "filter-stability"));
    if (vl->parsed()) return dispatch(make_config(vl_flags, "layer-stability"));
    if (vn->parsed()) return dispatch(make_config(vn_flags, "network-stability"));
    if (resp->parsed()) {
      ExperimentConfig cfg = make_config(resp_flags, "response-plot");
      cfg.response_preset = resp_preset;
      return dispatch(cfg);
    }
    if (sweep->parsed()) {
      ExperimentConfig cfg = make_config(sweep_flags, "sweep");
      if (!sweep_param.empty()) cfg.sweep_parameter = sweep_param;
      if (!sweep_exp.empty()) cfg.sweep_experiment = sweep_exp;
      if (!sweep_values.empty()) {
        cfg.sweep_values.clear();
        for (const std::string& item : split_list(sweep_values))
          cfg.sweep_values.push_back(std::stod(item));
      }
      return dispatch(cfg);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
