#pragma once

#include "algnn/shift_operator.hpp"
#include "algnn/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace algnn {

enum class ShiftSpecType {
  Er,             // er:p:variant  (edge probability, seeded per trial)
  Path,           // path:variant
  Ring,           // ring:variant
  Complete,       // complete:variant
  RandomSym,      // random       (symmetrized normals, unit norm)
  GraphonConst,   // graphon-const:c
  GraphonProduct, // graphon-product   W(u,v) = u*v
  GraphonMin,     // graphon-min       W(u,v) = min(u,v)
  File,           // file:PATH    (matrix file, fixed dimension)
  Cyclic,         // cyclic       (norm checks only; no spectrum services)
};

/// One member shape of the shift family; dimension supplied per trial.
struct ShiftSpec {
  ShiftSpecType type = ShiftSpecType::RandomSym;
  double p = 0.5;                                  // Er edge probability
  GraphVariant variant = GraphVariant::Adjacency;  // graph kinds
  double c = 1.0;                                  // GraphonConst level
  std::string path;                                // File source
  std::string raw;                                 // original spec text
};

ShiftSpec parse_shift_spec(const std::string& text);

// Instantiate a family member at dimension n; `seed` only matters for the
// randomized kinds (er, random).
ShiftOperator build_shift(const ShiftSpec& spec, int n, std::uint64_t seed);

struct ExperimentConfig {
  std::string experiment;  // filter-stability | layer-stability |
                           // network-stability | response-plot | sweep
  int trials = 0;          // 0 = per-experiment default (200 filter, 100 stack)
  std::uint64_t seed = 42;
  int jobs = 0;  // 0 = hardware concurrency
  bool timestamp = true;
  std::string out_dir = ".";

  // [shifts]
  std::vector<ShiftSpec> kinds;
  std::vector<int> sizes;

  // [filter]
  std::string filter_mode = "random";  // random | coefficients | file
  std::vector<int> degrees;
  std::vector<double> coefficients;
  std::string filter_file;

  // [perturbation]
  double eps_lo = 0.0, eps_hi = 0.01;
  double t1_lo = 0.0, t1_hi = 0.05;
  std::string t1_mode = "mixed";  // random | commuting | scalar | mixed
  bool symmetrize = false;

  // [layer] (also governs network layers)
  std::string nonlinearity = "mixed";  // relu | abs | tanh | leaky-relu:s | mixed
  std::string pooling = "halve";       // halve | identity
  int signals = 20;

  // [network]
  std::vector<int> depths;

  // [sweep]
  std::string sweep_parameter;  // epsilon | t1_norm | depth | degree
  std::vector<double> sweep_values;
  std::string sweep_experiment = "filter-stability";

  // [response]
  std::string response_preset = "dilation-contrast";
  double response_center = 0.8;
  double response_width = 0.10;
  double response_sigma = 0.6;
  int response_degree = 12;
  int response_samples = 129;
  double response_l1_max = 0.7;

  static ExperimentConfig defaults();
  // Parse the config file over the defaults; unknown sections/keys and
  // malformed values are hard errors.
  static ExperimentConfig load(const std::string& path);
  void validate() const;

  int resolved_trials() const;
};

// Split "a, b, c" on commas, trimming whitespace; empty items rejected.
std::vector<std::string> split_list(const std::string& text);

}  // namespace algnn
