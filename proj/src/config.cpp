#include "algnn/config.hpp"

#include "algnn/matrix_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace algnn {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double to_double(const std::string& v, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(x))
      throw ConfigError(what + ": bad number '" + v + "'");
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError(what + ": bad number '" + v + "'");
  }
}

int to_int(const std::string& v, const std::string& what) {
  const double x = to_double(v, what);
  const int i = static_cast<int>(x);
  if (static_cast<double>(i) != x) throw ConfigError(what + ": expected integer, got '" + v + "'");
  return i;
}

std::uint64_t to_u64(const std::string& v, const std::string& what) {
  try {
    std::size_t pos = 0;
    const std::uint64_t x = std::stoull(v, &pos);
    if (pos != v.size()) throw ConfigError(what + ": bad unsigned integer '" + v + "'");
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError(what + ": bad unsigned integer '" + v + "'");
  }
}

bool to_bool(const std::string& v, const std::string& what) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError(what + ": expected true or false, got '" + v + "'");
}

// "lo:hi" or a single value meaning [v, v].
std::pair<double, double> to_range(const std::string& v, const std::string& what) {
  const std::size_t colon = v.find(':');
  if (colon == std::string::npos) {
    const double x = to_double(v, what);
    return {x, x};
  }
  const double lo = to_double(trim(v.substr(0, colon)), what);
  const double hi = to_double(trim(v.substr(colon + 1)), what);
  if (lo > hi) throw ConfigError(what + ": range lower bound exceeds upper bound");
  return {lo, hi};
}

GraphVariant to_variant(const std::string& v, const std::string& what) {
  if (v == "adjacency") return GraphVariant::Adjacency;
  if (v == "laplacian") return GraphVariant::Laplacian;
  if (v == "normalized") return GraphVariant::NormalizedAdjacency;
  throw ConfigError(what + ": unknown graph variant '" + v +
                    "' (want adjacency, laplacian or normalized)");
}

std::vector<std::string> split_colon(const std::string& s) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = s.find(':', start);
    if (colon == std::string::npos) {
      parts.push_back(s.substr(start));
      break;
    }
    parts.push_back(s.substr(start, colon - start));
    start = colon + 1;
  }
  return parts;
}

std::vector<Edge> path_edges(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
  return edges;
}

}  // namespace

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("empty item in list '" + text + "'");
    items.push_back(item);
  }
  if (items.empty()) throw ConfigError("empty list");
  return items;
}

ShiftSpec parse_shift_spec(const std::string& text) {
  ShiftSpec spec;
  spec.raw = text;
  const std::vector<std::string> parts = split_colon(text);
  const std::string& head = parts[0];
  const std::string what = "shift spec '" + text + "'";

  auto want = [&](std::size_t lo, std::size_t hi) {
    if (parts.size() < lo || parts.size() > hi)
      throw ConfigError(what + ": wrong number of fields");
  };

  if (head == "er") {
    want(2, 3);
    spec.type = ShiftSpecType::Er;
    spec.p = to_double(parts[1], what);
    if (spec.p <= 0.0 || spec.p > 1.0)
      throw ConfigError(what + ": edge probability must lie in (0, 1]");
    spec.variant = parts.size() == 3 ? to_variant(parts[2], what) : GraphVariant::Adjacency;
  } else if (head == "path" || head == "ring" || head == "complete") {
    want(1, 2);
    spec.type = head == "path"   ? ShiftSpecType::Path
                : head == "ring" ? ShiftSpecType::Ring
                                 : ShiftSpecType::Complete;
    spec.variant = parts.size() == 2 ? to_variant(parts[1], what) : GraphVariant::Adjacency;
  } else if (head == "random") {
    want(1, 1);
    spec.type = ShiftSpecType::RandomSym;
  } else if (head == "graphon-const") {
    want(2, 2);
    spec.type = ShiftSpecType::GraphonConst;
    spec.c = to_double(parts[1], what);
    if (spec.c < 0.0 || spec.c > 1.0)
      throw ConfigError(what + ": kernel level must lie in [0, 1]");
  } else if (head == "graphon-product") {
    want(1, 1);
    spec.type = ShiftSpecType::GraphonProduct;
  } else if (head == "graphon-min") {
    want(1, 1);
    spec.type = ShiftSpecType::GraphonMin;
  } else if (head == "file") {
    if (parts.size() < 2) throw ConfigError(what + ": missing path");
    spec.type = ShiftSpecType::File;
    spec.path = text.substr(5);  // keep any further colons in the path
  } else if (head == "cyclic") {
    want(1, 1);
    spec.type = ShiftSpecType::Cyclic;
  } else {
    throw ConfigError(what + ": unknown kind '" + head + "'");
  }
  return spec;
}

ShiftOperator build_shift(const ShiftSpec& spec, int n, std::uint64_t seed) {
  require(n >= 1, "build_shift: dimension must be positive");
  switch (spec.type) {
    case ShiftSpecType::Er: {
      std::mt19937_64 rng(seed);
      std::bernoulli_distribution coin(spec.p);
      // An empty draw cannot be normalized (and gives a degenerate family
      // member anyway); redraw, which terminates a.s. for p > 0.
      for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<Edge> edges;
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j)
            if (coin(rng)) edges.push_back({i, j, 1.0});
        if (edges.empty() && n > 1) continue;
        if (edges.empty()) break;
        return build_graph_shift(edges, n, spec.variant);
      }
      throw NumericalError("build_shift: could not draw a nonempty graph for " + spec.raw);
    }
    case ShiftSpecType::Path:
      return build_graph_shift(path_edges(n), n, spec.variant);
    case ShiftSpecType::Ring: {
      std::vector<Edge> edges = path_edges(n);
      if (n >= 3) edges.push_back({n - 1, 0, 1.0});
      return build_graph_shift(edges, n, spec.variant);
    }
    case ShiftSpecType::Complete: {
      std::vector<Edge> edges;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j, 1.0});
      return build_graph_shift(edges, n, spec.variant);
    }
    case ShiftSpecType::RandomSym: {
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> gauss(0.0, 1.0);
      Matrix g(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) g(i, j) = gauss(rng);
      Matrix m = 0.5 * (g + g.transpose());
      const double norm = operator_norm(m);
      if (norm == 0.0) return ShiftOperator(Matrix::Identity(n, n), ShiftKind::Custom);
      return ShiftOperator(m / norm, ShiftKind::Custom);
    }
    case ShiftSpecType::GraphonConst: {
      const double c = spec.c;
      return build_graphon_shift([c](double, double) { return c; }, n);
    }
    case ShiftSpecType::GraphonProduct:
      return build_graphon_shift([](double u, double v) { return u * v; }, n);
    case ShiftSpecType::GraphonMin:
      return build_graphon_shift([](double u, double v) { return std::min(u, v); }, n);
    case ShiftSpecType::File: {
      Matrix m = read_matrix_file(spec.path);
      require(m.rows() == n,
              "build_shift: matrix in " + spec.path + " has dimension " +
                  std::to_string(m.rows()) + ", expected " + std::to_string(n));
      return ShiftOperator(std::move(m), ShiftKind::Custom);
    }
    case ShiftSpecType::Cyclic:
      return build_cyclic_shift(n);
  }
  throw ConfigError("build_shift: unknown spec type");
}

ExperimentConfig ExperimentConfig::defaults() {
  ExperimentConfig cfg;
  cfg.kinds = {parse_shift_spec("er:0.5:normalized"), parse_shift_spec("random")};
  cfg.sizes = {8, 16, 32};
  cfg.degrees = {2, 3, 4, 5, 6, 7, 8};
  cfg.depths = {2, 3, 4};
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);

  ExperimentConfig cfg = defaults();
  std::string section;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;

  auto fail = [&](const std::string& msg) {
    throw ConfigError(path + ":" + std::to_string(lineno) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail("malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "shifts" && section != "filter" && section != "perturbation" &&
          section != "layer" && section != "network" && section != "sweep" &&
          section != "response")
        fail("unknown section [" + section + "]");
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail("empty key");
    if (value.empty()) fail("empty value for key '" + key + "'");
    const std::string qual = section.empty() ? key : section + "." + key;
    if (!seen.insert(qual).second) fail("duplicate key '" + qual + "'");

    try {
      if (section.empty()) {
        if (key == "experiment")
          cfg.experiment = value;
        else if (key == "trials")
          cfg.trials = to_int(value, qual);
        else if (key == "seed")
          cfg.seed = to_u64(value, qual);
        else if (key == "jobs")
          cfg.jobs = to_int(value, qual);
        else if (key == "timestamp")
          cfg.timestamp = to_bool(value, qual);
        else if (key == "out")
          cfg.out_dir = value;
        else
          fail("unknown key '" + key + "'");
      } else if (section == "shifts") {
        if (key == "kinds") {
          cfg.kinds.clear();
          for (const std::string& item : split_list(value))
            cfg.kinds.push_back(parse_shift_spec(item));
        } else if (key == "sizes") {
          cfg.sizes.clear();
          for (const std::string& item : split_list(value))
            cfg.sizes.push_back(to_int(item, qual));
        } else {
          fail("unknown key '" + qual + "'");
        }
      } else if (section == "filter") {
        if (key == "mode")
          cfg.filter_mode = value;
        else if (key == "degrees") {
          cfg.degrees.clear();
          for (const std::string& item : split_list(value))
            cfg.degrees.push_back(to_int(item, qual));
        } else if (key == "coefficients") {
          cfg.coefficients.clear();
          for (const std::string& item : split_list(value))
            cfg.coefficients.push_back(to_double(item, qual));
        } else if (key == "file")
          cfg.filter_file = value;
        else
          fail("unknown key '" + qual + "'");
      } else if (section == "perturbation") {
        if (key == "epsilon")
          std::tie(cfg.eps_lo, cfg.eps_hi) = to_range(value, qual);
        else if (key == "t1_norm")
          std::tie(cfg.t1_lo, cfg.t1_hi) = to_range(value, qual);
        else if (key == "t1_mode")
          cfg.t1_mode = value;
        else if (key == "symmetrize")
          cfg.symmetrize = to_bool(value, qual);
        else
          fail("unknown key '" + qual + "'");
      } else if (section == "layer") {
        if (key == "nonlinearity")
          cfg.nonlinearity = value;
        else if (key == "pooling")
          cfg.pooling = value;
        else if (key == "signals")
          cfg.signals = to_int(value, qual);
        else
          fail("unknown key '" + qual + "'");
      } else if (section == "network") {
        if (key == "depths") {
          cfg.depths.clear();
          for (const std::string& item : split_list(value))
            cfg.depths.push_back(to_int(item, qual));
        } else {
          fail("unknown key '" + qual + "'");
        }
      } else if (section == "sweep") {
        if (key == "parameter")
          cfg.sweep_parameter = value;
        else if (key == "values") {
          cfg.sweep_values.clear();
          for (const std::string& item : split_list(value))
            cfg.sweep_values.push_back(to_double(item, qual));
        } else if (key == "experiment")
          cfg.sweep_experiment = value;
        else
          fail("unknown key '" + qual + "'");
      } else if (section == "response") {
        if (key == "preset")
          cfg.response_preset = value;
        else if (key == "center")
          cfg.response_center = to_double(value, qual);
        else if (key == "width")
          cfg.response_width = to_double(value, qual);
        else if (key == "sigma")
          cfg.response_sigma = to_double(value, qual);
        else if (key == "degree")
          cfg.response_degree = to_int(value, qual);
        else if (key == "samples")
          cfg.response_samples = to_int(value, qual);
        else if (key == "l1_max")
          cfg.response_l1_max = to_double(value, qual);
        else
          fail("unknown key '" + qual + "'");
      }
    } catch (const ConfigError& e) {
      // re-raise with file/line context unless already added
      const std::string msg = e.what();
      if (msg.rfind(path + ":", 0) == 0) throw;
      fail(msg);
    }
  }
  return cfg;
}

int ExperimentConfig::resolved_trials() const {
  if (trials > 0) return trials;
  const std::string& kind = experiment == "sweep" ? sweep_experiment : experiment;
  return kind == "filter-stability" ? 200 : 100;
}

void ExperimentConfig::validate() const {
  static const std::set<std::string> kExperiments = {
      "filter-stability", "layer-stability", "network-stability", "response-plot",
      "sweep"};
  if (!kExperiments.count(experiment))
    throw ConfigError("unknown experiment '" + experiment + "'");
  if (trials < 0) throw ConfigError("trials must be nonnegative");
  if (jobs < 0) throw ConfigError("jobs must be nonnegative");

  const bool is_verify = experiment == "filter-stability" ||
                         experiment == "layer-stability" ||
                         experiment == "network-stability";
  const bool sweep_verify = experiment == "sweep";

  if (kinds.empty()) throw ConfigError("[shifts] kinds must be nonempty");
  bool any_file = false;
  for (const ShiftSpec& spec : kinds) {
    if (spec.type == ShiftSpecType::File) {
      any_file = true;
      if (!std::filesystem::exists(spec.path))
        throw ConfigError("shift file does not exist: " + spec.path);
    }
    if ((is_verify || sweep_verify) && spec.type == ShiftSpecType::Cyclic)
      throw ConfigError(
          "cyclic shifts have no real spectral services and cannot enter "
          "stability experiments; use a symmetric kind");
  }
  if (any_file) {
    for (const ShiftSpec& spec : kinds)
      if (spec.type != ShiftSpecType::File)
        throw ConfigError("file shifts cannot mix with generated kinds");
  }
  // the trial runners index sizes even for file kinds (whose dimension the
  // matching entry must equal)
  if (sizes.empty()) throw ConfigError("[shifts] sizes must be nonempty");
  for (int n : sizes)
    if (n < 1) throw ConfigError("[shifts] sizes entries must be positive");

  if (filter_mode == "random") {
    if (degrees.empty()) throw ConfigError("[filter] degrees must be nonempty");
    for (int k : degrees)
      if (k < 0 || k > 32)
        throw ConfigError("[filter] degrees must lie in [0, 32]");
  } else if (filter_mode == "coefficients") {
    if (coefficients.empty())
      throw ConfigError("[filter] coefficients required for mode=coefficients");
    if (coefficients.size() > 33)
      throw ConfigError("[filter] at most 33 coefficients (degree 32)");
  } else if (filter_mode == "file") {
    if (filter_file.empty()) throw ConfigError("[filter] file required for mode=file");
    if (!std::filesystem::exists(filter_file))
      throw ConfigError("filter file does not exist: " + filter_file);
  } else {
    throw ConfigError("[filter] unknown mode '" + filter_mode + "'");
  }

  if (eps_lo < 0.0 || eps_lo > eps_hi)
    throw ConfigError("[perturbation] epsilon range must satisfy 0 <= lo <= hi");
  if (t1_lo < 0.0 || t1_lo > t1_hi || t1_hi >= 1.0)
    throw ConfigError("[perturbation] t1_norm range must satisfy 0 <= lo <= hi < 1");
  if (t1_mode != "random" && t1_mode != "commuting" && t1_mode != "scalar" &&
      t1_mode != "mixed")
    throw ConfigError("[perturbation] unknown t1_mode '" + t1_mode + "'");

  if (nonlinearity != "relu" && nonlinearity != "abs" && nonlinearity != "tanh" &&
      nonlinearity != "mixed" && nonlinearity.rfind("leaky-relu:", 0) != 0)
    throw ConfigError("[layer] unknown nonlinearity '" + nonlinearity + "'");
  if (nonlinearity.rfind("leaky-relu:", 0) == 0) {
    const double slope = to_double(nonlinearity.substr(11), "[layer] nonlinearity");
    if (slope < 0.0) throw ConfigError("[layer] leaky-relu slope must be nonnegative");
  }
  if (pooling != "halve" && pooling != "identity")
    throw ConfigError("[layer] unknown pooling '" + pooling + "'");
  if (signals < 1) throw ConfigError("[layer] signals must be at least 1");

  if (depths.empty()) throw ConfigError("[network] depths must be nonempty");
  for (int d : depths)
    if (d < 1 || d > 16) throw ConfigError("[network] depths must lie in [1, 16]");

  if (experiment == "sweep") {
    if (sweep_parameter != "epsilon" && sweep_parameter != "t1_norm" &&
        sweep_parameter != "depth" && sweep_parameter != "degree")
      throw ConfigError("[sweep] unknown parameter '" + sweep_parameter + "'");
    if (sweep_values.empty()) throw ConfigError("[sweep] values must be nonempty");
    if (sweep_experiment != "filter-stability" && sweep_experiment != "layer-stability" &&
        sweep_experiment != "network-stability")
      throw ConfigError("[sweep] experiment must be a stability kind");
    for (double v : sweep_values) {
      if (!std::isfinite(v)) throw ConfigError("[sweep] values must be finite");
      if ((sweep_parameter == "depth" || sweep_parameter == "degree") &&
          (v != std::floor(v) || v < (sweep_parameter == "depth" ? 1.0 : 0.0)))
        throw ConfigError("[sweep] " + sweep_parameter + " values must be integers");
      if ((sweep_parameter == "epsilon" && v < 0.0) ||
          (sweep_parameter == "t1_norm" && (v < 0.0 || v >= 1.0)))
        throw ConfigError("[sweep] value out of range for " + sweep_parameter);
    }
  }

  if (experiment == "response-plot") {
    if (response_preset != "dilation-contrast")
      throw ConfigError("[response] unknown preset '" + response_preset + "'");
    if (!(response_width > 0.0) || !(response_sigma > 0.0))
      throw ConfigError("[response] width and sigma must be positive");
    if (response_degree < 1 || response_degree > 32)
      throw ConfigError("[response] degree must lie in [1, 32]");
    if (response_samples < response_degree + 1)
      throw ConfigError("[response] need at least degree+1 samples");
    if (!(response_l1_max > 0.0))
      throw ConfigError("[response] l1_max must be positive");
    if (!std::isfinite(response_center))
      throw ConfigError("[response] center must be finite");
  }
}

}  // namespace algnn
