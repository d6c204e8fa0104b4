#include <doctest.h>

#include "algnn/config.hpp"
#include "algnn/matrix_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

using namespace algnn;

namespace {

namespace fs = std::filesystem;

// Scratch file under the system temp dir, removed on scope exit.
class TempFile {
 public:
  TempFile(const std::string& name, const std::string& contents)
      : path_(fs::temp_directory_path() / name) {
    std::ofstream out(path_);
    out << contents;
  }
  ~TempFile() { std::remove(path_.c_str()); }
  std::string path() const { return path_.string(); }

 private:
  fs::path path_;
};

// Message of the ConfigError thrown by loading `contents`; fails the test
// if nothing is thrown.
std::string load_error(const std::string& name, const std::string& contents) {
  TempFile file(name, contents);
  try {
    ExperimentConfig::load(file.path());
  } catch (const ConfigError& e) {
    return e.what();
  }
  FAIL("expected ConfigError loading: " << contents);
  return {};
}

std::string validate_error(const ExperimentConfig& cfg) {
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    return e.what();
  }
  FAIL("expected validate() to reject the config");
  return {};
}

ExperimentConfig base_config(const std::string& experiment) {
  ExperimentConfig cfg = ExperimentConfig::defaults();
  cfg.experiment = experiment;
  return cfg;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("defaults and per-experiment trial counts") {
  ExperimentConfig cfg = ExperimentConfig::defaults();
  CHECK(cfg.seed == 42);
  CHECK(cfg.trials == 0);
  CHECK(cfg.timestamp);
  CHECK(cfg.sizes == std::vector<int>{8, 16, 32});
  CHECK(cfg.degrees == std::vector<int>{2, 3, 4, 5, 6, 7, 8});
  CHECK(cfg.depths == std::vector<int>{2, 3, 4});
  REQUIRE(cfg.kinds.size() == 2);
  CHECK(cfg.kinds[0].type == ShiftSpecType::Er);
  CHECK(cfg.kinds[0].variant == GraphVariant::NormalizedAdjacency);
  CHECK(cfg.kinds[1].type == ShiftSpecType::RandomSym);

  cfg.experiment = "filter-stability";
  CHECK(cfg.resolved_trials() == 200);
  cfg.experiment = "layer-stability";
  CHECK(cfg.resolved_trials() == 100);
  cfg.experiment = "network-stability";
  CHECK(cfg.resolved_trials() == 100);
  cfg.experiment = "sweep";
  cfg.sweep_experiment = "filter-stability";
  CHECK(cfg.resolved_trials() == 200);
  cfg.trials = 37;
  CHECK(cfg.resolved_trials() == 37);

  ExperimentConfig ok = base_config("filter-stability");
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("shift spec grammar") {
  ShiftSpec er = parse_shift_spec("er:0.3:laplacian");
  CHECK(er.type == ShiftSpecType::Er);
  CHECK(er.p == 0.3);
  CHECK(er.variant == GraphVariant::Laplacian);
  CHECK(er.raw == "er:0.3:laplacian");
  CHECK(parse_shift_spec("er:0.5").variant == GraphVariant::Adjacency);

  CHECK(parse_shift_spec("path").type == ShiftSpecType::Path);
  CHECK(parse_shift_spec("ring:laplacian").variant == GraphVariant::Laplacian);
  CHECK(parse_shift_spec("complete:normalized").type == ShiftSpecType::Complete);
  CHECK(parse_shift_spec("random").type == ShiftSpecType::RandomSym);
  CHECK(parse_shift_spec("graphon-const:0.25").c == 0.25);
  CHECK(parse_shift_spec("graphon-product").type == ShiftSpecType::GraphonProduct);
  CHECK(parse_shift_spec("graphon-min").type == ShiftSpecType::GraphonMin);
  CHECK(parse_shift_spec("cyclic").type == ShiftSpecType::Cyclic);
  // everything after "file:" is the path, embedded colons included
  CHECK(parse_shift_spec("file:/tmp/a:b.txt").path == "/tmp/a:b.txt");

  CHECK_THROWS_AS(parse_shift_spec("er"), ConfigError);            // missing p
  CHECK_THROWS_AS(parse_shift_spec("er:0"), ConfigError);          // p out of range
  CHECK_THROWS_AS(parse_shift_spec("er:1.5"), ConfigError);
  CHECK_THROWS_AS(parse_shift_spec("er:0.5:foo"), ConfigError);    // bad variant
  CHECK_THROWS_AS(parse_shift_spec("random:extra"), ConfigError);
  CHECK_THROWS_AS(parse_shift_spec("graphon-const:1.5"), ConfigError);
  CHECK_THROWS_AS(parse_shift_spec("file"), ConfigError);          // missing path
  CHECK_THROWS_AS(parse_shift_spec("mystery"), ConfigError);
}

TEST_CASE("split_list trims and rejects empties") {
  CHECK(split_list("a, b ,c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_list("solo") == std::vector<std::string>{"solo"});
  CHECK_THROWS_AS(split_list("a,,b"), ConfigError);
  CHECK_THROWS_AS(split_list(""), ConfigError);
}

TEST_CASE("config file populates every section") {
  const std::string text =
      "# stability run\n"
      "experiment = filter-stability\n"
      "trials = 7\n"
      "seed = 123\n"
      "jobs = 2\n"
      "timestamp = false\n"
      "out = scratch\n"
      "\n"
      "[shifts]\n"
      "kinds = er:0.25:laplacian, path:normalized\n"
      "sizes = 4, 8\n"
      "\n"
      "[filter]\n"
      "mode = coefficients\n"
      "coefficients = 0.5, -1.0, 0.25\n"
      "\n"
      "[perturbation]\n"
      "epsilon = 0:0.01   # a range\n"
      "t1_norm = 0.003\n"
      "t1_mode = commuting\n"
      "symmetrize = true\n"
      "\n"
      "[layer]\n"
      "nonlinearity = leaky-relu:1.5\n"
      "pooling = identity\n"
      "signals = 5\n"
      "\n"
      "[network]\n"
      "depths = 1, 2\n"
      "\n"
      "[sweep]\n"
      "parameter = epsilon\n"
      "values = 0.001, 0.002\n"
      "experiment = layer-stability\n"
      "\n"
      "[response]\n"
      "preset = dilation-contrast\n"
      "center = 0.7\n"
      "width = 0.2\n"
      "sigma = 0.5\n"
      "degree = 10\n"
      "samples = 33\n"
      "l1_max = 0.4\n";
  TempFile file("algnn_full.ini", text);
  const ExperimentConfig cfg = ExperimentConfig::load(file.path());

  CHECK(cfg.experiment == "filter-stability");
  CHECK(cfg.trials == 7);
  CHECK(cfg.seed == 123);
  CHECK(cfg.jobs == 2);
  CHECK_FALSE(cfg.timestamp);
  CHECK(cfg.out_dir == "scratch");

  REQUIRE(cfg.kinds.size() == 2);
  CHECK(cfg.kinds[0].p == 0.25);
  CHECK(cfg.kinds[1].type == ShiftSpecType::Path);
  CHECK(cfg.kinds[1].variant == GraphVariant::NormalizedAdjacency);
  CHECK(cfg.sizes == std::vector<int>{4, 8});

  CHECK(cfg.filter_mode == "coefficients");
  CHECK(cfg.coefficients == std::vector<double>{0.5, -1.0, 0.25});

  CHECK(cfg.eps_lo == 0.0);
  CHECK(cfg.eps_hi == 0.01);
  CHECK(cfg.t1_lo == 0.003);  // single value means a point range
  CHECK(cfg.t1_hi == 0.003);
  CHECK(cfg.t1_mode == "commuting");
  CHECK(cfg.symmetrize);

  CHECK(cfg.nonlinearity == "leaky-relu:1.5");
  CHECK(cfg.pooling == "identity");
  CHECK(cfg.signals == 5);
  CHECK(cfg.depths == std::vector<int>{1, 2});

  CHECK(cfg.sweep_parameter == "epsilon");
  CHECK(cfg.sweep_values == std::vector<double>{0.001, 0.002});
  CHECK(cfg.sweep_experiment == "layer-stability");

  CHECK(cfg.response_center == 0.7);
  CHECK(cfg.response_width == 0.2);
  CHECK(cfg.response_sigma == 0.5);
  CHECK(cfg.response_degree == 10);
  CHECK(cfg.response_samples == 33);
  CHECK(cfg.response_l1_max == 0.4);

  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config file errors carry file and line") {
  CHECK(contains(load_error("algnn_e1.ini", "trials = 1\ntrials = 2\n"),
                 ":2: duplicate key 'trials'"));
  CHECK(contains(load_error("algnn_e2.ini", "bogus = 1\n"), ":1: unknown key 'bogus'"));
  CHECK(contains(load_error("algnn_e3.ini", "[nope]\n"), "unknown section [nope]"));
  CHECK(contains(load_error("algnn_e4.ini", "[filter]\nbogus = 1\n"),
                 "unknown key 'filter.bogus'"));
  CHECK(contains(load_error("algnn_e5.ini", "[shifts\n"), "malformed section header"));
  CHECK(contains(load_error("algnn_e6.ini", "hello\n"), "expected key = value"));
  CHECK(contains(load_error("algnn_e7.ini", "trials =\n"), "empty value"));
  CHECK(contains(load_error("algnn_e8.ini", "trials = abc\n"), "bad number 'abc'"));
  CHECK(contains(load_error("algnn_e9.ini", "trials = 1.5\n"), "expected integer"));
  CHECK(contains(load_error("algnn_e10.ini", "[perturbation]\nepsilon = 0.5:0.1\n"),
                 "lower bound exceeds upper bound"));
  CHECK(contains(load_error("algnn_e11.ini", "timestamp = maybe\n"),
                 "expected true or false"));
  // duplicate keys are namespaced by section
  const std::string two_sections =
      "[perturbation]\nepsilon = 0.01\nepsilon = 0.02\n";
  CHECK(contains(load_error("algnn_e12.ini", two_sections),
                 "duplicate key 'perturbation.epsilon'"));
  CHECK_THROWS_AS(ExperimentConfig::load("/nonexistent/algnn.ini"), ConfigError);
}

TEST_CASE("validate rejects out-of-contract settings") {
  CHECK(contains(validate_error(base_config("frobnicate")), "unknown experiment"));

  ExperimentConfig cfg = base_config("filter-stability");
  cfg.trials = -1;
  CHECK(contains(validate_error(cfg), "trials"));

  cfg = base_config("filter-stability");
  cfg.jobs = -2;
  CHECK(contains(validate_error(cfg), "jobs"));

  cfg = base_config("filter-stability");
  cfg.kinds.clear();
  CHECK(contains(validate_error(cfg), "kinds"));

  // cyclic shifts have no spectral certificates: banned from stability runs
  cfg = base_config("filter-stability");
  cfg.kinds = {parse_shift_spec("cyclic")};
  CHECK(contains(validate_error(cfg), "cyclic"));
  cfg.experiment = "response-plot";  // but fine where no certification happens
  CHECK_NOTHROW(cfg.validate());

  cfg = base_config("filter-stability");
  cfg.kinds = {parse_shift_spec("file:/nonexistent/shift.txt")};
  CHECK(contains(validate_error(cfg), "does not exist"));

  cfg = base_config("filter-stability");
  cfg.sizes.clear();
  CHECK(contains(validate_error(cfg), "sizes"));
  cfg.sizes = {0};
  CHECK(contains(validate_error(cfg), "positive"));

  cfg = base_config("filter-stability");
  cfg.degrees.clear();
  CHECK(contains(validate_error(cfg), "degrees"));
  cfg.degrees = {33};
  CHECK(contains(validate_error(cfg), "[0, 32]"));

  cfg = base_config("filter-stability");
  cfg.filter_mode = "coefficients";
  CHECK(contains(validate_error(cfg), "coefficients"));
  cfg.coefficients.assign(34, 0.1);
  CHECK(contains(validate_error(cfg), "at most 33"));

  cfg = base_config("filter-stability");
  cfg.filter_mode = "file";
  CHECK(contains(validate_error(cfg), "file"));
  cfg.filter_file = "/nonexistent/h.txt";
  CHECK(contains(validate_error(cfg), "does not exist"));

  cfg = base_config("filter-stability");
  cfg.filter_mode = "polynomialish";
  CHECK(contains(validate_error(cfg), "unknown mode"));

  cfg = base_config("filter-stability");
  cfg.eps_lo = -0.1;
  CHECK(contains(validate_error(cfg), "epsilon"));
  cfg.eps_lo = 0.02;  // above eps_hi = 0.01
  CHECK(contains(validate_error(cfg), "epsilon"));

  cfg = base_config("filter-stability");
  cfg.t1_lo = 0.2;
  cfg.t1_hi = 1.0;  // operator series needs ||T1|| < 1
  CHECK(contains(validate_error(cfg), "t1_norm"));

  cfg = base_config("filter-stability");
  cfg.t1_mode = "adversarial";
  CHECK(contains(validate_error(cfg), "t1_mode"));

  cfg = base_config("layer-stability");
  cfg.nonlinearity = "sigmoid";
  CHECK(contains(validate_error(cfg), "nonlinearity"));
  cfg.nonlinearity = "leaky-relu:-1";
  CHECK(contains(validate_error(cfg), "nonnegative"));
  cfg.nonlinearity = "leaky-relu:abc";
  CHECK(contains(validate_error(cfg), "bad number"));

  cfg = base_config("layer-stability");
  cfg.pooling = "max";
  CHECK(contains(validate_error(cfg), "pooling"));
  cfg.pooling = "identity";
  cfg.signals = 0;
  CHECK(contains(validate_error(cfg), "signals"));

  cfg = base_config("network-stability");
  cfg.depths.clear();
  CHECK(contains(validate_error(cfg), "depths"));
  cfg.depths = {0};
  CHECK(contains(validate_error(cfg), "[1, 16]"));
  cfg.depths = {17};
  CHECK(contains(validate_error(cfg), "[1, 16]"));
}

TEST_CASE("validate covers sweep and response settings") {
  ExperimentConfig cfg = base_config("sweep");
  cfg.sweep_parameter = "epsilon";
  cfg.sweep_values = {0.0, 0.01};
  CHECK_NOTHROW(cfg.validate());

  cfg.sweep_parameter = "volume";
  CHECK(contains(validate_error(cfg), "unknown parameter"));

  cfg.sweep_parameter = "epsilon";
  cfg.sweep_values.clear();
  CHECK(contains(validate_error(cfg), "values"));
  cfg.sweep_values = {-0.1};
  CHECK(contains(validate_error(cfg), "out of range"));

  cfg.sweep_parameter = "t1_norm";
  cfg.sweep_values = {1.0};
  CHECK(contains(validate_error(cfg), "out of range"));

  cfg.sweep_parameter = "depth";
  cfg.sweep_values = {1.5};
  CHECK(contains(validate_error(cfg), "integers"));
  cfg.sweep_values = {2.0};
  CHECK_NOTHROW(cfg.validate());

  cfg.sweep_parameter = "degree";
  cfg.sweep_values = {std::nan("")};
  CHECK(contains(validate_error(cfg), "finite"));

  cfg.sweep_parameter = "epsilon";
  cfg.sweep_values = {0.01};
  cfg.sweep_experiment = "response-plot";
  CHECK(contains(validate_error(cfg), "stability"));

  ExperimentConfig resp = base_config("response-plot");
  CHECK_NOTHROW(resp.validate());
  resp.response_preset = "edge-detect";
  CHECK(contains(validate_error(resp), "preset"));

  resp = base_config("response-plot");
  resp.response_width = 0.0;
  CHECK(contains(validate_error(resp), "width"));

  resp = base_config("response-plot");
  resp.response_degree = 0;
  CHECK(contains(validate_error(resp), "degree"));
  resp.response_degree = 12;
  resp.response_samples = 12;  // needs degree + 1
  CHECK(contains(validate_error(resp), "samples"));

  resp = base_config("response-plot");
  resp.response_l1_max = 0.0;
  CHECK(contains(validate_error(resp), "l1_max"));
}

TEST_CASE("generated shifts are deterministic in the seed") {
  const ShiftSpec er = parse_shift_spec("er:0.5:normalized");
  const Matrix a = build_shift(er, 8, 7).matrix();
  const Matrix b = build_shift(er, 8, 7).matrix();
  const Matrix c = build_shift(er, 8, 8).matrix();
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a - c).cwiseAbs().maxCoeff() > 0.0);

  const Matrix r1 = build_shift(parse_shift_spec("random"), 6, 5).matrix();
  const Matrix r2 = build_shift(parse_shift_spec("random"), 6, 5).matrix();
  CHECK((r1 - r2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("deterministic families take their documented shapes") {
  // a 3-ring IS the triangle
  const Matrix ring = build_shift(parse_shift_spec("ring"), 3, 0).matrix();
  const Matrix tri = build_shift(parse_shift_spec("complete"), 3, 0).matrix();
  CHECK((ring - tri).cwiseAbs().maxCoeff() == 0.0);
  CHECK(build_shift(parse_shift_spec("ring"), 3, 0).norm() ==
        doctest::Approx(2.0).epsilon(1e-12));

  CHECK(build_shift(parse_shift_spec("complete"), 4, 0).norm() ==
        doctest::Approx(3.0).epsilon(1e-12));

  const ShiftOperator rnd = build_shift(parse_shift_spec("random"), 6, 11);
  CHECK(rnd.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((rnd.matrix() - rnd.matrix().transpose()).cwiseAbs().maxCoeff() == 0.0);

  const Matrix flat = build_shift(parse_shift_spec("graphon-const:0.25"), 4, 0).matrix();
  CHECK((flat.array() - 0.0625).abs().maxCoeff() == 0.0);  // c / n exactly
}

TEST_CASE("file shifts round-trip and check their dimension") {
  Matrix m(2, 2);
  m << 0.0, 1.25, 1.25, 0.5;
  TempFile file("algnn_shift_roundtrip.txt", "");
  write_matrix_file(file.path(), m);

  const ShiftSpec spec = parse_shift_spec("file:" + file.path());
  CHECK((build_shift(spec, 2, 0).matrix() - m).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(build_shift(spec, 3, 0), std::invalid_argument);

  // mixing a fixed-dimension file with generated kinds is rejected
  ExperimentConfig cfg = base_config("filter-stability");
  cfg.kinds = {spec, parse_shift_spec("random")};
  CHECK(contains(validate_error(cfg), "cannot mix"));
}

TEST_CASE("edge-starved random graphs fail loudly instead of looping") {
  const ShiftSpec sparse = parse_shift_spec("er:1e-9");
  CHECK_THROWS_AS(build_shift(sparse, 8, 3), NumericalError);
  CHECK_THROWS_AS(build_shift(sparse, 0, 3), std::invalid_argument);
}

}  // TEST_SUITE
