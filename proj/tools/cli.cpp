#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "randtensor/bounds.hpp"
#include "randtensor/harness.hpp"
#include "randtensor/sampler.hpp"
#include "randtensor/selftest.hpp"
#include "randtensor/solver.hpp"
#include "randtensor/tensor_io.hpp"

namespace rtensor::cli {

namespace {

using nlohmann::json;

struct ShapeFlags {
  std::string dims;
  std::optional<std::size_t> order;
  std::optional<std::size_t> n;
  std::optional<std::size_t> m;

  void attach(CLI::App* app) {
    app->add_option("--dims", dims, "x-joined dimensions, e.g. 4x9x16");
    app->add_option("--d", order, "tensor order (symmetric class)");
    app->add_option("--n", n, "dimension n");
    app->add_option("--m", m, "dimension m (partially symmetric class)");
  }

  [[nodiscard]] std::size_t need(const std::optional<std::size_t>& v, const char* flag) const {
    if (!v) throw std::invalid_argument(std::string("missing ") + flag);
    return *v;
  }

  [[nodiscard]] TensorClass tensor_class(ClassTag tag) const {
    switch (tag) {
      case ClassTag::IID:
        if (dims.empty()) throw std::invalid_argument("iid class needs --dims");
        return TensorClass::iid(Shape::parse(dims));
      case ClassTag::Symmetric: return TensorClass::symmetric(need(order, "--d"), need(n, "--n"));
      case ClassTag::PartiallySymmetric: return TensorClass::partially_symmetric(need(m, "--m"), need(n, "--n"));
      case ClassTag::Piezoelectric: return TensorClass::piezoelectric(need(n, "--n"));
    }
    throw std::invalid_argument("unreachable");
  }

  // --dims wins; otherwise the shape implied by the functional's class.
  [[nodiscard]] Shape shape_for(SpectralFunctional f) const {
    if (!dims.empty()) return Shape::parse(dims);
    switch (f) {
      case SpectralFunctional::ZEig:
      case SpectralFunctional::HEig: return tensor_class(ClassTag::Symmetric).shape();
      case SpectralFunctional::MEig: return tensor_class(ClassTag::PartiallySymmetric).shape();
      case SpectralFunctional::CEig: return tensor_class(ClassTag::Piezoelectric).shape();
      default: throw std::invalid_argument("--dims is required for " + to_string(f));
    }
  }
};

struct SolverFlags {
  int restarts = SolverConfig{}.restarts;
  int max_iters = SolverConfig{}.max_iters;
  double tol = SolverConfig{}.tol;
  std::optional<double> shift;
  std::uint64_t seed = 0;

  void attach(CLI::App* app) {
    app->add_option("--restarts", restarts, "multi-start count")->check(CLI::PositiveNumber);
    app->add_option("--max-iters", max_iters, "iterations per start")->check(CLI::PositiveNumber);
    app->add_option("--tol", tol, "relative objective-change tolerance")->check(CLI::PositiveNumber);
    app->add_option("--shift", shift, "initial ZEig/HEig shift (default adaptive)")->check(CLI::NonNegativeNumber);
    app->add_option("--seed", seed, "seed for random starts");
  }

  [[nodiscard]] SolverConfig config() const {
    SolverConfig cfg;
    cfg.restarts = restarts;
    cfg.max_iters = max_iters;
    cfg.tol = tol;
    cfg.shift = shift;
    cfg.rng = SeedSpec{seed, 0};
    return cfg;
  }
};

json solve_to_json(const SolveResult& r) {
  return {{"functional", to_string(r.functional)},
          {"value", r.value},
          {"argmax", r.argmax},
          {"iterations_total", r.iterations_total},
          {"converged", r.converged},
          {"starts", r.starts},
          {"degenerate_restarts", r.degenerate_restarts}};
}

json bound_to_json(const BoundReport& b) {
  json j{{"functional", to_string(b.functional)},
         {"dims", b.shape.to_string()},
         {"bound_exact", b.bound_exact ? json(*b.bound_exact) : json(nullptr)},
         {"bound_loose", b.bound_loose}};
  if (b.tail_shift) {
    j["tail_shift"] = *b.tail_shift;
    j["tail_prob"] = *b.tail_probability;
  }
  return j;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian random tensors: sampling, spectral maximizers, expectation bounds"};
  app.require_subcommand(1);

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "draw one tensor and write it as RTB1");
  std::string class_name;
  ShapeFlags sample_shape;
  std::uint64_t sample_seed = 0;
  std::uint64_t sample_stream = 0;
  std::string sample_out;
  sample_cmd->add_option("--class", class_name, "iid | symmetric | partially-symmetric | piezoelectric")->required();
  sample_shape.attach(sample_cmd);
  sample_cmd->add_option("--seed", sample_seed, "master seed");
  sample_cmd->add_option("--stream", sample_stream, "substream index");
  sample_cmd->add_option("--out", sample_out, "output path")->required();

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "maximize a spectral functional of an RTB1 tensor");
  std::string solve_in;
  std::string solve_functional;
  SolverFlags solver_flags;
  solve_cmd->add_option("--in", solve_in, "input RTB1 file")->required();
  solve_cmd->add_option("--functional", solve_functional, "l2singular | ldsingular | zeig | heig | meig | ceig")
      ->required();
  solver_flags.attach(solve_cmd);

  // bound
  auto* bound_cmd = app.add_subcommand("bound", "evaluate the expectation bound");
  std::string bound_functional;
  ShapeFlags bound_shape;
  std::optional<double> bound_t;
  bound_cmd->add_option("--functional", bound_functional, "spectral functional")->required();
  bound_shape.attach(bound_cmd);
  bound_cmd->add_option("--t", bound_t, "tail shift t > 0");

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "run a seeded Monte Carlo experiment");
  std::string exp_config;
  std::string exp_out_dir;
  std::optional<std::size_t> exp_trials;
  std::optional<std::uint64_t> exp_seed;
  std::optional<unsigned> exp_threads;
  exp_cmd->add_option("--config", exp_config, "experiment JSON")->required();
  exp_cmd->add_option("--out-dir", exp_out_dir, "directory for trials.csv and summary.json")->required();
  exp_cmd->add_option("--trials", exp_trials, "override trial count")->check(CLI::PositiveNumber);
  exp_cmd->add_option("--seed", exp_seed, "override master seed");
  exp_cmd->add_option("--threads", exp_threads, "worker threads (0 = all cores)");

  // selftest
  auto* self_cmd = app.add_subcommand("selftest", "run the inequality property suites");
  SelftestConfig self_cfg;
  self_cmd->add_option("--samples", self_cfg.product_samples, "tuples per product-sphere suite");
  self_cmd->add_option("--pairs", self_cfg.lipschitz_pairs, "tensor pairs for the Lipschitz suite");
  self_cmd->add_option("--resolution", self_cfg.grid_resolution, "grid oracle resolution")
      ->check(CLI::Range(4, 100000));
  self_cmd->add_option("--seed", self_cfg.seed, "seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (sample_cmd->parsed()) {
      const TensorClass cls = sample_shape.tensor_class(parse_class_tag(class_name));
      write_tensor(sample(cls, SeedSpec{sample_seed, sample_stream}), std::filesystem::path(sample_out));
      err << "wrote " << cls.shape().to_string() << " " << to_string(cls.tag()) << " tensor to " << sample_out << "\n";
      return kExitOk;
    }
    if (solve_cmd->parsed()) {
      const Tensor t = read_tensor(std::filesystem::path(solve_in));
      const SolveResult r = solve(t, parse_functional(solve_functional), solver_flags.config());
      out << solve_to_json(r).dump(2) << "\n";
      return kExitOk;
    }
    if (bound_cmd->parsed()) {
      const SpectralFunctional f = parse_functional(bound_functional);
      const Shape shape = bound_shape.shape_for(f);
      const BoundReport b = bound_t ? bound(f, shape, *bound_t) : bound(f, shape);
      out << bound_to_json(b).dump(2) << "\n";
      return kExitOk;
    }
    if (exp_cmd->parsed()) {
      std::ifstream in(exp_config);
      if (!in) {
        err << "error: cannot open config '" << exp_config << "'\n";
        return kExitUsage;
      }
      ExperimentConfig cfg = config_from_json(json::parse(in));
      if (exp_trials) cfg.trials = *exp_trials;
      if (exp_seed) cfg.master_seed = *exp_seed;
      if (exp_threads) cfg.threads = *exp_threads;
      cfg.validate();

      const ExperimentResult result = run_experiment(cfg);
      const std::filesystem::path dir(exp_out_dir);
      std::filesystem::create_directories(dir);
      {
        std::ofstream csv(dir / "trials.csv", std::ios::binary | std::ios::trunc);
        write_trials_csv(csv, cfg, result.records);
      }
      const json summary = summary_to_json(cfg, result.summary);
      {
        std::ofstream js(dir / "summary.json", std::ios::trunc);
        js << summary.dump(2) << "\n";
      }
      out << summary.dump(2) << "\n";
      return result.summary.pass_all() ? kExitOk : kExitChecksFailed;
    }
    if (self_cmd->parsed()) {
      self_cfg.lp_samples = self_cfg.product_samples;
      bool all = true;
      for (const auto& c : run_selftest(self_cfg)) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << " cases=" << c.cases << " worst_slack=" << c.worst_slack
            << "\n";
        all = all && c.passed;
      }
      return all ? kExitOk : kExitChecksFailed;
    }
  } catch (const ExperimentError& e) {
    err << "error: " << e.what() << "\n";
    return kExitChecksFailed;
  } catch (const json::exception& e) {
    err << "error: bad config: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace rtensor::cli
