#include "randtensor/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <thread>

#include "randtensor/stats.hpp"

namespace rtensor {

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (trials == 0) throw std::invalid_argument("experiment needs at least one trial");
  solver.validate();
  for (double t : tail_shifts) {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("tail shifts must be positive");
  }
  const ClassTag tag = tensor_class.tag();
  const auto require = [&](ClassTag needed) {
    if (tag != needed) {
      throw std::invalid_argument(to_string(functional) + " requires the " + to_string(needed) + " class, got " +
                                  to_string(tag));
    }
  };
  switch (functional) {
    case SpectralFunctional::L2Singular:
    case SpectralFunctional::LdSingular: break;
    case SpectralFunctional::ZEig:
    case SpectralFunctional::HEig: require(ClassTag::Symmetric); break;
    case SpectralFunctional::MEig: require(ClassTag::PartiallySymmetric); break;
    case SpectralFunctional::CEig: require(ClassTag::Piezoelectric); break;
  }
}

bool ExperimentSummary::pass_all() const {
  return pass_expectation && std::all_of(tails.begin(), tails.end(), [](const TailCheck& c) { return c.pass; });
}

ExperimentSummary summarize(const std::vector<TrialRecord>& records, const BoundReport& report,
                            const std::vector<double>& tail_shifts) {
  std::vector<double> values;
  values.reserve(records.size());
  for (const auto& r : records) {
    if (r.converged) values.push_back(r.value);
  }
  if (values.empty()) throw ExperimentError("no converged trials to summarize");

  ExperimentSummary s;
  s.trials_used = values.size();
  s.unconverged = records.size() - values.size();
  const MeanEstimate est = estimate_mean(values);
  s.mean = est.mean;
  s.std_error = est.std_error;
  s.bound_exact = report.bound_exact;
  s.bound_loose = report.bound_loose;
  s.applicable_bound = report.applicable();
  s.mean_over_bound = s.mean / s.applicable_bound;
  s.pass_expectation = s.mean + 3.0 * s.std_error <= s.applicable_bound;

  for (double t : tail_shifts) {
    TailCheck c;
    c.t = t;
    const double threshold = s.applicable_bound + t;
    c.exceed_count = static_cast<std::size_t>(
        std::count_if(values.begin(), values.end(), [&](double v) { return v > threshold; }));
    c.upper99 = clopper_pearson_upper(c.exceed_count, values.size(), 0.99);
    c.tail_bound = tail_prob(t);
    c.pass = c.upper99 <= c.tail_bound;
    s.tails.push_back(c);
  }
  return s;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<TrialRecord> records(cfg.trials);

  const auto run_trial = [&](std::size_t i) {
    TrialRecord& r = records[i];
    r.trial_index = i;
    const SeedSpec stream = derive_substream(cfg.master_seed, i);
    r.seed = stream.substream_seed();
    try {
      const Tensor t = sample(cfg.tensor_class, stream);
      SolverConfig solver = cfg.solver;
      solver.rng = SeedSpec{r.seed, 1};
      solver.record_traces = false;
      const SolveResult res = solve(t, cfg.functional, solver);
      r.value = res.value;
      r.iterations = res.iterations_total;
      r.converged = res.converged && std::isfinite(res.value);
    } catch (const std::exception&) {
      r.value = 0.0;
      r.iterations = 0;
      r.converged = false;
    }
  };

  unsigned workers = cfg.threads ? cfg.threads : std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, cfg.trials));
  if (workers <= 1) {
    for (std::size_t i = 0; i < cfg.trials; ++i) run_trial(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cfg.trials; i = next++) run_trial(i);
      });
    }
  }

  const std::size_t unconverged =
      static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const auto& r) { return !r.converged; }));
  if (20 * unconverged > cfg.trials) {
    throw ExperimentError(std::to_string(unconverged) + " of " + std::to_string(cfg.trials) +
                          " trials did not converge (limit 5%)");
  }
  const BoundReport report = bound(cfg.functional, cfg.tensor_class.shape());
  ExperimentSummary summary = summarize(records, report, cfg.tail_shifts);
  return {std::move(records), std::move(summary)};
}

void write_trials_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<TrialRecord>& records) {
  const std::string cls = to_string(cfg.tensor_class.tag());
  const std::string dims = cfg.tensor_class.shape().to_string();
  const std::string functional = to_string(cfg.functional);
  out << "trial,seed,class,dims,functional,value,iterations,converged\n";
  for (const auto& r : records) {
    out << r.trial_index << ',' << r.seed << ',' << cls << ',' << dims << ',' << functional << ','
        << format_double(r.value) << ',' << r.iterations << ',' << (r.converged ? "true" : "false") << '\n';
  }
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  const TensorClass& cls = cfg.tensor_class;
  const Shape& shape = cls.shape();
  j["class"] = to_string(cls.tag());
  switch (cls.tag()) {
    case ClassTag::IID: j["dims"] = shape.to_string(); break;
    case ClassTag::Symmetric:
      j["d"] = shape.order();
      j["n"] = shape.dim(0);
      break;
    case ClassTag::PartiallySymmetric:
      j["m"] = shape.dim(0);
      j["n"] = shape.dim(1);
      break;
    case ClassTag::Piezoelectric: j["n"] = shape.dim(0); break;
  }
  j["functional"] = to_string(cfg.functional);
  j["trials"] = cfg.trials;
  j["master_seed"] = cfg.master_seed;
  nlohmann::json solver;
  solver["restarts"] = cfg.solver.restarts;
  solver["max_iters"] = cfg.solver.max_iters;
  solver["tol"] = cfg.solver.tol;
  solver["shift"] = cfg.solver.shift ? nlohmann::json(*cfg.solver.shift) : nlohmann::json(nullptr);
  j["solver"] = solver;
  j["tail_shifts"] = cfg.tail_shifts;
  return j;
}

namespace {

TensorClass class_from_json(const nlohmann::json& j) {
  const ClassTag tag = parse_class_tag(j.at("class").get<std::string>());
  switch (tag) {
    case ClassTag::IID: {
      const auto& dims = j.at("dims");
      if (dims.is_string()) return TensorClass::iid(Shape::parse(dims.get<std::string>()));
      return TensorClass::iid(Shape(dims.get<std::vector<std::size_t>>()));
    }
    case ClassTag::Symmetric:
      return TensorClass::symmetric(j.at("d").get<std::size_t>(), j.at("n").get<std::size_t>());
    case ClassTag::PartiallySymmetric:
      return TensorClass::partially_symmetric(j.at("m").get<std::size_t>(), j.at("n").get<std::size_t>());
    case ClassTag::Piezoelectric: return TensorClass::piezoelectric(j.at("n").get<std::size_t>());
  }
  throw std::invalid_argument("unreachable tensor class");
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg{class_from_json(j), parse_functional(j.at("functional").get<std::string>()), 1, 0, {}, {}, 0};
  cfg.trials = j.value("trials", std::size_t{1});
  cfg.master_seed = j.value("master_seed", std::uint64_t{0});
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    cfg.solver.restarts = s.value("restarts", cfg.solver.restarts);
    cfg.solver.max_iters = s.value("max_iters", cfg.solver.max_iters);
    cfg.solver.tol = s.value("tol", cfg.solver.tol);
    if (s.contains("shift") && !s.at("shift").is_null()) cfg.solver.shift = s.at("shift").get<double>();
  }
  cfg.tail_shifts = j.value("tail_shifts", std::vector<double>{});
  cfg.threads = j.value("threads", 0U);
  cfg.validate();
  return cfg;
}

nlohmann::json summary_to_json(const ExperimentConfig& cfg, const ExperimentSummary& summary) {
  nlohmann::json j;
  j["config"] = config_to_json(cfg);
  j["trials_used"] = summary.trials_used;
  j["unconverged"] = summary.unconverged;
  j["mean"] = summary.mean;
  j["stderr"] = summary.std_error;
  j["bound_exact"] = summary.bound_exact ? nlohmann::json(*summary.bound_exact) : nlohmann::json(nullptr);
  j["bound_loose"] = summary.bound_loose;
  j["mean_over_bound"] = summary.mean_over_bound;
  nlohmann::json tails = nlohmann::json::array();
  for (const auto& c : summary.tails) {
    tails.push_back({{"t", c.t},
                     {"exceed_count", c.exceed_count},
                     {"upper99", c.upper99},
                     {"tail_bound", c.tail_bound},
                     {"pass", c.pass}});
  }
  j["tails"] = tails;
  j["pass_expectation"] = summary.pass_expectation;
  return j;
}

}  // namespace rtensor
