// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../tools/cli.hpp"
#include "randtensor/bounds.hpp"
#include "randtensor/grid_oracle.hpp"
#include "randtensor/harness.hpp"
#include "randtensor/selftest.hpp"
#include "support.hpp"

using namespace rtensor;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Detail {
public:
  template <typename... Args>
  void add(const char* fmt, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    if (!text_.empty()) text_ += "; ";
    text_ += buf;
  }
  [[nodiscard]] const std::string& str() const { return text_; }

private:
  std::string text_;
};

ExperimentConfig experiment(TensorClass cls, SpectralFunctional f, std::size_t trials, std::uint64_t seed,
                            std::vector<double> tails = {}) {
  return ExperimentConfig{std::move(cls), f, trials, seed, {}, std::move(tails), 0};
}

Outcome gordon_tightness() {
  const auto s = run_experiment(experiment(TensorClass::iid(Shape{50, 50}), SpectralFunctional::L2Singular, 200, 1))
                     .summary;
  Detail d;
  d.add("mean=%.5f se=%.5f bound=%.5f mean/bound=%.4f", s.mean, s.std_error, s.applicable_bound, s.mean_over_bound);
  const bool ok = s.pass_expectation && s.mean_over_bound >= 0.90 && s.unconverged == 0;
  return {ok, d.str()};
}

Outcome six_functionals() {
  const std::vector<std::pair<TensorClass, SpectralFunctional>> cases{
      {TensorClass::iid(Shape{3, 4, 5}), SpectralFunctional::L2Singular},
      {TensorClass::iid(Shape{3, 4, 5}), SpectralFunctional::LdSingular},
      {TensorClass::symmetric(3, 5), SpectralFunctional::ZEig},
      {TensorClass::symmetric(3, 5), SpectralFunctional::HEig},
      {TensorClass::partially_symmetric(3, 4), SpectralFunctional::MEig},
      {TensorClass::piezoelectric(4), SpectralFunctional::CEig}};
  Outcome out;
  Detail d;
  std::uint64_t seed = 2;
  for (const auto& [cls, f] : cases) {
    const auto s = run_experiment(experiment(cls, f, 500, seed++)).summary;
    d.add("%s mean+3se=%.4f<=%.4f%s", to_string(f).c_str(), s.mean + 3 * s.std_error, s.applicable_bound,
          s.pass_expectation ? "" : " FAIL");
    out.pass = out.pass && s.pass_expectation;
  }
  out.detail = d.str();
  return out;
}

Outcome concentration_tails() {
  const std::vector<double> shifts{0.5, 1.0, 2.0};
  Outcome out;
  Detail d;
  const auto run = [&](const char* label, ExperimentConfig cfg) {
    const auto s = run_experiment(cfg).summary;
    for (const auto& c : s.tails) {
      d.add("%s t=%.1f: %zu/%zu upper99=%.4f<=%.4f%s", label, c.t, c.exceed_count, s.trials_used, c.upper99,
            c.tail_bound, c.pass ? "" : " FAIL");
      out.pass = out.pass && c.pass;
    }
  };
  run("50x50", experiment(TensorClass::iid(Shape{50, 50}), SpectralFunctional::L2Singular, 500, 3, shifts));
  run("zeig n=5", experiment(TensorClass::symmetric(3, 5), SpectralFunctional::ZEig, 500, 4, shifts));
  out.detail = d.str();
  return out;
}

Outcome oracle_equivalence() {
  constexpr int kResolution = 720;
  Outcome out;
  Detail d;
  const auto check = [&](SpectralFunctional f, const TensorClass& cls) {
    double worst = 0.0;
    double worst_allow = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Tensor t = sample(cls, SeedSpec{500 + s, static_cast<std::uint64_t>(f)});
      const double gap = std::abs(solve(t, f).value - grid_oracle(t, f, kResolution));
      const double allow = std::max(1e-3, grid_tolerance(t, f, kResolution));
      if (gap > allow) out.pass = false;
      if (gap / allow > worst / std::max(worst_allow, 1e-300)) {
        worst = gap;
        worst_allow = allow;
      }
    }
    d.add("%s max|solve-grid|=%.2e (allow %.2e)", to_string(f).c_str(), worst, worst_allow);
  };
  const TensorClass iid = TensorClass::iid(Shape{2, 2, 2});
  const TensorClass sym = TensorClass::symmetric(3, 2);
  check(SpectralFunctional::L2Singular, iid);
  check(SpectralFunctional::LdSingular, iid);
  check(SpectralFunctional::ZEig, sym);
  check(SpectralFunctional::HEig, sym);
  check(SpectralFunctional::MEig, TensorClass::partially_symmetric(2, 2));
  check(SpectralFunctional::CEig, TensorClass::piezoelectric(2));
  out.detail = d.str();
  return out;
}

Outcome sampler_calibration() {
  Outcome out;
  Detail d;
  std::uint64_t master = 90000;
  for (const auto& c : oracle::calibration_cases()) {
    const auto xs = oracle::collect_entries(c.cls, {flat_index(c.cls.shape(), c.index)}, 100000, master++);
    const auto v = oracle::chi_square_variance(xs[0], c.variance);
    if (!v.pass()) {
      out.pass = false;
      d.add("%s var=%.5f outside [%.5f, %.5f]", c.label, v.sample_variance, v.lo, v.hi);
    } else {
      d.add("%s var=%.4f (target %.2f)", c.label, v.sample_variance, c.variance);
    }
  }
  out.detail = d.str();
  return out;
}

Outcome inequality_suites() {
  Outcome out;
  Detail d;
  for (const auto& c : run_selftest(SelftestConfig{})) {
    d.add("%s cases=%zu worst_slack=%.3e%s", c.name.c_str(), c.cases, c.worst_slack, c.passed ? "" : " FAIL");
    out.pass = out.pass && c.passed;
  }
  out.detail = d.str();
  return out;
}

Outcome exact_vs_loose() {
  Outcome out;
  Detail d;
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<std::size_t> order(2, 8);
  std::uniform_int_distribution<std::size_t> dim(1, 50);
  std::size_t violations = 0;
  double worst_ratio = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<std::size_t> dims(order(gen));
    for (auto& n : dims) n = dim(gen);
    for (const auto& b : {bound(SpectralFunctional::LdSingular, Shape(dims)),
                          bound(SpectralFunctional::HEig, Shape(std::vector<std::size_t>(dims.size(), dims[0])))}) {
      if (!(*b.bound_exact <= b.bound_loose)) ++violations;
      worst_ratio = std::max(worst_ratio, *b.bound_exact / b.bound_loose);
    }
  }
  d.add("1000 shapes: %zu violations, max exact/loose=%.6f", violations, worst_ratio);
  out.pass = violations == 0;

  // Gamma(1.25) from a 30-digit arbitrary-precision evaluation.
  const std::pair<double, double> refs[] = {
      {1.0, 1.0}, {1.5, std::sqrt(M_PI) / 2.0}, {1.25, 0.90640247705547707798}};
  double worst_rel = 0.0;
  for (const auto& [x, ref] : refs) worst_rel = std::max(worst_rel, std::abs(gamma_fn(x) - ref) / ref);
  d.add("Gamma(1), Gamma(1.5), Gamma(1.25) max rel err=%.2e", worst_rel);
  out.pass = out.pass && worst_rel <= 1e-12;
  out.detail = d.str();
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "randtensor_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> configs{
      {"zeig", R"({"class":"symmetric","d":3,"n":5,"functional":"zeig","trials":120,"master_seed":11,"tail_shifts":[1]})"},
      {"meig", R"({"class":"partially-symmetric","m":3,"n":4,"functional":"meig","trials":80,"master_seed":12})"},
      {"ld", R"({"class":"iid","dims":"3x4x5","functional":"ldsingular","trials":80,"master_seed":13})"}};
  Outcome out;
  Detail d;
  for (const auto& [name, text] : configs) {
    const fs::path cfg = dir / (name + ".json");
    std::ofstream(cfg) << text;
    std::string reference;
    for (const char* threads : {"1", "2", "4", "7"}) {
      const fs::path out_dir = dir / (name + "_t" + threads);
      std::ostringstream sink;
      const int code = cli::run({"experiment", "--config", cfg.string(), "--out-dir", out_dir.string(), "--threads",
                                 threads},
                                sink, sink);
      const std::string csv = slurp(out_dir / "trials.csv");
      if (code != cli::kExitOk || csv.empty()) out.pass = false;
      if (reference.empty()) reference = csv;
      if (csv != reference) out.pass = false;
    }
    d.add("%s: threads 1/2/4/7 %s", name.c_str(), out.pass ? "byte-identical" : "DIFFER");
  }
  fs::remove_all(dir);
  out.detail = d.str();
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;  // 0 = none stated
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "matrix tightness (iid 50x50, 200 trials)", 30.0, gordon_tightness},
      {2, "bound certification, six functionals (500 trials each)", 600.0, six_functionals},
      {3, "concentration tails (500 trials, t=0.5,1,2)", 0.0, concentration_tails},
      {4, "solver vs grid oracle on 2x2x2", 120.0, oracle_equivalence},
      {5, "sampler variance calibration (1e5 draws)", 0.0, sampler_calibration},
      {6, "inequality property suites", 0.0, inequality_suites},
      {7, "exact vs loose constants, Gamma values", 0.0, exact_vs_loose},
      {8, "determinism across thread counts", 0.0, determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0.0 && secs > c.budget_seconds) {
      o.pass = false;
      o.detail += "; over time budget";
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d: %s [%.1fs] %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
