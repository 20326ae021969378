#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "randtensor/harness.hpp"

using namespace rtensor;

namespace {

ExperimentConfig make_config(TensorClass cls, SpectralFunctional f, std::size_t trials, std::uint64_t seed) {
  ExperimentConfig cfg{std::move(cls), f, trials, seed, {}, {}, 1};
  return cfg;
}

std::string csv_of(const ExperimentConfig& cfg, const std::vector<TrialRecord>& records) {
  std::ostringstream out;
  write_trials_csv(out, cfg, records);
  return out.str();
}

BoundReport report_with(double loose) {
  return BoundReport{SpectralFunctional::L2Singular, Shape{2, 2}, std::nullopt, loose, std::nullopt, std::nullopt};
}

std::vector<TrialRecord> records_of(const std::vector<double>& values) {
  std::vector<TrialRecord> r;
  for (std::size_t i = 0; i < values.size(); ++i) r.push_back({i, i, values[i], 1, true});
  return r;
}

}  // namespace

TEST(ExperimentConfig, Validation) {
  auto cfg = make_config(TensorClass::iid(Shape{3, 3, 3}), SpectralFunctional::ZEig, 10, 0);
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = make_config(TensorClass::symmetric(3, 3), SpectralFunctional::MEig, 10, 0);
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = make_config(TensorClass::symmetric(3, 3), SpectralFunctional::L2Singular, 0, 0);
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = make_config(TensorClass::symmetric(3, 3), SpectralFunctional::HEig, 3, 0);
  cfg.tail_shifts = {1.0, -1.0};
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.tail_shifts = {1.0};
  EXPECT_NO_THROW(cfg.validate());
}

TEST(RunExperiment, OneByOneIsAbsoluteValue) {
  const auto cfg = make_config(TensorClass::iid(Shape{1, 1}), SpectralFunctional::L2Singular, 1, 99);
  const auto result = run_experiment(cfg);
  ASSERT_EQ(result.records.size(), 1u);
  const Tensor t = sample(cfg.tensor_class, derive_substream(99, 0));
  EXPECT_EQ(result.records[0].value, std::abs(t.data()[0]));
  EXPECT_EQ(result.summary.mean, result.records[0].value);
  EXPECT_EQ(result.summary.std_error, 0.0);
}

TEST(RunExperiment, DeterministicAcrossRunsAndThreads) {
  auto cfg = make_config(TensorClass::symmetric(3, 4), SpectralFunctional::ZEig, 24, 123);
  const auto a = run_experiment(cfg);
  const auto b = run_experiment(cfg);
  EXPECT_EQ(a.records, b.records);
  for (unsigned threads : {2U, 3U, 8U}) {
    cfg.threads = threads;
    const auto c = run_experiment(cfg);
    EXPECT_EQ(c.records, a.records) << threads << " threads";
    EXPECT_EQ(csv_of(cfg, c.records), csv_of(cfg, a.records));
  }
}

TEST(RunExperiment, HalfNormalMean) {
  // rho of a 1x1 matrix is |N(0,1)|, whose mean is sqrt(2/pi).
  const auto cfg = make_config(TensorClass::iid(Shape{1, 1}), SpectralFunctional::L2Singular, 100000, 2024);
  const auto s = run_experiment(cfg).summary;
  EXPECT_LE(std::abs(s.mean - 0.79788456080286535588), 3.0 * s.std_error);
  EXPECT_EQ(s.unconverged, 0u);
}

TEST(RunExperiment, GordonTightness) {
  const auto cfg = make_config(TensorClass::iid(Shape{50, 50}), SpectralFunctional::L2Singular, 60, 7);
  const auto s = run_experiment(cfg).summary;
  EXPECT_TRUE(s.pass_expectation);
  EXPECT_GE(s.mean_over_bound, 0.90);
  EXPECT_LE(s.mean_over_bound, 1.00);
}

TEST(RunExperiment, TailFractionsAreMonotone) {
  auto cfg = make_config(TensorClass::iid(Shape{6, 6}), SpectralFunctional::L2Singular, 300, 5);
  cfg.tail_shifts = {0.05, 0.1, 0.25, 0.5, 1.0, 2.0};
  const auto s = run_experiment(cfg).summary;
  ASSERT_EQ(s.tails.size(), 6u);
  for (std::size_t k = 1; k < s.tails.size(); ++k) {
    EXPECT_LE(s.tails[k].exceed_count, s.tails[k - 1].exceed_count);
    EXPECT_LE(s.tails[k].upper99, s.tails[k - 1].upper99);
  }
}

TEST(RunExperiment, EveryFunctionalPassesAtSmallDims) {
  const std::vector<std::pair<TensorClass, SpectralFunctional>> cases{
      {TensorClass::iid(Shape{2, 3, 2}), SpectralFunctional::L2Singular},
      {TensorClass::iid(Shape{2, 3, 2}), SpectralFunctional::LdSingular},
      {TensorClass::symmetric(3, 3), SpectralFunctional::ZEig},
      {TensorClass::symmetric(3, 3), SpectralFunctional::HEig},
      {TensorClass::partially_symmetric(2, 3), SpectralFunctional::MEig},
      {TensorClass::piezoelectric(3), SpectralFunctional::CEig}};
  for (const auto& [cls, f] : cases) {
    const auto s = run_experiment(make_config(cls, f, 60, 11)).summary;
    EXPECT_TRUE(s.pass_expectation) << to_string(f);
    EXPECT_EQ(s.unconverged, 0u) << to_string(f);
  }
}

TEST(Summarize, ConstantValues) {
  const auto s = summarize(records_of({0.5, 0.5, 0.5}), report_with(1.0), {});
  EXPECT_EQ(s.std_error, 0.0);
  EXPECT_TRUE(s.pass_expectation);
  EXPECT_EQ(s.mean_over_bound, 0.5);
}

TEST(Summarize, MarginFailure) {
  const auto s = summarize(records_of({0.0, 2.0}), report_with(1.0), {});
  EXPECT_EQ(s.mean, 1.0);
  EXPECT_FALSE(s.pass_expectation);
}

TEST(Summarize, ZeroExceedances) {
  const std::vector<double> values(500, 0.1);
  const auto s = summarize(records_of(values), report_with(1.0), {2.0});
  ASSERT_EQ(s.tails.size(), 1u);
  EXPECT_EQ(s.tails[0].exceed_count, 0u);
  EXPECT_NEAR(s.tails[0].upper99, 0.0091680551072324256, 1e-15);
  EXPECT_NEAR(s.tails[0].tail_bound, std::exp(-2.0), 1e-16);
  EXPECT_TRUE(s.tails[0].pass);
  EXPECT_TRUE(s.pass_all());
}

TEST(Summarize, UsesExactBoundWhenPresent) {
  BoundReport r = report_with(10.0);
  r.bound_exact = 5.0;
  const auto s = summarize(records_of({6.0, 6.0}), r, {});
  EXPECT_EQ(s.applicable_bound, 5.0);
  EXPECT_FALSE(s.pass_expectation);
}

TEST(Summarize, ExcludesUnconvergedAndRejectsEmpty) {
  auto recs = records_of({1.0, 100.0});
  recs[1].converged = false;
  const auto s = summarize(recs, report_with(2.0), {});
  EXPECT_EQ(s.trials_used, 1u);
  EXPECT_EQ(s.unconverged, 1u);
  EXPECT_EQ(s.mean, 1.0);
  recs[0].converged = false;
  EXPECT_THROW(summarize(recs, report_with(2.0), {}), ExperimentError);
}

TEST(RunExperiment, TooManyUnconverged) {
  auto cfg = make_config(TensorClass::symmetric(3, 4), SpectralFunctional::HEig, 20, 1);
  cfg.solver.max_iters = 1;
  cfg.solver.restarts = 1;
  EXPECT_THROW(run_experiment(cfg), ExperimentError);
}

TEST(Csv, Schema) {
  const auto cfg = make_config(TensorClass::iid(Shape{2, 3}), SpectralFunctional::L2Singular, 3, 4);
  const auto result = run_experiment(cfg);
  std::istringstream in(csv_of(cfg, result.records));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "trial,seed,class,dims,functional,value,iterations,converged");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::vector<std::string> cells;
    for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
    ASSERT_EQ(cells.size(), 8u);
    EXPECT_EQ(cells[0], std::to_string(rows));
    EXPECT_EQ(cells[1], std::to_string(derive_substream(4, rows).substream_seed()));
    EXPECT_EQ(cells[2], "iid");
    EXPECT_EQ(cells[3], "2x3");
    EXPECT_EQ(cells[4], "l2singular");
    EXPECT_EQ(std::stod(cells[5]), result.records[rows].value);  // %.17g round-trips
    EXPECT_EQ(cells[7], "true");
    ++rows;
  }
  EXPECT_EQ(rows, 3u);
}

TEST(Json, ConfigRoundTrip) {
  auto cfg = make_config(TensorClass::partially_symmetric(3, 4), SpectralFunctional::MEig, 17, 88);
  cfg.solver.restarts = 9;
  cfg.solver.tol = 1e-9;
  cfg.tail_shifts = {0.5, 1.0};
  const auto back = config_from_json(config_to_json(cfg));
  EXPECT_EQ(back.tensor_class.tag(), ClassTag::PartiallySymmetric);
  EXPECT_EQ(back.tensor_class.shape(), cfg.tensor_class.shape());
  EXPECT_EQ(back.functional, SpectralFunctional::MEig);
  EXPECT_EQ(back.trials, 17u);
  EXPECT_EQ(back.master_seed, 88u);
  EXPECT_EQ(back.solver.restarts, 9);
  EXPECT_EQ(back.solver.tol, 1e-9);
  EXPECT_FALSE(back.solver.shift.has_value());
  EXPECT_EQ(back.tail_shifts, cfg.tail_shifts);
  EXPECT_EQ(config_to_json(back), config_to_json(cfg));

  const auto iid = config_from_json(nlohmann::json::parse(R"({"class":"iid","dims":[4,5],"functional":"ldsingular"})"));
  EXPECT_EQ(iid.tensor_class.shape(), (Shape{4, 5}));
  EXPECT_EQ(iid.trials, 1u);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"class":"iid","dims":"4x5","functional":"zeig"})")),
               std::invalid_argument);
}

TEST(Json, SummaryFields) {
  auto cfg = make_config(TensorClass::iid(Shape{3, 3, 3}), SpectralFunctional::LdSingular, 20, 3);
  cfg.tail_shifts = {1.0};
  const auto result = run_experiment(cfg);
  const auto j = summary_to_json(cfg, result.summary);
  for (const char* key : {"config", "trials_used", "unconverged", "mean", "stderr", "bound_exact", "bound_loose",
                          "mean_over_bound", "tails", "pass_expectation"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_TRUE(j["bound_exact"].is_number());
  EXPECT_EQ(j["tails"].size(), 1u);
  EXPECT_EQ(j["tails"][0]["t"], 1.0);
}
