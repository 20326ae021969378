#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "randtensor/bounds.hpp"
#include "randtensor/sampler.hpp"
#include "randtensor/solver.hpp"

namespace rtensor {

class ExperimentError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  TensorClass tensor_class;
  SpectralFunctional functional;
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  SolverConfig solver{};
  std::vector<double> tail_shifts;
  /// Worker threads; 0 means hardware concurrency. Never affects results.
  unsigned threads = 0;

  /// Rejects trials == 0, non-positive tail shifts, and functional/class
  /// pairs outside {ZEig,HEig}->Symmetric, MEig->PartiallySymmetric,
  /// CEig->Piezoelectric (L2/Ld accept any class).
  void validate() const;
};

struct TrialRecord {
  std::size_t trial_index = 0;
  std::uint64_t seed = 0;  // substream seed of derive_substream(master, trial_index)
  double value = 0.0;
  long iterations = 0;
  bool converged = false;

  bool operator==(const TrialRecord&) const = default;
};

struct TailCheck {
  double t = 0.0;
  std::size_t exceed_count = 0;
  double upper99 = 0.0;
  double tail_bound = 0.0;
  bool pass = false;
};

struct ExperimentSummary {
  std::size_t trials_used = 0;
  std::size_t unconverged = 0;
  double mean = 0.0;
  double std_error = 0.0;
  std::optional<double> bound_exact;
  double bound_loose = 0.0;
  /// bound_exact when present, otherwise bound_loose.
  double applicable_bound = 0.0;
  double mean_over_bound = 0.0;
  std::vector<TailCheck> tails;
  /// mean + 3 SE <= applicable_bound
  bool pass_expectation = false;

  [[nodiscard]] bool pass_all() const;
};

struct ExperimentResult {
  std::vector<TrialRecord> records;
  ExperimentSummary summary;
};

/// Unconverged records are excluded. Tail t counts values above
/// applicable_bound + t and passes when the exact one-sided 99% binomial upper
/// limit of that frequency is at most exp(-t^2/2).
ExperimentSummary summarize(const std::vector<TrialRecord>& records, const BoundReport& report,
                            const std::vector<double>& tail_shifts);

/// Trial i samples with derive_substream(master, i) and solves with random
/// starts drawn from SeedSpec{seed_i, 1}. Records are ordered by trial index
/// and identical for any thread count. Solver failures become unconverged
/// records; more than 5% unconverged raises ExperimentError.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

void write_trials_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<TrialRecord>& records);

nlohmann::json config_to_json(const ExperimentConfig& cfg);
/// Inverse of config_to_json; missing optional fields take their defaults.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json summary_to_json(const ExperimentConfig& cfg, const ExperimentSummary& summary);

}  // namespace rtensor
