#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "hsinr/codec.hpp"
#include "hsinr/cube.hpp"
#include "hsinr/quality.hpp"
#include "hsinr/sampler.hpp"
#include "hsinr/siren.hpp"

namespace hsinr {

struct TrainConfig {
  int iterations = 10000;
  double lr = 2e-4;
  int eval_every = 100;
  std::optional<SampleConfig> sample;  // full-grid batches when empty
  std::uint64_t seed = 0;              // parameter init
  Precision precision = Precision::full32;

  void validate() const;
};

// Best parameters seen so far, judged by full-grid PSNR after the storage
// round trip for the configured precision.
struct BestSnapshot {
  ParamVector params;
  double psnr = 0.0;
  int epoch = 0;
  std::vector<PsnrSample> history;
};

using ProgressCallback = std::function<void(const PsnrSample&)>;

// Overfits a fresh network to a normalized cube. One epoch is one Adam step on
// the epoch's batch. PSNR is evaluated every eval_every epochs and after the
// last one; the best evaluation is returned, never simply the last.
BestSnapshot overfit(const HyperCube& cube, const SirenSpec& spec, const TrainConfig& cfg,
                     const ProgressCallback& progress = {});

struct Candidate {
  int n_hidden;
  int hidden_width;
};

// n_hidden in {5,10,15,20,25} x hidden_width in {20,40,60,100}.
std::vector<Candidate> default_candidates();

struct ProbeResult {
  Candidate candidate;
  std::size_t params;
  double bpppb;
  double psnr;
};

struct SearchResult {
  SirenSpec spec;
  std::vector<ProbeResult> probes;  // feasible candidates only, in input order
};

// Trains every candidate that fits the budget for probe.iterations epochs and
// returns the best by PSNR, then fewer parameters, then fewer layers.
SearchResult architecture_search(const HyperCube& cube, double budget_bpppb,
                                 std::span<const Candidate> candidates, const TrainConfig& probe);

struct ShapeTarget {
  int n_hidden;
  int hidden_width;
};

struct BudgetTarget {
  double bpppb;
  std::vector<Candidate> candidates = default_candidates();
  int probe_iterations = 2000;
};

using CompressTarget = std::variant<ShapeTarget, BudgetTarget>;

struct CompressResult {
  EncodedImage encoded;
  QualityReport report;  // metrics in normalized units (peak 1)
  BestSnapshot snapshot;
  std::optional<SearchResult> search;
};

// normalize -> optional search -> overfit -> quantize -> EncodedImage.
CompressResult compress(const HyperCube& cube, const CompressTarget& target,
                        const TrainConfig& cfg, const ProgressCallback& progress = {});

}  // namespace hsinr
