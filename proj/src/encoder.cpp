#include "hsinr/encoder.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "hsinr/adam.hpp"
#include "hsinr/error.hpp"
#include "hsinr/half.hpp"
#include "hsinr/mlp.hpp"

namespace hsinr {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Full-grid PSNR of the parameters as they would decode.
double evaluate(const HyperCube& cube, const SirenSpec& spec, const ParamVector& params,
                Precision precision) {
  if (precision == Precision::half16) {
    const auto stored = dequantize(quantize(params));
    return psnr(cube, render(spec, stored, cube.width(), cube.height()));
  }
  return psnr(cube, render(spec, params, cube.width(), cube.height()));
}

}  // namespace

void TrainConfig::validate() const {
  if (iterations < 1) throw ArgumentError("iterations must be >= 1");
  if (eval_every < 1) throw ArgumentError("eval_every must be >= 1");
  if (!(lr > 0.0)) throw ArgumentError("learning rate must be positive");
  if (sample) sample->validate();
}

BestSnapshot overfit(const HyperCube& cube, const SirenSpec& spec, const TrainConfig& cfg,
                     const ProgressCallback& progress) {
  cfg.validate();
  spec.validate();
  if (cube.bands() != static_cast<std::size_t>(spec.out_dim)) {
    throw ArgumentError("cube has " + std::to_string(cube.bands()) + " bands, network outputs " +
                        std::to_string(spec.out_dim));
  }
  const auto range = cube.value_range();
  if (range.raw_min < 0.0f || range.raw_max > 1.0f) {
    throw ArgumentError("overfit expects a normalized cube with values in [0, 1]");
  }

  const CoordGrid grid = build_grid(cube.width(), cube.height());
  std::optional<Batch<float>> full;
  if (!cfg.sample) full = full_batch(cube, grid);
  // a fixed subset is drawn once
  if (cfg.sample && !cfg.sample->resample_each_epoch) {
    full = gather_batch(cube, grid, sample_indices(cube.width(), cube.height(), *cfg.sample, 0));
  }

  ParamVector params = init_params(spec, cfg.seed);
  AdamState<float> adam(params.size(), cfg.lr);
  GradientEvaluator<float> gradient(spec);
  std::vector<float> grads(params.size());

  BestSnapshot best;
  best.psnr = -std::numeric_limits<double>::infinity();
  for (int epoch = 1; epoch <= cfg.iterations; ++epoch) {
    float loss;
    if (full) {
      loss = gradient(params, *full, grads);
    } else {
      const auto idx = sample_indices(cube.width(), cube.height(), *cfg.sample,
                                      static_cast<std::uint64_t>(epoch));
      loss = gradient(params, gather_batch(cube, grid, idx), grads);
    }
    if (!std::isfinite(loss)) {
      throw NumericError("training diverged: loss is " + std::to_string(loss) + " at epoch " +
                         std::to_string(epoch));
    }
    adam_step<float>(adam, params, grads);

    if (epoch % cfg.eval_every == 0 || epoch == cfg.iterations) {
      const double value = evaluate(cube, spec, params, cfg.precision);
      if (std::isnan(value)) {
        throw NumericError("network output is NaN at epoch " + std::to_string(epoch));
      }
      if (value > best.psnr || best.history.empty()) {
        best.psnr = value;
        best.epoch = epoch;
        best.params = params;
      }
      best.history.push_back({epoch, value, best.psnr});
      if (progress) progress(best.history.back());
    }
  }
  return best;
}

std::vector<Candidate> default_candidates() {
  std::vector<Candidate> out;
  for (int layers : {5, 10, 15, 20, 25})
    for (int width : {20, 40, 60, 100}) out.push_back({layers, width});
  return out;
}

SearchResult architecture_search(const HyperCube& cube, double budget_bpppb,
                                 std::span<const Candidate> candidates, const TrainConfig& probe) {
  probe.validate();
  const std::size_t bits = bits_per_param(probe.precision);
  auto spec_for = [&](const Candidate& cand) {
    SirenSpec spec;
    spec.n_hidden = cand.n_hidden;
    spec.hidden_width = cand.hidden_width;
    spec.out_dim = static_cast<int>(cube.bands());
    return spec;
  };

  SearchResult result;
  for (const auto& cand : candidates) {
    // the header stores both fields in one byte
    if (cand.n_hidden < 1 || cand.n_hidden > 255 || cand.hidden_width < 1 ||
        cand.hidden_width > 255) {
      continue;
    }
    const std::size_t n = param_count(spec_for(cand));
    const double rate = bpppb(n, bits, cube.width(), cube.height(), cube.bands());
    if (rate <= budget_bpppb) {
      result.probes.push_back({cand, n, rate, std::numeric_limits<double>::quiet_NaN()});
    }
  }
  if (result.probes.empty()) {
    throw ArgumentError("no candidate architecture fits the budget of " +
                        std::to_string(budget_bpppb) + " bpppb");
  }
  if (result.probes.size() == 1) {
    result.spec = spec_for(result.probes.front().candidate);
    return result;
  }

  std::size_t winner = 0;
  for (std::size_t i = 0; i < result.probes.size(); ++i) {
    auto& pr = result.probes[i];
    pr.psnr = overfit(cube, spec_for(pr.candidate), probe).psnr;
    if (i == 0) continue;
    const auto& w = result.probes[winner];
    const bool better =
        pr.psnr > w.psnr ||
        (pr.psnr == w.psnr &&
         (pr.params < w.params ||
          (pr.params == w.params && pr.candidate.n_hidden < w.candidate.n_hidden)));
    if (better) winner = i;
  }
  result.spec = spec_for(result.probes[winner].candidate);
  return result;
}

CompressResult compress(const HyperCube& cube, const CompressTarget& target,
                        const TrainConfig& cfg, const ProgressCallback& progress) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto [normalized, scale] = normalize(cube);

  CompressResult result;
  SirenSpec spec;
  spec.out_dim = static_cast<int>(cube.bands());
  if (const auto* shape = std::get_if<ShapeTarget>(&target)) {
    spec.n_hidden = shape->n_hidden;
    spec.hidden_width = shape->hidden_width;
  } else {
    const auto& budget = std::get<BudgetTarget>(target);
    TrainConfig probe = cfg;
    probe.iterations = budget.probe_iterations;
    result.search = architecture_search(normalized, budget.bpppb, budget.candidates, probe);
    spec = result.search->spec;
  }
  // fail on unencodable shapes before spending time on training
  make_encoded(spec, cube.width(), cube.height(), scale, init_params(spec, 0), Precision::full32);

  result.snapshot = overfit(normalized, spec, cfg, progress);
  result.encoded =
      make_encoded(spec, cube.width(), cube.height(), scale, result.snapshot.params, cfg.precision);
  result.report.compress_seconds = seconds_since(start);

  const auto decode_start = std::chrono::steady_clock::now();
  const HyperCube recon = reconstruct_normalized(result.encoded);
  result.report.decompress_seconds = seconds_since(decode_start);

  result.report.mse = mse(normalized, recon);
  result.report.psnr = psnr_from_mse(result.report.mse);
  result.report.ssim_mean = ssim_mean(normalized, recon);
  result.report.bpppb = bpppb(result.encoded.param_count(), bits_per_param(cfg.precision),
                              cube.width(), cube.height(), cube.bands());
  return result;
}

}  // namespace hsinr
