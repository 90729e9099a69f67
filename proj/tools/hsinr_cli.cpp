// hsinr: compress hyperspectral cubes into overfitted sine-MLP weights.
//
// Exit codes: 0 success, 1 usage, 2 I/O or format, 3 numeric failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <string>

#include "CLI11.hpp"
#include "hsinr/codec.hpp"
#include "hsinr/cube.hpp"
#include "hsinr/encoder.hpp"
#include "hsinr/error.hpp"
#include "hsinr/quality.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kIo = 2, kNumeric = 3 };

struct CompressArgs {
  std::string input;
  std::string out;
  std::optional<int> layers;
  std::optional<int> width;
  std::optional<double> budget;
  int iters = 10000;
  int probe_iters = 2000;
  int eval_every = 100;
  bool half = false;
  std::optional<std::size_t> sample_window;
  std::optional<double> sample_rate;
  bool fixed_sample = false;
  std::uint64_t seed = 0;
  std::string history;
  bool verbose = false;
};

hsinr::TrainConfig train_config(const CompressArgs& a) {
  hsinr::TrainConfig cfg;
  cfg.iterations = a.iters;
  cfg.eval_every = a.eval_every;
  cfg.seed = a.seed;
  cfg.precision = a.half ? hsinr::Precision::half16 : hsinr::Precision::full32;
  if (a.sample_window || a.sample_rate) {
    hsinr::SampleConfig sc;
    if (a.sample_window) sc.window = *a.sample_window;
    if (a.sample_rate) sc.rate = *a.sample_rate;
    sc.seed = a.seed;
    sc.resample_each_epoch = !a.fixed_sample;
    cfg.sample = sc;
  }
  return cfg;
}

hsinr::ProgressCallback progress_printer(bool verbose) {
  if (!verbose) return {};
  return [](const hsinr::PsnrSample& s) {
    std::cerr << "epoch " << s.epoch << " psnr " << hsinr::format_number(s.psnr) << " best "
              << hsinr::format_number(s.best_psnr) << "\n";
  };
}

int run_compress(const CompressArgs& a) {
  if (a.budget && (a.layers || a.width)) {
    throw CLI::ValidationError("--budget-bpppb cannot be combined with --layers/--width");
  }
  if (!a.budget && !(a.layers && a.width)) {
    throw CLI::ValidationError("compress needs --layers and --width, or --budget-bpppb");
  }
  const auto cube = hsinr::load_cube(a.input);
  hsinr::CompressTarget target;
  if (a.budget) {
    hsinr::BudgetTarget b;
    b.bpppb = *a.budget;
    b.probe_iterations = a.probe_iters;
    target = b;
  } else {
    target = hsinr::ShapeTarget{*a.layers, *a.width};
  }
  const auto result = hsinr::compress(cube, target, train_config(a), progress_printer(a.verbose));
  hsinr::write_encoded(a.out, result.encoded);
  if (!a.history.empty()) {
    std::ofstream csv(a.history);
    if (!csv) throw hsinr::IoError("cannot write " + a.history);
    hsinr::write_history_csv(csv, result.snapshot.history);
  }

  std::cout << "n_hidden=" << int(result.encoded.n_hidden) << "\n"
            << "hidden_width=" << int(result.encoded.hidden_width) << "\n"
            << "params=" << result.encoded.param_count() << "\n"
            << "bits_per_param=" << hsinr::bits_per_param(result.encoded.precision()) << "\n"
            << "file_bytes=" << result.encoded.file_size() << "\n"
            << "best_epoch=" << result.snapshot.epoch << "\n";
  hsinr::write_report(std::cout, result.report);
  return kOk;
}

int run_decompress(const std::string& in, const std::string& out) {
  const auto start = std::chrono::steady_clock::now();
  const auto enc = hsinr::read_encoded(in);
  hsinr::save_cube(out, hsinr::decompress(enc));
  std::cout << "decompress_seconds="
            << hsinr::format_number(
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count())
            << "\n";
  return kOk;
}

int run_metrics(const std::string& orig_path, const std::string& recon_path, bool raw,
                const std::string& encoded_path) {
  const auto orig = hsinr::load_cube(orig_path);
  const auto recon = hsinr::load_cube(recon_path);
  if (!orig.same_shape(recon)) throw hsinr::ArgumentError("cubes differ in dimensions");

  hsinr::QualityReport report;
  if (raw) {
    const double peak = orig.value_range().range() > 0 ? orig.value_range().range() : 1.0;
    report.mse = hsinr::mse(orig, recon);
    report.psnr = hsinr::psnr_from_mse(report.mse, peak);
    report.ssim_mean = hsinr::ssim_mean(orig, recon, peak);
  } else {
    const auto [norm_orig, scale] = hsinr::normalize(orig);
    const auto norm_recon = hsinr::apply_scale(recon, scale);
    report.mse = hsinr::mse(norm_orig, norm_recon);
    report.psnr = hsinr::psnr_from_mse(report.mse);
    report.ssim_mean = hsinr::ssim_mean(norm_orig, norm_recon);
  }
  const bool with_rate = !encoded_path.empty();
  if (with_rate) {
    const auto enc = hsinr::read_encoded(encoded_path);
    report.bpppb = hsinr::bpppb(enc.param_count(), hsinr::bits_per_param(enc.precision()),
                                enc.width, enc.height, enc.bands);
  }
  hsinr::write_report(std::cout, report, with_rate, false);
  return kOk;
}

int run_search(const std::string& input, double budget, int probe_iters, bool half,
               std::uint64_t seed) {
  const auto cube = hsinr::load_cube(input);
  const auto [normalized, scale] = hsinr::normalize(cube);
  hsinr::TrainConfig probe;
  probe.iterations = probe_iters;
  probe.seed = seed;
  probe.precision = half ? hsinr::Precision::half16 : hsinr::Precision::full32;
  const auto candidates = hsinr::default_candidates();
  const auto result = hsinr::architecture_search(normalized, budget, candidates, probe);
  std::cout << "n_hidden,hidden_width,params,bpppb,psnr\n";
  for (const auto& p : result.probes) {
    std::cout << p.candidate.n_hidden << "," << p.candidate.hidden_width << "," << p.params << ","
              << hsinr::format_number(p.bpppb) << "," << hsinr::format_number(p.psnr) << "\n";
  }
  std::cout << "best_n_hidden=" << result.spec.n_hidden << "\n"
            << "best_hidden_width=" << result.spec.hidden_width << "\n";
  return kOk;
}

int run_synth(const std::string& kind, const std::string& dims, std::uint64_t seed,
              const std::string& out) {
  static const std::regex pattern(R"((\d+)x(\d+)x(\d+))");
  std::smatch m;
  if (!std::regex_match(dims, m, pattern)) {
    throw CLI::ValidationError("--dims must look like WxHxC, got '" + dims + "'");
  }
  const auto cube = hsinr::synth_cube(hsinr::parse_synth_kind(kind), std::stoul(m[1]),
                                      std::stoul(m[2]), std::stoul(m[3]), seed);
  hsinr::save_cube(out, cube);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperspectral cube compression with overfitted sine MLPs"};
  app.require_subcommand(1);

  CompressArgs ca;
  auto* compress = app.add_subcommand("compress", "Overfit a network to a cube and write .hsin");
  compress->add_option("--input", ca.input, "Input .raw cube (with .hdr sidecar)")->required();
  compress->add_option("--out", ca.out, "Output .hsin file")->required();
  compress->add_option("--layers", ca.layers, "Hidden layer count")->check(CLI::Range(1, 255));
  compress->add_option("--width", ca.width, "Hidden layer width")->check(CLI::Range(1, 255));
  compress->add_option("--budget-bpppb", ca.budget, "Search architectures within this rate")
      ->check(CLI::PositiveNumber);
  compress->add_option("--iters", ca.iters, "Training iterations")->check(CLI::PositiveNumber);
  compress->add_option("--probe-iters", ca.probe_iters, "Iterations per search probe")
      ->check(CLI::PositiveNumber);
  compress->add_option("--eval-every", ca.eval_every, "Epochs between PSNR evaluations")
      ->check(CLI::PositiveNumber);
  compress->add_flag("--half", ca.half, "Store parameters as binary16");
  compress->add_option("--sample-window", ca.sample_window, "Sampling window side length")
      ->check(CLI::PositiveNumber);
  compress->add_option("--sample-rate", ca.sample_rate, "Fraction of each window per epoch")
      ->check(CLI::Range(0.0, 1.0));
  compress->add_flag("--fixed-sample", ca.fixed_sample, "Draw the sample once instead of per epoch");
  compress->add_option("--seed", ca.seed, "Seed for init and sampling");
  compress->add_option("--history", ca.history, "Write epoch,psnr CSV here");
  compress->add_flag("-v,--verbose", ca.verbose, "Print PSNR evaluations to stderr");

  std::string dec_in, dec_out;
  auto* decompress = app.add_subcommand("decompress", "Reconstruct a cube from .hsin");
  decompress->add_option("--in", dec_in, "Input .hsin file")->required();
  decompress->add_option("--out", dec_out, "Output .raw cube")->required();

  std::string orig, recon, metrics_encoded;
  bool raw_space = false;
  auto* metrics = app.add_subcommand("metrics", "Compare two cubes");
  metrics->add_option("--orig", orig, "Original .raw cube")->required();
  metrics->add_option("--recon", recon, "Reconstructed .raw cube")->required();
  metrics->add_flag("--raw", raw_space, "Compare in raw units with peak = original range");
  metrics->add_option("--encoded", metrics_encoded, "Optional .hsin file for the bpppb line");

  std::string search_input;
  double search_budget = 0.0;
  int search_probe = 2000;
  bool search_half = false;
  std::uint64_t search_seed = 0;
  auto* search = app.add_subcommand("search", "Probe candidate architectures under a budget");
  search->add_option("--input", search_input, "Input .raw cube")->required();
  search->add_option("--budget-bpppb", search_budget, "Rate budget")
      ->required()
      ->check(CLI::PositiveNumber);
  search->add_option("--probe-iters", search_probe, "Iterations per probe")
      ->check(CLI::PositiveNumber);
  search->add_flag("--half", search_half, "Rate computed at 16 bits per parameter");
  search->add_option("--seed", search_seed, "Seed for init");

  std::string kind = "smooth-gradient", dims, synth_out;
  std::uint64_t synth_seed = 0;
  auto* synth = app.add_subcommand("synth", "Write a synthetic cube");
  synth->add_option("--kind", kind, "smooth-gradient | band-sinusoid | random");
  synth->add_option("--dims", dims, "WxHxC")->required();
  synth->add_option("--seed", synth_seed, "Seed");
  synth->add_option("--out", synth_out, "Output .raw cube")->required();

  try {
    app.parse(argc, argv);
    if (*compress) return run_compress(ca);
    if (*decompress) return run_decompress(dec_in, dec_out);
    if (*metrics) return run_metrics(orig, recon, raw_space, metrics_encoded);
    if (*search) return run_search(search_input, search_budget, search_probe, search_half, search_seed);
    if (*synth) return run_synth(kind, dims, synth_seed, synth_out);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const hsinr::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const hsinr::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const hsinr::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumeric;
  } catch (const hsinr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
