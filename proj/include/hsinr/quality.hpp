#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "hsinr/cube.hpp"

namespace hsinr {

// Mean squared difference over every element.
double mse(const HyperCube& a, const HyperCube& b);
double mse(std::span<const float> a, std::span<const float> b);

// 10 log10(peak^2 / mse); +inf when mse == 0.
double psnr_from_mse(double mse_value, double peak = 1.0);
double psnr(const HyperCube& a, const HyperCube& b, double peak = 1.0);

inline constexpr double kSsimK1 = 0.01;
inline constexpr double kSsimK2 = 0.03;

// Whole-band SSIM from global mean, variance and covariance (population
// moments), C1 = (K1 L)^2, C2 = (K2 L)^2.
double ssim_band(std::span<const float> x, std::span<const float> y, double dynamic_range = 1.0);

// Per-band SSIM averaged over bands.
double ssim_mean(const HyperCube& a, const HyperCube& b, double dynamic_range = 1.0);
std::vector<double> ssim_per_band(const HyperCube& a, const HyperCube& b,
                                  double dynamic_range = 1.0);

// Bits per pixel per band: n_params * bits / (width * height * bands).
double bpppb(std::size_t n_params, std::size_t bits_per_param, std::size_t width,
             std::size_t height, std::size_t bands);

struct QualityReport {
  double mse = 0.0;
  double psnr = 0.0;
  double ssim_mean = 0.0;
  double bpppb = 0.0;  // 0 when the report has no rate (metrics on two cubes)
  double compress_seconds = 0.0;
  double decompress_seconds = 0.0;
};

// One key=value per line. PSNR of identical cubes is written as "inf".
void write_report(std::ostream& os, const QualityReport& report, bool with_rate = true,
                  bool with_timing = true);

struct PsnrSample {
  int epoch;
  double psnr;
  double best_psnr;
};

// CSV with header "epoch,psnr,best_psnr".
void write_history_csv(std::ostream& os, std::span<const PsnrSample> history);

std::string format_number(double v);

}  // namespace hsinr
