#include "hsinr/quality.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "hsinr/error.hpp"

namespace hsinr {

double mse(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) throw ArgumentError("mse: inputs differ in length");
  if (a.empty()) throw ArgumentError("mse: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    sum += d * d;
  }
  return sum / static_cast<double>(a.size());
}

double mse(const HyperCube& a, const HyperCube& b) {
  if (!a.same_shape(b)) throw ArgumentError("mse: cube dimensions differ");
  return mse(a.data(), b.data());
}

double psnr_from_mse(double mse_value, double peak) {
  if (mse_value == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse_value);
}

double psnr(const HyperCube& a, const HyperCube& b, double peak) {
  return psnr_from_mse(mse(a, b), peak);
}

double ssim_band(std::span<const float> x, std::span<const float> y, double dynamic_range) {
  if (x.size() != y.size()) throw ArgumentError("ssim: bands differ in length");
  if (x.empty()) throw ArgumentError("ssim: empty band");
  const double n = static_cast<double>(x.size());

  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;

  double vxx = 0.0, vyy = 0.0, vxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    vxx += dx * dx;
    vyy += dy * dy;
    vxy += dx * dy;
  }
  vxx /= n;
  vyy /= n;
  vxy /= n;

  const double c1 = (kSsimK1 * dynamic_range) * (kSsimK1 * dynamic_range);
  const double c2 = (kSsimK2 * dynamic_range) * (kSsimK2 * dynamic_range);
  return ((2.0 * mx * my + c1) * (2.0 * vxy + c2)) /
         ((mx * mx + my * my + c1) * (vxx + vyy + c2));
}

std::vector<double> ssim_per_band(const HyperCube& a, const HyperCube& b, double dynamic_range) {
  if (!a.same_shape(b)) throw ArgumentError("ssim: cube dimensions differ");
  std::vector<double> out(a.bands());
  for (std::size_t k = 0; k < a.bands(); ++k) out[k] = ssim_band(a.band(k), b.band(k), dynamic_range);
  return out;
}

double ssim_mean(const HyperCube& a, const HyperCube& b, double dynamic_range) {
  const auto per_band = ssim_per_band(a, b, dynamic_range);
  double sum = 0.0;
  for (double s : per_band) sum += s;
  return sum / static_cast<double>(per_band.size());
}

double bpppb(std::size_t n_params, std::size_t bits_per_param, std::size_t width,
             std::size_t height, std::size_t bands) {
  if (n_params == 0 || bits_per_param == 0 || width == 0 || height == 0 || bands == 0) {
    throw ArgumentError("bpppb: arguments must be positive");
  }
  return static_cast<double>(n_params) * static_cast<double>(bits_per_param) /
         (static_cast<double>(width) * static_cast<double>(height) * static_cast<double>(bands));
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_report(std::ostream& os, const QualityReport& r, bool with_rate, bool with_timing) {
  os << "mse=" << format_number(r.mse) << "\n"
     << "psnr=" << format_number(r.psnr) << "\n"
     << "ssim_mean=" << format_number(r.ssim_mean) << "\n";
  if (with_rate) os << "bpppb=" << format_number(r.bpppb) << "\n";
  if (with_timing) {
    os << "compress_seconds=" << format_number(r.compress_seconds) << "\n"
       << "decompress_seconds=" << format_number(r.decompress_seconds) << "\n";
  }
}

void write_history_csv(std::ostream& os, std::span<const PsnrSample> history) {
  os << "epoch,psnr,best_psnr\n";
  for (const auto& s : history) {
    os << s.epoch << "," << format_number(s.psnr) << "," << format_number(s.best_psnr) << "\n";
  }
}

}  // namespace hsinr
