#include "core/ssim.hpp"

#include <cmath>

#include "core/threading.hpp"

namespace ipens {

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = (0.01 * 255) * (0.01 * 255);
constexpr double kC2 = (0.03 * 255) * (0.03 * 255);

std::vector<double> gaussian_kernel() {
  std::vector<double> k(kWindow);
  const int half = kWindow / 2;
  double sum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - half;
    k[i] = std::exp(-d * d / (2.0 * kSigma * kSigma));
    sum += k[i];
  }
  for (double& v : k) v /= sum;
  return k;
}

struct Plane {
  int width = 0, height = 0;
  std::vector<double> data;

  double at(int x, int y) const { return data[std::size_t(y) * width + x]; }
};

// Separable valid-mode Gaussian filter; output is (w-10) x (h-10).
Plane gaussian_valid(const Plane& in, const std::vector<double>& kernel) {
  Plane mid{in.width - kWindow + 1, in.height, {}};
  mid.data.resize(std::size_t(mid.width) * mid.height);
  for (int y = 0; y < in.height; ++y)
    for (int x = 0; x < mid.width; ++x) {
      double acc = 0.0;
      for (int i = 0; i < kWindow; ++i) acc += kernel[i] * in.at(x + i, y);
      mid.data[std::size_t(y) * mid.width + x] = acc;
    }
  Plane out{mid.width, in.height - kWindow + 1, {}};
  out.data.resize(std::size_t(out.width) * out.height);
  for (int y = 0; y < out.height; ++y)
    for (int x = 0; x < out.width; ++x) {
      double acc = 0.0;
      for (int i = 0; i < kWindow; ++i) acc += kernel[i] * mid.at(x, y + i);
      out.data[std::size_t(y) * out.width + x] = acc;
    }
  return out;
}

Plane to_plane(const GrayImage& img) {
  Plane p{img.width, img.height, {}};
  p.data.assign(img.pixels.begin(), img.pixels.end());
  return p;
}

Plane combine(const Plane& a, const Plane& b, double (*fn)(double, double)) {
  Plane out{a.width, a.height, {}};
  out.data.resize(a.data.size());
  for (std::size_t i = 0; i < a.data.size(); ++i) out.data[i] = fn(a.data[i], b.data[i]);
  return out;
}

}  // namespace

double ssim(const GrayImage& a, const GrayImage& b) {
  a.validate();
  b.validate();
  require(a.width == b.width && a.height == b.height, ErrorCode::invalid_argument,
          "ssim inputs must share dimensions");
  require(a.width >= kWindow && a.height >= kWindow, ErrorCode::invalid_argument,
          "ssim inputs must be at least 11x11");

  const std::vector<double> kernel = gaussian_kernel();
  const Plane pa = to_plane(a);
  const Plane pb = to_plane(b);
  const Plane mu_a = gaussian_valid(pa, kernel);
  const Plane mu_b = gaussian_valid(pb, kernel);
  const Plane e_aa = gaussian_valid(combine(pa, pa, [](double x, double y) { return x * y; }), kernel);
  const Plane e_bb = gaussian_valid(combine(pb, pb, [](double x, double y) { return x * y; }), kernel);
  const Plane e_ab = gaussian_valid(combine(pa, pb, [](double x, double y) { return x * y; }), kernel);

  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.data.size(); ++i) {
    const double ma = mu_a.data[i];
    const double mb = mu_b.data[i];
    const double var_a = e_aa.data[i] - ma * ma;
    const double var_b = e_bb.data[i] - mb * mb;
    const double cov = e_ab.data[i] - ma * mb;
    total += ((2 * ma * mb + kC1) * (2 * cov + kC2)) /
             ((ma * ma + mb * mb + kC1) * (var_a + var_b + kC2));
  }
  return total / static_cast<double>(mu_a.data.size());
}

std::optional<std::pair<int, int>> find_rear_frames(const GrayImage& reference,
                                                    const std::vector<GrayImage>& frames,
                                                    const RearFrameConfig& cfg) {
  require(!frames.empty(), ErrorCode::invalid_argument, "no frames to scan");
  const GrayImage ref = resize_to_width(reference, cfg.down_width);

  std::vector<uint8_t> flagged(frames.size(), 0);
  parallel_for(frames.size(), cfg.threads, [&](std::size_t i) {
    const GrayImage frame = resize_to_width(frames[i], cfg.down_width);
    const double s_raw = ssim(ref, frame);
    const double s_mirror = ssim(ref, horizontal_flip(frame));
    flagged[i] = (s_mirror - s_raw) > cfg.threshold ? 1 : 0;
  });

  int first = -1, last = -1;
  for (std::size_t i = 0; i < flagged.size(); ++i) {
    if (!flagged[i]) continue;
    if (first < 0) first = static_cast<int>(i);
    last = static_cast<int>(i);
  }
  if (first < 0) return std::nullopt;
  return std::make_pair(first, last);
}

}  // namespace ipens
