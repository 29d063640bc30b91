#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "threadtone/image.hpp"
#include "threadtone/pipeline.hpp"

namespace threadtone {

struct SsimParams {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 255.0;
};

/// Mean structural similarity over all fully contained Gaussian windows.
double ssim(const RealImage& a, const RealImage& b, const SsimParams& params = {});
double ssim(const GrayImage& a, const GrayImage& b, const SsimParams& params = {});

/// Normalized 1-D Gaussian taps on [-radius, radius].
Eigen::VectorXd gaussian_kernel(double sigma, int radius);

/// Separable Gaussian blur with replicated borders.
RealImage gaussian_blur(const RealImage& img, double sigma, int radius);

/// Box-filter resampling: each output pixel is the area-weighted mean of the
/// source pixels its footprint overlaps.
RealImage resize_area(const RealImage& img, int width, int height);

struct EvalParams {
  int size = 201;
  double blur_sigma = 2.0;
  SsimParams ssim;
};

/// Resizes both images to size², optionally blurs them (radius 3σ), then
/// compares with SSIM.
double evaluate_pair(const GrayImage& input, const GrayImage& painting, bool blur,
                     const EvalParams& params = {});

struct ReportRow {
  std::string image;
  Sampler method = Sampler::connected;
  int chord_count = 0;
  int budget = 0;
  bool terminated_early = false;
  double ssim_original = 0.0;
  double ssim_blurred = 0.0;
};

inline constexpr std::array<Sampler, 3> kCompared = {Sampler::greedy, Sampler::connected,
                                                     Sampler::disconnected};

struct WinCounts {
  int original = 0;
  int blurred = 0;
};

struct SSIMReport {
  std::vector<ReportRow> rows;

  void sort_rows();
  /// Per method, how many images it scored best on (ties go to the method
  /// listed first in kCompared).
  std::array<WinCounts, 3> win_counts() const;
  std::vector<std::string> images() const;
  const ReportRow* find(const std::string& image, Sampler method) const;
};

struct CompareParams {
  PipelineParams pipeline;
  std::optional<int> chords;   // auto from the gray level when empty
  int start_pin = 0;
  RenderConfig render;
  EvalParams eval;
};

/// Runs the greedy baseline and both fitness samplers on one image at the
/// same budget and scores each painting against the cropped input (outside
/// pixels set to the background).
std::vector<ReportRow> compare_methods(const std::string& name, const GrayImage& input,
                                       const CompareParams& params);

void write_csv(std::ostream& out, const SSIMReport& report);
void write_table(std::ostream& out, const SSIMReport& report);

}  // namespace threadtone
