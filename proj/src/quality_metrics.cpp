#include "threadtone/quality_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace threadtone {
namespace {

// Horizontal then vertical correlation with `taps`, keeping only positions
// where the whole window fits.
RealImage filter_valid(const RealImage& img, const Eigen::VectorXd& taps) {
  const Eigen::Index k = taps.size();
  const Eigen::Index h = img.rows() - k + 1;
  const Eigen::Index w = img.cols() - k + 1;
  RealImage horizontal(img.rows(), w);
  for (Eigen::Index x = 0; x < w; ++x) horizontal.col(x) = img.middleCols(x, k) * taps;
  RealImage out(h, w);
  for (Eigen::Index y = 0; y < h; ++y) out.row(y) = taps.transpose() * horizontal.middleRows(y, k);
  return out;
}

// Pixel-footprint overlap weights mapping `in` samples onto `out` samples.
Eigen::MatrixXd area_weights(Eigen::Index in, Eigen::Index out) {
  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(out, in);
  const double ratio = static_cast<double>(in) / static_cast<double>(out);
  for (Eigen::Index o = 0; o < out; ++o) {
    const double lo = o * ratio;
    const double hi = (o + 1) * ratio;
    for (auto i = static_cast<Eigen::Index>(std::floor(lo)); i < in && i < hi; ++i) {
      const double overlap = std::min(hi, double(i + 1)) - std::max(lo, double(i));
      if (overlap > 0) weights(o, i) = overlap / ratio;
    }
  }
  return weights;
}

std::string fixed(double v, int digits = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

}  // namespace

Eigen::VectorXd gaussian_kernel(double sigma, int radius) {
  if (!(sigma > 0) || radius < 0) throw std::invalid_argument("invalid Gaussian kernel");
  Eigen::VectorXd taps(2 * radius + 1);
  for (int t = -radius; t <= radius; ++t) taps[t + radius] = std::exp(-(t * t) / (2 * sigma * sigma));
  return taps / taps.sum();
}

double ssim(const RealImage& a, const RealImage& b, const SsimParams& params) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("SSIM inputs differ in size");
  if (a.rows() < params.window || a.cols() < params.window)
    throw std::invalid_argument("SSIM inputs are smaller than the window");
  const Eigen::VectorXd taps = gaussian_kernel(params.sigma, params.window / 2);
  const double c1 = std::pow(params.k1 * params.dynamic_range, 2);
  const double c2 = std::pow(params.k2 * params.dynamic_range, 2);

  const RealImage mu_a = filter_valid(a, taps);
  const RealImage mu_b = filter_valid(b, taps);
  const RealImage aa = filter_valid(a.cwiseProduct(a), taps);
  const RealImage bb = filter_valid(b.cwiseProduct(b), taps);
  const RealImage ab = filter_valid(a.cwiseProduct(b), taps);

  const auto ma = mu_a.array();
  const auto mb = mu_b.array();
  const auto var_a = aa.array() - ma * ma;
  const auto var_b = bb.array() - mb * mb;
  const auto cov = ab.array() - ma * mb;
  const auto map = ((2 * ma * mb + c1) * (2 * cov + c2)) /
                   ((ma * ma + mb * mb + c1) * (var_a + var_b + c2));
  return map.mean();
}

double ssim(const GrayImage& a, const GrayImage& b, const SsimParams& params) {
  return ssim(to_real(a), to_real(b), params);
}

RealImage gaussian_blur(const RealImage& img, double sigma, int radius) {
  const Eigen::VectorXd taps = gaussian_kernel(sigma, radius);
  const Eigen::Index h = img.rows();
  const Eigen::Index w = img.cols();
  RealImage padded(h + 2 * radius, w + 2 * radius);
  for (Eigen::Index y = 0; y < padded.rows(); ++y) {
    const Eigen::Index sy = std::clamp<Eigen::Index>(y - radius, 0, h - 1);
    for (Eigen::Index x = 0; x < padded.cols(); ++x)
      padded(y, x) = img(sy, std::clamp<Eigen::Index>(x - radius, 0, w - 1));
  }
  return filter_valid(padded, taps);
}

RealImage resize_area(const RealImage& img, int width, int height) {
  if (width < 1 || height < 1) throw std::invalid_argument("resize target must be non-empty");
  if (img.size() == 0) throw std::invalid_argument("cannot resize an empty image");
  return area_weights(img.rows(), height) * img * area_weights(img.cols(), width).transpose();
}

double evaluate_pair(const GrayImage& input, const GrayImage& painting, bool blur,
                     const EvalParams& params) {
  RealImage a = resize_area(to_real(input), params.size, params.size);
  RealImage b = resize_area(to_real(painting), params.size, params.size);
  if (blur) {
    const int radius = static_cast<int>(std::ceil(3.0 * params.blur_sigma));
    a = gaussian_blur(a, params.blur_sigma, radius);
    b = gaussian_blur(b, params.blur_sigma, radius);
  }
  return ssim(a, b, params.ssim);
}

std::vector<ReportRow> compare_methods(const std::string& name, const GrayImage& input,
                                       const CompareParams& params) {
  const Problem problem = prepare_problem(input, params.pipeline);
  const int k = params.chords.value_or(estimate_chord_count(problem.cropped.image, problem.region()));
  const SolveResult solved = solve_fitness(problem.system, params.pipeline.solver);
  const GrayImage reference = fill_outside(problem.cropped.image, problem.region(), params.render.background);

  std::vector<ReportRow> rows;
  for (Sampler method : kCompared) {
    const Painting painting = paint(problem, solved.f, method, k, params.start_pin, params.pipeline);
    const GrayImage canvas = render(problem, painting, params.render);
    ReportRow row;
    row.image = name;
    row.method = method;
    row.budget = k;
    row.chord_count = painting.chord_count();
    row.terminated_early = painting.terminated_early;
    row.ssim_original = evaluate_pair(reference, canvas, false, params.eval);
    row.ssim_blurred = evaluate_pair(reference, canvas, true, params.eval);
    rows.push_back(row);
  }
  return rows;
}

void SSIMReport::sort_rows() {
  std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    if (a.image != b.image) return a.image < b.image;
    const auto rank = [](Sampler s) {
      return std::find(kCompared.begin(), kCompared.end(), s) - kCompared.begin();
    };
    return rank(a.method) < rank(b.method);
  });
}

std::vector<std::string> SSIMReport::images() const {
  std::vector<std::string> names;
  for (const auto& row : rows)
    if (std::find(names.begin(), names.end(), row.image) == names.end()) names.push_back(row.image);
  return names;
}

const ReportRow* SSIMReport::find(const std::string& image, Sampler method) const {
  for (const auto& row : rows)
    if (row.image == image && row.method == method) return &row;
  return nullptr;
}

std::array<WinCounts, 3> SSIMReport::win_counts() const {
  std::array<WinCounts, 3> wins{};
  for (const auto& name : images()) {
    int best_orig = -1, best_blur = -1;
    double orig = -2.0, blur = -2.0;
    for (std::size_t m = 0; m < kCompared.size(); ++m) {
      const ReportRow* row = find(name, kCompared[m]);
      if (!row) continue;
      if (row->ssim_original > orig) {
        orig = row->ssim_original;
        best_orig = static_cast<int>(m);
      }
      if (row->ssim_blurred > blur) {
        blur = row->ssim_blurred;
        best_blur = static_cast<int>(m);
      }
    }
    if (best_orig >= 0) ++wins[best_orig].original;
    if (best_blur >= 0) ++wins[best_blur].blurred;
  }
  return wins;
}

void write_csv(std::ostream& out, const SSIMReport& report) {
  out << "image,method,budget,chords,early_termination,ssim_original,ssim_blurred\n";
  for (const auto& row : report.rows) {
    out << row.image << ',' << to_string(row.method) << ',' << row.budget << ','
        << row.chord_count << ',' << (row.terminated_early ? 1 : 0) << ','
        << fixed(row.ssim_original, 6) << ',' << fixed(row.ssim_blurred, 6) << '\n';
  }
}

void write_table(std::ostream& out, const SSIMReport& report) {
  out << std::left << std::setw(16) << "image" << std::right;
  for (const char* col : {"greedy", "conn", "disconn"}) out << std::setw(9) << col;
  out << "  |";
  for (const char* col : {"greedy", "conn", "disconn"}) out << std::setw(9) << col;
  out << std::setw(8) << "k" << '\n';
  for (const auto& name : report.images()) {
    out << std::left << std::setw(16) << name << std::right;
    int budget = 0;
    std::string note;
    for (Sampler m : kCompared) {
      const ReportRow* row = report.find(name, m);
      out << std::setw(9) << (row ? fixed(row->ssim_original, 3) : "-");
    }
    out << "  |";
    for (Sampler m : kCompared) {
      const ReportRow* row = report.find(name, m);
      out << std::setw(9) << (row ? fixed(row->ssim_blurred, 3) : "-");
      if (row) {
        budget = row->budget;
        if (row->terminated_early)
          note = "  (greedy stopped at " + std::to_string(row->chord_count) + ")";
      }
    }
    out << std::setw(8) << budget << note << '\n';
  }
  const auto wins = report.win_counts();
  out << std::left << std::setw(16) << "wins" << std::right;
  for (const auto& w : wins) out << std::setw(9) << w.original;
  out << "  |";
  for (const auto& w : wins) out << std::setw(9) << w.blurred;
  out << '\n';
}

}  // namespace threadtone
