#include "threadtone/image_pipeline.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace threadtone {

const char* to_string(Shape shape) {
  return shape == Shape::circle ? "circle" : "square";
}

Shape parse_shape(const std::string& name) {
  if (name == "circle") return Shape::circle;
  if (name == "square") return Shape::square;
  throw std::invalid_argument("unknown shape '" + name + "' (expected circle or square)");
}

Region make_region(Shape shape, int radius) {
  if (radius < 0) throw std::invalid_argument("region radius must be non-negative");
  Region region;
  region.shape = shape;
  region.radius = radius;
  region.center_x = radius;
  region.center_y = radius;
  region.width = 2 * radius + 1;
  region.height = 2 * radius + 1;
  const std::size_t total = std::size_t(region.width) * region.height;
  region.inside.assign(total, false);
  region.pixel_index.assign(total, -1);
  const long r2 = long(radius) * radius;
  for (int y = 0; y < region.height; ++y) {
    for (int x = 0; x < region.width; ++x) {
      const long dx = x - radius;
      const long dy = y - radius;
      const bool in = shape == Shape::circle ? dx * dx + dy * dy <= r2 : true;
      if (!in) continue;
      const std::size_t offset = std::size_t(y) * region.width + x;
      region.inside[offset] = true;
      region.pixel_index[offset] = region.n();
      region.pixel_offset.push_back(static_cast<int>(offset));
    }
  }
  return region;
}

Cropped crop_region(const GrayImage& img, const CropSpec& spec) {
  const int width = static_cast<int>(img.cols());
  const int height = static_cast<int>(img.rows());
  if (width == 0 || height == 0) throw std::invalid_argument("cannot crop an empty image");
  const int cx = spec.center_x.value_or(width / 2);
  const int cy = spec.center_y.value_or(height / 2);
  // largest radius that fits around the center; floor(min/2) on odd sizes
  const int radius =
      spec.radius.value_or(std::min({cx, cy, width - 1 - cx, height - 1 - cy}));
  if (radius < 0) throw std::invalid_argument("region radius must be non-negative");
  if (cx - radius < 0 || cy - radius < 0 || cx + radius >= width || cy + radius >= height)
    throw std::out_of_range("region (center " + std::to_string(cx) + "," + std::to_string(cy) +
                            ", radius " + std::to_string(radius) + ") exceeds the " +
                            std::to_string(width) + "x" + std::to_string(height) + " image");
  const int side = 2 * radius + 1;
  return Cropped{img.block(cy - radius, cx - radius, side, side), make_region(spec.shape, radius)};
}

GrayImage fill_outside(const GrayImage& img, const Region& region, std::uint8_t value) {
  GrayImage out = img;
  for (std::size_t p = 0; p < region.inside.size(); ++p)
    if (!region.inside[p]) out.data()[p] = value;
  return out;
}

double region_mean(const GrayImage& img, const Region& region) {
  if (region.n() == 0) throw std::invalid_argument("empty region");
  double sum = 0.0;
  for (int offset : region.pixel_offset) sum += img.data()[offset];
  return sum / region.n();
}

namespace {

GradientField sobel(const GrayImage& img) {
  if (img.rows() < 3 || img.cols() < 3)
    throw std::invalid_argument("gradient needs an image of at least 3x3");
  const Eigen::Index h = img.rows();
  const Eigen::Index w = img.cols();
  auto at = [&](Eigen::Index y, Eigen::Index x) {
    y = std::clamp<Eigen::Index>(y, 0, h - 1);
    x = std::clamp<Eigen::Index>(x, 0, w - 1);
    return static_cast<double>(img(y, x));
  };
  GradientField g{RealImage(h, w), RealImage(h, w), RealImage(h, w)};
  for (Eigen::Index y = 0; y < h; ++y) {
    for (Eigen::Index x = 0; x < w; ++x) {
      g.gx(y, x) = (at(y - 1, x + 1) + 2 * at(y, x + 1) + at(y + 1, x + 1)) -
                   (at(y - 1, x - 1) + 2 * at(y, x - 1) + at(y + 1, x - 1));
      g.gy(y, x) = (at(y + 1, x - 1) + 2 * at(y + 1, x) + at(y + 1, x + 1)) -
                   (at(y - 1, x - 1) + 2 * at(y - 1, x) + at(y - 1, x + 1));
    }
  }
  g.magnitude = (g.gx.array().square() + g.gy.array().square()).sqrt().matrix();
  return g;
}

void rescale(RealImage& magnitude, double max_value) {
  if (max_value <= 0.0) {
    magnitude.setZero();
    return;
  }
  magnitude = (magnitude.array() * (255.0 / max_value)).min(255.0).matrix();
}

}  // namespace

GradientField gradient_field(const GrayImage& img) {
  GradientField g = sobel(img);
  rescale(g.magnitude, g.magnitude.maxCoeff());
  return g;
}

GradientField gradient_field(const GrayImage& img, const Region& region) {
  if (img.rows() != region.height || img.cols() != region.width)
    throw std::invalid_argument("image and region dimensions differ");
  GradientField g = sobel(img);
  double max_value = 0.0;
  for (int offset : region.pixel_offset) max_value = std::max(max_value, g.magnitude.data()[offset]);
  rescale(g.magnitude, max_value);
  return g;
}

TargetVector build_target(const GrayImage& inverted, const GradientField& grad,
                          const Region& region, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("alpha must lie in [0,1], got " + std::to_string(alpha));
  if (inverted.rows() != region.height || inverted.cols() != region.width ||
      grad.magnitude.rows() != region.height || grad.magnitude.cols() != region.width)
    throw std::invalid_argument("target inputs do not match the region dimensions");
  TargetVector b(region.n());
  for (int i = 0; i < region.n(); ++i) {
    const int offset = region.pixel_offset[i];
    b[i] = (1.0 - alpha) * inverted.data()[offset] + alpha * grad.magnitude.data()[offset];
  }
  return b;
}

PixelWeights build_pixel_weights(const Region& region, const std::optional<GrayImage>& mask) {
  PixelWeights w = PixelWeights::Ones(region.n());
  if (!mask) return w;
  if (mask->rows() != region.height || mask->cols() != region.width)
    throw std::invalid_argument("importance mask is " + std::to_string(mask->cols()) + "x" +
                                std::to_string(mask->rows()) + ", region is " +
                                std::to_string(region.width) + "x" +
                                std::to_string(region.height));
  for (int i = 0; i < region.n(); ++i)
    if (mask->data()[region.pixel_offset[i]] > 127) w[i] = 2.0;
  return w;
}

}  // namespace threadtone
