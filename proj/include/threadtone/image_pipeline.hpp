#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "threadtone/image.hpp"

namespace threadtone {

enum class Shape { circle, square };

const char* to_string(Shape shape);
Shape parse_shape(const std::string& name);

/// Canvas region inside a cropped image. Pixels are inside when their center
/// lies within `radius` of the center (Euclidean for circles, Chebyshev for
/// squares). Inside pixels get a dense index in scanline order.
struct Region {
  Shape shape = Shape::circle;
  int center_x = 0;
  int center_y = 0;
  int radius = 0;
  int width = 0;
  int height = 0;
  std::vector<bool> inside;        // per pixel, row-major
  std::vector<int> pixel_index;    // per pixel, -1 when outside
  std::vector<int> pixel_offset;   // inside index -> row-major offset

  int n() const { return static_cast<int>(pixel_offset.size()); }
  bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width && y < height && inside[std::size_t(y) * width + x];
  }
  int index_of(int x, int y) const {
    return (x >= 0 && y >= 0 && x < width && y < height)
               ? pixel_index[std::size_t(y) * width + x]
               : -1;
  }
};

/// Builds the region of a given shape for an image of size (2r+1)².
Region make_region(Shape shape, int radius);

struct CropSpec {
  Shape shape = Shape::circle;
  std::optional<int> center_x;
  std::optional<int> center_y;
  std::optional<int> radius;
};

struct Cropped {
  GrayImage image;
  Region region;
};

/// Cuts the (2r+1)² square around the requested center. Defaults to the
/// largest centered region.
Cropped crop_region(const GrayImage& img, const CropSpec& spec = {});

inline GrayImage invert(const GrayImage& img) {
  return img.unaryExpr([](std::uint8_t v) { return static_cast<std::uint8_t>(255 - v); });
}

/// Copy of `img` with every pixel outside `region` replaced by `value`.
GrayImage fill_outside(const GrayImage& img, const Region& region, std::uint8_t value);

/// Mean gray value over the inside pixels.
double region_mean(const GrayImage& img, const Region& region);

struct GradientField {
  RealImage gx;
  RealImage gy;
  RealImage magnitude;  // rescaled to [0,255]
};

/// 3×3 Sobel gradients with replicated borders. The magnitude is rescaled so
/// its maximum maps to 255; when a region is given, the maximum is taken over
/// inside pixels only and outside values saturate.
GradientField gradient_field(const GrayImage& img);
GradientField gradient_field(const GrayImage& img, const Region& region);

using TargetVector = Eigen::VectorXd;
using PixelWeights = Eigen::VectorXd;

/// b_i = (1-α)·I_i + α·|g_i| over inside pixels; `inverted` must already be
/// inverted so that dark input pixels carry large values.
TargetVector build_target(const GrayImage& inverted, const GradientField& grad,
                          const Region& region, double alpha);

/// 2.0 where the mask is brighter than 127, 1.0 elsewhere.
PixelWeights build_pixel_weights(const Region& region,
                                 const std::optional<GrayImage>& importance_mask = std::nullopt);

}  // namespace threadtone
