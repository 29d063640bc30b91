#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace threadtone {

/// 8-bit single-channel image, row-major so that `data()` walks scanlines.
/// rows() is the height and cols() the width.
using GrayImage =
    Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Real-valued image used for intermediate quantities (gradients, blur).
using RealImage =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class ImageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rec. 601 luma, rounded to nearest.
inline std::uint8_t luminance(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  const double y = 0.299 * r + 0.587 * g + 0.114 * b;
  return static_cast<std::uint8_t>(y + 0.5);
}

/// Reads a PNG or a binary/ASCII PGM/PPM file and converts it to gray.
/// Alpha is composited over white.
GrayImage load_grayscale(const std::filesystem::path& path);

/// Writes PNG or PGM depending on the extension (".pgm" → PGM, otherwise PNG).
void save_grayscale(const GrayImage& img, const std::filesystem::path& path);

/// Saturating conversion of a real image to 8 bits.
template <typename Derived>
GrayImage to_gray(const Eigen::MatrixBase<Derived>& img) {
  return img.unaryExpr([](double v) {
    return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0) + 0.5);
  });
}

inline RealImage to_real(const GrayImage& img) { return img.cast<double>(); }

}  // namespace threadtone
