#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "threadtone/chord_space.hpp"
#include "threadtone/image_pipeline.hpp"

namespace threadtone {

using FitnessVector = Eigen::VectorXd;

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// v_i = β·exp(−s_i/P) + γ·d_i/max(d). The direction term is dropped when
/// every d_i is zero.
Eigen::VectorXd chord_regularizer(std::span<const int> spans, std::span<const double> consistency,
                                  int pins, double beta, double gamma);
Eigen::VectorXd chord_regularizer(const ChordSpace& space, double beta, double gamma);

/// Binary pixel-by-chord coverage A with target b, pixel weights w and chord
/// weights v. A is stored twice as index lists: column-major (chord → pixels)
/// and row-major (pixel → chords), so both A·f and Aᵀ·r are gathers with a
/// fixed summation order.
struct SparseSystem {
  int n = 0;
  int m = 0;
  std::vector<int> col_start;   // m + 1
  std::vector<int> col_pixels;
  std::vector<int> row_start;   // n + 1
  std::vector<int> row_chords;
  Eigen::VectorXd b;
  Eigen::VectorXd w;
  Eigen::VectorXd v;

  std::span<const int> column(int chord) const {
    return {col_pixels.data() + col_start[chord],
            static_cast<std::size_t>(col_start[chord + 1] - col_start[chord])};
  }
  std::span<const int> row(int pixel) const {
    return {row_chords.data() + row_start[pixel],
            static_cast<std::size_t>(row_start[pixel + 1] - row_start[pixel])};
  }
};

/// Builds the system from per-chord pixel lists.
SparseSystem assemble_system(std::span<const std::vector<int>> columns, const TargetVector& b,
                             const PixelWeights& w, const Eigen::VectorXd& v);
SparseSystem assemble_system(const ChordSpace& space, const TargetVector& b,
                             const PixelWeights& w, const Eigen::VectorXd& v);

/// A·f
Eigen::VectorXd apply_coverage(const SparseSystem& sys, const Eigen::VectorXd& f);
/// Aᵀ·r
Eigen::VectorXd apply_coverage_transpose(const SparseSystem& sys, const Eigen::VectorXd& r);
/// (AᵀW²A + V²)·f
Eigen::VectorXd apply_normal(const SparseSystem& sys, const Eigen::VectorXd& f);

/// E(f) = ||W(Af − b)||² + ||Vf||²
double objective(const SparseSystem& sys, const Eigen::VectorXd& f);
/// ∇E(f) = 2AᵀW²(Af − b) + 2V²f
Eigen::VectorXd objective_gradient(const SparseSystem& sys, const Eigen::VectorXd& f);

struct SolverOptions {
  double tol = 1e-6;
  int max_iter = 500;
};

struct SolveResult {
  FitnessVector f;
  int iterations = 0;
  double residual = 0.0;  // ||rhs − N f|| / ||rhs||
  bool converged = false;
};

/// Minimizes E(f) with Jacobi-preconditioned conjugate gradients on the
/// normal equations, starting from f = 0. Throws SolverError on non-finite
/// iterates.
SolveResult solve_fitness(const SparseSystem& sys, const SolverOptions& options = {});

struct Reconstruction {
  GrayImage image;      // Af, clamped, inverted-gray scale
  GrayImage error_map;  // clamp(5·|Af − b|)
};

/// Renders Af and the amplified residual back onto the region's pixel grid.
/// Outside pixels are 0 in both images.
Reconstruction reconstruct(const SparseSystem& sys, const Region& region, const FitnessVector& f);

/// Plain-text table: a comment header with convergence metadata, then one
/// "id i j fitness" row per chord.
void dump_fitness(std::ostream& out, const ChordSpace& space, const SolveResult& result);

}  // namespace threadtone
