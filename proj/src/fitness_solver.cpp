#include "threadtone/fitness_solver.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

namespace threadtone {

Eigen::VectorXd chord_regularizer(std::span<const int> spans, std::span<const double> consistency,
                                  int pins, double beta, double gamma) {
  if (spans.size() != consistency.size())
    throw std::invalid_argument("span and consistency lists differ in length");
  if (spans.empty()) throw std::invalid_argument("regularizer needs at least one chord");
  if (beta < 0 || gamma < 0) throw std::invalid_argument("beta and gamma must be non-negative");
  double max_d = 0.0;
  for (double d : consistency) max_d = std::max(max_d, d);
  Eigen::VectorXd v(static_cast<Eigen::Index>(spans.size()));
  for (std::size_t k = 0; k < spans.size(); ++k) {
    const double length_term = beta * std::exp(-static_cast<double>(spans[k]) / pins);
    const double direction_term = max_d > 0.0 ? gamma * consistency[k] / max_d : 0.0;
    v[static_cast<Eigen::Index>(k)] = length_term + direction_term;
  }
  return v;
}

Eigen::VectorXd chord_regularizer(const ChordSpace& space, double beta, double gamma) {
  std::vector<int> spans;
  std::vector<double> consistency;
  spans.reserve(space.size());
  consistency.reserve(space.size());
  for (const auto& geo : space.geometry()) {
    spans.push_back(geo.span);
    consistency.push_back(geo.edge_consistency);
  }
  return chord_regularizer(spans, consistency, space.pins(), beta, gamma);
}

SparseSystem assemble_system(std::span<const std::vector<int>> columns, const TargetVector& b,
                             const PixelWeights& w, const Eigen::VectorXd& v) {
  if (columns.empty()) throw std::invalid_argument("system has no chords");
  SparseSystem sys;
  sys.n = static_cast<int>(b.size());
  sys.m = static_cast<int>(columns.size());
  if (w.size() != sys.n)
    throw std::invalid_argument("pixel weights have length " + std::to_string(w.size()) +
                                ", expected " + std::to_string(sys.n));
  if (v.size() != sys.m)
    throw std::invalid_argument("chord weights have length " + std::to_string(v.size()) +
                                ", expected " + std::to_string(sys.m));
  sys.b = b;
  sys.w = w;
  sys.v = v;

  sys.col_start.assign(sys.m + 1, 0);
  std::vector<int> row_count(sys.n, 0);
  for (int c = 0; c < sys.m; ++c) {
    for (int p : columns[c]) {
      if (p < 0 || p >= sys.n)
        throw std::invalid_argument("chord " + std::to_string(c) + " covers pixel " +
                                    std::to_string(p) + " outside [0," + std::to_string(sys.n) +
                                    ")");
      ++row_count[p];
    }
    sys.col_start[c + 1] = sys.col_start[c] + static_cast<int>(columns[c].size());
  }
  sys.col_pixels.reserve(sys.col_start.back());
  for (const auto& col : columns) sys.col_pixels.insert(sys.col_pixels.end(), col.begin(), col.end());

  sys.row_start.assign(sys.n + 1, 0);
  for (int p = 0; p < sys.n; ++p) sys.row_start[p + 1] = sys.row_start[p] + row_count[p];
  sys.row_chords.resize(sys.row_start.back());
  std::vector<int> cursor(sys.row_start.begin(), sys.row_start.end() - 1);
  for (int c = 0; c < sys.m; ++c)
    for (int p : columns[c]) sys.row_chords[cursor[p]++] = c;
  return sys;
}

SparseSystem assemble_system(const ChordSpace& space, const TargetVector& b,
                             const PixelWeights& w, const Eigen::VectorXd& v) {
  std::vector<std::vector<int>> columns;
  columns.reserve(space.size());
  for (const auto& geo : space.geometry()) columns.push_back(geo.pixels);
  return assemble_system(columns, b, w, v);
}

Eigen::VectorXd apply_coverage(const SparseSystem& sys, const Eigen::VectorXd& f) {
  Eigen::VectorXd out(sys.n);
  for (int p = 0; p < sys.n; ++p) {
    double sum = 0.0;
    for (int c : sys.row(p)) sum += f[c];
    out[p] = sum;
  }
  return out;
}

Eigen::VectorXd apply_coverage_transpose(const SparseSystem& sys, const Eigen::VectorXd& r) {
  Eigen::VectorXd out(sys.m);
  for (int c = 0; c < sys.m; ++c) {
    double sum = 0.0;
    for (int p : sys.column(c)) sum += r[p];
    out[c] = sum;
  }
  return out;
}

Eigen::VectorXd apply_normal(const SparseSystem& sys, const Eigen::VectorXd& f) {
  const Eigen::VectorXd weighted = sys.w.array().square() * apply_coverage(sys, f).array();
  return apply_coverage_transpose(sys, weighted) + (sys.v.array().square() * f.array()).matrix();
}

double objective(const SparseSystem& sys, const Eigen::VectorXd& f) {
  const Eigen::VectorXd residual = sys.w.cwiseProduct(apply_coverage(sys, f) - sys.b);
  return residual.squaredNorm() + sys.v.cwiseProduct(f).squaredNorm();
}

Eigen::VectorXd objective_gradient(const SparseSystem& sys, const Eigen::VectorXd& f) {
  const Eigen::VectorXd residual =
      sys.w.array().square() * (apply_coverage(sys, f) - sys.b).array();
  return 2.0 * apply_coverage_transpose(sys, residual) +
         2.0 * (sys.v.array().square() * f.array()).matrix();
}

SolveResult solve_fitness(const SparseSystem& sys, const SolverOptions& options) {
  if (!(options.tol > 0)) throw std::invalid_argument("solver tolerance must be positive");
  if (options.max_iter < 1) throw std::invalid_argument("solver needs at least one iteration");

  const Eigen::VectorXd w2 = sys.w.array().square();
  const Eigen::VectorXd rhs = apply_coverage_transpose(sys, w2.cwiseProduct(sys.b));

  // Jacobi preconditioner: diag(AᵀW²A + V²).
  Eigen::VectorXd diag = sys.v.array().square();
  for (int c = 0; c < sys.m; ++c)
    for (int p : sys.column(c)) diag[c] += w2[p];
  const Eigen::VectorXd inv_diag =
      diag.unaryExpr([](double d) { return d > 0.0 ? 1.0 / d : 1.0; });

  SolveResult result;
  result.f = Eigen::VectorXd::Zero(sys.m);
  const double rhs_norm = rhs.norm();
  if (!std::isfinite(rhs_norm)) throw SolverError("non-finite right-hand side");
  if (rhs_norm == 0.0) {
    result.converged = true;
    return result;
  }

  Eigen::VectorXd r = rhs;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd d = z;
  double rz = r.dot(z);
  result.residual = 1.0;
  while (result.iterations < options.max_iter) {
    const Eigen::VectorXd nd = apply_normal(sys, d);
    const double dnd = d.dot(nd);
    if (!std::isfinite(dnd))
      throw SolverError("non-finite curvature at iteration " + std::to_string(result.iterations));
    if (dnd <= 0.0) break;  // direction in the null space; nothing left to reduce
    const double step = rz / dnd;
    result.f += step * d;
    r -= step * nd;
    ++result.iterations;
    result.residual = r.norm() / rhs_norm;
    if (!std::isfinite(result.residual))
      throw SolverError("non-finite residual at iteration " + std::to_string(result.iterations));
    if (result.residual <= options.tol) break;
    z = inv_diag.cwiseProduct(r);
    const double rz_next = r.dot(z);
    d = z + (rz_next / rz) * d;
    rz = rz_next;
  }
  if (!result.f.allFinite()) throw SolverError("solver produced non-finite fitness values");
  result.residual = (rhs - apply_normal(sys, result.f)).norm() / rhs_norm;
  result.converged = result.residual <= options.tol;
  return result;
}

Reconstruction reconstruct(const SparseSystem& sys, const Region& region, const FitnessVector& f) {
  if (f.size() != sys.m) throw std::invalid_argument("fitness length does not match the system");
  if (region.n() != sys.n) throw std::invalid_argument("region does not match the system");
  const Eigen::VectorXd r = apply_coverage(sys, f);
  Reconstruction out{GrayImage::Zero(region.height, region.width),
                     GrayImage::Zero(region.height, region.width)};
  auto clamp8 = [](double v) {
    return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0) + 0.5);
  };
  for (int i = 0; i < sys.n; ++i) {
    const int offset = region.pixel_offset[i];
    out.image.data()[offset] = clamp8(r[i]);
    out.error_map.data()[offset] = clamp8(5.0 * std::abs(r[i] - sys.b[i]));
  }
  return out;
}

void dump_fitness(std::ostream& out, const ChordSpace& space, const SolveResult& result) {
  out << "# chords " << space.size() << " iterations " << result.iterations << " residual "
      << std::setprecision(6) << std::scientific << result.residual << " converged "
      << (result.converged ? "yes" : "no") << '\n';
  out << "# id i j fitness\n";
  out << std::defaultfloat << std::setprecision(10);
  for (int id = 0; id < space.size(); ++id) {
    const Chord& c = space.chord(id);
    out << id << ' ' << c.i << ' ' << c.j << ' ' << result.f[id] << '\n';
  }
}

}  // namespace threadtone
