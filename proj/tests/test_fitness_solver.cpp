#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "threadtone/fitness_solver.hpp"
#include "threadtone/pipeline.hpp"

using namespace threadtone;

namespace {

// P=8 pins on a 17×17 circle with a random target.
SparseSystem toy_system(std::mt19937& rng, double beta = 5.0, double gamma = 10.0,
                        bool random_weights = false) {
  const Region region = make_region(Shape::circle, 8);
  const GrayImage img = oracle::random_image(17, 17, rng);
  const GradientField g = gradient_field(img, region);
  const ChordSpace space = enumerate_chords(place_pins(8, Shape::circle, region), region, 1, &g);
  const TargetVector b = build_target(img, g, region, 0.0);
  PixelWeights w = PixelWeights::Ones(region.n());
  if (random_weights) {
    std::uniform_int_distribution<int> coin(0, 1);
    for (int i = 0; i < w.size(); ++i) w[i] = coin(rng) ? 2.0 : 1.0;
  }
  return assemble_system(space, b, w, chord_regularizer(space, beta, gamma));
}

}  // namespace

TEST_CASE("chord_regularizer") {
  const std::vector<int> spans = {150, 20, 3};
  const std::vector<double> d = {4.0, 1.0, 2.0};
  CHECK(chord_regularizer(spans, d, 300, 0, 0).isZero());
  const Eigen::VectorXd v = chord_regularizer(spans, d, 300, 5, 10);
  CHECK(v[0] == doctest::Approx(13.032653298563167).epsilon(1e-12));
  // shorter span ⇒ larger length term
  const Eigen::VectorXd length_only = chord_regularizer(spans, d, 300, 5, 0);
  CHECK(length_only[2] > length_only[1]);
  CHECK(length_only[1] > length_only[0]);
  // all-zero consistency drops the direction term
  const std::vector<double> zeros(3, 0.0);
  const Eigen::VectorXd flat = chord_regularizer(spans, zeros, 300, 5, 10);
  CHECK(flat.allFinite());
  CHECK((flat - length_only).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS(chord_regularizer(std::vector<int>{}, std::vector<double>{}, 300, 1, 1));
}

TEST_CASE("assemble_system") {
  const std::vector<std::vector<int>> cols = {{3, 7}};
  const SparseSystem sys = assemble_system(cols, Eigen::VectorXd::Zero(10),
                                           Eigen::VectorXd::Ones(10), Eigen::VectorXd::Zero(1));
  CHECK(std::vector<int>(sys.column(0).begin(), sys.column(0).end()) == std::vector<int>{3, 7});
  CHECK(sys.row(3).size() == 1);
  CHECK(sys.row(4).empty());

  const std::vector<std::vector<int>> none;
  CHECK_THROWS_AS(assemble_system(none, Eigen::VectorXd::Zero(10), Eigen::VectorXd::Ones(10),
                                  Eigen::VectorXd::Zero(0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(assemble_system(cols, Eigen::VectorXd::Zero(10), Eigen::VectorXd::Ones(9),
                                  Eigen::VectorXd::Zero(1)),
                  std::invalid_argument);
  const std::vector<std::vector<int>> bad = {{10}};
  CHECK_THROWS_AS(assemble_system(bad, Eigen::VectorXd::Zero(10), Eigen::VectorXd::Ones(10),
                                  Eigen::VectorXd::Zero(1)),
                  std::invalid_argument);
}

TEST_CASE("A·1 counts covering chords per pixel") {
  std::mt19937 rng(1);
  const SparseSystem sys = toy_system(rng);
  std::vector<int> count(sys.n, 0);
  for (int c = 0; c < sys.m; ++c)
    for (int p : sys.column(c)) ++count[p];
  const Eigen::VectorXd covered = apply_coverage(sys, Eigen::VectorXd::Ones(sys.m));
  for (int p = 0; p < sys.n; ++p) CHECK(covered[p] == count[p]);

  const Eigen::MatrixXd A = oracle::dense_coverage(sys);
  const Eigen::VectorXd r = Eigen::VectorXd::Random(sys.n);
  CHECK((apply_coverage_transpose(sys, r) - A.transpose() * r).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("one chord, one pixel: closed form") {
  const std::vector<std::vector<int>> cols = {{0}};
  for (double v : {0.0, 0.5, 3.0}) {
    Eigen::VectorXd b(1);
    b << 200.0;
    const SparseSystem sys =
        assemble_system(cols, b, Eigen::VectorXd::Ones(1), Eigen::VectorXd::Constant(1, v));
    const SolveResult res = solve_fitness(sys, {1e-12, 50});
    CHECK(res.f[0] == doctest::Approx(200.0 / (1 + v * v)).epsilon(1e-12));
  }
}

TEST_CASE("two chords on one pixel split the value evenly") {
  const std::vector<std::vector<int>> cols = {{0}, {0}};
  Eigen::VectorXd b(1);
  b << 90.0;
  const SparseSystem sys =
      assemble_system(cols, b, Eigen::VectorXd::Ones(1), Eigen::VectorXd::Zero(2));
  const SolveResult res = solve_fitness(sys, {1e-12, 50});
  // minimum-norm solution of f1 + f2 = 90
  const Eigen::MatrixXd A = oracle::dense_coverage(sys);
  const Eigen::VectorXd min_norm = A.completeOrthogonalDecomposition().solve(b);
  CHECK(res.f[0] == doctest::Approx(45.0));
  CHECK(res.f[1] == doctest::Approx(45.0));
  CHECK((res.f - min_norm).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("iterative solve matches the dense normal-equations solve") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 5; ++trial) {
    const SparseSystem sys = toy_system(rng, 5.0, 10.0, trial % 2 == 1);
    const SolveResult res = solve_fitness(sys, {1e-10, 500});
    const Eigen::VectorXd dense = oracle::dense_solve(sys);
    CHECK((res.f - dense).cwiseAbs().maxCoeff() <= 1e-6);
    CHECK(res.converged);
  }
}

TEST_CASE("objective and analytic gradient") {
  std::mt19937 rng(99);
  const SparseSystem sys = toy_system(rng);
  std::normal_distribution<double> normal(0.0, 10.0);
  for (int trial = 0; trial < 3; ++trial) {
    Eigen::VectorXd f(sys.m);
    for (int c = 0; c < sys.m; ++c) f[c] = normal(rng);
    CHECK(objective(sys, f) == doctest::Approx(oracle::dense_objective(sys, f)).epsilon(1e-12));
    const Eigen::VectorXd grad = objective_gradient(sys, f);
    Eigen::VectorXd fd(sys.m);
    const double h = 1e-3;
    for (int c = 0; c < sys.m; ++c) {
      Eigen::VectorXd up = f, down = f;
      up[c] += h;
      down[c] -= h;
      fd[c] = (objective(sys, up) - objective(sys, down)) / (2 * h);
    }
    CHECK((grad - fd).norm() / fd.norm() <= 1e-4);
  }
}

TEST_CASE("solver never worsens the objective from zero") {
  std::mt19937 rng(5);
  const SparseSystem sys = toy_system(rng);
  const double e0 = objective(sys, Eigen::VectorXd::Zero(sys.m));
  for (int iters : {1, 2, 3, 5, 10}) {
    const SolveResult res = solve_fitness(sys, {1e-14, iters});
    CHECK(res.iterations <= iters);
    CHECK(objective(sys, res.f) <= e0);
  }
}

TEST_CASE("doubling weights on a subset does not raise its residual") {
  std::mt19937 rng(8);
  const SparseSystem base = toy_system(rng);
  SparseSystem heavy = base;
  std::vector<int> subset;
  for (int p = 0; p < base.n; p += 4) {
    subset.push_back(p);
    heavy.w[p] = 2.0;
  }
  auto subset_residual = [&](const SparseSystem& sys, const Eigen::VectorXd& f) {
    const Eigen::VectorXd r = apply_coverage(sys, f) - sys.b;
    double s = 0;
    for (int p : subset) s += r[p] * r[p];
    return s;
  };
  const SolveResult a = solve_fitness(base, {1e-14, 500});
  const SolveResult b = solve_fitness(heavy, {1e-14, 500});
  CHECK(subset_residual(heavy, b.f) <= subset_residual(base, a.f));
}

TEST_CASE("constant image gives a finite regularizer and solve") {
  PipelineParams params;
  params.pins = 16;
  const Problem problem = prepare_problem(GrayImage::Constant(31, 31, 128), params);
  CHECK(problem.system.v.allFinite());
  const SolveResult res = solve_fitness(problem.system);
  CHECK(res.f.allFinite());
}

TEST_CASE("non-finite input is reported, not returned") {
  const std::vector<std::vector<int>> cols = {{0}};
  Eigen::VectorXd b(1);
  b << std::numeric_limits<double>::quiet_NaN();
  const SparseSystem sys = assemble_system(cols, b, Eigen::VectorXd::Ones(1), Eigen::VectorXd::Zero(1));
  CHECK_THROWS_AS(solve_fitness(sys), SolverError);
  CHECK_THROWS_AS(solve_fitness(sys, {0.0, 10}), std::invalid_argument);
  CHECK_THROWS_AS(solve_fitness(sys, {1e-6, 0}), std::invalid_argument);
}

TEST_CASE("solver is deterministic") {
  std::mt19937 rng(77);
  const SparseSystem sys = toy_system(rng);
  const SolveResult a = solve_fitness(sys, {1e-8, 3});
  const SolveResult b = solve_fitness(sys, {1e-8, 3});
  CHECK(a.f == b.f);
}

TEST_CASE("reconstruct") {
  std::mt19937 rng(4);
  const Region region = make_region(Shape::circle, 8);
  const GrayImage img = oracle::random_image(17, 17, rng);
  const GradientField g = gradient_field(img, region);
  const ChordSpace space = enumerate_chords(place_pins(8, Shape::circle, region), region, 1, &g);
  const TargetVector b = build_target(img, g, region, 0.0);
  const SparseSystem sys =
      assemble_system(space, b, PixelWeights::Ones(region.n()), Eigen::VectorXd::Zero(space.size()));

  const Reconstruction zero = reconstruct(sys, region, Eigen::VectorXd::Zero(sys.m));
  CHECK(zero.image.isZero());
  for (int i = 0; i < region.n(); ++i) {
    const int expected = std::min(255, static_cast<int>(std::lround(5 * b[i])));
    CHECK(zero.error_map.data()[region.pixel_offset[i]] == expected);
  }

  // consistent target: b = A f for known f
  const Eigen::VectorXd f_true = Eigen::VectorXd::LinSpaced(sys.m, 1.0, 2.0);
  SparseSystem consistent = sys;
  consistent.b = apply_coverage(sys, f_true);
  const SolveResult res = solve_fitness(consistent, {1e-14, 500});
  CHECK(reconstruct(consistent, region, res.f).error_map.isZero());

  // residual of 10 shows up as 50
  const std::vector<std::vector<int>> one = {{0}};
  Eigen::VectorXd b1(1);
  b1 << 30.0;
  const SparseSystem tiny = assemble_system(one, b1, Eigen::VectorXd::Ones(1), Eigen::VectorXd::Zero(1));
  const Region dot = make_region(Shape::circle, 0);
  CHECK(reconstruct(tiny, dot, Eigen::VectorXd::Constant(1, 20.0)).error_map(0, 0) == 50);
}

TEST_CASE("fitness dump lists every chord") {
  const Region region = make_region(Shape::circle, 8);
  const ChordSpace space = enumerate_chords(place_pins(8, Shape::circle, region), region, 1);
  SolveResult res;
  res.f = Eigen::VectorXd::LinSpaced(space.size(), -1, 1);
  std::ostringstream out;
  dump_fitness(out, space, res);
  std::istringstream in(out.str());
  std::string line;
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') ++rows;
  CHECK(rows == space.size());
}
