#pragma once

#include <optional>
#include <string>

#include "threadtone/chord_sampler.hpp"
#include "threadtone/chord_space.hpp"
#include "threadtone/fitness_solver.hpp"
#include "threadtone/image_pipeline.hpp"
#include "threadtone/renderer.hpp"

namespace threadtone {

enum class Sampler { connected, disconnected, greedy };

const char* to_string(Sampler sampler);
Sampler parse_sampler(const std::string& name);

struct PipelineParams {
  CropSpec crop;
  int pins = 300;
  int min_span = 1;
  double alpha = 0.0;
  double beta = 5.0;
  double gamma = 10.0;
  double temperature = 30.0;
  int eps = 2;
  SolverOptions solver;
  GreedyParams greedy;

  void validate() const;
};

/// Everything derived from the input before the solve.
struct Problem {
  Cropped cropped;
  GrayImage inverted;
  GradientField gradient;
  TargetVector target;
  PixelWeights weights;
  ChordSpace space;
  SparseSystem system;

  const Region& region() const { return cropped.region; }
};

/// Crops, inverts, builds the target and weights, enumerates chords and
/// assembles the regularized system. `mask` must match the cropped size.
Problem prepare_problem(const GrayImage& image, const PipelineParams& params,
                        const std::optional<GrayImage>& mask = std::nullopt);

struct Painting {
  Sampler sampler = Sampler::connected;
  PinSequence sequence;             // connected and greedy
  ChordSelection selection;         // disconnected
  bool terminated_early = false;    // greedy only

  int chord_count() const {
    return sampler == Sampler::disconnected ? static_cast<int>(selection.chords.size())
                                            : sequence.chord_count();
  }
};

/// Runs one sampler with budget k. The fitness-based samplers use `fitness`;
/// the greedy baseline ignores it.
Painting paint(const Problem& problem, const FitnessVector& fitness, Sampler sampler, int k,
               int start_pin, const PipelineParams& params);

/// Chord ids drawn by a painting, in drawing order.
std::vector<int> painting_chords(const Problem& problem, const Painting& painting);

GrayImage render(const Problem& problem, const Painting& painting,
                 const RenderConfig& config = {});

}  // namespace threadtone
