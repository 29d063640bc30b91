#include "threadtone/pipeline.hpp"

#include <stdexcept>

namespace threadtone {

const char* to_string(Sampler sampler) {
  switch (sampler) {
    case Sampler::connected: return "connected";
    case Sampler::disconnected: return "disconnected";
    case Sampler::greedy: return "greedy";
  }
  return "?";
}

Sampler parse_sampler(const std::string& name) {
  if (name == "connected") return Sampler::connected;
  if (name == "disconnected") return Sampler::disconnected;
  if (name == "greedy") return Sampler::greedy;
  throw std::invalid_argument("unknown sampler '" + name +
                              "' (expected connected, disconnected or greedy)");
}

void PipelineParams::validate() const {
  if (pins < 3) throw std::invalid_argument("pins must be at least 3");
  if (min_span < 1) throw std::invalid_argument("minimum chord span must be at least 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0,1]");
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be non-negative");
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be non-negative");
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  if (eps < 0) throw std::invalid_argument("eps must be non-negative");
  if (!(solver.tol > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
  if (solver.max_iter < 1) throw std::invalid_argument("solver needs at least one iteration");
  if (greedy.reduction < 0) throw std::invalid_argument("greedy reduction must be non-negative");
}

Problem prepare_problem(const GrayImage& image, const PipelineParams& params,
                        const std::optional<GrayImage>& mask) {
  params.validate();
  Problem problem;
  problem.cropped = crop_region(image, params.crop);
  const Region& region = problem.cropped.region;
  problem.inverted = invert(problem.cropped.image);
  problem.gradient = gradient_field(problem.inverted, region);
  problem.target = build_target(problem.inverted, problem.gradient, region, params.alpha);
  problem.weights = build_pixel_weights(region, mask);
  const PinLayout layout = place_pins(params.pins, params.crop.shape, region);
  problem.space = enumerate_chords(layout, region, params.min_span, &problem.gradient);
  const Eigen::VectorXd v = chord_regularizer(problem.space, params.beta, params.gamma);
  problem.system = assemble_system(problem.space, problem.target, problem.weights, v);
  return problem;
}

Painting paint(const Problem& problem, const FitnessVector& fitness, Sampler sampler, int k,
               int start_pin, const PipelineParams& params) {
  Painting painting;
  painting.sampler = sampler;
  switch (sampler) {
    case Sampler::connected:
      painting.sequence = sample_connected(normalize_fitness(fitness, params.temperature),
                                           problem.space, k, start_pin, params.eps);
      break;
    case Sampler::disconnected:
      painting.selection = sample_disconnected(normalize_fitness(fitness, params.temperature),
                                               problem.space, k, params.eps);
      break;
    case Sampler::greedy: {
      GreedyParams greedy = params.greedy;
      greedy.start_pin = start_pin;
      GreedyResult result =
          sample_greedy_baseline(problem.inverted, problem.region(), problem.space, k, greedy);
      painting.sequence = std::move(result.sequence);
      painting.terminated_early = result.terminated_early;
      break;
    }
  }
  return painting;
}

std::vector<int> painting_chords(const Problem& problem, const Painting& painting) {
  if (painting.sampler == Sampler::disconnected) return painting.selection.chords;
  return sequence_chords(problem.space, painting.sequence);
}

GrayImage render(const Problem& problem, const Painting& painting, const RenderConfig& config) {
  if (painting.sampler == Sampler::disconnected)
    return render_selection(painting.selection, problem.space, problem.region(), config);
  return render_sequence(painting.sequence, problem.space.layout(), problem.region(), config);
}

}  // namespace threadtone
