#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "threadtone/chord_space.hpp"
#include "threadtone/fitness_solver.hpp"

namespace threadtone {

class SamplerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered pins visited by a single thread; k chords need k + 1 pins.
struct PinSequence {
  std::vector<int> pins;

  int chord_count() const { return pins.empty() ? 0 : static_cast<int>(pins.size()) - 1; }
  friend bool operator==(const PinSequence&, const PinSequence&) = default;
};

/// Unordered-in-space but ordered-in-time chord ids (disconnected sampling).
struct ChordSelection {
  std::vector<int> chords;
  friend bool operator==(const ChordSelection&, const ChordSelection&) = default;
};

/// Fitness mapped into (0,1), mutated by error diffusion. Chords already
/// drawn are flagged `used` and never selected again.
struct NormalizedFitness {
  Eigen::VectorXd value;
  std::vector<bool> used;
};

/// k = 500 + 10·(255 − avg), rounded.
int estimate_chord_count(double average_gray);
/// Averages the (non-inverted) gray values over the region's inside pixels.
int estimate_chord_count(const GrayImage& img, const Region& region);

/// f̂ = ½(tanh(f/T) + 1)
NormalizedFitness normalize_fitness(const FitnessVector& f, double temperature);

/// Spreads 1 − f̂_selected evenly over the ε-neighbours of `selected`
/// (excluding itself), then marks it used. Returns the diffused error.
double diffuse_error(NormalizedFitness& fitness, const ChordSpace& space, int selected, int eps);

/// Walks from `start_pin`, each step taking the unused chord at the current
/// pin with the highest f̂ (ties: smallest destination pin). Throws
/// SamplerError when the current pin has no unused chord left.
PinSequence sample_connected(NormalizedFitness fitness, const ChordSpace& space, int k,
                             int start_pin, int eps);

/// k pops of the global maximum (ties: smallest id) with diffusion between
/// pops.
ChordSelection sample_disconnected(NormalizedFitness fitness, const ChordSpace& space, int k,
                                   int eps);

struct GreedyParams {
  int start_pin = 0;
  int min_span = 5;      // small-loop exclusion
  int reduction = 15;    // subtracted from each covered pixel
  bool clamp_at_zero = false;  // keep reduced pixels non-negative
};

struct GreedyResult {
  PinSequence sequence;
  bool terminated_early = false;
};

/// Pixel-coverage baseline: at each step pick the destination whose chord
/// covers the largest sum of remaining (inverted) pixel values, then reduce
/// the covered pixels. Reduced pixels may go negative unless
/// `clamp_at_zero` is set. Stops when the best sum is not positive.
GreedyResult sample_greedy_baseline(const GrayImage& inverted, const Region& region,
                                    const ChordSpace& space, int k, const GreedyParams& params = {});

/// Chord ids of consecutive pin pairs. Throws if a pair is not enumerated.
std::vector<int> sequence_chords(const ChordSpace& space, const PinSequence& sequence);

/// Average chord distance over all unordered pairs of the given chords.
double mean_pairwise_distance(const ChordSpace& space, const std::vector<int>& chords);

}  // namespace threadtone
