#include "threadtone/chord_sampler.hpp"

#include <cmath>
#include <queue>
#include <string>

namespace threadtone {

int estimate_chord_count(double average_gray) {
  return static_cast<int>(std::lround(500.0 + 10.0 * (255.0 - average_gray)));
}

int estimate_chord_count(const GrayImage& img, const Region& region) {
  return estimate_chord_count(region_mean(img, region));
}

NormalizedFitness normalize_fitness(const FitnessVector& f, double temperature) {
  if (!(temperature > 0))
    throw std::invalid_argument("temperature must be positive, got " + std::to_string(temperature));
  NormalizedFitness out;
  out.value = f.unaryExpr([temperature](double x) { return 0.5 * (std::tanh(x / temperature) + 1.0); });
  out.used.assign(static_cast<std::size_t>(f.size()), false);
  return out;
}

double diffuse_error(NormalizedFitness& fitness, const ChordSpace& space, int selected, int eps) {
  const double err = 1.0 - fitness.value[selected];
  std::vector<int> hood = space.neighborhood(selected, eps);
  std::erase(hood, selected);
  if (!hood.empty() && err != 0.0) {
    const double share = err / static_cast<double>(hood.size());
    for (int id : hood) fitness.value[id] -= share;
  }
  fitness.used[selected] = true;
  return err;
}

PinSequence sample_connected(NormalizedFitness fitness, const ChordSpace& space, int k,
                             int start_pin, int eps) {
  if (k < 1) throw std::invalid_argument("chord budget must be at least 1");
  if (start_pin < 0 || start_pin >= space.pins())
    throw std::invalid_argument("start pin " + std::to_string(start_pin) + " out of range");
  PinSequence seq;
  seq.pins.reserve(std::size_t(k) + 1);
  seq.pins.push_back(start_pin);
  int current = start_pin;
  for (int step = 0; step < k; ++step) {
    int best_id = -1;
    int best_pin = -1;
    for (const auto& [pin, id] : space.incident(current)) {
      if (fitness.used[id]) continue;
      // incident() is ordered by pin, so strict > keeps the smallest pin on ties
      if (best_id < 0 || fitness.value[id] > fitness.value[best_id]) {
        best_id = id;
        best_pin = pin;
      }
    }
    if (best_id < 0)
      throw SamplerError("pin " + std::to_string(current) + " has no unused chord after " +
                         std::to_string(step) + " of " + std::to_string(k) +
                         " chords; the budget is too large for this pin count");
    diffuse_error(fitness, space, best_id, eps);
    seq.pins.push_back(best_pin);
    current = best_pin;
  }
  return seq;
}

ChordSelection sample_disconnected(NormalizedFitness fitness, const ChordSpace& space, int k,
                                   int eps) {
  if (k < 1) throw std::invalid_argument("chord budget must be at least 1");
  if (k > space.size())
    throw std::invalid_argument("chord budget " + std::to_string(k) + " exceeds the " +
                                std::to_string(space.size()) + " available chords");
  struct Entry {
    double value;
    int id;
  };
  auto lower = [](const Entry& a, const Entry& b) {
    return a.value < b.value || (a.value == b.value && a.id > b.id);
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(lower)> queue(lower);
  for (int id = 0; id < space.size(); ++id) queue.push({fitness.value[id], id});

  ChordSelection selection;
  selection.chords.reserve(k);
  while (static_cast<int>(selection.chords.size()) < k) {
    const Entry top = queue.top();
    queue.pop();
    if (fitness.used[top.id] || top.value != fitness.value[top.id]) continue;  // stale
    selection.chords.push_back(top.id);
    std::vector<int> hood = space.neighborhood(top.id, eps);
    diffuse_error(fitness, space, top.id, eps);
    for (int id : hood)
      if (!fitness.used[id]) queue.push({fitness.value[id], id});
  }
  return selection;
}

GreedyResult sample_greedy_baseline(const GrayImage& inverted, const Region& region,
                                    const ChordSpace& space, int k, const GreedyParams& params) {
  if (k < 1) throw std::invalid_argument("chord budget must be at least 1");
  if (params.start_pin < 0 || params.start_pin >= space.pins())
    throw std::invalid_argument("start pin " + std::to_string(params.start_pin) + " out of range");
  if (inverted.rows() != region.height || inverted.cols() != region.width)
    throw std::invalid_argument("image and region dimensions differ");

  std::vector<int> remaining(region.n());
  for (int i = 0; i < region.n(); ++i) remaining[i] = inverted.data()[region.pixel_offset[i]];
  std::vector<bool> used(space.size(), false);

  GreedyResult result;
  result.sequence.pins.push_back(params.start_pin);
  int current = params.start_pin;
  for (int step = 0; step < k; ++step) {
    long best_sum = 0;
    int best_id = -1;
    int best_pin = -1;
    for (const auto& [pin, id] : space.incident(current)) {
      if (used[id] || space.geometry(id).span < params.min_span) continue;
      long sum = 0;
      for (int p : space.geometry(id).pixels) sum += remaining[p];
      if (best_id < 0 || sum > best_sum) {
        best_sum = sum;
        best_id = id;
        best_pin = pin;
      }
    }
    if (best_id < 0 || best_sum <= 0) {
      result.terminated_early = true;
      break;
    }
    for (int p : space.geometry(best_id).pixels) {
      remaining[p] -= params.reduction;
      if (params.clamp_at_zero) remaining[p] = std::max(0, remaining[p]);
    }
    used[best_id] = true;
    result.sequence.pins.push_back(best_pin);
    current = best_pin;
  }
  return result;
}

std::vector<int> sequence_chords(const ChordSpace& space, const PinSequence& sequence) {
  std::vector<int> ids;
  for (std::size_t t = 0; t + 1 < sequence.pins.size(); ++t) {
    auto id = space.find(sequence.pins[t], sequence.pins[t + 1]);
    if (!id)
      throw std::invalid_argument("pins " + std::to_string(sequence.pins[t]) + " and " +
                                  std::to_string(sequence.pins[t + 1]) +
                                  " do not form an enumerated chord");
    ids.push_back(*id);
  }
  return ids;
}

double mean_pairwise_distance(const ChordSpace& space, const std::vector<int>& chords) {
  if (chords.size() < 2) return 0.0;
  double total = 0.0;
  for (std::size_t a = 0; a < chords.size(); ++a)
    for (std::size_t b = a + 1; b < chords.size(); ++b)
      total += chord_distance(space.chord(chords[a]), space.chord(chords[b]), space.pins());
  const double pairs = 0.5 * double(chords.size()) * double(chords.size() - 1);
  return total / pairs;
}

}  // namespace threadtone
