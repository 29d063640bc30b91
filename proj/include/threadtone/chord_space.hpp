#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "threadtone/image_pipeline.hpp"

namespace threadtone {

/// Pins spaced uniformly along the region boundary, in region pixel
/// coordinates. `pixels` holds the nearest pixel center of each pin, pulled
/// inward when rounding lands outside the region. For squares, `sides` holds a
/// bitmask of the boundary sides each pin lies on (top=1, right=2, bottom=4,
/// left=8); corners carry two bits.
struct PinLayout {
  int pins = 0;
  Shape shape = Shape::circle;
  std::vector<Eigen::Vector2d> positions;
  std::vector<Eigen::Vector2i> pixels;
  std::vector<unsigned> sides;

  const Eigen::Vector2i& pixel(int pin) const { return pixels[pin]; }
};

/// Circle: pin t sits at angle 2πt/P from the +x axis. Square: pins are
/// equally spaced by arc length, clockwise from half a spacing past the
/// top-left corner, so with P divisible by 4 no pin lands on a corner.
PinLayout place_pins(int pins, Shape shape, const Region& region);

/// Unordered pin pair. Enumerated chords always have i < j.
struct Chord {
  int i = 0;
  int j = 0;

  static Chord make(int a, int b) { return a < b ? Chord{a, b} : Chord{b, a}; }
  friend bool operator==(const Chord&, const Chord&) = default;
};

/// Circular pin-index distance between the endpoints.
inline int chord_span(const Chord& chord, int pins) {
  const int d = std::abs(chord.i - chord.j) % pins;
  return std::min(d, pins - d);
}

/// Minimal L∞ distance between the equivalence classes of two chords under
/// endpoint swap and shifts by P.
int chord_distance(const Chord& a, const Chord& b, int pins);

struct ChordGeometry {
  std::vector<int> pixels;     // inside-pixel indices on the rasterized line
  int span = 0;
  Eigen::Vector2d direction;   // unit vector from pin i to pin j
  double edge_consistency = 0.0;
};

/// Inside pixels on the Bresenham line between the rounded pin positions,
/// walked from the lower pin index.
std::vector<int> rasterize_chord(const Chord& chord, const PinLayout& layout,
                                 const Region& region);

/// Mean of |g_p × e| over the covered pixels.
double edge_consistency(const Eigen::Vector2d& direction, const GradientField& grad,
                        const Region& region, std::span<const int> pixels);

/// The enumerated chord set plus geometry caches. Immutable after
/// construction.
class ChordSpace {
 public:
  ChordSpace() = default;

  const PinLayout& layout() const { return layout_; }
  int pins() const { return layout_.pins; }
  int size() const { return static_cast<int>(chords_.size()); }
  const Chord& chord(int id) const { return chords_[id]; }
  const std::vector<Chord>& chords() const { return chords_; }
  const ChordGeometry& geometry(int id) const { return geometry_[id]; }
  const std::vector<ChordGeometry>& geometry() const { return geometry_; }

  /// Chord id for a pin pair in either order, if enumerated.
  std::optional<int> find(int a, int b) const;

  /// (other pin, chord id) for every enumerated chord touching `pin`,
  /// ordered by the other pin.
  const std::vector<std::pair<int, int>>& incident(int pin) const { return incident_[pin]; }

  /// Ids of all enumerated chords within chord distance `eps` of chord `id`,
  /// sorted, including `id` itself.
  std::vector<int> neighborhood(int id, int eps) const;

  friend ChordSpace enumerate_chords(const PinLayout&, const Region&, int,
                                     const GradientField*);

 private:
  PinLayout layout_;
  std::vector<Chord> chords_;
  std::vector<ChordGeometry> geometry_;
  std::vector<int> lookup_;  // P×P, -1 when absent
  std::vector<std::vector<std::pair<int, int>>> incident_;
};

/// All pin pairs with span ≥ s_min, minus same-side pairs on a square and
/// chords whose rasterization misses the region. Edge consistency is filled
/// in when a gradient field is supplied.
ChordSpace enumerate_chords(const PinLayout& layout, const Region& region, int s_min = 1,
                            const GradientField* grad = nullptr);

}  // namespace threadtone
