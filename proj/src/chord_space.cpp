#include "threadtone/chord_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "threadtone/raster.hpp"

namespace threadtone {
namespace {

constexpr unsigned kTop = 1, kRight = 2, kBottom = 4, kLeft = 8;

int circular(int a, int b, int pins) {
  const int d = std::abs(a - b) % pins;
  return std::min(d, pins - d);
}

int wrap(int v, int pins) { return ((v % pins) + pins) % pins; }

Eigen::Vector2i round_inside(const Eigen::Vector2d& p, const Region& region) {
  const Eigen::Vector2d center(region.center_x, region.center_y);
  const double r = std::max(1.0, static_cast<double>(region.radius));
  for (double pull = 0.0; pull <= r; pull += 0.25) {
    const Eigen::Vector2d q = center + (p - center) * (1.0 - pull / r);
    const Eigen::Vector2i px(static_cast<int>(std::lround(q.x())), static_cast<int>(std::lround(q.y())));
    if (region.contains(px.x(), px.y())) return px;
  }
  return {region.center_x, region.center_y};
}

void snap_pixels(PinLayout& layout, const Region& region) {
  layout.pixels.clear();
  for (const auto& p : layout.positions) layout.pixels.push_back(round_inside(p, region));
}

}  // namespace

PinLayout place_pins(int pins, Shape shape, const Region& region) {
  if (pins < 3) throw std::invalid_argument("need at least 3 pins, got " + std::to_string(pins));
  PinLayout layout;
  layout.pins = pins;
  layout.shape = shape;
  layout.positions.reserve(pins);
  layout.sides.assign(pins, 0u);
  const double cx = region.center_x;
  const double cy = region.center_y;
  const double r = region.radius;

  if (shape == Shape::circle) {
    for (int t = 0; t < pins; ++t) {
      const double angle = 2.0 * std::numbers::pi * t / pins;
      layout.positions.emplace_back(cx + r * std::cos(angle), cy + r * std::sin(angle));
    }
    snap_pixels(layout, region);
    return layout;
  }

  const double side = 2.0 * r;
  const double spacing = 4.0 * side / pins;
  const double tol = 1e-9 * std::max(1.0, side);
  for (int t = 0; t < pins; ++t) {
    const double s = (t + 0.5) * spacing;
    const int edge = std::min(3, static_cast<int>(s / side));
    const double u = s - edge * side;
    Eigen::Vector2d p;
    switch (edge) {
      case 0: p = {cx - r + u, cy - r}; break;
      case 1: p = {cx + r, cy - r + u}; break;
      case 2: p = {cx + r - u, cy + r}; break;
      default: p = {cx - r, cy + r - u}; break;
    }
    unsigned mask = 0;
    if (std::abs(p.y() - (cy - r)) <= tol) mask |= kTop;
    if (std::abs(p.x() - (cx + r)) <= tol) mask |= kRight;
    if (std::abs(p.y() - (cy + r)) <= tol) mask |= kBottom;
    if (std::abs(p.x() - (cx - r)) <= tol) mask |= kLeft;
    layout.positions.push_back(p);
    layout.sides[t] = mask;
  }
  snap_pixels(layout, region);
  return layout;
}

int chord_distance(const Chord& a, const Chord& b, int pins) {
  // Shifting by ±P per coordinate reduces each coordinate difference to its
  // circular distance; the swap gives the second pairing.
  const int straight = std::max(circular(a.i, b.i, pins), circular(a.j, b.j, pins));
  const int swapped = std::max(circular(a.j, b.i, pins), circular(a.i, b.j, pins));
  return std::min(straight, swapped);
}

std::vector<int> rasterize_chord(const Chord& chord, const PinLayout& layout,
                                 const Region& region) {
  const Chord c = Chord::make(chord.i, chord.j);
  const Eigen::Vector2i from = layout.pixel(c.i);
  const Eigen::Vector2i to = layout.pixel(c.j);
  std::vector<int> pixels;
  bresenham(from.x(), from.y(), to.x(), to.y(), [&](int x, int y) {
    const int idx = region.index_of(x, y);
    if (idx >= 0) pixels.push_back(idx);
  });
  return pixels;
}

double edge_consistency(const Eigen::Vector2d& direction, const GradientField& grad,
                        const Region& region, std::span<const int> pixels) {
  if (pixels.empty()) throw std::invalid_argument("edge consistency of a chord with no pixels");
  double sum = 0.0;
  for (int idx : pixels) {
    const int offset = region.pixel_offset[idx];
    const double gx = grad.gx.data()[offset];
    const double gy = grad.gy.data()[offset];
    sum += std::abs(gx * direction.y() - gy * direction.x());
  }
  return sum / static_cast<double>(pixels.size());
}

std::optional<int> ChordSpace::find(int a, int b) const {
  if (a < 0 || b < 0 || a >= pins() || b >= pins()) return std::nullopt;
  const int id = lookup_[std::size_t(a) * pins() + b];
  if (id < 0) return std::nullopt;
  return id;
}

std::vector<int> ChordSpace::neighborhood(int id, int eps) const {
  if (eps < 0) throw std::invalid_argument("neighborhood radius must be non-negative");
  const int P = pins();
  std::vector<int> ids;
  if (2 * eps >= P) {
    ids.resize(size());
    for (int k = 0; k < size(); ++k) ids[k] = k;
    return ids;
  }
  const Chord& c = chords_[id];
  ids.reserve(std::size_t(2 * eps + 1) * (2 * eps + 1));
  for (int a = -eps; a <= eps; ++a) {
    for (int b = -eps; b <= eps; ++b) {
      if (auto other = find(wrap(c.i + a, P), wrap(c.j + b, P))) ids.push_back(*other);
    }
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

ChordSpace enumerate_chords(const PinLayout& layout, const Region& region, int s_min,
                            const GradientField* grad) {
  ChordSpace space;
  space.layout_ = layout;
  const int P = layout.pins;
  space.lookup_.assign(std::size_t(P) * P, -1);
  space.incident_.assign(P, {});
  for (int i = 0; i < P; ++i) {
    for (int j = i + 1; j < P; ++j) {
      const Chord chord{i, j};
      const int span = chord_span(chord, P);
      if (span < s_min) continue;
      if (layout.shape == Shape::square && (layout.sides[i] & layout.sides[j]) != 0) continue;
      ChordGeometry geo;
      geo.pixels = rasterize_chord(chord, layout, region);
      if (geo.pixels.empty()) continue;
      geo.span = span;
      const Eigen::Vector2d d = layout.positions[j] - layout.positions[i];
      geo.direction = d.norm() > 0 ? Eigen::Vector2d(d.normalized()) : Eigen::Vector2d(1, 0);
      if (grad) geo.edge_consistency = edge_consistency(geo.direction, *grad, region, geo.pixels);
      const int id = space.size();
      space.chords_.push_back(chord);
      space.geometry_.push_back(std::move(geo));
      space.lookup_[std::size_t(i) * P + j] = id;
      space.lookup_[std::size_t(j) * P + i] = id;
    }
  }
  for (int id = 0; id < space.size(); ++id) {
    const Chord& c = space.chords_[id];
    space.incident_[c.i].emplace_back(c.j, id);
    space.incident_[c.j].emplace_back(c.i, id);
  }
  for (auto& list : space.incident_) std::sort(list.begin(), list.end());
  return space;
}

}  // namespace threadtone
