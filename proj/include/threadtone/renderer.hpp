#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>

#include "threadtone/chord_sampler.hpp"
#include "threadtone/chord_space.hpp"

namespace threadtone {

struct RenderConfig {
  int output_size = 1001;          // odd, so the canvas has a center pixel
  std::uint8_t line_value = 0;
  std::uint8_t background = 255;

  /// Output radius over region radius.
  double scale(const Region& region) const {
    return region.radius > 0 ? 0.5 * (output_size - 1) / region.radius : 1.0;
  }
  void validate() const;
};

/// Draws each chord as a 1-pixel Bresenham line between the scaled pin
/// positions. Pixels take min(existing, line_value), so order and
/// repetition do not matter.
GrayImage render_chords(std::span<const Chord> chords, const PinLayout& layout,
                        const Region& region, const RenderConfig& config = {});
GrayImage render_sequence(const PinSequence& sequence, const PinLayout& layout,
                          const Region& region, const RenderConfig& config = {});
GrayImage render_selection(const ChordSelection& selection, const ChordSpace& space,
                           const Region& region, const RenderConfig& config = {});

/// Sequence file: "P <pins> <shape>\n" then one pin index per line.
void write_sequence(std::ostream& out, const PinSequence& sequence, int pins, Shape shape);
void export_sequence(const PinSequence& sequence, int pins, Shape shape,
                     const std::filesystem::path& path);

struct SequenceFile {
  int pins = 0;
  Shape shape = Shape::circle;
  PinSequence sequence;
};
SequenceFile read_sequence(std::istream& in);
SequenceFile import_sequence(const std::filesystem::path& path);

}  // namespace threadtone
