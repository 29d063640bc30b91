#include "threadtone/renderer.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "threadtone/raster.hpp"

namespace threadtone {

void RenderConfig::validate() const {
  if (output_size < 1 || output_size % 2 == 0)
    throw std::invalid_argument("output size must be a positive odd number, got " +
                                std::to_string(output_size));
  if (line_value >= background)
    throw std::invalid_argument("line value must be darker than the background");
}

GrayImage render_chords(std::span<const Chord> chords, const PinLayout& layout,
                        const Region& region, const RenderConfig& config) {
  config.validate();
  const int size = config.output_size;
  GrayImage canvas = GrayImage::Constant(size, size, config.background);
  const double scale = config.scale(region);
  const double mid = 0.5 * (size - 1);
  auto to_canvas = [&](int pin) {
    const Eigen::Vector2d& p = layout.positions[pin];
    return Eigen::Vector2i(
        static_cast<int>(std::lround(mid + (p.x() - region.center_x) * scale)),
        static_cast<int>(std::lround(mid + (p.y() - region.center_y) * scale)));
  };
  for (const Chord& chord : chords) {
    const Chord c = Chord::make(chord.i, chord.j);
    const Eigen::Vector2i a = to_canvas(c.i);
    const Eigen::Vector2i b = to_canvas(c.j);
    bresenham(a.x(), a.y(), b.x(), b.y(), [&](int x, int y) {
      if (x < 0 || y < 0 || x >= size || y >= size) return;
      auto& px = canvas(y, x);
      px = std::min(px, config.line_value);
    });
  }
  return canvas;
}

GrayImage render_sequence(const PinSequence& sequence, const PinLayout& layout,
                          const Region& region, const RenderConfig& config) {
  std::vector<Chord> chords;
  for (std::size_t t = 0; t + 1 < sequence.pins.size(); ++t) {
    const int a = sequence.pins[t];
    const int b = sequence.pins[t + 1];
    if (a < 0 || b < 0 || a >= layout.pins || b >= layout.pins)
      throw std::invalid_argument("sequence refers to pin outside [0," +
                                  std::to_string(layout.pins) + ")");
    chords.push_back(Chord::make(a, b));
  }
  return render_chords(chords, layout, region, config);
}

GrayImage render_selection(const ChordSelection& selection, const ChordSpace& space,
                           const Region& region, const RenderConfig& config) {
  std::vector<Chord> chords;
  chords.reserve(selection.chords.size());
  for (int id : selection.chords) chords.push_back(space.chord(id));
  return render_chords(chords, space.layout(), region, config);
}

void write_sequence(std::ostream& out, const PinSequence& sequence, int pins, Shape shape) {
  out << "P " << pins << ' ' << to_string(shape) << '\n';
  for (int pin : sequence.pins) out << pin << '\n';
}

void export_sequence(const PinSequence& sequence, int pins, Shape shape,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write sequence file " + path.string());
  write_sequence(out, sequence, pins, shape);
  if (!out) throw std::runtime_error("cannot write sequence file " + path.string());
}

SequenceFile read_sequence(std::istream& in) {
  SequenceFile file;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty sequence file");
  std::istringstream header(line);
  std::string tag, shape;
  if (!(header >> tag >> file.pins >> shape) || tag != "P" || file.pins < 3)
    throw std::runtime_error("malformed sequence header: '" + line + "'");
  file.shape = parse_shape(shape);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t used = 0;
    const int pin = std::stoi(line, &used);
    if (used != line.size() || pin < 0 || pin >= file.pins)
      throw std::runtime_error("bad pin entry '" + line + "'");
    file.sequence.pins.push_back(pin);
  }
  return file;
}

SequenceFile import_sequence(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open sequence file " + path.string());
  return read_sequence(in);
}

}  // namespace threadtone
