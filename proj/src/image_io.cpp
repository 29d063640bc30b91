#include "threadtone/image.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <memory>
#include <vector>

#include <png.h>

namespace threadtone {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

std::string lower_ext(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}

// Netpbm header token, skipping whitespace and '#' comments.
int read_pnm_int(std::istream& in) {
  int c = in.peek();
  while (in && (std::isspace(c) || c == '#')) {
    if (c == '#') {
      std::string ignored;
      std::getline(in, ignored);
    } else {
      in.get();
    }
    c = in.peek();
  }
  int value = -1;
  if (!(in >> value) || value < 0) throw ImageError("malformed netpbm header");
  return value;
}

GrayImage load_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageError("cannot open " + path.string());
  char magic[2] = {};
  in.read(magic, 2);
  if (!in || magic[0] != 'P') throw ImageError("not a netpbm file: " + path.string());
  const char kind = magic[1];
  if (kind != '2' && kind != '3' && kind != '5' && kind != '6')
    throw ImageError("unsupported netpbm variant P" + std::string(1, kind));
  const int width = read_pnm_int(in);
  const int height = read_pnm_int(in);
  const int maxval = read_pnm_int(in);
  if (width == 0 || height == 0 || maxval == 0 || maxval > 65535)
    throw ImageError("invalid netpbm dimensions in " + path.string());
  const bool color = (kind == '3' || kind == '6');
  const bool binary = (kind == '5' || kind == '6');
  const int channels = color ? 3 : 1;
  const std::size_t count = std::size_t(width) * height * channels;

  std::vector<int> samples(count);
  if (binary) {
    in.get();  // single whitespace after maxval
    const int bytes = maxval < 256 ? 1 : 2;
    std::vector<unsigned char> raw(count * bytes);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!in) throw ImageError("truncated netpbm data in " + path.string());
    for (std::size_t i = 0; i < count; ++i)
      samples[i] = bytes == 1 ? raw[i] : (raw[2 * i] << 8) | raw[2 * i + 1];
  } else {
    for (auto& s : samples) s = read_pnm_int(in);
  }

  auto to8 = [maxval](int v) {
    return static_cast<std::uint8_t>((std::min(v, maxval) * 255 + maxval / 2) / maxval);
  };
  GrayImage img(height, width);
  for (std::size_t p = 0; p < std::size_t(width) * height; ++p) {
    if (color) {
      img.data()[p] = luminance(to8(samples[3 * p]), to8(samples[3 * p + 1]),
                                to8(samples[3 * p + 2]));
    } else {
      img.data()[p] = to8(samples[p]);
    }
  }
  return img;
}

GrayImage load_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str()))
    throw ImageError("cannot decode " + path.string() + ": " + image.message);
  image.format = PNG_FORMAT_RGBA;
  std::vector<std::uint8_t> rgba(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, rgba.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw ImageError("cannot decode " + path.string() + ": " + msg);
  }
  GrayImage img(image.height, image.width);
  for (std::size_t p = 0; p < std::size_t(image.width) * image.height; ++p) {
    const std::uint8_t* px = &rgba[4 * p];
    // composite over white
    auto over = [a = px[3]](std::uint8_t c) {
      return static_cast<std::uint8_t>((c * a + 255 * (255 - a) + 127) / 255);
    };
    img.data()[p] = luminance(over(px[0]), over(px[1]), over(px[2]));
  }
  return img;
}

}  // namespace

GrayImage load_grayscale(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ImageError("no such file: " + path.string());
  std::ifstream probe(path, std::ios::binary);
  unsigned char sig[8] = {};
  probe.read(reinterpret_cast<char*>(sig), 8);
  if (probe.gcount() >= 8 && png_sig_cmp(sig, 0, 8) == 0) return load_png(path);
  if (probe.gcount() >= 2 && sig[0] == 'P') return load_pnm(path);
  throw ImageError("unsupported image format: " + path.string());
}

void save_grayscale(const GrayImage& img, const std::filesystem::path& path) {
  if (lower_ext(path) == ".pgm") {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ImageError("cannot write " + path.string());
    out << "P5\n" << img.cols() << ' ' << img.rows() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data()), img.size());
    if (!out) throw ImageError("cannot write " + path.string());
    return;
  }
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.cols());
  image.height = static_cast<png_uint_32>(img.rows());
  image.format = PNG_FORMAT_GRAY;
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw ImageError("cannot write " + path.string());
  if (!png_image_write_to_stdio(&image, file.get(), 0, img.data(),
                                static_cast<png_int_32>(img.cols()), nullptr))
    throw ImageError("cannot encode " + path.string() + ": " + image.message);
}

}  // namespace threadtone
