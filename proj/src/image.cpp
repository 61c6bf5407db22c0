#include "gridshift/image.hpp"

#include <png.h>

#include <cctype>
#include <cstring>
#include <fstream>
#include <istream>
#include <sstream>

#include "gridshift/error.hpp"

namespace gridshift {

static_assert(sizeof(Rgb) == 3, "pixel buffers are read and written as packed RGB bytes");

void Image::validate() const {
  if (width == 0 || height == 0) throw Error(ErrorCode::InvalidArgument, "image has zero size");
  if (pixels.size() != width * height) {
    throw Error(ErrorCode::InvalidArgument, "image buffer does not match " + std::to_string(width) + "x" +
                                                std::to_string(height));
  }
}

namespace {

// Netpbm header token, skipping whitespace and '#' comments.
std::size_t read_header_value(std::istream& in, const std::string& path) {
  while (true) {
    const int c = in.peek();
    if (c == '#') {
      std::string skip;
      std::getline(in, skip);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
  }
  std::size_t v = 0;
  if (!(in >> v)) throw Error(ErrorCode::Parse, path + ": malformed netpbm header");
  return v;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  return out;
}

bool has_suffix(const std::string& s, const std::string& suffix) {
  if (s.size() < suffix.size()) return false;
  for (std::size_t i = 0; i < suffix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[s.size() - suffix.size() + i])) != suffix[i]) return false;
  }
  return true;
}

}  // namespace

Image read_ppm(const std::string& path) {
  std::ifstream in = open_in(path);
  char magic[2] = {};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || magic[1] != '6') throw Error(ErrorCode::Parse, path + ": not a binary PPM (P6)");
  const std::size_t w = read_header_value(in, path);
  const std::size_t h = read_header_value(in, path);
  const std::size_t maxval = read_header_value(in, path);
  if (w == 0 || h == 0) throw Error(ErrorCode::Parse, path + ": zero-size image");
  if (maxval != 255) throw Error(ErrorCode::Parse, path + ": only maxval 255 is supported");
  in.get();  // single whitespace before raster
  Image img(w, h);
  in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(w * h * 3));
  if (in.gcount() != static_cast<std::streamsize>(w * h * 3)) throw Error(ErrorCode::Parse, path + ": truncated raster");
  return img;
}

Image read_png(const std::string& path) {
  png_image png;
  std::memset(&png, 0, sizeof png);
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    throw Error(ErrorCode::Io, path + ": " + png.message);
  }
  png.format = PNG_FORMAT_RGB;
  Image img(png.width, png.height);
  if (!png_image_finish_read(&png, nullptr, img.pixels.data(), 0, nullptr)) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw Error(ErrorCode::Parse, path + ": " + msg);
  }
  return img;
}

Image read_image(const std::string& path) {
  std::ifstream in = open_in(path);
  unsigned char sig[8] = {};
  in.read(reinterpret_cast<char*>(sig), 8);
  if (in.gcount() >= 2 && sig[0] == 'P' && sig[1] == '6') return read_ppm(path);
  if (in.gcount() == 8 && png_sig_cmp(sig, 0, 8) == 0) return read_png(path);
  throw Error(ErrorCode::Parse, path + ": unrecognized image format (expected PNG or P6 PPM)");
}

void write_ppm(const std::string& path, const Image& img) {
  img.validate();
  std::ofstream out = open_out(path);
  out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size() * 3));
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path);
}

void write_png(const std::string& path, const Image& img) {
  img.validate();
  png_image png;
  std::memset(&png, 0, sizeof png);
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(img.width);
  png.height = static_cast<png_uint_32>(img.height);
  png.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&png, path.c_str(), 0, img.pixels.data(), 0, nullptr)) {
    throw Error(ErrorCode::Io, path + ": " + png.message);
  }
}

void write_image(const std::string& path, const Image& img) {
  if (has_suffix(path, ".ppm")) {
    write_ppm(path, img);
  } else {
    write_png(path, img);
  }
}

void write_pgm16(const std::string& path, std::size_t width, std::size_t height, const std::vector<int>& values) {
  if (values.size() != width * height) throw Error(ErrorCode::DimensionMismatch, "label map size mismatch");
  std::ofstream out = open_out(path);
  out << "P5\n" << width << ' ' << height << "\n65535\n";
  std::vector<unsigned char> raster(values.size() * 2);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 0 || values[i] > 65535) throw Error(ErrorCode::OutOfRange, "label does not fit 16 bits");
    raster[2 * i] = static_cast<unsigned char>(values[i] >> 8);
    raster[2 * i + 1] = static_cast<unsigned char>(values[i] & 0xff);
  }
  out.write(reinterpret_cast<const char*>(raster.data()), static_cast<std::streamsize>(raster.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path);
}

std::vector<int> read_pgm16(const std::string& path, std::size_t& width, std::size_t& height) {
  std::ifstream in = open_in(path);
  char magic[2] = {};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || magic[1] != '5') throw Error(ErrorCode::Parse, path + ": not a binary PGM (P5)");
  width = read_header_value(in, path);
  height = read_header_value(in, path);
  if (read_header_value(in, path) != 65535) throw Error(ErrorCode::Parse, path + ": expected maxval 65535");
  in.get();
  std::vector<unsigned char> raster(width * height * 2);
  in.read(reinterpret_cast<char*>(raster.data()), static_cast<std::streamsize>(raster.size()));
  if (in.gcount() != static_cast<std::streamsize>(raster.size())) throw Error(ErrorCode::Parse, path + ": truncated");
  std::vector<int> values(width * height);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = (raster[2 * i] << 8) | raster[2 * i + 1];
  return values;
}

Image downsample2(const Image& img) {
  img.validate();
  if (img.width < 2 || img.height < 2) throw Error(ErrorCode::InvalidArgument, "image too small to downsample");
  Image out(img.width / 2, img.height / 2);
  for (std::size_t y = 0; y < out.height; ++y) {
    for (std::size_t x = 0; x < out.width; ++x) {
      unsigned r = 0, g = 0, b = 0;
      for (std::size_t dy = 0; dy < 2; ++dy) {
        for (std::size_t dx = 0; dx < 2; ++dx) {
          const Rgb& p = img.at(2 * x + dx, 2 * y + dy);
          r += p.r;
          g += p.g;
          b += p.b;
        }
      }
      out.at(x, y) = Rgb{static_cast<std::uint8_t>((r + 2) / 4), static_cast<std::uint8_t>((g + 2) / 4),
                         static_cast<std::uint8_t>((b + 2) / 4)};
    }
  }
  return out;
}

}  // namespace gridshift
