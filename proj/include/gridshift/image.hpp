#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gridshift {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// 8-bit RGB, row-major.
struct Image {
  std::size_t width = 0, height = 0;
  std::vector<Rgb> pixels;

  Image() = default;
  Image(std::size_t w, std::size_t h, Rgb fill = {}) : width(w), height(h), pixels(w * h, fill) {}

  Rgb& at(std::size_t x, std::size_t y) { return pixels[y * width + x]; }
  const Rgb& at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }

  // Throws InvalidArgument for zero size or a pixel buffer of the wrong length.
  void validate() const;
  friend bool operator==(const Image&, const Image&) = default;
};

// PNG or binary PPM (P6), chosen by file signature.
Image read_image(const std::string& path);
Image read_ppm(const std::string& path);
Image read_png(const std::string& path);

// Format chosen by extension: ".ppm" writes P6, anything else PNG.
void write_image(const std::string& path, const Image& img);
void write_ppm(const std::string& path, const Image& img);
void write_png(const std::string& path, const Image& img);

// 16-bit binary PGM (P5, maxval 65535, big-endian samples).
void write_pgm16(const std::string& path, std::size_t width, std::size_t height, const std::vector<int>& values);
std::vector<int> read_pgm16(const std::string& path, std::size_t& width, std::size_t& height);

// 2x2 box filter; odd trailing rows/columns are dropped. Means round half-up.
Image downsample2(const Image& img);

}  // namespace gridshift
