#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "circlot/histogram.hpp"

namespace circlot {

/// 8-bit RGB raster, row-major.
struct RgbImage {
  std::size_t width = 0, height = 0;
  std::vector<std::uint8_t> pixels;  // 3 bytes per pixel

  std::size_t pixel_count() const { return width * height; }
  const std::uint8_t* at(std::size_t x, std::size_t y) const {
    return pixels.data() + 3 * (y * width + x);
  }
  std::uint8_t* at(std::size_t x, std::size_t y) {
    return pixels.data() + 3 * (y * width + x);
  }
};

/// hue in [0,360) degrees, saturation and value in [0,1].
/// Hue is conventionally 0 when saturation is 0.
struct HsvPixel {
  double hue = 0.0;
  double saturation = 0.0;
  double value = 0.0;
};

HsvPixel rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b);
void hsv_to_rgb(const HsvPixel& hsv, std::uint8_t& r, std::uint8_t& g, std::uint8_t& b);

/// Circular hue histogram over chromatic pixels (saturation > 0).
/// Throws if the image has no chromatic pixel.
Histogram hue_histogram(const RgbImage& image, std::size_t n_bins);

/// Applies the circular optimal transfer between the two hue histograms
/// to the source image's hue channel; saturation and value are preserved
/// bit-exactly, achromatic pixels pass through untouched.
RgbImage transfer_hue(const RgbImage& source, const RgbImage& target, std::size_t n_bins = 360);

/// PPM (P6 binary / P3 ASCII, maxval 255) reader and writer.
RgbImage read_ppm(std::istream& in);
RgbImage read_ppm(const std::string& path);
void write_ppm(const RgbImage& image, std::ostream& out, bool binary = true);
void write_ppm(const RgbImage& image, const std::string& path, bool binary = true);

}  // namespace circlot
