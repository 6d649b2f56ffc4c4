#include "circlot/hue_imaging.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "circlot/circle_ot.hpp"
#include "circlot/parallel.hpp"
#include "circlot/transfer_map.hpp"

namespace circlot {

HsvPixel rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  double rd = r / 255.0, gd = g / 255.0, bd = b / 255.0;
  double mx = std::max({rd, gd, bd});
  double mn = std::min({rd, gd, bd});
  double delta = mx - mn;

  HsvPixel out;
  out.value = mx;
  out.saturation = mx > 0.0 ? delta / mx : 0.0;
  if (delta == 0.0) {
    out.hue = 0.0;
    return out;
  }
  double h;
  if (mx == rd)
    h = (gd - bd) / delta;
  else if (mx == gd)
    h = (bd - rd) / delta + 2.0;
  else
    h = (rd - gd) / delta + 4.0;
  h *= 60.0;
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h -= 360.0;
  out.hue = h;
  return out;
}

namespace {

// Rebuilds an RGB triple from integer max/min channels and a hue; keeping
// max and min as the original 8-bit values makes saturation and value of
// the result bit-identical to the source pixel.
void rgb_from_hue(double hue, std::uint8_t mx, std::uint8_t mn, std::uint8_t& r,
                  std::uint8_t& g, std::uint8_t& b) {
  double h6 = hue / 60.0;
  if (h6 >= 6.0) h6 -= 6.0;
  if (h6 < 0.0) h6 += 6.0;
  int sector = static_cast<int>(h6);
  if (sector > 5) sector = 5;
  double x = 1.0 - std::abs(std::fmod(h6, 2.0) - 1.0);
  auto mid = static_cast<std::uint8_t>(
      std::lround(mn + x * (static_cast<double>(mx) - static_cast<double>(mn))));
  switch (sector) {
    case 0: r = mx; g = mid; b = mn; break;
    case 1: r = mid; g = mx; b = mn; break;
    case 2: r = mn; g = mx; b = mid; break;
    case 3: r = mn; g = mid; b = mx; break;
    case 4: r = mid; g = mn; b = mx; break;
    default: r = mx; g = mn; b = mid; break;
  }
}

}  // namespace

void hsv_to_rgb(const HsvPixel& hsv, std::uint8_t& r, std::uint8_t& g, std::uint8_t& b) {
  auto mx = static_cast<std::uint8_t>(std::lround(hsv.value * 255.0));
  auto mn = static_cast<std::uint8_t>(std::lround(hsv.value * (1.0 - hsv.saturation) * 255.0));
  rgb_from_hue(hsv.hue, mx, mn, r, g, b);
}

Histogram hue_histogram(const RgbImage& image, std::size_t n_bins) {
  if (n_bins < 2) throw std::invalid_argument("need at least two hue bins");
  std::vector<double> weights(n_bins, 0.0);
  double chromatic = 0.0;
  for (std::size_t p = 0; p < image.pixel_count(); ++p) {
    const std::uint8_t* px = image.pixels.data() + 3 * p;
    HsvPixel hsv = rgb_to_hsv(px[0], px[1], px[2]);
    if (hsv.saturation <= 0.0) continue;
    auto bin = static_cast<std::size_t>(hsv.hue / 360.0 * static_cast<double>(n_bins));
    if (bin >= n_bins) bin = n_bins - 1;
    weights[bin] += 1.0;
    chromatic += 1.0;
  }
  if (chromatic == 0.0) throw std::invalid_argument("image has no chromatic pixels");
  for (double& w : weights) w /= chromatic;
  return Histogram(std::move(weights), Topology::Circular);
}

RgbImage transfer_hue(const RgbImage& source, const RgbImage& target, std::size_t n_bins) {
  Histogram hu = hue_histogram(source, n_bins);
  Histogram ht = hue_histogram(target, n_bins);
  TransferMap map = circular_transfer_map(hu, ht);

  RgbImage out = source;
  parallel_for(source.height, [&](std::size_t y) {
    for (std::size_t x = 0; x < source.width; ++x) {
      const std::uint8_t* px = source.at(x, y);
      HsvPixel hsv = rgb_to_hsv(px[0], px[1], px[2]);
      if (hsv.saturation <= 0.0) continue;
      double pos = map.apply_interpolated(hsv.hue / 360.0);
      double new_hue = pos * 360.0;
      if (new_hue >= 360.0) new_hue -= 360.0;
      std::uint8_t mx = std::max({px[0], px[1], px[2]});
      std::uint8_t mn = std::min({px[0], px[1], px[2]});
      std::uint8_t* q = out.at(x, y);
      rgb_from_hue(new_hue, mx, mn, q[0], q[1], q[2]);
    }
  });
  return out;
}

namespace {

int next_token(std::istream& in) {
  // skips whitespace and #-comments
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  return c;
}

unsigned read_number(std::istream& in) {
  int c = next_token(in);
  if (c == EOF || !std::isdigit(c)) throw std::runtime_error("malformed PPM header");
  unsigned value = 0;
  while (c != EOF && std::isdigit(c)) {
    value = value * 10 + static_cast<unsigned>(c - '0');
    c = in.get();
  }
  if (c != EOF) in.unget();
  return value;
}

}  // namespace

RgbImage read_ppm(std::istream& in) {
  int c0 = next_token(in);
  int c1 = in.get();
  if (c0 != 'P' || (c1 != '3' && c1 != '6')) throw std::runtime_error("not a PPM file");
  bool binary = c1 == '6';

  RgbImage img;
  img.width = read_number(in);
  img.height = read_number(in);
  unsigned maxval = read_number(in);
  if (img.width == 0 || img.height == 0) throw std::runtime_error("empty PPM image");
  if (maxval == 0 || maxval > 255) throw std::runtime_error("unsupported PPM maxval");

  std::size_t count = img.pixel_count() * 3;
  img.pixels.resize(count);
  if (binary) {
    in.get();  // single whitespace after maxval
    in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count)
      throw std::runtime_error("truncated PPM pixel data");
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      unsigned v = read_number(in);
      if (v > maxval) throw std::runtime_error("PPM sample exceeds maxval");
      img.pixels[i] = static_cast<std::uint8_t>(v);
    }
  }
  if (maxval != 255) {
    for (auto& v : img.pixels)
      v = static_cast<std::uint8_t>(std::lround(v * 255.0 / maxval));
  }
  return img;
}

RgbImage read_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_ppm(in);
}

void write_ppm(const RgbImage& image, std::ostream& out, bool binary) {
  out << (binary ? "P6" : "P3") << "\n"
      << image.width << " " << image.height << "\n255\n";
  if (binary) {
    out.write(reinterpret_cast<const char*>(image.pixels.data()),
              static_cast<std::streamsize>(image.pixels.size()));
  } else {
    for (std::size_t p = 0; p < image.pixel_count(); ++p) {
      const std::uint8_t* px = image.pixels.data() + 3 * p;
      out << static_cast<int>(px[0]) << " " << static_cast<int>(px[1]) << " "
          << static_cast<int>(px[2]) << "\n";
    }
  }
  if (!out) throw std::runtime_error("PPM write failed");
}

void write_ppm(const RgbImage& image, const std::string& path, bool binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_ppm(image, out, binary);
}

}  // namespace circlot
