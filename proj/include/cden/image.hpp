/*
  Image ingestion: decoding, canonical 128x128 resampling, HSV conversion
  and uniform 8x2x2 color quantization.

  Everything downstream of this module works on BinMap, a raster of
  quantized color-bin indices in [0, 32).
*/

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cden {

// Canonical raster side length all images are resampled to.
inline constexpr int kCanonicalSize = 128;

// Total color bins of the default 8x2x2 HSV quantization.
inline constexpr int kBinCount = 32;

struct Rgb8 {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  bool operator==(const Rgb8&) const = default;
};

// Row-major 8-bit RGB raster.
struct PixelGrid {
  int width = 0;
  int height = 0;
  std::vector<Rgb8> pixels;

  const Rgb8& at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  Rgb8& at(int x, int y) {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
};

// hue in degrees [0, 360); saturation and value in [0, 1].
// Achromatic colors (max channel == min channel) carry hue 0.
struct HsvColor {
  double hue = 0.0;
  double saturation = 0.0;
  double value = 0.0;
};

// Uniform HSV quantization grid. The defaults give the 32-bin layout
// used throughout: bin = h_q * 4 + s_q * 2 + v_q.
struct QuantizationConfig {
  int hue_levels = 8;
  int saturation_levels = 2;
  int value_levels = 2;

  int total_bins() const { return hue_levels * saturation_levels * value_levels; }
};

// Row-major map of quantized bin indices, same shape as its source image.
struct BinMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bins;

  std::uint8_t at(int x, int y) const {
    return bins[static_cast<std::size_t>(y) * width + x];
  }
  std::size_t pixel_count() const { return bins.size(); }
};

// Decodes PNG or JPEG bytes into an RGB grid at the source resolution.
// Throws DecodeError when the bytes are not a decodable image.
PixelGrid decode_image(std::span<const std::uint8_t> bytes);

// Resamples to kCanonicalSize x kCanonicalSize, discarding aspect ratio.
// Shrinking axes use area-average (box) filtering; growing axes use
// nearest-neighbor so no new colors are introduced.
// Throws std::invalid_argument for zero-dimension inputs.
PixelGrid resize_canonical(const PixelGrid& src);

// decode_image followed by resize_canonical.
PixelGrid decode_and_resize(std::span<const std::uint8_t> bytes);

// Standard hexcone RGB -> HSV conversion, total on the full channel range.
HsvColor rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b);

// Maps an HSV color to its quantized bin index.
int hsv_to_bin(const HsvColor& c, const QuantizationConfig& q = {});

// Elementwise rgb_to_hsv + hsv_to_bin over the whole grid.
BinMap quantize_image(const PixelGrid& p, const QuantizationConfig& q = {});

}  // namespace cden
