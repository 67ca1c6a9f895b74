/*
  Decoding, canonical resampling, HSV conversion and quantization.
*/

#include "cden/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "cden/error.hpp"

namespace cden {

namespace {

// Resamples one axis of an interleaved 3-channel double buffer.
// `stride` is the element distance between consecutive samples along the
// axis being resized, `count` the number of lines perpendicular to it.
// Shrinking uses box averaging with fractional edge weights; growing
// picks the nearest source sample.
void resample_axis(const std::vector<double>& src, std::vector<double>& dst,
                   int src_len, int dst_len, int count,
                   std::size_t src_stride, std::size_t src_line,
                   std::size_t dst_stride, std::size_t dst_line) {
  const double scale = static_cast<double>(src_len) / dst_len;
  for (int line = 0; line < count; ++line) {
    const double* s = src.data() + src_line * line;
    double* d = dst.data() + dst_line * line;
    for (int i = 0; i < dst_len; ++i) {
      double out[3];
      if (src_len >= dst_len) {
        const double left = i * scale;
        const double right = (i + 1) * scale;
        const int first = static_cast<int>(std::floor(left));
        const int last = std::min(src_len - 1, static_cast<int>(std::ceil(right)) - 1);
        double acc[3] = {0.0, 0.0, 0.0};
        double wsum = 0.0;
        for (int j = first; j <= last; ++j) {
          const double w = std::min(right, static_cast<double>(j + 1)) -
                           std::max(left, static_cast<double>(j));
          if (w <= 0.0) continue;
          const double* p = s + src_stride * j;
          acc[0] += w * p[0];
          acc[1] += w * p[1];
          acc[2] += w * p[2];
          wsum += w;
        }
        out[0] = acc[0] / wsum;
        out[1] = acc[1] / wsum;
        out[2] = acc[2] / wsum;
      } else {
        int j = static_cast<int>((i + 0.5) * scale);
        j = std::clamp(j, 0, src_len - 1);
        const double* p = s + src_stride * j;
        out[0] = p[0];
        out[1] = p[1];
        out[2] = p[2];
      }
      double* q = d + dst_stride * i;
      q[0] = out[0];
      q[1] = out[1];
      q[2] = out[2];
    }
  }
}

std::uint8_t to_u8(double v) {
  return static_cast<std::uint8_t>(std::clamp<long>(std::lround(v), 0, 255));
}

}  // namespace

PixelGrid decode_image(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) {
    throw DecodeError("decode: empty input");
  }
  const cv::Mat buf(1, static_cast<int>(bytes.size()), CV_8UC1,
                    const_cast<std::uint8_t*>(bytes.data()));
  cv::Mat img = cv::imdecode(buf, cv::IMREAD_COLOR);
  if (img.empty()) {
    throw DecodeError("decode: not a decodable PNG/JPEG image");
  }

  PixelGrid grid;
  grid.width = img.cols;
  grid.height = img.rows;
  grid.pixels.resize(static_cast<std::size_t>(img.cols) * img.rows);
  for (int y = 0; y < img.rows; ++y) {
    const cv::Vec3b* row = img.ptr<cv::Vec3b>(y);
    for (int x = 0; x < img.cols; ++x) {
      // OpenCV decodes to BGR order.
      grid.at(x, y) = Rgb8{row[x][2], row[x][1], row[x][0]};
    }
  }
  return grid;
}

PixelGrid resize_canonical(const PixelGrid& src) {
  if (src.width < 1 || src.height < 1) {
    throw std::invalid_argument("resize: zero-dimension image");
  }
  if (static_cast<std::size_t>(src.width) * src.height != src.pixels.size()) {
    throw std::invalid_argument("resize: pixel buffer does not match dimensions");
  }

  const int n = kCanonicalSize;
  std::vector<double> work(static_cast<std::size_t>(src.width) * src.height * 3);
  for (std::size_t i = 0; i < src.pixels.size(); ++i) {
    work[i * 3 + 0] = src.pixels[i].r;
    work[i * 3 + 1] = src.pixels[i].g;
    work[i * 3 + 2] = src.pixels[i].b;
  }

  // Horizontal pass: width -> n, one line per source row.
  std::vector<double> horiz(static_cast<std::size_t>(n) * src.height * 3);
  resample_axis(work, horiz, src.width, n, src.height,
                /*src_stride=*/3, /*src_line=*/static_cast<std::size_t>(src.width) * 3,
                /*dst_stride=*/3, /*dst_line=*/static_cast<std::size_t>(n) * 3);

  // Vertical pass: height -> n, one line per output column.
  std::vector<double> full(static_cast<std::size_t>(n) * n * 3);
  resample_axis(horiz, full, src.height, n, n,
                /*src_stride=*/static_cast<std::size_t>(n) * 3, /*src_line=*/3,
                /*dst_stride=*/static_cast<std::size_t>(n) * 3, /*dst_line=*/3);

  PixelGrid out;
  out.width = n;
  out.height = n;
  out.pixels.resize(static_cast<std::size_t>(n) * n);
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    out.pixels[i] = Rgb8{to_u8(full[i * 3 + 0]), to_u8(full[i * 3 + 1]),
                         to_u8(full[i * 3 + 2])};
  }
  return out;
}

PixelGrid decode_and_resize(std::span<const std::uint8_t> bytes) {
  return resize_canonical(decode_image(bytes));
}

HsvColor rgb_to_hsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
  const double r = r8 / 255.0;
  const double g = g8 / 255.0;
  const double b = b8 / 255.0;
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;

  HsvColor c;
  c.value = mx;
  c.saturation = mx > 0.0 ? delta / mx : 0.0;
  if (delta > 0.0) {
    double h;
    if (mx == r) {
      h = (g - b) / delta;
    } else if (mx == g) {
      h = (b - r) / delta + 2.0;
    } else {
      h = (r - g) / delta + 4.0;
    }
    h *= 60.0;
    if (h < 0.0) h += 360.0;
    if (h >= 360.0) h -= 360.0;
    c.hue = h;
  }
  return c;
}

int hsv_to_bin(const HsvColor& c, const QuantizationConfig& q) {
  const double hue_step = 360.0 / q.hue_levels;
  const int hq = std::clamp(static_cast<int>(std::floor(c.hue / hue_step)), 0,
                            q.hue_levels - 1);
  const int sq = std::clamp(static_cast<int>(std::floor(c.saturation * q.saturation_levels)),
                            0, q.saturation_levels - 1);
  const int vq = std::clamp(static_cast<int>(std::floor(c.value * q.value_levels)),
                            0, q.value_levels - 1);
  return (hq * q.saturation_levels + sq) * q.value_levels + vq;
}

BinMap quantize_image(const PixelGrid& p, const QuantizationConfig& q) {
  BinMap map;
  map.width = p.width;
  map.height = p.height;
  map.bins.resize(p.pixels.size());
  for (std::size_t i = 0; i < p.pixels.size(); ++i) {
    const Rgb8& px = p.pixels[i];
    map.bins[i] = static_cast<std::uint8_t>(hsv_to_bin(rgb_to_hsv(px.r, px.g, px.b), q));
  }
  return map;
}

}  // namespace cden
