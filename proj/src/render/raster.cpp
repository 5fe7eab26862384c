#include "tmvis/render/raster.hpp"

#include <algorithm>
#include <stdexcept>

namespace tmvis::render {

Raster::Raster(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw std::invalid_argument("negative raster size");
  pixels_.resize(std::size_t(width) * std::size_t(height) * 3);
  for (std::size_t i = 0; i < pixels_.size(); i += 3) {
    pixels_[i] = fill.r;
    pixels_[i + 1] = fill.g;
    pixels_[i + 2] = fill.b;
  }
}

Rgb Raster::at(int x, int y) const {
  const std::size_t i = (std::size_t(y) * std::size_t(width_) + std::size_t(x)) * 3;
  return {pixels_[i], pixels_[i + 1], pixels_[i + 2]};
}

void Raster::set(int x, int y, Rgb color) {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) return;
  const std::size_t i = (std::size_t(y) * std::size_t(width_) + std::size_t(x)) * 3;
  pixels_[i] = color.r;
  pixels_[i + 1] = color.g;
  pixels_[i + 2] = color.b;
}

void Raster::fill_rect(int x, int y, int w, int h, Rgb color) {
  const int x0 = std::max(x, 0), y0 = std::max(y, 0);
  const int x1 = std::min(x + w, width_), y1 = std::min(y + h, height_);
  for (int yy = y0; yy < y1; ++yy)
    for (int xx = x0; xx < x1; ++xx) set(xx, yy, color);
}

Raster downscale(const Raster& src, int out_width, int out_height) {
  if (out_width <= 0 || out_height <= 0 || src.empty())
    throw std::invalid_argument("downscale needs non-empty source and target sizes");
  Raster out(out_width, out_height);
  const auto in = src.bytes();
  const long long sw = src.width(), sh = src.height();
  for (int oy = 0; oy < out_height; ++oy) {
    const long long y0 = oy * sh / out_height;
    const long long y1 = std::max(y0 + 1, (oy + 1) * sh / out_height);
    for (int ox = 0; ox < out_width; ++ox) {
      const long long x0 = ox * sw / out_width;
      const long long x1 = std::max(x0 + 1, (ox + 1) * sw / out_width);
      unsigned long long sum[3] = {0, 0, 0};
      for (long long y = y0; y < y1; ++y) {
        const std::uint8_t* row = in.data() + (y * sw) * 3;
        for (long long x = x0; x < x1; ++x) {
          sum[0] += row[x * 3];
          sum[1] += row[x * 3 + 1];
          sum[2] += row[x * 3 + 2];
        }
      }
      const unsigned long long n = static_cast<unsigned long long>((y1 - y0) * (x1 - x0));
      out.set(ox, oy,
              {std::uint8_t((sum[0] + n / 2) / n), std::uint8_t((sum[1] + n / 2) / n),
               std::uint8_t((sum[2] + n / 2) / n)});
    }
  }
  return out;
}

}  // namespace tmvis::render
