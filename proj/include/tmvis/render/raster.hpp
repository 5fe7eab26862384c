#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tmvis::render {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Packed 8-bit RGB image, row-major, top row first.
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, Rgb fill = {});

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }

  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb color);
  /// Clipped to the image.
  void fill_rect(int x, int y, int w, int h, Rgb color);

  std::span<std::uint8_t> bytes() { return pixels_; }
  std::span<const std::uint8_t> bytes() const { return pixels_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Area-averaging resample to out_width x out_height.
Raster downscale(const Raster& src, int out_width, int out_height);

/// Glyph cell of the built-in 5x7 font at scale 1, including spacing.
inline constexpr int kGlyphAdvance = 6;
inline constexpr int kGlyphHeight = 7;

/// Draws printable ASCII; other bytes render as '?'. Clipped to the image.
void draw_text(Raster& image, int x, int y, std::string_view text, Rgb color, int scale = 1);
int text_width(std::string_view text, int scale = 1);

}  // namespace tmvis::render
