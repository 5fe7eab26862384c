#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "tmvis/render/raster.hpp"

namespace tmvis::render {

class ImageDecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string encode_png(const Raster& image);
/// Throws ImageDecodeError.
Raster decode_png(std::string_view bytes);
/// Width and height from the IHDR chunk, without decoding pixels.
std::optional<std::pair<int, int>> png_dimensions(std::string_view bytes);

}  // namespace tmvis::render
