#include "tmvis/render/png.hpp"

#include <png.h>

#include <cstring>

namespace tmvis::render {

std::string encode_png(const Raster& image) {
  if (image.empty()) throw std::invalid_argument("cannot encode an empty image");
  png_image desc;
  std::memset(&desc, 0, sizeof desc);
  desc.version = PNG_IMAGE_VERSION;
  desc.width = png_uint_32(image.width());
  desc.height = png_uint_32(image.height());
  desc.format = PNG_FORMAT_RGB;

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&desc, nullptr, &size, 0, image.bytes().data(), 0, nullptr))
    throw std::runtime_error(std::string("PNG sizing failed: ") + desc.message);
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&desc, out.data(), &size, 0, image.bytes().data(), 0,
                                 nullptr))
    throw std::runtime_error(std::string("PNG encoding failed: ") + desc.message);
  out.resize(size);
  return out;
}

Raster decode_png(std::string_view bytes) {
  png_image desc;
  std::memset(&desc, 0, sizeof desc);
  desc.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&desc, bytes.data(), bytes.size()))
    throw ImageDecodeError(std::string("not a PNG: ") + desc.message);
  desc.format = PNG_FORMAT_RGB;
  Raster image(int(desc.width), int(desc.height));
  // Transparent areas composite onto white.
  png_color background{255, 255, 255};
  if (!png_image_finish_read(&desc, &background, image.bytes().data(), 0, nullptr)) {
    png_image_free(&desc);
    throw ImageDecodeError(std::string("PNG decoding failed: ") + desc.message);
  }
  return image;
}

std::optional<std::pair<int, int>> png_dimensions(std::string_view bytes) {
  static constexpr unsigned char kSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  if (bytes.size() < 24 || std::memcmp(bytes.data(), kSignature, 8) != 0 ||
      bytes.substr(12, 4) != "IHDR")
    return std::nullopt;
  const auto be32 = [&](std::size_t at) {
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + at);
    return int((unsigned(p[0]) << 24) | (unsigned(p[1]) << 16) | (unsigned(p[2]) << 8) |
               unsigned(p[3]));
  };
  return std::pair{be32(16), be32(20)};
}

}  // namespace tmvis::render
