#include <algorithm>

#include "tmvis/render/backend.hpp"
#include "tmvis/render/png.hpp"
#include "tmvis/render/raster.hpp"
#include "tmvis/simhash/hash128.hpp"

namespace tmvis::render {

std::string StubBackend::capture(const std::string& uri, Viewport viewport,
                                 std::chrono::milliseconds, std::chrono::milliseconds) {
  if (viewport.width <= 0 || viewport.height <= 0)
    throw RenderFailure("invalid viewport");
  const auto h = simhash::murmur3_x64_128(uri, 0);
  // Keep backgrounds mid-tone so both black and white text stay legible.
  const Rgb background{std::uint8_t(64 + (h.lo & 0x7F)), std::uint8_t(64 + ((h.lo >> 8) & 0x7F)),
                       std::uint8_t(64 + ((h.lo >> 16) & 0x7F))};
  Raster page(viewport.width, viewport.height, background);

  page.fill_rect(0, 0, viewport.width, 96, {255, 255, 255});
  const int scale = 4;
  const int per_line = std::max(1, (viewport.width - 32) / (kGlyphAdvance * scale));
  int y = 16;
  for (std::size_t at = 0; at < uri.size() && y < 96; at += std::size_t(per_line)) {
    draw_text(page, 16, y, std::string_view(uri).substr(at, std::size_t(per_line)), {0, 0, 0},
              scale);
    y += (kGlyphHeight + 2) * scale;
  }
  // A few blocks whose layout depends on the hash, so thumbnails differ visibly.
  for (int i = 0; i < 6; ++i) {
    const std::uint64_t bits = h.hi >> (i * 10);
    const int bx = int(bits % std::uint64_t(std::max(1, viewport.width - 200)));
    const int by = 120 + int((bits >> 4) % std::uint64_t(std::max(1, viewport.height - 320)));
    page.fill_rect(bx, by, 120 + int(bits % 80), 60 + int((bits >> 3) % 120),
                   {std::uint8_t(bits), std::uint8_t(bits >> 2), std::uint8_t(bits >> 5)});
  }
  return encode_png(page);
}

}  // namespace tmvis::render
