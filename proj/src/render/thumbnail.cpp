#include "tmvis/render/thumbnail.hpp"

#include <algorithm>
#include <cctype>

#include "tmvis/render/png.hpp"

namespace tmvis::render {
namespace {

constexpr int kStripPadding = 2;

int scaled_height(const CaptureOptions& options) {
  return std::max(1, options.thumbnail_width * options.viewport.height /
                         std::max(1, options.viewport.width));
}

Thumbnail placeholder(const memento::MementoRecord& record, unsigned attempt,
                      const CaptureOptions& options, std::string error) {
  Raster image(options.thumbnail_width, scaled_height(options), {200, 200, 200});
  const std::string label = "unavailable";
  draw_text(image, (image.width() - text_width(label)) / 2,
            (image.height() - kGlyphHeight) / 2, label, {90, 90, 90});
  Thumbnail thumb{record, encode_png(image), image.width(), image.height(), attempt,
                  ThumbnailStatus::Failed, std::move(error)};
  return thumb;
}

}  // namespace

std::chrono::milliseconds settle_wait_for(const CaptureOptions& options, unsigned attempt) {
  return options.base_settle_wait * std::max(1u, attempt);
}

std::string raw_memento_url(std::string_view uri_m) {
  // .../<14 digits>/<original> -> .../<14 digits>id_/<original>
  for (std::size_t i = 0; i + 15 < uri_m.size(); ++i) {
    if (uri_m[i] != '/') continue;
    std::size_t j = i + 1;
    while (j < uri_m.size() && std::isdigit(static_cast<unsigned char>(uri_m[j]))) ++j;
    if (j - i - 1 == 14 && j < uri_m.size() && uri_m[j] == '/') {
      return std::string(uri_m.substr(0, j)) + "id_" + std::string(uri_m.substr(j));
    }
  }
  return std::string(uri_m);
}

Thumbnail capture_thumbnail(RenderBackend& backend, const memento::MementoRecord& record,
                            unsigned attempt, const CaptureOptions& options) {
  if (attempt < 1) throw std::invalid_argument("render attempts start at 1");
  const std::string target = options.raw_mode ? raw_memento_url(record.uri_m) : record.uri_m;
  try {
    const std::string shot =
        backend.capture(target, options.viewport, settle_wait_for(options, attempt),
                        options.timeout);
    const Raster page = decode_png(shot);
    const Raster small = downscale(page, options.thumbnail_width,
                                   std::max(1, options.thumbnail_width * page.height() /
                                                   std::max(1, page.width())));
    return {record, encode_png(small), small.width(), small.height(), attempt,
            ThumbnailStatus::Ok, {}};
  } catch (const RenderTimeout& e) {
    return placeholder(record, attempt, options, std::string("timeout: ") + e.what());
  } catch (const std::exception& e) {
    return placeholder(record, attempt, options, e.what());
  }
}

void stamp_text(Raster& image, std::string_view text, Corner corner) {
  if (text.empty() || image.empty()) return;
  const int strip_h = kGlyphHeight + 2 * kStripPadding;
  // Truncate so the strip fits the image width.
  const std::size_t max_chars =
      std::size_t(std::max(1, (image.width() - 2 * kStripPadding + 1) / kGlyphAdvance));
  if (text.size() > max_chars) text = text.substr(0, max_chars);
  const int strip_w = std::min(image.width(), text_width(text) + 2 * kStripPadding);
  const bool left = corner == Corner::TopLeft || corner == Corner::BottomLeft;
  const bool top = corner == Corner::TopLeft || corner == Corner::TopRight;
  const int x = left ? 0 : image.width() - strip_w;
  const int y = top ? 0 : image.height() - strip_h;
  image.fill_rect(x, y, strip_w, strip_h, {0, 0, 0});
  draw_text(image, x + kStripPadding, y + kStripPadding, text, {255, 255, 255});
}

std::string watermark(const Thumbnail& thumbnail, std::string_view text, Corner corner) {
  if (text.empty()) return thumbnail.image;
  Raster image = decode_png(thumbnail.image);
  stamp_text(image, text, corner);
  return encode_png(image);
}

std::string timestamp_label(const memento::MementoDatetime& datetime) {
  std::string iso = datetime.iso8601();  // YYYY-MM-DDThh:mm:ssZ
  iso[10] = ' ';
  iso.pop_back();
  return iso + " UTC";
}

}  // namespace tmvis::render
