#pragma once

#include <chrono>
#include <string>
#include <string_view>

#include "tmvis/memento/timemap.hpp"
#include "tmvis/render/backend.hpp"
#include "tmvis/render/raster.hpp"

namespace tmvis::render {

enum class ThumbnailStatus { Ok, Failed };

struct Thumbnail {
  memento::MementoRecord record;
  /// PNG bytes; a placeholder when status is Failed.
  std::string image;
  int width = 0;
  int height = 0;
  /// Render generation, starting at 1; a refresh produces attempt + 1.
  unsigned attempt = 1;
  ThumbnailStatus status = ThumbnailStatus::Ok;
  std::string error;

  bool ok() const { return status == ThumbnailStatus::Ok; }
};

struct CaptureOptions {
  Viewport viewport{};
  int thumbnail_width = 240;
  /// Multiplied by the attempt number.
  std::chrono::milliseconds base_settle_wait{3000};
  std::chrono::milliseconds timeout{30000};
  /// Render the archive's raw (banner-free) capture instead of the replay page.
  bool raw_mode = false;
};

/// Settle time for a given render generation (linear backoff).
std::chrono::milliseconds settle_wait_for(const CaptureOptions& options, unsigned attempt);

/// Wayback-style raw URL: inserts `id_` after the 14-digit timestamp path
/// segment. URLs without one are returned unchanged.
std::string raw_memento_url(std::string_view uri_m);

/// Renders one memento. Backend errors never escape: they yield a Failed
/// thumbnail carrying a placeholder image and the error message.
Thumbnail capture_thumbnail(RenderBackend& backend, const memento::MementoRecord& record,
                            unsigned attempt, const CaptureOptions& options = {});

enum class Corner { TopLeft, TopRight, BottomLeft, BottomRight };

/// Text on a dark backing strip in the given corner; dimensions unchanged.
void stamp_text(Raster& image, std::string_view text, Corner corner);

/// PNG of the thumbnail with `text` overlaid. Empty text returns the
/// original bytes.
std::string watermark(const Thumbnail& thumbnail, std::string_view text, Corner corner);

/// Datetime label used for timestamp watermarks, e.g. "2016-05-01 13:45:00 UTC".
std::string timestamp_label(const memento::MementoDatetime& datetime);

}  // namespace tmvis::render
