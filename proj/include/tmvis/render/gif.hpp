#pragma once

#include <span>
#include <stdexcept>
#include <string>

#include "tmvis/render/raster.hpp"
#include "tmvis/render/thumbnail.hpp"

namespace tmvis::render {

struct GifSpec {
  /// Seconds between frames; stored in the stream as centiseconds.
  double frame_interval = 1.0;
  /// Bottom-left datetime label on each frame.
  bool timestamp_watermark = false;
  /// Top-left URI-R label on each frame.
  bool uri_stamp = false;

  /// round(frame_interval * 100). Throws std::invalid_argument unless the
  /// interval is positive and the delay fits the 16-bit field.
  unsigned delay_centiseconds() const;
};

class NoRenderableFrames : public std::runtime_error {
 public:
  NoRenderableFrames() : std::runtime_error("no successfully rendered thumbnails") {}
};

/// GIF89a with a global 252-color cube palette, one frame per raster, the
/// given delay on every frame and a NETSCAPE2.0 infinite-loop extension.
std::string encode_gif(std::span<const Raster> frames, unsigned delay_centiseconds);

/// Animates the Ok thumbnails in chronological order, watermarked per `spec`.
/// Throws NoRenderableFrames when none is Ok.
std::string assemble_gif(std::span<const Thumbnail> thumbnails, const GifSpec& spec);

}  // namespace tmvis::render
