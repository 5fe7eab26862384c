#include "tmvis/render/gif.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <vector>

#include "tmvis/render/png.hpp"

namespace tmvis::render {
namespace {

// 6 red x 7 green x 6 blue levels = 252 colors; entries 252..255 stay black.
constexpr int kRedLevels = 6, kGreenLevels = 7, kBlueLevels = 6;

std::uint8_t palette_index(Rgb c) {
  const int r = (c.r * (kRedLevels - 1) + 127) / 255;
  const int g = (c.g * (kGreenLevels - 1) + 127) / 255;
  const int b = (c.b * (kBlueLevels - 1) + 127) / 255;
  return std::uint8_t((r * kGreenLevels + g) * kBlueLevels + b);
}

void put_u16(std::string& out, unsigned v) {
  out.push_back(char(v & 0xFF));
  out.push_back(char((v >> 8) & 0xFF));
}

void write_palette(std::string& out) {
  for (int r = 0; r < kRedLevels; ++r)
    for (int g = 0; g < kGreenLevels; ++g)
      for (int b = 0; b < kBlueLevels; ++b) {
        out.push_back(char(r * 255 / (kRedLevels - 1)));
        out.push_back(char(g * 255 / (kGreenLevels - 1)));
        out.push_back(char(b * 255 / (kBlueLevels - 1)));
      }
  for (int i = kRedLevels * kGreenLevels * kBlueLevels; i < 256; ++i) out.append(3, '\0');
}

/// Variable-width LZW with 8-bit roots, emitted as GIF data sub-blocks.
class LzwWriter {
 public:
  explicit LzwWriter(std::string& out) : out_(out) {}

  void encode(std::span<const std::uint8_t> indices) {
    out_.push_back(char(kMinCodeSize));
    reset();
    emit(kClear);
    if (!indices.empty()) {
      int prefix = indices[0];
      for (std::size_t i = 1; i < indices.size(); ++i) {
        const std::uint8_t c = indices[i];
        const std::uint32_t key = (std::uint32_t(prefix) << 8) | c;
        if (const auto it = table_.find(key); it != table_.end()) {
          prefix = it->second;
          continue;
        }
        emit(prefix);
        table_.emplace(key, next_code_++);
        if (next_code_ > (1 << code_size_) && code_size_ < kMaxCodeSize) ++code_size_;
        if (next_code_ == kMaxCodes) {
          emit(kClear);
          reset();
        }
        prefix = c;
      }
      emit(prefix);
    }
    emit(kEnd);
    flush_bits();
    flush_block();
    out_.push_back('\0');
  }

 private:
  static constexpr int kMinCodeSize = 8;
  static constexpr int kClear = 1 << kMinCodeSize;
  static constexpr int kEnd = kClear + 1;
  static constexpr int kMaxCodeSize = 12;
  static constexpr int kMaxCodes = 1 << kMaxCodeSize;

  void reset() {
    table_.clear();
    next_code_ = kEnd + 1;
    code_size_ = kMinCodeSize + 1;
  }

  void emit(int code) {
    bit_buffer_ |= std::uint32_t(code) << bit_count_;
    bit_count_ += code_size_;
    while (bit_count_ >= 8) {
      push_byte(std::uint8_t(bit_buffer_ & 0xFF));
      bit_buffer_ >>= 8;
      bit_count_ -= 8;
    }
  }

  void flush_bits() {
    if (bit_count_ > 0) push_byte(std::uint8_t(bit_buffer_ & 0xFF));
    bit_buffer_ = 0;
    bit_count_ = 0;
  }

  void push_byte(std::uint8_t b) {
    block_.push_back(char(b));
    if (block_.size() == 255) flush_block();
  }

  void flush_block() {
    if (block_.empty()) return;
    out_.push_back(char(block_.size()));
    out_ += block_;
    block_.clear();
  }

  std::string& out_;
  std::string block_;
  std::unordered_map<std::uint32_t, int> table_;
  int next_code_ = 0;
  int code_size_ = 0;
  std::uint32_t bit_buffer_ = 0;
  int bit_count_ = 0;
};

}  // namespace

unsigned GifSpec::delay_centiseconds() const {
  if (!(frame_interval > 0) || !std::isfinite(frame_interval))
    throw std::invalid_argument("frame interval must be positive");
  const double cs = std::round(frame_interval * 100.0);
  if (cs < 1 || cs > 65535)
    throw std::invalid_argument("frame interval must lie in 0.01..655.35 seconds");
  return unsigned(cs);
}

std::string encode_gif(std::span<const Raster> frames, unsigned delay_centiseconds) {
  if (frames.empty()) throw NoRenderableFrames();
  int width = 0, height = 0;
  for (const auto& f : frames) {
    width = std::max(width, f.width());
    height = std::max(height, f.height());
  }
  if (width > 65535 || height > 65535) throw std::invalid_argument("frame too large for GIF");

  std::string out = "GIF89a";
  put_u16(out, unsigned(width));
  put_u16(out, unsigned(height));
  out.push_back(char(0xF7));  // global table, 8-bit resolution, 256 entries
  out.push_back('\0');        // background index
  out.push_back('\0');        // square pixels
  write_palette(out);

  // NETSCAPE2.0 application extension; loop count 0 = forever.
  out += "\x21\xFF\x0BNETSCAPE2.0";
  out += std::string("\x03\x01\x00\x00\x00", 5);

  std::vector<std::uint8_t> indices;
  for (const auto& frame : frames) {
    out += "\x21\xF9\x04";
    out.push_back(char(1 << 2));  // disposal: leave in place
    put_u16(out, delay_centiseconds);
    out.push_back('\0');
    out.push_back('\0');

    out.push_back(char(0x2C));
    put_u16(out, 0);
    put_u16(out, 0);
    put_u16(out, unsigned(frame.width()));
    put_u16(out, unsigned(frame.height()));
    out.push_back('\0');

    indices.resize(std::size_t(frame.width()) * std::size_t(frame.height()));
    const auto px = frame.bytes();
    for (std::size_t i = 0; i < indices.size(); ++i)
      indices[i] = palette_index({px[3 * i], px[3 * i + 1], px[3 * i + 2]});
    LzwWriter(out).encode(indices);
  }
  out.push_back(char(0x3B));
  return out;
}

std::string assemble_gif(std::span<const Thumbnail> thumbnails, const GifSpec& spec) {
  const unsigned delay = spec.delay_centiseconds();
  std::vector<const Thumbnail*> ok;
  for (const auto& t : thumbnails)
    if (t.ok()) ok.push_back(&t);
  if (ok.empty()) throw NoRenderableFrames();
  std::stable_sort(ok.begin(), ok.end(), [](const Thumbnail* a, const Thumbnail* b) {
    return memento::chronological(a->record, b->record);
  });

  std::vector<Raster> frames;
  frames.reserve(ok.size());
  for (const Thumbnail* t : ok) {
    Raster frame = decode_png(t->image);
    if (spec.timestamp_watermark)
      stamp_text(frame, timestamp_label(t->record.datetime), Corner::BottomLeft);
    if (spec.uri_stamp) stamp_text(frame, t->record.source_uri_r.str(), Corner::TopLeft);
    frames.push_back(std::move(frame));
  }
  return encode_gif(frames, delay);
}

}  // namespace tmvis::render
