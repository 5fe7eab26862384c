#pragma once

#include <chrono>
#include <stdexcept>
#include <string>

namespace tmvis::render {

struct Viewport {
  int width = 1024;
  int height = 768;
};

class RenderTimeout : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RenderFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Produces a PNG screenshot of `uri` at the given viewport.
///
/// Implementations throw RenderTimeout when the page or the browser does not
/// answer within `timeout`, and RenderFailure for anything else. They must be
/// callable from several threads at once.
class RenderBackend {
 public:
  virtual ~RenderBackend() = default;

  virtual std::string capture(const std::string& uri, Viewport viewport,
                              std::chrono::milliseconds settle_wait,
                              std::chrono::milliseconds timeout) = 0;

  virtual std::string name() const = 0;
};

/// Deterministic offline backend: a solid background derived from the URI's
/// hash with the URI printed on it. Never sleeps.
class StubBackend final : public RenderBackend {
 public:
  std::string capture(const std::string& uri, Viewport viewport,
                      std::chrono::milliseconds settle_wait,
                      std::chrono::milliseconds timeout) override;
  std::string name() const override { return "stub"; }
};

/// Drives a headless Chromium over the DevTools protocol.
///
/// `endpoint` is the browser's remote-debugging HTTP address, e.g.
/// `http://127.0.0.1:9222`; the WebSocket URL is discovered through
/// `/json/version`. Each capture opens its own target and closes it after.
class DevToolsBackend final : public RenderBackend {
 public:
  explicit DevToolsBackend(std::string endpoint);

  std::string capture(const std::string& uri, Viewport viewport,
                      std::chrono::milliseconds settle_wait,
                      std::chrono::milliseconds timeout) override;
  std::string name() const override { return "devtools"; }

 private:
  std::string endpoint_;
};

}  // namespace tmvis::render
