#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <string>

#include "tmvis/memento/archive_client.hpp"
#include "tmvis/render/thumbnail.hpp"
#include "tmvis/sampler.hpp"

namespace tmvis::service {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  /// 0 binds an ephemeral port.
  int port = 8080;
  std::filesystem::path cache_dir = "tmvis-cache";

  /// "stub", or the HTTP address of a browser's remote-debugging endpoint.
  std::string render_backend = "stub";
  std::size_t job_workers = 2;
  std::size_t render_workers = 4;
  std::size_t http_threads = 16;

  memento::ArchiveEndpoints endpoints;
  memento::HttpOptions http;
  render::CaptureOptions capture;
  sampling::SamplingConfig sampling;

  std::chrono::seconds job_ttl{std::chrono::hours(6)};
  /// Histogram caches younger than this answer /api/timemap without a fetch.
  std::chrono::seconds histogram_ttl{std::chrono::hours(1)};
  std::size_t thumbnail_cache_bytes = std::size_t(256) << 20;
  /// Origin used in embed snippets; empty means the request's Host header.
  std::string public_url;
};

}  // namespace tmvis::service
