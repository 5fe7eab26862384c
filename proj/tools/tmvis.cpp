#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "tmvis/memento/archive_client.hpp"
#include "tmvis/service/service.hpp"
#include "tmvis/simhash/simhash.hpp"
#include "tmvis/summarizer.hpp"

namespace {

using nlohmann::json;
using namespace tmvis;

std::string read_all(const std::string& path) {
  if (path == "-") {
    std::ostringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

simhash::SimHashValue hex_arg(const std::string& text) {
  if (auto v = simhash::SimHashValue::from_hex(text)) return *v;
  throw std::runtime_error("not a 32-digit hex fingerprint: " + text);
}

service::Service* g_service = nullptr;

void on_signal(int) {
  if (g_service) g_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TimeMap summarization: SimHash-based selection of visually distinct mementos"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI or TOML file with option values");

  service::ServiceConfig config;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--host", config.host, "Listen address")->envname("TMVIS_HOST")->capture_default_str();
  serve->add_option("--port", config.port, "Listen port (0 = any)")->envname("TMVIS_PORT")->capture_default_str();
  std::string cache_dir = config.cache_dir.string();
  serve->add_option("--cache-dir", cache_dir, "Cache directory")->envname("TMVIS_CACHE_DIR")->capture_default_str();
  serve->add_option("--render-backend", config.render_backend,
                    "'stub' or a browser remote-debugging URL such as http://127.0.0.1:9222")
      ->envname("TMVIS_RENDER_BACKEND")->capture_default_str();
  serve->add_option("--job-workers", config.job_workers)->envname("TMVIS_JOB_WORKERS")->capture_default_str();
  serve->add_option("--render-workers", config.render_workers, "Concurrent captures")
      ->envname("TMVIS_RENDER_WORKERS")->capture_default_str();
  int archive_timeout_s = 30, render_timeout_s = 30, settle_s = 3;
  serve->add_option("--archive-timeout", archive_timeout_s, "Seconds")->envname("TMVIS_ARCHIVE_TIMEOUT")->capture_default_str();
  serve->add_option("--render-timeout", render_timeout_s, "Seconds")->envname("TMVIS_RENDER_TIMEOUT")->capture_default_str();
  serve->add_option("--settle-wait", settle_s, "Seconds after load, times the attempt number")
      ->envname("TMVIS_SETTLE_WAIT")->capture_default_str();
  serve->add_option("--thumbnail-width", config.capture.thumbnail_width)
      ->envname("TMVIS_THUMBNAIL_WIDTH")->check(CLI::Range(16, 1024))->capture_default_str();
  serve->add_flag("--raw", config.capture.raw_mode, "Capture archives' banner-free raw mementos")->envname("TMVIS_RAW");
  serve->add_option("--ia-endpoint", config.endpoints.internet_archive)->envname("TMVIS_IA_ENDPOINT")->capture_default_str();
  serve->add_option("--ait-endpoint", config.endpoints.archive_it)->envname("TMVIS_AIT_ENDPOINT")->capture_default_str();
  serve->add_option("--public-url", config.public_url, "Origin used in embed snippets")->envname("TMVIS_PUBLIC_URL");
  int job_ttl_min = 360;
  serve->add_option("--job-ttl", job_ttl_min, "Minutes")->envname("TMVIS_JOB_TTL")->capture_default_str();

  std::vector<std::string> uri_rs;
  std::string archive_name = "ia", collection;
  auto* timemap = app.add_subcommand("timemap", "Fetch TimeMaps and print a monthly histogram as JSON");
  timemap->add_option("uri_r", uri_rs, "Original URIs")->required();
  timemap->add_option("--archive", archive_name)->capture_default_str();
  timemap->add_option("--collection", collection);
  timemap->add_option("--ia-endpoint", config.endpoints.internet_archive)->envname("TMVIS_IA_ENDPOINT");
  timemap->add_option("--ait-endpoint", config.endpoints.archive_it)->envname("TMVIS_AIT_ENDPOINT");

  std::vector<std::string> files;
  auto* hash = app.add_subcommand("simhash", "Print the SimHash of HTML files ('-' reads stdin)");
  hash->add_option("files", files)->required();

  std::string hex_a, hex_b;
  auto* hamming = app.add_subcommand("hamming", "Hex-position distance between two fingerprints");
  hamming->add_option("a", hex_a)->required();
  hamming->add_option("b", hex_b)->required();

  std::string list_file;
  auto* menu = app.add_subcommand("menu", "Threshold menu for fingerprints, one hex value per line");
  menu->add_option("file", list_file, "'-' reads stdin")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve) {
      config.cache_dir = cache_dir;
      config.http.timeout = std::chrono::seconds(archive_timeout_s);
      config.capture.timeout = std::chrono::seconds(render_timeout_s);
      config.capture.base_settle_wait = std::chrono::seconds(settle_s);
      config.job_ttl = std::chrono::minutes(job_ttl_min);
      service::Service svc(config);
      g_service = &svc;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "tmvis listening on " << config.host << ":" << config.port << " (render backend "
                << config.render_backend << ")\n";
      svc.run();
      g_service = nullptr;
    } else if (*timemap) {
      const auto archive = memento::parse_archive(archive_name, collection);
      if (!archive) throw std::runtime_error("unknown archive " + archive_name);
      memento::ArchiveClient client(config.endpoints);
      std::vector<memento::TimeMap> maps;
      for (const auto& u : uri_rs) maps.push_back(client.fetch_timemap(*archive, memento::OriginalUri(u)).timemap);
      const auto merged = memento::merge_timemaps(maps);
      json bins = json::array();
      for (const auto& b : memento::build_histogram(merged).bins) bins.push_back({{"month", b.year_month}, {"count", b.count}});
      std::cout << json{{"memento_count", merged.size()}, {"histogram", bins}}.dump(2) << "\n";
    } else if (*hash) {
      for (const auto& f : files) std::cout << simhash::simhash_html(read_all(f)).hex() << "  " << f << "\n";
    } else if (*hamming) {
      std::cout << simhash::hamming_distance(hex_arg(hex_a), hex_arg(hex_b)) << "\n";
    } else if (*menu) {
      std::vector<simhash::SimHashValue> hashes;
      std::istringstream lines(read_all(list_file));
      for (std::string line; std::getline(lines, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) hashes.push_back(hex_arg(line));
      }
      const auto m = summary::enumerate_menu(hashes);
      json options = json::array();
      for (const auto& o : m.options)
        options.push_back({{"count", o.count}, {"threshold", o.summary.threshold}, {"indices", o.summary.indices}});
      if (m.three_option)
        options.push_back({{"count", 3}, {"threshold", m.three_option->threshold},
                           {"indices", m.three_option->indices}, {"three_option", true}});
      std::cout << options.dump(2) << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
