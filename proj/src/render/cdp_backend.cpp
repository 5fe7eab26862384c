#include <boost/asio/connect.hpp>
#include <boost/asio/io_context.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core/detail/base64.hpp>
#include <boost/beast/core/buffers_to_string.hpp>
#include <boost/beast/core/flat_buffer.hpp>
#include <boost/beast/websocket.hpp>

#include <json.hpp>
#include <thread>

#include "tmvis/memento/archive_client.hpp"
#include "tmvis/render/backend.hpp"

namespace tmvis::render {
namespace {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct WsTarget {
  std::string host;
  std::string port;
  std::string path;
};

WsTarget parse_ws_url(const std::string& url) {
  const std::string prefix = "ws://";
  if (url.rfind(prefix, 0) != 0) throw RenderFailure("unsupported DevTools URL: " + url);
  const std::string rest = url.substr(prefix.size());
  const auto slash = rest.find('/');
  const std::string authority = rest.substr(0, slash);
  WsTarget target;
  target.path = slash == std::string::npos ? "/" : rest.substr(slash);
  const auto colon = authority.rfind(':');
  target.host = authority.substr(0, colon);
  target.port = colon == std::string::npos ? "80" : authority.substr(colon + 1);
  return target;
}

std::string base64_decode(const std::string& text) {
  std::string out(beast::detail::base64::decoded_size(text.size()), '\0');
  const auto [written, read] = beast::detail::base64::decode(out.data(), text.data(), text.size());
  if (read != text.size()) throw RenderFailure("screenshot payload is not base64");
  out.resize(written);
  return out;
}

/// One DevTools WebSocket connection with a hard deadline on every wait.
class DevToolsSession {
 public:
  DevToolsSession(const WsTarget& target, std::chrono::milliseconds timeout)
      : ws_(io_) {
    deadline_ = Clock::now() + timeout;
    tcp::resolver resolver(io_);
    boost::system::error_code ec;
    const auto endpoints = resolver.resolve(target.host, target.port, ec);
    if (ec) throw RenderFailure("cannot resolve DevTools host: " + ec.message());
    await([&](auto handler) { asio::async_connect(ws_.next_layer(), endpoints, handler); });
    ws_.set_option(websocket::stream_base::decorator([](websocket::request_type& req) {
      req.set(beast::http::field::user_agent, "tmvis-devtools");
    }));
    ws_.read_message_max(64 * 1024 * 1024);
    const std::string host = target.host + ":" + target.port;
    await([&](auto handler) { ws_.async_handshake(host, target.path, handler); });
  }

  ~DevToolsSession() {
    boost::system::error_code ignored;
    ws_.next_layer().close(ignored);
  }

  void extend_deadline(std::chrono::milliseconds timeout) { deadline_ = Clock::now() + timeout; }

  json call(const std::string& method, json params, const std::string& session = {}) {
    const int id = ++next_id_;
    json message{{"id", id}, {"method", method}, {"params", std::move(params)}};
    if (!session.empty()) message["sessionId"] = session;
    const std::string text = message.dump();
    await([&](auto handler) { ws_.async_write(asio::buffer(text), handler); });
    while (true) {
      json reply = read();
      if (reply.value("id", -1) != id) continue;
      if (reply.contains("error"))
        throw RenderFailure(method + " failed: " + reply["error"].value("message", "unknown"));
      return reply.value("result", json::object());
    }
  }

  void wait_for_event(const std::string& method, const std::string& session) {
    while (true) {
      const json message = read();
      if (message.value("method", "") == method && message.value("sessionId", "") == session)
        return;
    }
  }

 private:
  json read() {
    beast::flat_buffer buffer;
    await([&](auto handler) { ws_.async_read(buffer, handler); });
    try {
      return json::parse(beast::buffers_to_string(buffer.data()));
    } catch (const json::exception& e) {
      throw RenderFailure(std::string("malformed DevTools message: ") + e.what());
    }
  }

  template <class Start>
  void await(Start start) {
    bool done = false;
    boost::system::error_code result;
    start([&](boost::system::error_code ec, auto&&...) {
      result = ec;
      done = true;
    });
    io_.restart();
    while (!done) {
      if (io_.run_one_until(deadline_) == 0 && !done) {
        boost::system::error_code ignored;
        ws_.next_layer().close(ignored);
        io_.restart();
        while (!done && io_.run_one() > 0) {
        }
        throw RenderTimeout("DevTools did not answer in time");
      }
    }
    if (result) throw RenderFailure("DevTools connection error: " + result.message());
  }

  asio::io_context io_;
  websocket::stream<tcp::socket> ws_;
  Clock::time_point deadline_;
  int next_id_ = 0;
};

}  // namespace

DevToolsBackend::DevToolsBackend(std::string endpoint) : endpoint_(std::move(endpoint)) {
  while (!endpoint_.empty() && endpoint_.back() == '/') endpoint_.pop_back();
}

std::string DevToolsBackend::capture(const std::string& uri, Viewport viewport,
                                     std::chrono::milliseconds settle_wait,
                                     std::chrono::milliseconds timeout) {
  memento::HttpOptions http;
  http.timeout = timeout;
  memento::HttpResponse version;
  try {
    version = memento::http_get(endpoint_ + "/json/version", http);
  } catch (const memento::TransportError& e) {
    throw RenderFailure(std::string("browser endpoint unreachable: ") + e.what());
  }
  if (version.status != 200) throw RenderFailure("browser endpoint returned an error");
  std::string ws_url;
  try {
    ws_url = json::parse(version.body).at("webSocketDebuggerUrl").get<std::string>();
  } catch (const json::exception&) {
    throw RenderFailure("browser endpoint did not report a DevTools WebSocket");
  }

  DevToolsSession session(parse_ws_url(ws_url), timeout);
  const std::string target_id =
      session.call("Target.createTarget", {{"url", "about:blank"}}).at("targetId");
  const std::string sid =
      session.call("Target.attachToTarget", {{"targetId", target_id}, {"flatten", true}})
          .at("sessionId");
  session.call("Emulation.setDeviceMetricsOverride",
               {{"width", viewport.width},
                {"height", viewport.height},
                {"deviceScaleFactor", 1},
                {"mobile", false}},
               sid);
  session.call("Page.enable", json::object(), sid);
  const json nav = session.call("Page.navigate", {{"url", uri}}, sid);
  if (const auto error = nav.value("errorText", ""); !error.empty())
    throw RenderFailure("navigation failed: " + error);
  session.wait_for_event("Page.loadEventFired", sid);

  std::this_thread::sleep_for(settle_wait);
  session.extend_deadline(timeout);
  const json shot = session.call(
      "Page.captureScreenshot",
      {{"format", "png"},
       {"clip",
        {{"x", 0}, {"y", 0}, {"width", viewport.width}, {"height", viewport.height},
         {"scale", 1}}}},
      sid);
  std::string png = base64_decode(shot.at("data").get<std::string>());
  try {
    session.call("Target.closeTarget", {{"targetId", target_id}});
  } catch (const std::exception&) {
    // The screenshot is already in hand.
  }
  return png;
}

}  // namespace tmvis::render
