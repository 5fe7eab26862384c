#include "tmvis/memento/link_format.hpp"

#include <cctype>

namespace tmvis::memento {
namespace {

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  return true;
}

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

class LinkScanner {
 public:
  explicit LinkScanner(std::string_view body) : body_(body) {}

  std::vector<Link> run() {
    std::vector<Link> links;
    skip_ws();
    while (!at_end()) {
      links.push_back(read_link());
      skip_ws();
      if (at_end()) break;
      if (peek() != ',') fail("expected ',' between links");
      ++pos_;
      skip_ws();
    }
    return links;
  }

 private:
  Link read_link() {
    Link link;
    if (peek() != '<') fail("expected '<'");
    ++pos_;
    const auto close = body_.find('>', pos_);
    if (close == std::string_view::npos) fail("unterminated link target");
    link.target = std::string(trim(body_.substr(pos_, close - pos_)));
    pos_ = close + 1;
    skip_ws();
    while (!at_end() && peek() == ';') {
      ++pos_;
      skip_ws();
      link.params.push_back(read_param());
      skip_ws();
    }
    if (!at_end() && peek() != ',') fail("unexpected character after link");
    return link;
  }

  std::pair<std::string, std::string> read_param() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                         peek() == '-' || peek() == '_' || peek() == '*'))
      ++pos_;
    if (pos_ == start) fail("expected parameter name");
    std::string name(body_.substr(start, pos_ - start));
    skip_ws();
    if (at_end() || peek() != '=') return {std::move(name), {}};
    ++pos_;
    skip_ws();
    if (at_end()) fail("missing parameter value");
    std::string value;
    if (peek() == '"') {
      ++pos_;
      while (true) {
        if (at_end()) fail("unterminated quoted string");
        const char c = body_[pos_++];
        if (c == '"') break;
        if (c == '\\' && !at_end()) {
          value.push_back(body_[pos_++]);
          continue;
        }
        value.push_back(c);
      }
    } else {
      const std::size_t vstart = pos_;
      while (!at_end() && peek() != ';' && peek() != ',' && !is_ws(peek())) ++pos_;
      value = std::string(body_.substr(vstart, pos_ - vstart));
      if (value.empty()) fail("missing parameter value");
    }
    return {std::move(name), std::move(value)};
  }

  static std::string_view trim(std::string_view s) {
    while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_ws(s.back())) s.remove_suffix(1);
    return s;
  }

  void skip_ws() {
    while (!at_end() && is_ws(peek())) ++pos_;
  }
  bool at_end() const { return pos_ >= body_.size(); }
  char peek() const { return body_[pos_]; }
  [[noreturn]] void fail(const char* what) const { throw MalformedLinkFormat(what, pos_); }

  std::string_view body_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view Link::param(std::string_view name) const {
  for (const auto& [key, value] : params)
    if (iequals(key, name)) return value;
  return {};
}

bool Link::has_rel(std::string_view rel) const {
  std::string_view rels = param("rel");
  while (!rels.empty()) {
    while (!rels.empty() && is_ws(rels.front())) rels.remove_prefix(1);
    std::size_t n = 0;
    while (n < rels.size() && !is_ws(rels[n])) ++n;
    if (n > 0 && iequals(rels.substr(0, n), rel)) return true;
    rels.remove_prefix(n);
  }
  return false;
}

std::vector<Link> parse_links(std::string_view body) {
  return LinkScanner(body).run();
}

ParsedTimeMap parse_link_format(std::string_view body, const OriginalUri& default_uri_r) {
  ParsedTimeMap parsed;
  std::vector<MementoRecord> records;
  for (const Link& link : parse_links(body)) {
    if (link.has_rel("original")) {
      if (parsed.original.empty()) parsed.original = link.target;
      continue;
    }
    if (!link.has_rel("memento")) continue;
    const auto datetime = MementoDatetime::parse_rfc1123(link.param("datetime"));
    if (!datetime || link.target.empty()) {
      ++parsed.malformed_datetimes;
      continue;
    }
    records.push_back({link.target, *datetime, default_uri_r});
  }
  parsed.timemap = TimeMap::normalized({default_uri_r}, std::move(records));
  return parsed;
}

std::string serialize_link_format(const TimeMap& map) {
  std::string out;
  if (!map.uri_rs().empty())
    out += "<" + map.uri_rs().front().str() + ">; rel=\"original\"";
  const auto& mementos = map.mementos();
  for (std::size_t i = 0; i < mementos.size(); ++i) {
    std::string rel = "memento";
    if (i == 0) rel = "first memento";
    if (i + 1 == mementos.size()) rel = i == 0 ? "first last memento" : "last memento";
    if (!out.empty()) out += ",\n";
    out += "<" + mementos[i].uri_m + ">; rel=\"" + rel + "\"; datetime=\"" +
           mementos[i].datetime.rfc1123() + "\"";
  }
  out += "\n";
  return out;
}

}  // namespace tmvis::memento
