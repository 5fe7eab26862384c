#include "tmvis/memento/uri.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace tmvis::memento {
namespace {

constexpr char kHex[] = "0123456789ABCDEF";

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return char(std::tolower(c)); });
  return out;
}

bool is_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

std::string encode_except(std::string_view text, std::string_view keep) {
  std::string out;
  out.reserve(text.size());
  for (unsigned char c : text) {
    if (std::isalnum(c) || keep.find(char(c)) != std::string_view::npos) {
      out.push_back(char(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string UrlParts::origin() const {
  return scheme + "://" + host + ":" + std::to_string(port);
}

std::optional<UrlParts> split_url(std::string_view url) {
  const auto colon = url.find("://");
  if (colon == std::string_view::npos) return std::nullopt;
  UrlParts parts;
  parts.scheme = lower(url.substr(0, colon));
  if (parts.scheme != "http" && parts.scheme != "https") return std::nullopt;

  std::string_view rest = url.substr(colon + 3);
  const auto slash = rest.find_first_of("/?#");
  std::string_view authority = rest.substr(0, slash);
  parts.target = slash == std::string_view::npos ? "/" : std::string(rest.substr(slash));
  if (!parts.target.empty() && parts.target.front() != '/')
    parts.target.insert(parts.target.begin(), '/');
  if (const auto hash = parts.target.find('#'); hash != std::string::npos)
    parts.target.resize(hash);

  if (const auto at = authority.rfind('@'); at != std::string_view::npos)
    authority.remove_prefix(at + 1);
  parts.port = parts.scheme == "https" ? 443 : 80;
  std::string_view host = authority;
  if (!authority.empty() && authority.front() == '[') {
    const auto close = authority.find(']');
    if (close == std::string_view::npos) return std::nullopt;
    host = authority.substr(0, close + 1);
    authority.remove_prefix(close + 1);
    if (!authority.empty() && authority.front() != ':') return std::nullopt;
    if (!authority.empty()) authority.remove_prefix(1);
    if (!authority.empty() && !is_digits(authority)) return std::nullopt;
    if (!authority.empty())
      std::from_chars(authority.data(), authority.data() + authority.size(), parts.port);
  } else if (const auto pc = authority.rfind(':'); pc != std::string_view::npos) {
    host = authority.substr(0, pc);
    const auto port = authority.substr(pc + 1);
    if (!port.empty()) {
      if (!is_digits(port)) return std::nullopt;
      std::from_chars(port.data(), port.data() + port.size(), parts.port);
    }
  }
  if (host.empty() || parts.port <= 0 || parts.port > 65535) return std::nullopt;
  if (std::any_of(host.begin(), host.end(), [](unsigned char c) {
        return std::isspace(c) || c < 0x20;
      }))
    return std::nullopt;
  parts.host = std::string(host);
  return parts;
}

std::string percent_encode_strict(std::string_view text) {
  return encode_except(text, "._-");
}

std::string encode_query_value(std::string_view text) {
  return encode_except(text, "._-~");
}

std::string percent_decode(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '%' && i + 2 < text.size()) {
      const int hi = hex_value(text[i + 1]);
      const int lo = hex_value(text[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out.push_back(char(hi * 16 + lo));
        i += 2;
        continue;
      }
    }
    out.push_back(text[i]);
  }
  return out;
}

OriginalUri::OriginalUri(std::string value) : value_(std::move(value)) {
  if (value_.empty()) throw InvalidUri("empty URI-R");
  if (!split_url(value_)) throw InvalidUri("not an absolute http(s) URI: " + value_);
}

std::optional<OriginalUri> OriginalUri::try_parse(std::string value) {
  if (value.empty() || !split_url(value)) return std::nullopt;
  return OriginalUri(std::move(value));
}

ArchiveSource ArchiveSource::archive_it(std::string collection) {
  if (collection.empty()) collection = "all";
  if (collection != "all" && !is_digits(collection))
    throw std::invalid_argument("Archive-It collection must be \"all\" or numeric");
  return {ArchiveKind::ArchiveIt, std::move(collection)};
}

std::string ArchiveSource::label() const {
  return kind == ArchiveKind::InternetArchive ? "ia" : "ait";
}

std::optional<ArchiveSource> parse_archive(std::string_view name,
                                           std::string_view collection) {
  const std::string n = lower(name);
  if (n.empty() || n == "ia" || n == "internetarchive") {
    return ArchiveSource::internet_archive();
  }
  if (n == "ait" || n == "archiveit" || n == "archive-it") {
    const std::string c = collection.empty() ? "all" : std::string(collection);
    if (c != "all" && !is_digits(c)) return std::nullopt;
    return ArchiveSource{ArchiveKind::ArchiveIt, c};
  }
  return std::nullopt;
}

}  // namespace tmvis::memento
