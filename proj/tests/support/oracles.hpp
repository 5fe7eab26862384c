#pragma once

// Straight-line reference implementations the library is checked against.

#include <openssl/evp.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace tmvis::testing {

inline unsigned hex_distance_oracle(std::string_view a, std::string_view b) {
  unsigned d = 0;
  for (std::size_t i = 0; i < 32; ++i)
    if (a[i] != b[i]) ++d;
  return d;
}

/// Baseline starts at the first fingerprint; a fingerprint at distance >= t
/// from the baseline is chosen and becomes the baseline.
inline std::vector<std::size_t> selection_oracle(const std::vector<std::string>& hexes, unsigned t) {
  std::vector<std::size_t> chosen{0};
  std::size_t baseline = 0;
  for (std::size_t i = 1; i < hexes.size(); ++i) {
    if (hex_distance_oracle(hexes[baseline], hexes[i]) >= t) {
      chosen.push_back(i);
      baseline = i;
    }
  }
  return chosen;
}

/// 250 partitions, four picks each plus whatever the previous partition left
/// unused, first of each partition always taken, later ones only three days
/// after the partition's previous pick.
inline std::vector<std::size_t> sampler_oracle(const std::vector<long long>& epoch_seconds) {
  const std::size_t n = epoch_seconds.size();
  std::vector<std::size_t> picks;
  if (n <= 1000) {
    for (std::size_t i = 0; i < n; ++i) picks.push_back(i);
    return picks;
  }
  long long leftover = 0;
  for (std::size_t p = 0; p < 250; ++p) {
    const std::size_t begin = p * n / 250, end = (p + 1) * n / 250;
    long long counter = 4 + leftover;
    std::size_t last = begin;
    picks.push_back(begin);
    --counter;
    for (std::size_t i = begin + 1; i < end && counter > 0; ++i) {
      if (epoch_seconds[i] - epoch_seconds[last] >= 3 * 86400) {
        picks.push_back(i);
        last = i;
        --counter;
      }
    }
    leftover = counter;
  }
  return picks;
}

inline std::string md5_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_md5(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 15]);
  }
  return out;
}

/// Space-separated words drawn from a fixed synthetic vocabulary.
inline std::vector<std::string> random_words(std::mt19937_64& rng, std::size_t count,
                                             std::size_t vocabulary = 5000) {
  std::uniform_int_distribution<std::size_t> pick(0, vocabulary - 1);
  std::vector<std::string> words;
  for (std::size_t i = 0; i < count; ++i) words.push_back("w" + std::to_string(pick(rng)));
  return words;
}

/// Replaces round(fraction * size) distinct positions with fresh words.
inline std::vector<std::string> perturb(std::mt19937_64& rng, std::vector<std::string> words,
                                        double fraction, std::size_t vocabulary = 5000) {
  std::vector<std::size_t> positions(words.size());
  for (std::size_t i = 0; i < positions.size(); ++i) positions[i] = i;
  std::shuffle(positions.begin(), positions.end(), rng);
  const auto k = std::size_t(fraction * double(words.size()) + 0.5);
  std::uniform_int_distribution<std::size_t> pick(0, vocabulary - 1);
  for (std::size_t i = 0; i < k; ++i) {
    std::string replacement;
    do replacement = "w" + std::to_string(pick(rng));
    while (replacement == words[positions[i]]);
    words[positions[i]] = replacement;
  }
  return words;
}

inline std::string as_html(const std::vector<std::string>& words) {
  std::string html = "<html><body><p>";
  for (const auto& w : words) html += w + " ";
  return html + "</p></body></html>";
}

}  // namespace tmvis::testing
