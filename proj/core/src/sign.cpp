#include "sitewatch/sign.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "sitewatch/errors.hpp"

namespace sitewatch {

std::string normalize_text(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (unsigned char c : raw) {
    if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

namespace {

std::vector<std::string_view> ngrams(std::string_view s, int n) {
  std::vector<std::string_view> grams;
  if (static_cast<int>(s.size()) < n) return grams;
  grams.reserve(s.size() - n + 1);
  for (std::size_t i = 0; i + n <= s.size(); ++i) grams.push_back(s.substr(i, n));
  std::sort(grams.begin(), grams.end());
  return grams;
}

}  // namespace

double dice_similarity(std::string_view a, std::string_view b, int n) {
  if (n < 1) throw ConfigError("dice: ngram size must be >= 1");
  const bool a_short = static_cast<int>(a.size()) < n;
  const bool b_short = static_cast<int>(b.size()) < n;
  if (a_short || b_short) return a == b ? 1.0 : 0.0;

  const std::vector<std::string_view> ga = ngrams(a, n);
  const std::vector<std::string_view> gb = ngrams(b, n);
  std::size_t inter = 0;
  std::size_t i = 0, j = 0;
  while (i < ga.size() && j < gb.size()) {
    if (ga[i] == gb[j]) {
      ++inter;
      ++i;
      ++j;
    } else if (ga[i] < gb[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return 2.0 * static_cast<double>(inter) /
         static_cast<double>(ga.size() + gb.size());
}

SignDictionary::SignDictionary(std::vector<std::string> entries) {
  for (std::string& e : entries) {
    std::string norm = normalize_text(e);
    if (std::find(normalized_.begin(), normalized_.end(), norm) != normalized_.end()) {
      continue;  // same text after normalization; first entry wins
    }
    entries_.push_back(std::move(e));
    normalized_.push_back(std::move(norm));
  }
}

std::optional<SignMatch> match_sign(std::string_view raw_text,
                                    const SignDictionary& dictionary,
                                    const DiceParams& params) {
  const std::string probe = normalize_text(raw_text);
  std::optional<SignMatch> best;
  for (std::size_t i = 0; i < dictionary.size(); ++i) {
    const double score =
        dice_similarity(probe, dictionary.normalized_entries()[i], params.ngram);
    if (score <= params.threshold) continue;
    if (!best || score > best->score) {   // strict: ties keep the earlier entry
      best = SignMatch{dictionary.entries()[i], score};
    }
  }
  return best;
}

int count_sign_matches(const FrameRecord& frame, const SignDictionary& dictionary,
                       const DiceParams& params) {
  int count = 0;
  for (const TextObservation& t : frame.texts) {
    if (match_sign(t.text, dictionary, params)) ++count;
  }
  if (frame.texts.size() >= 2) {
    // Reading order: top edge first, left edge breaks ties, input order last.
    std::vector<std::size_t> order(frame.texts.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const BoundingBox& ba = frame.texts[a].box;
      const BoundingBox& bb = frame.texts[b].box;
      if (ba.y != bb.y) return ba.y < bb.y;
      return ba.x < bb.x;
    });
    std::string joined;
    for (std::size_t idx : order) {
      if (!joined.empty()) joined.push_back(' ');
      joined += frame.texts[idx].text;
    }
    if (match_sign(joined, dictionary, params)) ++count;
  }
  return count;
}

}  // namespace sitewatch
