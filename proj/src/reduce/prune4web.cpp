#include "obsr/reduce/prune4web.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "obsr/text/fuzzy.hpp"
#include "obsr/text/porter.hpp"

namespace obsr::reduce {

namespace {

std::string normalize_text(std::string_view s) { return dom::collapse_whitespace(dom::to_lower(s)); }

std::vector<std::string> split_spaces(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

double fuzzy_score(const std::string& keyword, const std::string& text, const std::vector<std::string>& tokens) {
  double best_token = 0.0;
  for (const auto& t : tokens) best_token = std::max(best_token, text::similarity_ratio(keyword, t));
  return std::max(text::partial_ratio(keyword, text), best_token);
}

struct Tier {
  std::string_view attribute;  // empty = direct text
  double beta;
};

constexpr std::array<Tier, 7> kTiers = {{
    {"", 1.0},
    {"aria-label", 0.8},
    {"placeholder", 0.8},
    {"name", 0.8},
    {"role", 0.8},
    {"class", 0.5},
    {"id", 0.5},
}};

}  // namespace

double prune4web_score(const dom::Node& el, const KeywordWeights& weights) {
  double score = 0.0;
  for (const auto& tier : kTiers) {
    std::string raw;
    if (tier.attribute.empty()) {
      raw = el.direct_text();
    } else if (const auto* v = el.attr(tier.attribute)) {
      raw = *v;
    }
    if (raw.empty()) continue;
    const std::string t = normalize_text(raw);
    const auto tokens = split_spaces(t);
    std::vector<std::string> stemmed;
    stemmed.reserve(tokens.size());
    for (const auto& w : tokens) stemmed.push_back(text::porter_stem(w));

    for (const auto& [kw, w] : weights) {
      const std::string k = normalize_text(kw);
      double alpha = 0.0;
      if (t == k) {
        alpha = 1.0;
      } else if (k.find(' ') != std::string::npos && t.find(k) != std::string::npos) {
        alpha = 0.8;
      } else if (std::find(stemmed.begin(), stemmed.end(), text::porter_stem(kw)) != stemmed.end()) {
        alpha = 0.6;
      } else {
        const double fs = fuzzy_score(k, t, tokens);
        if (fs < kFuzzyThreshold) continue;
        alpha = 0.4 * fs;
      }
      score += w * alpha * tier.beta;
    }
  }
  return score;
}

}  // namespace obsr::reduce
