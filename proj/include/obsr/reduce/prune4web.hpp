#pragma once

#include "obsr/dom/node.hpp"
#include "obsr/reduce/request.hpp"

namespace obsr::reduce {

inline constexpr double kFuzzyThreshold = 0.75;

// Sum over scoring tiers (text 1.0; aria-label, placeholder, name, role 0.8;
// class, id 0.5) and keywords of weight * match quality * tier weight. Match
// quality is the first stage that applies: exact 1.0, phrase containment 0.8
// (multi-word keywords), stemmed word 0.6, fuzzy 0.4 * similarity when the
// similarity reaches 0.75. The text tier uses the element's direct text.
double prune4web_score(const dom::Node& el, const KeywordWeights& weights);

}  // namespace obsr::reduce
