#pragma once

#include <cstddef>
#include <string_view>

namespace obsr::text {

// Levenshtein distance over code points.
std::size_t edit_distance(std::u32string_view a, std::u32string_view b);

// 1 - edit_distance / max(|a|, |b|); 1.0 when both are empty.
double similarity_ratio(std::string_view a, std::string_view b);

// Best similarity_ratio of the shorter string against every window of the
// longer string with the shorter string's length. 0.0 when exactly one input
// is empty.
double partial_ratio(std::string_view a, std::string_view b);

}  // namespace obsr::text
