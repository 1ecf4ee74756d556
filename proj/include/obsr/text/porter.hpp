#pragma once

#include <string>
#include <string_view>

namespace obsr::text {

// Porter stemmer with the NLTK extensions (NLTK's default mode): irregular
// forms, words of length <= 2 left alone, and the extra step-2 rules. The word
// is lowercased first.
std::string porter_stem(std::string_view word);

}  // namespace obsr::text
