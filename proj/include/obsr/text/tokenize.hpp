#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace obsr::text {

// Maximal runs of word characters (ASCII letters, digits, '_' and non-ASCII
// letters), in order. Case is preserved.
std::vector<std::string> word_tokens(std::string_view text);

// word_tokens() of the ASCII-lowercased text.
std::vector<std::string> lower_word_tokens(std::string_view text);

// Decodes UTF-8 leniently; invalid bytes become U+FFFD.
std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);

// First `max_chars` code points of `text`.
std::string truncate_chars(std::string_view text, std::size_t max_chars);

}  // namespace obsr::text
