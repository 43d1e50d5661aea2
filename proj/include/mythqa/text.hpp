#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mythqa {

// Lowercases ASCII, drops URLs and @-mentions, strips '#' from hashtags and
// collapses whitespace. Non-ASCII bytes pass through unchanged.
std::string normalize_text(std::string_view text);

// True when the tweet is a retweet: after lowercasing and trimming leading
// whitespace the text starts with "rt @".
bool is_retweet(std::string_view raw_text);

// Replaces every run of CR/LF characters with a single space.
std::string flatten_newlines(std::string_view text);

namespace utf8 {

// Decodes one code point at `pos`, advancing it. Invalid sequences decode as
// U+FFFD and consume one byte.
char32_t next(std::string_view s, std::size_t& pos);

bool is_space(char32_t cp);
bool is_punct(char32_t cp);

}  // namespace utf8

std::vector<std::string> split_whitespace(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace mythqa
