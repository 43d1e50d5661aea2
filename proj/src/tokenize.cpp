#include <array>
#include <string>

#include "mythqa/retrieval.hpp"
#include "mythqa/text.hpp"

namespace mythqa {

namespace {

constexpr std::array<std::string_view, 33> kStopwords = {
    "a",    "an",   "and",   "are",  "as",    "at",    "be",   "but",  "by",
    "for",  "if",   "in",    "into", "is",    "it",    "no",   "not",  "of",
    "on",   "or",   "such",  "that", "the",   "their", "then", "there", "these",
    "they", "this", "to",    "was",  "will",  "with"};

}  // namespace

bool is_stopword(std::string_view term) {
  for (auto w : kStopwords) {
    if (w == term) return true;
  }
  return false;
}

std::string stem_plural(std::string_view term) {
  std::string s(term);
  const std::size_t len = s.size();
  if (len < 3 || s[len - 1] != 's') return s;
  switch (s[len - 2]) {
    case 'u':
    case 's':
      return s;
    case 'e':
      if (len > 3 && s[len - 3] == 'i' && s[len - 4] != 'a' && s[len - 4] != 'e') {
        s.resize(len - 2);
        s[len - 3] = 'y';
        return s;
      }
      if (s[len - 3] == 'i' || s[len - 3] == 'a' || s[len - 3] == 'o' || s[len - 3] == 'e') {
        return s;
      }
      [[fallthrough]];
    default:
      s.resize(len - 1);
      return s;
  }
}

TokenStream tokenize(std::string_view text, const AnalyzerConfig& analyzer) {
  const std::string norm = normalize_text(text);
  const std::string_view sv(norm);
  TokenStream out;
  auto emit = [&](std::size_t begin, std::size_t end) {
    std::string term(sv.substr(begin, end - begin));
    if (analyzer.remove_stopwords && is_stopword(term)) return;
    if (analyzer.stem) term = stem_plural(term);
    if (!term.empty()) out.push_back(std::move(term));
  };
  std::size_t pos = 0;
  std::size_t start = std::string_view::npos;
  while (pos < sv.size()) {
    const std::size_t here = pos;
    const char32_t cp = utf8::next(sv, pos);
    if (utf8::is_space(cp) || utf8::is_punct(cp)) {
      if (start != std::string_view::npos) emit(start, here);
      start = std::string_view::npos;
    } else if (start == std::string_view::npos) {
      start = here;
    }
  }
  if (start != std::string_view::npos) emit(start, sv.size());
  return out;
}

}  // namespace mythqa
