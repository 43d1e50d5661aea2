#include "mythqa/text.hpp"

#include <cctype>

namespace mythqa {

namespace utf8 {

char32_t next(std::string_view s, std::size_t& pos) {
  const auto lead = static_cast<unsigned char>(s[pos]);
  if (lead < 0x80) {
    ++pos;
    return lead;
  }
  int extra = 0;
  char32_t cp = 0;
  if ((lead & 0xE0) == 0xC0) {
    extra = 1;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    extra = 2;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    extra = 3;
    cp = lead & 0x07;
  } else {
    ++pos;
    return 0xFFFD;
  }
  if (pos + extra >= s.size()) {
    ++pos;
    return 0xFFFD;
  }
  for (int i = 1; i <= extra; ++i) {
    const auto c = static_cast<unsigned char>(s[pos + i]);
    if ((c & 0xC0) != 0x80) {
      ++pos;
      return 0xFFFD;
    }
    cp = (cp << 6) | (c & 0x3F);
  }
  pos += extra + 1;
  return cp;
}

bool is_space(char32_t cp) {
  switch (cp) {
    case U' ': case U'\t': case U'\n': case U'\v': case U'\f': case U'\r':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool is_punct(char32_t cp) {
  if (cp < 0x80) return std::ispunct(static_cast<int>(cp)) != 0;
  return (cp >= 0xA1 && cp <= 0xBF) || cp == 0xD7 || cp == 0xF7 ||
         (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205E) ||
         (cp >= 0x3001 && cp <= 0x303F) || (cp >= 0xFF01 && cp <= 0xFF0F) ||
         (cp >= 0xFF1A && cp <= 0xFF20) || (cp >= 0xFF3B && cp <= 0xFF40) ||
         (cp >= 0xFF5B && cp <= 0xFF65);
}

}  // namespace utf8

namespace {

bool is_word_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || u >= 0x80;
}

bool starts_with_ci(std::string_view s, std::size_t at, std::string_view prefix) {
  if (s.size() - at < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[at + i])) != prefix[i]) return false;
  }
  return true;
}

// Cleans a single whitespace-free token. Returns the (possibly empty) result.
std::string clean_token(std::string_view tok) {
  std::string out;
  out.reserve(tok.size());
  std::size_t i = 0;
  while (i < tok.size()) {
    if (starts_with_ci(tok, i, "http://") || starts_with_ci(tok, i, "https://") ||
        (i == 0 && starts_with_ci(tok, i, "www."))) {
      break;  // URL runs to the end of the token
    }
    const char c = tok[i];
    const bool at_boundary = i == 0 || !is_word_byte(tok[i - 1]);
    if (c == '@' && at_boundary && i + 1 < tok.size() && is_word_byte(tok[i + 1]) &&
        static_cast<unsigned char>(tok[i + 1]) < 0x80) {
      ++i;
      while (i < tok.size() && is_word_byte(tok[i]) &&
             static_cast<unsigned char>(tok[i]) < 0x80) {
        ++i;
      }
      continue;
    }
    if (c == '#' && at_boundary && i + 1 < tok.size() && is_word_byte(tok[i + 1])) {
      ++i;
      continue;
    }
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    ++i;
  }
  return out;
}

}  // namespace

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  std::size_t start = std::string_view::npos;
  while (pos < text.size()) {
    const std::size_t here = pos;
    const char32_t cp = utf8::next(text, pos);
    if (utf8::is_space(cp)) {
      if (start != std::string_view::npos) {
        parts.emplace_back(text.substr(start, here - start));
        start = std::string_view::npos;
      }
    } else if (start == std::string_view::npos) {
      start = here;
    }
  }
  if (start != std::string_view::npos) parts.emplace_back(text.substr(start));
  return parts;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

std::string normalize_text(std::string_view text) {
  std::string out;
  for (const auto& tok : split_whitespace(text)) {
    std::string cleaned = clean_token(tok);
    if (cleaned.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out.append(cleaned);
  }
  return out;
}

bool is_retweet(std::string_view raw_text) {
  std::size_t i = 0;
  while (i < raw_text.size() && std::isspace(static_cast<unsigned char>(raw_text[i]))) ++i;
  return starts_with_ci(raw_text, i, "rt @");
}

std::string flatten_newlines(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_break = false;
  for (const char c : text) {
    if (c == '\r' || c == '\n') {
      if (!in_break) out.push_back(' ');
      in_break = true;
    } else {
      out.push_back(c);
      in_break = false;
    }
  }
  return out;
}

}  // namespace mythqa
