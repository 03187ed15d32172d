#include "advq/text.hpp"

#include <cstdint>

namespace advq {

namespace {

struct CodePoint {
  char32_t value;
  std::size_t begin;
  std::size_t end;
};

// Decodes one UTF-8 sequence starting at `pos`. Invalid bytes decode to
// themselves so that no input is lost.
CodePoint decode_at(std::string_view s, std::size_t pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  auto cont = [&](std::size_t k) -> int {
    if (pos + k >= s.size()) return -1;
    const auto b = static_cast<unsigned char>(s[pos + k]);
    return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
  };
  if (b0 < 0x80) return {b0, pos, pos + 1};
  if ((b0 & 0xE0) == 0xC0) {
    const int c1 = cont(1);
    if (c1 >= 0) return {static_cast<char32_t>(((b0 & 0x1F) << 6) | c1), pos, pos + 2};
  } else if ((b0 & 0xF0) == 0xE0) {
    const int c1 = cont(1), c2 = c1 >= 0 ? cont(2) : -1;
    if (c2 >= 0) {
      return {static_cast<char32_t>(((b0 & 0x0F) << 12) | (c1 << 6) | c2), pos, pos + 3};
    }
  } else if ((b0 & 0xF8) == 0xF0) {
    const int c1 = cont(1), c2 = c1 >= 0 ? cont(2) : -1, c3 = c2 >= 0 ? cont(3) : -1;
    if (c3 >= 0) {
      return {static_cast<char32_t>(((b0 & 0x07) << 18) | (c1 << 12) | (c2 << 6) | c3),
              pos, pos + 4};
    }
  }
  return {b0, pos, pos + 1};
}

bool is_space(char32_t c) {
  switch (c) {
    case ' ': case '\t': case '\n': case '\v': case '\f': case '\r':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

bool is_punct(char32_t c) {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
           (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
  }
  switch (c) {
    case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB: case 0xBF:
    case 0x3001: case 0x3002: case 0xFF01: case 0xFF0C: case 0xFF1F:
      return true;
    default:
      return (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E);
  }
}

char32_t to_lower(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 0x20;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 0x20;
  if (c >= 0x410 && c <= 0x42F) return c + 0x20;
  if (c >= 0x400 && c <= 0x40F) return c + 0x50;
  return c;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

std::vector<CodePoint> decode(std::string_view text) {
  std::vector<CodePoint> cps;
  cps.reserve(text.size());
  for (std::size_t pos = 0; pos < text.size();) {
    cps.push_back(decode_at(text, pos));
    pos = cps.back().end;
  }
  return cps;
}

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  const auto cps = decode(text);
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && is_space(cps[i].value)) ++i;
    std::size_t j = i;
    while (j < cps.size() && !is_space(cps[j].value)) ++j;
    std::size_t lo = i, hi = j;
    while (lo < hi && is_punct(cps[lo].value)) ++lo;
    while (hi > lo && is_punct(cps[hi - 1].value)) --hi;
    if (lo < hi) {
      std::string token;
      for (std::size_t k = lo; k < hi; ++k) {
        const auto& cp = cps[k];
        const auto lowered = to_lower(cp.value);
        if (lowered == cp.value) {
          token.append(text.substr(cp.begin, cp.end - cp.begin));
        } else {
          append_utf8(token, lowered);
        }
      }
      tokens.push_back(std::move(token));
    }
    i = j;
  }
  return tokens;
}

TokenizedDoc tokenize_doc(std::string doc_id, std::string_view text) {
  return {std::move(doc_id), tokenize(text)};
}

std::vector<SentenceSpan> sentence_spans(std::string_view text) {
  std::vector<SentenceSpan> spans;
  const auto cps = decode(text);
  std::size_t start = cps.size();  // index of first code point of the open sentence
  std::size_t last = 0;            // one past its last non-space code point

  auto close = [&](bool line_break) {
    if (start < cps.size()) {
      spans.push_back({cps[start].begin, cps[last - 1].end, line_break});
      start = cps.size();
    } else if (line_break && !spans.empty()) {
      spans.back().line_break_after = true;
    }
  };

  std::size_t i = 0;
  while (i < cps.size()) {
    const char32_t c = cps[i].value;
    if (c == '\n' || c == 0x2028 || c == 0x2029) {
      close(true);
      ++i;
      continue;
    }
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (start == cps.size()) start = i;
    if (c < 0x80 && is_terminator(static_cast<char>(c))) {
      std::size_t j = i;
      while (j < cps.size() && cps[j].value < 0x80 &&
             is_terminator(static_cast<char>(cps[j].value))) {
        ++j;
      }
      last = j;
      if (j == cps.size() || is_space(cps[j].value)) close(false);
      i = j;
      continue;
    }
    last = ++i;
  }
  close(false);
  return spans;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& span : sentence_spans(text)) {
    out.emplace_back(text.substr(span.begin, span.end - span.begin));
  }
  return out;
}

std::string join_sentences(std::string_view text, const std::vector<SentenceSpan>& spans,
                           const std::vector<bool>& keep) {
  std::string out;
  bool have_previous = false;
  bool newline_pending = false;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (keep[i]) {
      const auto sentence = text.substr(spans[i].begin, spans[i].end - spans[i].begin);
      if (have_previous) out += newline_pending ? '\n' : ' ';
      out.append(sentence);
      have_previous = true;
      // A sentence that was closed by a line break rather than a terminator
      // must stay on its own line or it would merge with the next one.
      newline_pending = spans[i].line_break_after || !is_terminator(sentence.back());
    } else if (have_previous) {
      newline_pending = newline_pending || spans[i].line_break_after;
    }
  }
  return out;
}

std::vector<std::string> ngrams(const std::vector<std::string>& tokens, int ngram_max) {
  std::vector<std::string> out(tokens.begin(), tokens.end());
  if (ngram_max >= 2) {
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
      out.push_back(tokens[i] + ' ' + tokens[i + 1]);
    }
  }
  return out;
}

}  // namespace advq
