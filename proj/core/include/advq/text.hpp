#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace advq {

struct TokenizedDoc {
  std::string doc_id;
  std::vector<std::string> tokens;
};

// Splits on Unicode whitespace, strips leading and trailing punctuation from
// each chunk, drops chunks that were all punctuation, and lowercases.
// Lowercasing covers ASCII, Latin-1, basic Greek and Cyrillic.
std::vector<std::string> tokenize(std::string_view text);

TokenizedDoc tokenize_doc(std::string doc_id, std::string_view text);

struct SentenceSpan {
  std::size_t begin = 0;  // byte offsets into the source text, trimmed
  std::size_t end = 0;
  bool line_break_after = false;  // a newline separates it from the next one
};

// A sentence ends at a run of '.', '!' or '?' followed by whitespace or end
// of text, or at a newline. Terminators stay with their sentence.
std::vector<SentenceSpan> sentence_spans(std::string_view text);
std::vector<std::string> split_sentences(std::string_view text);

// Joins the kept sentences of `text` back together, using a newline where
// the original had one between them and a single space otherwise.
std::string join_sentences(std::string_view text, const std::vector<SentenceSpan>& spans,
                           const std::vector<bool>& keep);

// Bigrams are the two tokens joined by one space; tokens never contain one.
std::vector<std::string> ngrams(const std::vector<std::string>& tokens, int ngram_max);

}  // namespace advq
