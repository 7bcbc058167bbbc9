#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cascata {

// Tweet tokenizer. Rules, in order, per whitespace-separated chunk:
//   - chunks that are URLs (http://, https://, www.) are dropped,
//   - @mentions are dropped,
//   - a leading '#' is stripped and the hashtag body kept,
//   - non-word characters are stripped from both edges,
//   - the token is composed (combining marks folded into precomposed
//     Latin letters) and lowercased.
// Empty results are discarded; the token count is the word count w.
//
// Normalization covers the Latin repertoire (ASCII, Latin-1 supplement,
// Latin Extended-A) plus combining accents over it, which is what the
// Spanish-language lexicons this pipeline targets need. Codepoints outside
// that repertoire pass through unchanged.
std::vector<std::string> tokenize(std::string_view text);

// Lowercase + compose a single lexicon lemma with the same normalization
// the tokenizer applies, so lemma/token comparisons are consistent.
std::string normalize_lemma(std::string_view lemma);

namespace unicode {

std::vector<char32_t> decode_utf8(std::string_view s);
void append_utf8(std::string& out, char32_t cp);
char32_t to_lower(char32_t cp);
bool is_word_char(char32_t cp);
bool is_space(char32_t cp);

} // namespace unicode

} // namespace cascata
