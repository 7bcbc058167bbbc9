#include "cascata/text.hpp"

#include <algorithm>
#include <cctype>

namespace cascata {
namespace unicode {

std::vector<char32_t> decode_utf8(std::string_view s) {
    std::vector<char32_t> out;
    out.reserve(s.size());
    std::size_t i = 0;
    const std::size_t n = s.size();
    while (i < n) {
        const unsigned char b0 = static_cast<unsigned char>(s[i]);
        char32_t cp = 0xFFFD;
        std::size_t len = 1;
        if (b0 < 0x80) {
            cp = b0;
        } else if ((b0 & 0xE0) == 0xC0 && i + 1 < n) {
            const unsigned char b1 = static_cast<unsigned char>(s[i + 1]);
            if ((b1 & 0xC0) == 0x80) {
                cp = (static_cast<char32_t>(b0 & 0x1F) << 6) | (b1 & 0x3F);
                len = 2;
                if (cp < 0x80) cp = 0xFFFD; // overlong
            }
        } else if ((b0 & 0xF0) == 0xE0 && i + 2 < n) {
            const unsigned char b1 = static_cast<unsigned char>(s[i + 1]);
            const unsigned char b2 = static_cast<unsigned char>(s[i + 2]);
            if ((b1 & 0xC0) == 0x80 && (b2 & 0xC0) == 0x80) {
                cp = (static_cast<char32_t>(b0 & 0x0F) << 12) |
                     (static_cast<char32_t>(b1 & 0x3F) << 6) | (b2 & 0x3F);
                len = 3;
                if (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
            }
        } else if ((b0 & 0xF8) == 0xF0 && i + 3 < n) {
            const unsigned char b1 = static_cast<unsigned char>(s[i + 1]);
            const unsigned char b2 = static_cast<unsigned char>(s[i + 2]);
            const unsigned char b3 = static_cast<unsigned char>(s[i + 3]);
            if ((b1 & 0xC0) == 0x80 && (b2 & 0xC0) == 0x80 && (b3 & 0xC0) == 0x80) {
                cp = (static_cast<char32_t>(b0 & 0x07) << 18) |
                     (static_cast<char32_t>(b1 & 0x3F) << 12) |
                     (static_cast<char32_t>(b2 & 0x3F) << 6) | (b3 & 0x3F);
                len = 4;
                if (cp < 0x10000 || cp > 0x10FFFF) cp = 0xFFFD;
            }
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

char32_t to_lower(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp + 32;
    // Latin-1 supplement: À..Þ except × map to à..þ.
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
    // Latin Extended-A: mostly upper/lower pairs.
    if (cp >= 0x100 && cp <= 0x137 && (cp % 2 == 0)) return cp + 1;
    if (cp >= 0x139 && cp <= 0x148 && (cp % 2 == 1)) return cp + 1;
    if (cp >= 0x14A && cp <= 0x177 && (cp % 2 == 0)) return cp + 1;
    if (cp == 0x178) return 0xFF; // Ÿ -> ÿ
    if (cp >= 0x179 && cp <= 0x17E && (cp % 2 == 1)) return cp + 1;
    return cp;
}

bool is_space(char32_t cp) {
    switch (cp) {
        case U' ': case U'\t': case U'\n': case U'\r': case 0x0B: case 0x0C:
        case 0xA0: case 0x1680: case 0x2028: case 0x2029: case 0x202F:
        case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

bool is_word_char(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= U'0' && cp <= U'9') || (cp >= U'a' && cp <= U'z') ||
               (cp >= U'A' && cp <= U'Z') || cp == U'_';
    }
    if (cp == 0xD7 || cp == 0xF7) return false; // × ÷
    if (cp >= 0xC0 && cp <= 0x24F) return true; // Latin letters
    if (cp >= 0x300 && cp <= 0x36F) return true; // combining marks (kept inline)
    if (cp >= 0x370 && cp <= 0x1FFF) return true; // Greek, Cyrillic, ...
    if (cp >= 0x3040 && cp <= 0xD7FF) return true; // CJK and friends
    return false;
}

namespace {

// Precomposition of combining marks over the Latin base letters the
// lexicons use (NFC for this repertoire). Input base is already lowercased.
char32_t compose(char32_t base, char32_t mark) {
    switch (mark) {
        case 0x0300: // grave
            switch (base) {
                case U'a': return 0xE0; case U'e': return 0xE8; case U'i': return 0xEC;
                case U'o': return 0xF2; case U'u': return 0xF9;
            }
            break;
        case 0x0301: // acute
            switch (base) {
                case U'a': return 0xE1; case U'e': return 0xE9; case U'i': return 0xED;
                case U'o': return 0xF3; case U'u': return 0xFA; case U'y': return 0xFD;
            }
            break;
        case 0x0302: // circumflex
            switch (base) {
                case U'a': return 0xE2; case U'e': return 0xEA; case U'i': return 0xEE;
                case U'o': return 0xF4; case U'u': return 0xFB;
            }
            break;
        case 0x0303: // tilde
            switch (base) {
                case U'a': return 0xE3; case U'n': return 0xF1; case U'o': return 0xF5;
            }
            break;
        case 0x0308: // diaeresis
            switch (base) {
                case U'a': return 0xE4; case U'e': return 0xEB; case U'i': return 0xEF;
                case U'o': return 0xF6; case U'u': return 0xFC; case U'y': return 0xFF;
            }
            break;
        case 0x0327: // cedilla
            if (base == U'c') return 0xE7;
            break;
        default:
            break;
    }
    return 0;
}

std::string fold_token(const std::vector<char32_t>& cps, std::size_t begin, std::size_t end) {
    // lowercase, then compose base+mark pairs, then strip non-word edges
    std::vector<char32_t> folded;
    folded.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
        const char32_t cp = unicode::to_lower(cps[i]);
        if (!folded.empty()) {
            const char32_t composed = compose(folded.back(), cp);
            if (composed != 0) {
                folded.back() = composed;
                continue;
            }
        }
        folded.push_back(cp);
    }
    std::size_t lo = 0;
    std::size_t hi = folded.size();
    while (lo < hi && !unicode::is_word_char(folded[lo])) ++lo;
    while (hi > lo && !unicode::is_word_char(folded[hi - 1])) --hi;
    std::string out;
    for (std::size_t i = lo; i < hi; ++i) unicode::append_utf8(out, folded[i]);
    return out;
}

bool starts_with_ascii_ci(const std::vector<char32_t>& cps, std::size_t begin, std::size_t end,
                          std::string_view prefix) {
    if (end - begin < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        char32_t cp = cps[begin + i];
        if (cp >= U'A' && cp <= U'Z') cp += 32;
        if (cp != static_cast<char32_t>(prefix[i])) return false;
    }
    return true;
}

} // namespace

} // namespace unicode

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    if (text.empty()) return tokens;
    const std::vector<char32_t> cps = unicode::decode_utf8(text);
    std::size_t i = 0;
    const std::size_t n = cps.size();
    while (i < n) {
        while (i < n && unicode::is_space(cps[i])) ++i;
        std::size_t j = i;
        while (j < n && !unicode::is_space(cps[j])) ++j;
        if (j > i) {
            std::size_t begin = i;
            bool drop = false;
            if (unicode::starts_with_ascii_ci(cps, begin, j, "http://") ||
                unicode::starts_with_ascii_ci(cps, begin, j, "https://") ||
                unicode::starts_with_ascii_ci(cps, begin, j, "www.")) {
                drop = true; // URL
            } else if (cps[begin] == U'@') {
                drop = true; // mention
            } else if (cps[begin] == U'#') {
                ++begin; // keep hashtag body
            }
            if (!drop) {
                std::string token = unicode::fold_token(cps, begin, j);
                if (!token.empty()) tokens.push_back(std::move(token));
            }
        }
        i = j;
    }
    return tokens;
}

std::string normalize_lemma(std::string_view lemma) {
    const std::vector<char32_t> cps = unicode::decode_utf8(lemma);
    return unicode::fold_token(cps, 0, cps.size());
}

} // namespace cascata
