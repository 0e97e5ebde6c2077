#include "sdverify/tokenizer.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

namespace sdverify {
namespace {

constexpr UChar32 kReplacement = 0xFFFD;

bool is_apostrophe(UChar32 c) { return c == 0x0027 || c == 0x2019 || c == 0x02BC; }

// U+02BC is itself a letter (Lm), so it must not count as one here.
bool is_word_letter(UChar32 c) { return u_isalpha(c) && !is_apostrophe(c); }

bool is_separator(UChar32 c) { return u_isUWhiteSpace(c) || u_iscntrl(c) || u_ispunct(c); }

struct Decoder {
    std::string_view text;
    int32_t pos = 0;

    [[nodiscard]] bool done() const { return pos >= static_cast<int32_t>(text.size()); }

    UChar32 peek() const {
        int32_t p = pos;
        return next_at(p);
    }

    UChar32 next() { return next_at(pos); }

private:
    UChar32 next_at(int32_t& p) const {
        UChar32 c;
        const auto* s = reinterpret_cast<const uint8_t*>(text.data());
        U8_NEXT(s, p, static_cast<int32_t>(text.size()), c);
        return c < 0 ? kReplacement : c;
    }
};

void append_utf8(std::string& out, UChar32 c) {
    char buf[U8_MAX_LENGTH];
    int32_t len = 0;
    U8_APPEND_UNSAFE(buf, len, c);
    out.append(buf, static_cast<std::size_t>(len));
}

}  // namespace

TokenStream tokenize(std::string_view text) {
    TokenStream tokens;
    std::string current;
    UChar32 last = 0;
    Decoder dec{text};
    while (!dec.done()) {
        UChar32 c = dec.next();
        if (is_apostrophe(c)) {
            if (!current.empty() && is_word_letter(last) && !dec.done() && is_word_letter(dec.peek())) {
                current += '\'';
                last = '\'';
                continue;
            }
        }
        if (is_apostrophe(c) || is_separator(c)) {
            if (!current.empty()) {
                tokens.push_back(std::move(current));
                current.clear();
            }
            last = 0;
            continue;
        }
        UChar32 folded = u_foldCase(c, U_FOLD_CASE_DEFAULT);
        append_utf8(current, folded);
        last = folded;
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::string join_tokens(const TokenStream& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out += ' ';
        out += t;
    }
    return out;
}

}  // namespace sdverify
