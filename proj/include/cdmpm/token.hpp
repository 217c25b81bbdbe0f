#pragma once

#include <cstdint>

namespace cdmpm {

// Label attached to one block of the multilevel representation.
//   New     - first appearance of a block content within its context class
//             (the transform's special marker symbol). `value` is the 1-based
//             rank the content takes in the class's distinct-block list.
//   Repeat  - block repeats distinct content number `value` of its class.
//   Literal - level-0 block; `value` is the 0-based alphabet index.
enum class TokenKind : std::uint8_t { New, Repeat, Literal };

struct Token {
    TokenKind kind = TokenKind::New;
    std::uint32_t value = 0;
    // The class's very first block is always New and is never coded: the
    // decoder infers it when it meets the class. Meaningful for New only.
    bool forced = false;

    static Token make_new(std::uint32_t rank, bool forced_first) {
        return Token{TokenKind::New, rank, forced_first};
    }
    static Token repeat(std::uint32_t rank) { return Token{TokenKind::Repeat, rank, false}; }
    static Token literal(std::uint32_t symbol_index) {
        return Token{TokenKind::Literal, symbol_index, false};
    }

    bool operator==(const Token& other) const {
        return kind == other.kind && value == other.value && forced == other.forced;
    }
};

}  // namespace cdmpm
