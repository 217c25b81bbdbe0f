#pragma once

// The multilevel grammar transform: per-level block sequences, contexts and
// class labels, per-class distinct-block lists, the depth-first flat token
// stream fed to the coder, and the grammar view of the result.

#include <cstdint>
#include <string>
#include <vector>

#include "cdmpm/core.hpp"
#include "cdmpm/token.hpp"

namespace cdmpm {

inline constexpr std::size_t kNoChild = static_cast<std::size_t>(-1);

// One level of the representation. Blocks at level i hold r^i symbols; the
// context of block j is the fixed string a_1^{r^i} for j = 0 and the content
// of block j-1 otherwise. At level 0 no labeling happens: tokens are the raw
// symbols and `labels` carries the context symbol's alphabet index + 1.
struct LevelSequence {
    int level = 0;
    std::vector<std::string> blocks;     // block contents in sequence order
    std::vector<std::string> contexts;   // context contents, same indexing
    std::vector<std::uint32_t> labels;   // 1-based class labels
    std::vector<Token> tokens;
    // Index of the first of the r children at level-1 for New blocks,
    // kNoChild otherwise. Empty at level 0.
    std::vector<std::size_t> child_base;
};

// Distinct-block bookkeeping for one (level, label) class. Entry m-1 is the
// m-th first-appearing content, so a Repeat(m) token resolves to it.
struct ContextClass {
    std::uint32_t label = 0;
    std::vector<std::string> distinct_blocks;
    std::vector<std::size_t> distinct_block_index;  // position in LevelSequence.blocks
};

struct MultilevelRepresentation {
    Params params;
    Alphabet alphabet;
    std::uint64_t input_size = 0;
    int top_level = 0;                         // effective level count
    std::vector<std::uint64_t> level_lengths;  // [n_top, ..., n_0]
    std::vector<LevelSequence> levels;         // levels[i] describes level i
    std::vector<std::vector<ContextClass>> classes;  // classes[i][label-1]

    std::uint64_t block_length(int level) const;  // r^level
    // Tail blocks at `level` sit at the end of the block sequence and act as
    // extra depth-first roots once all higher levels are exhausted.
    std::size_t tail_count(int level) const;
    std::size_t root_count() const;  // blocks at the top level
};

struct FlatEntry {
    std::int32_t level = 0;
    std::uint32_t label = 0;        // class label; level 0: context index + 1
    Token token;
    std::uint32_t block_index = 0;  // position within the level's sequence
};

// Depth-first serialization: every New block is immediately followed by its
// r children, tail roots follow in descending level order. The subsequence
// with forced entries removed is exactly what the payload codes.
struct FlatStream {
    std::vector<FlatEntry> entries;
    std::uint64_t coded_count = 0;  // entries that reach the coder
};

// Runs the grammar transform. Every input symbol must be in the alphabet.
MultilevelRepresentation build_multilevel(ByteSpan input, const Params& params,
                                          const Alphabet& alphabet);

FlatStream flatten(const MultilevelRepresentation& rep);

// Rebuilds the input from tokens, child links and distinct-block lists only
// (never from stored block contents); the lossless-transform witness.
Bytes expand(const MultilevelRepresentation& rep);

// Context-free-grammar view: one nonterminal per (level, class, distinct
// rank); start derives the root blocks.
struct Grammar {
    struct Symbol {
        bool terminal = false;
        std::uint8_t byte = 0;       // terminal payload
        int level = 0;               // nonterminal coordinates
        std::uint32_t label = 0;
        std::uint32_t rank = 0;
    };
    struct Production {
        int level = 0;
        std::uint32_t label = 0;
        std::uint32_t rank = 0;
        std::vector<Symbol> rhs;
    };
    std::vector<Symbol> start;
    std::vector<Production> productions;

    Bytes derive() const;        // expand the start symbol
    std::string to_string() const;
};

Grammar grammar_dump(const MultilevelRepresentation& rep);

// Stable plain-text trace: one line per level (top first) with blocks,
// labels and tokens (forced marker "s*", repeats as integers), then the
// coded stream line. Used by the CLI `trace` command and golden tests.
std::string render_trace(const MultilevelRepresentation& rep, const FlatStream& flat);

}  // namespace cdmpm
