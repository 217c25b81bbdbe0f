#pragma once

// Per-level statistics, the grammar's conditional empirical entropy, the
// order-1 conditional empirical entropy of the raw input, and the code-length
// bound checks assembled into a reportable structure.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cdmpm/codec.hpp"
#include "cdmpm/core.hpp"
#include "cdmpm/transform.hpp"

namespace cdmpm {

struct LevelStats {
    int level = 0;
    std::uint64_t token_count = 0;   // |T_i|
    std::uint64_t new_count = 0;     // New tokens, forced included
    std::uint64_t coded_count = 0;   // tokens the payload actually codes
    std::uint64_t block_count = 0;
    std::uint64_t class_count = 0;
};

// Indexed top level first, mirroring the report layout.
std::vector<LevelStats> level_stats(const MultilevelRepresentation& rep);

// Unnormalized conditional empirical entropy of one level's token sequence
// given its class labels, in bits. Levels >= 1 range over repeat tokens only
// (every New is excluded); level 0 ranges over all symbols.
double level_entropy(const LevelSequence& seq);

struct EntropyReport {
    std::vector<double> per_level;  // indexed by level number
    double total_bits = 0.0;        // H_G
};

EntropyReport grammar_entropy(const MultilevelRepresentation& rep);

// Order-1 conditional empirical entropy of the input in bits per symbol,
// conditioning each symbol on its predecessor (the first on the alphabet's
// first symbol). Zero for inputs shorter than two symbols.
double order1_entropy(ByteSpan input, const Alphabet& alphabet);

// The redundancy bound constant; undefined for single-symbol alphabets
// where the leading log factor vanishes.
std::optional<double> theorem_constant(std::uint32_t branching, std::uint32_t refinement,
                                       std::size_t alphabet_size);

// Conservative code-length bound: H_G + 2*sum(l_i over all levels) + |A|^2.
double lemma_bound(double grammar_entropy_bits, const std::vector<LevelStats>& stats,
                   std::size_t alphabet_size);
// Tighter variant that subtracts the level-0 term from the doubled sum.
double lemma_bound_tight(double grammar_entropy_bits, const std::vector<LevelStats>& stats,
                         std::size_t alphabet_size);

enum class Check : std::uint8_t { Pass, Fail, Vacuous };

const char* check_name(Check check);

struct RedundancyReport {
    std::uint64_t input_size = 0;
    std::uint32_t branching = 0;
    int top_level = 0;
    Mode mode = Mode::Cdmpm;
    std::uint32_t refinement = 1;  // k; enters the bound constant only
    std::size_t alphabet_size = 0;

    std::uint64_t payload_bits = 0;
    double bits_per_symbol = 0.0;
    double grammar_entropy_bits = 0.0;      // H_G
    double order1_bits_per_symbol = 0.0;    // H_1

    double lemma_rhs_bits = 0.0;
    double lemma_rhs_tight_bits = 0.0;
    Check lemma_check = Check::Vacuous;

    std::optional<double> bound_constant;   // C
    std::optional<double> bound_value;      // C / log2 n
    double redundancy = 0.0;                // payload/n - H_1
    Check theorem_check = Check::Vacuous;

    std::uint64_t coded_total = 0;          // sum of l_i
    std::optional<double> coded_total_bound;
    Check coded_total_check = Check::Vacuous;

    std::vector<LevelStats> levels;         // top level first
};

// Compresses the input and evaluates every bound at the given refinement
// parameter (the bound comparison always uses the order-1 entropy).
RedundancyReport redundancy_report(ByteSpan input, const Params& params,
                                   std::uint32_t refinement = 1);

// Same evaluation against an already-built representation and encode stats;
// avoids re-running the transform when the caller owns one.
RedundancyReport redundancy_report_prepared(const MultilevelRepresentation& rep,
                                            const EncodeStats& stats, ByteSpan input,
                                            std::uint32_t refinement = 1);

// Stable key:value rendering consumed by the CLI and golden tests.
std::string render_report(const RedundancyReport& report);

}  // namespace cdmpm
