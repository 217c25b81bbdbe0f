#pragma once

// Alphabet handling, r-ary length decomposition and the top-level split of
// the input into per-level substrings.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace cdmpm {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;

enum class Mode : std::uint8_t { Mpm = 0, Cdmpm = 1 };

const char* mode_name(Mode mode);

struct Params {
    std::uint32_t branching = 2;  // r, >= 2
    std::uint32_t levels = 1;     // requested level count I
    Mode mode = Mode::Cdmpm;
};

// Ordered set of distinct byte values. Index 0 holds the first symbol
// (the paper-style a_1), which seeds every fixed initial context.
class Alphabet {
public:
    Alphabet() = default;

    // Distinct bytes of `data` in ascending value order; empty input yields
    // the single-symbol alphabet {0x00} so the initial context always exists.
    static Alphabet infer(ByteSpan data);

    // Explicit symbol list (container order is authoritative, not sorted).
    // Throws ValidationError on duplicates or an empty list.
    static Alphabet from_symbols(Bytes symbols);

    const Bytes& symbols() const { return symbols_; }
    std::size_t size() const { return symbols_.size(); }
    std::uint8_t first() const { return symbols_.front(); }
    std::uint8_t symbol(std::size_t index) const { return symbols_[index]; }

    bool contains(std::uint8_t byte) const { return index_[byte] >= 0; }
    // 0-based symbol index; byte must be present.
    std::size_t index_of(std::uint8_t byte) const;

    bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }

private:
    Bytes symbols_;
    std::array<std::int16_t, 256> index_{};  // byte -> index, -1 if absent

    void rebuild_index();
};

// Largest e with r^e <= n, clamped to `requested`; 0 for n == 0.
int effective_levels(std::uint64_t n, std::uint32_t branching, std::uint32_t requested);

// Per-level symbol counts [n_Ieff, ..., n_0] from the base-r digits of n:
// the top entry collects all digits at positions >= I_eff, each lower entry
// is digit*r^i. Entries sum to n and entry for level i divides by r^i.
std::vector<std::uint64_t> rary_expansion(std::uint64_t n, std::uint32_t branching,
                                          std::uint32_t requested_levels);

// Consecutive non-overlapping slices of `data`, one per entry of `lengths`
// (descending level order). Lengths must sum to data.size().
std::vector<ByteSpan> top_partition(ByteSpan data, const std::vector<std::uint64_t>& lengths);

}  // namespace cdmpm
