#pragma once

// Adaptive counter models and the integer arithmetic coder. Everything here
// is normative for the container payload: interval order, update rules,
// rescaling and the bit-level coder must match between encoder and decoder.

#include <cstdint>
#include <utility>
#include <vector>

#include "cdmpm/core.hpp"
#include "cdmpm/token.hpp"

namespace cdmpm {

// Counter totals never exceed this; the coder's 32-bit registers need
// range/total >= 2^14 so every unit count keeps a nonempty subinterval.
inline constexpr std::uint64_t kMaxTotal = 1u << 16;

// Slack the coder may cost beyond the ideal code length (register flush).
inline constexpr int kFlushSlackBits = 33;

struct Interval {
    std::uint64_t cum_low = 0;
    std::uint64_t count = 0;
    std::uint64_t total = 0;
};

// Cumulative frequency table over a growable slot alphabet, Fenwick-backed
// so lookups and updates stay O(log size) for large classes.
class CountTable {
public:
    CountTable() = default;
    CountTable(std::size_t slots, std::uint32_t initial);

    std::size_t size() const { return counts_.size(); }
    std::uint64_t total() const { return total_; }
    std::uint32_t count(std::size_t slot) const { return counts_[slot]; }

    void append(std::uint32_t value);
    void add(std::size_t slot, std::uint32_t delta);
    // c <- ceil(c/2) on every slot; unit counts stay at 1.
    void halve();

    std::uint64_t cum_before(std::size_t slot) const;
    // Slot whose [cum, cum+count) range contains target; target < total().
    std::size_t locate(std::uint64_t target, std::uint64_t& cum_out) const;

    bool operator==(const CountTable& other) const {
        return counts_ == other.counts_;
    }

private:
    std::vector<std::uint32_t> counts_;
    std::vector<std::uint32_t> tree_;  // 1-based Fenwick over counts_
    std::uint64_t total_ = 0;

    void rebuild();
};

// Token model for one (level >= 1, context class) pair. Slot 0 codes the
// new-block marker, slot m a repeat of the class's m-th distinct block.
// Creation mirrors the class's forced first block: marker and repeat-1
// both start at one count, so the active alphabet is {new, 1}.
class ClassModel {
public:
    ClassModel();

    // d: distinct blocks seen so far, counting the forced first one.
    std::size_t distinct_count() const { return table_.size() - 1; }
    std::uint64_t total() const { return table_.total(); }

    Interval interval_of(const Token& token) const;
    std::pair<Token, Interval> locate(std::uint64_t target) const;

    // Applied after a token is coded. Forced tokens must never reach this.
    // New tokens grow the alphabet by one repeat slot with a unit count.
    void update(const Token& token);

    // Interval list in coding order [new, 1..d]; diagnostic/testing view.
    std::vector<std::pair<Token, Interval>> intervals() const;

    bool operator==(const ClassModel& other) const { return table_ == other.table_; }

private:
    CountTable table_;
};

// Level-0 symbol counters, one table per conditioning symbol, all counts
// born at 1 over the whole alphabet.
class Level0Model {
public:
    explicit Level0Model(std::size_t alphabet_size);

    Interval interval_of(std::size_t context, std::size_t symbol) const;
    std::pair<std::size_t, Interval> locate(std::size_t context, std::uint64_t target) const;
    void update(std::size_t context, std::size_t symbol);

    bool operator==(const Level0Model& other) const { return tables_ == other.tables_; }

private:
    std::vector<CountTable> tables_;
};

// MSB-first bit sink; the final partial byte is zero-padded.
class BitWriter {
public:
    void put(int bit);
    std::uint64_t bit_count() const { return bit_count_; }
    const Bytes& bytes() const { return bytes_; }
    Bytes take() { return std::move(bytes_); }

private:
    Bytes bytes_;
    std::uint64_t bit_count_ = 0;
};

// MSB-first bit source. Reads past the end yield zeros, which the coder's
// final renormalizations legitimately consume; anything beyond `slack`
// overrun bits means the payload was truncated and raises DesyncError.
class BitReader {
public:
    explicit BitReader(ByteSpan bytes, std::uint64_t slack = 32);
    int get();
    std::uint64_t bits_consumed() const { return consumed_; }

private:
    ByteSpan bytes_;
    std::uint64_t limit_;
    std::uint64_t consumed_ = 0;
    std::uint64_t overrun_ = 0;
    std::uint64_t slack_;
};

// 32-bit low/high range coder with pending-bit underflow handling.
class ArithmeticEncoder {
public:
    explicit ArithmeticEncoder(BitWriter& out) : out_(out) {}

    void encode(const Interval& iv) { encode(iv.cum_low, iv.count, iv.total); }
    void encode(std::uint64_t cum_low, std::uint64_t count, std::uint64_t total);
    // Emits the final disambiguating bits; call once, after the last symbol.
    void flush();

private:
    std::uint32_t low_ = 0;
    std::uint32_t high_ = 0xFFFFFFFFu;
    std::uint64_t pending_ = 0;
    BitWriter& out_;

    void emit(int bit);
};

class ArithmeticDecoder {
public:
    explicit ArithmeticDecoder(BitReader& in);

    // Scaled target selecting the interval the encoder used; < total.
    std::uint64_t decode_target(std::uint64_t total) const;
    void consume(const Interval& iv) { consume(iv.cum_low, iv.count, iv.total); }
    void consume(std::uint64_t cum_low, std::uint64_t count, std::uint64_t total);

private:
    std::uint32_t low_ = 0;
    std::uint32_t high_ = 0xFFFFFFFFu;
    std::uint32_t value_ = 0;
    BitReader& in_;
};

}  // namespace cdmpm
