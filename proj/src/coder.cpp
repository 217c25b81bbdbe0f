#include "cdmpm/coder.hpp"

#include <bit>
#include <cassert>
#include <stdexcept>

#include "cdmpm/errors.hpp"

namespace cdmpm {

namespace {
constexpr std::uint32_t kHalf = 1u << 31;
constexpr std::uint32_t kQuarter = 1u << 30;
constexpr std::uint32_t kThreeQuarters = kHalf + kQuarter;
}  // namespace

// ---------------------------------------------------------------- CountTable

CountTable::CountTable(std::size_t slots, std::uint32_t initial)
    : counts_(slots, initial) {
    rebuild();
}

void CountTable::rebuild() {
    const std::size_t n = counts_.size();
    tree_.assign(n, 0);
    total_ = 0;
    for (std::size_t i = 0; i < n; ++i) {
        tree_[i] += counts_[i];
        const std::size_t parent = (i + 1) + ((i + 1) & ~i);  // i+1 + lowbit(i+1)
        if (parent <= n) tree_[parent - 1] += tree_[i];
        total_ += counts_[i];
    }
}

void CountTable::append(std::uint32_t value) {
    counts_.push_back(value);
    const std::size_t n = counts_.size();
    const std::size_t lowbit = n & (~n + 1);
    // New node covers slots (n - lowbit, n]; seed it with the prior range sum.
    tree_.push_back(static_cast<std::uint32_t>(cum_before(n - 1) - cum_before(n - lowbit)));
    tree_.back() += value;
    total_ += value;
}

void CountTable::add(std::size_t slot, std::uint32_t delta) {
    counts_[slot] += delta;
    total_ += delta;
    for (std::size_t j = slot + 1; j <= counts_.size(); j += j & (~j + 1)) {
        tree_[j - 1] += delta;
    }
}

void CountTable::halve() {
    for (auto& c : counts_) c = (c + 1) >> 1;
    rebuild();
}

std::uint64_t CountTable::cum_before(std::size_t slot) const {
    std::uint64_t acc = 0;
    for (std::size_t j = slot; j > 0; j -= j & (~j + 1)) acc += tree_[j - 1];
    return acc;
}

std::size_t CountTable::locate(std::uint64_t target, std::uint64_t& cum_out) const {
    assert(target < total_);
    std::size_t idx = 0;
    std::uint64_t acc = 0;
    for (std::size_t step = std::bit_floor(counts_.size()); step > 0; step >>= 1) {
        const std::size_t next = idx + step;
        if (next <= counts_.size() && acc + tree_[next - 1] <= target) {
            idx = next;
            acc += tree_[next - 1];
        }
    }
    cum_out = acc;
    return idx;
}

// ---------------------------------------------------------------- ClassModel

ClassModel::ClassModel() : table_(2, 1) {}  // {new:1, repeat-1:1}

Interval ClassModel::interval_of(const Token& token) const {
    std::size_t slot = 0;
    if (token.kind == TokenKind::Repeat) {
        if (token.value == 0 || token.value > distinct_count()) {
            throw DesyncError("repeat rank outside the class's distinct-block list");
        }
        slot = token.value;
    } else if (token.kind != TokenKind::New) {
        throw std::logic_error("literal token offered to a class model");
    }
    return Interval{table_.cum_before(slot), table_.count(slot), table_.total()};
}

std::pair<Token, Interval> ClassModel::locate(std::uint64_t target) const {
    std::uint64_t cum = 0;
    const std::size_t slot = table_.locate(target, cum);
    Token token = slot == 0 ? Token::make_new(static_cast<std::uint32_t>(distinct_count()) + 1, false)
                            : Token::repeat(static_cast<std::uint32_t>(slot));
    return {token, Interval{cum, table_.count(slot), table_.total()}};
}

void ClassModel::update(const Token& token) {
    assert(!token.forced);
    const std::size_t slot = token.kind == TokenKind::New ? 0 : token.value;
    const std::uint64_t growth = token.kind == TokenKind::New ? 2 : 1;
    if (table_.total() + growth > kMaxTotal) {
        table_.halve();
        if (table_.total() + growth > kMaxTotal) {
            throw CapacityError("context class outgrew the coder's count budget");
        }
    }
    table_.add(slot, 1);
    if (token.kind == TokenKind::New) table_.append(1);
}

std::vector<std::pair<Token, Interval>> ClassModel::intervals() const {
    std::vector<std::pair<Token, Interval>> out;
    out.reserve(table_.size());
    std::uint64_t cum = 0;
    for (std::size_t slot = 0; slot < table_.size(); ++slot) {
        Token token = slot == 0 ? Token::make_new(0, false)
                                : Token::repeat(static_cast<std::uint32_t>(slot));
        out.emplace_back(token, Interval{cum, table_.count(slot), table_.total()});
        cum += table_.count(slot);
    }
    return out;
}

// --------------------------------------------------------------- Level0Model

Level0Model::Level0Model(std::size_t alphabet_size)
    : tables_(alphabet_size, CountTable(alphabet_size, 1)) {}

Interval Level0Model::interval_of(std::size_t context, std::size_t symbol) const {
    const CountTable& t = tables_[context];
    return Interval{t.cum_before(symbol), t.count(symbol), t.total()};
}

std::pair<std::size_t, Interval> Level0Model::locate(std::size_t context,
                                                     std::uint64_t target) const {
    const CountTable& t = tables_[context];
    std::uint64_t cum = 0;
    const std::size_t symbol = t.locate(target, cum);
    return {symbol, Interval{cum, t.count(symbol), t.total()}};
}

void Level0Model::update(std::size_t context, std::size_t symbol) {
    CountTable& t = tables_[context];
    if (t.total() + 1 > kMaxTotal) t.halve();
    t.add(symbol, 1);
}

// ------------------------------------------------------------------- bit I/O

void BitWriter::put(int bit) {
    if ((bit_count_ & 7) == 0) bytes_.push_back(0);
    if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bit_count_ & 7));
    ++bit_count_;
}

BitReader::BitReader(ByteSpan bytes, std::uint64_t slack)
    : bytes_(bytes), limit_(static_cast<std::uint64_t>(bytes.size()) * 8), slack_(slack) {}

int BitReader::get() {
    if (consumed_ >= limit_) {
        if (++overrun_ > slack_) {
            throw DesyncError("payload exhausted before the output was complete");
        }
        ++consumed_;
        return 0;
    }
    const std::uint64_t pos = consumed_++;
    return (bytes_[static_cast<std::size_t>(pos >> 3)] >> (7 - (pos & 7))) & 1;
}

// ------------------------------------------------------------ range coding

void ArithmeticEncoder::emit(int bit) {
    out_.put(bit);
    for (; pending_ > 0; --pending_) out_.put(!bit);
}

void ArithmeticEncoder::encode(std::uint64_t cum_low, std::uint64_t count, std::uint64_t total) {
    assert(count > 0 && cum_low + count <= total && total <= kMaxTotal);
    const std::uint64_t range = static_cast<std::uint64_t>(high_) - low_ + 1;
    high_ = low_ + static_cast<std::uint32_t>(range * (cum_low + count) / total - 1);
    low_ = low_ + static_cast<std::uint32_t>(range * cum_low / total);
    for (;;) {
        if (high_ < kHalf) {
            emit(0);
        } else if (low_ >= kHalf) {
            emit(1);
            low_ -= kHalf;
            high_ -= kHalf;
        } else if (low_ >= kQuarter && high_ < kThreeQuarters) {
            ++pending_;
            low_ -= kQuarter;
            high_ -= kQuarter;
        } else {
            break;
        }
        low_ <<= 1;
        high_ = (high_ << 1) | 1;
    }
}

void ArithmeticEncoder::flush() {
    ++pending_;
    emit(low_ < kQuarter ? 0 : 1);
}

ArithmeticDecoder::ArithmeticDecoder(BitReader& in) : in_(in) {
    for (int i = 0; i < 32; ++i) value_ = (value_ << 1) | static_cast<std::uint32_t>(in_.get());
}

std::uint64_t ArithmeticDecoder::decode_target(std::uint64_t total) const {
    const std::uint64_t range = static_cast<std::uint64_t>(high_) - low_ + 1;
    return ((static_cast<std::uint64_t>(value_ - low_) + 1) * total - 1) / range;
}

void ArithmeticDecoder::consume(std::uint64_t cum_low, std::uint64_t count, std::uint64_t total) {
    const std::uint64_t range = static_cast<std::uint64_t>(high_) - low_ + 1;
    high_ = low_ + static_cast<std::uint32_t>(range * (cum_low + count) / total - 1);
    low_ = low_ + static_cast<std::uint32_t>(range * cum_low / total);
    for (;;) {
        if (high_ < kHalf) {
            // nothing to subtract
        } else if (low_ >= kHalf) {
            value_ -= kHalf;
            low_ -= kHalf;
            high_ -= kHalf;
        } else if (low_ >= kQuarter && high_ < kThreeQuarters) {
            value_ -= kQuarter;
            low_ -= kQuarter;
            high_ -= kQuarter;
        } else {
            break;
        }
        low_ <<= 1;
        high_ = (high_ << 1) | 1;
        value_ = (value_ << 1) | static_cast<std::uint32_t>(in_.get());
    }
}

}  // namespace cdmpm
