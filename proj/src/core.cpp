#include "cdmpm/core.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

#include "cdmpm/errors.hpp"

namespace cdmpm {

const char* mode_name(Mode mode) {
    return mode == Mode::Cdmpm ? "cdmpm" : "mpm";
}

void Alphabet::rebuild_index() {
    index_.fill(-1);
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        index_[symbols_[i]] = static_cast<std::int16_t>(i);
    }
}

Alphabet Alphabet::infer(ByteSpan data) {
    std::array<bool, 256> seen{};
    for (std::uint8_t b : data) seen[b] = true;

    Alphabet a;
    for (int b = 0; b < 256; ++b) {
        if (seen[b]) a.symbols_.push_back(static_cast<std::uint8_t>(b));
    }
    if (a.symbols_.empty()) a.symbols_.push_back(0x00);
    a.rebuild_index();
    return a;
}

Alphabet Alphabet::from_symbols(Bytes symbols) {
    if (symbols.empty()) throw ValidationError("alphabet must hold at least one symbol");
    std::array<bool, 256> seen{};
    for (std::uint8_t b : symbols) {
        if (seen[b]) throw ValidationError("alphabet symbols must be distinct");
        seen[b] = true;
    }
    Alphabet a;
    a.symbols_ = std::move(symbols);
    a.rebuild_index();
    return a;
}

std::size_t Alphabet::index_of(std::uint8_t byte) const {
    int idx = index_[byte];
    if (idx < 0) throw ValidationError("symbol outside alphabet");
    return static_cast<std::size_t>(idx);
}

int effective_levels(std::uint64_t n, std::uint32_t branching, std::uint32_t requested) {
    if (branching < 2) throw ValidationError("branching factor must be >= 2");
    if (n == 0) return 0;
    int exponent = 0;
    std::uint64_t power = 1;
    while (power <= n / branching) {  // power * r <= n without overflow
        power *= branching;
        ++exponent;
    }
    return std::min<int>(exponent, static_cast<int>(requested));
}

std::vector<std::uint64_t> rary_expansion(std::uint64_t n, std::uint32_t branching,
                                          std::uint32_t requested_levels) {
    const int top = effective_levels(n, branching, requested_levels);

    std::vector<std::uint64_t> power(static_cast<std::size_t>(top) + 1);
    power[0] = 1;
    for (int i = 1; i <= top; ++i) power[i] = power[i - 1] * branching;

    std::vector<std::uint64_t> lengths(static_cast<std::size_t>(top) + 1);
    lengths[0] = (n / power[top]) * power[top];  // digits at positions >= top
    std::uint64_t rest = n - lengths[0];
    for (int i = top - 1; i >= 0; --i) {
        const std::uint64_t digit = rest / power[i];
        assert(digit < branching);
        lengths[top - i] = digit * power[i];
        rest -= lengths[top - i];
    }
    assert(rest == 0);
    return lengths;
}

std::vector<ByteSpan> top_partition(ByteSpan data, const std::vector<std::uint64_t>& lengths) {
    std::uint64_t total = 0;
    for (std::uint64_t len : lengths) total += len;
    if (total != data.size()) {
        throw std::logic_error("top_partition: lengths do not sum to input size");
    }
    std::vector<ByteSpan> parts;
    parts.reserve(lengths.size());
    std::size_t offset = 0;
    for (std::uint64_t len : lengths) {
        parts.push_back(data.subspan(offset, static_cast<std::size_t>(len)));
        offset += static_cast<std::size_t>(len);
    }
    return parts;
}

}  // namespace cdmpm
