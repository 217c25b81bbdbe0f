#pragma once

// End-to-end encoder/decoder and the on-disk container format.
//
// Container layout (byte-exact):
//   0..3   magic "CDMP"
//   4      version 0x01
//   5      flags: bit 0 selects context-dependent mode, bits 1-7 zero
//   6      branching factor r (2..255)
//   7      requested level count (0..63)
//   8..15  input length n, big-endian
//   16..17 alphabet size minus one, big-endian
//   18..   alphabet symbols in index order, then the arithmetic payload
//          (MSB-first bits, zero-padded to a byte boundary; empty when n=0).

#include <cstdint>
#include <optional>
#include <vector>

#include "cdmpm/coder.hpp"
#include "cdmpm/core.hpp"
#include "cdmpm/token.hpp"
#include "cdmpm/transform.hpp"

namespace cdmpm {

inline constexpr std::size_t kHeaderBaseSize = 18;
inline constexpr std::uint8_t kContainerVersion = 0x01;

struct HeaderInfo {
    Params params;
    std::uint64_t input_size = 0;
    Alphabet alphabet;
    std::size_t header_size = 0;  // bytes before the payload
};

Bytes write_header(const Params& params, std::uint64_t input_size, const Alphabet& alphabet);

// Strict field-by-field decode; throws CorruptError on any malformation.
HeaderInfo parse_header(ByteSpan container);

// One record per block the codec visited, in payload order. Forced blocks
// appear with coded=false and no interval. Instrumented runs compare the
// encoder's and decoder's vectors entry by entry: equal model totals and
// counts at every step mean the two model states never diverged.
struct TokenTrace {
    std::int32_t level = 0;
    std::uint32_t label = 0;
    Token token;
    bool coded = false;
    std::uint64_t model_count = 0;
    std::uint64_t model_total = 0;

    bool operator==(const TokenTrace& other) const = default;
};

struct EncodeStats {
    std::uint64_t payload_bits = 0;  // exact coder output, before padding
    double ideal_bits = 0.0;         // sum of -log2(model probability)
    std::uint64_t coded_tokens = 0;
};

// Arithmetic-codes the flat stream's non-forced entries against the adaptive
// models. Returns payload bytes only (no header).
Bytes encode_payload(const MultilevelRepresentation& rep, const FlatStream& flat,
                     EncodeStats* stats = nullptr, std::vector<TokenTrace>* trace = nullptr);

Bytes compress(ByteSpan input, const Params& params, EncodeStats* stats = nullptr,
               std::vector<TokenTrace>* trace = nullptr);

Bytes decompress(ByteSpan container, std::vector<TokenTrace>* trace = nullptr);

}  // namespace cdmpm
