#include "cdmpm/codec.hpp"

#include <cassert>
#include <cmath>
#include <string>
#include <unordered_map>

#include "cdmpm/errors.hpp"

namespace cdmpm {

namespace {

void put_u64_be(Bytes& out, std::uint64_t value) {
    for (int shift = 56; shift >= 0; shift -= 8) {
        out.push_back(static_cast<std::uint8_t>(value >> shift));
    }
}

std::uint64_t get_u64_be(ByteSpan in, std::size_t offset) {
    std::uint64_t value = 0;
    for (int i = 0; i < 8; ++i) value = (value << 8) | in[offset + i];
    return value;
}

void validate_params(const Params& params) {
    if (params.branching < 2 || params.branching > 255) {
        throw ValidationError("branching factor must be in [2, 255]");
    }
    if (params.levels > 63) throw ValidationError("level count must be in [0, 63]");
}

}  // namespace

Bytes write_header(const Params& params, std::uint64_t input_size, const Alphabet& alphabet) {
    validate_params(params);
    Bytes out;
    out.reserve(kHeaderBaseSize + alphabet.size());
    out.insert(out.end(), {0x43, 0x44, 0x4D, 0x50});  // "CDMP"
    out.push_back(kContainerVersion);
    out.push_back(params.mode == Mode::Cdmpm ? 0x01 : 0x00);
    out.push_back(static_cast<std::uint8_t>(params.branching));
    out.push_back(static_cast<std::uint8_t>(params.levels));
    put_u64_be(out, input_size);
    const std::uint16_t stored = static_cast<std::uint16_t>(alphabet.size() - 1);
    out.push_back(static_cast<std::uint8_t>(stored >> 8));
    out.push_back(static_cast<std::uint8_t>(stored & 0xFF));
    out.insert(out.end(), alphabet.symbols().begin(), alphabet.symbols().end());
    return out;
}

HeaderInfo parse_header(ByteSpan container) {
    if (container.size() < kHeaderBaseSize) throw CorruptError("container truncated in header");
    if (container[0] != 0x43 || container[1] != 0x44 || container[2] != 0x4D ||
        container[3] != 0x50) {
        throw CorruptError("bad container magic");
    }
    if (container[4] != kContainerVersion) throw CorruptError("unsupported container version");
    const std::uint8_t flags = container[5];
    if (flags & 0xFE) throw CorruptError("reserved flag bits set");
    const std::uint8_t branching = container[6];
    if (branching < 2) throw CorruptError("branching factor below 2");
    const std::uint8_t levels = container[7];
    if (levels > 63) throw CorruptError("level count above 63");

    HeaderInfo info;
    info.params.mode = (flags & 0x01) ? Mode::Cdmpm : Mode::Mpm;
    info.params.branching = branching;
    info.params.levels = levels;
    info.input_size = get_u64_be(container, 8);

    const std::uint16_t stored =
        static_cast<std::uint16_t>((container[16] << 8) | container[17]);
    if (stored > 255) throw CorruptError("alphabet larger than 256 symbols");
    const std::size_t alphabet_size = static_cast<std::size_t>(stored) + 1;
    if (container.size() < kHeaderBaseSize + alphabet_size) {
        throw CorruptError("container truncated in alphabet table");
    }
    Bytes symbols(container.begin() + kHeaderBaseSize,
                  container.begin() + kHeaderBaseSize + alphabet_size);
    try {
        info.alphabet = Alphabet::from_symbols(std::move(symbols));
    } catch (const ValidationError& e) {
        throw CorruptError(std::string("bad alphabet table: ") + e.what());
    }
    info.header_size = kHeaderBaseSize + alphabet_size;
    return info;
}

Bytes encode_payload(const MultilevelRepresentation& rep, const FlatStream& flat,
                     EncodeStats* stats, std::vector<TokenTrace>* trace) {
    BitWriter bits;
    ArithmeticEncoder coder(bits);
    // Class models per level, created in label order at forced entries.
    std::vector<std::vector<ClassModel>> classes(rep.levels.size());
    Level0Model level0(rep.alphabet.size());

    EncodeStats local;
    for (const FlatEntry& entry : flat.entries) {
        if (entry.token.forced) {
            auto& models = classes[static_cast<std::size_t>(entry.level)];
            assert(entry.label == models.size() + 1);
            models.emplace_back();
            if (trace) trace->push_back(TokenTrace{entry.level, entry.label, entry.token, false, 0, 0});
            continue;
        }
        Interval iv;
        if (entry.level >= 1) {
            ClassModel& model = classes[static_cast<std::size_t>(entry.level)][entry.label - 1];
            iv = model.interval_of(entry.token);
            coder.encode(iv);
            model.update(entry.token);
        } else {
            const std::size_t context = entry.label - 1;
            iv = level0.interval_of(context, entry.token.value);
            coder.encode(iv);
            level0.update(context, entry.token.value);
        }
        local.ideal_bits -= std::log2(static_cast<double>(iv.count) / static_cast<double>(iv.total));
        ++local.coded_tokens;
        if (trace) {
            trace->push_back(
                TokenTrace{entry.level, entry.label, entry.token, true, iv.count, iv.total});
        }
    }
    if (local.coded_tokens > 0) coder.flush();
    local.payload_bits = bits.bit_count();
    if (stats) *stats = local;
    return bits.take();
}

Bytes compress(ByteSpan input, const Params& params, EncodeStats* stats,
               std::vector<TokenTrace>* trace) {
    validate_params(params);
    const Alphabet alphabet = Alphabet::infer(input);
    const MultilevelRepresentation rep = build_multilevel(input, params, alphabet);
    const FlatStream flat = flatten(rep);

    Bytes container = write_header(params, input.size(), alphabet);
    const Bytes payload = encode_payload(rep, flat, stats, trace);
    container.insert(container.end(), payload.begin(), payload.end());
    return container;
}

namespace {

// Decoder-side state for one level >= 1: label assignment by context content
// in first-appearance order, plus per-class models and distinct-block lists.
struct LevelDecoder {
    std::unordered_map<std::string, std::uint32_t> label_of;
    std::vector<ClassModel> models;
    std::vector<std::vector<std::string>> distinct;  // per class
    std::string previous_block;  // content of the last completed block
    std::uint64_t blocks_done = 0;
};

class Decoder {
public:
    Decoder(const HeaderInfo& header, ByteSpan payload, std::vector<TokenTrace>* trace)
        : header_(header),
          branching_(header.params.branching),
          lengths_(rary_expansion(header.input_size, header.params.branching,
                                  header.params.levels)),
          top_level_(static_cast<int>(lengths_.size()) - 1),
          levels_(lengths_.size()),
          level0_(header.alphabet.size()),
          previous_symbol_(0),  // the first level-0 context is the first symbol
          bits_(payload),
          coder_(bits_),
          trace_(trace) {}

    Bytes run() {
        Bytes output;
        output.reserve(static_cast<std::size_t>(header_.input_size));
        auto emit_root = [&](const std::string& content) {
            output.insert(output.end(), content.begin(), content.end());
        };

        std::uint64_t block_len = 1;
        for (int i = 0; i < top_level_; ++i) block_len *= branching_;
        const std::uint64_t roots = lengths_[0] / block_len;
        for (std::uint64_t j = 0; j < roots; ++j) emit_root(decode_block(top_level_));

        for (int level = top_level_ - 1; level >= 0; --level) {
            block_len /= branching_;
            const std::uint64_t tails =
                lengths_[static_cast<std::size_t>(top_level_ - level)] / block_len;
            for (std::uint64_t j = 0; j < tails; ++j) emit_root(decode_block(level));
        }
        return output;
    }

private:
    const HeaderInfo& header_;
    const std::uint32_t branching_;
    const std::vector<std::uint64_t> lengths_;
    const int top_level_;
    std::vector<LevelDecoder> levels_;
    Level0Model level0_;
    std::size_t previous_symbol_;
    BitReader bits_;
    ArithmeticDecoder coder_;
    std::vector<TokenTrace>* trace_;

    std::string decode_block(int level) {
        if (level == 0) return decode_symbol();

        LevelDecoder& state = levels_[static_cast<std::size_t>(level)];
        std::uint64_t block_len = 1;
        for (int i = 0; i < level; ++i) block_len *= branching_;

        std::uint32_t label;
        bool class_is_new;
        if (header_.params.mode == Mode::Mpm) {
            label = 1;
            class_is_new = state.models.empty();
        } else {
            const std::string context =
                state.blocks_done == 0
                    ? std::string(static_cast<std::size_t>(block_len),
                                  static_cast<char>(header_.alphabet.first()))
                    : state.previous_block;
            auto [it, inserted] = state.label_of.try_emplace(
                context, static_cast<std::uint32_t>(state.models.size()) + 1);
            label = it->second;
            class_is_new = inserted;
        }

        Token token;
        if (class_is_new) {
            // First block of a fresh class: a forced New, no bits consumed.
            state.models.emplace_back();
            state.distinct.emplace_back();
            token = Token::make_new(1, true);
            if (trace_) trace_->push_back(TokenTrace{level, label, token, false, 0, 0});
        } else {
            ClassModel& model = state.models[label - 1];
            const std::uint64_t target = coder_.decode_target(model.total());
            auto [decoded, iv] = model.locate(target);
            coder_.consume(iv);
            model.update(decoded);
            token = decoded;
            if (trace_) {
                trace_->push_back(TokenTrace{level, label, token, true, iv.count, iv.total});
            }
        }

        std::string content;
        if (token.kind == TokenKind::New) {
            content.reserve(static_cast<std::size_t>(block_len));
            for (std::uint32_t c = 0; c < branching_; ++c) content += decode_block(level - 1);
            state.distinct[label - 1].push_back(content);
        } else {
            const auto& list = state.distinct[label - 1];
            if (token.value == 0 || token.value > list.size()) {
                throw DesyncError("repeat rank beyond the decoded distinct-block list");
            }
            content = list[token.value - 1];
        }
        state.previous_block = content;
        ++state.blocks_done;
        return content;
    }

    std::string decode_symbol() {
        const std::size_t context = previous_symbol_;
        const std::uint64_t target =
            coder_.decode_target(level0_.interval_of(context, 0).total);
        auto [symbol, iv] = level0_.locate(context, target);
        coder_.consume(iv);
        level0_.update(context, symbol);
        if (trace_) {
            trace_->push_back(TokenTrace{0, static_cast<std::uint32_t>(context) + 1,
                                         Token::literal(static_cast<std::uint32_t>(symbol)), true,
                                         iv.count, iv.total});
        }
        previous_symbol_ = symbol;
        return std::string(1, static_cast<char>(header_.alphabet.symbol(symbol)));
    }
};

}  // namespace

Bytes decompress(ByteSpan container, std::vector<TokenTrace>* trace) {
    const HeaderInfo header = parse_header(container);
    const ByteSpan payload = container.subspan(header.header_size);
    if (header.input_size == 0) {
        if (!payload.empty()) throw CorruptError("nonempty payload for empty input");
        return {};
    }
    Decoder decoder(header, payload, trace);
    return decoder.run();
}

}  // namespace cdmpm
