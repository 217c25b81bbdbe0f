#include "cdmpm/transform.hpp"

#include <array>
#include <cassert>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "cdmpm/errors.hpp"

namespace cdmpm {

namespace {

std::string slice_to_string(ByteSpan data, std::size_t offset, std::size_t length) {
    return std::string(reinterpret_cast<const char*>(data.data()) + offset, length);
}

// Splits `source` into consecutive pieces of `piece_len` and appends them.
void append_pieces(std::vector<std::string>& out, const std::string& source,
                   std::size_t piece_len) {
    assert(source.size() % piece_len == 0);
    for (std::size_t off = 0; off < source.size(); off += piece_len) {
        out.push_back(source.substr(off, piece_len));
    }
}

void append_pieces(std::vector<std::string>& out, ByteSpan source, std::size_t piece_len) {
    assert(source.size() % piece_len == 0);
    for (std::size_t off = 0; off < source.size(); off += piece_len) {
        out.push_back(slice_to_string(source, off, piece_len));
    }
}

std::string render_byte(std::uint8_t byte) {
    if (byte > 0x20 && byte < 0x7F && byte != '\\') return std::string(1, static_cast<char>(byte));
    char buf[8];
    std::snprintf(buf, sizeof buf, "\\x%02x", byte);
    return std::string(buf);
}

std::string render_block(const std::string& block) {
    std::string out;
    for (char c : block) out += render_byte(static_cast<std::uint8_t>(c));
    return out;
}

std::string render_token(const Token& token, const Alphabet& alphabet) {
    switch (token.kind) {
        case TokenKind::New:
            return token.forced ? "s*" : "s";
        case TokenKind::Repeat:
            return std::to_string(token.value);
        case TokenKind::Literal:
            return render_byte(alphabet.symbol(token.value));
    }
    return "?";
}

}  // namespace

std::uint64_t MultilevelRepresentation::block_length(int level) const {
    std::uint64_t len = 1;
    for (int i = 0; i < level; ++i) len *= params.branching;
    return len;
}

std::size_t MultilevelRepresentation::tail_count(int level) const {
    if (level >= top_level) return 0;
    const std::uint64_t len = level_lengths[static_cast<std::size_t>(top_level - level)];
    return static_cast<std::size_t>(len / block_length(level));
}

std::size_t MultilevelRepresentation::root_count() const {
    return static_cast<std::size_t>(level_lengths[0] / block_length(top_level));
}

MultilevelRepresentation build_multilevel(ByteSpan input, const Params& params,
                                          const Alphabet& alphabet) {
    for (std::uint8_t b : input) {
        if (!alphabet.contains(b)) throw ValidationError("input symbol outside alphabet");
    }

    MultilevelRepresentation rep;
    rep.params = params;
    rep.alphabet = alphabet;
    rep.input_size = input.size();
    rep.top_level = effective_levels(input.size(), params.branching, params.levels);
    rep.level_lengths = rary_expansion(input.size(), params.branching, params.levels);
    rep.levels.resize(static_cast<std::size_t>(rep.top_level) + 1);
    rep.classes.resize(static_cast<std::size_t>(rep.top_level) + 1);

    const auto parts = top_partition(input, rep.level_lengths);
    const std::uint32_t r = params.branching;

    for (int level = rep.top_level; level >= 0; --level) {
        LevelSequence& seq = rep.levels[static_cast<std::size_t>(level)];
        seq.level = level;
        const std::size_t block_len = static_cast<std::size_t>(rep.block_length(level));

        if (level == rep.top_level) {
            append_pieces(seq.blocks, parts[0], block_len);
        } else {
            // Children of the level above's New blocks first, tails after.
            LevelSequence& parent = rep.levels[static_cast<std::size_t>(level) + 1];
            for (std::size_t j = 0; j < parent.blocks.size(); ++j) {
                if (parent.tokens[j].kind != TokenKind::New) continue;
                parent.child_base[j] = seq.blocks.size();
                append_pieces(seq.blocks, parent.blocks[j], block_len);
            }
            append_pieces(seq.blocks, parts[static_cast<std::size_t>(rep.top_level - level)],
                          block_len);
        }

        const std::size_t count = seq.blocks.size();
        seq.contexts.reserve(count);
        seq.labels.resize(count);
        seq.tokens.resize(count);
        const std::string fixed_context(block_len, static_cast<char>(alphabet.first()));
        for (std::size_t j = 0; j < count; ++j) {
            seq.contexts.push_back(j == 0 ? fixed_context : seq.blocks[j - 1]);
        }

        if (level >= 1) {
            seq.child_base.assign(count, kNoChild);
            auto& classes = rep.classes[static_cast<std::size_t>(level)];
            std::unordered_map<std::string, std::uint32_t> label_of;
            std::vector<std::unordered_map<std::string, std::uint32_t>> rank_of;
            for (std::size_t j = 0; j < count; ++j) {
                std::uint32_t label;
                if (params.mode == Mode::Mpm) {
                    label = 1;
                    if (classes.empty()) {
                        classes.push_back(ContextClass{1, {}, {}});
                        rank_of.emplace_back();
                    }
                } else {
                    auto [it, inserted] = label_of.try_emplace(
                        seq.contexts[j], static_cast<std::uint32_t>(classes.size()) + 1);
                    label = it->second;
                    if (inserted) {
                        classes.push_back(ContextClass{label, {}, {}});
                        rank_of.emplace_back();
                    }
                }
                seq.labels[j] = label;

                ContextClass& cls = classes[label - 1];
                auto [it, inserted] = rank_of[label - 1].try_emplace(
                    seq.blocks[j], static_cast<std::uint32_t>(cls.distinct_blocks.size()) + 1);
                if (inserted) {
                    const bool first_of_class = cls.distinct_blocks.empty();
                    seq.tokens[j] = Token::make_new(it->second, first_of_class);
                    cls.distinct_blocks.push_back(seq.blocks[j]);
                    cls.distinct_block_index.push_back(j);
                } else {
                    seq.tokens[j] = Token::repeat(it->second);
                }
            }
        } else {
            for (std::size_t j = 0; j < count; ++j) {
                const auto symbol = static_cast<std::uint8_t>(seq.blocks[j][0]);
                seq.tokens[j] = Token::literal(static_cast<std::uint32_t>(alphabet.index_of(symbol)));
                const auto context = static_cast<std::uint8_t>(seq.contexts[j][0]);
                seq.labels[j] = static_cast<std::uint32_t>(alphabet.index_of(context)) + 1;
            }
        }
    }
    return rep;
}

FlatStream flatten(const MultilevelRepresentation& rep) {
    FlatStream flat;
    std::vector<std::size_t> next_expected(rep.levels.size(), 0);

    auto visit = [&](auto&& self, int level, std::size_t index) -> void {
        const LevelSequence& seq = rep.levels[static_cast<std::size_t>(level)];
        // Depth-first encounter order must walk each level in sequence order;
        // the decoder's context tracking depends on it.
        assert(index == next_expected[static_cast<std::size_t>(level)]);
        ++next_expected[static_cast<std::size_t>(level)];

        const Token& token = seq.tokens[index];
        flat.entries.push_back(FlatEntry{level, seq.labels[index], token,
                                         static_cast<std::uint32_t>(index)});
        if (!token.forced) ++flat.coded_count;
        if (level >= 1 && token.kind == TokenKind::New) {
            const std::size_t base = seq.child_base[index];
            for (std::uint32_t c = 0; c < rep.params.branching; ++c) {
                self(self, level - 1, base + c);
            }
        }
    };

    for (std::size_t j = 0; j < rep.root_count(); ++j) {
        visit(visit, rep.top_level, j);
    }
    for (int level = rep.top_level - 1; level >= 0; --level) {
        const LevelSequence& seq = rep.levels[static_cast<std::size_t>(level)];
        const std::size_t tails = rep.tail_count(level);
        for (std::size_t j = seq.blocks.size() - tails; j < seq.blocks.size(); ++j) {
            visit(visit, level, j);
        }
    }

    for (std::size_t level = 0; level < rep.levels.size(); ++level) {
        assert(next_expected[level] == rep.levels[level].blocks.size());
        (void)level;
    }
    return flat;
}

Bytes expand(const MultilevelRepresentation& rep) {
    std::vector<std::vector<std::string>> resolved(rep.levels.size());

    const LevelSequence& base = rep.levels[0];
    resolved[0].reserve(base.blocks.size());
    for (const Token& token : base.tokens) {
        if (token.kind != TokenKind::Literal || token.value >= rep.alphabet.size()) {
            throw std::logic_error("expand: level 0 holds a non-literal token");
        }
        resolved[0].emplace_back(1, static_cast<char>(rep.alphabet.symbol(token.value)));
    }

    for (int level = 1; level <= rep.top_level; ++level) {
        const LevelSequence& seq = rep.levels[static_cast<std::size_t>(level)];
        auto& out = resolved[static_cast<std::size_t>(level)];
        out.resize(seq.blocks.size());
        for (std::size_t j = 0; j < seq.blocks.size(); ++j) {
            const Token& token = seq.tokens[j];
            if (token.kind == TokenKind::New) {
                const std::size_t child = seq.child_base[j];
                std::string content;
                for (std::uint32_t c = 0; c < rep.params.branching; ++c) {
                    content += resolved[static_cast<std::size_t>(level) - 1][child + c];
                }
                out[j] = std::move(content);
            } else if (token.kind == TokenKind::Repeat) {
                const auto& cls = rep.classes[static_cast<std::size_t>(level)][seq.labels[j] - 1];
                if (token.value == 0 || token.value > cls.distinct_block_index.size()) {
                    throw std::logic_error("expand: repeat rank has no distinct block");
                }
                const std::size_t source = cls.distinct_block_index[token.value - 1];
                if (source >= j) throw std::logic_error("expand: repeat points forward");
                out[j] = out[source];
            } else {
                throw std::logic_error("expand: literal token above level 0");
            }
        }
    }

    Bytes output;
    output.reserve(static_cast<std::size_t>(rep.input_size));
    auto append = [&](const std::string& content) {
        output.insert(output.end(), content.begin(), content.end());
    };
    for (std::size_t j = 0; j < rep.root_count(); ++j) {
        append(resolved[static_cast<std::size_t>(rep.top_level)][j]);
    }
    for (int level = rep.top_level - 1; level >= 0; --level) {
        const auto& contents = resolved[static_cast<std::size_t>(level)];
        for (std::size_t j = contents.size() - rep.tail_count(level); j < contents.size(); ++j) {
            append(contents[j]);
        }
    }
    return output;
}

Grammar grammar_dump(const MultilevelRepresentation& rep) {
    Grammar grammar;

    auto block_symbol = [&](int level, std::size_t index) -> Grammar::Symbol {
        const LevelSequence& seq = rep.levels[static_cast<std::size_t>(level)];
        Grammar::Symbol sym;
        if (level == 0) {
            sym.terminal = true;
            sym.byte = rep.alphabet.symbol(seq.tokens[index].value);
        } else {
            sym.level = level;
            sym.label = seq.labels[index];
            sym.rank = seq.tokens[index].value;  // New and Repeat both carry the rank
        }
        return sym;
    };

    for (int level = rep.top_level; level >= 1; --level) {
        const LevelSequence& seq = rep.levels[static_cast<std::size_t>(level)];
        for (std::size_t j = 0; j < seq.blocks.size(); ++j) {
            if (seq.tokens[j].kind != TokenKind::New) continue;
            Grammar::Production prod;
            prod.level = level;
            prod.label = seq.labels[j];
            prod.rank = seq.tokens[j].value;
            for (std::uint32_t c = 0; c < rep.params.branching; ++c) {
                prod.rhs.push_back(block_symbol(level - 1, seq.child_base[j] + c));
            }
            grammar.productions.push_back(std::move(prod));
        }
    }

    for (std::size_t j = 0; j < rep.root_count(); ++j) {
        grammar.start.push_back(block_symbol(rep.top_level, j));
    }
    for (int level = rep.top_level - 1; level >= 0; --level) {
        const LevelSequence& seq = rep.levels[static_cast<std::size_t>(level)];
        for (std::size_t j = seq.blocks.size() - rep.tail_count(level); j < seq.blocks.size(); ++j) {
            grammar.start.push_back(block_symbol(level, j));
        }
    }
    return grammar;
}

Bytes Grammar::derive() const {
    std::map<std::array<std::uint64_t, 3>, std::size_t> index;
    for (std::size_t p = 0; p < productions.size(); ++p) {
        const auto& prod = productions[p];
        index[{static_cast<std::uint64_t>(prod.level), prod.label, prod.rank}] = p;
    }
    std::vector<std::string> memo(productions.size());
    std::vector<bool> done(productions.size(), false);

    auto resolve = [&](auto&& self, const Symbol& sym) -> std::string {
        if (sym.terminal) return std::string(1, static_cast<char>(sym.byte));
        const auto it = index.find({static_cast<std::uint64_t>(sym.level), sym.label, sym.rank});
        if (it == index.end()) throw std::logic_error("grammar: unresolved nonterminal");
        const std::size_t p = it->second;
        if (!done[p]) {
            std::string content;
            for (const Symbol& child : productions[p].rhs) content += self(self, child);
            memo[p] = std::move(content);
            done[p] = true;
        }
        return memo[p];
    };

    Bytes output;
    for (const Symbol& sym : start) {
        const std::string content = resolve(resolve, sym);
        output.insert(output.end(), content.begin(), content.end());
    }
    return output;
}

std::string Grammar::to_string() const {
    auto symbol_text = [](const Symbol& sym) {
        if (sym.terminal) return render_byte(sym.byte);
        return "N(" + std::to_string(sym.level) + "," + std::to_string(sym.label) + "," +
               std::to_string(sym.rank) + ")";
    };
    std::ostringstream out;
    out << "start ->";
    for (const Symbol& sym : start) out << ' ' << symbol_text(sym);
    out << '\n';
    for (const Production& prod : productions) {
        out << "N(" << prod.level << ',' << prod.label << ',' << prod.rank << ") ->";
        for (const Symbol& sym : prod.rhs) out << ' ' << symbol_text(sym);
        out << '\n';
    }
    return out.str();
}

std::string render_trace(const MultilevelRepresentation& rep, const FlatStream& flat) {
    std::ostringstream out;
    for (int level = rep.top_level; level >= 0; --level) {
        const LevelSequence& seq = rep.levels[static_cast<std::size_t>(level)];
        out << "level " << level << ": X=[";
        for (std::size_t j = 0; j < seq.blocks.size(); ++j) {
            if (j) out << ' ';
            out << render_block(seq.blocks[j]);
        }
        out << "] C=[";
        for (std::size_t j = 0; j < seq.blocks.size(); ++j) {
            if (j) out << ' ';
            if (level >= 1) {
                out << seq.labels[j];
            } else {
                out << render_byte(static_cast<std::uint8_t>(seq.contexts[j][0]));
            }
        }
        out << "] T=[";
        for (std::size_t j = 0; j < seq.tokens.size(); ++j) {
            if (j) out << ' ';
            out << render_token(seq.tokens[j], rep.alphabet);
        }
        out << "]\n";
    }
    out << "L:";
    for (const FlatEntry& entry : flat.entries) {
        if (entry.token.forced) continue;
        out << ' ' << render_token(entry.token, rep.alphabet);
    }
    out << '\n';
    return out.str();
}

}  // namespace cdmpm
