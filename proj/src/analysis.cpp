#include "cdmpm/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_map>

namespace cdmpm {

std::vector<LevelStats> level_stats(const MultilevelRepresentation& rep) {
    std::vector<LevelStats> stats;
    stats.reserve(rep.levels.size());
    for (int level = rep.top_level; level >= 0; --level) {
        const LevelSequence& seq = rep.levels[static_cast<std::size_t>(level)];
        LevelStats s;
        s.level = level;
        s.token_count = seq.tokens.size();
        s.block_count = seq.blocks.size();
        for (const Token& token : seq.tokens) {
            if (token.kind == TokenKind::New) ++s.new_count;
            if (!token.forced) ++s.coded_count;
        }
        if (level >= 1) {
            s.class_count = rep.classes[static_cast<std::size_t>(level)].size();
        } else {
            // Level 0 has no labeling pass; count the contexts that occur.
            std::vector<bool> seen(rep.alphabet.size() + 1, false);
            for (std::uint32_t label : seq.labels) {
                if (!seen[label]) {
                    seen[label] = true;
                    ++s.class_count;
                }
            }
        }
        stats.push_back(s);
    }
    return stats;
}

double level_entropy(const LevelSequence& seq) {
    std::unordered_map<std::uint32_t, std::unordered_map<std::uint32_t, std::uint64_t>> tally;
    for (std::size_t j = 0; j < seq.tokens.size(); ++j) {
        const Token& token = seq.tokens[j];
        if (seq.level >= 1) {
            if (token.kind != TokenKind::Repeat) continue;  // drop every New
        }
        ++tally[seq.labels[j]][token.value];
    }

    double bits = 0.0;
    for (const auto& [label, counts] : tally) {
        (void)label;
        std::uint64_t class_total = 0;
        for (const auto& [value, count] : counts) {
            (void)value;
            class_total += count;
        }
        for (const auto& [value, count] : counts) {
            (void)value;
            bits += static_cast<double>(count) *
                    std::log2(static_cast<double>(class_total) / static_cast<double>(count));
        }
    }
    return bits;
}

EntropyReport grammar_entropy(const MultilevelRepresentation& rep) {
    EntropyReport report;
    report.per_level.resize(rep.levels.size(), 0.0);
    for (std::size_t i = 0; i < rep.levels.size(); ++i) {
        report.per_level[i] = level_entropy(rep.levels[i]);
        report.total_bits += report.per_level[i];
    }
    return report;
}

double order1_entropy(ByteSpan input, const Alphabet& alphabet) {
    const std::uint64_t n = input.size();
    if (n <= 1) return 0.0;

    std::vector<std::uint64_t> pair_counts(65536, 0);
    std::vector<std::uint64_t> context_counts(256, 0);
    std::uint8_t context = alphabet.first();
    for (std::uint8_t symbol : input) {
        ++pair_counts[(static_cast<std::size_t>(context) << 8) | symbol];
        ++context_counts[context];
        context = symbol;
    }

    double bits = 0.0;
    for (std::size_t c = 0; c < 256; ++c) {
        if (context_counts[c] == 0) continue;
        const double ctx_total = static_cast<double>(context_counts[c]);
        for (std::size_t a = 0; a < 256; ++a) {
            const std::uint64_t count = pair_counts[(c << 8) | a];
            if (count == 0) continue;
            bits += static_cast<double>(count) * std::log2(ctx_total / static_cast<double>(count));
        }
    }
    return bits / static_cast<double>(n);
}

std::optional<double> theorem_constant(std::uint32_t branching, std::uint32_t refinement,
                                       std::size_t alphabet_size) {
    if (alphabet_size < 2) return std::nullopt;
    const double r = branching;
    const double a = static_cast<double>(alphabet_size);
    const double log_a = std::log2(a);
    const double log_k = std::log2(static_cast<double>(refinement));
    return 20.0 * r * log_a * (r * log_k + r * log_a + a * a + 2.0 * r + 1.0);
}

namespace {

std::uint64_t coded_sum(const std::vector<LevelStats>& stats) {
    std::uint64_t total = 0;
    for (const LevelStats& s : stats) total += s.coded_count;
    return total;
}

}  // namespace

double lemma_bound(double grammar_entropy_bits, const std::vector<LevelStats>& stats,
                   std::size_t alphabet_size) {
    const double a = static_cast<double>(alphabet_size);
    return grammar_entropy_bits + 2.0 * static_cast<double>(coded_sum(stats)) + a * a;
}

double lemma_bound_tight(double grammar_entropy_bits, const std::vector<LevelStats>& stats,
                         std::size_t alphabet_size) {
    std::uint64_t upper_sum = 0;
    std::uint64_t level0 = 0;
    for (const LevelStats& s : stats) {
        if (s.level >= 1) {
            upper_sum += s.coded_count;
        } else {
            level0 = s.coded_count;
        }
    }
    const double a = static_cast<double>(alphabet_size);
    return grammar_entropy_bits + 2.0 * static_cast<double>(upper_sum) -
           static_cast<double>(level0) + a * a;
}

const char* check_name(Check check) {
    switch (check) {
        case Check::Pass: return "true";
        case Check::Fail: return "false";
        case Check::Vacuous: return "vacuous";
    }
    return "?";
}

RedundancyReport redundancy_report_prepared(const MultilevelRepresentation& rep,
                                            const EncodeStats& stats, ByteSpan input,
                                            std::uint32_t refinement) {
    RedundancyReport report;
    report.input_size = rep.input_size;
    report.branching = rep.params.branching;
    report.top_level = rep.top_level;
    report.mode = rep.params.mode;
    report.refinement = refinement;
    report.alphabet_size = rep.alphabet.size();
    report.levels = level_stats(rep);

    report.payload_bits = stats.payload_bits;
    const double n = static_cast<double>(rep.input_size);
    report.bits_per_symbol = rep.input_size ? static_cast<double>(stats.payload_bits) / n : 0.0;
    report.grammar_entropy_bits = grammar_entropy(rep).total_bits;
    report.order1_bits_per_symbol = order1_entropy(input, rep.alphabet);

    report.lemma_rhs_bits = lemma_bound(report.grammar_entropy_bits, report.levels,
                                        report.alphabet_size);
    report.lemma_rhs_tight_bits = lemma_bound_tight(report.grammar_entropy_bits, report.levels,
                                                    report.alphabet_size);
    report.lemma_check = static_cast<double>(report.payload_bits) <=
                                 report.lemma_rhs_bits + kFlushSlackBits
                             ? Check::Pass
                             : Check::Fail;

    report.redundancy = report.bits_per_symbol - report.order1_bits_per_symbol;
    report.bound_constant = theorem_constant(report.branching, refinement, report.alphabet_size);
    if (report.bound_constant && rep.input_size >= 2) {
        report.bound_value = *report.bound_constant / std::log2(n);
        report.theorem_check =
            report.redundancy <= *report.bound_value ? Check::Pass : Check::Fail;
    }

    report.coded_total = coded_sum(report.levels);
    if (report.alphabet_size >= 2 && rep.input_size >= 2) {
        const double r = report.branching;
        report.coded_total_bound =
            20.0 * r * r * std::log2(static_cast<double>(report.alphabet_size)) * n / std::log2(n);
        report.coded_total_check = static_cast<double>(report.coded_total) <=
                                           *report.coded_total_bound
                                       ? Check::Pass
                                       : Check::Fail;
    }
    return report;
}

RedundancyReport redundancy_report(ByteSpan input, const Params& params,
                                   std::uint32_t refinement) {
    const Alphabet alphabet = Alphabet::infer(input);
    const MultilevelRepresentation rep = build_multilevel(input, params, alphabet);
    const FlatStream flat = flatten(rep);
    EncodeStats stats;
    encode_payload(rep, flat, &stats);
    return redundancy_report_prepared(rep, stats, input, refinement);
}

std::string render_report(const RedundancyReport& report) {
    std::ostringstream out;
    char buf[64];
    auto fixed = [&buf](double value) {
        std::snprintf(buf, sizeof buf, "%.6f", value);
        return std::string(buf);
    };
    auto opt_fixed = [&fixed](const std::optional<double>& value) {
        return value ? fixed(*value) : std::string("undefined");
    };

    out << "n: " << report.input_size << '\n';
    out << "r: " << report.branching << '\n';
    out << "i_eff: " << report.top_level << '\n';
    out << "mode: " << mode_name(report.mode) << '\n';
    out << "k: " << report.refinement << '\n';
    out << "alphabet_size: " << report.alphabet_size << '\n';
    out << "payload_bits: " << report.payload_bits << '\n';
    out << "bits_per_symbol: " << fixed(report.bits_per_symbol) << '\n';
    out << "h_g_bits: " << fixed(report.grammar_entropy_bits) << '\n';
    out << "h1_bits_per_symbol: " << fixed(report.order1_bits_per_symbol) << '\n';
    out << "lemma_rhs_bits: " << fixed(report.lemma_rhs_bits) << '\n';
    out << "lemma_rhs_tight_bits: " << fixed(report.lemma_rhs_tight_bits) << '\n';
    out << "lemma_pass: " << check_name(report.lemma_check) << '\n';
    out << "theorem_c: " << opt_fixed(report.bound_constant) << '\n';
    out << "theorem_bound: " << opt_fixed(report.bound_value) << '\n';
    out << "redundancy: " << fixed(report.redundancy) << '\n';
    out << "theorem_pass: " << check_name(report.theorem_check) << '\n';
    out << "sum_l: " << report.coded_total << '\n';
    out << "sum_l_bound: " << opt_fixed(report.coded_total_bound) << '\n';
    out << "sum_l_pass: " << check_name(report.coded_total_check) << '\n';
    for (const LevelStats& s : report.levels) {
        out << "l_" << s.level << ": " << s.coded_count << '\n';
        if (s.level >= 1) out << "f_" << s.level << "_s: " << s.new_count << '\n';
    }
    return out.str();
}

}  // namespace cdmpm
