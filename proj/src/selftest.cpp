#include "cdmpm/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <sstream>

#include "cdmpm/analysis.hpp"
#include "cdmpm/codec.hpp"
#include "cdmpm/errors.hpp"

namespace cdmpm {

const char* content_name(ContentKind kind) {
    switch (kind) {
        case ContentKind::IidBinary: return "iid2";
        case ContentKind::IidSixteen: return "iid16";
        case ContentKind::IidBytes: return "iid256";
        case ContentKind::MarkovBinary: return "markov";
        case ContentKind::Periodic: return "periodic";
        case ContentKind::Constant: return "constant";
    }
    return "?";
}

Bytes make_content(ContentKind kind, std::size_t length, std::uint64_t seed) {
    Lcg rng(seed);
    Bytes data(length);
    switch (kind) {
        case ContentKind::IidBinary:
            for (auto& b : data) b = static_cast<std::uint8_t>('a' + rng.below(2));
            break;
        case ContentKind::IidSixteen:
            for (auto& b : data) b = static_cast<std::uint8_t>('a' + rng.below(16));
            break;
        case ContentKind::IidBytes:
            for (auto& b : data) b = static_cast<std::uint8_t>(rng.below(256));
            break;
        case ContentKind::MarkovBinary: {
            std::uint8_t state = static_cast<std::uint8_t>('a' + rng.below(2));
            for (auto& b : data) {
                if (!rng.chance(9, 10)) state = state == 'a' ? 'b' : 'a';
                b = state;
            }
            break;
        }
        case ContentKind::Periodic:
            for (std::size_t i = 0; i < length; ++i) data[i] = (i & 1) ? 'b' : 'a';
            break;
        case ContentKind::Constant:
            std::fill(data.begin(), data.end(), static_cast<std::uint8_t>('a'));
            break;
    }
    return data;
}

namespace {

std::uint32_t maximal_levels(std::uint32_t branching, std::size_t length) {
    const int depth = effective_levels(length, branching, 63);
    return std::clamp<std::uint32_t>(static_cast<std::uint32_t>(depth), 1, 24);
}

std::uint64_t case_seed(ContentKind kind, std::size_t length) {
    // Content depends on (kind, length) only, so every (r, I, mode) variant
    // sees the same bytes.
    return 0x5DEECE66Dull ^ (static_cast<std::uint64_t>(kind) << 48) ^
           (static_cast<std::uint64_t>(length) * 0x9E3779B97F4A7C15ull);
}

}  // namespace

std::vector<CorpusCase> corpus_cases() {
    static constexpr ContentKind kKinds[] = {
        ContentKind::IidBinary,  ContentKind::IidSixteen, ContentKind::IidBytes,
        ContentKind::MarkovBinary, ContentKind::Periodic,   ContentKind::Constant,
    };
    static constexpr std::uint32_t kBranchings[] = {2, 3, 4};
    // 0 stands for "maximal for this input".
    static constexpr std::uint32_t kLevelRequests[] = {1, 4, 0};
    static constexpr Mode kModes[] = {Mode::Cdmpm, Mode::Mpm};

    std::vector<CorpusCase> cases;
    for (std::uint32_t branching : kBranchings) {
        std::set<std::size_t> lengths;
        for (std::size_t n = 0; n <= 17; ++n) lengths.insert(n);
        const std::size_t r = branching;
        const std::size_t r4 = r * r * r * r;
        lengths.insert({r - 1, r, r + 1, r4 - 1, r4, r4 + 1, 65536});

        for (std::size_t length : lengths) {
            for (std::uint32_t level_request : kLevelRequests) {
                const std::uint32_t levels =
                    level_request ? level_request : maximal_levels(branching, length);
                for (Mode mode : kModes) {
                    for (ContentKind kind : kKinds) {
                        CorpusCase c;
                        c.content = kind;
                        c.length = length;
                        c.seed = case_seed(kind, length);
                        c.params = Params{branching, levels, mode};
                        std::ostringstream name;
                        name << content_name(kind) << "-n" << length << "-r" << branching << "-I"
                             << levels << "-" << mode_name(mode);
                        c.name = name.str();
                        cases.push_back(std::move(c));
                    }
                }
            }
        }
    }
    return cases;
}

SelftestResult run_selftest(std::ostream& out) {
    const auto start = std::chrono::steady_clock::now();
    SelftestResult result;

    for (const CorpusCase& c : corpus_cases()) {
        ++result.cases;
        const Bytes data = c.data();
        try {
            const Alphabet alphabet = Alphabet::infer(data);
            const MultilevelRepresentation rep = build_multilevel(data, c.params, alphabet);
            const FlatStream flat = flatten(rep);
            EncodeStats stats;
            Bytes container = write_header(c.params, data.size(), alphabet);
            const Bytes payload = encode_payload(rep, flat, &stats);
            container.insert(container.end(), payload.begin(), payload.end());

            if (decompress(container) != data) {
                ++result.round_trip_failures;
                out << "FAIL round-trip " << c.name << '\n';
                continue;
            }

            const RedundancyReport report = redundancy_report_prepared(rep, stats, data);
            if (report.lemma_check == Check::Fail) {
                ++result.lemma_failures;
                out << "FAIL lemma-bound " << c.name << " payload=" << report.payload_bits
                    << " rhs=" << report.lemma_rhs_bits << '\n';
            }
            if (data.size() >= 1024 && report.theorem_check == Check::Fail) {
                ++result.theorem_failures;
                out << "FAIL redundancy-bound " << c.name << " redundancy=" << report.redundancy
                    << " bound=" << (report.bound_value ? *report.bound_value : 0.0) << '\n';
            }
        } catch (const std::exception& e) {
            ++result.round_trip_failures;
            out << "FAIL exception " << c.name << ": " << e.what() << '\n';
        }
    }

    result.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out << "selftest: " << result.cases << " cases, " << result.round_trip_failures
        << " round-trip failures, " << result.lemma_failures << " lemma failures, "
        << result.theorem_failures << " redundancy failures (" << result.seconds << " s)\n";
    return result;
}

}  // namespace cdmpm
