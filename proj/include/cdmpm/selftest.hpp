#pragma once

// Built-in deterministic corpus and the self-test harness behind the CLI's
// `selftest` command: round-trips every corpus case and checks the code
// length against the entropy bounds.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "cdmpm/core.hpp"

namespace cdmpm {

// Linear congruential generator with Knuth's 64-bit constants
// (multiplier 6364136223846793005, increment 1442695040888963407);
// only the top 32 bits of the state are consumed.
class Lcg {
public:
    explicit Lcg(std::uint64_t seed) : state_(seed) {}
    std::uint32_t next32() {
        state_ = state_ * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<std::uint32_t>(state_ >> 32);
    }
    std::uint32_t below(std::uint32_t bound) { return next32() % bound; }
    bool chance(std::uint32_t numerator, std::uint32_t denominator) {
        return below(denominator) < numerator;
    }

private:
    std::uint64_t state_;
};

enum class ContentKind : std::uint8_t {
    IidBinary,     // uniform over 2 symbols
    IidSixteen,    // uniform over 16 symbols
    IidBytes,      // uniform over 256 symbols
    MarkovBinary,  // order-1 chain, 0.9 probability of repeating the symbol
    Periodic,      // "ab" repeated
    Constant,      // 'a' repeated
};

const char* content_name(ContentKind kind);
Bytes make_content(ContentKind kind, std::size_t length, std::uint64_t seed);

struct CorpusCase {
    std::string name;
    ContentKind content;
    std::size_t length = 0;
    std::uint64_t seed = 0;
    Params params;

    Bytes data() const { return make_content(content, length, seed); }
};

// The full round-trip corpus: every content kind crossed with both modes,
// branching factors {2,3,4}, level requests {1,4,maximal} and lengths
// {0..17, r±1 neighborhood, r^4±1 neighborhood, 65536}.
std::vector<CorpusCase> corpus_cases();

struct SelftestResult {
    std::uint64_t cases = 0;
    std::uint64_t round_trip_failures = 0;
    std::uint64_t lemma_failures = 0;
    std::uint64_t theorem_failures = 0;
    double seconds = 0.0;
    bool ok() const {
        return round_trip_failures == 0 && lemma_failures == 0 && theorem_failures == 0;
    }
};

// Runs the corpus; logs one line per failure and a final summary to `out`.
SelftestResult run_selftest(std::ostream& out);

}  // namespace cdmpm
