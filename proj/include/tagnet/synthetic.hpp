#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "tagnet/ingest.hpp"

namespace tagnet {

// Self-contained RNG (splitmix64) so corpora are byte-identical across
// standard libraries; <random> distributions are not portable.
class DeterministicRng {
public:
    explicit DeterministicRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n) by multiply-shift.
    std::uint64_t bounded(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    // Uniform in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

struct SyntheticTheme {
    std::string name;
    std::vector<std::string> terms;  // normalized, disjoint across themes
    std::string ces_class;           // optional: the class this theme plants
};

// Recipe for one synthetic corpus: themed posts with Zipfian term choice, a
// shared pool of global hub terms, optional cross-theme noise and a long
// tail of one-off tags.
struct SyntheticPlan {
    std::string area_name;
    std::string query;  // query hashtag attached to every post; defaults to area_name
    std::uint32_t posts = 1000;
    double zipf_exponent = 1.2;
    std::uint32_t min_tags = 4;
    std::uint32_t max_tags = 10;
    std::vector<SyntheticTheme> themes;
    std::vector<std::string> global_terms;
    double global_term_rate = 0.0;  // inclusion probability of the top global term
    double cross_theme_rate = 0.0;  // probability a post borrows one foreign term
    double tail_rate = 0.0;         // probability a post carries one rare tail tag
    std::uint32_t tail_vocabulary = 50000;
    std::uint32_t users = 500;
    bool record_pairs = true;       // pair ledger can be disabled for bulk corpora
    std::uint64_t seed = 0;

    static SyntheticPlan from_json_text(const std::string& text);
    static SyntheticPlan from_json_file(const std::string& path);
};

// Everything the generator knows to be true about the corpus it emitted.
struct GroundTruth {
    std::map<std::string, std::uint64_t> frequencies;  // posts containing the term
    std::map<std::string, std::string> theme_of;       // planted term -> theme name
    std::map<std::pair<std::string, std::string>, std::uint64_t> pair_counts;
};

struct SyntheticCorpus {
    std::vector<RawPost> posts;
    GroundTruth truth;
};

SyntheticCorpus generate_synthetic(const SyntheticPlan& plan);

void write_posts_jsonl(std::ostream& out, const std::vector<RawPost>& posts);
void write_ledger_json(std::ostream& out, const GroundTruth& truth);

// A 14-area suite shaped like a marine-tourism hashtag corpus: per-area
// themes drawn from a fixed catalogue, locality tags, shared global hubs and
// a sparse long tail. Used by the scale and coverage tests and by the synth
// CLI subcommand.
std::vector<SyntheticPlan> make_benchmark_plans(std::uint32_t areas = 14,
                                                std::uint32_t posts_per_area = 10000,
                                                std::uint64_t seed = 1);

}  // namespace tagnet
