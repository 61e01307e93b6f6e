#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace tagnet {

struct RawPost {
    std::string post_id;
    std::string user_id;
    std::string query;                     // the search hashtag that retrieved the post
    std::optional<std::string> timestamp;  // ISO-8601, provenance only
    std::vector<std::string> hashtags;
};

// Operator-supplied cleaning rules: advert/bot exclusion lists, alias merges
// and translations. Alias chains are resolved to a fixpoint across both maps
// and must be acyclic; validate() (called by the loaders) rejects cycles.
struct CleaningRules {
    std::set<std::string> exclude_hashtags;
    std::set<std::string> exclude_users;
    std::map<std::string, std::string> synonyms;      // alias -> canonical
    std::map<std::string, std::string> translations;  // foreign term -> english
    bool drop_query_hashtags = true;

    void validate() const;
    static CleaningRules from_json_text(const std::string& text);
    static CleaningRules from_json_file(const std::string& path);

    // Stable fingerprint of the rule content, recorded in each corpus.
    std::string digest() const;
};

struct CleanPost {
    std::string post_id;
    std::string user_id;
    std::string query;
    std::vector<std::string> tags;  // normalized, deduplicated, sorted
};

struct CleaningSummary {
    std::uint64_t input_posts = 0;
    std::uint64_t dropped_user = 0;
    std::uint64_t dropped_hashtag = 0;
    std::uint64_t retained_posts = 0;
    std::uint64_t query_tags_removed = 0;
    std::uint64_t empty_tags_dropped = 0;
    std::map<std::string, std::uint64_t> exclude_hashtag_hits;  // rule -> dropped posts
    std::map<std::string, std::uint64_t> exclude_user_hits;
    std::map<std::string, std::uint64_t> synonym_hits;      // alias -> applications
    std::map<std::string, std::uint64_t> translation_hits;

    std::string to_json_text() const;
};

struct Corpus {
    std::string area_name;
    std::vector<CleanPost> posts;
    std::string rules_digest;
};

// Lowercases ASCII and the Latin-1 / Latin Extended-A ranges without
// mangling other UTF-8 sequences, trims surrounding whitespace and strips
// one leading '#'. Returns "" when nothing remains; callers drop such tags.
std::string normalize_hashtag(std::string_view tag);

// Line-delimited JSON posts, one object per line. Fields post_id, user_id,
// hashtags and query are required, timestamp is optional. Errors carry the
// 1-based line number.
std::vector<RawPost> parse_posts(std::istream& in);
std::vector<RawPost> parse_posts_file(const std::string& path);

// Reads several post files and concatenates them, keeping the first post for
// each post_id (multi-query areas retrieve the same post more than once).
std::vector<RawPost> load_posts(const std::vector<std::string>& paths);

// Applies the rules: posts by excluded users or containing an excluded
// hashtag are dropped whole; surviving tags are normalized, resolved through
// synonyms and translations to a fixpoint, deduplicated and (by default)
// stripped of the corpus query hashtags. Posts that end up with fewer than
// two tags are retained; they still count toward frequencies.
Corpus clean(std::string area_name, const std::vector<RawPost>& posts,
             const CleaningRules& rules, CleaningSummary* summary = nullptr);

// Posts containing each hashtag (set semantics per post).
std::map<std::string, std::uint64_t> hashtag_frequencies(const Corpus& corpus);

// Corpus (re)serialization in the same line-delimited schema, so cleaned
// corpora can be fed back through the pipeline.
void write_corpus_jsonl(std::ostream& out, const Corpus& corpus);
Corpus read_corpus_jsonl(std::istream& in, std::string area_name);

}  // namespace tagnet
