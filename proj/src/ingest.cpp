#include "tagnet/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "tagnet/errors.hpp"

namespace tagnet {

namespace {

using nlohmann::json;

// Lowercase one code point: ASCII, Latin-1 supplement, Latin Extended-A.
// Everything else passes through unchanged. Extended-A alternates pairing
// parity mid-block, so the subranges matter (and ĸ, ŉ, ſ have no uppercase).
char32_t lower_codepoint(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp + 32;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;  // À-Þ except ×
    if (cp >= 0x100 && cp <= 0x137) return cp | 1;               // Ā-ķ, even upper
    if (cp >= 0x139 && cp <= 0x148) return (cp % 2 == 1) ? cp + 1 : cp;  // Ĺ-ň, odd upper
    if (cp >= 0x14A && cp <= 0x177) return cp | 1;               // Ŋ-ŵ, even upper
    if (cp == 0x178) return 0xFF;                                // Ÿ -> ÿ
    if (cp >= 0x179 && cp <= 0x17E) return (cp % 2 == 1) ? cp + 1 : cp;  // Ź-ž, odd upper
    return cp;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string utf8_lower(std::string_view in) {
    std::string out;
    out.reserve(in.size());
    std::size_t i = 0;
    while (i < in.size()) {
        const unsigned char c = static_cast<unsigned char>(in[i]);
        char32_t cp;
        std::size_t len;
        if (c < 0x80) {
            cp = c;
            len = 1;
        } else if ((c >> 5) == 0x6) {
            cp = c & 0x1F;
            len = 2;
        } else if ((c >> 4) == 0xE) {
            cp = c & 0x0F;
            len = 3;
        } else if ((c >> 3) == 0x1E) {
            cp = c & 0x07;
            len = 4;
        } else {
            out.push_back(in[i++]);  // stray byte, keep as-is
            continue;
        }
        if (i + len > in.size()) {
            out.append(in.substr(i));
            break;
        }
        bool valid = true;
        for (std::size_t k = 1; k < len; ++k) {
            if ((static_cast<unsigned char>(in[i + k]) >> 6) != 0x2) valid = false;
        }
        if (!valid) {
            out.push_back(in[i++]);
            continue;
        }
        for (std::size_t k = 1; k < len; ++k) {
            cp = (cp << 6) | (static_cast<unsigned char>(in[i + k]) & 0x3F);
        }
        append_utf8(out, lower_codepoint(cp));
        i += len;
    }
    return out;
}

bool is_ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

RawPost post_from_json(const json& obj, std::size_t line_no) {
    auto require_string = [&](const char* field) -> std::string {
        if (!obj.contains(field)) {
            throw input_error("line " + std::to_string(line_no) + ": missing field \"" +
                              field + "\"");
        }
        if (!obj.at(field).is_string()) {
            throw input_error("line " + std::to_string(line_no) + ": field \"" + field +
                              "\" must be a string");
        }
        return obj.at(field).get<std::string>();
    };
    RawPost post;
    post.post_id = require_string("post_id");
    post.user_id = require_string("user_id");
    post.query = require_string("query");
    if (post.post_id.empty()) {
        throw input_error("line " + std::to_string(line_no) + ": post_id is empty");
    }
    if (!obj.contains("hashtags")) {
        throw input_error("line " + std::to_string(line_no) + ": missing field \"hashtags\"");
    }
    const json& tags = obj.at("hashtags");
    if (!tags.is_array()) {
        throw input_error("line " + std::to_string(line_no) +
                          ": field \"hashtags\" must be an array of strings");
    }
    for (const json& t : tags) {
        if (!t.is_string()) {
            throw input_error("line " + std::to_string(line_no) +
                              ": field \"hashtags\" must be an array of strings");
        }
        post.hashtags.push_back(t.get<std::string>());
    }
    if (obj.contains("timestamp") && !obj.at("timestamp").is_null()) {
        if (!obj.at("timestamp").is_string()) {
            throw input_error("line " + std::to_string(line_no) +
                              ": field \"timestamp\" must be a string");
        }
        post.timestamp = obj.at("timestamp").get<std::string>();
    }
    return post;
}

// Follow alias chains through both maps until the term is a key of neither.
// `trace` reports the cycle when resolution fails to terminate.
std::string resolve_term(const std::string& term,
                         const std::map<std::string, std::string>& synonyms,
                         const std::map<std::string, std::string>& translations,
                         std::uint64_t* synonym_steps = nullptr,
                         std::uint64_t* translation_steps = nullptr) {
    std::string current = term;
    std::unordered_set<std::string> visited;
    std::vector<std::string> chain;
    auto step_to = [&](const std::string& next) {
        if (!visited.insert(current).second) {
            std::string description;
            for (const std::string& t : chain) description += t + " -> ";
            throw input_error("cyclic alias chain: " + description + current);
        }
        chain.push_back(current);
        current = next;
    };
    for (;;) {
        if (auto it = synonyms.find(current); it != synonyms.end()) {
            step_to(it->second);
            if (synonym_steps) ++*synonym_steps;
            continue;
        }
        if (auto it = translations.find(current); it != translations.end()) {
            step_to(it->second);
            if (translation_steps) ++*translation_steps;
            continue;
        }
        return current;
    }
}

std::map<std::string, std::string> normalized_map(const json& obj, const char* key) {
    std::map<std::string, std::string> out;
    if (!obj.contains(key)) return out;
    if (!obj.at(key).is_object()) {
        throw input_error(std::string("rules: \"") + key + "\" must be an object");
    }
    for (const auto& [alias, canonical] : obj.at(key).items()) {
        if (!canonical.is_string()) {
            throw input_error(std::string("rules: \"") + key + "\" values must be strings");
        }
        const std::string a = normalize_hashtag(alias);
        const std::string c = normalize_hashtag(canonical.get<std::string>());
        if (a.empty() || c.empty()) {
            throw input_error(std::string("rules: empty term in \"") + key + "\"");
        }
        if (a != c) out[a] = c;  // identity entries are no-ops
    }
    return out;
}

}  // namespace

std::string normalize_hashtag(std::string_view tag) {
    std::size_t begin = 0, end = tag.size();
    while (begin < end && is_ascii_space(tag[begin])) ++begin;
    while (end > begin && is_ascii_space(tag[end - 1])) --end;
    std::string_view trimmed = tag.substr(begin, end - begin);
    if (!trimmed.empty() && trimmed.front() == '#') trimmed.remove_prefix(1);
    if (trimmed.empty()) return {};
    return utf8_lower(trimmed);
}

void CleaningRules::validate() const {
    for (const auto& [alias, _] : synonyms) {
        resolve_term(alias, synonyms, translations);
    }
    for (const auto& [term, _] : translations) {
        resolve_term(term, synonyms, translations);
    }
}

CleaningRules CleaningRules::from_json_text(const std::string& text) {
    json obj;
    try {
        obj = json::parse(text);
    } catch (const json::parse_error& e) {
        throw input_error(std::string("rules: invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw input_error("rules: document must be a JSON object");

    CleaningRules rules;
    auto read_set = [&](const char* key, std::set<std::string>& out, bool normalize) {
        if (!obj.contains(key)) return;
        if (!obj.at(key).is_array()) {
            throw input_error(std::string("rules: \"") + key + "\" must be an array");
        }
        for (const json& item : obj.at(key)) {
            if (!item.is_string()) {
                throw input_error(std::string("rules: \"") + key + "\" entries must be strings");
            }
            std::string value = item.get<std::string>();
            if (normalize) value = normalize_hashtag(value);
            if (!value.empty()) out.insert(std::move(value));
        }
    };
    read_set("exclude_hashtags", rules.exclude_hashtags, true);
    read_set("exclude_users", rules.exclude_users, false);
    rules.synonyms = normalized_map(obj, "synonyms");
    rules.translations = normalized_map(obj, "translations");
    if (obj.contains("drop_query_hashtags")) {
        if (!obj.at("drop_query_hashtags").is_boolean()) {
            throw input_error("rules: \"drop_query_hashtags\" must be a boolean");
        }
        rules.drop_query_hashtags = obj.at("drop_query_hashtags").get<bool>();
    }
    rules.validate();
    return rules;
}

CleaningRules CleaningRules::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open rules file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return from_json_text(buffer.str());
    } catch (const input_error& e) {
        throw input_error(path + ": " + e.what());
    }
}

std::string CleaningRules::digest() const {
    // FNV-1a over a canonical rendering; good enough to tell rule sets apart.
    auto mix = [](std::uint64_t h, std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
        h ^= 0x1f;
        h *= 1099511628211ull;
        return h;
    };
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& t : exclude_hashtags) h = mix(h, t);
    h = mix(h, "|");
    for (const auto& u : exclude_users) h = mix(h, u);
    h = mix(h, "|");
    for (const auto& [a, c] : synonyms) h = mix(mix(h, a), c);
    h = mix(h, "|");
    for (const auto& [a, c] : translations) h = mix(mix(h, a), c);
    h = mix(h, drop_query_hashtags ? "q1" : "q0");
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<RawPost> parse_posts(std::istream& in) {
    std::vector<RawPost> posts;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const bool blank = std::all_of(line.begin(), line.end(),
                                       [](char c) { return is_ascii_space(c); });
        if (blank) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw input_error("line " + std::to_string(line_no) + ": malformed record: " +
                              e.what());
        }
        if (!obj.is_object()) {
            throw input_error("line " + std::to_string(line_no) + ": record must be an object");
        }
        posts.push_back(post_from_json(obj, line_no));
    }
    return posts;
}

std::vector<RawPost> parse_posts_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open posts file: " + path);
    try {
        return parse_posts(in);
    } catch (const input_error& e) {
        throw input_error(path + ": " + e.what());
    }
}

std::vector<RawPost> load_posts(const std::vector<std::string>& paths) {
    std::vector<RawPost> all;
    std::unordered_set<std::string> seen_ids;
    for (const std::string& path : paths) {
        for (RawPost& post : parse_posts_file(path)) {
            if (seen_ids.insert(post.post_id).second) {
                all.push_back(std::move(post));
            }
        }
    }
    return all;
}

Corpus clean(std::string area_name, const std::vector<RawPost>& posts,
             const CleaningRules& rules, CleaningSummary* summary) {
    rules.validate();
    CleaningSummary local;
    CleaningSummary& s = summary ? *summary : local;
    s = CleaningSummary{};
    s.input_posts = posts.size();

    // Query hashtags are collected corpus-wide: a multi-query area would
    // otherwise keep the sibling query tags as artificial hubs.
    std::set<std::string> query_tags;
    if (rules.drop_query_hashtags) {
        for (const RawPost& post : posts) {
            std::string q = normalize_hashtag(post.query);
            if (!q.empty()) {
                query_tags.insert(resolve_term(q, rules.synonyms, rules.translations));
            }
        }
    }

    Corpus corpus;
    corpus.area_name = std::move(area_name);
    corpus.rules_digest = rules.digest();

    for (const RawPost& post : posts) {
        if (rules.exclude_users.contains(post.user_id)) {
            ++s.dropped_user;
            ++s.exclude_user_hits[post.user_id];
            continue;
        }

        // Hit counters stay local until the post survives, so the summary
        // reflects retained posts only.
        CleaningSummary local_hits;
        std::set<std::string> tags;
        bool excluded = false;
        std::string excluded_by;
        for (const std::string& raw : post.hashtags) {
            std::string tag = normalize_hashtag(raw);
            if (tag.empty()) {
                ++local_hits.empty_tags_dropped;
                continue;
            }
            if (rules.exclude_hashtags.contains(tag)) {
                excluded = true;
                excluded_by = tag;
                break;
            }
            std::uint64_t syn = 0, tr = 0;
            std::string resolved = resolve_term(tag, rules.synonyms, rules.translations,
                                                &syn, &tr);
            // An alias may resolve into an excluded hashtag; the post-level
            // drop applies to that form as well.
            if (rules.exclude_hashtags.contains(resolved)) {
                excluded = true;
                excluded_by = resolved;
                break;
            }
            if (syn > 0) local_hits.synonym_hits[tag] += syn;
            if (tr > 0) local_hits.translation_hits[tag] += tr;
            if (rules.drop_query_hashtags && query_tags.contains(resolved)) {
                ++local_hits.query_tags_removed;
                continue;
            }
            tags.insert(std::move(resolved));
        }
        if (excluded) {
            ++s.dropped_hashtag;
            ++s.exclude_hashtag_hits[excluded_by];
            continue;
        }

        s.empty_tags_dropped += local_hits.empty_tags_dropped;
        s.query_tags_removed += local_hits.query_tags_removed;
        for (const auto& [k, v] : local_hits.synonym_hits) s.synonym_hits[k] += v;
        for (const auto& [k, v] : local_hits.translation_hits) s.translation_hits[k] += v;

        CleanPost cleaned;
        cleaned.post_id = post.post_id;
        cleaned.user_id = post.user_id;
        cleaned.query = post.query;
        cleaned.tags.assign(tags.begin(), tags.end());
        corpus.posts.push_back(std::move(cleaned));
        ++s.retained_posts;
    }
    return corpus;
}

std::map<std::string, std::uint64_t> hashtag_frequencies(const Corpus& corpus) {
    std::map<std::string, std::uint64_t> counts;
    for (const CleanPost& post : corpus.posts) {
        for (const std::string& tag : post.tags) ++counts[tag];
    }
    return counts;
}

std::string CleaningSummary::to_json_text() const {
    json obj;
    obj["input_posts"] = input_posts;
    obj["dropped_user"] = dropped_user;
    obj["dropped_hashtag"] = dropped_hashtag;
    obj["retained_posts"] = retained_posts;
    obj["query_tags_removed"] = query_tags_removed;
    obj["empty_tags_dropped"] = empty_tags_dropped;
    obj["exclude_hashtag_hits"] = exclude_hashtag_hits;
    obj["exclude_user_hits"] = exclude_user_hits;
    obj["synonym_hits"] = synonym_hits;
    obj["translation_hits"] = translation_hits;
    return obj.dump(2) + "\n";
}

void write_corpus_jsonl(std::ostream& out, const Corpus& corpus) {
    for (const CleanPost& post : corpus.posts) {
        json obj;
        obj["post_id"] = post.post_id;
        obj["user_id"] = post.user_id;
        obj["query"] = post.query;
        obj["hashtags"] = post.tags;
        out << obj.dump() << "\n";
    }
}

Corpus read_corpus_jsonl(std::istream& in, std::string area_name) {
    Corpus corpus;
    corpus.area_name = std::move(area_name);
    for (const RawPost& post : parse_posts(in)) {
        CleanPost cleaned;
        cleaned.post_id = post.post_id;
        cleaned.user_id = post.user_id;
        cleaned.query = post.query;
        std::set<std::string> tags(post.hashtags.begin(), post.hashtags.end());
        cleaned.tags.assign(tags.begin(), tags.end());
        corpus.posts.push_back(std::move(cleaned));
    }
    return corpus;
}

}  // namespace tagnet
