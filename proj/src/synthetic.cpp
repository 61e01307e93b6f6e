#include "tagnet/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tagnet/errors.hpp"

namespace tagnet {

namespace {

using nlohmann::json;

// Zipf sampler over ranks 0..k-1 via an inverse-CDF table.
class ZipfTable {
public:
    ZipfTable(std::size_t k, double exponent) : cdf_(k) {
        double total = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            total += std::pow(static_cast<double>(i + 1), -exponent);
            cdf_[i] = total;
        }
        for (double& c : cdf_) c /= total;
    }

    std::size_t sample(DeterministicRng& rng) const {
        const double u = rng.unit();
        return std::lower_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin();
    }

private:
    std::vector<double> cdf_;
};

void validate_plan(const SyntheticPlan& plan) {
    if (plan.themes.empty()) throw input_error("synthetic plan: no themes");
    if (plan.posts == 0) throw input_error("synthetic plan: zero posts");
    if (plan.min_tags < 1 || plan.max_tags < plan.min_tags) {
        throw input_error("synthetic plan: bad tags-per-post range");
    }
    if (plan.area_name.empty()) throw input_error("synthetic plan: empty area name");
    std::set<std::string> seen;
    auto check = [&](const std::string& term, const std::string& where) {
        if (term.empty()) throw input_error("synthetic plan: empty term in " + where);
        if (!seen.insert(term).second) {
            throw input_error("synthetic plan: term \"" + term + "\" appears in " + where +
                              " and in another pool");
        }
    };
    for (const SyntheticTheme& theme : plan.themes) {
        if (theme.terms.empty()) {
            throw input_error("synthetic plan: theme \"" + theme.name + "\" has no terms");
        }
        for (const std::string& t : theme.terms) check(t, "theme \"" + theme.name + "\"");
    }
    for (const std::string& t : plan.global_terms) check(t, "global terms");
}

// Cosmetic noise on the emitted tag: an optional '#' and sometimes an
// uppercase first letter, so normalization actually has work to do.
std::string decorate(const std::string& tag, DeterministicRng& rng) {
    std::string out = tag;
    if (rng.unit() < 0.1 && !out.empty() && out[0] >= 'a' && out[0] <= 'z') {
        out[0] = static_cast<char>(out[0] - 32);
    }
    if (rng.unit() < 0.3) out.insert(out.begin(), '#');
    return out;
}

}  // namespace

SyntheticCorpus generate_synthetic(const SyntheticPlan& plan) {
    validate_plan(plan);
    DeterministicRng rng(plan.seed ^ 0x5bf0'3635'dcf2'6e2bull);

    const std::string query = plan.query.empty() ? plan.area_name : plan.query;

    std::vector<ZipfTable> theme_tables;
    theme_tables.reserve(plan.themes.size());
    for (const SyntheticTheme& theme : plan.themes) {
        theme_tables.emplace_back(theme.terms.size(), plan.zipf_exponent);
    }

    SyntheticCorpus corpus;
    for (const SyntheticTheme& theme : plan.themes) {
        for (const std::string& term : theme.terms) corpus.truth.theme_of[term] = theme.name;
    }

    std::set<std::string> tags;  // the post under construction
    for (std::uint32_t i = 0; i < plan.posts; ++i) {
        tags.clear();
        const std::size_t theme_idx = rng.bounded(plan.themes.size());
        const SyntheticTheme& theme = plan.themes[theme_idx];

        std::uint32_t want = plan.min_tags +
                             static_cast<std::uint32_t>(
                                 rng.bounded(plan.max_tags - plan.min_tags + 1));
        want = std::min<std::uint32_t>(want, static_cast<std::uint32_t>(theme.terms.size()));
        while (tags.size() < want) {
            tags.insert(theme.terms[theme_tables[theme_idx].sample(rng)]);
        }

        if (plan.themes.size() > 1 && rng.unit() < plan.cross_theme_rate) {
            std::size_t other = rng.bounded(plan.themes.size() - 1);
            if (other >= theme_idx) ++other;
            tags.insert(plan.themes[other].terms[theme_tables[other].sample(rng)]);
        }

        for (std::size_t r = 0; r < plan.global_terms.size(); ++r) {
            const double p =
                plan.global_term_rate * std::pow(static_cast<double>(r + 1), -0.8);
            if (rng.unit() < p) tags.insert(plan.global_terms[r]);
        }

        if (plan.tail_rate > 0.0 && rng.unit() < plan.tail_rate) {
            char buf[24];
            std::snprintf(buf, sizeof(buf), "x%06llu",
                          static_cast<unsigned long long>(rng.bounded(plan.tail_vocabulary)));
            tags.insert(buf);
        }

        // Ledger updates use the exact post set (query tag excluded; the
        // default pipeline drops it again anyway).
        for (auto it = tags.begin(); it != tags.end(); ++it) {
            ++corpus.truth.frequencies[*it];
            if (plan.record_pairs) {
                for (auto jt = std::next(it); jt != tags.end(); ++jt) {
                    ++corpus.truth.pair_counts[{*it, *jt}];
                }
            }
        }

        RawPost post;
        char idbuf[48];
        std::snprintf(idbuf, sizeof(idbuf), "%s-%06u", plan.area_name.c_str(), i);
        post.post_id = idbuf;
        post.user_id = "u" + std::to_string(rng.bounded(plan.users));
        post.query = query;
        post.hashtags.reserve(tags.size() + 1);
        for (const std::string& t : tags) post.hashtags.push_back(decorate(t, rng));
        post.hashtags.push_back(decorate(query, rng));
        // Light shuffle so tag order carries no structure.
        for (std::size_t a = post.hashtags.size(); a > 1; --a) {
            std::swap(post.hashtags[a - 1], post.hashtags[rng.bounded(a)]);
        }
        corpus.posts.push_back(std::move(post));
    }
    return corpus;
}

void write_posts_jsonl(std::ostream& out, const std::vector<RawPost>& posts) {
    for (const RawPost& post : posts) {
        json obj;
        obj["post_id"] = post.post_id;
        obj["user_id"] = post.user_id;
        obj["query"] = post.query;
        obj["hashtags"] = post.hashtags;
        if (post.timestamp) obj["timestamp"] = *post.timestamp;
        out << obj.dump() << "\n";
    }
}

void write_ledger_json(std::ostream& out, const GroundTruth& truth) {
    json obj;
    obj["frequencies"] = truth.frequencies;
    obj["theme_of"] = truth.theme_of;
    json pairs = json::array();
    for (const auto& [pair, count] : truth.pair_counts) {
        pairs.push_back(json::array({pair.first, pair.second, count}));
    }
    obj["pair_counts"] = std::move(pairs);
    out << obj.dump(2) << "\n";
}

SyntheticPlan SyntheticPlan::from_json_text(const std::string& text) {
    json obj;
    try {
        obj = json::parse(text);
    } catch (const json::parse_error& e) {
        throw input_error(std::string("plan: invalid JSON: ") + e.what());
    }
    SyntheticPlan plan;
    auto get = [&](const char* key, auto& field) {
        if (obj.contains(key)) obj.at(key).get_to(field);
    };
    get("area_name", plan.area_name);
    get("query", plan.query);
    get("posts", plan.posts);
    get("zipf_exponent", plan.zipf_exponent);
    get("min_tags", plan.min_tags);
    get("max_tags", plan.max_tags);
    get("global_term_rate", plan.global_term_rate);
    get("cross_theme_rate", plan.cross_theme_rate);
    get("tail_rate", plan.tail_rate);
    get("tail_vocabulary", plan.tail_vocabulary);
    get("users", plan.users);
    get("record_pairs", plan.record_pairs);
    get("seed", plan.seed);
    get("global_terms", plan.global_terms);
    if (obj.contains("themes")) {
        for (const json& t : obj.at("themes")) {
            SyntheticTheme theme;
            theme.name = t.value("name", "");
            theme.ces_class = t.value("ces_class", "");
            if (t.contains("terms")) t.at("terms").get_to(theme.terms);
            plan.themes.push_back(std::move(theme));
        }
    }
    return plan;
}

SyntheticPlan SyntheticPlan::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open plan file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return from_json_text(buffer.str());
    } catch (const input_error& e) {
        throw input_error(path + ": " + e.what());
    }
}

namespace {

struct ThemeSpec {
    const char* name;
    const char* ces_class;
    std::vector<const char*> terms;
};

const std::vector<ThemeSpec>& theme_catalogue() {
    static const std::vector<ThemeSpec> catalogue = {
        {"wildlife", "nature and wildlife appreciation",
         {"wildlife", "birds", "penguin", "whale", "sealion", "puffin", "endemic", "fauna",
          "wildlifephotography", "birdwatching", "animals", "wildlifelovers", "birdsofinstagram",
          "seabirds", "dolphins", "seals", "turtles", "nest", "colony", "migration",
          "wildlifeplanet", "animallovers", "birdlife", "naturereserve"}},
        {"underwater", "recreational (underwater)",
         {"diving", "scuba", "snorkeling", "underwater", "reef", "coral", "fish", "sealife",
          "underwaterphotography", "marinelife", "divinglife", "freediving", "scubadiving",
          "coralreef", "divespot", "wreckdive", "nightdive", "divebuddy", "fishesofinstagram",
          "oceanlife", "underthesea", "aquaticlife", "seafan", "shoal"}},
        {"beach", "recreational (beach)",
         {"beachlife", "summer", "sand", "swim", "surf", "sunbathing", "coast", "seaside",
          "shore", "swimming", "beachday", "saltwater", "beachvibes", "suncream", "towel",
          "beachwalk", "lowtide", "rockpool", "beachgames", "picnic", "seashells", "barefoot",
          "summerdays", "tanning"}},
        {"hiking", "recreational (hiking)",
         {"hiking", "trekking", "mountains", "forest", "trail", "camping", "walk", "outdoors",
          "backpacking", "viewpoint", "hikingadventures", "wilderness", "summit", "ridge",
          "trailrunning", "campfire", "tent", "daypack", "switchback", "scramble",
          "mountainview", "forestwalk", "hikelife", "getoutside"}},
        {"heritage", "cultural heritage",
         {"heritage", "statue", "history", "culture", "archaeology", "museum", "ruins",
          "tradition", "monument", "ancestors", "sacred", "oldtown", "carvings", "petroglyphs",
          "ceremony", "legends", "ancient", "unesco", "artifacts", "excavation", "fortress",
          "relics", "folklore", "mythology"}},
        {"wellbeing", "wellbeing",
         {"wellness", "peace", "meditation", "freedom", "mindfulness", "gratitude", "serenity",
          "calm", "bliss", "joy", "breathe", "soulfood", "innerpeace", "rebalance", "unplug",
          "slowliving", "quietmoments", "stillness", "recharge", "digitaldetox", "contentment",
          "goodvibes", "harmony", "zen"}},
        {"conservation", "wildlife and conservation",
         {"conservation", "sustainability", "climatechange", "ecology", "protect", "science",
          "biodiversity", "savetheocean", "plasticfree", "ecosystem", "research", "rewilding",
          "fieldwork", "tagging", "monitoring", "habitat", "restoration", "endangered",
          "marineprotectedarea", "citizenscience", "cleanup", "zerowaste", "ecowarrior",
          "futuregenerations"}},
        {"fishing", "recreational (fishing)",
         {"fishing", "flyfishing", "catchandrelease", "angler", "fishinglife", "sportfishing",
          "fishingtrip", "bigcatch", "deepsea", "tightlines", "reellife", "fishon", "baitbox",
          "castaway", "troutseason", "tuna", "marlin", "fishingboat", "rodandreel", "lures",
          "firstcatch", "fishingguide", "offshorefishing", "charterboat"}},
    };
    return catalogue;
}

const std::vector<const char*>& place_suffixes() {
    static const std::vector<const char*> suffixes = {"bay", "cove"};
    return suffixes;
}

}  // namespace

std::vector<SyntheticPlan> make_benchmark_plans(std::uint32_t areas,
                                                std::uint32_t posts_per_area,
                                                std::uint64_t seed) {
    if (areas < 1) throw input_error("benchmark plans: need at least one area");
    const auto& catalogue = theme_catalogue();
    DeterministicRng rng(seed * 0x9e3779b97f4a7c15ull + 17);

    std::vector<SyntheticPlan> plans;
    plans.reserve(areas);
    for (std::uint32_t a = 0; a < areas; ++a) {
        SyntheticPlan plan;
        char name[16];
        std::snprintf(name, sizeof(name), "area%02u", a + 1);
        plan.area_name = name;
        plan.posts = posts_per_area;
        plan.zipf_exponent = 2.5;
        plan.min_tags = 2;
        plan.max_tags = 4;
        plan.global_term_rate = 0.45;
        plan.cross_theme_rate = 0.04;
        plan.tail_rate = 0.03;
        plan.users = 800;
        plan.record_pairs = false;
        plan.seed = seed * 1013u + a;
        plan.global_terms = {"travel",  "nature",     "photo",   "photography", "adventure",
                             "wanderlust", "ocean",   "sunset",  "island",      "paradise",
                             "happiness",  "beach",   "explore", "vacation"};

        // 3 to 5 themes per area, rotating through the catalogue.
        const std::uint32_t theme_count = 3 + static_cast<std::uint32_t>(rng.bounded(2));
        for (std::uint32_t t = 0; t < theme_count; ++t) {
            const ThemeSpec& spec = catalogue[(a + t * 3) % catalogue.size()];
            SyntheticTheme theme;
            theme.name = spec.name;
            theme.ces_class = spec.ces_class;
            for (const char* term : spec.terms) theme.terms.emplace_back(term);
            plan.themes.push_back(std::move(theme));
        }
        // Locality tags: every area talks about its own named places.
        SyntheticTheme places;
        places.name = "places";
        places.ces_class = "";
        for (const char* suffix : place_suffixes()) {
            places.terms.push_back(plan.area_name + suffix);
        }
        plan.themes.push_back(std::move(places));
        plans.push_back(std::move(plan));
    }
    return plans;
}

}  // namespace tagnet
