#include "sdverify/synthetic.hpp"

#include <cstdio>
#include <limits>
#include <random>
#include <set>

#include "sdverify/errors.hpp"
#include "sdverify/tokenizer.hpp"

namespace sdverify {
namespace {

// Topic-neutral forum chatter used around inserted markers.
const std::vector<std::string> kFiller = {
    "сьогодні", "погода",  "місто",    "новини",  "тема",    "форум",   "питання", "відповідь",
    "дякую",    "думка",   "вечір",    "ранок",   "фото",    "посилання", "автобус", "магазин",
    "ціна",     "дорога",  "сонце",    "дощ",     "книга",   "фільм",   "музика",  "кава",
    "парк",     "вулиця",  "концерт",  "подія",   "зустріч", "правила", "модератор", "коментар",
    "добре",    "цікаво",  "можливо",  "напевно", "зараз",   "завтра",  "вчора",   "також",
};

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
        for (;;) {
            const std::uint64_t x = engine_();
            if (x < limit) return x % n;
        }
    }

    /// Uniform real in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return unit() < p; }

    template <typename T>
    const T& pick(const std::vector<T>& items) {
        return items[below(items.size())];
    }

private:
    std::mt19937_64 engine_;
};

struct AgeRange {
    int lo;
    int hi;
};

AgeRange age_range(const std::string& bucket) {
    if (bucket == "under18") return {12, 17};
    if (bucket == "18-24") return {18, 24};
    if (bucket == "25-34") return {25, 34};
    if (bucket == "35-49") return {35, 49};
    if (bucket == "50plus") return {50, 75};
    throw ValidationError("cannot synthesize a birth year for age group " + bucket);
}

void declare(DeclaredProfile& profile, const std::string& characteristic, const std::string& value,
             int reference_year, Rng& rng) {
    if (characteristic == characteristics::gender) {
        if (value == "male") {
            profile.gender = Gender::male;
        } else if (value == "female") {
            profile.gender = Gender::female;
        } else {
            throw ValidationError("gender value must be male or female, got " + value);
        }
    } else if (characteristic == characteristics::age_group) {
        const auto range = age_range(value);
        const int age = range.lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(range.hi - range.lo + 1)));
        profile.birth_year = reference_year - age;
    } else if (characteristic == characteristics::education) {
        if (value == "secondary") {
            profile.education = Education::secondary;
        } else if (value == "higher") {
            profile.education = Education::higher;
        } else {
            throw ValidationError("education value must be secondary or higher, got " + value);
        }
    } else if (characteristic == characteristics::residence) {
        profile.residence = value;
    } else if (characteristic == characteristics::occupation) {
        profile.occupation = value;
    } else {
        profile.extra[characteristic] = value;
    }
}

std::string zero_pad(std::size_t n, int width) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%0*zu", width, n);
    return buf;
}

}  // namespace

void SyntheticSpec::validate() const {
    auto rate = [](double r, const char* name) {
        if (!(r >= 0.0 && r <= 1.0)) throw ValidationError(std::string(name) + " must lie in [0, 1]");
    };
    rate(signal_rate, "signal_rate");
    rate(noise_rate, "noise_rate");
    rate(deceiver_fraction, "deceiver_fraction");
    if (posts_min > posts_max) throw ValidationError("posts_per_member range is empty");
    if (community_id.empty()) throw ValidationError("community_id must not be empty");
    if (characteristics.empty()) throw ValidationError("synthetic spec needs at least one characteristic");
    std::set<std::string> seen(characteristics.begin(), characteristics.end());
    if (seen.size() != characteristics.size()) throw ValidationError("duplicate characteristic in synthetic spec");
}

SyntheticCommunity generate_synthetic(const SyntheticSpec& spec, const MarkerLexicon& lexicon, int reference_year) {
    spec.validate();

    struct Target {
        const Characteristic* characteristic;
        std::vector<std::vector<std::string>> texts;  // per domain value: insertable marker texts
    };
    std::vector<Target> targets;
    std::set<std::string> marker_tokens;
    for (const auto& m : lexicon.markers) {
        if (m.pattern_kind == PatternKind::regex) continue;
        for (auto& t : tokenize(m.pattern)) marker_tokens.insert(std::move(t));
    }
    for (const auto& id : spec.characteristics) {
        const auto* c = lexicon.find_characteristic(id);
        if (c == nullptr) throw UnknownCharacteristic(id);
        Target target{c, std::vector<std::vector<std::string>>(c->values.size())};
        for (const auto& m : lexicon.markers) {
            if (m.characteristic != id || m.pattern_kind == PatternKind::regex) continue;
            target.texts[*c->index_of(m.value)].push_back(join_tokens(tokenize(m.pattern)));
        }
        for (std::size_t v = 0; v < c->values.size(); ++v) {
            if (target.texts[v].empty()) throw CoverageError(id, c->values[v]);
        }
        targets.push_back(std::move(target));
    }
    std::vector<std::string> filler;
    for (const auto& w : kFiller) {
        if (!marker_tokens.count(w)) filler.push_back(w);
    }

    Rng rng(spec.seed);
    SyntheticCommunity out;
    const int width = std::max<int>(4, static_cast<int>(std::to_string(spec.n_members).size()));
    std::size_t post_seq = 0;
    constexpr std::int64_t kEpoch = 1420070400;  // 2015-01-01T00:00:00Z

    for (std::size_t i = 0; i < spec.n_members; ++i) {
        const std::string member_id = "m" + zero_pad(i + 1, width);
        DeclaredProfile profile;
        profile.community_id = spec.community_id;
        profile.member_id = member_id;

        const bool deceiver = rng.chance(spec.deceiver_fraction);
        std::vector<std::size_t> truth_index;
        for (const auto& t : targets) {
            const auto& values = t.characteristic->values;
            const std::size_t truth = rng.below(values.size());
            truth_index.push_back(truth);
            out.truth.values[member_id][t.characteristic->id] = values[truth];
            std::size_t declared = truth;
            if (deceiver) {
                declared = rng.below(values.size() - 1);
                if (declared >= truth) ++declared;
            }
            declare(profile, t.characteristic->id, values[declared], reference_year, rng);
        }
        out.truth.deceiver[member_id] = deceiver;
        out.corpus.add_profile(profile);

        const std::size_t n_posts = spec.posts_min + rng.below(spec.posts_max - spec.posts_min + 1);
        for (std::size_t p = 0; p < n_posts; ++p) {
            std::vector<std::string> words;
            const std::size_t n_filler = filler.empty() ? 0 : 3 + rng.below(8);
            for (std::size_t w = 0; w < n_filler; ++w) words.push_back(rng.pick(filler));
            auto insert = [&](const std::string& text) {
                const auto pos = static_cast<std::ptrdiff_t>(rng.below(words.size() + 1));
                words.insert(words.begin() + pos, text);
            };
            for (std::size_t k = 0; k < targets.size(); ++k) {
                const auto& t = targets[k];
                if (rng.chance(spec.signal_rate)) insert(rng.pick(t.texts[truth_index[k]]));
                if (rng.chance(spec.noise_rate)) {
                    std::size_t wrong = rng.below(t.texts.size() - 1);
                    if (wrong >= truth_index[k]) ++wrong;
                    insert(rng.pick(t.texts[wrong]));
                }
            }
            std::string text;
            for (const auto& w : words) text += (text.empty() ? "" : " ") + w;
            if (!text.empty()) text += '.';

            Post post;
            post.community_id = spec.community_id;
            post.member_id = member_id;
            post.post_id = "p" + zero_pad(++post_seq, 7);
            post.timestamp = kEpoch + static_cast<std::int64_t>(i) * 86400 + static_cast<std::int64_t>(p) * 600 +
                             static_cast<std::int64_t>(rng.below(600));
            post.text = std::move(text);
            out.corpus.add_post(std::move(post));
        }
    }
    out.corpus.finalize();
    return out;
}

json to_json(const SyntheticSpec& s) {
    return {{"label", s.label},
            {"community_id", s.community_id},
            {"n_members", s.n_members},
            {"posts_per_member", {s.posts_min, s.posts_max}},
            {"signal_rate", s.signal_rate},
            {"noise_rate", s.noise_rate},
            {"deceiver_fraction", s.deceiver_fraction},
            {"characteristics", s.characteristics},
            {"seed", s.seed}};
}

SyntheticSpec synthetic_spec_from_json(const json& doc) {
    if (!doc.is_object()) throw ValidationError("synthetic spec must be an object");
    SyntheticSpec s;
    try {
        s.label = doc.value("label", s.label);
        s.community_id = doc.value("community_id", s.label);
        s.n_members = doc.value("n_members", s.n_members);
        if (auto it = doc.find("posts_per_member"); it != doc.end()) {
            if (!it->is_array() || it->size() != 2) throw ValidationError("posts_per_member must be [min, max]");
            s.posts_min = (*it)[0].get<std::size_t>();
            s.posts_max = (*it)[1].get<std::size_t>();
        }
        s.signal_rate = doc.value("signal_rate", s.signal_rate);
        s.noise_rate = doc.value("noise_rate", s.noise_rate);
        s.deceiver_fraction = doc.value("deceiver_fraction", s.deceiver_fraction);
        if (auto it = doc.find("characteristics"); it != doc.end()) {
            s.characteristics = it->get<std::vector<std::string>>();
        }
        s.seed = doc.value("seed", s.seed);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("bad synthetic spec: ") + e.what());
    }
    s.validate();
    return s;
}

}  // namespace sdverify
