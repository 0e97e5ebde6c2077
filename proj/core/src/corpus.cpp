#include "sdverify/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "sdverify/canonical_json.hpp"
#include "sdverify/errors.hpp"

namespace sdverify {
namespace {

const std::vector<Post> kNoPosts;

std::string require_string(const json& rec, const char* key, const std::string& src, std::size_t line,
                           bool allow_empty = false) {
    auto it = rec.find(key);
    if (it == rec.end() || !it->is_string()) {
        throw FormatError(src, line, std::string("missing or non-string field \"") + key + "\"");
    }
    auto value = it->get<std::string>();
    if (!allow_empty && value.empty()) {
        throw FormatError(src, line, std::string("empty field \"") + key + "\"");
    }
    return value;
}

std::optional<std::string> optional_string(const json& declared, const char* key, const std::string& src,
                                           std::size_t line) {
    auto it = declared.find(key);
    if (it == declared.end() || it->is_null()) return std::nullopt;
    if (!it->is_string() || it->get<std::string>().empty()) {
        throw FormatError(src, line, std::string("declared.") + key + " must be a non-empty string");
    }
    return it->get<std::string>();
}

template <typename Fn>
void for_each_jsonl_record(const std::filesystem::path& path, Fn&& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    const std::string src = path.string();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            throw FormatError(src, lineno, std::string("invalid JSON: ") + e.what());
        }
        if (!rec.is_object()) throw FormatError(src, lineno, "record is not a JSON object");
        fn(rec, src, lineno);
    }
    if (in.bad()) throw IoError("read failed: " + src);
}

Post parse_post(const json& rec, const std::string& src, std::size_t line) {
    Post post;
    post.community_id = require_string(rec, "community_id", src, line);
    post.post_id = require_string(rec, "post_id", src, line);
    post.member_id = require_string(rec, "member_id", src, line);
    auto ts = rec.find("timestamp");
    if (ts == rec.end() || !ts->is_number_integer()) {
        throw FormatError(src, line, "missing or non-integer field \"timestamp\"");
    }
    if (ts->is_number_unsigned()) {
        auto u = ts->get<std::uint64_t>();
        if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
            throw FormatError(src, line, "timestamp out of range");
        }
        post.timestamp = static_cast<std::int64_t>(u);
    } else {
        post.timestamp = ts->get<std::int64_t>();
    }
    if (post.timestamp < 0) throw FormatError(src, line, "timestamp must be >= 0");
    post.text = require_string(rec, "text", src, line, /*allow_empty=*/true);
    return post;
}

DeclaredProfile parse_profile(const json& rec, const std::string& src, std::size_t line) {
    DeclaredProfile profile;
    profile.community_id = require_string(rec, "community_id", src, line);
    profile.member_id = require_string(rec, "member_id", src, line);
    auto decl_it = rec.find("declared");
    if (decl_it == rec.end() || decl_it->is_null()) return profile;
    if (!decl_it->is_object()) throw FormatError(src, line, "\"declared\" must be an object");
    const json& declared = *decl_it;

    if (auto g = optional_string(declared, "gender", src, line)) {
        if (*g == "male") {
            profile.gender = Gender::male;
        } else if (*g == "female") {
            profile.gender = Gender::female;
        } else {
            throw FormatError(src, line, "declared.gender must be \"male\" or \"female\"");
        }
    }
    if (auto by = declared.find("birth_year"); by != declared.end() && !by->is_null()) {
        if (!by->is_number_integer()) throw FormatError(src, line, "declared.birth_year must be an integer");
        auto year = by->get<std::int64_t>();
        if (year < kMinBirthYear || year > 9999) {
            throw FormatError(src, line, "declared.birth_year out of range");
        }
        profile.birth_year = static_cast<int>(year);
    }
    profile.residence = optional_string(declared, "residence", src, line);
    if (auto e = optional_string(declared, "education", src, line)) {
        if (*e == "secondary") {
            profile.education = Education::secondary;
        } else if (*e == "higher") {
            profile.education = Education::higher;
        } else {
            throw FormatError(src, line, "declared.education must be \"secondary\" or \"higher\"");
        }
    }
    profile.occupation = optional_string(declared, "occupation", src, line);

    for (auto it = declared.begin(); it != declared.end(); ++it) {
        const auto& key = it.key();
        if (key == "gender" || key == "birth_year" || key == "residence" || key == "education" ||
            key == "occupation" || it->is_null()) {
            continue;
        }
        if (!it->is_string()) throw FormatError(src, line, "declared." + key + " must be a string");
        profile.extra.emplace(key, it->get<std::string>());
    }
    return profile;
}

bool post_less(const Post& a, const Post& b) {
    return std::tie(a.timestamp, a.post_id) < std::tie(b.timestamp, b.post_id);
}

}  // namespace

std::string to_string(Gender g) { return g == Gender::male ? "male" : "female"; }
std::string to_string(Education e) { return e == Education::secondary ? "secondary" : "higher"; }

void Corpus::add_post(Post post) {
    if (!post_ids_.emplace(post.community_id, post.post_id).second) {
        throw DuplicateId(post.community_id + "/" + post.post_id);
    }
    auto [it, inserted] = members_.try_emplace(MemberKey{post.community_id, post.member_id});
    if (inserted) {
        it->second.profile.community_id = post.community_id;
        it->second.profile.member_id = post.member_id;
    }
    it->second.posts.push_back(std::move(post));
    ++post_count_;
}

void Corpus::add_profile(DeclaredProfile profile) {
    auto [it, inserted] = members_.try_emplace(MemberKey{profile.community_id, profile.member_id});
    if (!inserted && it->second.explicit_profile) {
        throw DuplicateId(profile.community_id + "/" + profile.member_id);
    }
    it->second.profile = std::move(profile);
    it->second.explicit_profile = true;
}

void Corpus::finalize() {
    for (auto& [key, entry] : members_) {
        std::sort(entry.posts.begin(), entry.posts.end(), post_less);
    }
}

std::vector<std::string> Corpus::communities() const {
    std::vector<std::string> out;
    for (const auto& [key, entry] : members_) {
        if (out.empty() || out.back() != key.first) out.push_back(key.first);
    }
    return out;
}

bool Corpus::has_community(const std::string& community_id) const {
    auto it = members_.lower_bound(MemberKey{community_id, std::string{}});
    return it != members_.end() && it->first.first == community_id;
}

bool Corpus::has_member(const std::string& community_id, const std::string& member_id) const {
    return members_.count(MemberKey{community_id, member_id}) > 0;
}

const DeclaredProfile& Corpus::profile(const std::string& community_id, const std::string& member_id) const {
    auto it = members_.find(MemberKey{community_id, member_id});
    if (it == members_.end()) throw UnknownMember(community_id, member_id);
    return it->second.profile;
}

const std::vector<Post>& Corpus::posts_of(const std::string& community_id, const std::string& member_id) const {
    auto it = members_.find(MemberKey{community_id, member_id});
    if (it == members_.end()) return kNoPosts;
    return it->second.posts;
}

std::vector<MemberSummary> Corpus::members_of(const std::string& community_id) const {
    std::vector<MemberSummary> out;
    for (auto it = members_.lower_bound(MemberKey{community_id, std::string{}});
         it != members_.end() && it->first.first == community_id; ++it) {
        out.push_back(MemberSummary{it->first.second, it->second.posts.size(), it->second.profile});
    }
    return out;
}

std::string post_to_jsonl(const Post& post) {
    json rec = {{"community_id", post.community_id},
                {"post_id", post.post_id},
                {"member_id", post.member_id},
                {"timestamp", post.timestamp},
                {"text", post.text}};
    return rec.dump(-1, ' ', false, json::error_handler_t::replace);
}

std::string profile_to_jsonl(const DeclaredProfile& profile) {
    json declared = json::object();
    for (const auto& [key, value] : profile.extra) declared[key] = value;
    if (profile.gender) declared["gender"] = to_string(*profile.gender);
    if (profile.birth_year) declared["birth_year"] = *profile.birth_year;
    if (profile.residence) declared["residence"] = *profile.residence;
    if (profile.education) declared["education"] = to_string(*profile.education);
    if (profile.occupation) declared["occupation"] = *profile.occupation;
    json rec = {{"community_id", profile.community_id}, {"member_id", profile.member_id}, {"declared", declared}};
    return rec.dump(-1, ' ', false, json::error_handler_t::replace);
}

std::string Corpus::posts_jsonl() const {
    std::string out;
    for (const auto& [key, entry] : members_) {
        for (const auto& post : entry.posts) {
            out += post_to_jsonl(post);
            out += '\n';
        }
    }
    return out;
}

std::string Corpus::members_jsonl() const {
    std::string out;
    for (const auto& [key, entry] : members_) {
        out += profile_to_jsonl(entry.profile);
        out += '\n';
    }
    return out;
}

Corpus load_corpus(const std::filesystem::path& posts_path, const std::filesystem::path& members_path) {
    Corpus corpus;
    for_each_jsonl_record(members_path, [&](const json& rec, const std::string& src, std::size_t line) {
        auto profile = parse_profile(rec, src, line);
        try {
            corpus.add_profile(std::move(profile));
        } catch (const DuplicateId&) {
            throw DuplicateId(rec.value("community_id", "") + "/" + rec.value("member_id", "") + " (" + src +
                              ":" + std::to_string(line) + ")");
        }
    });
    for_each_jsonl_record(posts_path, [&](const json& rec, const std::string& src, std::size_t line) {
        auto post = parse_post(rec, src, line);
        try {
            corpus.add_post(std::move(post));
        } catch (const DuplicateId& e) {
            throw DuplicateId(std::string(e.id()) + " (" + src + ":" + std::to_string(line) + ")");
        }
    });
    corpus.finalize();
    return corpus;
}

Corpus load_corpus_dir(const std::filesystem::path& dir) {
    return load_corpus(dir / "posts.jsonl", dir / "members.jsonl");
}

void write_corpus_dir(const Corpus& corpus, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    auto write = [](const std::filesystem::path& p, const std::string& content) {
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + p.string());
        out << content;
        if (!out) throw IoError("write failed: " + p.string());
    };
    write(dir / "posts.jsonl", corpus.posts_jsonl());
    write(dir / "members.jsonl", corpus.members_jsonl());
}

InformationTrack build_information_track(const Corpus& corpus, const std::string& community_id,
                                         const std::string& member_id) {
    if (!corpus.has_member(community_id, member_id)) throw UnknownMember(community_id, member_id);
    InformationTrack track;
    track.community_id = community_id;
    track.member_id = member_id;
    track.posts = corpus.posts_of(community_id, member_id);
    std::sort(track.posts.begin(), track.posts.end(), post_less);
    track.total_posts = track.posts.size();
    return track;
}

std::vector<MemberSummary> list_members(const Corpus& corpus, const std::string& community_id) {
    if (!corpus.has_community(community_id)) throw UnknownCommunity(community_id);
    return corpus.members_of(community_id);
}

std::string age_bucket(int age) {
    if (age < 18) return "under18";
    if (age <= 24) return "18-24";
    if (age <= 34) return "25-34";
    if (age <= 49) return "35-49";
    return "50plus";
}

std::optional<std::string> declared_value(const DeclaredProfile& profile, const std::string& characteristic,
                                          int reference_year) {
    if (characteristic == characteristics::gender) {
        if (profile.gender) return to_string(*profile.gender);
        return std::nullopt;
    }
    if (characteristic == characteristics::age_group) {
        if (!profile.birth_year || *profile.birth_year > reference_year) return std::nullopt;
        return age_bucket(reference_year - *profile.birth_year);
    }
    if (characteristic == characteristics::residence) return profile.residence;
    if (characteristic == characteristics::education) {
        if (profile.education) return to_string(*profile.education);
        return std::nullopt;
    }
    if (characteristic == characteristics::occupation) return profile.occupation;
    if (auto it = profile.extra.find(characteristic); it != profile.extra.end()) return it->second;
    return std::nullopt;
}

}  // namespace sdverify
