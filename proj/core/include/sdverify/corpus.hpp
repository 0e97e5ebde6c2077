#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace sdverify {

struct Post {
    std::string post_id;
    std::string community_id;
    std::string member_id;
    std::int64_t timestamp = 0;  // Unix seconds
    std::string text;

    bool operator==(const Post&) const = default;
};

enum class Gender { male, female };
enum class Education { secondary, higher };

/// Account data as entered by the member. Every field is independently optional.
/// Declared fields beyond the built-in five land in `extra` so that lexicons can
/// define further characteristics.
struct DeclaredProfile {
    std::string member_id;
    std::string community_id;
    std::optional<Gender> gender;
    std::optional<int> birth_year;
    std::optional<std::string> residence;
    std::optional<Education> education;
    std::optional<std::string> occupation;
    std::map<std::string, std::string> extra;

    bool operator==(const DeclaredProfile&) const = default;
};

/// A member's posts in one community, ascending by (timestamp, post_id).
struct InformationTrack {
    std::string member_id;
    std::string community_id;
    std::vector<Post> posts;
    std::size_t total_posts = 0;
};

struct MemberSummary {
    std::string member_id;
    std::size_t total_posts = 0;
    DeclaredProfile profile;
};

using MemberKey = std::pair<std::string, std::string>;  // (community_id, member_id)

/// Immutable after load; safe for concurrent readers.
class Corpus {
public:
    Corpus() = default;

    /// Adds a post; throws DuplicateId on a repeated (community_id, post_id).
    /// Creates an all-absent profile for a previously unseen member.
    void add_post(Post post);
    /// Adds a profile record; throws DuplicateId if the member already has one
    /// that was not created implicitly by add_post.
    void add_profile(DeclaredProfile profile);
    /// Sorts every track. Called by load_corpus; must be called after manual building.
    void finalize();

    [[nodiscard]] std::vector<std::string> communities() const;
    [[nodiscard]] bool has_community(const std::string& community_id) const;
    [[nodiscard]] bool has_member(const std::string& community_id, const std::string& member_id) const;
    [[nodiscard]] const DeclaredProfile& profile(const std::string& community_id, const std::string& member_id) const;
    [[nodiscard]] const std::vector<Post>& posts_of(const std::string& community_id,
                                                    const std::string& member_id) const;
    /// Members of one community in member_id order (empty for an unknown community).
    [[nodiscard]] std::vector<MemberSummary> members_of(const std::string& community_id) const;
    [[nodiscard]] std::size_t post_count() const noexcept { return post_count_; }
    [[nodiscard]] std::size_t member_count() const noexcept { return members_.size(); }

    /// Canonical JSONL, ordered by (community, member, timestamp, post_id) and (community, member).
    [[nodiscard]] std::string posts_jsonl() const;
    [[nodiscard]] std::string members_jsonl() const;

    bool operator==(const Corpus&) const = default;

private:
    struct MemberEntry {
        DeclaredProfile profile;
        bool explicit_profile = false;
        std::vector<Post> posts;

        // explicit_profile is load bookkeeping, not part of the index
        bool operator==(const MemberEntry& o) const { return profile == o.profile && posts == o.posts; }
    };

    std::map<MemberKey, MemberEntry> members_;
    std::set<std::pair<std::string, std::string>> post_ids_;  // (community, post_id)
    std::size_t post_count_ = 0;
};

/// Reads posts.jsonl and members.jsonl. Throws IoError, FormatError, DuplicateId.
Corpus load_corpus(const std::filesystem::path& posts_path, const std::filesystem::path& members_path);
/// Convenience: `<dir>/posts.jsonl` and `<dir>/members.jsonl`.
Corpus load_corpus_dir(const std::filesystem::path& dir);
void write_corpus_dir(const Corpus& corpus, const std::filesystem::path& dir);

InformationTrack build_information_track(const Corpus& corpus, const std::string& community_id,
                                         const std::string& member_id);

/// Sorted by member_id. Throws UnknownCommunity.
std::vector<MemberSummary> list_members(const Corpus& corpus, const std::string& community_id);

namespace characteristics {
inline constexpr const char* gender = "gender";
inline constexpr const char* age_group = "age_group";
inline constexpr const char* residence = "residence";
inline constexpr const char* education = "education";
inline constexpr const char* occupation = "occupation";
}  // namespace characteristics

inline constexpr int kMinBirthYear = 1900;

/// Bucket for an age in whole years: under18, 18-24, 25-34, 35-49, 50plus.
std::string age_bucket(int age);

/// Declared value of `characteristic` in the characteristic's value vocabulary,
/// or nullopt when the member did not declare it. Birth years later than
/// `reference_year` count as absent.
std::optional<std::string> declared_value(const DeclaredProfile& profile, const std::string& characteristic,
                                          int reference_year);

std::string to_string(Gender g);
std::string to_string(Education e);

/// Record-level JSON helpers shared with the run store and synthetic generator.
std::string post_to_jsonl(const Post& post);
std::string profile_to_jsonl(const DeclaredProfile& profile);

}  // namespace sdverify
