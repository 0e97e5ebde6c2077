#include "doctest.h"

#include <fstream>
#include <map>
#include <random>
#include <set>

#include "sdverify/canonical_json.hpp"
#include "sdverify/corpus.hpp"
#include "sdverify/errors.hpp"
#include "test_support.hpp"

using namespace sdverify;
using sdverify::testing::fixtures_dir;
using sdverify::testing::TempDir;

namespace {

void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

// Independent count: number of non-blank lines, and distinct "member_id" values
// pulled out with plain string search.
std::size_t count_lines(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) n += line.empty() ? 0 : 1;
    return n;
}

std::map<std::string, std::size_t> member_post_counts_by_text(const std::filesystem::path& posts,
                                                              const std::string& community) {
    std::ifstream in(posts);
    std::string line;
    std::map<std::string, std::size_t> counts;
    const std::string community_key = "\"community_id\": \"" + community + "\"";
    const std::string member_key = "\"member_id\": \"";
    while (std::getline(in, line)) {
        if (line.find(community_key) == std::string::npos) continue;
        auto at = line.find(member_key) + member_key.size();
        counts[line.substr(at, line.find('"', at) - at)]++;
    }
    return counts;
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("tiny fixture loads 2 members and 3 posts") {
    const auto dir = fixtures_dir() / "tiny";
    const auto corpus = load_corpus_dir(dir);
    CHECK(corpus.post_count() == count_lines(dir / "posts.jsonl"));
    CHECK(corpus.member_count() == count_lines(dir / "members.jsonl"));
    CHECK(corpus.post_count() == 3);
    CHECK(corpus.member_count() == 2);
    CHECK(corpus.communities() == std::vector<std::string>{"c1"});
}

TEST_CASE("empty files give an empty corpus") {
    TempDir tmp;
    write_file(tmp.path() / "posts.jsonl", "");
    write_file(tmp.path() / "members.jsonl", "");
    const auto corpus = load_corpus_dir(tmp.path());
    CHECK(corpus.communities().empty());
    CHECK(corpus.post_count() == 0);
}

TEST_CASE("non-JSON line reports its line number") {
    TempDir tmp;
    write_file(tmp.path() / "members.jsonl", "");
    write_file(tmp.path() / "posts.jsonl",
               R"({"community_id":"c","post_id":"p1","member_id":"m","timestamp":1,"text":"a"})"
               "\nnot json\n");
    try {
        load_corpus_dir(tmp.path());
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("record validation") {
    TempDir tmp;
    write_file(tmp.path() / "members.jsonl", "");
    auto expect_format_error = [&](const std::string& line) {
        write_file(tmp.path() / "posts.jsonl", line + "\n");
        CHECK_THROWS_AS(load_corpus_dir(tmp.path()), FormatError);
    };
    expect_format_error(R"({"community_id":"c","post_id":"","member_id":"m","timestamp":1,"text":"a"})");
    expect_format_error(R"({"community_id":"c","post_id":"p","member_id":"m","timestamp":-5,"text":"a"})");
    expect_format_error(R"({"community_id":"c","post_id":"p","member_id":"m","timestamp":1.5,"text":"a"})");
    expect_format_error(R"({"community_id":"c","post_id":"p","member_id":"m","timestamp":1})");
    expect_format_error(R"([1,2,3])");

    write_file(tmp.path() / "posts.jsonl", "");
    write_file(tmp.path() / "members.jsonl", R"({"community_id":"c","member_id":"m","declared":{"gender":"robot"}})");
    CHECK_THROWS_AS(load_corpus_dir(tmp.path()), FormatError);
    write_file(tmp.path() / "members.jsonl", R"({"community_id":"c","member_id":"m","declared":{"birth_year":1800}})");
    CHECK_THROWS_AS(load_corpus_dir(tmp.path()), FormatError);
}

TEST_CASE("duplicate ids are rejected") {
    TempDir tmp;
    write_file(tmp.path() / "members.jsonl", "");
    write_file(tmp.path() / "posts.jsonl",
               R"({"community_id":"c","post_id":"p1","member_id":"m","timestamp":1,"text":"a"})"
               "\n"
               R"({"community_id":"c","post_id":"p1","member_id":"n","timestamp":2,"text":"b"})"
               "\n");
    CHECK_THROWS_AS(load_corpus_dir(tmp.path()), DuplicateId);

    // the same post id in another community is fine
    write_file(tmp.path() / "posts.jsonl",
               R"({"community_id":"c","post_id":"p1","member_id":"m","timestamp":1,"text":"a"})"
               "\n"
               R"({"community_id":"d","post_id":"p1","member_id":"m","timestamp":2,"text":"b"})"
               "\n");
    CHECK_NOTHROW(load_corpus_dir(tmp.path()));

    write_file(tmp.path() / "members.jsonl", R"({"community_id":"c","member_id":"m"})"
                                             "\n"
                                             R"({"community_id":"c","member_id":"m"})"
                                             "\n");
    CHECK_THROWS_AS(load_corpus_dir(tmp.path()), DuplicateId);
}

TEST_CASE("missing file is an IoError") {
    TempDir tmp;
    CHECK_THROWS_AS(load_corpus_dir(tmp.path()), IoError);
}

TEST_CASE("post without profile gets an implicit all-absent profile") {
    const auto corpus = load_corpus_dir(fixtures_dir() / "corpus");
    REQUIRE(corpus.has_member("malecha", "guest"));
    const auto& p = corpus.profile("malecha", "guest");
    CHECK_FALSE(p.gender);
    CHECK_FALSE(p.birth_year);
    CHECK(p.extra.empty());
}

TEST_CASE("information track ordering") {
    const auto corpus = load_corpus_dir(fixtures_dir() / "tiny");
    const auto track = build_information_track(corpus, "c1", "m1");
    REQUIRE(track.total_posts == 2);
    CHECK(track.posts[0].timestamp == 20);
    CHECK(track.posts[1].timestamp == 30);

    Corpus manual;
    manual.add_post({"b", "c", "m", 5, "x"});
    manual.add_post({"a", "c", "m", 5, "y"});
    manual.add_post({"z", "c", "m", 1, "w"});
    manual.finalize();
    const auto tie = build_information_track(manual, "c", "m");
    REQUIRE(tie.posts.size() == 3);
    CHECK(tie.posts[0].post_id == "z");
    CHECK(tie.posts[1].post_id == "a");
    CHECK(tie.posts[2].post_id == "b");

    SUBCASE("timestamps 30, 10, 20 come back 10, 20, 30") {
        Corpus c;
        c.add_post({"p30", "c", "m", 30, ""});
        c.add_post({"p10", "c", "m", 10, ""});
        c.add_post({"p20", "c", "m", 20, ""});
        c.finalize();
        const auto t = build_information_track(c, "c", "m");
        CHECK(t.posts[0].timestamp == 10);
        CHECK(t.posts[1].timestamp == 20);
        CHECK(t.posts[2].timestamp == 30);
    }
}

TEST_CASE("member with a profile and no posts has an empty track") {
    const auto corpus = load_corpus_dir(fixtures_dir() / "corpus");
    const auto track = build_information_track(corpus, "lviv-forum", "silent");
    CHECK(track.total_posts == 0);
    CHECK(track.posts.empty());
    CHECK_THROWS_AS(build_information_track(corpus, "lviv-forum", "nobody"), UnknownMember);
    CHECK_THROWS_AS(build_information_track(corpus, "elsewhere", "silent"), UnknownMember);
}

TEST_CASE("list_members is sorted and counts match a text-level recount") {
    const auto dir = fixtures_dir() / "corpus";
    const auto corpus = load_corpus_dir(dir);
    for (const auto& community : corpus.communities()) {
        const auto members = list_members(corpus, community);
        const auto expected = member_post_counts_by_text(dir / "posts.jsonl", community);
        for (std::size_t i = 1; i < members.size(); ++i) CHECK(members[i - 1].member_id < members[i].member_id);
        for (const auto& m : members) {
            auto it = expected.find(m.member_id);
            CHECK(m.total_posts == (it == expected.end() ? 0 : it->second));
        }
    }
    CHECK_THROWS_AS(list_members(corpus, "x"), UnknownCommunity);

    Corpus c;
    c.add_profile({"m2", "c", {}, {}, {}, {}, {}, {}});
    c.add_profile({"m1", "c", {}, {}, {}, {}, {}, {}});
    c.finalize();
    const auto members = list_members(c, "c");
    REQUIRE(members.size() == 2);
    CHECK(members[0].member_id == "m1");
    CHECK(members[1].member_id == "m2");
}

TEST_CASE("declared_value mapping") {
    DeclaredProfile p;
    p.birth_year = 1990;
    CHECK(declared_value(p, "age_group", 2015) == "25-34");
    p.birth_year = 1998;
    CHECK(declared_value(p, "age_group", 2015) == "under18");
    p.birth_year = 2020;
    CHECK_FALSE(declared_value(p, "age_group", 2015));
    CHECK_FALSE(declared_value(p, "gender", 2015));
    p.gender = Gender::female;
    CHECK(declared_value(p, "gender", 2015) == "female");
    p.education = Education::higher;
    CHECK(declared_value(p, "education", 2015) == "higher");
    p.extra["religion"] = "none";
    CHECK(declared_value(p, "religion", 2015) == "none");
    CHECK_FALSE(declared_value(p, "zodiac", 2015));

    CHECK(age_bucket(17) == "under18");
    CHECK(age_bucket(18) == "18-24");
    CHECK(age_bucket(24) == "18-24");
    CHECK(age_bucket(25) == "25-34");
    CHECK(age_bucket(34) == "25-34");
    CHECK(age_bucket(35) == "35-49");
    CHECK(age_bucket(49) == "35-49");
    CHECK(age_bucket(50) == "50plus");
}

TEST_CASE("serialize and reload yields an identical index") {
    TempDir tmp;
    const auto original = load_corpus_dir(fixtures_dir() / "corpus");
    write_corpus_dir(original, tmp.path());
    const auto reloaded = load_corpus_dir(tmp.path());
    CHECK(reloaded == original);
    CHECK(reloaded.posts_jsonl() == original.posts_jsonl());
    CHECK(reloaded.members_jsonl() == original.members_jsonl());
}

TEST_CASE("tracks equal a brute-force filter over raw records") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 5; ++round) {
        std::vector<Post> raw;
        Corpus corpus;
        const std::size_t n = 2000 + rng() % 8000;
        for (std::size_t i = 0; i < n; ++i) {
            Post p{"p" + std::to_string(i), "c" + std::to_string(rng() % 3), "m" + std::to_string(rng() % 40),
                   static_cast<std::int64_t>(rng() % 500), "t"};
            raw.push_back(p);
            corpus.add_post(p);
        }
        corpus.finalize();
        for (const auto& community : corpus.communities()) {
            for (const auto& m : list_members(corpus, community)) {
                const auto track = build_information_track(corpus, community, m.member_id);
                std::multiset<std::string> expected;
                for (const auto& p : raw) {
                    if (p.community_id == community && p.member_id == m.member_id) expected.insert(p.post_id);
                }
                std::multiset<std::string> got;
                for (const auto& p : track.posts) got.insert(p.post_id);
                CHECK(got == expected);
                CHECK(track.total_posts == expected.size());
                for (std::size_t i = 1; i < track.posts.size(); ++i) {
                    const auto& a = track.posts[i - 1];
                    const auto& b = track.posts[i];
                    CHECK((a.timestamp < b.timestamp || (a.timestamp == b.timestamp && a.post_id < b.post_id)));
                }
            }
        }
    }
}

TEST_CASE("repeated reads serialize identically") {
    const auto corpus = load_corpus_dir(fixtures_dir() / "corpus");
    auto dump = [&] {
        std::string s;
        for (const auto& m : list_members(corpus, "lviv-forum")) {
            s += m.member_id + ":" + std::to_string(m.total_posts) + ";";
            for (const auto& p : build_information_track(corpus, "lviv-forum", m.member_id).posts) s += post_to_jsonl(p);
        }
        return s;
    };
    CHECK(dump() == dump());
}

}
