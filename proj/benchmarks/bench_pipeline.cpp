#include <benchmark/benchmark.h>

#include "sdverify/analyzer.hpp"
#include "sdverify/synthetic.hpp"
#include "sdverify/tokenizer.hpp"
#include "sdverify/verifier.hpp"

using namespace sdverify;

namespace {

const MarkerLexicon& lexicon() {
    static const MarkerLexicon lex = load_lexicon(std::string(SDVERIFY_DATA_DIR) + "/lexicon/starter_uk.json");
    return lex;
}

const SyntheticCommunity& community(std::size_t members) {
    static std::map<std::size_t, SyntheticCommunity> cache;
    auto it = cache.find(members);
    if (it == cache.end()) {
        SyntheticSpec spec;
        spec.n_members = members;
        spec.seed = 3;
        it = cache.emplace(members, generate_synthetic(spec, lexicon(), kDefaultReferenceYear)).first;
    }
    return it->second;
}

void BM_Tokenize(benchmark::State& state) {
    const auto track = build_information_track(community(50).corpus, "synthetic", "m0001");
    std::size_t bytes = 0;
    for (const auto& p : track.posts) bytes += p.text.size();
    for (auto _ : state) {
        for (const auto& p : track.posts) benchmark::DoNotOptimize(tokenize(p.text));
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * bytes));
}
BENCHMARK(BM_Tokenize);

void BM_MatchTrack(benchmark::State& state) {
    const auto matcher = compile_lexicon(lexicon());
    const auto track = build_information_track(community(50).corpus, "synthetic", "m0001");
    for (auto _ : state) benchmark::DoNotOptimize(match_track(matcher, track, kDefaultPerPostCap));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * track.posts.size()));
}
BENCHMARK(BM_MatchTrack);

void BM_VerifyMembers(benchmark::State& state) {
    const auto members = static_cast<std::size_t>(state.range(0));
    const auto workers = static_cast<unsigned>(state.range(1));
    const auto& c = community(members);
    const auto matcher = compile_lexicon(lexicon());
    for (auto _ : state) {
        benchmark::DoNotOptimize(verify_members(c.corpus, matcher, lexicon(), "synthetic", {}, {}, workers));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * members));
}
BENCHMARK(BM_VerifyMembers)->Args({500, 1})->Args({500, 4})->UseRealTime()->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
