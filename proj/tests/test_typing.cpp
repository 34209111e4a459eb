#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"
#include "shacon/extraction.hpp"
#include "shacon/ingestion.hpp"
#include "shacon/typing.hpp"

using namespace shacon;

namespace {

struct Site {
  const char* speaker;
  int round;
  std::int64_t utterance;
  std::size_t offset;
};

SharedConstruction make(LemmaSeq lemmas, std::vector<bool> content, std::vector<Site> sites) {
  SharedConstruction c;
  c.lemmas = std::move(lemmas);
  c.content = std::move(content);
  c.fribble = "f";
  for (const auto& s : sites) c.occurrences.push_back({s.speaker, s.round, s.utterance, s.offset});
  return c;
}

ConstructionType type_with(const char* core, std::set<int> rounds, int count) {
  ConstructionType t;
  t.core = core;
  t.rounds_used = std::move(rounds);
  t.first_round = *t.rounds_used.begin();
  t.last_round = *t.rounds_used.rbegin();
  t.occurrence_count = count;
  return t;
}

TypeTimeline boiler_timeline() {
  const auto c = parse_corpus(SHACON_FIXTURES "/boiler");
  const auto tls = build_timelines(c.dialogues[0], extract_shared_constructions(c.dialogues[0]));
  return tls.at(0);
}

}  // namespace

TEST(GroupIntoTypes, BookConstructionsShareOneType) {
  // dat boek bovenop / boek bovenop / dat boek / boek, bovenop tagged ADP
  const std::vector<SharedConstruction> cs{
      make({"dat", "boek", "bovenop"}, {false, true, false}, {{"a", 1, 1, 2}, {"b", 2, 6, 0}}),
      make({"boek", "bovenop"}, {true, false}, {{"a", 1, 1, 3}, {"b", 2, 6, 1}, {"b", 3, 9, 0}}),
      make({"dat", "boek"}, {false, true}, {{"a", 1, 1, 2}, {"b", 2, 6, 0}}),
      make({"boek"}, {true}, {{"a", 1, 1, 3}, {"b", 2, 6, 1}, {"b", 3, 9, 0}}),
  };
  const auto types = group_into_types(cs);
  ASSERT_EQ(types.size(), 1u);
  EXPECT_EQ(types[0].core, "boek");
  EXPECT_EQ(types[0].members.size(), 4u);
  EXPECT_EQ(types[0].rounds_used, (std::set<int>{1, 2, 3}));
  // Three distinct core sites although four members cover them.
  EXPECT_EQ(types[0].occurrence_count, 3);
  EXPECT_EQ(types[0].usage_by("a"), 1);
  EXPECT_EQ(types[0].usage_by("b"), 2);
}

TEST(GroupIntoTypes, SingleConstruction) {
  const std::vector<SharedConstruction> cs{make({"bal"}, {true}, {{"a", 2, 0, 0}, {"b", 4, 1, 0}})};
  const auto types = group_into_types(cs);
  ASSERT_EQ(types.size(), 1u);
  EXPECT_EQ(types[0].core, "bal");
  EXPECT_EQ(types[0].first_round, 2);
  EXPECT_EQ(types[0].last_round, 4);
}

TEST(GroupIntoTypes, MostFrequentContainedLemmaWins) {
  // "bal" in five occurrences on its own, "rood" only inside "rood bal".
  std::vector<Site> bal_sites;
  for (int i = 0; i < 4; ++i) bal_sites.push_back({i % 2 ? "a" : "b", 1, i, 0});
  bal_sites.push_back({"a", 1, 9, 1});
  const std::vector<SharedConstruction> cs{
      make({"rood", "bal"}, {true, true}, {{"a", 1, 9, 0}}),
      make({"bal"}, {true}, bal_sites),
  };
  const auto types = group_into_types(cs);
  ASSERT_EQ(types.size(), 1u);
  EXPECT_EQ(types[0].core, "bal");
  EXPECT_EQ(types[0].members.size(), 2u);
  EXPECT_EQ(types[0].lemma_set(), (std::set<Lemma>{"bal", "rood"}));
}

TEST(GroupIntoTypes, TiesGoToEarliestThenSmallest) {
  const std::vector<SharedConstruction> first{make({"toren", "bal"}, {true, true}, {{"a", 1, 0, 0}, {"b", 1, 1, 0}})};
  EXPECT_EQ(group_into_types(first).at(0).core, "toren");
  const std::vector<SharedConstruction> same_site{
      make({"toren"}, {true}, {{"a", 1, 3, 0}}),
      make({"bal"}, {true}, {{"a", 1, 3, 0}}),
      make({"bal", "toren"}, {true, true}, {{"b", 2, 5, 0}}),
  };
  // Counts tie at 2 and first sites tie at (3, 0): lexicographic order decides.
  const auto types = group_into_types(same_site);
  const auto it = std::find_if(types.begin(), types.end(),
                               [](const auto& t) { return t.members.size() == 2; });
  ASSERT_NE(it, types.end());
  EXPECT_EQ(it->core, "bal");
}

TEST(GroupIntoTypes, SkipsConstructionsWithoutContent) {
  const std::vector<SharedConstruction> cs{make({"de"}, {false}, {{"a", 1, 0, 0}})};
  EXPECT_TRUE(group_into_types(cs).empty());
}

TEST(DominantType, BoilerDialogueIsBoiler) {
  const auto tl = boiler_timeline();
  ASSERT_EQ(tl.types.size(), 3u);
  EXPECT_EQ(tl.types[0].core, "pinocchio");
  EXPECT_EQ(tl.types[1].core, "boek");
  EXPECT_EQ(tl.types[2].core, "boiler");
  EXPECT_EQ(tl.types[0].rounds_used, (std::set<int>{1, 2, 3}));
  EXPECT_EQ(tl.types[1].rounds_used, (std::set<int>{1, 2, 3}));
  const auto* dom = dominant_type(tl);
  ASSERT_NE(dom, nullptr);
  EXPECT_EQ(dom->core, "boiler");
  EXPECT_EQ(dom->occurrence_count, 11);
  EXPECT_EQ(type_features(*dom, 6), (TypeFeatures{6, 6, 6}));
}

TEST(DominantType, SingleAndEmpty) {
  TypeTimeline tl{"d", "f", {type_with("bal", {2}, 1)}};
  EXPECT_EQ(dominant_type(tl), &tl.types[0]);
  EXPECT_EQ(dominant_type(TypeTimeline{}), nullptr);
}

TEST(DominantType, EqualRoundCountLaterWins) {
  TypeTimeline tl{"d", "f", {type_with("a", {1, 2}, 9), type_with("b", {3, 4}, 2)}};
  EXPECT_EQ(dominant_type(tl)->core, "b");
  TypeTimeline same{"d", "f", {type_with("b", {1, 4}, 2), type_with("a", {2, 4}, 2)}};
  EXPECT_EQ(dominant_type(same)->core, "a");
  TypeTimeline count{"d", "f", {type_with("a", {1, 4}, 2), type_with("b", {2, 4}, 3)}};
  EXPECT_EQ(dominant_type(count)->core, "b");
}

TEST(DominantType, InvariantUnderPermutation) {
  SplitMix64 rng(11);
  for (int i = 0; i < 500; ++i) {
    TypeTimeline tl;
    const int n = rng.between(1, 6);
    for (int k = 0; k < n; ++k) {
      std::set<int> rounds;
      const int used = rng.between(1, 3);
      for (int j = 0; j < used; ++j) rounds.insert(rng.between(1, 4));
      tl.types.push_back(type_with(("c" + std::to_string(k)).c_str(), rounds, rng.between(1, 3)));
    }
    const auto want = *dominant_type(tl);
    for (int p = 0; p < 5; ++p) {
      shuffle(tl.types, rng);
      EXPECT_EQ(*dominant_type(tl), want);
    }
  }
}

TEST(TypeFeatures, Examples) {
  EXPECT_EQ(type_features(type_with("x", {1}, 1), 6), (TypeFeatures{1, 1, 6}));
  EXPECT_EQ(type_features(type_with("x", {2, 5}, 2), 6), (TypeFeatures{2, 5, 6}));
  EXPECT_THROW(type_features(type_with("x", {7}, 1), 6), std::invalid_argument);
}

TEST(BuildTimelines, OnePerFribbleIncludingEmpty) {
  Dialogue d{"d", {"a", "b"}, 1, {}};
  d.trials.push_back({"f2", 1, "a", "b", {}});
  d.trials.push_back({"f1", 1, "b", "a", {}});
  const auto tls = build_timelines(d, {});
  ASSERT_EQ(tls.size(), 2u);
  EXPECT_EQ(tls[0].fribble, "f1");
  EXPECT_TRUE(tls[1].types.empty());
}

TEST(TypingProperties, PartitionCoreContainmentAndFeatures) {
  SplitMix64 rng(12);
  oracle::MiniConfig cfg;
  cfg.utterances_per_speaker_max = 10;
  cfg.vocab = 6;
  cfg.rounds = 4;
  for (int i = 0; i < 400; ++i) {
    const auto d = oracle::random_dialogue(rng, cfg);
    const auto ex = extract_shared_constructions(d);
    for (const auto& tl : build_timelines(d, ex)) {
      auto it = ex.find(tl.fribble);
      std::multiset<LemmaSeq> input, members;
      if (it != ex.end()) {
        for (const auto& c : it->second) input.insert(c.lemmas);
      }
      for (const auto& t : tl.types) {
        for (const auto& m : t.members) {
          members.insert(m.lemmas);
          const auto content = m.content_lemmas();
          EXPECT_NE(std::find(content.begin(), content.end(), t.core), content.end());
        }
        const auto f = type_features(t, d.rounds);
        EXPECT_LE(f.frequency, f.rounds_total);
        EXPECT_TRUE(t.rounds_used.contains(f.recency));
        EXPECT_EQ(t.usage_by(d.speakers.first) + t.usage_by(d.speakers.second), t.occurrence_count);
      }
      EXPECT_EQ(members, input);
      if (!tl.types.empty()) {
        auto shuffled = tl;
        shuffle(shuffled.types, rng);
        EXPECT_EQ(dominant_type(shuffled)->core, dominant_type(tl)->core);
      }
    }
  }
}
