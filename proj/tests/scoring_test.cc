/*
 * Copyright 2026 The Eco-Bee Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cmath>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "ecobee/error.h"
#include "ecobee/factor_table.h"
#include "ecobee/scoring.h"
#include "test_support.h"

namespace ecobee {
namespace {

using testing::BruteForceContributions;
using testing::BruteForceScore;
using testing::DataDir;
using testing::OracleItem;
using testing::ReadOracleTable;
using testing::TempDir;
using testing::ThrownCode;
using testing::WriteFile;

std::size_t CountDataLines(const std::filesystem::path& file) {
  std::ifstream in(file);
  std::string line;
  std::size_t n = 0;
  std::getline(in, line);  // header
  while (std::getline(in, line)) n += line.empty() ? 0 : 1;
  return n;
}

std::string Header() {
  std::string h = "domain,option_key";
  for (const auto& code : boundary_codes()) h += "," + code;
  return h + "\n";
}

std::vector<CanonicalItem> Items(std::initializer_list<std::pair<const char*, const char*>> list) {
  std::vector<CanonicalItem> out;
  for (auto [d, o] : list) out.push_back(CanonicalItem{d, o, 1.0, ItemSource::kQuiz});
  return out;
}

std::vector<OracleItem> ToOracle(const std::vector<CanonicalItem>& items) {
  std::vector<OracleItem> out;
  for (const auto& i : items) out.push_back({i.domain, i.option_key, i.quantity});
  return out;
}

TEST(FactorTableTest, TwoDomainFixtureRowCounts) {
  auto dir = DataDir() / "two_domain";
  FactorTable table = load_factor_tables(dir);
  std::size_t expected = CountDataLines(dir / "factors_food.csv") +
                         CountDataLines(dir / "factors_mobility.csv");
  EXPECT_EQ(expected, 7u);
  EXPECT_EQ(table.size(), expected);
  EXPECT_EQ(table.domains().size(), 2u);
  EXPECT_EQ(table.Options("food").size(), 3u);
}

TEST(FactorTableTest, DomainMaxCache) {
  FactorTable table = load_factor_tables(DataDir() / "f0");
  auto oracle = ReadOracleTable(DataDir() / "f0");
  for (const auto& domain : table.domains()) {
    for (std::size_t b = 0; b < kBoundaryCount; ++b) {
      double worst = 0.0;
      for (const auto& o : oracle.options.at(domain)) {
        worst = std::max(worst, oracle.rows.at({domain, o})[b]);
      }
      EXPECT_EQ(table.DomainMax(domain)[b], worst) << domain << " " << b;
    }
  }
}

TEST(FactorTableTest, NegativeWeightNamesFileAndLine) {
  auto diags = ValidateFactorDirectory(DataDir() / "bad_negative");
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].code, ErrorCode::kNegativeWeight);
  EXPECT_EQ(diags[0].line, 3u);
  EXPECT_NE(diags[0].ToString().find("factors_food.csv:3"), std::string::npos);
  EXPECT_EQ(ThrownCode([] { load_factor_tables(DataDir() / "bad_negative"); }),
            ErrorCode::kNegativeWeight);
}

TEST(FactorTableTest, MissingColumn) {
  TempDir dir;
  std::string header = Header();
  header.erase(header.find(",novel_entities"), std::string(",novel_entities").size());
  WriteFile(dir.path() / "factors_food.csv", header + "food,vegan,1,1,1,1,1,1,1,1\n");
  EXPECT_EQ(ThrownCode([&] { load_factor_tables(dir.path()); }), ErrorCode::kMissingColumn);
}

TEST(FactorTableTest, DuplicateAndEmpty) {
  TempDir dup;
  WriteFile(dup.path() / "factors_food.csv",
            Header() + "food,vegan,1,1,1,1,1,1,1,1,1\nfood,vegan,0,0,0,0,0,0,0,0,0\n");
  EXPECT_EQ(ThrownCode([&] { load_factor_tables(dup.path()); }), ErrorCode::kDuplicateRow);

  TempDir empty;
  WriteFile(empty.path() / "factors_food.csv", Header());
  EXPECT_EQ(ThrownCode([&] { load_factor_tables(empty.path()); }), ErrorCode::kEmptyDomain);
}

TEST(FactorTableTest, VersionTracksContent) {
  FactorTable a = load_factor_tables(DataDir() / "f0");
  FactorTable b = load_factor_tables(DataDir() / "f0");
  FactorTable c = load_factor_tables(DataDir() / "two_domain");
  EXPECT_EQ(a.version(), b.version());
  EXPECT_EQ(a.version().size(), 12u);
  EXPECT_NE(a.version(), c.version());
}

class ScoringTest : public ::testing::Test {
 protected:
  FactorTable table_ = load_factor_tables(DataDir() / "f0");
  testing::OracleTable oracle_ = ReadOracleTable(DataDir() / "f0");
};

TEST_F(ScoringTest, EmptyAccumulationIsZero) {
  EXPECT_EQ(accumulate_pressures({}, table_), PressureVector());
}

TEST_F(ScoringTest, SingleItemQuantityScales) {
  std::vector<CanonicalItem> items = {{"food", "vegan", 2.0, ItemSource::kQuiz}};
  PressureVector p = accumulate_pressures(items, table_);
  EXPECT_EQ(p[Boundary::kClimateChange], 2.0);
  EXPECT_EQ(p[Boundary::kFreshwaterUse], 3.0);
  EXPECT_EQ(p[Boundary::kStratosphericOzoneDepletion], 0.0);
}

TEST_F(ScoringTest, MixedItemsMatchOracle) {
  auto items = Items({{"food", "beef_burger"}, {"mobility", "bus"},
                      {"fashion", "jeans"}, {"housing", "halls"}});
  PressureVector p = accumulate_pressures(items, table_);
  auto expected = BruteForceScore(ToOracle(items), oracle_);
  for (std::size_t b = 0; b < kBoundaryCount; ++b) {
    EXPECT_NEAR(p.values()[b], expected.pressure[b], 1e-12);
  }
}

TEST_F(ScoringTest, HandComputedQuiz) {
  // vegan + cycle + secondhand + shared_flat against the F0 domain maxima.
  auto items = Items({{"food", "vegan"}, {"mobility", "cycle"},
                      {"fashion", "secondhand"}, {"housing", "shared_flat"}});
  BoundaryScores s = normalise_scores(accumulate_pressures(items, table_), items, table_);
  // climate: p = 1.0+0.1+0.2+1.0 = 2.3, p_max = 6+3+2+3 = 14
  EXPECT_DOUBLE_EQ(s[Boundary::kClimateChange], 83.6);
  // freshwater: p = 1.5+0+0.2+0.5 = 2.2, p_max = 3+0.1+3+1.5 = 7.6
  EXPECT_DOUBLE_EQ(s[Boundary::kFreshwaterUse], 71.1);
  // ozone: p = 0.02, p_max = 0.1+0.1+0.05+0.2 = 0.45
  EXPECT_DOUBLE_EQ(s[Boundary::kStratosphericOzoneDepletion], 95.6);
  auto expected = BruteForceScore(ToOracle(items), oracle_);
  for (std::size_t b = 0; b < kBoundaryCount; ++b) {
    EXPECT_NEAR(s.values()[b], expected.exact[b], 0.05 + 1e-9);
  }
}

TEST_F(ScoringTest, ZeroPressureScoresHundred) {
  auto items = Items({{"food", "home_grown"}, {"mobility", "walk"}});
  BoundaryScores s = normalise_scores(PressureVector(), items, table_);
  EXPECT_EQ(s, BoundaryScores::Uniform(100.0));
}

TEST_F(ScoringTest, SaturationScoresZero) {
  auto items = Items({{"food", "meat_heavy"}, {"mobility", "car"},
                      {"fashion", "fast_fashion"}, {"housing", "detached_house"}});
  ScoreResult r = score(items, table_);
  EXPECT_EQ(r.boundary_scores, BoundaryScores::Uniform(0.0));
  EXPECT_EQ(r.composite, 0.0);
}

TEST_F(ScoringTest, BestQuizScoresHundred) {
  auto items = Items({{"food", "home_grown"}, {"mobility", "walk"},
                      {"fashion", "no_new_clothes"}, {"housing", "eco_coop"}});
  ScoreResult r = score(items, table_);
  EXPECT_EQ(r.composite, 100.0);
  EXPECT_EQ(r.boundary_scores, BoundaryScores::Uniform(100.0));
  EXPECT_TRUE(r.explanations.empty());
}

TEST(CompositeTest, Examples) {
  EXPECT_EQ(composite(BoundaryScores::Uniform(50.0)), 50.0);
  EXPECT_EQ(composite(BoundaryScores::Uniform(100.0)), 100.0);
  PerBoundary v{};
  v[0] = 100.0;
  EXPECT_EQ(composite(BoundaryScores(v)), std::round(1000.0 / 9.0) / 10.0);
  EXPECT_EQ(composite(BoundaryScores(v)), 11.1);
}

TEST(CompositeTest, Weights) {
  PerBoundary v{};
  v[0] = 100.0;
  PerBoundary w{};
  w[0] = 1.0;
  EXPECT_EQ(composite(BoundaryScores(v), w), 100.0);
  w[0] = 0.0;
  EXPECT_EQ(ThrownCode([&] { composite(BoundaryScores(v), w); }), ErrorCode::kInvalidWeights);
  w[0] = -1.0;
  w[1] = 2.0;
  EXPECT_EQ(ThrownCode([&] { composite(BoundaryScores(v), w); }), ErrorCode::kInvalidWeights);
}

TEST_F(ScoringTest, ExplainSingleContributor) {
  FactorRow only{"solo", "one", {}};
  only.weights[Index(Boundary::kOceanAcidification)] = 2.0;
  FactorTable t = FactorTable::FromRows({only});
  std::vector<CanonicalItem> items = {{"solo", "one", 1.0, ItemSource::kQuiz}};
  auto ex = explain(items, t, 5);
  ASSERT_EQ(ex.size(), 1u);
  EXPECT_EQ(ex[0].boundary, Boundary::kOceanAcidification);
  EXPECT_EQ(ex[0].share, 1.0);
  EXPECT_TRUE(explain(Items({{"food", "home_grown"}}), table_, 5).empty());
}

TEST_F(ScoringTest, ExplainMatchesSortOracle) {
  auto items = Items({{"food", "beef_burger"}, {"mobility", "bus"},
                      {"fashion", "jeans"}, {"housing", "halls"}});
  auto ex = explain(items, table_, 5);
  auto oracle = BruteForceContributions(ToOracle(items), oracle_);
  ASSERT_EQ(ex.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(ex[i].domain, oracle[i].domain);
    EXPECT_EQ(ex[i].option_key, oracle[i].option_key);
    EXPECT_EQ(BoundaryCode(ex[i].boundary), oracle[i].boundary_code);
    EXPECT_NEAR(ex[i].pressure, oracle[i].pressure, 1e-12);
    EXPECT_NEAR(ex[i].share, oracle[i].share, 1e-12);
  }
}

TEST_F(ScoringTest, SharesSumToOnePerBoundary) {
  auto items = Items({{"food", "vegetarian"}, {"mobility", "car"}, {"housing", "halls"}});
  auto ex = explain(items, table_, 1000);
  PerBoundary sums{};
  for (const auto& c : ex) sums[Index(c.boundary)] += c.share;
  for (double s : sums) {
    if (s != 0.0) EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST_F(ScoringTest, EmptyAndUnknownItems) {
  EXPECT_EQ(ThrownCode([&] { score({}, table_); }), ErrorCode::kEmptyItems);
  EXPECT_EQ(ThrownCode([&] { score(Items({{"food", "caviar"}}), table_); }),
            ErrorCode::kUnknownOption);
}

// Property tests over random tables and quizzes.

struct RandomCase {
  FactorTable table;
  std::vector<FactorRow> rows;
  std::vector<CanonicalItem> items;
};

RandomCase MakeCase(Rng& rng) {
  auto rows = testing::RandomFactorRows(rng, 1 + rng.Below(5), 6, false);
  RandomCase c{FactorTable::FromRows(rows), rows, {}};
  for (const auto& domain : c.table.domains()) {
    auto options = c.table.Options(domain);
    c.items.push_back({domain, options[rng.Below(options.size())],
                       rng.Uniform(0.25, 4.0), ItemSource::kQuiz});
  }
  return c;
}

TEST(ScoringPropertyTest, BoundsAndDeterminism) {
  Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    RandomCase c = MakeCase(rng);
    ScoreResult a = score(c.items, c.table);
    ScoreResult b = score(c.items, c.table);
    EXPECT_EQ(a, b);
    for (double s : a.boundary_scores.values()) {
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, 100.0);
    }
    EXPECT_GE(a.composite, 0.0);
    EXPECT_LE(a.composite, 100.0);
  }
}

TEST(ScoringPropertyTest, QuantityLinearity) {
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    RandomCase c = MakeCase(rng);
    std::size_t k = rng.Below(c.items.size());
    std::vector<CanonicalItem> single = {c.items[k]};
    std::vector<CanonicalItem> doubled = single;
    doubled[0].quantity *= 2.0;
    auto p1 = accumulate_pressures(single, c.table);
    auto p2 = accumulate_pressures(doubled, c.table);
    for (std::size_t b = 0; b < kBoundaryCount; ++b) {
      EXPECT_EQ(p2.values()[b], 2.0 * p1.values()[b]);
    }
  }
}

TEST(ScoringPropertyTest, DominatedSwapNeverLowersScores) {
  Rng rng(13);
  int checked = 0;
  for (int i = 0; i < 2000 && checked < 300; ++i) {
    RandomCase c = MakeCase(rng);
    std::size_t k = rng.Below(c.items.size());
    const auto& from = c.table.Weights(c.items[k].domain, c.items[k].option_key);
    for (const auto& option : c.table.Options(c.items[k].domain)) {
      const auto& to = c.table.Weights(c.items[k].domain, option);
      bool dominated = true;
      for (std::size_t b = 0; b < kBoundaryCount; ++b) dominated = dominated && to[b] <= from[b];
      if (!dominated) continue;
      auto swapped = c.items;
      swapped[k].option_key = option;
      ScoreResult before = score(c.items, c.table);
      ScoreResult after = score(swapped, c.table);
      for (std::size_t b = 0; b < kBoundaryCount; ++b) {
        EXPECT_GE(after.boundary_scores.values()[b], before.boundary_scores.values()[b]);
      }
      EXPECT_GE(after.composite, before.composite);
      ++checked;
    }
  }
  EXPECT_GE(checked, 300);
}

TEST(ScoringPropertyTest, RandomTablesMatchOracle) {
  Rng rng(17);
  for (int i = 0; i < 300; ++i) {
    RandomCase c = MakeCase(rng);
    auto oracle = testing::OracleFromRows(c.rows);
    auto expected = BruteForceScore(ToOracle(c.items), oracle);
    PerBoundary exact = normalise_scores_exact(accumulate_pressures(c.items, c.table),
                                               c.items, c.table);
    for (std::size_t b = 0; b < kBoundaryCount; ++b) {
      EXPECT_NEAR(exact[b], expected.exact[b], 0.05);
    }
    EXPECT_NEAR(composite_exact(exact), expected.composite, 0.05);
  }
}

}  // namespace
}  // namespace ecobee
