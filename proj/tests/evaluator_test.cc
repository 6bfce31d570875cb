// Copyright 2026 The Amalgam Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "amalgam/errors.h"
#include "amalgam/evaluator.h"
#include "gtest/gtest.h"
#include "oracles.h"
#include "test_util.h"

namespace amalgam {
namespace {

using testing_util::FixtureDir;
using testing_util::TempDir;
using testing_util::WriteText;

const std::string kIri = "http://www.wikidata.org/entity/";

TEST(MakeReport, FormulaExample) {
  ScoreReport r = MakeReport(Task::kCea, 10, 8, 8);
  EXPECT_DOUBLE_EQ(r.precision, 1.0);
  EXPECT_DOUBLE_EQ(r.recall, 0.8);
  EXPECT_NEAR(r.f1, 0.8888888889, 1e-9);
}

TEST(MakeReport, ZeroGuards) {
  ScoreReport r = MakeReport(Task::kCea, 10, 0, 0);
  EXPECT_EQ(r.precision, 0);
  EXPECT_EQ(r.recall, 0);
  EXPECT_EQ(r.f1, 0);
  EXPECT_EQ(MakeReport(Task::kCta, 0, 0, 0).f1, 0);
}

TEST(NormalizeIri, AcceptedForms) {
  EXPECT_EQ(NormalizeIri("Q42"), "Q42");
  EXPECT_EQ(NormalizeIri(" http://www.wikidata.org/entity/Q42 "), "Q42");
  EXPECT_EQ(NormalizeIri("https://www.wikidata.org/entity/Q42"), "Q42");
  EXPECT_FALSE(NormalizeIri("q42"));
  EXPECT_FALSE(NormalizeIri("http://example.org/Q42"));
}

TEST(ParseAnnotations, KeysAreNumericOnIndices) {
  auto m = ParseAnnotations("\"t\",\"01\",\"2\",\"Q1\"\n", Task::kCea, "p", false);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.begin()->first, std::string("t\x1f" "1\x1f" "2"));
}

TEST(ParseAnnotations, DuplicatePredictionIsAnError) {
  EXPECT_THROW(ParseAnnotations("t,0,Q1\nt,0,Q2\n", Task::kCta, "p", false),
               DuplicatePrediction);
}

TEST(ParseAnnotations, DuplicateGoldIsMalformed) {
  EXPECT_THROW(ParseAnnotations("t,0,Q1\nt,0,Q1\n", Task::kCta, "g", true), MalformedRow);
}

TEST(ParseAnnotations, MalformedRowReportsLine) {
  try {
    ParseAnnotations("t,0,0,Q1\nt,zero,0,Q2\n", Task::kCea, "pred.csv", false);
    FAIL();
  } catch (const MalformedRow &e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("pred.csv:2"), std::string::npos);
  }
  EXPECT_THROW(ParseAnnotations("t,0\n", Task::kCta, "p", false), MalformedRow);
  EXPECT_THROW(ParseAnnotations("t,0,\n", Task::kCta, "p", false), MalformedRow);
  EXPECT_THROW(ParseAnnotations("t,0,bogus\n", Task::kCta, "g", true), MalformedRow);
}

TEST(Score, TableIdsAreCaseSensitive) {
  auto gold = ParseAnnotations("T,0,Q1\n", Task::kCta, "g", true);
  auto pred = ParseAnnotations("t,0,Q1\n", Task::kCta, "p", false);
  ScoreReport r = Score(pred, gold, Task::kCta);
  EXPECT_EQ(r.submitted, 0u);
  EXPECT_EQ(r.ignored, 1u);
}

TEST(Score, IriFormsAreEquivalent) {
  auto gold = ParseAnnotations("t,0,Q1\nt,1,Q2\n", Task::kCta, "g", true);
  auto pred = ParseAnnotations("t,0," + kIri + "Q1\nt,1,https://www.wikidata.org/entity/Q2\n",
                               Task::kCta, "p", false);
  ScoreReport r = Score(pred, gold, Task::kCta);
  EXPECT_EQ(r.correct, 2u);
  EXPECT_DOUBLE_EQ(r.f1, 1.0);
}

TEST(Score, UnrecognizedPredictionIsWrongNotFatal) {
  auto gold = ParseAnnotations("t,0,Q1\n", Task::kCta, "g", true);
  auto pred = ParseAnnotations("t,0,not-an-iri\n", Task::kCta, "p", false);
  ScoreReport r = Score(pred, gold, Task::kCta);
  EXPECT_EQ(r.submitted, 1u);
  EXPECT_EQ(r.correct, 0u);
}

TEST(Score, RowOrderDoesNotMatter) {
  std::vector<std::string> gold_rows, pred_rows;
  for (int i = 0; i < 30; ++i) {
    gold_rows.push_back("t," + std::to_string(i) + ",0,Q" + std::to_string(i + 1));
    if (i % 3 != 0) {
      pred_rows.push_back("t," + std::to_string(i) + ",0,Q" + std::to_string(i % 4 ? i + 1 : 7));
    }
  }
  auto join = [](const std::vector<std::string> &v) {
    std::string s;
    for (const auto &x : v) s += x + "\n";
    return s;
  };
  auto score = [&] {
    return Score(ParseAnnotations(join(pred_rows), Task::kCea, "p", false),
                 ParseAnnotations(join(gold_rows), Task::kCea, "g", true), Task::kCea);
  };
  ScoreReport base = score();
  std::mt19937 rng(4);
  for (int i = 0; i < 10; ++i) {
    std::shuffle(gold_rows.begin(), gold_rows.end(), rng);
    std::shuffle(pred_rows.begin(), pred_rows.end(), rng);
    ScoreReport r = score();
    EXPECT_EQ(r.correct, base.correct);
    EXPECT_EQ(r.submitted, base.submitted);
    EXPECT_EQ(r.f1, base.f1);
  }
}

TEST(Score, MatchesOracle) {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    std::map<std::string, std::string> gold, pred;
    std::string gold_csv, pred_csv;
    for (int k = 0; k < 40; ++k) {
      std::string key = "t\x1f" + std::to_string(k);
      if (rng() % 4) {
        gold[key] = "Q" + std::to_string(rng() % 3 + 1);
        gold_csv += "t," + std::to_string(k) + "," + gold[key] + "\n";
      }
      if (rng() % 3) {
        pred[key] = "Q" + std::to_string(rng() % 3 + 1);
        pred_csv += "t," + std::to_string(k) + "," + kIri + pred[key] + "\n";
      }
    }
    oracle::Prf expected = oracle::Score(pred, gold);
    ScoreReport r = Score(ParseAnnotations(pred_csv, Task::kCta, "p", false),
                          ParseAnnotations(gold_csv, Task::kCta, "g", true), Task::kCta);
    EXPECT_DOUBLE_EQ(r.precision, expected.precision);
    EXPECT_DOUBLE_EQ(r.recall, expected.recall);
    EXPECT_DOUBLE_EQ(r.f1, expected.f1);
    EXPECT_LE(r.correct, std::min(r.submitted, r.targets));
  }
}

TEST(ScoreFiles, FixtureGoldAgainstItself) {
  ScoreReport r = ScoreFiles(FixtureDir() / "gold_cea.csv", FixtureDir() / "gold_cea.csv",
                             Task::kCea);
  EXPECT_EQ(r.targets, 16u);
  EXPECT_DOUBLE_EQ(r.f1, 1.0);
}

TEST(ScoreFiles, MissingFileIsIoError) {
  TempDir dir;
  EXPECT_THROW(ScoreFiles(dir / "a.csv", FixtureDir() / "gold_cta.csv", Task::kCta), IoError);
}

TEST(ToJson, KeyOrderAndValues) {
  ScoreReport r = MakeReport(Task::kCta, 4, 2, 1);
  EXPECT_EQ(ToJson(r).dump(),
            "{\"task\":\"CTA\",\"targets\":4,\"submitted\":2,\"correct\":1,"
            "\"precision\":0.5,\"recall\":0.25,\"f1\":0.3333333333333333}");
}

TEST(FormatReport, MentionsAllFigures) {
  std::string s = FormatReport(MakeReport(Task::kCea, 10, 8, 8));
  for (const char *needle : {"CEA", "10", "precision", "1.0000", "0.8000", "0.8889"}) {
    EXPECT_NE(s.find(needle), std::string::npos) << needle;
  }
}

}  // namespace
}  // namespace amalgam
