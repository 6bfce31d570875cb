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

// Generated corpora for the acceptance suite and benchmarks.
//
// A "world" is a set of towns, each with one neighbouring municipality, a
// region and an elevation. Every neighbour has a same-class homonym with a
// lower id, so a neighbour cell can only be linked through its row's town.

#ifndef AMALGAM_TESTS_SYNTHETIC_H_
#define AMALGAM_TESTS_SYNTHETIC_H_

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "amalgam/kg.h"
#include "amalgam/snapshot.h"
#include "amalgam/table.h"

namespace synthetic {

inline const amalgam::EntityId kTownClass("Q700001");
inline const amalgam::EntityId kMunicipalityClass("Q700002");
inline const amalgam::EntityId kRegionClass("Q700003");

struct Row {
  std::string town, neighbour, region;
  int elevation;
};

struct World {
  std::vector<amalgam::EntityRecord> records;
  std::vector<Row> rows;
};

class NameMaker {
 public:
  explicit NameMaker(std::mt19937 &rng) : rng_(rng) {}

  std::string Word() {
    static const char *kSyllables[] = {
        "ka", "ro", "ven", "dal", "mi", "tor", "sun", "bel", "gra", "ne", "lis",
        "pe", "ham", "ford", "ton", "vil", "mer", "by", "wick", "ash", "ley",
        "cot", "bran", "dor", "el", "fin", "gar", "hol", "ir", "jas", "kel",
        "lan", "mor", "nor", "os", "pra", "quin", "ril", "sal", "tam"};
    constexpr size_t kCount = sizeof(kSyllables) / sizeof(kSyllables[0]);
    std::string w;
    int n = 2 + static_cast<int>(rng_() % 2);
    for (int i = 0; i < n; ++i) w += kSyllables[rng_() % kCount];
    w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    return w;
  }

  // Single words, or a word with a common place-name prefix or suffix.
  std::string Place() {
    static const char *kPrefixes[] = {"Fort", "Grande", "Mount", "Port", "Saint"};
    static const char *kSuffixes[] = {"Lake", "River", "County", "Falls", "Creek",
                                      "Heights", "Valley"};
    const unsigned kind = rng_() % 10;
    if (kind < 4) return Word();
    if (kind < 6) return std::string(kPrefixes[rng_() % 5]) + " " + Word();
    return Word() + " " + kSuffixes[rng_() % 7];
  }

  // A place name not used before (case-insensitively).
  std::string Fresh() {
    for (;;) {
      std::string s = Place();
      std::string key = s;
      for (char &c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      if (used_.insert(key).second) return s;
    }
  }

 private:
  std::mt19937 &rng_;
  std::set<std::string> used_;
};

inline amalgam::EntityRecord MakeRecord(
    uint64_t id, const std::string &label,
    std::map<std::string, std::vector<amalgam::ClaimValue>> claims) {
  amalgam::EntityRecord r;
  r.id = amalgam::EntityId("Q" + std::to_string(id));
  r.label = label;
  r.claims = std::move(claims);
  r.classes = amalgam::DeriveClasses(r.claims);
  return r;
}

inline World MakeWorld(size_t n_rows, uint32_t seed, size_t n_regions = 6) {
  using amalgam::EntityRef;
  std::mt19937 rng(seed);
  NameMaker names(rng);
  World w;
  std::vector<EntityRef> regions;
  for (size_t i = 0; i < n_regions; ++i) {
    std::string label = names.Fresh();
    auto rec = MakeRecord(710000 + i, label, {{"P31", {EntityRef{kRegionClass, ""}}}});
    regions.push_back(EntityRef{rec.id, label});
    w.records.push_back(std::move(rec));
  }
  for (size_t i = 0; i < n_rows; ++i) {
    const std::string town = names.Fresh();
    const std::string neighbour = names.Fresh();
    const EntityRef &region = regions[rng() % regions.size()];
    const int elevation = 200 + static_cast<int>(rng() % 1800);
    // Decoy first, so it ranks ahead of the real neighbour.
    w.records.push_back(MakeRecord(
        730000 + 2 * i, neighbour,
        {{"P31", {EntityRef{kMunicipalityClass, ""}}},
         {"P131", {regions[(rng() % regions.size())]}}}));
    auto real = MakeRecord(730000 + 2 * i + 1, neighbour,
                           {{"P31", {EntityRef{kMunicipalityClass, ""}}}, {"P131", {region}}});
    EntityRef neighbour_ref{real.id, neighbour};
    w.records.push_back(std::move(real));
    w.records.push_back(MakeRecord(720000 + i, town,
                                   {{"P31", {EntityRef{kTownClass, ""}}},
                                    {"P47", {neighbour_ref}},
                                    {"P131", {region}},
                                    {"P2044", {amalgam::MakeQuantity(elevation)}}}));
    w.rows.push_back({town, neighbour, region.label, elevation});
  }
  std::sort(w.records.begin(), w.records.end(),
            [](const auto &a, const auto &b) { return a.id < b.id; });
  return w;
}

enum class Typo { kSubstitute, kDelete, kInsert, kTranspose };

inline const char *TypoName(Typo t) {
  switch (t) {
    case Typo::kSubstitute: return "substitute";
    case Typo::kDelete: return "delete";
    case Typo::kInsert: return "insert";
    case Typo::kTranspose: return "transpose";
  }
  return "?";
}

// One-character edit at a letter position; never returns the input.
inline std::string InjectTypo(const std::string &s, Typo kind, std::mt19937 &rng) {
  std::vector<size_t> letters;
  for (size_t i = 0; i < s.size(); ++i) {
    if (std::isalpha(static_cast<unsigned char>(s[i]))) letters.push_back(i);
  }
  auto random_letter = [&](char avoid) {
    char c;
    do c = static_cast<char>('a' + rng() % 26);
    while (std::tolower(static_cast<unsigned char>(avoid)) == c);
    return c;
  };
  for (;;) {
    size_t p = letters[rng() % letters.size()];
    std::string out = s;
    switch (kind) {
      case Typo::kSubstitute: out[p] = random_letter(s[p]); break;
      case Typo::kDelete: out.erase(p, 1); break;
      case Typo::kInsert: out.insert(out.begin() + p, random_letter('\0')); break;
      case Typo::kTranspose:
        if (p + 1 >= s.size() || !std::isalpha(static_cast<unsigned char>(s[p + 1])) ||
            std::tolower(static_cast<unsigned char>(s[p])) ==
                std::tolower(static_cast<unsigned char>(s[p + 1]))) {
          continue;
        }
        std::swap(out[p], out[p + 1]);
        break;
    }
    return out;
  }
}

// Splits rows into `n_tables` CSV tables "towns_<k>" with columns town,
// neighbour, region, elevation. `heads` overrides column 0 when non-empty.
inline void WriteCorpus(const World &w, const std::filesystem::path &dir, size_t n_tables,
                        const std::vector<std::string> &heads = {}) {
  std::filesystem::create_directories(dir / "tables");
  std::string cta, cea;
  const size_t per = (w.rows.size() + n_tables - 1) / n_tables;
  for (size_t t = 0; t < n_tables; ++t) {
    const std::string id = "towns_" + std::to_string(t);
    std::string csv;
    size_t local = 0;
    for (size_t i = t * per; i < std::min(w.rows.size(), (t + 1) * per); ++i, ++local) {
      const Row &r = w.rows[i];
      csv += amalgam::QuoteCsv(heads.empty() ? r.town : heads[i]) + "," +
             amalgam::QuoteCsv(r.neighbour) + "," + amalgam::QuoteCsv(r.region) + "," +
             std::to_string(r.elevation) + "\n";
      for (int c = 0; c < 3; ++c) {
        cea += id + "," + std::to_string(local) + "," + std::to_string(c) + "\n";
      }
    }
    amalgam::WriteFileAtomic(dir / "tables" / (id + ".csv"), csv);
    for (int c = 0; c < 3; ++c) cta += id + "," + std::to_string(c) + "\n";
  }
  amalgam::WriteFileAtomic(dir / "cta_targets.csv", cta);
  amalgam::WriteFileAtomic(dir / "cea_targets.csv", cea);
  amalgam::WriteSnapshot(dir / "snapshot.jsonl", w.records);
}

}  // namespace synthetic

#endif  // AMALGAM_TESTS_SYNTHETIC_H_
