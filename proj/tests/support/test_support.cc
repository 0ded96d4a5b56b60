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

#include "test_support.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <unistd.h>

#ifndef ECOBEE_TEST_DATA_DIR
#error "ECOBEE_TEST_DATA_DIR must be defined"
#endif

namespace ecobee::testing {
namespace {

const char* const kCodes[9] = {
    "climate_change",         "biosphere_integrity",
    "biogeochemical_flows",   "land_system_change",
    "freshwater_use",         "ocean_acidification",
    "atmospheric_aerosol_loading", "stratospheric_ozone_depletion",
    "novel_entities",
};

std::vector<std::string> Split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::filesystem::path DataDir() { return ECOBEE_TEST_DATA_DIR; }

TempDir::TempDir() {
  static int counter = 0;
  auto base = std::filesystem::temp_directory_path();
  for (;;) {
    char name[64];
    std::snprintf(name, sizeof(name), "ecobee-test-%d-%d", static_cast<int>(::getpid()),
                  counter++);
    path_ = base / name;
    if (std::filesystem::create_directory(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

OracleTable ReadOracleTable(const std::filesystem::path& dir) {
  OracleTable table;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    std::string name = entry.path().filename().string();
    if (name.rfind("factors_", 0) == 0 && entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    std::ifstream in(file);
    std::string line;
    std::getline(in, line);
    std::vector<std::string> header = Split(line);
    std::array<std::size_t, 9> column{};
    for (std::size_t b = 0; b < 9; ++b) {
      auto it = std::find(header.begin(), header.end(), kCodes[b]);
      if (it == header.end()) throw std::runtime_error("oracle: missing column");
      column[b] = static_cast<std::size_t>(it - header.begin());
    }
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::vector<std::string> f = Split(line);
      Weights9 w{};
      for (std::size_t b = 0; b < 9; ++b) w[b] = std::stod(f[column[b]]);
      table.rows[{f[0], f[1]}] = w;
      table.options[f[0]].push_back(f[1]);
    }
  }
  return table;
}

OracleTable OracleFromRows(const std::vector<FactorRow>& rows) {
  OracleTable table;
  for (const auto& r : rows) {
    Weights9 w{};
    for (std::size_t b = 0; b < 9; ++b) w[b] = r.weights[b];
    table.rows[{r.domain, r.option_key}] = w;
    table.options[r.domain].push_back(r.option_key);
  }
  return table;
}

OracleScore BruteForceScore(const std::vector<OracleItem>& items,
                            const OracleTable& table) {
  OracleScore out;
  for (std::size_t b = 0; b < 9; ++b) {
    double pressure = 0.0;
    double p_max = 0.0;
    for (const auto& item : items) {
      pressure += item.quantity * table.rows.at({item.domain, item.option_key})[b];
      double worst = 0.0;
      for (const auto& option : table.options.at(item.domain)) {
        worst = std::max(worst, table.rows.at({item.domain, option})[b]);
      }
      p_max += item.quantity * worst;
    }
    out.pressure[b] = pressure;
    out.p_max[b] = p_max;
    double s = p_max == 0.0 ? 100.0 : 100.0 * (1.0 - pressure / p_max);
    out.exact[b] = std::clamp(s, 0.0, 100.0);
  }
  double sum = 0.0;
  for (double s : out.exact) sum += s;
  out.composite = sum / 9.0;
  return out;
}

std::vector<OracleContribution> BruteForceContributions(
    const std::vector<OracleItem>& items, const OracleTable& table) {
  Weights9 totals{};
  for (const auto& item : items) {
    const auto& w = table.rows.at({item.domain, item.option_key});
    for (std::size_t b = 0; b < 9; ++b) totals[b] += item.quantity * w[b];
  }
  std::vector<OracleContribution> out;
  for (const auto& item : items) {
    const auto& w = table.rows.at({item.domain, item.option_key});
    for (std::size_t b = 0; b < 9; ++b) {
      double p = item.quantity * w[b];
      if (p > 0.0) out.push_back({item.domain, item.option_key, kCodes[b], p, p / totals[b]});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (x.pressure != y.pressure) return x.pressure > y.pressure;
    return std::tie(x.domain, x.option_key, x.boundary_code) <
           std::tie(y.domain, y.option_key, y.boundary_code);
  });
  return out;
}

std::vector<FactorRow> RandomFactorRows(Rng& rng, std::size_t domains,
                                        std::size_t max_options, bool zero_first) {
  std::vector<FactorRow> rows;
  for (std::size_t d = 0; d < domains; ++d) {
    std::size_t options = 1 + rng.Below(max_options);
    for (std::size_t o = 0; o < options; ++o) {
      FactorRow row;
      row.domain = "d" + std::to_string(d);
      row.option_key = "o" + std::to_string(o);
      for (auto& w : row.weights) {
        w = (zero_first && o == 0) || rng.Below(3) == 0 ? 0.0 : rng.Uniform(0.0, 10.0);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

Cohort PilotCohort() {
  constexpr std::size_t kSize = 52;
  constexpr double kMean = 50.9, kSd = 7.7, kTop = 62.0, kBottom = 36.0;
  constexpr std::size_t kInner = kSize - 2;

  // Affine map a + b*z for the inner points so that, with both endpoints
  // fixed, the whole set hits the target mean and population SD.
  const double a = (kSize * kMean - kTop - kBottom) / kInner;
  const double total_sq = kSize * (kSd * kSd + kMean * kMean);
  const double b = std::sqrt((total_sq - kTop * kTop - kBottom * kBottom) / kInner - a * a);

  // Start from a linear ramp, then standardise and clip until the shape fits
  // strictly inside (bottom, top).
  std::vector<double> x(kInner);
  for (std::size_t j = 0; j < kInner; ++j) x[j] = static_cast<double>(j);
  std::vector<double> values(kInner);
  for (int iter = 0; iter < 1000; ++iter) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= kInner;
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    double sd = std::sqrt(var / kInner);
    bool inside = true;
    for (std::size_t j = 0; j < kInner; ++j) {
      values[j] = a + b * (x[j] - mean) / sd;
      if (values[j] <= kBottom + 0.5 || values[j] >= kTop - 0.5) inside = false;
    }
    if (inside) break;
    for (std::size_t j = 0; j < kInner; ++j) {
      x[j] = std::clamp(values[j], kBottom + 0.6, kTop - 0.6);
    }
  }
  for (double v : values) {
    if (!(v > kBottom && v < kTop)) throw std::runtime_error("cohort shape did not converge");
  }

  std::vector<double> composites = {kTop};
  composites.insert(composites.end(), values.begin(), values.end());
  composites.push_back(kBottom);

  // Per-boundary offsets summing to zero keep each entry's composite equal to
  // its boundary mean.
  const Weights9 offsets = {-2.3, 2.7, -0.9, 0.575, -0.9, 0.575, -0.9, 0.575, 0.575};

  Cohort cohort;
  cohort.mean = kMean;
  cohort.sd = kSd;
  cohort.top = kTop;
  cohort.bottom = kBottom;
  for (std::size_t i = 0; i < kSize; ++i) {
    PerBoundary scores{};
    for (std::size_t k = 0; k < 9; ++k) scores[k] = composites[i] + offsets[k];
    char name[32];
    std::snprintf(name, sizeof(name), "student_%02zu", i);
    LeaderboardEntry e;
    e.pseudonym = name;
    e.campus = i % 2 == 0 ? "main_campus" : "city_campus";
    e.composite = composites[i];
    e.boundary_scores = BoundaryScores(scores);
    e.submitted_at = 1760000000 + static_cast<std::int64_t>(i);
    cohort.entries.push_back(std::move(e));
  }
  return cohort;
}

std::vector<LeaderboardEntry> RandomEntries(Rng& rng, std::size_t n,
                                            const std::vector<std::string>& campuses) {
  std::vector<LeaderboardEntry> out;
  for (std::size_t i = 0; i < n; ++i) {
    PerBoundary scores{};
    double sum = 0.0;
    for (auto& s : scores) {
      s = rng.Uniform(0.0, 100.0);
      sum += s;
    }
    LeaderboardEntry e;
    e.pseudonym = "p" + std::to_string(i);
    e.campus = campuses[rng.Below(campuses.size())];
    e.boundary_scores = BoundaryScores(scores);
    e.composite = sum / 9.0;
    e.submitted_at = 1760000000 + static_cast<std::int64_t>(rng.Below(100000));
    out.push_back(std::move(e));
  }
  return out;
}

OracleSummary BruteForceSummary(const std::vector<LeaderboardEntry>& entries) {
  OracleSummary out;
  double m2 = 0.0;
  out.top = -1.0;
  for (const auto& e : entries) {
    ++out.n;
    double delta = e.composite - out.mean;
    out.mean += delta / static_cast<double>(out.n);
    m2 += delta * (e.composite - out.mean);
    out.top = std::max(out.top, e.composite);
    for (std::size_t b = 0; b < 9; ++b) {
      double v = e.boundary_scores.values()[b];
      out.per_boundary_means[b] += (v - out.per_boundary_means[b]) / static_cast<double>(out.n);
    }
  }
  if (out.n > 0) out.sd = std::sqrt(m2 / static_cast<double>(out.n));
  return out;
}

std::vector<std::size_t> LowestIndices(const Weights9& scores, std::size_t k) {
  std::vector<std::size_t> idx;
  std::vector<bool> used(9, false);
  for (std::size_t round = 0; round < std::min<std::size_t>(k, 9); ++round) {
    std::size_t best = 9;
    for (std::size_t b = 0; b < 9; ++b) {
      if (used[b]) continue;
      if (best == 9 || scores[b] < scores[best]) best = b;
    }
    used[best] = true;
    idx.push_back(best);
  }
  return idx;
}

WeightedGraph ThirtyNodeGraph() {
  WeightedGraph g;
  constexpr std::size_t kNodes = 30;
  for (std::size_t i = 0; i < kNodes; ++i) g.AddNode("n" + std::to_string(i));
  Rng rng(30);
  for (std::size_t i = 0; i < kNodes; ++i) g.AddEdge(i, (i + 1) % kNodes, rng.Uniform(0.5, 2.0));
  for (int chord = 0; chord < 25; ++chord) {
    std::size_t u = rng.Below(kNodes), v = rng.Below(kNodes);
    if (u != v) g.AddEdge(u, v, rng.Uniform(0.1, 3.0));
  }
  return g;
}

WeightedGraph TwoCliques(std::size_t size) {
  WeightedGraph g;
  for (const char* prefix : {"a", "b"}) {
    std::size_t base = g.node_count();
    for (std::size_t i = 0; i < size; ++i) g.AddNode(prefix + std::to_string(i));
    for (std::size_t i = 0; i < size; ++i) {
      for (std::size_t j = i + 1; j < size; ++j) g.AddEdge(base + i, base + j, 1.0);
    }
  }
  return g;
}

double OracleCosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<OracleRec> ExhaustiveRank(const Weights9& scores,
                                      const std::vector<Action>& catalog,
                                      const std::vector<Weights9>& affinity,
                                      const std::set<std::string>& context,
                                      const std::set<std::string>& current_options,
                                      std::size_t k, std::size_t n) {
  std::vector<std::size_t> targets = LowestIndices(scores, k);
  std::vector<OracleRec> all;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const Action& a = catalog[i];
    if (a.replaces_option && current_options.count(*a.replaces_option) > 0) continue;
    bool feasible = a.feasibility_tags.empty();
    for (const auto& tag : a.feasibility_tags) feasible = feasible || context.count(tag) > 0;
    if (!feasible) continue;
    double relevance = 0.0;
    for (std::size_t b : targets) relevance += (100.0 - scores[b]) / 100.0 * affinity[i][b];
    all.push_back({a.id, relevance});
  }
  // Exhaustive pairwise ordering: position = number of records ahead.
  std::vector<OracleRec> ordered(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    std::size_t ahead = 0;
    for (std::size_t j = 0; j < all.size(); ++j) {
      if (all[j].relevance > all[i].relevance ||
          (all[j].relevance == all[i].relevance && all[j].action_id < all[i].action_id)) {
        ++ahead;
      }
    }
    ordered[ahead] = all[i];
  }
  if (ordered.size() > n) ordered.resize(n);
  return ordered;
}

}  // namespace ecobee::testing
