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

// Admin CLI: factor validation, embedding rebuilds, summary export, serving.

#include <csignal>
#include <iostream>
#include <memory>

#include <CLI11.hpp>
#include <httplib.h>
#include <spdlog/spdlog.h>

#include "ecobee/action_graph.h"
#include "ecobee/api_service.h"
#include "ecobee/config.h"
#include "ecobee/embedding.h"
#include "ecobee/error.h"
#include "ecobee/factor_table.h"
#include "ecobee/leaderboard.h"

namespace ecobee {
namespace {

httplib::Server* g_server = nullptr;

int ValidateFactors(const std::string& dir) {
  auto findings = ValidateFactorDirectory(dir);
  if (!findings.empty()) {
    for (const auto& f : findings) std::cerr << f.ToString() << "\n";
    return 1;
  }
  FactorTable table = load_factor_tables(dir);
  std::cout << "ok: " << table.domains().size() << " domains, " << table.size()
            << " rows, version " << table.version() << "\n";
  return 0;
}

int RebuildEmbeddings(const std::string& config_path, const std::string& catalog,
                      std::optional<std::uint64_t> seed, const std::string& out) {
  ServiceConfig config;
  if (!config_path.empty()) config = ServiceConfig::Load(config_path);
  std::filesystem::path catalog_path = catalog.empty() ? config.action_catalog : std::filesystem::path(catalog);
  if (catalog_path.empty()) throw Error(ErrorCode::kInvalidConfig, "no action catalog given");
  std::filesystem::path out_path = out.empty() ? config.model_file : std::filesystem::path(out);
  if (out_path.empty()) throw Error(ErrorCode::kInvalidConfig, "no output path given");

  ActionGraph graph = build_action_graph(LoadActionCatalog(catalog_path));
  auto result = train_node2vec(graph.graph, config.hyperparameters, seed.value_or(config.seed));
  SaveModel(result.model, out_path);
  std::cout << "wrote " << out_path.string() << " (" << graph.graph.node_count() << " nodes, "
            << "version " << ModelVersion(result.model) << ")\n";
  return 0;
}

int ExportSummary(const std::string& config_path, const std::string& campus) {
  ServiceConfig config = ServiceConfig::Load(config_path);
  std::shared_ptr<LeaderboardStore> store;
  if (config.leaderboard_db.empty()) {
    store = std::make_shared<InMemoryLeaderboardStore>();
  } else {
    store = std::make_shared<SqliteLeaderboardStore>(config.leaderboard_db);
  }
  Leaderboard board(store, config.composite_weights);
  std::optional<std::string> filter;
  if (!campus.empty()) filter = campus;
  std::cout << ToJson(board.summary(filter, config.k_min)).dump() << "\n";
  return 0;
}

int Serve(const std::string& config_path) {
  ServiceConfig config = ServiceConfig::Load(config_path);
  auto service = ApiService::FromConfig(config);
  httplib::Server server;
  service->Mount(server);
  g_server = &server;
  std::signal(SIGINT, [](int) { if (g_server) g_server->stop(); });
  std::signal(SIGTERM, [](int) { if (g_server) g_server->stop(); });
  spdlog::info("listening on {}:{}", config.listen_host, config.listen_port);
  if (!server.listen(config.listen_host, config.listen_port)) {
    throw Error(ErrorCode::kIoError, "cannot listen on " + config.listen_host + ":" +
                                         std::to_string(config.listen_port));
  }
  return 0;
}

}  // namespace
}  // namespace ecobee

int main(int argc, char** argv) {
  CLI::App app{"Eco-Bee administration"};
  app.require_subcommand(1);

  std::string dir;
  auto* validate = app.add_subcommand("validate-factors", "Check factor CSVs in a directory");
  validate->add_option("dir", dir, "Directory of factors_<domain>.csv files")->required();

  std::string config, catalog, out, campus;
  std::optional<std::uint64_t> seed;
  auto* rebuild = app.add_subcommand("rebuild-embeddings", "Train and save the action embedding");
  rebuild->add_option("--config", config, "Service config file");
  rebuild->add_option("--catalog", catalog, "Action catalog CSV (overrides config)");
  rebuild->add_option("--seed", seed, "Random seed (overrides config)");
  rebuild->add_option("--out", out, "Model output path (overrides config model_file)");

  auto* summary = app.add_subcommand("export-summary", "Print the leaderboard summary as JSON");
  summary->add_option("--config", config, "Service config file")->required();
  summary->add_option("--campus", campus, "Campus filter");

  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--config", config, "Service config file")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*validate) return ecobee::ValidateFactors(dir);
    if (*rebuild) return ecobee::RebuildEmbeddings(config, catalog, seed, out);
    if (*summary) return ecobee::ExportSummary(config, campus);
    if (*serve) return ecobee::Serve(config);
  } catch (const ecobee::Error& e) {
    std::cerr << "error [" << e.code_name() << "]: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
