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

// Python bindings. Structured results cross the boundary as JSON text and
// are decoded by the ecobee package.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ecobee/action_graph.h"
#include "ecobee/api_service.h"
#include "ecobee/config.h"
#include "ecobee/embedding.h"
#include "ecobee/error.h"
#include "ecobee/factor_table.h"
#include "ecobee/intake.h"
#include "ecobee/leaderboard.h"
#include "ecobee/recommend.h"
#include "ecobee/scoring.h"

namespace py = pybind11;

namespace ecobee {
namespace {

std::string ScoreQuiz(const FactorTable& table, const std::map<std::string, std::string>& quiz) {
  return ToJson(score(canonicalise_quiz(quiz, table), table)).dump();
}

std::vector<std::string> ValidateFactors(const std::filesystem::path& dir) {
  std::vector<std::string> out;
  for (const auto& f : ValidateFactorDirectory(dir)) out.push_back(f.ToString());
  return out;
}

std::string TrainModel(const std::filesystem::path& catalog, std::uint64_t seed,
                       const std::optional<std::filesystem::path>& out) {
  ActionGraph graph = build_action_graph(LoadActionCatalog(catalog));
  EmbeddingModel model = train_node2vec(graph.graph, {}, seed).model;
  if (out) SaveModel(model, *out);
  return ModelVersion(model);
}

std::string Recommend(const std::filesystem::path& catalog,
                      const std::map<std::string, double>& scores,
                      const std::optional<std::filesystem::path>& model_file,
                      const std::vector<std::string>& context,
                      const std::vector<std::string>& current_options, std::size_t n,
                      std::size_t k) {
  ActionGraph graph = build_action_graph(LoadActionCatalog(catalog));
  RankRequest req;
  req.feasibility_context.insert(context.begin(), context.end());
  req.current_options.insert(current_options.begin(), current_options.end());
  req.n_recs = n;
  req.k_boundaries = k;
  BoundaryScores user = BoundaryScores::FromCodes(scores);
  std::vector<Recommendation> recs;
  if (model_file) {
    recs = rank_recommendations(user, graph, LoadModel(*model_file), req);
  } else {
    recs = fallback_rank(user, graph.actions, req);
  }
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : recs) out.push_back(ToJson(r));
  return out.dump();
}

class PyLeaderboard {
 public:
  explicit PyLeaderboard(const std::optional<std::filesystem::path>& db)
      : board_(db ? std::shared_ptr<LeaderboardStore>(
                        std::make_shared<SqliteLeaderboardStore>(*db))
                  : std::make_shared<InMemoryLeaderboardStore>()) {}

  std::size_t Submit(const std::string& pseudonym, const std::string& campus, double composite,
                     const std::map<std::string, double>& boundaries, std::int64_t at) {
    LeaderboardEntry e{pseudonym, campus, composite, BoundaryScores::FromCodes(boundaries), at};
    return board_.submit_score(e).rank_estimate;
  }

  std::string Summary(const std::optional<std::string>& campus, std::size_t k_min) const {
    return ToJson(board_.summary(campus, k_min)).dump();
  }

  std::vector<std::pair<std::string, double>> Top(std::size_t n,
                                                  const std::optional<std::string>& campus) const {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& e : board_.top_n(n, campus)) out.emplace_back(e.pseudonym, e.composite);
    return out;
  }

  std::size_t Size() const { return board_.size(); }

 private:
  Leaderboard board_;
};

}  // namespace
}  // namespace ecobee

PYBIND11_MODULE(_core, m) {
  using namespace ecobee;
  m.doc() = "Eco-Bee scoring, recommendation and leaderboard core";

  static py::exception<Error> error_type(m, "EcoBeeError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc =
          py::handle(error_type.ptr())(std::string(e.code_name()) + ": " + e.what());
      exc.attr("code") = std::string(e.code_name());
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  m.def("boundary_codes", &boundary_codes, "The nine boundary codes in canonical order.");

  py::class_<FactorTable>(m, "FactorTable")
      .def(py::init(&load_factor_tables), py::arg("factor_dir"))
      .def_property_readonly("version", &FactorTable::version)
      .def_property_readonly("domains",
                             [](const FactorTable& t) {
                               return std::vector<std::string>(t.domains().begin(),
                                                               t.domains().end());
                             })
      .def("options", &FactorTable::Options, py::arg("domain"))
      .def("__len__", &FactorTable::size)
      .def("_score_json", &ScoreQuiz, py::arg("quiz"));

  m.def("validate_factors", &ValidateFactors, py::arg("factor_dir"));
  m.def("train_model", &TrainModel, py::arg("catalog"), py::arg("seed") = 42,
        py::arg("out") = std::nullopt);
  m.def("_recommend_json", &Recommend, py::arg("catalog"), py::arg("scores"),
        py::arg("model_file") = std::nullopt, py::arg("context") = std::vector<std::string>{},
        py::arg("current_options") = std::vector<std::string>{}, py::arg("n") = 5,
        py::arg("k") = 3);

  py::class_<PyLeaderboard>(m, "Leaderboard")
      .def(py::init<const std::optional<std::filesystem::path>&>(),
           py::arg("db") = std::nullopt)
      .def("submit", &PyLeaderboard::Submit, py::arg("pseudonym"), py::arg("campus"),
           py::arg("composite"), py::arg("boundaries"), py::arg("submitted_at") = 0)
      .def("_summary_json", &PyLeaderboard::Summary, py::arg("campus") = std::nullopt,
           py::arg("k_min") = kDefaultKMin)
      .def("top", &PyLeaderboard::Top, py::arg("n") = 10, py::arg("campus") = std::nullopt)
      .def("__len__", &PyLeaderboard::Size);

  py::class_<ApiService>(m, "Service")
      .def(py::init([](const std::filesystem::path& config) {
             return ApiService::FromConfig(ServiceConfig::Load(config));
           }),
           py::arg("config"))
      .def(
          "handle",
          [](ApiService& s, const std::string& method, const std::string& path,
             const std::string& body, const std::map<std::string, std::string>& query) {
            HttpResponse r;
            {
              py::gil_scoped_release release;
              r = s.Handle(HttpRequest{method, path, query, body});
            }
            return std::make_pair(r.status, r.body);
          },
          py::arg("method"), py::arg("path"), py::arg("body") = "",
          py::arg("query") = std::map<std::string, std::string>{});
}
