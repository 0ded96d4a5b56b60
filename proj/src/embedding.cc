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

#include "ecobee/embedding.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ecobee/csv.h"
#include "ecobee/digest.h"
#include "ecobee/error.h"
#include "ecobee/random.h"

namespace ecobee {
namespace {

constexpr std::string_view kModelMagic = "ecobee-embedding-model v1";

// log(sigmoid(x)) without overflow.
double LogSigmoid(double x) {
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

double Dot(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) s += a[i] * b[i];
  return s;
}

// Draws node indices with probability proportional to count^0.75.
class NegativeSampler {
 public:
  NegativeSampler(const WalkCorpus& corpus, std::size_t node_count) {
    std::vector<double> counts(node_count, 0.0);
    for (const Walk& walk : corpus) {
      for (NodeIndex n : walk) counts[n] += 1.0;
    }
    cumulative_.resize(node_count);
    double running = 0.0;
    for (std::size_t i = 0; i < node_count; ++i) {
      running += std::pow(counts[i], 0.75);
      cumulative_[i] = running;
    }
  }

  NodeIndex Draw(Rng& rng) const {
    double target = rng.Uniform() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    if (it == cumulative_.end()) --it;
    return static_cast<NodeIndex>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
};

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void CheckCorpus(const WalkCorpus& corpus, std::size_t node_count) {
  std::size_t tokens = 0;
  for (const Walk& walk : corpus) {
    for (NodeIndex n : walk) {
      if (n >= node_count) {
        throw Error(ErrorCode::kInvalidParameter,
                    "corpus references node index " + std::to_string(n) +
                        " outside the node list");
      }
    }
    tokens += walk.size();
  }
  if (tokens == 0) throw Error(ErrorCode::kEmptyCorpus, "walk corpus is empty");
}

}  // namespace

double CosineSimilarity(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double EmbeddingModel::Cosine(NodeIndex a, NodeIndex b) const {
  return CosineSimilarity(Vector(a), Vector(b));
}

TrainingResult train_embeddings(const WalkCorpus& corpus,
                                std::span<const std::string> node_ids,
                                const SgnsParams& params) {
  if (corpus.empty()) throw Error(ErrorCode::kEmptyCorpus, "walk corpus is empty");
  if (params.dimension < 2) {
    throw Error(ErrorCode::kInvalidParameter, "dimension must be at least 2");
  }
  if (params.window == 0 || params.epochs == 0 ||
      !(params.learning_rate > 0.0)) {
    throw Error(ErrorCode::kInvalidParameter,
                "window, epochs and learning_rate must be positive");
  }
  const std::size_t n = node_ids.size();
  const std::size_t d = params.dimension;
  CheckCorpus(corpus, n);

  TrainingResult result;
  EmbeddingModel& model = result.model;
  model.seed = params.seed;
  model.hyperparameters.dimension = d;
  model.hyperparameters.window = params.window;
  model.hyperparameters.negatives = params.negatives;
  model.hyperparameters.epochs = params.epochs;
  model.hyperparameters.learning_rate = params.learning_rate;
  model.nodes.assign(node_ids.begin(), node_ids.end());
  model.dimension = d;
  model.vectors.resize(n * d);
  model.context_vectors.assign(n * d, 0.0);

  Rng rng(params.seed);
  const double bound = 0.5 / static_cast<double>(d);
  for (double& v : model.vectors) v = rng.Uniform(-bound, bound);

  NegativeSampler sampler(corpus, n);
  std::size_t tokens_per_epoch = 0;
  for (const Walk& walk : corpus) tokens_per_epoch += walk.size();
  const double total_tokens =
      static_cast<double>(tokens_per_epoch) * static_cast<double>(params.epochs);

  std::vector<double> grad(d);
  std::size_t processed = 0;
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    double loss = 0.0;
    std::size_t pairs = 0;
    for (const Walk& walk : corpus) {
      for (std::size_t i = 0; i < walk.size(); ++i, ++processed) {
        double lr = params.learning_rate *
                    std::max(1e-4, 1.0 - static_cast<double>(processed) / total_tokens);
        double* center = model.vectors.data() + walk[i] * d;
        std::size_t lo = i >= params.window ? i - params.window : 0;
        std::size_t hi = std::min(walk.size() - 1, i + params.window);
        for (std::size_t j = lo; j <= hi; ++j) {
          if (j == i) continue;
          std::fill(grad.begin(), grad.end(), 0.0);
          for (std::size_t s = 0; s <= params.negatives; ++s) {
            NodeIndex target;
            double label;
            if (s == 0) {
              target = walk[j];
              label = 1.0;
            } else {
              target = sampler.Draw(rng);
              if (target == walk[j]) continue;
              label = 0.0;
            }
            double* out = model.context_vectors.data() + target * d;
            double x = Dot(center, out, d);
            loss -= label == 1.0 ? LogSigmoid(x) : LogSigmoid(-x);
            double g = (label - Sigmoid(x)) * lr;
            for (std::size_t k = 0; k < d; ++k) grad[k] += g * out[k];
            for (std::size_t k = 0; k < d; ++k) out[k] += g * center[k];
          }
          for (std::size_t k = 0; k < d; ++k) center[k] += grad[k];
          ++pairs;
        }
      }
    }
    result.epoch_losses.push_back(pairs == 0 ? 0.0 : loss / static_cast<double>(pairs));
  }
  return result;
}

double sgns_objective(const WalkCorpus& corpus, const EmbeddingModel& model,
                      std::size_t window, std::size_t negatives,
                      std::uint64_t seed) {
  const std::size_t n = model.nodes.size();
  const std::size_t d = model.dimension;
  CheckCorpus(corpus, n);
  NegativeSampler sampler(corpus, n);
  Rng rng(seed);
  double loss = 0.0;
  std::size_t pairs = 0;
  for (const Walk& walk : corpus) {
    for (std::size_t i = 0; i < walk.size(); ++i) {
      const double* center = model.vectors.data() + walk[i] * d;
      std::size_t lo = i >= window ? i - window : 0;
      std::size_t hi = std::min(walk.size() - 1, i + window);
      for (std::size_t j = lo; j <= hi; ++j) {
        if (j == i) continue;
        loss -= LogSigmoid(Dot(center, model.context_vectors.data() + walk[j] * d, d));
        for (std::size_t s = 0; s < negatives; ++s) {
          NodeIndex neg = sampler.Draw(rng);
          if (neg == walk[j]) continue;
          loss -= LogSigmoid(-Dot(center, model.context_vectors.data() + neg * d, d));
        }
        ++pairs;
      }
    }
  }
  return pairs == 0 ? 0.0 : loss / static_cast<double>(pairs);
}

TrainingResult train_node2vec(const WeightedGraph& graph,
                              const EmbeddingHyperparameters& hyper,
                              std::uint64_t seed) {
  WalkParams walk_params{hyper.p, hyper.q, hyper.walks_per_node, hyper.walk_length,
                         seed};
  WalkCorpus corpus = generate_walks(graph, walk_params);
  SgnsParams sgns{hyper.dimension, hyper.window, hyper.negatives, hyper.epochs,
                  hyper.learning_rate, seed};
  TrainingResult result = train_embeddings(corpus, graph.ids(), sgns);
  result.model.hyperparameters = hyper;
  return result;
}

std::string SerializeModel(const EmbeddingModel& model) {
  const auto& h = model.hyperparameters;
  std::string out;
  out += std::string(kModelMagic) + "\n";
  out += "seed " + std::to_string(model.seed) + "\n";
  out += "dimension " + std::to_string(model.dimension) + "\n";
  out += "p " + FormatDouble(h.p) + "\n";
  out += "q " + FormatDouble(h.q) + "\n";
  out += "walks_per_node " + std::to_string(h.walks_per_node) + "\n";
  out += "walk_length " + std::to_string(h.walk_length) + "\n";
  out += "window " + std::to_string(h.window) + "\n";
  out += "negatives " + std::to_string(h.negatives) + "\n";
  out += "epochs " + std::to_string(h.epochs) + "\n";
  out += "learning_rate " + FormatDouble(h.learning_rate) + "\n";
  out += "nodes " + std::to_string(model.nodes.size()) + "\n";
  auto rows = [&](const char* tag, const std::vector<double>& data) {
    for (std::size_t n = 0; n < model.nodes.size(); ++n) {
      out += tag;
      out += " " + model.nodes[n];
      for (std::size_t k = 0; k < model.dimension; ++k) {
        out += " " + FormatDouble(data[n * model.dimension + k]);
      }
      out += "\n";
    }
  };
  rows("vector", model.vectors);
  rows("context", model.context_vectors);
  return out;
}

EmbeddingModel ParseModel(std::string_view text) {
  std::istringstream in{std::string(text)};
  auto fail = [](const std::string& what) {
    return Error(ErrorCode::kInvalidModelFile, "model file: " + what);
  };
  std::string line;
  if (!std::getline(in, line) || line != kModelMagic) {
    throw fail("missing or unsupported version header");
  }
  auto read_field = [&](const std::string& name) {
    std::string key, value;
    if (!std::getline(in, line)) throw fail("truncated before '" + name + "'");
    std::istringstream ls(line);
    ls >> key >> value;
    if (key != name || value.empty()) throw fail("expected '" + name + "'");
    return value;
  };
  auto to_size = [&](const std::string& s, const std::string& name) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw fail("bad " + name);
    return v;
  };
  auto to_double = [&](const std::string& s, const std::string& name) {
    auto v = ParseDouble(s);
    if (!v || !std::isfinite(*v)) throw fail("bad " + name);
    return *v;
  };

  EmbeddingModel model;
  auto& h = model.hyperparameters;
  model.seed = to_size(read_field("seed"), "seed");
  model.dimension = to_size(read_field("dimension"), "dimension");
  h.dimension = model.dimension;
  h.p = to_double(read_field("p"), "p");
  h.q = to_double(read_field("q"), "q");
  h.walks_per_node = to_size(read_field("walks_per_node"), "walks_per_node");
  h.walk_length = to_size(read_field("walk_length"), "walk_length");
  h.window = to_size(read_field("window"), "window");
  h.negatives = to_size(read_field("negatives"), "negatives");
  h.epochs = to_size(read_field("epochs"), "epochs");
  h.learning_rate = to_double(read_field("learning_rate"), "learning_rate");
  std::size_t count = to_size(read_field("nodes"), "nodes");
  if (model.dimension < 2) throw fail("dimension must be at least 2");

  auto read_rows = [&](const std::string& tag, std::vector<double>& data,
                       bool record_ids) {
    data.reserve(count * model.dimension);
    for (std::size_t n = 0; n < count; ++n) {
      if (!std::getline(in, line)) throw fail("truncated " + tag + " rows");
      std::istringstream ls(line);
      std::string got_tag, id;
      ls >> got_tag >> id;
      if (got_tag != tag || id.empty()) throw fail("expected '" + tag + "' row");
      if (record_ids) {
        model.nodes.push_back(id);
      } else if (model.nodes[n] != id) {
        throw fail("context row order does not match vector rows");
      }
      std::string token;
      for (std::size_t k = 0; k < model.dimension; ++k) {
        if (!(ls >> token)) throw fail("short row for '" + id + "'");
        data.push_back(to_double(token, "vector component"));
      }
      if (ls >> token) throw fail("long row for '" + id + "'");
    }
  };
  read_rows("vector", model.vectors, true);
  read_rows("context", model.context_vectors, false);
  return model;
}

void SaveModel(const EmbeddingModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << SerializeModel(model);
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

EmbeddingModel LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseModel(buffer.str());
}

std::string ModelVersion(const EmbeddingModel& model) {
  return Sha256Hex(SerializeModel(model)).substr(0, 12);
}

}  // namespace ecobee
