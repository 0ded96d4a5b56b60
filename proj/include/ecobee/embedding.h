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

#ifndef ECOBEE_EMBEDDING_H_
#define ECOBEE_EMBEDDING_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ecobee/graph.h"
#include "ecobee/walks.h"

namespace ecobee {

// Everything that determines a trained model besides the graph and seed.
struct EmbeddingHyperparameters {
  // walks
  double p = 1.0;
  double q = 0.5;
  std::size_t walks_per_node = 10;
  std::size_t walk_length = 20;
  // skip-gram with negative sampling
  std::size_t dimension = 64;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;  // decays linearly over training

  bool operator==(const EmbeddingHyperparameters&) const = default;
};

struct EmbeddingModel {
  std::uint64_t seed = 0;
  EmbeddingHyperparameters hyperparameters;
  std::vector<std::string> nodes;
  std::size_t dimension = 0;
  std::vector<double> vectors;          // node embeddings, row-major
  std::vector<double> context_vectors;  // SGNS output vectors, row-major

  std::span<const double> Vector(NodeIndex n) const {
    return {vectors.data() + n * dimension, dimension};
  }
  std::span<const double> ContextVector(NodeIndex n) const {
    return {context_vectors.data() + n * dimension, dimension};
  }
  double Cosine(NodeIndex a, NodeIndex b) const;

  bool operator==(const EmbeddingModel&) const = default;
};

double CosineSimilarity(std::span<const double> a, std::span<const double> b);

struct SgnsParams {
  std::size_t dimension = 64;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;
  std::uint64_t seed = 0;
};

struct TrainingResult {
  EmbeddingModel model;
  // Mean per-pair SGNS loss observed during each epoch.
  std::vector<double> epoch_losses;
};

// Single-threaded SGNS over a walk corpus. `node_ids` names every node index
// that may appear in the corpus. Input vectors start uniform in
// [-0.5/d, 0.5/d], context vectors at zero; negatives are drawn with
// probability proportional to frequency^0.75.
// Errors: kEmptyCorpus, kInvalidParameter (d < 2, zero window/epochs,
// non-positive learning rate, node index out of range).
TrainingResult train_embeddings(const WalkCorpus& corpus,
                                std::span<const std::string> node_ids,
                                const SgnsParams& params);

// Mean SGNS loss of `model` over the corpus, with negatives drawn from a
// fixed `seed` so two models can be compared on identical samples.
double sgns_objective(const WalkCorpus& corpus, const EmbeddingModel& model,
                      std::size_t window, std::size_t negatives,
                      std::uint64_t seed);

// Walks + training with one seed.
TrainingResult train_node2vec(const WeightedGraph& graph,
                              const EmbeddingHyperparameters& hyper,
                              std::uint64_t seed);

// Versioned text format holding hyperparameters, seed, node list and
// row-major vectors. Output is byte-identical for identical models.
std::string SerializeModel(const EmbeddingModel& model);
EmbeddingModel ParseModel(std::string_view text);
void SaveModel(const EmbeddingModel& model, const std::filesystem::path& path);
EmbeddingModel LoadModel(const std::filesystem::path& path);
// Short content hash of the serialised model.
std::string ModelVersion(const EmbeddingModel& model);

}  // namespace ecobee

#endif  // ECOBEE_EMBEDDING_H_
