#pragma once

#include <cstdint>
#include <vector>

#include "clwe/corpus.hpp"
#include "clwe/embedding.hpp"

namespace clwe {

struct SgnsConfig {
  int32_t dim = 64;
  int32_t window = 5;
  int32_t negatives = 5;
  int32_t epochs = 5;
  float learning_rate = 0.025f;
  double subsample = 1e-3;  // 0 disables frequent-word subsampling
  uint64_t rng_seed = 1;
  int32_t threads = 1;  // >1 trains hogwild-style and is not deterministic

  void validate() const;
};

struct SgnsStats {
  uint64_t pairs = 0;
  std::vector<double> loss_trace;  // windowed mean of the negative objective
};

// Skip-gram with negative sampling over the vocabulary's id space; corpus
// tokens outside the vocabulary are dropped. Deterministic for threads == 1.
EmbeddingMatrix train_sgns(const Corpus& corpus, const Vocabulary& vocab,
                           const SgnsConfig& cfg, SgnsStats* stats = nullptr);

// Exact-arithmetic objective of one (center, context, negatives) triple:
//   log sigmoid(ctx . cen) + sum_i log sigmoid(-neg_i . cen)
// The trainer itself uses the usual table-quantized sigmoid; these two are
// for verification against finite differences.
double sgns_pair_objective(const float* center, const float* context,
                           const float* const* negatives, int n_neg,
                           int32_t dim);
void sgns_pair_gradients(const float* center, const float* context,
                         const float* const* negatives, int n_neg, int32_t dim,
                         double* g_center, double* g_context,
                         double** g_negatives);

}  // namespace clwe
