#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "clwe/corpus.hpp"
#include "clwe/embedding.hpp"

namespace clwe {

// Ordered (source_id, target_id) pairs; ids index embedding rows.
struct BilingualDictionary {
  std::vector<std::pair<int32_t, int32_t>> pairs;
  std::vector<float> weights;  // optional; empty means unweighted

  size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
  void add(int32_t src, int32_t tgt) { pairs.emplace_back(src, tgt); }
  // Sorts and removes exact duplicates (weights must be empty).
  void dedup();

  static BilingualDictionary identity(int32_t n);
  // Word-level pairs resolved against two vocabulary orders; pairs with an
  // out-of-vocabulary side are skipped and counted into *oov if given.
  static BilingualDictionary from_word_pairs(
      const WordPairs& pairs, const std::vector<std::string>& src_words,
      const std::vector<std::string>& tgt_words, int64_t* oov = nullptr);
};

enum class MappingMode { kOrthogonal, kUnconstrained };
enum class Retrieval { kCosine, kCsls };
enum class InductionDirection { kForward, kBackward, kUnion };

// d x d transform, row-vector convention: mapped = X * W.
struct MappingResult {
  std::vector<double> w;  // row-major d x d
  int32_t dim = 0;
  BilingualDictionary final_dictionary;
  std::vector<double> objective_trace;
  bool converged = false;
  int32_t iterations = 0;
};

struct SelfLearnConfig {
  int32_t max_iterations = 100;
  double tolerance = 1e-6;  // relative objective improvement
  InductionDirection direction = InductionDirection::kUnion;
  Retrieval retrieval = Retrieval::kCsls;
  int32_t csls_k = 10;
  int32_t induction_cutoff = 4000;  // capped at the vocabulary sizes
  MappingMode mode = MappingMode::kOrthogonal;
  // Stochastic dictionary dropout: each induced pair is discarded with the
  // current dropout probability; whenever the objective stalls the keep
  // probability is divided by dropout_decay (i.e. doubled for 0.5) until
  // dropout reaches zero, after which a stall means convergence.
  double dropout_initial = 0.9;
  double dropout_decay = 0.5;
  uint64_t rng_seed = 1;

  void validate() const;
};

// Length-normalize rows, mean-center columns, length-normalize rows again.
EmbeddingMatrix normalize_for_mapping(const EmbeddingMatrix& emb);

// Unsupervised seed: rows of the intra-lingual similarity matrices, sorted
// descending, act as signatures; each source word is paired with the target
// word whose signature is nearest in Euclidean distance.
BilingualDictionary similarity_distribution_seed(const EmbeddingMatrix& x,
                                                 const EmbeddingMatrix& y,
                                                 int32_t cutoff);

// Minimizes sum ||x_i W - y_i||^2 over the dictionary. Orthogonal mode is
// the Procrustes solution via SVD; unconstrained solves the normal
// equations and throws RankDeficient when they are singular.
std::vector<double> solve_mapping(const EmbeddingMatrix& x,
                                  const EmbeddingMatrix& y,
                                  const BilingualDictionary& dictionary,
                                  MappingMode mode);

// mapped = X * W (row convention), accumulated in double.
EmbeddingMatrix map_embeddings(const EmbeddingMatrix& x,
                               const std::vector<double>& w, int32_t dim);

double mapping_objective(const EmbeddingMatrix& x, const EmbeddingMatrix& y,
                         const std::vector<double>& w, int32_t dim,
                         const BilingualDictionary& dictionary);

// Retrieval scores of query rows of X against every row of Y.
// Both sides are re-normalized internally so scores are true cosines.
class Retriever {
 public:
  Retriever(const EmbeddingMatrix& x, const EmbeddingMatrix& y,
            Retrieval method, int32_t csls_k);

  int32_t num_targets() const { return ny_; }
  // out must hold num_targets() floats.
  void scores_for(int32_t query_id, float* out) const;

 private:
  EmbeddingMatrix xn_, yn_;
  Retrieval method_;
  int32_t k_;
  int32_t ny_;
  std::vector<float> r_targets_;  // mean top-k cosine of each target vs all X
};

struct RankedCandidate {
  int32_t id;
  float score;
};

// Per-query n_best target candidates, sorted by descending score with ties
// broken by lower target id.
std::vector<std::vector<RankedCandidate>> csls_retrieve(
    const EmbeddingMatrix& mapped_x, const EmbeddingMatrix& y,
    const std::vector<int32_t>& query_ids, int32_t k, int32_t n_best);

// Alternates solve_mapping and dictionary induction until the objective
// stops improving. Inputs must already be normalize_for_mapping'd.
MappingResult self_learn(const EmbeddingMatrix& x, const EmbeddingMatrix& y,
                         const BilingualDictionary& seed,
                         const SelfLearnConfig& cfg);

// W serialization: header `d d`, then d rows of d values (9 decimals).
void save_matrix(const std::vector<double>& w, int32_t dim,
                 const std::string& path);
std::vector<double> load_matrix(const std::string& path, int32_t* dim);

}  // namespace clwe
