#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clwe/error.hpp"

namespace clwe {

// Row-major V x d matrix; row order carries the vocabulary's frequency order.
struct EmbeddingMatrix {
  std::vector<std::string> words;
  std::vector<float> data;
  int32_t dim = 0;

  int32_t rows() const { return static_cast<int32_t>(words.size()); }
  float* row(int32_t i) { return data.data() + static_cast<size_t>(i) * dim; }
  const float* row(int32_t i) const {
    return data.data() + static_cast<size_t>(i) * dim;
  }
  int32_t id_of(const std::string& word) const {
    for (int32_t i = 0; i < rows(); ++i) {
      if (words[i] == word) return i;
    }
    return -1;
  }

  static EmbeddingMatrix zeros(std::vector<std::string> words, int32_t dim);
};

// Interchange format: header `V d`, then `word v1 ... vd` per line with
// 6-decimal fixed-point values.
void save_embeddings(const EmbeddingMatrix& emb, const std::string& path);
EmbeddingMatrix load_embeddings(const std::string& path);

double cosine_similarity(const float* u, const float* v, int32_t dim);

// Scales every row to unit L2 norm; throws ZeroVector on a zero row.
void length_normalize_rows(EmbeddingMatrix& emb);

// Copy of the first `top` rows (frequency order).
EmbeddingMatrix slice_rows(const EmbeddingMatrix& emb, int32_t top);

}  // namespace clwe
