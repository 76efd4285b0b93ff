#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "clwe/embedding.hpp"

namespace clwe {

// Symmetrized binary kNN graph over the top_m most frequent words.
struct NeighborGraph {
  int32_t n = 0;
  int32_t k = 0;
  std::vector<std::pair<int32_t, int32_t>> edges;  // i < j, sorted

  std::vector<int32_t> degrees() const;
};

struct SpectralSummary {
  std::vector<double> eigenvalues;  // sorted descending, clamped >= 0
  int32_t k_mass = 0;               // smallest k with cumulative mass rule met
  double mass_fraction = 0.0;       // cumulative fraction at k_mass
};

struct EigSimOptions {
  double mass_threshold = 0.9;
  // false: smallest k whose top-k eigenvalue mass reaches the threshold.
  // true:  largest k whose top-k mass is still below it (minimum 1).
  bool literal_below = false;
  bool combine_max = false;  // combine per-graph k by max instead of min
};

struct EigSimReport {
  double value = 0.0;
  int32_t k_used = 0;
  int32_t k_x = 0;
  int32_t k_y = 0;
  std::vector<double> lambda_top_x;  // first k_used eigenvalues
  std::vector<double> lambda_top_y;
};

// Rows are length-normalized internally; edges go to the k nearest cosine
// neighbors (self excluded, ties to the lower id), then the adjacency is
// symmetrized by union.
NeighborGraph knn_graph(const EmbeddingMatrix& emb, int32_t top_m, int32_t k);

// Eigenvalues of L = D - A, descending. k selection per options.
SpectralSummary laplacian_spectrum(const NeighborGraph& g,
                                   const EigSimOptions& options = {});

// Sum of squared differences of the top-k Laplacian eigenvalues of the two
// kNN graphs; lower means structurally more similar.
EigSimReport eigenvector_similarity(const EmbeddingMatrix& x,
                                    const EmbeddingMatrix& y, int32_t top_m,
                                    int32_t k_nn,
                                    const EigSimOptions& options = {});

}  // namespace clwe
