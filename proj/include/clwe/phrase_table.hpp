#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "clwe/embedding.hpp"
#include "clwe/mapping.hpp"

namespace clwe {

struct PhraseCandidate {
  std::string target;  // space-joined target tokens
  double log_score;
};

// Source phrase -> scored target candidates, best first.
class PhraseTable {
 public:
  int32_t max_len = 1;

  const std::vector<PhraseCandidate>* lookup(const std::string& source) const {
    auto it = entries_.find(source);
    return it == entries_.end() ? nullptr : &it->second;
  }
  void add(const std::string& source, const std::string& target,
           double log_score);
  // Sorts candidate lists by descending score, ties by target string.
  void finalize();
  // Union; a duplicate (source, target) keeps the higher score.
  void merge(const PhraseTable& other);

  size_t source_count() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::unordered_map<std::string, std::vector<PhraseCandidate>>&
  entries() const {
    return entries_;
  }

  // TSV `src<TAB>tgt<TAB>log_score`, sorted by source then descending score.
  void save(const std::string& path) const;
  static PhraseTable load(const std::string& path);

 private:
  std::unordered_map<std::string, std::vector<PhraseCandidate>> entries_;
};

// Initial unigram table from the mapped embedding space: for each of the
// top_phrases most frequent source words, its n_neighbors CSLS neighbors,
// scored by a softmax over their cosine similarities at temperature tau.
PhraseTable induce_phrase_table(const std::vector<double>& w, int32_t dim,
                                const EmbeddingMatrix& x,
                                const EmbeddingMatrix& y, int32_t top_phrases,
                                int32_t n_neighbors, double temperature = 0.1,
                                int32_t csls_k = 10);

}  // namespace clwe
