#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "clwe/phrase_table.hpp"

namespace clwe {

// (source tokens, target tokens)
using SentencePair =
    std::pair<std::vector<std::string>, std::vector<std::string>>;

// IBM Model 1 lexical translation probabilities t(target | source), with an
// optional null source word. Per-source distributions sum to 1.
class AlignmentModel {
 public:
  static AlignmentModel train(const std::vector<SentencePair>& pairs,
                              int32_t em_iterations, bool use_null = true);

  double prob(const std::string& target, const std::string& source) const;
  double null_prob(const std::string& target) const;
  bool use_null() const { return use_null_; }
  // Data log-likelihood before each EM update plus once after the last; EM
  // guarantees this is non-decreasing.
  const std::vector<double>& likelihood_trace() const { return likelihood_; }

  // For each target position, the most likely source position (-1 = null).
  std::vector<int32_t> viterbi(const SentencePair& pair) const;

 private:
  int32_t src_id(const std::string& word) const;
  int32_t tgt_id(const std::string& word) const;

  bool use_null_ = true;
  std::vector<std::string> src_words_, tgt_words_;
  std::unordered_map<std::string, int32_t> src_ids_, tgt_ids_;
  // t_[s] maps target id -> probability; index 0 is the null word when
  // use_null_ is set.
  std::vector<std::unordered_map<int32_t, double>> t_;
  std::vector<double> likelihood_;
};

AlignmentModel ibm1_align(const std::vector<SentencePair>& pairs,
                          int32_t em_iterations, bool use_null = true);

// Intersection of the two directional Viterbi alignments grown with
// adjacent union points (grow-diag style), deterministic scan order.
std::vector<std::pair<int32_t, int32_t>> symmetrize_alignments(
    const std::vector<std::pair<int32_t, int32_t>>& forward,
    const std::vector<std::pair<int32_t, int32_t>>& backward, int32_t src_len,
    int32_t tgt_len);

// Consistent phrase pairs up to max_len per side, scored with relative
// frequency log P(target | source). forward aligns pairs as given; backward
// is trained on the swapped pairs.
PhraseTable extract_phrases(const std::vector<SentencePair>& pairs,
                            const AlignmentModel& forward,
                            const AlignmentModel& backward,
                            int32_t max_len = 4);

}  // namespace clwe
