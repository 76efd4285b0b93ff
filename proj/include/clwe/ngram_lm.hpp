#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "clwe/corpus.hpp"

namespace clwe {

// Interpolated Kneser-Ney n-gram model with a fixed discount. Sentence
// boundaries are handled with <s>/</s>; unknown words map to <unk>, which
// shares the uniform base mass, so every query is finite when the discount
// is positive. Probabilities per stored context sum to 1.
class NGramLM {
 public:
  NGramLM() = default;

  static NGramLM train(const Corpus& corpus, int32_t order,
                       double discount = 0.75);

  int32_t order() const { return order_; }
  double discount() const { return discount_; }

  // Natural-log P(word | context), context given oldest-to-newest.
  double logprob(const std::string& word,
                 const std::vector<std::string>& context) const;

  // Incremental scoring for left-to-right decoding.
  using State = std::vector<int32_t>;
  State begin_state() const;
  double score_token(State& state, const std::string& word) const;
  double end_score(const State& state) const;  // ln P(</s> | state)

  // Full-sentence score including the </s> term.
  double sequence_logprob(const std::vector<std::string>& sentence) const;
  // Prefix score (no </s>); adding a token can only decrease this.
  double prefix_logprob(const std::vector<std::string>& sentence) const;

  // Every predictable event (vocabulary plus </s> and <unk>, minus <s>).
  std::vector<std::string> predicted_words() const;
  // Every stored context, shortest first, deterministic order.
  std::vector<std::vector<std::string>> stored_contexts() const;

  // ARPA-like text format with log10 probabilities and backoffs.
  void save_arpa(const std::string& path) const;
  static NGramLM load_arpa(const std::string& path);

 private:
  struct KeyHash {
    size_t operator()(const std::vector<int32_t>& key) const;
  };
  using ProbMap = std::unordered_map<std::vector<int32_t>, double, KeyHash>;

  int32_t id_or_unk(const std::string& word) const;
  double logprob_ids(int32_t word, const std::vector<int32_t>& context) const;

  int32_t order_ = 0;
  double discount_ = 0.75;
  std::vector<std::string> id_to_word_;
  std::unordered_map<std::string, int32_t> word_to_id_;
  std::vector<ProbMap> probs_;     // index = n-gram length
  std::vector<ProbMap> backoffs_;  // index = context length (0 = empty)

  static constexpr int32_t kUnk = 0;
  static constexpr int32_t kBos = 1;
  static constexpr int32_t kEos = 2;
};

// Trains on corpus sentences; throws EmptyCorpus when there is nothing to
// count. order >= 1.
NGramLM train_ngram_lm(const Corpus& corpus, int32_t order,
                       double discount = 0.75);

// Sum of conditional log-probs with boundary handling (includes </s>).
double lm_logprob(const NGramLM& lm, const std::vector<std::string>& sentence);

}  // namespace clwe
