#pragma once

#include <cstdint>

#include "clwe/corpus.hpp"

namespace clwe {

// Controlled two-language fixture: a latent corpus is sampled from a
// Zipf unigram model with first-order (cluster transition) structure, then
// rendered into two surface lexicons with a known gold dictionary.
struct SynthPairSpec {
  int32_t latent_vocab_size = 2000;
  int32_t sentence_count = 20000;
  int32_t min_sentence_length = 5;
  int32_t max_sentence_length = 15;
  double shared_content_fraction = 0.5;  // in [0,1]
  double noise_substitution_rate = 0.0;  // in [0,1]
  uint64_t rng_seed = 1;

  // Latent model knobs.
  double zipf_exponent = 1.0;
  int32_t cluster_count = 32;
  double cluster_stickiness = 0.7;  // prob of drawing from prev word's cluster

  // Extra sentence-aligned clean pairs for translation evaluation; rendered
  // from held-out latent sentences, never part of the corpora above.
  int32_t holdout_count = 0;

  void validate() const;
};

struct SynthPair {
  Corpus a;
  Corpus b;
  WordPairs gold;  // surface form of every latent word, a -> b
  Corpus holdout_a;
  Corpus holdout_b;
};

SynthPair generate_synthetic_pair(const SynthPairSpec& spec);

}  // namespace clwe
