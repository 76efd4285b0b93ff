#pragma once

#include <cstdint>
#include <vector>

#include "clwe/align.hpp"
#include "clwe/bleu.hpp"
#include "clwe/corpus.hpp"
#include "clwe/decoder.hpp"

namespace clwe {

struct BtOptions {
  int32_t em_iterations = 5;
  int32_t max_phrase_len = 4;
  bool union_induced = true;  // keep the initial CLWE-induced table merged in
  int32_t beam = 8;
  uint64_t rng_seed = 1;
};

struct BtResult {
  UmtModel st;
  UmtModel ts;
  // Held-out BLEU indexed by step; entry 0 is before any refinement.
  // Empty when no held-out set was supplied.
  std::vector<double> bleu_st;
  std::vector<double> bleu_ts;
};

// Iterative back-translation: each step first rebuilds the t->s table from
// (decode(src sample), src sample) pairs, then rebuilds s->t from samples of
// the target corpus decoded with the refreshed t->s model. Language models
// are left untouched; phrase tables are replaced (optionally merged with the
// initial induced tables).
BtResult back_translate_refine(const UmtModel& st, const UmtModel& ts,
                               const Corpus& src_corpus,
                               const Corpus& tgt_corpus, int32_t steps,
                               int32_t sample_size, const BtOptions& options,
                               const Corpus* heldout_src = nullptr,
                               const Corpus* heldout_tgt = nullptr);

// One translated sentence per input sentence, order preserved.
Corpus generate_pseudo_corpus(const UmtModel& model, const Corpus& corpus,
                              int32_t beam = 8);

}  // namespace clwe
