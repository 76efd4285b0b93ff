#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clwe/corpus.hpp"
#include "clwe/ngram_lm.hpp"
#include "clwe/phrase_table.hpp"

namespace clwe {

struct DecoderWeights {
  double tm = 1.0;
  double lm = 1.0;
  double wp = 0.0;
};

// Phrase table plus target-language LM plus feature weights.
struct UmtModel {
  std::string src_lang;
  std::string tgt_lang;
  PhraseTable table;
  NGramLM lm;
  DecoderWeights weights;
};

// Monotone left-to-right beam decoding. Hypothesis score is
//   w_tm * table score + w_lm * LM log-prob (incl. </s>) + w_wp * length.
// Source words no phrase covers are copied through. Ties resolve to the
// lexicographically smaller output.
std::vector<std::string> decode(const std::vector<std::string>& sentence,
                                const UmtModel& model, int32_t beam_size);

Corpus translate_corpus(const Corpus& corpus, const UmtModel& model,
                        int32_t beam_size);

}  // namespace clwe
