#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace clwe {

struct BleuResult {
  double score = 0.0;  // in [0,1]
  std::vector<double> precisions;
  double brevity_penalty = 1.0;
  bool smoothed = false;  // some precision was zero and replaced by epsilon
  int64_t hyp_length = 0;
  int64_t ref_length = 0;
};

// Corpus-level BLEU: geometric mean of clipped n-gram precisions times the
// brevity penalty. Orders whose n-gram total is zero (corpus shorter than n)
// are excluded; zero precisions are floored at epsilon and flagged.
BleuResult corpus_bleu(const std::vector<std::vector<std::string>>& hypotheses,
                       const std::vector<std::vector<std::string>>& references,
                       int32_t max_n = 4, double epsilon = 1e-9);

}  // namespace clwe
