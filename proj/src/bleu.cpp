#include "clwe/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "clwe/error.hpp"

namespace clwe {

namespace {

std::unordered_map<std::string, int64_t> ngram_counts(
    const std::vector<std::string>& tokens, int32_t n) {
  std::unordered_map<std::string, int64_t> counts;
  if (static_cast<int32_t>(tokens.size()) < n) return counts;
  for (size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int32_t j = 1; j < n; ++j) {
      key += '\x1f';
      key += tokens[i + j];
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace

BleuResult corpus_bleu(const std::vector<std::vector<std::string>>& hypotheses,
                       const std::vector<std::vector<std::string>>& references,
                       int32_t max_n, double epsilon) {
  if (hypotheses.size() != references.size()) {
    throw LengthMismatch(std::to_string(hypotheses.size()) + " hypotheses vs " +
                         std::to_string(references.size()) + " references");
  }
  if (hypotheses.empty()) throw LengthMismatch("empty evaluation set");
  if (max_n < 1) throw InvalidSpec("max_n must be >= 1");

  BleuResult result;
  std::vector<int64_t> matched(max_n, 0), total(max_n, 0);
  for (size_t s = 0; s < hypotheses.size(); ++s) {
    result.hyp_length += static_cast<int64_t>(hypotheses[s].size());
    result.ref_length += static_cast<int64_t>(references[s].size());
    for (int32_t n = 1; n <= max_n; ++n) {
      const auto hyp_counts = ngram_counts(hypotheses[s], n);
      if (hyp_counts.empty()) continue;
      const auto ref_counts = ngram_counts(references[s], n);
      for (const auto& [gram, count] : hyp_counts) {
        total[n - 1] += count;
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) {
          matched[n - 1] += std::min(count, it->second);
        }
      }
    }
  }

  double log_precision = 0.0;
  int32_t used = 0;
  for (int32_t n = 0; n < max_n; ++n) {
    if (total[n] == 0) break;
    double p = static_cast<double>(matched[n]) / static_cast<double>(total[n]);
    result.precisions.push_back(p);
    if (p <= 0.0) {
      p = epsilon;
      result.smoothed = true;
    }
    log_precision += std::log(p);
    ++used;
  }
  if (used == 0) {
    result.score = 0.0;
    return result;
  }
  result.brevity_penalty =
      result.hyp_length < result.ref_length
          ? std::exp(1.0 - static_cast<double>(result.ref_length) /
                               static_cast<double>(result.hyp_length))
          : 1.0;
  result.score = result.brevity_penalty * std::exp(log_precision / used);
  return result;
}

}  // namespace clwe
