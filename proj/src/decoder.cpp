#include "clwe/decoder.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace clwe {

namespace {

struct Hypothesis {
  double score = 0.0;
  NGramLM::State state;
  std::vector<std::string> output;
};

bool better(const Hypothesis& a, const Hypothesis& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.output < b.output;
}

std::vector<std::string> split_tokens(const std::string& phrase) {
  std::vector<std::string> tokens;
  std::istringstream ss(phrase);
  std::string token;
  while (ss >> token) tokens.push_back(token);
  return tokens;
}

}  // namespace

std::vector<std::string> decode(const std::vector<std::string>& sentence,
                                const UmtModel& model, int32_t beam_size) {
  if (beam_size < 1) throw InvalidSpec("beam_size must be >= 1");
  if (sentence.empty()) return {};
  const auto n = static_cast<int32_t>(sentence.size());
  const DecoderWeights& w = model.weights;

  std::vector<std::vector<Hypothesis>> stacks(n + 1);
  stacks[0].push_back({0.0, model.lm.begin_state(), {}});

  for (int32_t pos = 0; pos < n; ++pos) {
    auto& stack = stacks[pos];
    if (stack.empty()) continue;

    // Prune: keep the beam, dropping hypotheses that share an LM state with
    // a strictly better one (the continuation score depends only on state).
    std::sort(stack.begin(), stack.end(), better);
    std::map<NGramLM::State, double> best_by_state;
    std::vector<Hypothesis> kept;
    for (auto& hyp : stack) {
      if (static_cast<int32_t>(kept.size()) >= beam_size) break;
      auto it = best_by_state.find(hyp.state);
      if (it != best_by_state.end() && it->second > hyp.score) continue;
      if (it == best_by_state.end()) best_by_state[hyp.state] = hyp.score;
      kept.push_back(std::move(hyp));
    }
    stack = std::move(kept);

    // Expansions: table phrases starting here, else copy the token through.
    struct Expansion {
      int32_t len;
      std::vector<std::string> target;
      double tm;
    };
    std::vector<Expansion> expansions;
    std::string source;
    const int32_t max_len = std::min<int32_t>(model.table.max_len, n - pos);
    for (int32_t len = 1; len <= max_len; ++len) {
      if (len > 1) source += ' ';
      source += sentence[pos + len - 1];
      if (len == 1 && source.empty()) continue;
      const auto* candidates = model.table.lookup(source);
      if (!candidates) continue;
      for (const auto& cand : *candidates) {
        expansions.push_back({len, split_tokens(cand.target), cand.log_score});
      }
    }
    if (expansions.empty()) {
      expansions.push_back({1, {sentence[pos]}, 0.0});
    }

    for (const auto& hyp : stack) {
      for (const auto& exp : expansions) {
        Hypothesis next;
        next.state = hyp.state;
        next.output = hyp.output;
        double lm_delta = 0.0;
        for (const auto& token : exp.target) {
          lm_delta += model.lm.score_token(next.state, token);
          next.output.push_back(token);
        }
        next.score = hyp.score + w.tm * exp.tm + w.lm * lm_delta +
                     w.wp * static_cast<double>(exp.target.size());
        stacks[pos + exp.len].push_back(std::move(next));
      }
    }
    stack.clear();
  }

  auto& final_stack = stacks[n];
  if (final_stack.empty()) return sentence;  // unreachable with copy-through
  for (auto& hyp : final_stack) {
    hyp.score += w.lm * model.lm.end_score(hyp.state);
  }
  const auto best =
      std::min_element(final_stack.begin(), final_stack.end(),
                       [](const Hypothesis& a, const Hypothesis& b) {
                         return better(a, b);
                       });
  return best->output;
}

Corpus translate_corpus(const Corpus& corpus, const UmtModel& model,
                        int32_t beam_size) {
  Corpus out;
  out.language_tag = model.tgt_lang;
  out.sentences.reserve(corpus.size());
  for (const auto& sentence : corpus.sentences) {
    out.sentences.push_back(decode(sentence, model, beam_size));
  }
  return out;
}

}  // namespace clwe
