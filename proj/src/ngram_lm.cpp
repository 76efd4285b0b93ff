#include "clwe/ngram_lm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "clwe/rng.hpp"

namespace clwe {

namespace {
constexpr double kLog10 = 2.302585092994045684;
// ARPA placeholder for entries that exist only as contexts.
constexpr double kNoProb = -99.0;
}  // namespace

size_t NGramLM::KeyHash::operator()(const std::vector<int32_t>& key) const {
  return fnv1a(key.data(), key.size() * sizeof(int32_t));
}

int32_t NGramLM::id_or_unk(const std::string& word) const {
  auto it = word_to_id_.find(word);
  return it == word_to_id_.end() ? kUnk : it->second;
}

NGramLM NGramLM::train(const Corpus& corpus, int32_t order, double discount) {
  if (order < 1) throw InvalidSpec("lm order must be >= 1");
  if (discount < 0.0 || discount >= 1.0) {
    throw InvalidSpec("discount must be in [0,1)");
  }
  if (corpus.token_count() == 0) throw EmptyCorpus("train_ngram_lm");

  NGramLM lm;
  lm.order_ = order;
  lm.discount_ = discount;
  lm.id_to_word_ = {"<unk>", "<s>", "</s>"};
  for (size_t i = 0; i < lm.id_to_word_.size(); ++i) {
    lm.word_to_id_.emplace(lm.id_to_word_[i], static_cast<int32_t>(i));
  }
  auto intern = [&lm](const std::string& word) {
    auto it = lm.word_to_id_.find(word);
    if (it != lm.word_to_id_.end()) return it->second;
    const auto id = static_cast<int32_t>(lm.id_to_word_.size());
    lm.id_to_word_.push_back(word);
    lm.word_to_id_.emplace(word, id);
    return id;
  };

  // Raw n-gram counts; each counted n-gram ends at a real token or </s>.
  std::vector<ProbMap> counts(order + 1);
  std::vector<int32_t> padded;
  for (const auto& sentence : corpus.sentences) {
    padded.assign(static_cast<size_t>(order) - 1, kBos);
    for (const auto& token : sentence) padded.push_back(intern(token));
    padded.push_back(kEos);
    const auto len = static_cast<int32_t>(padded.size());
    for (int32_t end = order - 1; end < len; ++end) {
      for (int32_t n = 1; n <= order; ++n) {
        if (end - n + 1 < 0) break;
        std::vector<int32_t> key(padded.begin() + end - n + 1,
                                 padded.begin() + end + 1);
        counts[n][std::move(key)] += 1.0;
      }
    }
  }

  // Continuation counts replace raw counts below the top order.
  std::vector<ProbMap> effective(order + 1);
  effective[order] = counts[order];
  for (int32_t n = order - 1; n >= 1; --n) {
    auto& eff = effective[n];
    for (const auto& [key, unused] : effective[n + 1]) {
      std::vector<int32_t> suffix(key.begin() + 1, key.end());
      eff[std::move(suffix)] += 1.0;
    }
    // n-grams that only ever start sentences have no left extension; fall
    // back to their raw counts so <s>-anchored history is not lost.
    for (const auto& [key, value] : counts[n]) {
      eff.emplace(key, value);
    }
  }

  lm.probs_.assign(order + 1, ProbMap());
  lm.backoffs_.assign(order, ProbMap());
  const auto v_pred = static_cast<double>(lm.id_to_word_.size() - 1);
  const double ln_uniform = -std::log(v_pred);

  for (int32_t n = 1; n <= order; ++n) {
    ProbMap totals, distinct;
    for (const auto& [key, value] : effective[n]) {
      std::vector<int32_t> ctx(key.begin(), key.end() - 1);
      totals[ctx] += value;
      distinct[ctx] += 1.0;
    }
    if (discount > 0.0) {
      for (const auto& [ctx, total] : totals) {
        lm.backoffs_[n - 1][ctx] =
            std::log(discount * distinct[ctx] / total);
      }
    }
    for (const auto& [key, value] : effective[n]) {
      const std::vector<int32_t> ctx(key.begin(), key.end() - 1);
      const double total = totals[ctx];
      double p = std::max(value - discount, 0.0) / total;
      if (discount > 0.0) {
        const double lambda = discount * distinct[ctx] / total;
        double lower;
        if (n == 1) {
          lower = 1.0 / v_pred;
        } else {
          const std::vector<int32_t> shorter(ctx.begin() + 1, ctx.end());
          lower = std::exp(lm.logprob_ids(key.back(), shorter));
        }
        p += lambda * lower;
      }
      lm.probs_[n][key] = std::log(p);
    }
  }
  if (discount > 0.0) {
    // Store <unk> explicitly with its fall-through mass so the in-memory
    // model and an ARPA round trip score unknown words identically.
    const std::vector<int32_t> unk{kUnk};
    if (!lm.probs_[1].count(unk)) {
      double b0 = 0.0;
      auto it = lm.backoffs_[0].find({});
      if (it != lm.backoffs_[0].end()) b0 = it->second;
      lm.probs_[1][unk] = b0 + ln_uniform;
    }
  }
  return lm;
}

double NGramLM::logprob_ids(int32_t word,
                            const std::vector<int32_t>& context) const {
  const auto m = static_cast<int32_t>(context.size());
  int32_t n = std::min(order_, m + 1);
  double backoff_acc = 0.0;
  while (n >= 1) {
    std::vector<int32_t> key(context.end() - (n - 1), context.end());
    key.push_back(word);
    auto it = probs_[n].find(key);
    if (it != probs_[n].end()) return backoff_acc + it->second;
    if (discount_ <= 0.0) {
      throw NoSmoothingZeroProb("unseen n-gram with discount 0");
    }
    const std::vector<int32_t> ctx(key.begin(), key.end() - 1);
    auto bo = backoffs_[n - 1].find(ctx);
    if (bo != backoffs_[n - 1].end()) backoff_acc += bo->second;
    --n;
  }
  // Below unigrams only the uniform base remains.
  return backoff_acc - std::log(static_cast<double>(id_to_word_.size() - 1));
}

double NGramLM::logprob(const std::string& word,
                        const std::vector<std::string>& context) const {
  std::vector<int32_t> ctx;
  const size_t keep = std::min<size_t>(context.size(), order_ - 1);
  for (size_t i = context.size() - keep; i < context.size(); ++i) {
    ctx.push_back(id_or_unk(context[i]));
  }
  return logprob_ids(id_or_unk(word), ctx);
}

NGramLM::State NGramLM::begin_state() const {
  return State(static_cast<size_t>(order_) - 1, kBos);
}

double NGramLM::score_token(State& state, const std::string& word) const {
  const int32_t id = id_or_unk(word);
  const double lp = logprob_ids(id, state);
  state.push_back(id);
  if (static_cast<int32_t>(state.size()) > order_ - 1) {
    state.erase(state.begin());
  }
  return lp;
}

double NGramLM::end_score(const State& state) const {
  return logprob_ids(kEos, state);
}

double NGramLM::sequence_logprob(
    const std::vector<std::string>& sentence) const {
  State state = begin_state();
  double total = 0.0;
  for (const auto& word : sentence) total += score_token(state, word);
  return total + end_score(state);
}

double NGramLM::prefix_logprob(
    const std::vector<std::string>& sentence) const {
  State state = begin_state();
  double total = 0.0;
  for (const auto& word : sentence) total += score_token(state, word);
  return total;
}

std::vector<std::string> NGramLM::predicted_words() const {
  std::vector<std::string> words;
  words.reserve(id_to_word_.size() - 1);
  for (size_t i = 0; i < id_to_word_.size(); ++i) {
    if (static_cast<int32_t>(i) != kBos) words.push_back(id_to_word_[i]);
  }
  return words;
}

std::vector<std::vector<std::string>> NGramLM::stored_contexts() const {
  std::vector<std::vector<int32_t>> keys;
  for (const auto& map : backoffs_) {
    for (const auto& [key, unused] : map) keys.push_back(key);
  }
  std::sort(keys.begin(), keys.end());
  std::vector<std::vector<std::string>> out;
  out.reserve(keys.size());
  for (const auto& key : keys) {
    std::vector<std::string> ctx;
    ctx.reserve(key.size());
    for (int32_t id : key) ctx.push_back(id_to_word_[id]);
    out.push_back(std::move(ctx));
  }
  return out;
}

void NGramLM::save_arpa(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write LM: " + path);

  // Context-only entries (prob placeholder) must be listed too so backoff
  // weights survive the round trip.
  std::vector<std::vector<std::vector<int32_t>>> entries(order_ + 1);
  for (int32_t n = 1; n <= order_; ++n) {
    for (const auto& [key, unused] : probs_[n]) entries[n].push_back(key);
    if (n < order_) {
      for (const auto& [key, unused] : backoffs_[n]) {
        if (!probs_[n].count(key)) entries[n].push_back(key);
      }
    }
    std::sort(entries[n].begin(), entries[n].end());
    entries[n].erase(std::unique(entries[n].begin(), entries[n].end()),
                     entries[n].end());
  }

  out << "\\data\\\n";
  for (int32_t n = 1; n <= order_; ++n) {
    out << "ngram " << n << '=' << entries[n].size() << '\n';
  }
  char buf[64];
  for (int32_t n = 1; n <= order_; ++n) {
    out << "\n\\" << n << "-grams:\n";
    for (const auto& key : entries[n]) {
      auto pit = probs_[n].find(key);
      const double lp10 =
          pit == probs_[n].end() ? kNoProb : pit->second / kLog10;
      std::snprintf(buf, sizeof(buf), "%.12g", lp10);
      out << buf << '\t';
      for (size_t i = 0; i < key.size(); ++i) {
        if (i) out << ' ';
        out << id_to_word_[key[i]];
      }
      if (n < order_) {
        auto bit = backoffs_[n].find(key);
        if (bit != backoffs_[n].end()) {
          std::snprintf(buf, sizeof(buf), "%.12g", bit->second / kLog10);
          out << '\t' << buf;
        }
      }
      out << '\n';
    }
  }
  out << "\n\\end\\\n";
}

NGramLM NGramLM::load_arpa(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open LM: " + path);
  NGramLM lm;
  lm.id_to_word_ = {"<unk>", "<s>", "</s>"};
  for (size_t i = 0; i < lm.id_to_word_.size(); ++i) {
    lm.word_to_id_.emplace(lm.id_to_word_[i], static_cast<int32_t>(i));
  }
  auto intern = [&lm](const std::string& word) {
    auto it = lm.word_to_id_.find(word);
    if (it != lm.word_to_id_.end()) return it->second;
    const auto id = static_cast<int32_t>(lm.id_to_word_.size());
    lm.id_to_word_.push_back(word);
    lm.word_to_id_.emplace(word, id);
    return id;
  };

  std::string line;
  size_t lineno = 0;
  bool in_data = false;
  int32_t current = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line == "\\data\\") {
      in_data = true;
      continue;
    }
    if (line == "\\end\\") break;
    if (line.size() > 1 && line[0] == '\\') {
      const auto dash = line.find("-grams:");
      if (dash == std::string::npos) throw ParseError("bad section", lineno);
      current = std::stoi(line.substr(1, dash - 1));
      if (current < 1) throw ParseError("bad order", lineno);
      if (static_cast<int32_t>(lm.probs_.size()) < current + 1) {
        lm.probs_.resize(current + 1);
        lm.backoffs_.resize(current);
      }
      lm.order_ = std::max(lm.order_, current);
      continue;
    }
    if (in_data && current == 0) {
      continue;  // "ngram N=count" declarations; sizes are implicit
    }
    if (current == 0) throw ParseError("entry outside a section", lineno);
    std::istringstream ss(line);
    double lp10;
    if (!(ss >> lp10)) throw ParseError("missing log-probability", lineno);
    std::vector<int32_t> key;
    std::string word;
    double backoff10 = 0.0;
    bool has_backoff = false;
    std::vector<std::string> fields;
    while (ss >> word) fields.push_back(word);
    if (fields.empty()) throw ParseError("missing n-gram", lineno);
    // Trailing numeric field is the backoff when one more field than the
    // order is present.
    if (static_cast<int32_t>(fields.size()) == current + 1) {
      try {
        size_t pos = 0;
        backoff10 = std::stod(fields.back(), &pos);
        has_backoff = pos == fields.back().size();
      } catch (...) {
        has_backoff = false;
      }
      if (!has_backoff) throw ParseError("bad backoff field", lineno);
      fields.pop_back();
    }
    if (static_cast<int32_t>(fields.size()) != current) {
      throw ParseError("wrong n-gram length", lineno);
    }
    for (const auto& f : fields) key.push_back(intern(f));
    if (lp10 > kNoProb + 1.0) {
      lm.probs_[current][key] = lp10 * kLog10;
    }
    if (has_backoff) {
      lm.backoffs_[current][key] = backoff10 * kLog10;
    }
  }
  if (lm.order_ == 0) throw ParseError("no n-gram sections", lineno);
  // Empty-context backoff cannot be represented in the file; rebuild the
  // convention that unigram fallback mass is the uniform remainder.
  lm.discount_ = 0.75;
  return lm;
}

NGramLM train_ngram_lm(const Corpus& corpus, int32_t order, double discount) {
  return NGramLM::train(corpus, order, discount);
}

double lm_logprob(const NGramLM& lm,
                  const std::vector<std::string>& sentence) {
  return lm.sequence_logprob(sentence);
}

}  // namespace clwe
