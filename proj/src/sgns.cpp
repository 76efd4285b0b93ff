#include "clwe/sgns.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "clwe/kernels.hpp"
#include "clwe/rng.hpp"

namespace clwe {

namespace {

constexpr double kMaxExp = 6.0;
constexpr int kSigmoidTableSize = 2048;

struct SigmoidTable {
  float values[kSigmoidTableSize];
  SigmoidTable() {
    for (int i = 0; i < kSigmoidTableSize; ++i) {
      const double x = (2.0 * i / kSigmoidTableSize - 1.0) * kMaxExp;
      values[i] = static_cast<float>(1.0 / (1.0 + std::exp(-x)));
    }
  }
  float operator()(float x) const {
    if (x >= kMaxExp) return 1.0f;
    if (x <= -kMaxExp) return 0.0f;
    const int idx =
        static_cast<int>((x / kMaxExp + 1.0f) * (kSigmoidTableSize / 2));
    return values[idx];
  }
};

const SigmoidTable& sigmoid_table() {
  static SigmoidTable table;
  return table;
}

// Walker alias table; construction order is fixed so sampling is
// reproducible for a given seed.
class AliasTable {
 public:
  explicit AliasTable(const std::vector<double>& weights) {
    const size_t n = weights.size();
    prob_.resize(n);
    alias_.resize(n);
    double total = 0.0;
    for (double w : weights) total += w;
    std::vector<double> scaled(n);
    std::vector<int32_t> small, large;
    for (size_t i = 0; i < n; ++i) {
      scaled[i] = weights[i] * n / total;
      (scaled[i] < 1.0 ? small : large).push_back(static_cast<int32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
      const int32_t s = small.back();
      small.pop_back();
      const int32_t l = large.back();
      large.pop_back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] = scaled[l] + scaled[s] - 1.0;
      (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    for (int32_t i : large) prob_[i] = 1.0;
    for (int32_t i : small) prob_[i] = 1.0;
  }

  int32_t sample(Rng& rng) const {
    const auto slot = static_cast<int32_t>(rng.uniform(prob_.size()));
    return rng.uniform_real() < prob_[slot] ? slot : alias_[slot];
  }

 private:
  std::vector<double> prob_;
  std::vector<int32_t> alias_;
};

struct TrainShared {
  const std::vector<std::vector<int32_t>>* sentences;
  const Vocabulary* vocab;
  const SgnsConfig* cfg;
  const AliasTable* negatives;
  const std::vector<double>* keep_prob;  // empty when subsampling disabled
  float* w_in;
  float* w_out;
  uint64_t token_budget;
  std::atomic<uint64_t> tokens_done{0};
  std::atomic<uint64_t> pairs{0};
  // Loss trace, single-thread mode only.
  std::vector<double>* trace;
  double window_loss = 0.0;
  uint64_t window_pairs = 0;
};

void train_worker(TrainShared& shared, int32_t tid) {
  const SgnsConfig& cfg = *shared.cfg;
  const SigmoidTable& sig = sigmoid_table();
  const int32_t dim = cfg.dim;
  Rng rng(cfg.rng_seed + 0x51ed2701a43c5d1bULL * (tid + 1));
  std::vector<float> grad_center(dim);
  std::vector<int32_t> kept;
  const bool record = shared.trace != nullptr && cfg.threads == 1;
  constexpr uint64_t kTraceWindow = 100000;

  float lr = cfg.learning_rate;
  uint64_t local_tokens = 0;
  for (int32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (size_t s = tid; s < shared.sentences->size();
         s += static_cast<size_t>(cfg.threads)) {
      const auto& sentence = (*shared.sentences)[s];
      kept.clear();
      for (int32_t id : sentence) {
        if (!shared.keep_prob->empty() &&
            rng.uniform_real() >= (*shared.keep_prob)[id]) {
          continue;
        }
        kept.push_back(id);
      }
      local_tokens += sentence.size();
      if (kept.size() >= 2) {
        const auto len = static_cast<int32_t>(kept.size());
        for (int32_t p = 0; p < len; ++p) {
          const int32_t w_eff =
              1 + static_cast<int32_t>(rng.uniform(cfg.window));
          float* center = shared.w_in + static_cast<size_t>(kept[p]) * dim;
          for (int32_t q = p - w_eff; q <= p + w_eff; ++q) {
            if (q == p || q < 0 || q >= len) continue;
            std::fill(grad_center.begin(), grad_center.end(), 0.0f);
            double pair_loss = 0.0;
            for (int32_t k = 0; k <= cfg.negatives; ++k) {
              int32_t target;
              float label;
              if (k == 0) {
                target = kept[q];
                label = 1.0f;
              } else {
                target = shared.negatives->sample(rng);
                if (target == kept[q]) continue;
                label = 0.0f;
              }
              float* out = shared.w_out + static_cast<size_t>(target) * dim;
              const float pred = sig(kernels::dot(center, out, dim));
              const float g = (label - pred) * lr;
              kernels::axpy(g, out, grad_center.data(), dim);
              kernels::axpy(g, center, out, dim);
              if (record) {
                const double p_correct =
                    label > 0.5f ? pred : 1.0f - pred;
                pair_loss -= std::log(std::max(1e-9, (double)p_correct));
              }
            }
            kernels::axpy(1.0f, grad_center.data(), center, dim);
            shared.pairs.fetch_add(1, std::memory_order_relaxed);
            if (record) {
              shared.window_loss += pair_loss;
              if (++shared.window_pairs == kTraceWindow) {
                shared.trace->push_back(shared.window_loss / kTraceWindow);
                shared.window_loss = 0.0;
                shared.window_pairs = 0;
              }
            }
          }
        }
      }
      if (local_tokens >= 10000) {
        const uint64_t done = shared.tokens_done.fetch_add(
                                  local_tokens, std::memory_order_relaxed) +
                              local_tokens;
        local_tokens = 0;
        const double progress =
            static_cast<double>(done) / (shared.token_budget + 1);
        lr = cfg.learning_rate *
             std::max(1.0f - static_cast<float>(progress), 1e-4f);
      }
    }
  }
}

}  // namespace

void SgnsConfig::validate() const {
  if (dim < 2) throw InvalidSpec("sgns dim must be >= 2");
  if (window < 1) throw InvalidSpec("sgns window must be >= 1");
  if (negatives < 1) throw InvalidSpec("sgns negatives must be >= 1");
  if (epochs < 1) throw InvalidSpec("sgns epochs must be >= 1");
  if (!(learning_rate > 0.0f)) throw InvalidSpec("learning rate must be > 0");
  if (subsample < 0.0) throw InvalidSpec("subsample must be >= 0");
  if (threads < 1) throw InvalidSpec("threads must be >= 1");
}

EmbeddingMatrix train_sgns(const Corpus& corpus, const Vocabulary& vocab,
                           const SgnsConfig& cfg, SgnsStats* stats) {
  cfg.validate();
  if (corpus.token_count() == 0) throw EmptyCorpus("train_sgns");
  if (vocab.size() < cfg.negatives + 2) {
    throw DegenerateVocabulary("vocabulary size " +
                               std::to_string(vocab.size()) +
                               " < negatives+2");
  }

  std::vector<std::vector<int32_t>> sentences;
  sentences.reserve(corpus.size());
  uint64_t kept_tokens = 0;
  for (const auto& sentence : corpus.sentences) {
    std::vector<int32_t> ids;
    ids.reserve(sentence.size());
    for (const auto& token : sentence) {
      const int32_t id = vocab.id_of(token);
      if (id >= 0) ids.push_back(id);
    }
    kept_tokens += ids.size();
    sentences.push_back(std::move(ids));
  }
  if (kept_tokens == 0) throw EmptyCorpus("no corpus token is in vocabulary");

  const int32_t v = vocab.size();
  std::vector<double> neg_weights(v);
  for (int32_t i = 0; i < v; ++i) {
    neg_weights[i] = std::pow(static_cast<double>(vocab.frequency(i)), 0.75);
  }
  AliasTable negatives(neg_weights);

  std::vector<double> keep_prob;
  if (cfg.subsample > 0.0) {
    keep_prob.resize(v);
    const double threshold = cfg.subsample * vocab.total_token_count();
    for (int32_t i = 0; i < v; ++i) {
      const double ratio = threshold / vocab.frequency(i);
      keep_prob[i] = std::min(1.0, std::sqrt(ratio) + ratio);
    }
  }

  EmbeddingMatrix emb = EmbeddingMatrix::zeros(vocab.words(), cfg.dim);
  std::vector<float> w_out(emb.data.size(), 0.0f);
  Rng init_rng(cfg.rng_seed);
  const float init_scale = 0.5f / cfg.dim;
  for (auto& value : emb.data) {
    value = static_cast<float>(init_rng.uniform_real(-init_scale, init_scale));
  }

  TrainShared shared;
  shared.sentences = &sentences;
  shared.vocab = &vocab;
  shared.cfg = &cfg;
  shared.negatives = &negatives;
  shared.keep_prob = &keep_prob;
  shared.w_in = emb.data.data();
  shared.w_out = w_out.data();
  shared.token_budget =
      static_cast<uint64_t>(cfg.epochs) * corpus.token_count();
  shared.trace = stats ? &stats->loss_trace : nullptr;

  if (cfg.threads == 1) {
    train_worker(shared, 0);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(cfg.threads);
    for (int32_t t = 0; t < cfg.threads; ++t) {
      workers.emplace_back([&shared, t] { train_worker(shared, t); });
    }
    for (auto& worker : workers) worker.join();
  }
  if (stats) stats->pairs = shared.pairs.load();
  return emb;
}

double sgns_pair_objective(const float* center, const float* context,
                           const float* const* negatives, int n_neg,
                           int32_t dim) {
  auto log_sigmoid = [](double x) { return -std::log1p(std::exp(-x)); };
  double dot = 0.0;
  for (int32_t j = 0; j < dim; ++j) dot += (double)center[j] * context[j];
  double obj = log_sigmoid(dot);
  for (int i = 0; i < n_neg; ++i) {
    double nd = 0.0;
    for (int32_t j = 0; j < dim; ++j) nd += (double)center[j] * negatives[i][j];
    obj += log_sigmoid(-nd);
  }
  return obj;
}

void sgns_pair_gradients(const float* center, const float* context,
                         const float* const* negatives, int n_neg, int32_t dim,
                         double* g_center, double* g_context,
                         double** g_negatives) {
  auto sigmoid = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
  double dot = 0.0;
  for (int32_t j = 0; j < dim; ++j) dot += (double)center[j] * context[j];
  const double pos_coef = 1.0 - sigmoid(dot);
  for (int32_t j = 0; j < dim; ++j) {
    g_center[j] = pos_coef * context[j];
    g_context[j] = pos_coef * center[j];
  }
  for (int i = 0; i < n_neg; ++i) {
    double nd = 0.0;
    for (int32_t j = 0; j < dim; ++j) nd += (double)center[j] * negatives[i][j];
    const double neg_coef = sigmoid(nd);
    for (int32_t j = 0; j < dim; ++j) {
      g_center[j] -= neg_coef * negatives[i][j];
      g_negatives[i][j] = -neg_coef * center[j];
    }
  }
}

}  // namespace clwe
