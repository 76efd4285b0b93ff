#include "clwe/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "clwe/rng.hpp"

namespace clwe {

namespace {

// Cumulative distribution with binary-search sampling.
class Cdf {
 public:
  explicit Cdf(std::vector<double> weights) : cum_(std::move(weights)) {
    double total = 0.0;
    for (auto& w : cum_) {
      total += w;
      w = total;
    }
    total_ = total;
  }

  int32_t sample(Rng& rng) const {
    const double u = rng.uniform_real() * total_;
    auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
    if (it == cum_.end()) --it;
    return static_cast<int32_t>(it - cum_.begin());
  }

 private:
  std::vector<double> cum_;
  double total_ = 0.0;
};

struct LatentModel {
  Cdf unigram;
  std::vector<int32_t> cluster_of;
  std::vector<Cdf> cluster_cdf;        // over member slots
  std::vector<std::vector<int32_t>> cluster_members;
  double stickiness;

  int32_t next_word(Rng& rng, int32_t prev) const {
    if (prev >= 0 && rng.uniform_real() < stickiness) {
      const int32_t c = cluster_of[prev];
      const int32_t slot = cluster_cdf[c].sample(rng);
      return cluster_members[c][slot];
    }
    return unigram.sample(rng);
  }
};

LatentModel build_latent_model(const SynthPairSpec& spec) {
  const int32_t v = spec.latent_vocab_size;
  std::vector<double> weights(v);
  for (int32_t w = 0; w < v; ++w) {
    weights[w] = 1.0 / std::pow(static_cast<double>(w + 1), spec.zipf_exponent);
  }
  const int32_t clusters = std::min(spec.cluster_count, v);
  std::vector<int32_t> cluster_of(v);
  std::vector<std::vector<int32_t>> members(clusters);
  for (int32_t w = 0; w < v; ++w) {
    cluster_of[w] = w % clusters;
    members[w % clusters].push_back(w);
  }
  std::vector<Cdf> cluster_cdf;
  cluster_cdf.reserve(clusters);
  for (int32_t c = 0; c < clusters; ++c) {
    std::vector<double> mw;
    mw.reserve(members[c].size());
    for (int32_t w : members[c]) mw.push_back(weights[w]);
    cluster_cdf.emplace_back(std::move(mw));
  }
  return LatentModel{Cdf(std::move(weights)), std::move(cluster_of),
                     std::move(cluster_cdf), std::move(members),
                     spec.cluster_stickiness};
}

std::vector<int32_t> sample_latent_sentence(const LatentModel& model, Rng& rng,
                                            int32_t min_len, int32_t max_len) {
  const int32_t len =
      min_len + static_cast<int32_t>(rng.uniform(
                    static_cast<uint64_t>(max_len - min_len + 1)));
  std::vector<int32_t> sentence(len);
  int32_t prev = -1;
  for (int32_t t = 0; t < len; ++t) {
    prev = model.next_word(rng, prev);
    sentence[t] = prev;
  }
  return sentence;
}

std::vector<std::string> render(const std::vector<int32_t>& latent,
                                const std::vector<std::string>& lexicon,
                                const LatentModel& model, double noise,
                                Rng& rng) {
  std::vector<std::string> out;
  out.reserve(latent.size());
  for (int32_t w : latent) {
    int32_t surface = w;
    if (noise > 0.0 && rng.uniform_real() < noise) {
      surface = model.unigram.sample(rng);
    }
    out.push_back(lexicon[surface]);
  }
  return out;
}

std::vector<std::string> make_lexicon(const std::string& prefix, int32_t v,
                                      Rng& rng) {
  std::vector<int32_t> perm(v);
  std::iota(perm.begin(), perm.end(), 0);
  for (int32_t i = v - 1; i > 0; --i) {
    const auto j = static_cast<int32_t>(rng.uniform(i + 1));
    std::swap(perm[i], perm[j]);
  }
  std::vector<std::string> lexicon(v);
  for (int32_t w = 0; w < v; ++w) {
    lexicon[w] = prefix + std::to_string(perm[w]);
  }
  return lexicon;
}

}  // namespace

void SynthPairSpec::validate() const {
  if (latent_vocab_size < 2) throw InvalidSpec("latent_vocab_size must be >= 2");
  if (sentence_count < 1) throw InvalidSpec("sentence_count must be >= 1");
  if (min_sentence_length < 1 || max_sentence_length < min_sentence_length) {
    throw InvalidSpec("bad sentence_length range");
  }
  if (shared_content_fraction < 0.0 || shared_content_fraction > 1.0) {
    throw InvalidSpec("shared_content_fraction must be in [0,1]");
  }
  if (noise_substitution_rate < 0.0 || noise_substitution_rate > 1.0) {
    throw InvalidSpec("noise_substitution_rate must be in [0,1]");
  }
  if (cluster_count < 1) throw InvalidSpec("cluster_count must be >= 1");
  if (cluster_stickiness < 0.0 || cluster_stickiness >= 1.0) {
    throw InvalidSpec("cluster_stickiness must be in [0,1)");
  }
  if (holdout_count < 0) throw InvalidSpec("holdout_count must be >= 0");
}

SynthPair generate_synthetic_pair(const SynthPairSpec& spec) {
  spec.validate();
  const LatentModel model = build_latent_model(spec);

  // Independent sub-streams so a change to one sampling stage (e.g. noise)
  // does not shift every other draw.
  Rng lex_rng(spec.rng_seed * 0x9e3779b97f4a7c15ULL + 1);
  Rng latent_rng(spec.rng_seed * 0x9e3779b97f4a7c15ULL + 2);
  Rng noise_a_rng(spec.rng_seed * 0x9e3779b97f4a7c15ULL + 3);
  Rng noise_b_rng(spec.rng_seed * 0x9e3779b97f4a7c15ULL + 4);

  const auto lexicon_a = make_lexicon("a", spec.latent_vocab_size, lex_rng);
  const auto lexicon_b = make_lexicon("b", spec.latent_vocab_size, lex_rng);

  SynthPair pair;
  pair.a.language_tag = "synthA";
  pair.b.language_tag = "synthB";
  pair.holdout_a.language_tag = "synthA";
  pair.holdout_b.language_tag = "synthB";

  const auto shared = static_cast<int32_t>(
      std::llround(spec.shared_content_fraction * spec.sentence_count));
  for (int32_t s = 0; s < spec.sentence_count; ++s) {
    if (s < shared) {
      const auto latent = sample_latent_sentence(
          model, latent_rng, spec.min_sentence_length, spec.max_sentence_length);
      pair.a.sentences.push_back(render(latent, lexicon_a, model,
                                        spec.noise_substitution_rate,
                                        noise_a_rng));
      pair.b.sentences.push_back(render(latent, lexicon_b, model,
                                        spec.noise_substitution_rate,
                                        noise_b_rng));
    } else {
      const auto latent_a = sample_latent_sentence(
          model, latent_rng, spec.min_sentence_length, spec.max_sentence_length);
      const auto latent_b = sample_latent_sentence(
          model, latent_rng, spec.min_sentence_length, spec.max_sentence_length);
      pair.a.sentences.push_back(render(latent_a, lexicon_a, model,
                                        spec.noise_substitution_rate,
                                        noise_a_rng));
      pair.b.sentences.push_back(render(latent_b, lexicon_b, model,
                                        spec.noise_substitution_rate,
                                        noise_b_rng));
    }
  }

  for (int32_t s = 0; s < spec.holdout_count; ++s) {
    const auto latent = sample_latent_sentence(
        model, latent_rng, spec.min_sentence_length, spec.max_sentence_length);
    pair.holdout_a.sentences.push_back(
        render(latent, lexicon_a, model, 0.0, noise_a_rng));
    pair.holdout_b.sentences.push_back(
        render(latent, lexicon_b, model, 0.0, noise_b_rng));
  }

  pair.gold.reserve(spec.latent_vocab_size);
  for (int32_t w = 0; w < spec.latent_vocab_size; ++w) {
    pair.gold.emplace_back(lexicon_a[w], lexicon_b[w]);
  }
  return pair;
}

}  // namespace clwe
