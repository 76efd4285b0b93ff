#include "clwe/mapping.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "clwe/kernels.hpp"
#include "clwe/rng.hpp"

namespace clwe {

namespace {

Eigen::MatrixXd rows_to_eigen(const EmbeddingMatrix& emb,
                              const std::vector<int32_t>& ids) {
  Eigen::MatrixXd m(ids.size(), emb.dim);
  for (size_t r = 0; r < ids.size(); ++r) {
    const float* row = emb.row(ids[r]);
    for (int32_t j = 0; j < emb.dim; ++j) m(r, j) = row[j];
  }
  return m;
}

// Mean of the k largest values of row[0..n); insertion into a small sorted
// buffer since k is tiny compared to n.
float mean_top_k(const float* row, int32_t n, int32_t k, float* buf) {
  int32_t filled = 0;
  for (int32_t i = 0; i < n; ++i) {
    const float v = row[i];
    if (filled < k) {
      int32_t j = filled++;
      while (j > 0 && buf[j - 1] < v) {
        buf[j] = buf[j - 1];
        --j;
      }
      buf[j] = v;
    } else if (v > buf[k - 1]) {
      int32_t j = k - 1;
      while (j > 0 && buf[j - 1] < v) {
        buf[j] = buf[j - 1];
        --j;
      }
      buf[j] = v;
    }
  }
  float total = 0.0f;
  for (int32_t j = 0; j < filled; ++j) total += buf[j];
  return filled ? total / filled : 0.0f;
}

}  // namespace

void BilingualDictionary::dedup() {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
}

BilingualDictionary BilingualDictionary::identity(int32_t n) {
  BilingualDictionary d;
  d.pairs.reserve(n);
  for (int32_t i = 0; i < n; ++i) d.pairs.emplace_back(i, i);
  return d;
}

BilingualDictionary BilingualDictionary::from_word_pairs(
    const WordPairs& word_pairs, const std::vector<std::string>& src_words,
    const std::vector<std::string>& tgt_words, int64_t* oov) {
  std::unordered_map<std::string, int32_t> src_ids, tgt_ids;
  src_ids.reserve(src_words.size());
  tgt_ids.reserve(tgt_words.size());
  for (size_t i = 0; i < src_words.size(); ++i)
    src_ids.emplace(src_words[i], static_cast<int32_t>(i));
  for (size_t i = 0; i < tgt_words.size(); ++i)
    tgt_ids.emplace(tgt_words[i], static_cast<int32_t>(i));
  BilingualDictionary d;
  int64_t skipped = 0;
  for (const auto& [src, tgt] : word_pairs) {
    auto si = src_ids.find(src);
    auto ti = tgt_ids.find(tgt);
    if (si == src_ids.end() || ti == tgt_ids.end()) {
      ++skipped;
      continue;
    }
    d.pairs.emplace_back(si->second, ti->second);
  }
  d.dedup();
  if (oov) *oov = skipped;
  return d;
}

void SelfLearnConfig::validate() const {
  if (max_iterations < 0) throw InvalidSpec("max_iterations must be >= 0");
  if (!(tolerance > 0.0)) throw InvalidSpec("tolerance must be > 0");
  if (csls_k < 1) throw InvalidSpec("csls_k must be >= 1");
  if (induction_cutoff < 1) throw InvalidSpec("induction_cutoff must be >= 1");
  if (dropout_initial < 0.0 || dropout_initial >= 1.0) {
    throw InvalidSpec("dropout must be in [0,1)");
  }
  if (!(dropout_decay > 0.0 && dropout_decay < 1.0)) {
    throw InvalidSpec("dropout_decay must be in (0,1)");
  }
}

EmbeddingMatrix normalize_for_mapping(const EmbeddingMatrix& emb) {
  EmbeddingMatrix out = emb;
  length_normalize_rows(out);
  std::vector<double> mean(out.dim, 0.0);
  for (int32_t i = 0; i < out.rows(); ++i) {
    const float* row = out.row(i);
    for (int32_t j = 0; j < out.dim; ++j) mean[j] += row[j];
  }
  for (auto& m : mean) m /= out.rows();
  for (int32_t i = 0; i < out.rows(); ++i) {
    float* row = out.row(i);
    for (int32_t j = 0; j < out.dim; ++j) {
      row[j] = static_cast<float>(row[j] - mean[j]);
    }
  }
  length_normalize_rows(out);
  return out;
}

BilingualDictionary similarity_distribution_seed(const EmbeddingMatrix& x,
                                                 const EmbeddingMatrix& y,
                                                 int32_t cutoff) {
  if (cutoff > x.rows() || cutoff > y.rows()) {
    throw CutoffTooLarge("seed cutoff " + std::to_string(cutoff) +
                         " exceeds a vocabulary size");
  }
  if (x.dim != y.dim) throw DimensionMismatch("seed: dim mismatch");
  const auto n = static_cast<size_t>(cutoff);

  // Sorted rows of X_c X_c^T / Y_c Y_c^T are the signatures.
  auto signatures = [&](const EmbeddingMatrix& emb) {
    std::vector<float> sim(n * n);
    kernels::matmul_nt(emb.data.data(), n, emb.data.data(), n, emb.dim,
                       sim.data());
    for (size_t i = 0; i < n; ++i) {
      std::sort(sim.begin() + i * n, sim.begin() + (i + 1) * n,
                std::greater<float>());
    }
    return sim;
  };
  const std::vector<float> sx = signatures(slice_rows(x, cutoff));
  const std::vector<float> sy = signatures(slice_rows(y, cutoff));

  // argmin_j ||sx_i - sy_j||^2 via the inner-product expansion.
  std::vector<float> norms_y(n);
  for (size_t j = 0; j < n; ++j) {
    const float* row = sy.data() + j * n;
    norms_y[j] = kernels::dot(row, row, n);
  }
  std::vector<float> gram(n * n);
  kernels::matmul_nt(sx.data(), n, sy.data(), n, n, gram.data());

  BilingualDictionary seed;
  seed.pairs.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    const float* g = gram.data() + i * n;
    int32_t best = 0;
    float best_dist = norms_y[0] - 2.0f * g[0];
    for (size_t j = 1; j < n; ++j) {
      const float dist = norms_y[j] - 2.0f * g[j];
      if (dist < best_dist) {
        best_dist = dist;
        best = static_cast<int32_t>(j);
      }
    }
    seed.pairs.emplace_back(static_cast<int32_t>(i), best);
  }
  return seed;
}

std::vector<double> solve_mapping(const EmbeddingMatrix& x,
                                  const EmbeddingMatrix& y,
                                  const BilingualDictionary& dictionary,
                                  MappingMode mode) {
  if (dictionary.empty()) throw EmptyDictionary("solve_mapping");
  if (x.dim != y.dim) throw DimensionMismatch("solve_mapping: dim mismatch");
  const int32_t d = x.dim;
  if (static_cast<int32_t>(dictionary.size()) < d) {
    std::fprintf(stderr,
                 "[clwe] warning: dictionary size %zu < dimension %d; the "
                 "mapping solve is under-determined\n",
                 dictionary.size(), d);
  }
  const bool weighted = !dictionary.weights.empty();

  std::vector<int32_t> src_ids, tgt_ids;
  src_ids.reserve(dictionary.size());
  tgt_ids.reserve(dictionary.size());
  for (const auto& [s, t] : dictionary.pairs) {
    if (s < 0 || s >= x.rows() || t < 0 || t >= y.rows()) {
      throw InvalidSpec("dictionary id out of range");
    }
    src_ids.push_back(s);
    tgt_ids.push_back(t);
  }
  Eigen::MatrixXd xs = rows_to_eigen(x, src_ids);
  Eigen::MatrixXd ys = rows_to_eigen(y, tgt_ids);
  if (weighted) {
    for (size_t i = 0; i < dictionary.size(); ++i) {
      const double wgt = std::sqrt(static_cast<double>(dictionary.weights[i]));
      xs.row(i) *= wgt;
      ys.row(i) *= wgt;
    }
  }

  Eigen::MatrixXd w(d, d);
  if (mode == MappingMode::kOrthogonal) {
    const Eigen::MatrixXd m = xs.transpose() * ys;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    w = svd.matrixU() * svd.matrixV().transpose();
  } else {
    const Eigen::MatrixXd gram = xs.transpose() * xs;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    if (!lu.isInvertible()) {
      throw RankDeficient("normal equations are singular");
    }
    w = lu.solve(xs.transpose() * ys);
  }

  std::vector<double> out(static_cast<size_t>(d) * d);
  for (int32_t i = 0; i < d; ++i) {
    for (int32_t j = 0; j < d; ++j) out[static_cast<size_t>(i) * d + j] = w(i, j);
  }
  return out;
}

EmbeddingMatrix map_embeddings(const EmbeddingMatrix& x,
                               const std::vector<double>& w, int32_t dim) {
  if (x.dim != dim || w.size() != static_cast<size_t>(dim) * dim) {
    throw DimensionMismatch("map_embeddings");
  }
  EmbeddingMatrix out;
  out.words = x.words;
  out.dim = dim;
  out.data.resize(x.data.size());
  for (int32_t i = 0; i < x.rows(); ++i) {
    const float* src = x.row(i);
    float* dst = out.row(i);
    for (int32_t j = 0; j < dim; ++j) {
      double acc = 0.0;
      for (int32_t p = 0; p < dim; ++p) {
        acc += static_cast<double>(src[p]) * w[static_cast<size_t>(p) * dim + j];
      }
      dst[j] = static_cast<float>(acc);
    }
  }
  return out;
}

double mapping_objective(const EmbeddingMatrix& x, const EmbeddingMatrix& y,
                         const std::vector<double>& w, int32_t dim,
                         const BilingualDictionary& dictionary) {
  if (dictionary.empty()) throw EmptyDictionary("mapping_objective");
  double total = 0.0;
  std::vector<double> mapped(dim);
  for (const auto& [s, t] : dictionary.pairs) {
    const float* xs = x.row(s);
    const float* yt = y.row(t);
    for (int32_t j = 0; j < dim; ++j) {
      double acc = 0.0;
      for (int32_t p = 0; p < dim; ++p) {
        acc += static_cast<double>(xs[p]) * w[static_cast<size_t>(p) * dim + j];
      }
      mapped[j] = acc;
    }
    for (int32_t j = 0; j < dim; ++j) {
      const double diff = mapped[j] - yt[j];
      total += diff * diff;
    }
  }
  return total / static_cast<double>(dictionary.size());
}

Retriever::Retriever(const EmbeddingMatrix& x, const EmbeddingMatrix& y,
                     Retrieval method, int32_t csls_k)
    : method_(method), k_(csls_k), ny_(y.rows()) {
  if (x.dim != y.dim) throw DimensionMismatch("Retriever: dim mismatch");
  if (method == Retrieval::kCsls && csls_k >= y.rows()) {
    throw KTooLarge("csls_k " + std::to_string(csls_k) + " >= |Y| " +
                    std::to_string(y.rows()));
  }
  if (method == Retrieval::kCsls && csls_k < 1) {
    throw InvalidSpec("csls_k must be >= 1");
  }
  xn_ = x;
  yn_ = y;
  length_normalize_rows(xn_);
  length_normalize_rows(yn_);

  if (method_ == Retrieval::kCsls) {
    // r_targets[t] = mean cosine of y_t to its k nearest rows of X,
    // streamed in blocks of X rows.
    r_targets_.assign(ny_, 0.0f);
    std::vector<std::vector<float>> top(ny_);
    for (auto& t : top) t.reserve(k_ + 1);
    constexpr int32_t kBlock = 256;
    std::vector<float> sims(static_cast<size_t>(kBlock) * ny_);
    const int32_t nx = xn_.rows();
    for (int32_t start = 0; start < nx; start += kBlock) {
      const int32_t rows = std::min(kBlock, nx - start);
      kernels::matmul_nt(xn_.row(start), rows, yn_.data.data(), ny_, xn_.dim,
                         sims.data());
      for (int32_t r = 0; r < rows; ++r) {
        const float* row = sims.data() + static_cast<size_t>(r) * ny_;
        for (int32_t t = 0; t < ny_; ++t) {
          auto& heap = top[t];
          const float v = row[t];
          if (static_cast<int32_t>(heap.size()) < k_) {
            heap.push_back(v);
            std::push_heap(heap.begin(), heap.end(), std::greater<float>());
          } else if (v > heap.front()) {
            std::pop_heap(heap.begin(), heap.end(), std::greater<float>());
            heap.back() = v;
            std::push_heap(heap.begin(), heap.end(), std::greater<float>());
          }
        }
      }
    }
    for (int32_t t = 0; t < ny_; ++t) {
      float total = 0.0f;
      for (float v : top[t]) total += v;
      r_targets_[t] = top[t].empty() ? 0.0f : total / top[t].size();
    }
  }
}

void Retriever::scores_for(int32_t query_id, float* out) const {
  const float* q = xn_.row(query_id);
  kernels::matmul_nt(q, 1, yn_.data.data(), ny_, xn_.dim, out);
  if (method_ == Retrieval::kCosine) return;
  std::vector<float> buf(k_);
  const float r_query = mean_top_k(out, ny_, k_, buf.data());
  for (int32_t t = 0; t < ny_; ++t) {
    out[t] = 2.0f * out[t] - r_query - r_targets_[t];
  }
}

std::vector<std::vector<RankedCandidate>> csls_retrieve(
    const EmbeddingMatrix& mapped_x, const EmbeddingMatrix& y,
    const std::vector<int32_t>& query_ids, int32_t k, int32_t n_best) {
  Retriever retriever(mapped_x, y, Retrieval::kCsls, k);
  std::vector<std::vector<RankedCandidate>> results(query_ids.size());
  std::vector<float> scores(y.rows());
  std::vector<int32_t> order(y.rows());
  for (size_t qi = 0; qi < query_ids.size(); ++qi) {
    retriever.scores_for(query_ids[qi], scores.data());
    const int32_t keep = std::min<int32_t>(n_best, y.rows());
    for (int32_t i = 0; i < y.rows(); ++i) order[i] = i;
    auto better = [&](int32_t a, int32_t b) {
      if (scores[a] != scores[b]) return scores[a] > scores[b];
      return a < b;
    };
    std::partial_sort(order.begin(), order.begin() + keep, order.end(), better);
    auto& out = results[qi];
    out.reserve(keep);
    for (int32_t i = 0; i < keep; ++i) {
      out.push_back({order[i], scores[order[i]]});
    }
  }
  return results;
}

namespace {

// One streamed pass computes both induction directions: the CSLS score is
// symmetric in its arguments, so the forward row argmax and a running
// per-column max give forward and backward matches together.
void induce_pairs(const EmbeddingMatrix& mapped_x, const EmbeddingMatrix& y,
                  const SelfLearnConfig& cfg, BilingualDictionary* out) {
  Retriever retriever(mapped_x, y,
                      cfg.retrieval == Retrieval::kCsls ? Retrieval::kCsls
                                                        : Retrieval::kCosine,
                      cfg.csls_k);
  const int32_t nx = mapped_x.rows();
  const int32_t ny = y.rows();
  const bool fwd = cfg.direction != InductionDirection::kBackward;
  const bool bwd = cfg.direction != InductionDirection::kForward;
  std::vector<float> scores(ny);
  std::vector<float> col_best(ny, -1e30f);
  std::vector<int32_t> col_arg(ny, -1);
  out->pairs.clear();
  for (int32_t q = 0; q < nx; ++q) {
    retriever.scores_for(q, scores.data());
    if (fwd) {
      int32_t best = 0;
      for (int32_t t = 1; t < ny; ++t) {
        if (scores[t] > scores[best]) best = t;
      }
      out->pairs.emplace_back(q, best);
    }
    if (bwd) {
      for (int32_t t = 0; t < ny; ++t) {
        if (scores[t] > col_best[t]) {
          col_best[t] = scores[t];
          col_arg[t] = q;
        }
      }
    }
  }
  if (bwd) {
    for (int32_t t = 0; t < ny; ++t) {
      if (col_arg[t] >= 0) out->pairs.emplace_back(col_arg[t], t);
    }
  }
  out->dedup();
}

}  // namespace

MappingResult self_learn(const EmbeddingMatrix& x, const EmbeddingMatrix& y,
                         const BilingualDictionary& seed,
                         const SelfLearnConfig& cfg) {
  cfg.validate();
  if (seed.empty()) throw EmptyDictionary("self_learn seed");
  const int32_t d = x.dim;
  const int32_t cutoff =
      std::min({cfg.induction_cutoff, x.rows(), y.rows()});
  const EmbeddingMatrix x_top = slice_rows(x, cutoff);
  const EmbeddingMatrix y_top = slice_rows(y, cutoff);
  Rng rng(cfg.rng_seed);

  MappingResult result;
  result.dim = d;

  BilingualDictionary dict = seed;
  result.w = solve_mapping(x, y, dict, cfg.mode);
  double objective = mapping_objective(x, y, result.w, d, dict);
  result.objective_trace.push_back(objective);

  std::vector<double> best_w = result.w;
  double best_objective = objective;
  double dropout = cfg.dropout_initial;
  double previous = objective;

  BilingualDictionary induced;
  for (int32_t iter = 0; iter < cfg.max_iterations; ++iter) {
    result.iterations = iter + 1;
    induce_pairs(map_embeddings(x_top, result.w, d), y_top, cfg, &induced);
    BilingualDictionary working;
    if (dropout > 0.0) {
      for (const auto& pair : induced.pairs) {
        if (!rng.bernoulli(dropout)) working.pairs.push_back(pair);
      }
      if (working.empty()) working = induced;
    } else {
      working = induced;
    }
    result.w = solve_mapping(x, y, working, cfg.mode);
    objective = mapping_objective(x, y, result.w, d, working);
    result.objective_trace.push_back(objective);
    if (objective < best_objective) {
      best_objective = objective;
      best_w = result.w;
    }
    const double improvement =
        (previous - objective) / std::max(std::abs(previous), 1e-12);
    previous = objective;
    if (improvement < cfg.tolerance) {
      if (dropout > 0.0) {
        const double keep = std::min(1.0, (1.0 - dropout) / cfg.dropout_decay);
        dropout = keep >= 1.0 - 1e-12 ? 0.0 : 1.0 - keep;
      } else {
        result.converged = true;
        break;
      }
    }
  }

  result.w = std::move(best_w);
  induce_pairs(map_embeddings(x_top, result.w, d), y_top, cfg,
               &result.final_dictionary);
  return result;
}

void save_matrix(const std::vector<double>& w, int32_t dim,
                 const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write matrix: " + path);
  out << dim << ' ' << dim << '\n';
  char buf[40];
  for (int32_t i = 0; i < dim; ++i) {
    for (int32_t j = 0; j < dim; ++j) {
      std::snprintf(buf, sizeof(buf), j ? " %.9f" : "%.9f",
                    w[static_cast<size_t>(i) * dim + j]);
      out << buf;
    }
    out << '\n';
  }
}

std::vector<double> load_matrix(const std::string& path, int32_t* dim) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open matrix: " + path);
  int32_t rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows != cols || rows < 1) {
    throw ParseError("matrix header must be `d d`", 1);
  }
  std::vector<double> w(static_cast<size_t>(rows) * cols);
  for (auto& value : w) {
    if (!(in >> value)) throw ParseError("truncated matrix", 2);
  }
  *dim = rows;
  return w;
}

}  // namespace clwe
