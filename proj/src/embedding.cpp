#include "clwe/embedding.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "clwe/kernels.hpp"

namespace clwe {

EmbeddingMatrix EmbeddingMatrix::zeros(std::vector<std::string> words,
                                       int32_t dim) {
  EmbeddingMatrix emb;
  emb.words = std::move(words);
  emb.dim = dim;
  emb.data.assign(emb.words.size() * static_cast<size_t>(dim), 0.0f);
  return emb;
}

void save_embeddings(const EmbeddingMatrix& emb, const std::string& path) {
  for (float v : emb.data) {
    if (!std::isfinite(v)) throw InvalidSpec("non-finite embedding value");
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write embeddings: " + path);
  out << emb.rows() << ' ' << emb.dim << '\n';
  char buf[32];
  for (int32_t i = 0; i < emb.rows(); ++i) {
    out << emb.words[i];
    const float* row = emb.row(i);
    for (int32_t j = 0; j < emb.dim; ++j) {
      std::snprintf(buf, sizeof(buf), " %.6f", row[j]);
      out << buf;
    }
    out << '\n';
  }
}

EmbeddingMatrix load_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embeddings: " + path);
  std::string line;
  size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError("missing header", 1);
  ++lineno;
  std::istringstream header(line);
  int64_t v = -1, d = -1;
  if (!(header >> v >> d) || v < 0 || d < 1) {
    throw ParseError("header must be `V d`", lineno);
  }
  EmbeddingMatrix emb;
  emb.dim = static_cast<int32_t>(d);
  emb.words.reserve(v);
  emb.data.reserve(static_cast<size_t>(v) * d);
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string word;
    if (!(ss >> word)) throw ParseError("missing word", lineno);
    for (int64_t j = 0; j < d; ++j) {
      float value;
      if (!(ss >> value)) throw ParseError("expected " + std::to_string(d) +
                                               " values for `" + word + "`",
                                           lineno);
      emb.data.push_back(value);
    }
    float extra;
    if (ss >> extra) throw ParseError("too many values for `" + word + "`",
                                      lineno);
    emb.words.push_back(std::move(word));
  }
  if (static_cast<int64_t>(emb.words.size()) != v) {
    throw ParseError("header declares " + std::to_string(v) + " rows, found " +
                         std::to_string(emb.words.size()),
                     lineno + 1);
  }
  return emb;
}

double cosine_similarity(const float* u, const float* v, int32_t dim) {
  const double nu = std::sqrt(static_cast<double>(kernels::dot(u, u, dim)));
  const double nv = std::sqrt(static_cast<double>(kernels::dot(v, v, dim)));
  if (nu == 0.0 || nv == 0.0) throw ZeroVector("cosine of zero vector");
  return static_cast<double>(kernels::dot(u, v, dim)) / (nu * nv);
}

void length_normalize_rows(EmbeddingMatrix& emb) {
  for (int32_t i = 0; i < emb.rows(); ++i) {
    float* row = emb.row(i);
    const float norm2 = kernels::dot(row, row, emb.dim);
    if (norm2 <= 0.0f) {
      throw ZeroVector("zero row " + std::to_string(i) + " (`" + emb.words[i] +
                       "`)");
    }
    kernels::scale(row, 1.0f / std::sqrt(norm2), emb.dim);
  }
}

EmbeddingMatrix slice_rows(const EmbeddingMatrix& emb, int32_t top) {
  if (top > emb.rows()) throw CutoffTooLarge(std::to_string(top) + " > " +
                                             std::to_string(emb.rows()));
  EmbeddingMatrix out;
  out.dim = emb.dim;
  out.words.assign(emb.words.begin(), emb.words.begin() + top);
  out.data.assign(emb.data.begin(),
                  emb.data.begin() + static_cast<size_t>(top) * emb.dim);
  return out;
}

}  // namespace clwe
