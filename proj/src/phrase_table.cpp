#include "clwe/phrase_table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "clwe/kernels.hpp"

namespace clwe {

void PhraseTable::add(const std::string& source, const std::string& target,
                      double log_score) {
  entries_[source].push_back({target, log_score});
}

void PhraseTable::finalize() {
  for (auto& [source, candidates] : entries_) {
    std::sort(candidates.begin(), candidates.end(),
              [](const PhraseCandidate& a, const PhraseCandidate& b) {
                if (a.log_score != b.log_score)
                  return a.log_score > b.log_score;
                return a.target < b.target;
              });
  }
}

void PhraseTable::merge(const PhraseTable& other) {
  max_len = std::max(max_len, other.max_len);
  for (const auto& [source, candidates] : other.entries_) {
    auto& mine = entries_[source];
    for (const auto& cand : candidates) {
      auto it = std::find_if(mine.begin(), mine.end(),
                             [&](const PhraseCandidate& c) {
                               return c.target == cand.target;
                             });
      if (it == mine.end()) {
        mine.push_back(cand);
      } else if (cand.log_score > it->log_score) {
        it->log_score = cand.log_score;
      }
    }
  }
  finalize();
}

void PhraseTable::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write phrase table: " + path);
  std::vector<std::string> sources;
  sources.reserve(entries_.size());
  for (const auto& [source, unused] : entries_) sources.push_back(source);
  std::sort(sources.begin(), sources.end());
  char buf[40];
  for (const auto& source : sources) {
    for (const auto& cand : entries_.at(source)) {
      std::snprintf(buf, sizeof(buf), "%.9g", cand.log_score);
      out << source << '\t' << cand.target << '\t' << buf << '\n';
    }
  }
}

PhraseTable PhraseTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open phrase table: " + path);
  PhraseTable table;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string::npos ? tab1 : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos) {
      throw ParseError("expected `src<TAB>tgt<TAB>score`", lineno);
    }
    const std::string source = line.substr(0, tab1);
    const std::string target = line.substr(tab1 + 1, tab2 - tab1 - 1);
    double score;
    try {
      score = std::stod(line.substr(tab2 + 1));
    } catch (...) {
      throw ParseError("bad score", lineno);
    }
    table.add(source, target, score);
    const auto len = 1 + std::count(source.begin(), source.end(), ' ');
    table.max_len = std::max<int32_t>(table.max_len, static_cast<int32_t>(len));
  }
  table.finalize();
  return table;
}

PhraseTable induce_phrase_table(const std::vector<double>& w, int32_t dim,
                                const EmbeddingMatrix& x,
                                const EmbeddingMatrix& y, int32_t top_phrases,
                                int32_t n_neighbors, double temperature,
                                int32_t csls_k) {
  if (top_phrases > x.rows()) {
    throw CutoffTooLarge("top_phrases exceeds source vocabulary");
  }
  if (n_neighbors < 1) throw InvalidSpec("n_neighbors must be >= 1");
  if (!(temperature > 0.0)) throw InvalidSpec("temperature must be > 0");

  EmbeddingMatrix mapped = map_embeddings(x, w, dim);
  length_normalize_rows(mapped);
  EmbeddingMatrix yn = y;
  length_normalize_rows(yn);

  std::vector<int32_t> queries(top_phrases);
  for (int32_t i = 0; i < top_phrases; ++i) queries[i] = i;
  const auto ranked = csls_retrieve(mapped, yn, queries,
                                    std::min<int32_t>(csls_k, yn.rows() - 1),
                                    std::min<int32_t>(n_neighbors, yn.rows()));

  PhraseTable table;
  table.max_len = 1;
  for (int32_t q = 0; q < top_phrases; ++q) {
    const auto& candidates = ranked[q];
    // Softmax over the candidates' cosines at the given temperature.
    std::vector<double> cosines(candidates.size());
    double max_cos = -2.0;
    for (size_t c = 0; c < candidates.size(); ++c) {
      cosines[c] = kernels::dot(mapped.row(q), yn.row(candidates[c].id), dim);
      max_cos = std::max(max_cos, cosines[c]);
    }
    double z = 0.0;
    for (double& v : cosines) {
      v = (v - max_cos) / temperature;
      z += std::exp(v);
    }
    const double log_z = std::log(z);
    for (size_t c = 0; c < candidates.size(); ++c) {
      table.add(x.words[q], y.words[candidates[c].id], cosines[c] - log_z);
    }
  }
  table.finalize();
  return table;
}

}  // namespace clwe
