#include "clwe/align.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace clwe {

namespace {
constexpr int32_t kNull = 0;
}

int32_t AlignmentModel::src_id(const std::string& word) const {
  auto it = src_ids_.find(word);
  return it == src_ids_.end() ? -1 : it->second;
}

int32_t AlignmentModel::tgt_id(const std::string& word) const {
  auto it = tgt_ids_.find(word);
  return it == tgt_ids_.end() ? -1 : it->second;
}

AlignmentModel AlignmentModel::train(const std::vector<SentencePair>& pairs,
                                     int32_t em_iterations, bool use_null) {
  if (pairs.empty()) throw EmptyParallel("ibm1_align");
  if (em_iterations < 1) throw InvalidSpec("em_iterations must be >= 1");

  AlignmentModel model;
  model.use_null_ = use_null;
  model.src_words_.push_back("<null>");
  model.src_ids_.emplace("<null>", kNull);
  auto intern = [](std::vector<std::string>& words,
                   std::unordered_map<std::string, int32_t>& ids,
                   const std::string& word) {
    auto it = ids.find(word);
    if (it != ids.end()) return it->second;
    const auto id = static_cast<int32_t>(words.size());
    words.push_back(word);
    ids.emplace(word, id);
    return id;
  };

  std::vector<std::pair<std::vector<int32_t>, std::vector<int32_t>>> id_pairs;
  id_pairs.reserve(pairs.size());
  for (const auto& [src, tgt] : pairs) {
    std::vector<int32_t> s, t;
    s.reserve(src.size());
    t.reserve(tgt.size());
    for (const auto& word : src) {
      s.push_back(intern(model.src_words_, model.src_ids_, word));
    }
    for (const auto& word : tgt) {
      t.push_back(intern(model.tgt_words_, model.tgt_ids_, word));
    }
    if (s.empty() || t.empty()) continue;
    id_pairs.emplace_back(std::move(s), std::move(t));
  }
  if (id_pairs.empty()) throw EmptyParallel("no non-empty sentence pair");

  // Uniform initialization over each source word's co-occurring targets.
  model.t_.resize(model.src_words_.size());
  for (const auto& [src, tgt] : id_pairs) {
    for (int32_t t : tgt) {
      if (use_null) model.t_[kNull][t] = 1.0;
      for (int32_t s : src) model.t_[s][t] = 1.0;
    }
  }
  for (auto& dist : model.t_) {
    if (dist.empty()) continue;
    const double u = 1.0 / dist.size();
    for (auto& [tid, p] : dist) p = u;
  }

  auto log_likelihood = [&] {
    double ll = 0.0;
    for (const auto& [src, tgt] : id_pairs) {
      const double denom = static_cast<double>(src.size() + (use_null ? 1 : 0));
      for (int32_t t : tgt) {
        double total = 0.0;
        if (use_null) {
          auto it = model.t_[kNull].find(t);
          if (it != model.t_[kNull].end()) total += it->second;
        }
        for (int32_t s : src) {
          auto it = model.t_[s].find(t);
          if (it != model.t_[s].end()) total += it->second;
        }
        ll += std::log(std::max(total / denom, 1e-300));
      }
    }
    return ll;
  };

  std::vector<std::unordered_map<int32_t, double>> counts(model.t_.size());
  for (int32_t iter = 0; iter < em_iterations; ++iter) {
    model.likelihood_.push_back(log_likelihood());
    for (auto& c : counts) c.clear();
    for (const auto& [src, tgt] : id_pairs) {
      for (int32_t t : tgt) {
        double z = 0.0;
        if (use_null) z += model.t_[kNull].at(t);
        for (int32_t s : src) z += model.t_[s].at(t);
        if (z <= 0.0) continue;
        if (use_null) counts[kNull][t] += model.t_[kNull].at(t) / z;
        for (int32_t s : src) counts[s][t] += model.t_[s].at(t) / z;
      }
    }
    for (size_t s = 0; s < counts.size(); ++s) {
      double total = 0.0;
      for (const auto& [tid, c] : counts[s]) total += c;
      if (total <= 0.0) continue;
      for (const auto& [tid, c] : counts[s]) model.t_[s][tid] = c / total;
    }
  }
  model.likelihood_.push_back(log_likelihood());
  return model;
}

double AlignmentModel::prob(const std::string& target,
                            const std::string& source) const {
  const int32_t s = src_id(source);
  const int32_t t = tgt_id(target);
  if (s < 0 || t < 0) return 0.0;
  auto it = t_[s].find(t);
  return it == t_[s].end() ? 0.0 : it->second;
}

double AlignmentModel::null_prob(const std::string& target) const {
  if (!use_null_) return 0.0;
  const int32_t t = tgt_id(target);
  if (t < 0) return 0.0;
  auto it = t_[kNull].find(t);
  return it == t_[kNull].end() ? 0.0 : it->second;
}

std::vector<int32_t> AlignmentModel::viterbi(const SentencePair& pair) const {
  const auto& [src, tgt] = pair;
  std::vector<int32_t> alignment(tgt.size(), -1);
  for (size_t j = 0; j < tgt.size(); ++j) {
    double best = -1.0;
    int32_t best_i = -1;
    for (size_t i = 0; i < src.size(); ++i) {
      const double p = prob(tgt[j], src[i]);
      if (p > best) {
        best = p;
        best_i = static_cast<int32_t>(i);
      }
    }
    // Null wins only when strictly better than every real position.
    if (use_null_ && null_prob(tgt[j]) > best) best_i = -1;
    alignment[j] = best_i;
  }
  return alignment;
}

AlignmentModel ibm1_align(const std::vector<SentencePair>& pairs,
                          int32_t em_iterations, bool use_null) {
  return AlignmentModel::train(pairs, em_iterations, use_null);
}

std::vector<std::pair<int32_t, int32_t>> symmetrize_alignments(
    const std::vector<std::pair<int32_t, int32_t>>& forward,
    const std::vector<std::pair<int32_t, int32_t>>& backward, int32_t src_len,
    int32_t tgt_len) {
  std::set<std::pair<int32_t, int32_t>> fwd(forward.begin(), forward.end());
  std::set<std::pair<int32_t, int32_t>> bwd(backward.begin(), backward.end());
  std::set<std::pair<int32_t, int32_t>> result;
  std::set_intersection(fwd.begin(), fwd.end(), bwd.begin(), bwd.end(),
                        std::inserter(result, result.begin()));
  std::set<std::pair<int32_t, int32_t>> union_set;
  std::set_union(fwd.begin(), fwd.end(), bwd.begin(), bwd.end(),
                 std::inserter(union_set, union_set.begin()));

  if (result.empty() && !union_set.empty()) {
    result.insert(*union_set.begin());
  }
  std::vector<bool> row_done(src_len, false), col_done(tgt_len, false);
  for (const auto& [i, j] : result) {
    row_done[i] = true;
    col_done[j] = true;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [i, j] : union_set) {
      if (result.count({i, j})) continue;
      if (row_done[i] && col_done[j]) continue;
      bool adjacent = false;
      for (int32_t di = -1; di <= 1 && !adjacent; ++di) {
        for (int32_t dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          if (result.count({i + di, j + dj})) {
            adjacent = true;
            break;
          }
        }
      }
      if (adjacent) {
        result.insert({i, j});
        row_done[i] = true;
        col_done[j] = true;
        changed = true;
      }
    }
  }
  return {result.begin(), result.end()};
}

PhraseTable extract_phrases(const std::vector<SentencePair>& pairs,
                            const AlignmentModel& forward,
                            const AlignmentModel& backward, int32_t max_len) {
  if (max_len < 1) throw InvalidSpec("max_len must be >= 1");
  std::unordered_map<std::string, std::unordered_map<std::string, int64_t>>
      counts;
  std::unordered_map<std::string, int64_t> src_totals;

  auto join = [](const std::vector<std::string>& tokens, int32_t from,
                 int32_t to) {
    std::string out = tokens[from];
    for (int32_t i = from + 1; i <= to; ++i) {
      out += ' ';
      out += tokens[i];
    }
    return out;
  };

  for (const auto& pair : pairs) {
    const auto src_len = static_cast<int32_t>(pair.first.size());
    const auto tgt_len = static_cast<int32_t>(pair.second.size());
    if (src_len == 0 || tgt_len == 0) continue;

    const auto fwd_align = forward.viterbi(pair);
    SentencePair swapped{pair.second, pair.first};
    const auto bwd_align = backward.viterbi(swapped);
    std::vector<std::pair<int32_t, int32_t>> fwd_pts, bwd_pts;
    for (int32_t j = 0; j < tgt_len; ++j) {
      if (fwd_align[j] >= 0) fwd_pts.emplace_back(fwd_align[j], j);
    }
    for (int32_t i = 0; i < src_len; ++i) {
      if (bwd_align[i] >= 0) bwd_pts.emplace_back(i, bwd_align[i]);
    }
    const auto points =
        symmetrize_alignments(fwd_pts, bwd_pts, src_len, tgt_len);
    if (points.empty()) continue;

    // Per-row/column alignment spans for O(len) consistency checks.
    std::vector<int32_t> row_min(src_len, tgt_len), row_max(src_len, -1);
    std::vector<int32_t> col_min(tgt_len, src_len), col_max(tgt_len, -1);
    for (const auto& [i, j] : points) {
      row_min[i] = std::min(row_min[i], j);
      row_max[i] = std::max(row_max[i], j);
      col_min[j] = std::min(col_min[j], i);
      col_max[j] = std::max(col_max[j], i);
    }

    for (int32_t i1 = 0; i1 < src_len; ++i1) {
      for (int32_t i2 = i1; i2 < std::min(src_len, i1 + max_len); ++i2) {
        for (int32_t j1 = 0; j1 < tgt_len; ++j1) {
          for (int32_t j2 = j1; j2 < std::min(tgt_len, j1 + max_len); ++j2) {
            bool has_point = false;
            bool consistent = true;
            for (int32_t i = i1; i <= i2 && consistent; ++i) {
              if (row_max[i] < 0) continue;
              has_point = has_point || (row_min[i] >= j1 && row_max[i] <= j2);
              if (row_min[i] < j1 || row_max[i] > j2) consistent = false;
            }
            if (!consistent || !has_point) continue;
            for (int32_t j = j1; j <= j2 && consistent; ++j) {
              if (col_max[j] < 0) continue;
              if (col_min[j] < i1 || col_max[j] > i2) consistent = false;
            }
            if (!consistent) continue;
            const std::string src_phrase = join(pair.first, i1, i2);
            const std::string tgt_phrase = join(pair.second, j1, j2);
            ++counts[src_phrase][tgt_phrase];
            ++src_totals[src_phrase];
          }
        }
      }
    }
  }

  PhraseTable table;
  table.max_len = max_len;
  for (const auto& [src, targets] : counts) {
    const double total = static_cast<double>(src_totals.at(src));
    for (const auto& [tgt, count] : targets) {
      table.add(src, tgt, std::log(static_cast<double>(count) / total));
    }
  }
  table.finalize();
  return table;
}

}  // namespace clwe
