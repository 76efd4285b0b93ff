#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "clwe/error.hpp"

namespace clwe {

// Tokenized text, one token sequence per sentence. Sentences that come out
// empty after normalization are dropped on construction paths.
struct Corpus {
  std::vector<std::vector<std::string>> sentences;
  std::string language_tag;

  size_t size() const { return sentences.size(); }
  size_t token_count() const;
};

// Splits on whitespace, breaks out punctuation code points as single-char
// tokens, optionally lowercases (ASCII, Latin-1/Ext-A, Greek, Cyrillic).
std::vector<std::string> normalize_text(const std::string& raw, bool lowercase);

// Runs normalize_text over every line; empty results are dropped.
Corpus normalize_corpus(const std::vector<std::string>& raw_lines,
                        const std::string& language_tag, bool lowercase);

// word <-> dense id, ids assigned by descending frequency (ties broken
// lexicographically). total_token_count() covers the stored words only.
class Vocabulary {
 public:
  Vocabulary() = default;

  static Vocabulary build(const Corpus& corpus, int64_t min_count);

  int32_t id_of(const std::string& word) const {
    auto it = word_to_id_.find(word);
    return it == word_to_id_.end() ? -1 : it->second;
  }
  bool contains(const std::string& word) const { return id_of(word) >= 0; }
  const std::string& word(int32_t id) const { return words_[id]; }
  int64_t frequency(int32_t id) const { return freqs_[id]; }
  int32_t size() const { return static_cast<int32_t>(words_.size()); }
  int64_t total_token_count() const { return total_; }
  const std::vector<std::string>& words() const { return words_; }

 private:
  std::unordered_map<std::string, int32_t> word_to_id_;
  std::vector<std::string> words_;
  std::vector<int64_t> freqs_;
  int64_t total_ = 0;
};

// Distinct word count over total token count, in (0, 1].
double type_token_ratio(const Corpus& corpus);

// a's sentences followed by b's; language tags must match.
Corpus concat_corpora(const Corpus& a, const Corpus& b);

// One sentence per line, tokens space-separated, UTF-8.
Corpus load_corpus(const std::string& path, const std::string& language_tag);
void save_corpus(const Corpus& corpus, const std::string& path);

// Word-level translation pairs, TSV `source<TAB>target`.
using WordPairs = std::vector<std::pair<std::string, std::string>>;
WordPairs load_word_pairs(const std::string& path);
void save_word_pairs(const WordPairs& pairs, const std::string& path);

}  // namespace clwe
