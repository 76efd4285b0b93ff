#include "clwe/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace clwe {

namespace {

// Decodes one UTF-8 code point; malformed bytes are passed through as
// Latin-1 so normalization never throws.
uint32_t decode_utf8(const std::string& s, size_t& i) {
  const auto byte = [&](size_t j) { return static_cast<unsigned char>(s[j]); };
  unsigned char c = byte(i);
  if (c < 0x80) {
    i += 1;
    return c;
  }
  auto cont = [&](size_t j) {
    return j < s.size() && (byte(j) & 0xC0) == 0x80;
  };
  if ((c & 0xE0) == 0xC0 && cont(i + 1)) {
    uint32_t cp = ((c & 0x1Fu) << 6) | (byte(i + 1) & 0x3Fu);
    i += 2;
    return cp;
  }
  if ((c & 0xF0) == 0xE0 && cont(i + 1) && cont(i + 2)) {
    uint32_t cp = ((c & 0x0Fu) << 12) | ((byte(i + 1) & 0x3Fu) << 6) |
                  (byte(i + 2) & 0x3Fu);
    i += 3;
    return cp;
  }
  if ((c & 0xF8) == 0xF0 && cont(i + 1) && cont(i + 2) && cont(i + 3)) {
    uint32_t cp = ((c & 0x07u) << 18) | ((byte(i + 1) & 0x3Fu) << 12) |
                  ((byte(i + 2) & 0x3Fu) << 6) | (byte(i + 3) & 0x3Fu);
    i += 4;
    return cp;
  }
  i += 1;
  return c;
}

void encode_utf8(uint32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_space_cp(uint32_t cp) {
  if (cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' ||
      cp == '\v')
    return true;
  if (cp == 0x00A0 || cp == 0x1680 || cp == 0x2028 || cp == 0x2029 ||
      cp == 0x202F || cp == 0x205F || cp == 0x3000)
    return true;
  return cp >= 0x2000 && cp <= 0x200A;
}

bool is_punct_cp(uint32_t cp) {
  if (cp < 0x80) {
    return (cp >= '!' && cp <= '/') || (cp >= ':' && cp <= '@') ||
           (cp >= '[' && cp <= '`') || (cp >= '{' && cp <= '~');
  }
  if (cp == 0x00A1 || cp == 0x00A7 || cp == 0x00AB || cp == 0x00BB ||
      cp == 0x00BF || cp == 0x00B7)
    return true;
  if (cp >= 0x2010 && cp <= 0x2027) return true;  // dashes, quotes, dots
  if (cp >= 0x2030 && cp <= 0x205E) return true;  // general punctuation
  if (cp >= 0x3001 && cp <= 0x303F) return true;  // CJK punctuation
  if (cp >= 0xFF01 && cp <= 0xFF0F) return true;  // fullwidth forms
  if (cp >= 0xFF1A && cp <= 0xFF20) return true;
  if (cp >= 0xFF3B && cp <= 0xFF40) return true;
  if (cp >= 0xFF5B && cp <= 0xFF65) return true;
  return false;
}

uint32_t lowercase_cp(uint32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 0x20;
  if (cp >= 0x0100 && cp <= 0x0177) return cp | 1u;  // Latin Ext-A pairs
  if (cp >= 0x0179 && cp <= 0x017E) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp >= 0x0391 && cp <= 0x03A9 && cp != 0x03A2) return cp + 0x20;  // Greek
  if (cp >= 0x0410 && cp <= 0x042F) return cp + 0x20;  // Cyrillic
  if (cp >= 0x0400 && cp <= 0x040F) return cp + 0x50;
  return cp;
}

}  // namespace

std::vector<std::string> normalize_text(const std::string& raw,
                                        bool lowercase) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(current);
      current.clear();
    }
  };
  size_t i = 0;
  while (i < raw.size()) {
    uint32_t cp = decode_utf8(raw, i);
    if (is_space_cp(cp)) {
      flush();
      continue;
    }
    if (lowercase) cp = lowercase_cp(cp);
    if (is_punct_cp(cp)) {
      flush();
      std::string tok;
      encode_utf8(cp, tok);
      tokens.push_back(tok);
      continue;
    }
    encode_utf8(cp, current);
  }
  flush();
  return tokens;
}

Corpus normalize_corpus(const std::vector<std::string>& raw_lines,
                        const std::string& language_tag, bool lowercase) {
  Corpus corpus;
  corpus.language_tag = language_tag;
  for (const auto& line : raw_lines) {
    auto tokens = normalize_text(line, lowercase);
    if (!tokens.empty()) corpus.sentences.push_back(std::move(tokens));
  }
  return corpus;
}

size_t Corpus::token_count() const {
  size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

Vocabulary Vocabulary::build(const Corpus& corpus, int64_t min_count) {
  if (min_count < 1) throw InvalidSpec("min_count must be >= 1");
  std::unordered_map<std::string, int64_t> counts;
  for (const auto& sentence : corpus.sentences) {
    for (const auto& token : sentence) ++counts[token];
  }
  std::vector<std::pair<std::string, int64_t>> kept;
  kept.reserve(counts.size());
  for (auto& [word, freq] : counts) {
    if (freq >= min_count) kept.emplace_back(word, freq);
  }
  if (kept.empty()) {
    throw EmptyVocabulary("no word reaches min_count=" +
                          std::to_string(min_count));
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  Vocabulary vocab;
  vocab.words_.reserve(kept.size());
  vocab.freqs_.reserve(kept.size());
  for (auto& [word, freq] : kept) {
    vocab.word_to_id_.emplace(word, static_cast<int32_t>(vocab.words_.size()));
    vocab.words_.push_back(word);
    vocab.freqs_.push_back(freq);
    vocab.total_ += freq;
  }
  return vocab;
}

double type_token_ratio(const Corpus& corpus) {
  std::unordered_set<std::string> types;
  size_t tokens = 0;
  for (const auto& sentence : corpus.sentences) {
    for (const auto& token : sentence) {
      types.insert(token);
      ++tokens;
    }
  }
  if (tokens == 0) throw EmptyCorpus("type_token_ratio on empty corpus");
  return static_cast<double>(types.size()) / static_cast<double>(tokens);
}

Corpus concat_corpora(const Corpus& a, const Corpus& b) {
  if (a.language_tag != b.language_tag) {
    throw LanguageMismatch(a.language_tag + " vs " + b.language_tag);
  }
  Corpus out;
  out.language_tag = a.language_tag;
  out.sentences.reserve(a.size() + b.size());
  out.sentences.insert(out.sentences.end(), a.sentences.begin(),
                       a.sentences.end());
  out.sentences.insert(out.sentences.end(), b.sentences.begin(),
                       b.sentences.end());
  return out;
}

Corpus load_corpus(const std::string& path, const std::string& language_tag) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file: " + path);
  Corpus corpus;
  corpus.language_tag = language_tag;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> tokens;
    std::istringstream ss(line);
    std::string token;
    while (ss >> token) tokens.push_back(token);
    if (!tokens.empty()) corpus.sentences.push_back(std::move(tokens));
  }
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write corpus file: " + path);
  for (const auto& sentence : corpus.sentences) {
    for (size_t i = 0; i < sentence.size(); ++i) {
      if (i) out << ' ';
      out << sentence[i];
    }
    out << '\n';
  }
}

WordPairs load_word_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dictionary file: " + path);
  WordPairs pairs;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
      throw ParseError("expected `source<TAB>target`", lineno);
    }
    pairs.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return pairs;
}

void save_word_pairs(const WordPairs& pairs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write dictionary file: " + path);
  for (const auto& [src, tgt] : pairs) out << src << '\t' << tgt << '\n';
}

}  // namespace clwe
