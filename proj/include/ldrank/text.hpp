#pragma once

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ldrank/entity_graph.hpp"
#include "ldrank/errors.hpp"
#include "ldrank/porter.hpp"
#include "ldrank/sparse.hpp"
#include "ldrank/stopwords.hpp"

namespace ldrank {

using Stemmer = std::function<std::string(const std::string&)>;

inline Stemmer identity_stemmer() {
  return [](const std::string& t) { return t; };
}

inline Stemmer porter_stemmer() {
  return [](const std::string& t) { return porter_stem(t); };
}

// Lowercase, split on any non-alphanumeric byte, drop tokens shorter than
// two characters, drop stopwords before stemming, then stem.
inline std::vector<std::string> tokenize(std::string_view text, const std::set<std::string>& stopwords,
                                         const Stemmer& stemmer) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (current.size() >= 2 && !stopwords.contains(current)) tokens.push_back(stemmer(current));
    current.clear();
  };
  for (char c : text) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'))
      current += c;
    else
      flush();
  }
  flush();
  return tokens;
}

// Stopword file: one token per line, '#' comments allowed.
inline std::set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open stopword file: " + path);
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    words.insert(line);
  }
  return words;
}

// Post-processing terms in first-appearance order; term<->column bijection.
class Vocabulary {
 public:
  int intern(const std::string& term) {
    auto [it, inserted] = index_.emplace(term, static_cast<int>(terms_.size()));
    if (inserted) terms_.push_back(term);
    return it->second;
  }

  int size() const noexcept { return static_cast<int>(terms_.size()); }
  const std::string& term(int col) const { return terms_.at(static_cast<std::size_t>(col)); }
  const std::vector<std::string>& terms() const noexcept { return terms_; }

  std::optional<int> find(const std::string& term) const {
    auto it = index_.find(term);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, int> index_;
};

enum class TermWeighting { Tf, TfIdf };

struct TokenizerOptions {
  const std::set<std::string>* stopwords = nullptr;  // nullptr = bundled list
  Stemmer stemmer;                                   // empty = Porter
};

// Sparse entity-term matrix R: one row per graph entity (intern order), one
// column per vocabulary term. Rows of entities without text stay empty.
struct EntityTermMatrix {
  SparseMatrixCcs matrix;
  Vocabulary vocabulary;
};

inline EntityTermMatrix build_matrix(const EntityGraph& g,
                                     TermWeighting weighting = TermWeighting::Tf,
                                     const TokenizerOptions& options = {}) {
  const std::set<std::string>& stopwords =
      options.stopwords ? *options.stopwords : english_stopwords();
  Stemmer stemmer = options.stemmer ? options.stemmer : porter_stemmer();

  const int n = g.entity_count();
  Vocabulary vocab;
  std::vector<std::vector<std::pair<int, int>>> entity_counts(static_cast<std::size_t>(n));
  std::vector<int> document_frequency;
  bool any_token = false;

  for (EntityIndex e = 0; e < n; ++e) {
    std::map<int, int> counts;
    for (const std::string& token : tokenize(g.text(e), stopwords, stemmer))
      ++counts[vocab.intern(token)];
    document_frequency.resize(static_cast<std::size_t>(vocab.size()), 0);
    for (const auto& [term, count] : counts) {
      entity_counts[static_cast<std::size_t>(e)].emplace_back(term, count);
      ++document_frequency[static_cast<std::size_t>(term)];
      any_token = true;
    }
  }
  if (!any_token)
    throw InputError("no entity has any token: the entity-term matrix would be zero");

  std::vector<Coordinate> entries;
  for (EntityIndex e = 0; e < n; ++e) {
    for (const auto& [term, count] : entity_counts[static_cast<std::size_t>(e)]) {
      double v = static_cast<double>(count);
      if (weighting == TermWeighting::TfIdf)
        v *= std::log(static_cast<double>(n) /
                      static_cast<double>(document_frequency[static_cast<std::size_t>(term)]));
      if (v != 0.0) entries.push_back({static_cast<int>(e), term, v});
    }
  }

  EntityTermMatrix out;
  out.matrix = SparseMatrixCcs::from_coordinates(n, vocab.size(), std::move(entries));
  out.vocabulary = std::move(vocab);
  return out;
}

}  // namespace ldrank
