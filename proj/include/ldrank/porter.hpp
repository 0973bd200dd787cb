#pragma once

#include <string>
#include <string_view>

namespace ldrank {

namespace detail::porter {

// Vowels are a,e,i,o,u plus y when preceded by a consonant.
inline bool is_consonant(const std::string& w, std::size_t i) {
  char c = w[i];
  if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') return false;
  if (c == 'y') return i == 0 ? true : !is_consonant(w, i - 1);
  return true;
}

// Number of VC sequences in w[0..len), i.e. m in [C](VC)^m[V].
inline int measure(const std::string& w, std::size_t len) {
  int m = 0;
  std::size_t i = 0;
  while (i < len && is_consonant(w, i)) ++i;
  while (i < len) {
    while (i < len && !is_consonant(w, i)) ++i;
    if (i == len) break;
    ++m;
    while (i < len && is_consonant(w, i)) ++i;
  }
  return m;
}

inline bool has_vowel(const std::string& w, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i)
    if (!is_consonant(w, i)) return true;
  return false;
}

inline bool ends_double_consonant(const std::string& w, std::size_t len) {
  return len >= 2 && w[len - 1] == w[len - 2] && is_consonant(w, len - 1);
}

// *o condition: stem ends consonant-vowel-consonant and the final consonant
// is not w, x or y.
inline bool ends_cvc(const std::string& w, std::size_t len) {
  if (len < 3) return false;
  if (!is_consonant(w, len - 3) || is_consonant(w, len - 2) || !is_consonant(w, len - 1))
    return false;
  char c = w[len - 1];
  return c != 'w' && c != 'x' && c != 'y';
}

inline bool ends_with(const std::string& w, std::string_view suffix) {
  return w.size() >= suffix.size() && w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
  int min_measure;  // condition m > min_measure on the stem
};

// Longest matching suffix wins; if its measure condition fails nothing else
// in the table is tried.
inline bool apply_table(std::string& w, std::initializer_list<Rule> rules) {
  const Rule* best = nullptr;
  for (const Rule& r : rules)
    if (ends_with(w, r.suffix) && (!best || r.suffix.size() > best->suffix.size())) best = &r;
  if (!best) return false;
  std::size_t stem_len = w.size() - best->suffix.size();
  if (measure(w, stem_len) > best->min_measure) {
    w.resize(stem_len);
    w.append(best->replacement);
  }
  return true;
}

}  // namespace detail::porter

// Classic Porter (1980) stemming of a lowercase token. Tokens shorter than
// three characters are returned unchanged.
inline std::string porter_stem(std::string w) {
  using namespace detail::porter;
  if (w.size() <= 2) return w;

  // Step 1a
  if (ends_with(w, "sses")) {
    w.resize(w.size() - 2);
  } else if (ends_with(w, "ies")) {
    w.resize(w.size() - 2);
  } else if (!ends_with(w, "ss") && ends_with(w, "s")) {
    w.resize(w.size() - 1);
  }

  // Step 1b
  bool cleanup = false;
  if (ends_with(w, "eed")) {
    if (measure(w, w.size() - 3) > 0) w.resize(w.size() - 1);
  } else if (ends_with(w, "ed") && has_vowel(w, w.size() - 2)) {
    w.resize(w.size() - 2);
    cleanup = true;
  } else if (ends_with(w, "ing") && has_vowel(w, w.size() - 3)) {
    w.resize(w.size() - 3);
    cleanup = true;
  }
  if (cleanup) {
    if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
      w += 'e';
    } else if (ends_double_consonant(w, w.size()) && !ends_with(w, "l") && !ends_with(w, "s") &&
               !ends_with(w, "z")) {
      w.resize(w.size() - 1);
    } else if (measure(w, w.size()) == 1 && ends_cvc(w, w.size())) {
      w += 'e';
    }
  }

  // Step 1c
  if (ends_with(w, "y") && has_vowel(w, w.size() - 1)) w[w.size() - 1] = 'i';

  // Step 2
  apply_table(w, {{"ational", "ate", 0}, {"tional", "tion", 0}, {"enci", "ence", 0},
                  {"anci", "ance", 0},   {"izer", "ize", 0},    {"abli", "able", 0},
                  {"alli", "al", 0},     {"entli", "ent", 0},   {"eli", "e", 0},
                  {"ousli", "ous", 0},   {"ization", "ize", 0}, {"ation", "ate", 0},
                  {"ator", "ate", 0},    {"alism", "al", 0},    {"iveness", "ive", 0},
                  {"fulness", "ful", 0}, {"ousness", "ous", 0}, {"aliti", "al", 0},
                  {"iviti", "ive", 0},   {"biliti", "ble", 0}});

  // Step 3
  apply_table(w, {{"icate", "ic", 0},
                  {"ative", "", 0},
                  {"alize", "al", 0},
                  {"iciti", "ic", 0},
                  {"ical", "ic", 0},
                  {"ful", "", 0},
                  {"ness", "", 0}});

  // Step 4; "ion" additionally requires the stem to end in s or t.
  {
    const Rule* best = nullptr;
    for (const Rule& r : {Rule{"al", "", 1},    Rule{"ance", "", 1}, Rule{"ence", "", 1},
                          Rule{"er", "", 1},    Rule{"ic", "", 1},   Rule{"able", "", 1},
                          Rule{"ible", "", 1},  Rule{"ant", "", 1},  Rule{"ement", "", 1},
                          Rule{"ment", "", 1},  Rule{"ent", "", 1},  Rule{"ion", "", 1},
                          Rule{"ou", "", 1},    Rule{"ism", "", 1},  Rule{"ate", "", 1},
                          Rule{"iti", "", 1},   Rule{"ous", "", 1},  Rule{"ive", "", 1},
                          Rule{"ize", "", 1}})
      if (ends_with(w, r.suffix) && (!best || r.suffix.size() > best->suffix.size())) best = &r;
    if (best) {
      std::size_t stem_len = w.size() - best->suffix.size();
      bool ok = measure(w, stem_len) > 1;
      if (ok && best->suffix == "ion")
        ok = stem_len > 0 && (w[stem_len - 1] == 's' || w[stem_len - 1] == 't');
      if (ok) w.resize(stem_len);
    }
  }

  // Step 5a
  if (ends_with(w, "e")) {
    int m = measure(w, w.size() - 1);
    if (m > 1 || (m == 1 && !ends_cvc(w, w.size() - 1))) w.resize(w.size() - 1);
  }

  // Step 5b
  if (measure(w, w.size()) > 1 && ends_double_consonant(w, w.size()) && ends_with(w, "l"))
    w.resize(w.size() - 1);

  return w;
}

}  // namespace ldrank
