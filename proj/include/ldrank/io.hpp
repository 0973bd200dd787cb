#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ldrank/entity_graph.hpp"
#include "ldrank/errors.hpp"

namespace ldrank {

// Search-engine result page: doc ids ordered best rank first, rank 1 based.
struct Serp {
  std::vector<std::string> docs;

  int rank_of(std::string_view doc_id) const {
    for (std::size_t i = 0; i < docs.size(); ++i)
      if (docs[i] == doc_id) return static_cast<int>(i) + 1;
    throw InputError("document not in SERP: " + std::string(doc_id));
  }
};

// Which entities were detected in which SERP document. Docs keep file order,
// entity lists keep first-appearance order with duplicates removed.
struct DocEntities {
  std::vector<std::pair<std::string, std::vector<std::string>>> docs;
};

// Graded relevance judgments, 4-level ordinal scale 0..3.
struct Qrels {
  std::unordered_map<std::string, int> grade_by_uri;

  int grade(std::string_view uri) const {
    auto it = grade_by_uri.find(std::string(uri));
    return it == grade_by_uri.end() ? 0 : it->second;
  }
};

// One crowd judgment. A JudgmentSet holds at most one record per
// (unit, worker) pair.
struct Judgment {
  std::string unit;
  std::string worker;
  int value = 0;

  friend bool operator==(const Judgment&, const Judgment&) = default;
};

struct JudgmentSet {
  std::vector<Judgment> records;
};

struct Annotation {
  std::string entity_uri;
  std::size_t offset = 0;
};

// Stand-in for a live entity-annotation service. The doc id keys fixture
// lookups; text is available for offset validation.
class AnnotationClient {
 public:
  virtual ~AnnotationClient() = default;
  virtual std::vector<Annotation> annotate(const std::string& doc_id,
                                           std::string_view text) const = 0;
};

// Stand-in for a live SPARQL neighborhood lookup. Returned triples must have
// the queried entity as subject or object.
class NeighborhoodClient {
 public:
  virtual ~NeighborhoodClient() = default;
  virtual std::vector<IriTriple> expand(const std::string& entity_uri) const = 0;
};

namespace detail {

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

inline bool skippable(const std::string& line) {
  return line.empty() || line[0] == '#';
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

inline InputError line_error(const std::string& path, std::size_t lineno, const std::string& msg) {
  return InputError(path + ":" + std::to_string(lineno) + ": " + msg);
}

inline int parse_grade(std::string_view s, const std::string& path, std::size_t lineno) {
  if (s.size() != 1 || s[0] < '0' || s[0] > '3')
    throw line_error(path, lineno, "grade out of scale 0..3: '" + std::string(s) + "'");
  return s[0] - '0';
}

inline std::string escape_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string unescape_text(std::string_view s, const std::string& path, std::size_t lineno) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out += s[i];
      continue;
    }
    if (i + 1 == s.size()) throw line_error(path, lineno, "dangling escape at end of text");
    ++i;
    switch (s[i]) {
      case '\\': out += '\\'; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      default: throw line_error(path, lineno, std::string("unknown escape \\") + s[i]);
    }
  }
  return out;
}

}  // namespace detail

// graph.tsv: subject TAB predicate TAB object, blank lines and '#' comments
// skipped.
inline std::vector<IriTriple> parse_graph_file(const std::string& path) {
  std::vector<IriTriple> triples;
  auto lines = detail::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (detail::skippable(lines[i])) continue;
    auto cols = detail::split(lines[i], '\t');
    if (cols.size() != 3)
      throw detail::line_error(path, i + 1,
                               "expected 3 tab-separated columns, got " + std::to_string(cols.size()));
    for (auto c : cols)
      if (!is_absolute_iri(c))
        throw detail::line_error(path, i + 1, "malformed IRI: '" + std::string(c) + "'");
    triples.push_back({std::string(cols[0]), std::string(cols[1]), std::string(cols[2])});
  }
  return triples;
}

inline void write_graph_file(std::ostream& out, const std::vector<IriTriple>& triples) {
  for (const IriTriple& t : triples) out << t.subject << '\t' << t.predicate << '\t' << t.object << '\n';
}

// texts.tsv: entity-IRI TAB text, with tab/newline/backslash escaped in the
// text column. Keeps file order; duplicate entities are an error.
inline std::vector<std::pair<std::string, std::string>> parse_texts(const std::string& path) {
  std::vector<std::pair<std::string, std::string>> texts;
  std::unordered_set<std::string> seen;
  auto lines = detail::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (detail::skippable(lines[i])) continue;
    auto cols = detail::split(lines[i], '\t');
    if (cols.size() != 2)
      throw detail::line_error(path, i + 1,
                               "expected 2 tab-separated columns, got " + std::to_string(cols.size()));
    std::string uri(cols[0]);
    if (!is_absolute_iri(uri)) throw detail::line_error(path, i + 1, "malformed IRI: '" + uri + "'");
    if (!seen.insert(uri).second)
      throw detail::line_error(path, i + 1, "duplicate text for entity: " + uri);
    texts.emplace_back(std::move(uri), detail::unescape_text(cols[1], path, i + 1));
  }
  return texts;
}

inline void write_texts(std::ostream& out,
                        const std::vector<std::pair<std::string, std::string>>& texts) {
  for (const auto& [uri, text] : texts) out << uri << '\t' << detail::escape_text(text) << '\n';
}

// serp.tsv: one doc id per line, best rank first.
inline Serp parse_serp(const std::string& path) {
  Serp serp;
  std::unordered_set<std::string> seen;
  auto lines = detail::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (detail::skippable(lines[i])) continue;
    if (!seen.insert(lines[i]).second)
      throw detail::line_error(path, i + 1, "duplicate document id: " + lines[i]);
    serp.docs.push_back(lines[i]);
  }
  return serp;
}

inline void write_serp(std::ostream& out, const Serp& serp) {
  for (const std::string& d : serp.docs) out << d << '\n';
}

// doc-entities.tsv: doc_id TAB entity-IRI, one pair per line. Repeated pairs
// collapse (set semantics).
inline DocEntities parse_doc_entities(const std::string& path) {
  DocEntities de;
  std::unordered_map<std::string, std::size_t> doc_pos;
  std::set<std::pair<std::string, std::string>> seen;
  auto lines = detail::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (detail::skippable(lines[i])) continue;
    auto cols = detail::split(lines[i], '\t');
    if (cols.size() != 2)
      throw detail::line_error(path, i + 1,
                               "expected 2 tab-separated columns, got " + std::to_string(cols.size()));
    std::string doc(cols[0]);
    std::string uri(cols[1]);
    if (!is_absolute_iri(uri)) throw detail::line_error(path, i + 1, "malformed IRI: '" + uri + "'");
    if (!seen.emplace(doc, uri).second) continue;
    auto [it, inserted] = doc_pos.emplace(doc, de.docs.size());
    if (inserted) de.docs.emplace_back(doc, std::vector<std::string>{});
    de.docs[it->second].second.push_back(std::move(uri));
  }
  return de;
}

inline void write_doc_entities(std::ostream& out, const DocEntities& de) {
  for (const auto& [doc, uris] : de.docs)
    for (const std::string& uri : uris) out << doc << '\t' << uri << '\n';
}

// qrels.tsv: entity-IRI TAB grade(0-3).
inline Qrels parse_qrels(const std::string& path) {
  Qrels q;
  auto lines = detail::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (detail::skippable(lines[i])) continue;
    auto cols = detail::split(lines[i], '\t');
    if (cols.size() != 2)
      throw detail::line_error(path, i + 1,
                               "expected 2 tab-separated columns, got " + std::to_string(cols.size()));
    std::string uri(cols[0]);
    if (!is_absolute_iri(uri)) throw detail::line_error(path, i + 1, "malformed IRI: '" + uri + "'");
    int grade = detail::parse_grade(cols[1], path, i + 1);
    if (!q.grade_by_uri.emplace(std::move(uri), grade).second)
      throw detail::line_error(path, i + 1, "duplicate qrels entity: " + std::string(cols[0]));
  }
  return q;
}

inline void write_qrels(std::ostream& out, const Qrels& q) {
  std::map<std::string, int> sorted(q.grade_by_uri.begin(), q.grade_by_uri.end());
  for (const auto& [uri, grade] : sorted) out << uri << '\t' << grade << '\n';
}

// judgments.csv: header unit_id,worker_id,value. No quoting; ids must not
// contain commas.
inline JudgmentSet parse_judgments(const std::string& path) {
  auto lines = detail::read_lines(path);
  std::size_t i = 0;
  while (i < lines.size() && lines[i].empty()) ++i;
  if (i == lines.size() || lines[i] != "unit_id,worker_id,value")
    throw detail::line_error(path, i + 1, "expected header 'unit_id,worker_id,value'");
  JudgmentSet js;
  std::set<std::pair<std::string, std::string>> seen;
  for (++i; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto cols = detail::split(lines[i], ',');
    if (cols.size() != 3)
      throw detail::line_error(path, i + 1,
                               "expected 3 comma-separated columns, got " + std::to_string(cols.size()));
    Judgment j;
    j.unit = std::string(cols[0]);
    j.worker = std::string(cols[1]);
    j.value = detail::parse_grade(cols[2], path, i + 1);
    if (j.unit.empty() || j.worker.empty())
      throw detail::line_error(path, i + 1, "empty unit or worker id");
    if (!seen.emplace(j.unit, j.worker).second)
      throw detail::line_error(path, i + 1,
                               "duplicate judgment for (" + j.unit + "," + j.worker + ")");
    js.records.push_back(std::move(j));
  }
  return js;
}

inline void write_judgments(std::ostream& out, const JudgmentSet& js) {
  out << "unit_id,worker_id,value\n";
  for (const Judgment& j : js.records) out << j.unit << ',' << j.worker << ',' << j.value << '\n';
}

// Concatenation, in ascending offset order, of character windows of length
// <= width centered on each offset and clipped to the text bounds. For even
// widths the window extends ceil((w-1)/2) left and floor((w-1)/2) right.
// Offsets are byte positions and must lie inside the text.
inline std::string window_text(std::string_view page_text, std::vector<std::size_t> offsets,
                               std::size_t width = 300) {
  if (width == 0) throw InputError("window width must be positive");
  std::sort(offsets.begin(), offsets.end());
  std::string out;
  for (std::size_t off : offsets) {
    if (off >= page_text.size())
      throw InputError("annotation offset " + std::to_string(off) + " outside text of length " +
                       std::to_string(page_text.size()));
    std::size_t left = width / 2;  // ceil((width-1)/2)
    std::size_t right = (width - 1) / 2;
    std::size_t start = off >= left ? off - left : 0;
    std::size_t end = std::min(page_text.size() - 1, off + right);
    out.append(page_text.substr(start, end - start + 1));
  }
  return out;
}

// Entity text assembly: DBpedia-style abstract first, then the page windows
// in occurrence order, space separated.
inline std::string assemble_entity_text(std::string_view abstract_text, std::string_view page_text,
                                        const std::vector<std::size_t>& offsets,
                                        std::size_t width = 300) {
  std::string windows = offsets.empty() ? std::string() : window_text(page_text, offsets, width);
  if (abstract_text.empty()) return windows;
  if (windows.empty()) return std::string(abstract_text);
  return std::string(abstract_text) + " " + windows;
}

// annotations.tsv: doc_id TAB entity-IRI TAB offset.
class FileAnnotationClient final : public AnnotationClient {
 public:
  explicit FileAnnotationClient(const std::string& path) {
    auto lines = detail::read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (detail::skippable(lines[i])) continue;
      auto cols = detail::split(lines[i], '\t');
      if (cols.size() != 3)
        throw detail::line_error(path, i + 1, "expected 3 tab-separated columns, got " +
                                                  std::to_string(cols.size()));
      if (!is_absolute_iri(cols[1]))
        throw detail::line_error(path, i + 1, "malformed IRI: '" + std::string(cols[1]) + "'");
      Annotation a;
      a.entity_uri = std::string(cols[1]);
      try {
        std::size_t pos = 0;
        std::string offs(cols[2]);
        long long v = std::stoll(offs, &pos);
        if (pos != offs.size() || v < 0) throw std::invalid_argument("offset");
        a.offset = static_cast<std::size_t>(v);
      } catch (const std::exception&) {
        throw detail::line_error(path, i + 1, "bad offset: '" + std::string(cols[2]) + "'");
      }
      by_doc_[std::string(cols[0])].push_back(std::move(a));
    }
  }

  std::vector<Annotation> annotate(const std::string& doc_id,
                                   std::string_view text) const override {
    auto it = by_doc_.find(doc_id);
    if (it == by_doc_.end()) return {};
    for (const Annotation& a : it->second)
      if (a.offset >= text.size())
        throw InputError("annotation offset " + std::to_string(a.offset) + " outside text of '" +
                         doc_id + "'");
    return it->second;
  }

 private:
  std::unordered_map<std::string, std::vector<Annotation>> by_doc_;
};

// neighborhood.tsv holds graph.tsv-format triples; expand() filters the rows
// incident to the queried entity.
class FileNeighborhoodClient final : public NeighborhoodClient {
 public:
  explicit FileNeighborhoodClient(const std::string& path) : triples_(parse_graph_file(path)) {}
  explicit FileNeighborhoodClient(std::vector<IriTriple> triples) : triples_(std::move(triples)) {}

  std::vector<IriTriple> expand(const std::string& entity_uri) const override {
    std::vector<IriTriple> out;
    for (const IriTriple& t : triples_)
      if (t.subject == entity_uri || t.object == entity_uri) out.push_back(t);
    return out;
  }

 private:
  std::vector<IriTriple> triples_;
};

}  // namespace ldrank
