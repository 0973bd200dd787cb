// Batch front end: ranking, triple selection, evaluation and timing over the
// on-disk fixture formats. Exit codes: 0 success, 2 usage or input error,
// 3 numerical non-convergence.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ldrank/ldrank.hpp"

namespace {

using namespace ldrank;

// Flat key=value run configuration; explicit command-line flags override file
// values.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  explicit KeyValueConfig(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open config file: " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      std::size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw InputError(path + ":" + std::to_string(lineno) + ": expected key=value");
      kv_[line.substr(0, eq)] = line.substr(eq + 1);
    }
    static const std::set<std::string> known = {
        "alpha",      "tol",           "max_iter",      "epsilon_smoothing",
        "bidirectional", "weighting",  "dangling",      "stress",
        "nb_dim",     "consensus_tol", "consensus_max_iter", "consensus_distance",
        "stemmer",    "seed",          "graph",         "texts",
        "serp",       "doc_entities",  "stopwords"};
    for (const auto& [k, v] : kv_)
      if (!known.contains(k)) throw InputError(path + ": unknown config key '" + k + "'");
  }

  template <typename T>
  void apply(const CLI::Option* opt, const std::string& key, T& value) const {
    if (opt && opt->count() > 0) return;  // explicit flag wins
    auto it = kv_.find(key);
    if (it == kv_.end()) return;
    std::istringstream ss(it->second);
    T parsed;
    if constexpr (std::is_same_v<T, std::string>) {
      parsed = it->second;
    } else if constexpr (std::is_same_v<T, bool>) {
      if (it->second == "true" || it->second == "1")
        parsed = true;
      else if (it->second == "false" || it->second == "0")
        parsed = false;
      else
        throw InputError("config key '" + key + "' expects true/false");
    } else {
      if (!(ss >> parsed) || !ss.eof())
        throw InputError("config key '" + key + "' has a malformed value '" + it->second + "'");
    }
    value = parsed;
  }

 private:
  std::map<std::string, std::string> kv_;
};

struct CommonFlags {
  std::string config_path;
  std::string graph_path;
  std::string texts_path;
  std::string serp_path;
  std::string doc_entities_path;
  std::string stopwords_path;
  std::string query;
  std::string query_entities;
  std::string weighting = "unit";
  std::string dangling = "prior";
  std::string stemmer = "porter";
  double alpha = 0.7;
  double tol = 1e-10;
  int max_iter = 10000;
  double epsilon = 1e-8;
  bool bidirectional = false;
  double stress = 1000.0;
  int nb_dim = 1;
  double consensus_tol = 1e-9;
  int consensus_max_iter = 10000;
  std::string consensus_distance = "tv";
  std::uint64_t seed = 42;

  CLI::Option* opt_graph = nullptr;
  CLI::Option* opt_texts = nullptr;
  CLI::Option* opt_serp = nullptr;
  CLI::Option* opt_doc_entities = nullptr;
  CLI::Option* opt_stopwords = nullptr;
  CLI::Option* opt_weighting = nullptr;
  CLI::Option* opt_dangling = nullptr;
  CLI::Option* opt_stemmer = nullptr;
  CLI::Option* opt_alpha = nullptr;
  CLI::Option* opt_tol = nullptr;
  CLI::Option* opt_max_iter = nullptr;
  CLI::Option* opt_epsilon = nullptr;
  CLI::Option* opt_bidirectional = nullptr;
  CLI::Option* opt_stress = nullptr;
  CLI::Option* opt_nb_dim = nullptr;
  CLI::Option* opt_consensus_tol = nullptr;
  CLI::Option* opt_consensus_max_iter = nullptr;
  CLI::Option* opt_consensus_distance = nullptr;
  CLI::Option* opt_seed = nullptr;

  void add_ranking_flags(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key=value run configuration file");
    // required, but validated after the config file is merged
    opt_graph = cmd->add_option("--graph", graph_path, "graph.tsv triple file");
    opt_texts = cmd->add_option("--texts", texts_path, "texts.tsv entity text file");
    opt_serp = cmd->add_option("--serp", serp_path, "serp.tsv ranked document list");
    opt_doc_entities =
        cmd->add_option("--doc-entities", doc_entities_path, "doc-entities.tsv detections");
    cmd->add_option("--query", query, "query keywords");
    cmd->add_option("--query-entities", query_entities, "comma-separated entity IRIs");
    opt_stopwords = cmd->add_option("--stopwords", stopwords_path, "stopword file, one per line");
    opt_alpha = cmd->add_option("--alpha", alpha, "damping factor in (0,1)");
    opt_tol = cmd->add_option("--tol", tol, "power iteration convergence tolerance");
    opt_max_iter = cmd->add_option("--max-iter", max_iter, "power iteration budget");
    opt_epsilon = cmd->add_option("--epsilon", epsilon, "teleport smoothing in [0,1e-3]");
    opt_bidirectional =
        cmd->add_flag("--bidirectional", bidirectional, "treat every edge as bidirectional");
    opt_weighting = cmd->add_option("--weighting", weighting, "edge weighting: unit|multiplicity");
    opt_dangling = cmd->add_option("--dangling", dangling, "dangling rows: prior|uniform");
    opt_stress = cmd->add_option("--stress", stress, "stress factor for the iterated SVD");
    opt_nb_dim = cmd->add_option("--nb-dim", nb_dim, "SVD reduction dimension");
    opt_consensus_tol = cmd->add_option("--consensus-tol", consensus_tol, "consensus tolerance");
    opt_consensus_max_iter =
        cmd->add_option("--consensus-max-iter", consensus_max_iter, "consensus round budget");
    opt_consensus_distance =
        cmd->add_option("--consensus-distance", consensus_distance, "pool distance: tv|l2");
    opt_stemmer = cmd->add_option("--stemmer", stemmer, "stemmer: porter|identity");
    opt_seed = cmd->add_option("--seed", seed, "seed for randomized stages");
  }

  void apply_config() {
    if (!config_path.empty()) merge_config();
    if (graph_path.empty()) throw InputError("--graph is required");
    if (stemmer != "porter" && stemmer != "identity")
      throw InputError("unknown --stemmer '" + stemmer + "' (porter|identity)");
  }

  void merge_config() {
    KeyValueConfig cfg(config_path);
    cfg.apply(opt_graph, "graph", graph_path);
    cfg.apply(opt_texts, "texts", texts_path);
    cfg.apply(opt_serp, "serp", serp_path);
    cfg.apply(opt_doc_entities, "doc_entities", doc_entities_path);
    cfg.apply(opt_stopwords, "stopwords", stopwords_path);
    cfg.apply(opt_alpha, "alpha", alpha);
    cfg.apply(opt_tol, "tol", tol);
    cfg.apply(opt_max_iter, "max_iter", max_iter);
    cfg.apply(opt_epsilon, "epsilon_smoothing", epsilon);
    cfg.apply(opt_bidirectional, "bidirectional", bidirectional);
    cfg.apply(opt_weighting, "weighting", weighting);
    cfg.apply(opt_dangling, "dangling", dangling);
    cfg.apply(opt_stress, "stress", stress);
    cfg.apply(opt_nb_dim, "nb_dim", nb_dim);
    cfg.apply(opt_consensus_tol, "consensus_tol", consensus_tol);
    cfg.apply(opt_consensus_max_iter, "consensus_max_iter", consensus_max_iter);
    cfg.apply(opt_consensus_distance, "consensus_distance", consensus_distance);
    cfg.apply(opt_stemmer, "stemmer", stemmer);
    cfg.apply(opt_seed, "seed", seed);
  }

  RankConfig rank_config() const {
    RankConfig cfg;
    cfg.pagerank.alpha = alpha;
    cfg.pagerank.tol = tol;
    cfg.pagerank.max_iter = max_iter;
    cfg.pagerank.epsilon_smoothing = epsilon;
    cfg.pagerank.bidirectional = bidirectional;
    if (weighting == "unit")
      cfg.pagerank.edge_weighting = EdgeWeighting::Unit;
    else if (weighting == "multiplicity")
      cfg.pagerank.edge_weighting = EdgeWeighting::Multiplicity;
    else
      throw InputError("unknown --weighting '" + weighting + "' (unit|multiplicity)");
    if (dangling == "prior")
      cfg.pagerank.dangling = DanglingPolicy::Prior;
    else if (dangling == "uniform")
      cfg.pagerank.dangling = DanglingPolicy::Uniform;
    else
      throw InputError("unknown --dangling '" + dangling + "' (prior|uniform)");
    cfg.pagerank.validate();
    cfg.svd.stress = stress;
    cfg.svd.nb_dim = nb_dim;
    cfg.consensus.tol = consensus_tol;
    cfg.consensus.max_iter = consensus_max_iter;
    if (consensus_distance == "tv")
      cfg.consensus.distance = PoolDistance::TotalVariation;
    else if (consensus_distance == "l2")
      cfg.consensus.distance = PoolDistance::Euclidean;
    else
      throw InputError("unknown --consensus-distance '" + consensus_distance + "' (tv|l2)");
    return cfg;
  }

  TokenizerOptions tokenizer_options(std::set<std::string>& stopword_store) const {
    TokenizerOptions opts;
    if (stemmer == "porter")
      opts.stemmer = porter_stemmer();
    else if (stemmer == "identity")
      opts.stemmer = identity_stemmer();
    else
      throw InputError("unknown --stemmer '" + stemmer + "' (porter|identity)");
    if (!stopwords_path.empty()) {
      stopword_store = load_stopwords(stopwords_path);
      opts.stopwords = &stopword_store;
    }
    return opts;
  }
};

Strategy parse_strategy(const std::string& name) {
  if (name == "equi") return Strategy::Equi;
  if (name == "hit") return Strategy::Hit;
  if (name == "svd") return Strategy::Svd;
  if (name == "ldrank") return Strategy::Ldrank;
  throw InputError("unknown strategy '" + name + "' (equi|hit|svd|ldrank)");
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream ss(s);
  std::string w;
  while (ss >> w) out.push_back(w);
  return out;
}

struct LoadedInputs {
  EntityGraph graph;
  std::optional<Serp> serp;
  std::optional<DocEntities> doc_entities;
  std::optional<EntityTermMatrix> term_matrix;
  Query query;
};

LoadedInputs load_inputs(const CommonFlags& flags, bool need_term_matrix) {
  std::vector<std::pair<std::string, std::string>> texts;
  if (!flags.texts_path.empty()) texts = parse_texts(flags.texts_path);
  LoadedInputs in{build_graph(parse_graph_file(flags.graph_path), texts), {}, {}, {}, {}};
  if (!flags.serp_path.empty()) in.serp = parse_serp(flags.serp_path);
  if (!flags.doc_entities_path.empty()) in.doc_entities = parse_doc_entities(flags.doc_entities_path);
  if (need_term_matrix && !flags.texts_path.empty()) {
    std::set<std::string> stopword_store;
    TokenizerOptions topts = flags.tokenizer_options(stopword_store);
    in.term_matrix = build_matrix(in.graph, TermWeighting::Tf, topts);
  }
  in.query.keywords = split_words(flags.query);
  for (const std::string& uri : split_csv(flags.query_entities))
    in.query.entities.push_back(in.graph.index_of(uri));
  return in;
}

RankInputs to_rank_inputs(const LoadedInputs& in) {
  RankInputs r;
  if (in.serp) r.serp = &*in.serp;
  if (in.doc_entities) r.doc_entities = &*in.doc_entities;
  if (in.term_matrix) r.term_matrix = &*in.term_matrix;
  r.query = &in.query;
  return r;
}

void write_to(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw InputError("cannot open output file: " + out_path);
  out << content;
}

// rank: compute one strategy's ranking and emit entity TAB score lines.
void setup_rank(CLI::App& app) {
  auto cmd = app.add_subcommand("rank", "rank the entities of a graph");
  auto flags = std::make_shared<CommonFlags>();
  auto strategy = std::make_shared<std::string>();
  auto out_path = std::make_shared<std::string>();
  flags->add_ranking_flags(cmd);
  cmd->add_option("--strategy", *strategy, "equi|hit|svd|ldrank")->required();
  cmd->add_option("--out", *out_path, "ranking output file (default stdout)");
  cmd->callback([flags, strategy, out_path] {
    flags->apply_config();
    Strategy s = parse_strategy(*strategy);
    bool needs_matrix = s == Strategy::Svd || s == Strategy::Ldrank;
    LoadedInputs in = load_inputs(*flags, needs_matrix);
    RankedList ranking = rank(in.graph, s, to_rank_inputs(in), flags->rank_config());
    std::ostringstream os;
    write_ranking(os, ranking, in.graph);
    write_to(*out_path, os.str());
  });
}

std::vector<std::string> parse_ranking_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open ranking file: " + path);
  std::vector<std::string> uris;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::size_t tab = line.find('\t');
    std::string uri = tab == std::string::npos ? line : line.substr(0, tab);
    if (!is_absolute_iri(uri))
      throw InputError(path + ":" + std::to_string(lineno) + ": malformed IRI '" + uri + "'");
    uris.push_back(std::move(uri));
  }
  if (uris.empty()) throw InputError("ranking file is empty: " + path);
  return uris;
}

std::map<std::string, double> parse_accuracies(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open accuracies file: " + path);
  std::map<std::string, double> acc;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "worker_id,accuracy")
        throw InputError(path + ": expected header 'worker_id,accuracy'");
      header_seen = true;
      continue;
    }
    std::size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw InputError(path + ":" + std::to_string(lineno) + ": expected worker_id,accuracy");
    std::string worker = line.substr(0, comma);
    double value = 0.0;
    try {
      std::size_t pos = 0;
      value = std::stod(line.substr(comma + 1), &pos);
      if (pos != line.size() - comma - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw InputError(path + ":" + std::to_string(lineno) + ": malformed accuracy value");
    }
    if (!acc.emplace(worker, value).second)
      throw InputError(path + ": duplicate worker " + worker);
  }
  if (!header_seen) throw InputError(path + ": missing header 'worker_id,accuracy'");
  return acc;
}

// eval: metrics as CSV on stdout.
void setup_eval(CLI::App& app) {
  auto cmd = app.add_subcommand("eval", "evaluation metrics");
  cmd->require_subcommand(1);

  {
    auto sub = cmd->add_subcommand("ndcg", "NDCG of a ranking against qrels");
    auto ranking = std::make_shared<std::string>();
    auto qrels = std::make_shared<std::string>();
    auto rank_cut = std::make_shared<int>(10);
    sub->add_option("--ranking", *ranking, "ranking file (entity TAB score)")->required();
    sub->add_option("--qrels", *qrels, "qrels.tsv graded judgments")->required();
    sub->add_option("--rank", *rank_cut, "evaluation rank r");
    sub->callback([ranking, qrels, rank_cut] {
      double v = ndcg(parse_ranking_file(*ranking), parse_qrels(*qrels), *rank_cut);
      std::printf("metric,value\nndcg,%.6f\n", v);
    });
  }
  {
    auto sub = cmd->add_subcommand("alpha", "Krippendorff alpha of crowd judgments");
    auto judgments = std::make_shared<std::string>();
    auto distance = std::make_shared<std::string>("table1");
    sub->add_option("--judgments", *judgments, "judgments.csv")->required();
    sub->add_option("--distance", *distance, "table1|binary");
    sub->callback([judgments, distance] {
      OrdinalDistance d = [&] {
        if (*distance == "table1") return default_ordinal_distance();
        if (*distance == "binary") return OrdinalDistance::binary();
        throw InputError("unknown --distance '" + *distance + "' (table1|binary)");
      }();
      double v = krippendorff_alpha(parse_judgments(*judgments), d);
      std::printf("metric,value\nalpha,%.6f\n", v);
    });
  }
  {
    auto sub = cmd->add_subcommand("vote", "majority vote per unit");
    auto judgments = std::make_shared<std::string>();
    auto tiebreak = std::make_shared<std::string>("highest");
    auto accuracies = std::make_shared<std::string>();
    sub->add_option("--judgments", *judgments, "judgments.csv")->required();
    sub->add_option("--tiebreak", *tiebreak, "highest|accuracy");
    sub->add_option("--accuracies", *accuracies, "worker_id,accuracy CSV (accuracy mode)");
    sub->callback([judgments, tiebreak, accuracies] {
      TieBreak tb;
      if (*tiebreak == "highest")
        tb = TieBreak::Highest;
      else if (*tiebreak == "accuracy")
        tb = TieBreak::Accuracy;
      else
        throw InputError("unknown --tiebreak '" + *tiebreak + "' (highest|accuracy)");
      std::map<std::string, double> acc;
      if (!accuracies->empty()) acc = parse_accuracies(*accuracies);
      if (tb == TieBreak::Accuracy && acc.empty())
        throw InputError("accuracy tie-break requires --accuracies");
      JudgmentSet js = parse_judgments(*judgments);
      std::set<std::string> units;
      for (const Judgment& j : js.records) units.insert(j.unit);
      std::printf("unit_id,grade\n");
      for (const std::string& u : units)
        std::printf("%s,%d\n", u.c_str(), majority_vote(js, u, tb, acc.empty() ? nullptr : &acc));
    });
  }
  {
    auto sub = cmd->add_subcommand("filter", "drop workers disagreeing with the majority");
    auto judgments = std::make_shared<std::string>();
    auto threshold = std::make_shared<double>(0.412);
    sub->add_option("--judgments", *judgments, "judgments.csv")->required();
    sub->add_option("--threshold", *threshold, "disagreement rate above which a worker is dropped");
    sub->callback([judgments, threshold] {
      JudgmentSet filtered = filter_workers(parse_judgments(*judgments), *threshold);
      std::ostringstream os;
      write_judgments(os, filtered);
      std::fputs(os.str().c_str(), stdout);
    });
  }
}

// triples: 1-hop expansion, CP decomposition, per-entity triple groups.
void setup_triples(CLI::App& app) {
  auto cmd = app.add_subcommand("triples", "PARAFAC-based triple selection");
  auto graph_path = std::make_shared<std::string>();
  auto neighborhood_path = std::make_shared<std::string>();
  auto top_entities = std::make_shared<std::string>();
  auto cp_rank = std::make_shared<int>(10);
  auto components = std::make_shared<int>(2);
  auto predicates = std::make_shared<int>(3);
  auto iters = std::make_shared<int>(100);
  auto cp_tol = std::make_shared<double>(1e-6);
  auto seed = std::make_shared<std::uint64_t>(42);
  auto out_path = std::make_shared<std::string>();
  cmd->add_option("--graph", *graph_path, "graph.tsv triple file")->required();
  cmd->add_option("--neighborhood", *neighborhood_path, "neighborhood.tsv for 1-hop expansion");
  cmd->add_option("--top-entities", *top_entities, "comma-separated entity IRIs")->required();
  cmd->add_option("--rank", *cp_rank, "CP decomposition rank (clamped to the tensor nonzero count)");
  cmd->add_option("--components", *components, "components kept per entity (clamped to the CP rank)");
  cmd->add_option("--predicates", *predicates, "predicates kept per component");
  cmd->add_option("--iters", *iters, "ALS sweep budget");
  cmd->add_option("--cp-tol", *cp_tol, "ALS fit-change stopping tolerance");
  cmd->add_option("--seed", *seed, "ALS initialization seed");
  cmd->add_option("--out", *out_path, "output file (default stdout)");
  cmd->callback([=] {
    std::vector<std::string> uris = split_csv(*top_entities);
    if (uris.empty()) throw InputError("--top-entities must name at least one entity");
    EntityGraph base = build_graph(parse_graph_file(*graph_path));
    std::vector<EntityIndex> focus;
    for (const std::string& uri : uris) focus.push_back(base.index_of(uri));
    std::unique_ptr<NeighborhoodClient> client;
    if (neighborhood_path->empty())
      client = std::make_unique<FileNeighborhoodClient>(std::vector<IriTriple>{});
    else
      client = std::make_unique<FileNeighborhoodClient>(*neighborhood_path);
    EntityGraph expanded = expand_1hop(base, focus, *client);
    Tensor3 tensor = build_tensor(expanded);
    int rank_used = std::min(*cp_rank, std::max(1, static_cast<int>(tensor.nonzeros.size())));
    CpFactors factors = cp_als(tensor, rank_used, *iters, *seed, *cp_tol);
    if (factors.ridge_applied)
      std::fprintf(stderr, "warning: rank-deficient normal equations, ridge applied\n");
    std::ostringstream os;
    for (const std::string& uri : uris) {
      EntityIndex e = expanded.index_of(uri);
      int m = std::min(*components, factors.rank);
      std::vector<Triple> chosen = select_triples(factors, expanded, e, m, *predicates);
      write_triple_group(os, expanded, e, chosen);
    }
    write_to(*out_path, os.str());
  });
}

// bench: per-strategy wall-clock medians as CSV.
void setup_bench(CLI::App& app) {
  auto cmd = app.add_subcommand("bench", "time the ranking strategies");
  auto flags = std::make_shared<CommonFlags>();
  auto strategies = std::make_shared<std::string>("equi,hit,svd,ldrank");
  auto reps = std::make_shared<int>(3);
  flags->add_ranking_flags(cmd);
  cmd->add_option("--strategies", *strategies, "comma-separated strategy list");
  cmd->add_option("--reps", *reps, "repetitions per strategy");
  cmd->callback([flags, strategies, reps] {
    flags->apply_config();
    std::vector<Strategy> list;
    for (const std::string& name : split_csv(*strategies)) list.push_back(parse_strategy(name));
    if (list.empty()) throw InputError("--strategies must name at least one strategy");
    bool needs_matrix = false;
    for (Strategy s : list) needs_matrix |= s == Strategy::Svd || s == Strategy::Ldrank;
    LoadedInputs in = load_inputs(*flags, needs_matrix);
    std::vector<BenchRow> rows =
        bench(in.graph, to_rank_inputs(in), flags->rank_config(), list, *reps);
    std::ostringstream os;
    write_bench_csv(os, rows);
    std::fputs(os.str().c_str(), stdout);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LDRANK: query-driven entity ranking on linked-data graphs"};
  app.require_subcommand(1);
  setup_rank(app);
  setup_eval(app);
  setup_triples(app);
  setup_bench(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const ldrank::ConvergenceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
