#include "blame/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "blame/error.hpp"
#include "blame/extraction.hpp"
#include "blame/lexicon.hpp"
#include "blame/parallel.hpp"
#include "blame/persona.hpp"
#include "blame/report.hpp"
#include "blame/stats.hpp"
#include "blame/text.hpp"
#include "blame/topics.hpp"

namespace blame {
namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

// ---- configuration ----------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto p = s.find(sep, start);
    auto item = trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T v{};
  const auto s = trim(value);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw UsageError("config key '" + std::string(key) + "': bad number '" + s + "'");
  return v;
}

bool parse_bool(std::string_view key, std::string_view value) {
  const auto v = to_lower(trim(value));
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw UsageError("config key '" + std::string(key) + "': expected true or false");
}

fs::path resolve(const fs::path& base, std::string_view value) {
  fs::path p(trim(value));
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return (base / p).lexically_normal();
}

std::string group_set_name(const std::set<FeatureGroup>& groups) {
  std::string s;
  for (auto g : groups) {
    if (!s.empty()) s += '+';
    s += to_string(g);
  }
  return s.empty() ? "none" : s;
}

std::string fraction_text(Fraction f) { return std::to_string(f.num) + "/" + std::to_string(f.den); }

}  // namespace

void set_config_value(PipelineConfig& c, std::string_view key_in, std::string_view value,
                      const fs::path& base_dir) {
  const std::string key = trim(key_in);
  try {
    if (key == "interchange") {
      c.interchange = resolve(base_dir, value);
    } else if (key == "raw_dump") {
      c.raw_dump = resolve(base_dir, value);
    } else if (key == "lexicons") {
      c.lexicons = resolve(base_dir, value);
    } else if (key == "people") {
      c.people = resolve(base_dir, value);
    } else if (key == "out") {
      c.out = resolve(base_dir, value);
    } else if (key == "seed") {
      c.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "jobs") {
      c.jobs = parse_number<int>(key, value);
      if (c.jobs < 1) throw UsageError("jobs must be >= 1");
    } else if (key == "split") {
      const auto parts = split_list(value, ',');
      if (parts.size() != 3) throw UsageError("split needs three fractions: train,dev,test");
      SplitSpec s;
      s.train = parse_fraction(parts[0]);
      s.dev = parse_fraction(parts[1]);
      s.test = parse_fraction(parts[2]);
      check_split_spec(s);
      c.split = s;
    } else if (key == "lda_grid") {
      c.lda_grid.clear();
      for (const auto& v : split_list(value, ',')) c.lda_grid.push_back(parse_number<int>(key, v));
      if (c.lda_grid.empty()) throw UsageError("lda_grid is empty");
      for (int k : c.lda_grid)
        if (k < 1) throw UsageError("lda_grid values must be >= 1");
    } else if (key == "lda_iterations") {
      c.lda_iterations = parse_number<int>(key, value);
    } else if (key == "lda_alpha") {
      c.lda_alpha = parse_number<double>(key, value);
    } else if (key == "lda_beta") {
      c.lda_beta = parse_number<double>(key, value);
    } else if (key == "min_posts") {
      c.min_posts = parse_number<int>(key, value);
    } else if (key == "min_df") {
      c.min_df = parse_number<int>(key, value);
    } else if (key == "penalties") {
      c.penalties.clear();
      for (const auto& v : split_list(value, ',')) c.penalties.push_back(parse_penalty(v));
      if (c.penalties.empty()) throw UsageError("penalties is empty");
    } else if (key == "reg_weights") {
      c.reg_weights.clear();
      for (const auto& v : split_list(value, ',')) c.reg_weights.push_back(parse_number<double>(key, v));
      if (c.reg_weights.empty()) throw UsageError("reg_weights is empty");
      for (double w : c.reg_weights)
        if (!(w > 0.0)) throw UsageError("reg_weights must be > 0");
    } else if (key == "runs") {
      c.runs = parse_number<int>(key, value);
      if (c.runs < 1) throw UsageError("runs must be >= 1");
    } else if (key == "features") {
      FeatureToggles t{false, false, false};
      for (const auto& v : split_list(value, ',')) {
        switch (parse_feature_group(v)) {
          case FeatureGroup::contextual: t.contextual = true; break;
          case FeatureGroup::psycholinguistic: t.psycholinguistic = true; break;
          case FeatureGroup::linguistic: t.linguistic = true; break;
        }
      }
      c.features = t;
    } else if (key == "ablations") {
      c.ablations.clear();
      for (const auto& item : split_list(value, ';')) {
        std::set<FeatureGroup> groups;
        if (item != "none")
          for (const auto& g : split_list(item, '+')) groups.insert(parse_feature_group(g));
        c.ablations.push_back(std::move(groups));
      }
    } else if (key == "haldane") {
      c.haldane = parse_bool(key, value);
    } else {
      throw UsageError("unknown config key '" + key + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError("config key '" + key + "': " + e.what());
  }
}

PipelineConfig parse_config(std::string_view text, const fs::path& base_dir) {
  PipelineConfig c;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
    set_config_value(c, line.substr(0, eq), line.substr(eq + 1), base_dir);
  }
  return c;
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifact(path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

std::string canonical_config(const PipelineConfig& c) {
  std::ostringstream os;
  auto join = [](const auto& v, auto fmt) {
    std::string s;
    for (const auto& x : v) {
      if (!s.empty()) s += ',';
      s += fmt(x);
    }
    return s;
  };
  os << "interchange=" << c.interchange.generic_string() << '\n';
  os << "raw_dump=" << c.raw_dump.generic_string() << '\n';
  os << "lexicons=" << c.lexicons.generic_string() << '\n';
  os << "people=" << c.people.generic_string() << '\n';
  os << "seed=" << c.seed << '\n';
  os << "split=" << fraction_text(c.split.train) << ',' << fraction_text(c.split.dev) << ','
     << fraction_text(c.split.test) << '\n';
  os << "lda_grid=" << join(c.lda_grid, [](int k) { return std::to_string(k); }) << '\n';
  os << "lda_iterations=" << c.lda_iterations << '\n';
  os << "lda_alpha=" << format_double(c.lda_alpha) << '\n';
  os << "lda_beta=" << format_double(c.lda_beta) << '\n';
  os << "min_posts=" << c.min_posts << '\n';
  os << "min_df=" << c.min_df << '\n';
  os << "penalties=" << join(c.penalties, [](Penalty p) { return std::string(to_string(p)); }) << '\n';
  os << "reg_weights=" << join(c.reg_weights, [](double w) { return format_double(w); }) << '\n';
  os << "runs=" << c.runs << '\n';
  std::set<FeatureGroup> on;
  if (c.features.contextual) on.insert(FeatureGroup::contextual);
  if (c.features.psycholinguistic) on.insert(FeatureGroup::psycholinguistic);
  if (c.features.linguistic) on.insert(FeatureGroup::linguistic);
  os << "features=" << group_set_name(on) << '\n';
  os << "ablations=" << join(c.ablations, [](const auto& g) { return group_set_name(g); }) << '\n';
  os << "haldane=" << (c.haldane ? "true" : "false") << '\n';
  return os.str();
}

std::string config_hash(const PipelineConfig& c) { return hex64(fnv1a64(canonical_config(c))); }

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::ingest: return "ingest";
    case Stage::extract: return "extract";
    case Stage::topics: return "topics";
    case Stage::featurize: return "featurize";
    case Stage::train: return "train";
    case Stage::evaluate: return "evaluate";
    case Stage::interpret: return "interpret";
    case Stage::bias: return "bias";
  }
  return "ingest";
}

const std::vector<Stage>& all_stages() {
  static const std::vector<Stage> s = {Stage::ingest, Stage::extract,  Stage::topics,    Stage::featurize,
                                       Stage::train,  Stage::evaluate, Stage::interpret, Stage::bias};
  return s;
}

std::optional<Stage> parse_stage(std::string_view s) {
  for (Stage st : all_stages())
    if (to_string(st) == s) return st;
  return std::nullopt;
}

// ---- stage plumbing -------------------------------------------------------------------

namespace {

struct Context {
  const PipelineConfig& config;
  std::string hash;
  std::string provenance;  // "config_hash=H seed=S"
  std::ostream& log;

  Context(const PipelineConfig& c, std::ostream& l)
      : config(c), hash(config_hash(c)), provenance("config_hash=" + hash + " seed=" + std::to_string(c.seed)),
        log(l) {}

  fs::path path(std::string_view name) const { return config.out / std::string(name); }

  fs::path require(std::string_view name) const {
    const fs::path p = path(name);
    if (!fs::exists(p)) throw MissingArtifact(std::string(name));
    return p;
  }

  std::string header() const { return "# " + provenance + "\n"; }

  void write(std::string_view name, std::string_view body) const {
    write_file_atomic(path(name), header() + std::string(body));
  }

  void write_json(std::string_view name, ojson j) const {
    ojson doc;
    doc["config_hash"] = hash;
    doc["seed"] = config.seed;
    for (auto& [k, v] : j.items()) doc[k] = v;
    write_file_atomic(path(name), doc.dump(2) + "\n");
  }
};

fs::path require_input(const fs::path& p, std::string_view what) {
  if (p.empty()) throw UsageError("config key '" + std::string(what) + "' is not set");
  if (!fs::exists(p)) throw MissingArtifact(p.string());
  return p;
}

// Data rows of a tab-separated artifact (comment lines and the header row
// skipped), each checked for `width` cells.
std::vector<std::vector<std::string>> read_tsv(const fs::path& path, std::size_t width) {
  std::istringstream in(read_file(path));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    auto cells = split_tab(line);
    if (cells.size() != width)
      throw DataError(path.filename().string() + ": expected " + std::to_string(width) + " columns");
    rows.push_back(std::move(cells));
  }
  return rows;
}

double to_double(const std::string& s, const fs::path& where) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw DataError(where.filename().string() + ": bad number " + s);
  return v;
}

std::vector<std::string> flat_lemmas(const AnnotatedDoc& doc) {
  std::vector<std::string> out;
  for (auto& s : doc_lemmas(doc))
    for (auto& w : s) out.push_back(std::move(w));
  return out;
}

struct SplitRow {
  std::string id;
  int label = 0;
  std::string part;  // train / dev / test
};

std::vector<SplitRow> read_split(const Context& ctx) {
  const auto path = ctx.require(artifacts::kSplit);
  std::vector<SplitRow> out;
  for (const auto& r : read_tsv(path, 5)) {
    SplitRow s{r[0], r[1] == "1" ? 1 : 0, r[2]};
    if (r[1] != "0" && r[1] != "1") throw DataError("split.tsv: bad label " + r[1]);
    if (s.part != "train" && s.part != "dev" && s.part != "test") throw DataError("split.tsv: bad split " + s.part);
    out.push_back(std::move(s));
  }
  return out;
}

// Corpus records listed in split.tsv, in split order.
std::vector<AnnotatedDoc> eligible_docs(const Context& ctx, const std::vector<SplitRow>& split) {
  auto docs = read_interchange(ctx.require(artifacts::kCorpus));
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < docs.size(); ++i) index.emplace(docs[i].id, i);
  std::vector<AnnotatedDoc> out;
  for (const auto& s : split) {
    auto it = index.find(s.id);
    if (it == index.end()) throw DataError("split.tsv lists unknown document " + s.id);
    out.push_back(docs[it->second]);
  }
  return out;
}

struct Datasets {
  Dataset train, dev, test, all;
};

Datasets partition(const std::vector<std::string>& ids, const std::vector<std::vector<double>>& rows,
                   std::size_t width, const std::vector<SplitRow>& split) {
  std::map<std::string, const SplitRow*> by_id;
  for (const auto& s : split) by_id.emplace(s.id, &s);
  std::vector<std::vector<double>> tr, dv, te;
  Datasets d;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto it = by_id.find(ids[i]);
    if (it == by_id.end()) throw DataError("document " + ids[i] + " is missing from split.tsv");
    const SplitRow& s = *it->second;
    auto& bucket = s.part == "train" ? tr : (s.part == "dev" ? dv : te);
    auto& ds = s.part == "train" ? d.train : (s.part == "dev" ? d.dev : d.test);
    bucket.push_back(rows[i]);
    ds.y.push_back(s.label);
    d.all.y.push_back(s.label);
  }
  d.train.x = Matrix::from_rows(tr, width);
  d.dev.x = Matrix::from_rows(dv, width);
  d.test.x = Matrix::from_rows(te, width);
  d.all.x = Matrix::from_rows(rows, width);
  return d;
}

struct LoadedFeatures {
  FeatureSchema schema;
  FeatureMatrix matrix;
  std::vector<SplitRow> split;
  Datasets data;
};

LoadedFeatures load_features(const Context& ctx) {
  LoadedFeatures f;
  const fs::path matrix = ctx.require(artifacts::kFeatures);
  f.schema = read_schema(ctx.require(artifacts::kSchema));
  f.matrix = read_feature_matrix(matrix, f.schema);
  f.split = read_split(ctx);
  f.data = partition(f.matrix.ids, f.matrix.rows, f.schema.size(), f.split);
  return f;
}

TrainedModel load_model(const Context& ctx, const FeatureSchema& schema) {
  TrainedModel m = read_model(ctx.require(artifacts::kModel));
  if (m.schema_hash != schema.hash())
    throw DataError("model.txt was trained on schema " + m.schema_hash + " but schema.tsv is " + schema.hash());
  return m;
}

// ---- ingest -----------------------------------------------------------------------------

void stage_ingest(const Context& ctx) {
  const auto& c = ctx.config;
  const auto path = require_input(c.interchange, "interchange");
  std::ifstream in(path);
  std::vector<AnnotatedDoc> docs;
  std::set<std::string> ids;
  int invalid = 0;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    try {
      AnnotatedDoc d = parse_interchange_record(line);
      auto errs = validate(d);
      if (!ids.insert(d.id).second) errs.push_back("duplicate id " + d.id);
      if (!errs.empty()) {
        ctx.log << "ingest: skipping line " << lineno << ": " << errs.front() << "\n";
        ++invalid;
        continue;
      }
      docs.push_back(std::move(d));
    } catch (const std::exception& e) {
      ctx.log << "ingest: skipping line " << lineno << ": " << e.what() << "\n";
      ++invalid;
    }
  }

  std::map<std::string, std::string> raw_text;
  int raw_posts = 0, deleted = 0;
  if (!c.raw_dump.empty()) {
    const RawDump dump = read_raw_dump(require_input(c.raw_dump, "raw_dump"));
    raw_posts = static_cast<int>(dump.posts.size());
    deleted = dump.skipped_deleted;
    for (const auto& p : dump.posts) raw_text[p.id] = p.title + "\n" + p.body;
  }

  std::string corpus = ctx.header();
  for (const auto& d : docs) corpus += to_interchange_record(d) + "\n";
  write_file_atomic(ctx.path(artifacts::kCorpus), corpus);

  std::ostringstream demo;
  demo << "id\tauthor_gender\tauthor_age\tothers\n";
  for (const auto& d : docs) {
    auto it = raw_text.find(d.id);
    const Demographics dm = extract_demographics(it != raw_text.end() ? it->second : d.title + "\n" + d.body);
    demo << d.id << '\t' << to_string(dm.author_gender) << '\t'
         << (dm.author_age ? std::to_string(*dm.author_age) : "-") << '\t';
    std::string others;
    for (const auto& o : dm.others) {
      if (!others.empty()) others += ';';
      others += o.entity + ":" + std::string(to_string(o.gender)) + ":" + (o.age ? std::to_string(*o.age) : "-");
    }
    demo << (others.empty() ? "-" : others) << '\n';
  }
  ctx.write(artifacts::kDemographics, demo.str());

  std::ostringstream rep;
  rep << "key\tvalue\n";
  rep << "records\t" << docs.size() << "\ninvalid\t" << invalid << "\nraw_posts\t" << raw_posts
      << "\nraw_deleted\t" << deleted << "\n";
  ctx.write(artifacts::kIngestReport, rep.str());
  ctx.log << "ingest: " << docs.size() << " records, " << invalid << " invalid\n";
}

// ---- extract ------------------------------------------------------------------------------

struct DocExtraction {
  std::vector<SvoTuple> svo;
  std::vector<AnpPair> anp;
  RoleCounts roles;
};

DocExtraction extract_doc(const AnnotatedDoc& doc, const PeopleLexicon& people) {
  const PersonaSets personas = build_persona_sets(doc, people);
  return {extract_svo(doc, personas), extract_anp(doc, personas), match_srl_roles(doc, personas)};
}

void stage_extract(const Context& ctx) {
  const auto docs = read_interchange(ctx.require(artifacts::kCorpus));
  const PeopleLexicon people = PeopleLexicon::load(require_input(ctx.config.people, "people"));
  std::vector<DocExtraction> ex(docs.size());
  parallel_for(docs.size(), ctx.config.jobs, [&](std::size_t i) { ex[i] = extract_doc(docs[i], people); });

  std::ostringstream dump;
  dump << "id\tkind\tfields\n";
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    write_extraction_dump(dump, docs[i], ex[i].svo, ex[i].anp);
    const ExtractionCounts counts{static_cast<int>(ex[i].svo.size()), static_cast<int>(ex[i].anp.size())};
    if (docs[i].label && filter_eligible(docs[i].meta(), counts)) eligible.push_back(i);
  }
  SplitSpec spec = ctx.config.split;
  spec.seed = ctx.config.seed;
  const SplitIndices idx = split_indices(eligible.size(), spec);
  std::vector<std::string> part(eligible.size());
  for (auto i : idx.train) part[i] = "train";
  for (auto i : idx.dev) part[i] = "dev";
  for (auto i : idx.test) part[i] = "test";

  std::ostringstream split;
  split << "id\tlabel\tsplit\tsvo\tanp\n";
  for (std::size_t k = 0; k < eligible.size(); ++k) {
    const std::size_t i = eligible[k];
    split << docs[i].id << '\t' << *docs[i].label << '\t' << part[k] << '\t' << ex[i].svo.size() << '\t'
          << ex[i].anp.size() << '\n';
  }
  ctx.write(artifacts::kExtractions, dump.str());
  ctx.write(artifacts::kSplit, split.str());
  ctx.log << "extract: " << eligible.size() << " of " << docs.size() << " documents eligible (" << idx.train.size()
          << " train, " << idx.dev.size() << " dev, " << idx.test.size() << " test)\n";
}

// ---- topics ---------------------------------------------------------------------------------

void stage_topics(const Context& ctx) {
  const auto& c = ctx.config;
  const auto split = read_split(ctx);
  const auto docs = eligible_docs(ctx, split);
  std::vector<std::vector<std::string>> tokens(docs.size());
  parallel_for(docs.size(), c.jobs, [&](std::size_t i) { tokens[i] = flat_lemmas(docs[i]); });
  const Vocabulary vocab = build_vocabulary(tokens);
  const int v = static_cast<int>(vocab.words.size());

  LdaOptions opt;
  opt.alpha = c.lda_alpha;
  opt.beta = c.lda_beta;
  opt.iterations = c.lda_iterations;
  opt.seed = c.seed;
  const SelectKResult sel = select_k(vocab.docs, v, c.lda_grid, opt);
  opt.k = sel.best_k;
  const TopicModel model = lda_fit(vocab.docs, v, opt);
  const MergedTopics merged = merge_small_topics(argmax_topics(model), model.k, c.min_posts);

  std::ostringstream sel_out;
  sel_out << "k\tperplexity\tselected\n";
  for (const auto& [k, p] : sel.perplexities)
    sel_out << k << '\t' << format_double(p) << '\t' << (k == sel.best_k ? 1 : 0) << '\n';
  if (sel.perplexities.empty()) sel_out << sel.best_k << "\t-\t1\n";

  std::ostringstream words;
  words << "topic\tdocs\tkept\ttop_words\n";
  for (int t = 0; t < model.k; ++t) {
    const bool kept = std::find(merged.surviving.begin(), merged.surviving.end(), t) != merged.surviving.end();
    words << topic_feature_name(t) << '\t' << merged.doc_counts[t] << '\t' << (kept ? 1 : 0) << '\t';
    const auto top = top_words(model, t, 10);
    for (std::size_t i = 0; i < top.size(); ++i) words << (i ? " " : "") << vocab.words[top[i]];
    words << '\n';
  }

  std::ostringstream assign;
  assign << "id\ttopic\n";
  for (std::size_t d = 0; d < docs.size(); ++d)
    assign << docs[d].id << '\t' << topic_feature_name(merged.assignment[d]) << '\n';

  ctx.write(artifacts::kTopicSelection, sel_out.str());
  ctx.write(artifacts::kTopicWords, words.str());
  ctx.write(artifacts::kTopics, assign.str());
  ctx.log << "topics: k=" << model.k << ", " << merged.surviving.size() << " kept, vocabulary " << v << "\n";
}

// ---- featurize ----------------------------------------------------------------------------

void stage_featurize(const Context& ctx) {
  const auto& c = ctx.config;
  const auto split = read_split(ctx);
  const auto docs = eligible_docs(ctx, split);
  const auto topic_words_path = ctx.require(artifacts::kTopicWords);
  const auto topics_path = ctx.require(artifacts::kTopics);
  const LexiconRegistry registry = load_registry(require_input(c.lexicons, "lexicons"));
  registry.require_complete();
  const PeopleLexicon people = PeopleLexicon::load(require_input(c.people, "people"));

  std::vector<std::string> topic_names;
  for (const auto& r : read_tsv(topic_words_path, 4))
    if (r[2] == "1") topic_names.push_back(r[0]);
  topic_names.push_back(topic_feature_name(kOtherTopic));
  std::map<std::string, std::string> doc_topic;
  for (const auto& r : read_tsv(topics_path, 2)) doc_topic[r[0]] = r[1];

  std::vector<std::vector<std::string>> tokens(docs.size());
  parallel_for(docs.size(), c.jobs, [&](std::size_t i) { tokens[i] = flat_lemmas(docs[i]); });
  std::vector<std::vector<std::string>> train_tokens;
  for (std::size_t i = 0; i < docs.size(); ++i)
    if (split[i].part == "train") train_tokens.push_back(tokens[i]);
  const TfidfModel tfidf = tfidf_fit(train_tokens, c.min_df);
  const FeatureSchema schema = build_schema(topic_names, tfidf, c.features);

  FeatureMatrix fm;
  fm.schema = schema;
  fm.rows.resize(docs.size());
  parallel_for(docs.size(), c.jobs, [&](std::size_t i) {
    std::vector<NamedScores> blocks;
    if (c.features.contextual) {
      auto it = doc_topic.find(docs[i].id);
      if (it == doc_topic.end()) throw DataError("topics.tsv has no entry for " + docs[i].id);
      blocks.push_back({{it->second, 1.0}});
      NamedScores tf;
      for (const auto& [col, val] : tfidf_transform(tfidf, tokens[i])) tf.emplace_back(tfidf_feature_name(tfidf.terms[col]), val);
      blocks.push_back(std::move(tf));
    }
    if (c.features.psycholinguistic) {
      const DocExtraction ex = extract_doc(docs[i], people);
      blocks.push_back(score_psycholinguistic(ex.svo, ex.anp, ex.roles, registry));
    }
    if (c.features.linguistic) blocks.push_back(score_linguistic(docs[i], registry));
    fm.rows[i] = assemble_features(schema, blocks).values;
  });
  for (const auto& d : docs) fm.ids.push_back(d.id);

  std::ostringstream stats;
  stats << "id";
  for (const auto& n : length_feature_names()) stats << '\t' << n;
  stats << '\n';
  for (const auto& d : docs) {
    stats << d.id;
    for (double v : length_features(d)) stats << '\t' << format_double(v);
    stats << '\n';
  }

  write_schema(ctx.path(artifacts::kSchema), schema, ctx.provenance);
  write_feature_matrix(ctx.path(artifacts::kFeatures), fm, ctx.provenance);
  ctx.write(artifacts::kDocStats, stats.str());
  ctx.log << "featurize: " << docs.size() << " documents x " << schema.size() << " features (schema "
          << schema.hash() << ")\n";
}

// ---- train ----------------------------------------------------------------------------------

void stage_train(const Context& ctx) {
  const auto& c = ctx.config;
  const LoadedFeatures f = load_features(ctx);
  GridResult grid = grid_search(f.data.train, f.data.dev, c.penalties, c.reg_weights, c.seed, c.jobs);
  grid.best.schema_hash = f.schema.hash();
  grid.best.feature_names = f.schema.names;
  write_model(ctx.path(artifacts::kModel), grid.best, ctx.hash);

  std::ostringstream os;
  os << "penalty\treg_weight\tdev_macro_f1\tselected\n";
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    const auto& p = grid.points[i];
    os << to_string(p.penalty) << '\t' << format_double(p.reg_weight) << '\t' << format_fixed(p.dev_f1, 4) << '\t'
       << (i == grid.best_index ? 1 : 0) << '\n';
  }
  ctx.write(artifacts::kGrid, os.str());
  ctx.log << "train: best " << to_string(grid.best.penalty) << " reg_weight=" << format_double(grid.best.reg_weight)
          << " dev F1=" << format_fixed(grid.points[grid.best_index].dev_f1, 4) << "\n";
}

// ---- evaluate --------------------------------------------------------------------------------

struct MetricsRow {
  std::string name;
  std::string config;
  Metrics metrics;
};

void stage_evaluate(const Context& ctx) {
  const auto& c = ctx.config;
  const LoadedFeatures f = load_features(ctx);
  const TrainedModel model = load_model(ctx, f.schema);
  const auto stats_path = ctx.require(artifacts::kDocStats);
  std::vector<std::string> stat_ids;
  std::vector<std::vector<double>> stat_rows;
  for (const auto& r : read_tsv(stats_path, 4)) {
    stat_ids.push_back(r[0]);
    stat_rows.push_back({to_double(r[1], stats_path), to_double(r[2], stats_path), to_double(r[3], stats_path)});
  }
  const Datasets length = partition(stat_ids, stat_rows, 3, f.split);

  std::vector<MetricsRow> rows;
  rows.push_back({"Random", "-", evaluate_random(f.data.test.y, c.seed, c.runs)});

  const GridResult lgrid = grid_search(length.train, length.dev, c.penalties, c.reg_weights, c.seed, c.jobs);
  TrainOptions lo;
  lo.penalty = lgrid.best.penalty;
  lo.reg_weight = lgrid.best.reg_weight;
  lo.seed = c.seed;
  rows.push_back({"Length", std::string(to_string(lo.penalty)) + " " + format_double(lo.reg_weight),
                  evaluate(length.train, length.test, lo, c.runs, c.jobs)});

  TrainOptions mo;
  mo.penalty = model.penalty;
  mo.reg_weight = model.reg_weight;
  mo.seed = c.seed;
  rows.push_back({"LR", std::string(to_string(mo.penalty)) + " " + format_double(mo.reg_weight),
                  evaluate(f.data.train, f.data.test, mo, c.runs, c.jobs)});

  for (const auto& dropped : c.ablations) {
    const AblationResult a = ablate(f.schema, f.data.train, f.data.dev, f.data.test, dropped, c.penalties,
                                    c.reg_weights, c.seed, c.runs, c.jobs);
    rows.push_back({"LR - " + group_set_name(dropped),
                    std::string(to_string(a.penalty)) + " " + format_double(a.reg_weight), a.metrics});
  }

  std::ostringstream os;
  os << "model\tconfig\tprecision\trecall\tf1\tprecision_sd\trecall_sd\tf1_sd\n";
  ojson arr = ojson::array();
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    os << r.name << '\t' << r.config << '\t' << format_fixed(m.macro_precision, 4) << '\t'
       << format_fixed(m.macro_recall, 4) << '\t' << format_fixed(m.macro_f1, 4) << '\t'
       << format_fixed(m.std_precision, 4) << '\t' << format_fixed(m.std_recall, 4) << '\t'
       << format_fixed(m.std_f1, 4) << '\n';
    ojson runs = ojson::array();
    for (const auto& run : m.runs) runs.push_back(run.macro_f1);
    arr.push_back({{"model", r.name},
                   {"config", r.config},
                   {"macro_precision", m.macro_precision},
                   {"macro_recall", m.macro_recall},
                   {"macro_f1", m.macro_f1},
                   {"std_precision", m.std_precision},
                   {"std_recall", m.std_recall},
                   {"std_f1", m.std_f1},
                   {"run_f1", runs}});
  }
  ctx.write(artifacts::kMetrics, os.str());
  ctx.write_json(artifacts::kMetricsJson, {{"test_size", f.data.test.y.size()}, {"rows", arr}});
  for (const auto& r : rows)
    ctx.log << "evaluate: " << r.name << " F1=" << format_fixed(r.metrics.macro_f1, 4) << "\n";
}

// ---- interpret ----------------------------------------------------------------------------

void stage_interpret(const Context& ctx) {
  const LoadedFeatures f = load_features(ctx);
  const TrainedModel model = load_model(ctx, f.schema);
  auto rows = odds_ratios(model);
  const Dataset& all = f.data.all;
  std::vector<double> label(all.y.begin(), all.y.end());
  std::vector<bool> defined(rows.size(), false);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    std::vector<double> col(all.x.rows);
    for (std::size_t i = 0; i < all.x.rows; ++i) col[i] = all.x.at(i, j);
    try {
      const SpearmanResult s = spearman(col, label);
      rows[j].spearman_rho = s.rho;
      rows[j].p_value = s.p_value;
      defined[j] = true;
    } catch (const DataError&) {
    }
  }

  std::ostringstream os;
  os << "feature\tgroup\tbeta\todds_ratio\tdirection\trho\tp_value\tsignificance\n";
  ojson arr = ojson::array();
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const auto& r = rows[j];
    const std::string dir = r.positive ? "positive" : "negative";
    os << r.name << '\t' << to_string(f.schema.groups[j]) << '\t' << format_fixed(r.beta, 4) << '\t'
       << format_fixed(r.or_value, 4) << '\t' << dir << '\t';
    if (defined[j]) {
      os << format_fixed(r.spearman_rho, 4) << '\t' << format_fixed(r.p_value, 4) << '\t'
         << significance_stars(r.p_value) << '\n';
    } else {
      os << "NA\tNA\t\n";
    }
    ojson e = {{"feature", r.name},
               {"group", to_string(f.schema.groups[j])},
               {"beta", r.beta},
               {"odds_ratio", r.or_value},
               {"direction", dir}};
    e["rho"] = defined[j] ? ojson(r.spearman_rho) : ojson(nullptr);
    e["p_value"] = defined[j] ? ojson(r.p_value) : ojson(nullptr);
    arr.push_back(std::move(e));
  }
  ctx.write(artifacts::kOddsRatios, os.str());
  ctx.write_json(artifacts::kOddsRatiosJson, {{"intercept", model.intercept}, {"features", arr}});
  ctx.log << "interpret: " << rows.size() << " odds ratios\n";
}

// ---- bias ------------------------------------------------------------------------------------

struct Occurrence {
  Gender gender;
  std::optional<int> age;
  bool blamed;
};

ContingencyTable gender_table(const std::vector<Occurrence>& occ, std::optional<AgeBucket> bucket) {
  ContingencyTable t;
  t.row_labels = {"male", "female"};
  t.col_labels = {"blamed", "not_blamed"};
  t.counts = {{0, 0}, {0, 0}};
  for (const auto& o : occ) {
    if (bucket && (!o.age || bucket_age(*o.age) != *bucket)) continue;
    const int r = o.gender == Gender::male ? 0 : 1;
    ++t.counts[r][o.blamed ? 0 : 1];
  }
  return t;
}

void stage_bias(const Context& ctx) {
  const auto split = read_split(ctx);
  const auto demo_path = ctx.require(artifacts::kDemographics);
  std::map<std::string, int> label;
  for (const auto& s : split) label[s.id] = s.label;

  auto gender_of = [&](const std::string& g) {
    if (g == "male") return Gender::male;
    if (g == "female") return Gender::female;
    return Gender::unknown;
  };
  std::vector<Occurrence> occ;
  for (const auto& r : read_tsv(demo_path, 4)) {
    auto it = label.find(r[0]);
    if (it == label.end()) continue;
    const bool yta = it->second == 1;
    const Gender ag = gender_of(r[1]);
    if (ag != Gender::unknown) {
      std::optional<int> age;
      if (r[2] != "-") age = static_cast<int>(to_double(r[2], demo_path));
      occ.push_back({ag, age, yta});
    }
    if (r[3] == "-") continue;
    for (const auto& person : split_list(r[3], ';')) {
      const auto parts = split_list(person, ':');
      if (parts.size() != 3) throw DataError("demographics.tsv: bad person entry " + person);
      const Gender g = gender_of(parts[1]);
      if (g == Gender::unknown) continue;
      std::optional<int> age;
      if (parts[2] != "-") age = static_cast<int>(to_double(parts[2], demo_path));
      occ.push_back({g, age, !yta});
    }
  }

  std::ostringstream os;
  os << "scope\tn\tchi2\tdof\tp_value\tsignificance\tphi\teffect\tnote\n";
  ojson tables = ojson::array();
  std::vector<std::pair<std::string, std::optional<AgeBucket>>> scopes = {{"all", std::nullopt}};
  for (AgeBucket b : kAgeBuckets) scopes.emplace_back(std::string(to_string(b)), b);
  for (const auto& [scope, bucket] : scopes) {
    const ContingencyTable t = gender_table(occ, bucket);
    ojson e = {{"scope", scope}, {"counts", t.counts}, {"rows", t.row_labels}, {"cols", t.col_labels}};
    try {
      const Chi2Result r = chi2_test(t);
      const double phi = cramers_phi(r.chi2, r.n, 2, 2);
      os << scope << '\t' << r.n << '\t' << format_fixed(r.chi2, 2) << '\t' << r.dof << '\t'
         << format_fixed(r.p_value, 4) << '\t' << significance_stars(r.p_value) << '\t' << format_fixed(phi, 2)
         << '\t' << to_string(effect_size(phi)) << "\t-\n";
      e["n"] = r.n;
      e["chi2"] = r.chi2;
      e["dof"] = r.dof;
      e["p_value"] = r.p_value;
      e["phi"] = phi;
      e["effect"] = to_string(effect_size(phi));
    } catch (const DataError& err) {
      os << scope << '\t' << t.total() << "\tNA\tNA\tNA\t\tNA\tNA\t" << err.what() << '\n';
      e["n"] = t.total();
      e["note"] = err.what();
    }
    tables.push_back(std::move(e));
  }

  const ContingencyTable all = gender_table(occ, std::nullopt);
  const GenderBlameCounts counts{static_cast<double>(all.counts[0][0]), static_cast<double>(all.counts[0][1]),
                                 static_cast<double>(all.counts[1][0]), static_cast<double>(all.counts[1][1])};
  ojson lo = {{"male_blamed", counts.male_blamed},
              {"male_not_blamed", counts.male_not},
              {"female_blamed", counts.female_blamed},
              {"female_not_blamed", counts.female_not}};
  os << "\nmeasure\tvalue\n";
  try {
    const LogOdds l = log_odds_blame(counts, ctx.config.haldane);
    os << "log_odds_male_vs_female\t" << format_fixed(l.log_odds, 4) << "\n";
    os << "percent_more_likely\t" << format_fixed(100.0 * l.percent_more_likely, 1) << "\n";
    os << "haldane\t" << (l.haldane ? 1 : 0) << "\n";
    lo["log_odds"] = l.log_odds;
    lo["percent_more_likely"] = 100.0 * l.percent_more_likely;
    lo["haldane"] = l.haldane;
  } catch (const DataError& err) {
    os << "log_odds_male_vs_female\tNA\nnote\t" << err.what() << "\n";
    lo["note"] = err.what();
  }
  ctx.write(artifacts::kBias, os.str());
  ctx.write_json(artifacts::kBiasJson, {{"occurrences", occ.size()}, {"tables", tables}, {"log_odds", lo}});
  ctx.log << "bias: " << occ.size() << " gendered occurrences\n";
}

}  // namespace

void run_stage(Stage stage, const PipelineConfig& config, std::ostream& log) {
  const Context ctx(config, log);
  switch (stage) {
    case Stage::ingest: stage_ingest(ctx); break;
    case Stage::extract: stage_extract(ctx); break;
    case Stage::topics: stage_topics(ctx); break;
    case Stage::featurize: stage_featurize(ctx); break;
    case Stage::train: stage_train(ctx); break;
    case Stage::evaluate: stage_evaluate(ctx); break;
    case Stage::interpret: stage_interpret(ctx); break;
    case Stage::bias: stage_bias(ctx); break;
  }
}

void run_pipeline(const PipelineConfig& config, std::ostream& log) {
  for (Stage s : all_stages()) run_stage(s, config, log);
}

}  // namespace blame
