#include "softhorn/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "softhorn/jsonl.hpp"
#include "softhorn/parser.hpp"
#include "softhorn/toy_model.hpp"

namespace softhorn::cli {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------
// configuration file: flat "section.key = value" lines, '#' comments;
// command-line flags win over file values

using ConfigMap = std::map<std::string, std::string>;

ConfigMap load_config(const std::string& path) {
  ConfigMap out;
  std::string text = read_file(path);
  std::size_t start = 0;
  int line_no = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      std::size_t a = s.find_first_not_of(" \t\r");
      std::size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw SemanticsError("config line " + std::to_string(line_no) +
                           ": expected 'section.key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.find('.') == std::string::npos)
      throw SemanticsError("config key '" + key + "' needs a section prefix");
    out[key] = value;
  }
  return out;
}

class ConfigFallback {
 public:
  ConfigFallback(const ConfigMap& cfg, std::string section)
      : cfg_(cfg), section_(std::move(section)) {}

  std::optional<std::string> lookup(const std::string& key) const {
    auto it = cfg_.find(section_ + "." + key);
    if (it != cfg_.end()) return it->second;
    it = cfg_.find("common." + key);
    if (it != cfg_.end()) return it->second;
    return std::nullopt;
  }

  void str(const CLI::Option* opt, std::string& var,
           const std::string& key) const {
    if (opt->count() == 0)
      if (auto v = lookup(key)) var = *v;
  }
  template <typename T>
  void num(const CLI::Option* opt, T& var, const std::string& key) const {
    if (opt->count() == 0)
      if (auto v = lookup(key)) {
        std::istringstream in(*v);
        if (!(in >> var))
          throw SemanticsError("config value for " + key + " is not numeric");
      }
  }
  void flag(const CLI::Option* opt, bool& var, const std::string& key) const {
    if (opt->count() == 0)
      if (auto v = lookup(key)) var = (*v == "true" || *v == "1" || *v == "yes");
  }

 private:
  const ConfigMap& cfg_;
  std::string section_;
};

std::array<double, 3> parse_ratios(const std::string& text) {
  std::array<double, 3> out{};
  std::istringstream in(text);
  std::string part;
  int i = 0;
  while (std::getline(in, part, ',')) {
    if (i >= 3) throw SemanticsError("ratios need exactly three values");
    out[i++] = std::stod(part);
  }
  if (i != 3) throw SemanticsError("ratios need exactly three values");
  return out;
}

std::vector<double> parse_threshold_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) out.push_back(std::stod(part));
  if (out.empty()) throw SemanticsError("empty threshold list");
  return out;
}

std::string hash_hex(const std::string& bytes) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

std::string ca_key(double k) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "ca@%.2f", k);
  return buf;
}

TemplateRegistry load_templates(const Registry& reg,
                                const std::string& templates_path) {
  TemplateRegistry templates(reg);
  if (!templates_path.empty())
    templates.load_overrides(read_file(templates_path));
  templates.check_injective();
  return templates;
}

// ---------------------------------------------------------------------

struct IoOptions {
  std::string registry_path;
  std::string rules_path;
  std::string facts_path;
  std::string templates_path;
};

int cmd_parse_check(const IoOptions& io) {
  Registry reg = load_registry_file(io.registry_path);
  std::vector<Rule> rules = load_rules_file(io.rules_path, reg);
  std::printf("registry: %zu predicates\n", reg.size());
  std::printf("rules: %zu parsed, ids r1..r%zu\n", rules.size(), rules.size());
  if (!io.facts_path.empty()) {
    std::vector<Atom> facts = load_facts_file(io.facts_path, reg);
    std::printf("facts: %zu parsed\n", facts.size());
  }
  TemplateRegistry templates = load_templates(reg, io.templates_path);
  std::printf("templates: ok\n");
  return kOk;
}

int cmd_reason(const IoOptions& io, const std::vector<std::string>& queries,
               bool verbose, int budget) {
  Registry reg = load_registry_file(io.registry_path);
  RuleSet rs;
  rs.registry = reg;
  rs.rules = load_rules_file(io.rules_path, reg);
  std::vector<Atom> facts = load_facts_file(io.facts_path, reg);
  GroundProgram prog = ground(rs, facts);
  SolverLimits limits;
  limits.max_candidates = budget;
  StableModelSet sms = stable_models(prog, limits);

  if (verbose) {
    std::printf("stable models (hard tier %d):\n", sms.max_hard_count);
    for (std::size_t i = 0; i < sms.models.size(); ++i) {
      const StableModel& m = sms.models[i];
      std::string atoms;
      for (int id : m.atoms) {
        if (!atoms.empty()) atoms += ", ";
        atoms += prog.describe_atom(id);
      }
      std::printf("  #%zu  p=%.6f  hard=%d  soft=%.6f  {%s}\n", i,
                  m.probability, m.hard_count, m.soft_weight_sum,
                  atoms.c_str());
    }
    std::printf("  normalizer=%.6g models=%zu\n", sms.normalizer,
                sms.models.size());
  }

  if (queries.empty()) {
    for (int id = 0; id < static_cast<int>(prog.atom_count()); ++id) {
      if (!prog.in_closure(id)) continue;
      std::printf("%s %.3f\n", prog.describe_atom(id).c_str(),
                  sms.probability_of(id));
    }
  } else {
    for (const std::string& q : queries) {
      Atom atom = parse_fact(q, reg);
      std::printf("%s %.3f\n", format_atom(atom, reg).c_str(),
                  query_probability(prog, sms, atom));
    }
  }
  return kOk;
}

struct GenerateOptions {
  IoOptions io;
  std::string out_dir = "out";
  int n = 800;
  int m = 5;
  int depth = 3;
  std::uint64_t seed = 0;
  std::string fact_format = "names";
  std::string ratios_text;  // empty -> per-mode default
  int budget = 24;
  std::vector<std::string> rule_ids;  // single mode filter
};

void shift_context_indices(std::vector<Example>& block, int base) {
  for (Example& e : block) e.context_index += base;
}

int next_context_base(const std::vector<Example>& all) {
  int base = 0;
  for (const Example& e : all) base = std::max(base, e.context_index + 1);
  return base;
}

int cmd_generate(const std::string& mode, const GenerateOptions& opt) {
  Registry reg = load_registry_file(opt.io.registry_path);
  std::string rules_bytes = read_file(opt.io.rules_path);
  std::vector<Rule> rules = parse_rules_text(rules_bytes, reg);
  if (rules.empty()) throw SemanticsError("rule file has no rules");
  TemplateRegistry templates = load_templates(reg, opt.io.templates_path);

  GenConfig cfg;
  cfg.n = opt.n;
  cfg.m = opt.m;
  cfg.seed = opt.seed;
  if (opt.fact_format == "names")
    cfg.fact_format = FactFormat::kNames;
  else if (opt.fact_format == "letters")
    cfg.fact_format = FactFormat::kLetters;
  else
    throw SemanticsError("fact format must be 'names' or 'letters'");
  cfg.pools = default_pools(cfg.fact_format);
  cfg.limits.max_candidates = opt.budget;
  if (!opt.ratios_text.empty())
    cfg.split_ratios = parse_ratios(opt.ratios_text);
  else if (mode == "single")
    cfg.split_ratios = {0.8, 0.1, 0.1};
  else
    cfg.split_ratios = {0.7, 0.1, 0.2};

  GenStats stats;
  std::vector<Example> examples;
  if (mode == "single") {
    std::vector<Rule> selected;
    if (opt.rule_ids.empty()) {
      selected = rules;
    } else {
      for (const std::string& id : opt.rule_ids) {
        bool found = false;
        for (const Rule& r : rules)
          if (r.id == id) {
            selected.push_back(r);
            found = true;
          }
        if (!found) throw SemanticsError("no rule with id '" + id + "'");
      }
    }
    for (const Rule& r : selected) {
      std::vector<Example> block = gen_single_rule(r, reg, cfg, &stats);
      shift_context_indices(block, next_context_base(examples));
      examples.insert(examples.end(), block.begin(), block.end());
    }
  } else if (mode == "overlap") {
    examples = gen_overlap(rules, reg, cfg, &stats);
  } else if (mode == "chain") {
    examples = gen_chain(rules, opt.depth, reg, cfg, &stats);
  } else {
    throw SemanticsError("unknown generate mode '" + mode + "'");
  }

  Rng split_rng = Rng::stream(cfg.seed, Rng::hash_str("split"));
  DatasetSplit split = split_dataset(examples, cfg.split_ratios, split_rng);

  fs::create_directories(opt.out_dir);
  ExampleRenderer renderer(reg, templates);
  auto render_all = [&](const std::vector<Example>& part) {
    std::vector<ExampleRecord> records;
    records.reserve(part.size());
    for (const Example& e : part) records.push_back(renderer.render(e));
    return records;
  };
  auto count_contexts = [](const std::vector<Example>& part) {
    std::set<int> ids;
    for (const Example& e : part) ids.insert(e.context_index);
    return ids.size();
  };
  std::vector<ExampleRecord> train = render_all(split.train);
  std::vector<ExampleRecord> dev = render_all(split.dev);
  std::vector<ExampleRecord> test = render_all(split.test);
  write_jsonl(opt.out_dir + "/train.jsonl", train);
  write_jsonl(opt.out_dir + "/dev.jsonl", dev);
  write_jsonl(opt.out_dir + "/test.jsonl", test);

  ordered_json manifest;
  manifest["mode"] = mode;
  manifest["seed"] = opt.seed;
  manifest["n"] = opt.n;
  manifest["m"] = opt.m;
  if (mode == "chain") manifest["depth"] = opt.depth;
  manifest["fact_format"] = opt.fact_format;
  manifest["split_ratios"] = cfg.split_ratios;
  manifest["rules_file"] = opt.io.rules_path;
  manifest["rules_hash"] = hash_hex(rules_bytes);
  manifest["registry_file"] = opt.io.registry_path;
  manifest["registry_hash"] = hash_hex(read_file(opt.io.registry_path));
  ordered_json counts;
  counts["total"] = examples.size();
  counts["train"] = train.size();
  counts["dev"] = dev.size();
  counts["test"] = test.size();
  manifest["counts"] = counts;
  ordered_json ctx_counts;
  ctx_counts["total"] = stats.contexts;
  ctx_counts["train"] = count_contexts(split.train);
  ctx_counts["dev"] = count_contexts(split.dev);
  ctx_counts["test"] = count_contexts(split.test);
  manifest["contexts"] = ctx_counts;
  std::map<std::string, std::size_t> by_class;
  for (const Example& e : examples) ++by_class[e.hyp_class];
  manifest["per_hyp_class"] = by_class;
  if (mode == "overlap")
    manifest["per_context_examples"] = overlap_batch_size(rules.size());
  if (mode == "chain") {
    std::map<std::string, std::size_t> hist;
    for (const Example& e : examples) ++hist[std::to_string(e.depth)];
    manifest["depth_histogram"] = hist;
  }
  manifest["weight_ties"] = stats.tie_labels;
  std::ofstream mf(opt.out_dir + "/manifest.json");
  mf << manifest.dump(2) << "\n";

  std::printf("generated %zu examples over %zu contexts -> %s\n",
              examples.size(), stats.contexts, opt.out_dir.c_str());
  std::printf("split: train=%zu dev=%zu test=%zu\n", train.size(), dev.size(),
              test.size());
  return kOk;
}

int cmd_verbalize(const IoOptions& io, const std::string& hypothesis,
                  bool shuffle, std::uint64_t seed) {
  Registry reg = load_registry_file(io.registry_path);
  RuleSet rs;
  rs.registry = reg;
  rs.rules = load_rules_file(io.rules_path, reg);
  std::vector<Atom> facts = load_facts_file(io.facts_path, reg);
  TemplateRegistry templates = load_templates(reg, io.templates_path);

  VerbalContext ctx{facts, rs.rules, {}};
  Rng rng = Rng::stream(seed, Rng::hash_str("verbalize"));
  std::string text =
      assemble_context(ctx, reg, templates, shuffle ? &rng : nullptr);
  if (hypothesis.empty()) {
    std::printf("%s\n", text.c_str());
  } else {
    Atom h = parse_fact(hypothesis, reg);
    std::string htext = verbalize_fact(h, reg, templates);
    Prompt prompt = assemble_prompt(text, htext);
    std::printf("%s\n", prompt.encoded.c_str());
  }
  return kOk;
}

std::map<std::string, double> read_predictions(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SemanticsError("cannot open file: " + path);
  std::map<std::string, double> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const std::exception& ex) {
      throw SemanticsError("bad JSON in predictions line " +
                           std::to_string(line_no) + ": " + ex.what());
    }
    out[j.at("example_id").get<std::string>()] =
        j.at("predicted_prob").get<double>();
  }
  return out;
}

int cmd_evaluate(const std::string& dataset_path,
                 const std::string& predictions_path,
                 const std::string& thresholds_text,
                 const std::string& out_path) {
  std::vector<ExampleRecord> records = read_jsonl(dataset_path);
  std::map<std::string, double> preds = read_predictions(predictions_path);
  std::vector<double> thresholds = parse_threshold_list(thresholds_text);

  std::vector<std::string> missing;
  std::vector<PredictionRecord> joined;
  for (const ExampleRecord& r : records) {
    auto it = preds.find(r.id);
    if (it == preds.end()) {
      missing.push_back(r.id);
      continue;
    }
    PredictionRecord pr;
    pr.example_id = r.id;
    pr.predicted_prob = std::clamp(it->second, 0.0, 1.0);
    pr.target_weight = r.weight;
    pr.target_label = r.label;
    joined.push_back(pr);
  }
  if (!missing.empty()) {
    std::fprintf(stderr, "missing predictions for %zu example ids:\n",
                 missing.size());
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i)
      std::fprintf(stderr, "  %s\n", missing[i].c_str());
    if (missing.size() > 20) std::fprintf(stderr, "  ...\n");
    return kIdMismatch;
  }
  if (preds.size() > records.size())
    std::fprintf(stderr, "note: %zu extra prediction ids ignored\n",
                 preds.size() - records.size());

  MetricsReport report = compute_metrics(joined, thresholds);
  ordered_json j;
  j["accuracy"] = report.accuracy;
  j["f1"] = report.f1;
  for (double k : thresholds) j[ca_key(k)] = report.ca_at_k.at(k);
  j["count"] = report.count;
  std::string text = j.dump(2);
  std::printf("%s\n", text.c_str());
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    out << text << "\n";
  }
  return kOk;
}

int cmd_train_toy(const std::string& train_path, const std::string& eval_path,
                  const std::string& out_path, int epochs, double lr,
                  bool no_tokens, int hash_dim,
                  const std::string& thresholds_text) {
  std::vector<ExampleRecord> train = read_jsonl(train_path);
  std::vector<ExampleRecord> eval =
      eval_path.empty() ? train : read_jsonl(eval_path);

  ToyConfig cfg;
  cfg.epochs = epochs;
  cfg.learning_rate = lr;
  cfg.token_features = !no_tokens;
  cfg.hash_dim = hash_dim;
  TrainResult result = train_toy(train, cfg);
  std::printf("trained %d epochs, final risk %.6f\n", result.epochs_run,
              result.final_risk);

  std::vector<PredictionRecord> joined;
  std::ofstream out;
  if (!out_path.empty()) {
    out.open(out_path, std::ios::binary);
    if (!out) throw SemanticsError("cannot write file: " + out_path);
  }
  for (const ExampleRecord& r : eval) {
    double p = result.model.predict(r, cfg);
    if (out.is_open()) {
      ordered_json j;
      j["example_id"] = r.id;
      j["predicted_prob"] = p;
      out << j.dump() << "\n";
    }
    joined.push_back({r.id, p, r.weight, r.label});
  }
  MetricsReport report =
      compute_metrics(joined, parse_threshold_list(thresholds_text));
  std::printf("eval: accuracy=%.4f f1=%.4f", report.accuracy, report.f1);
  for (const auto& [k, v] : report.ca_at_k)
    std::printf(" %s=%.4f", ca_key(k).c_str(), v);
  std::printf(" count=%zu\n", report.count);
  return kOk;
}

int run_impl(const std::vector<std::string>& args) {
  CLI::App app{"softhorn: exact reasoning over weighted Horn rules and a "
               "synthetic dataset forge"};
  app.require_subcommand(1);
  app.fallthrough();  // --config may follow the subcommand name

  std::string config_path;
  app.add_option("--config", config_path,
                 "configuration file with 'section.key = value' lines");
  app.allow_config_extras(false);

  // parse-check -----------------------------------------------------
  IoOptions pc_io;
  CLI::App* pc = app.add_subcommand("parse-check", "parse inputs and report");
  auto* pc_reg = pc->add_option("--registry", pc_io.registry_path);
  auto* pc_rules = pc->add_option("--rules", pc_io.rules_path);
  auto* pc_facts = pc->add_option("--facts", pc_io.facts_path);
  auto* pc_tmpl = pc->add_option("--templates", pc_io.templates_path);

  // reason ----------------------------------------------------------
  IoOptions re_io;
  std::vector<std::string> re_queries;
  bool re_verbose = false;
  int re_budget = 24;
  CLI::App* re = app.add_subcommand("reason", "exact query probabilities");
  auto* re_reg = re->add_option("--registry", re_io.registry_path);
  auto* re_rules = re->add_option("--rules", re_io.rules_path);
  auto* re_facts = re->add_option("--facts", re_io.facts_path);
  re->add_option("--query", re_queries, "ground atom, repeatable");
  re->add_flag("--verbose", re_verbose, "print the stable-model table");
  auto* re_budget_opt = re->add_option("--budget", re_budget,
                                       "max candidate atoms to enumerate");

  // generate --------------------------------------------------------
  GenerateOptions gen;
  CLI::App* ge = app.add_subcommand("generate", "emit labeled datasets");
  ge->require_subcommand(1);
  CLI::App* ge_single = ge->add_subcommand("single", "one rule per context");
  CLI::App* ge_overlap =
      ge->add_subcommand("overlap", "rule subsets sharing a conclusion");
  CLI::App* ge_chain = ge->add_subcommand("chain", "chained rule executions");
  std::vector<CLI::Option*> gen_opts;
  for (CLI::App* sub : {ge_single, ge_overlap, ge_chain}) {
    sub->add_option("--registry", gen.io.registry_path)->group("io");
    sub->add_option("--rules", gen.io.rules_path)->group("io");
    sub->add_option("--templates", gen.io.templates_path)->group("io");
    sub->add_option("--out", gen.out_dir)->group("io");
    sub->add_option("--n", gen.n, "target example count");
    sub->add_option("--m", gen.m, "max facts per context");
    sub->add_option("--seed", gen.seed);
    sub->add_option("--fact-format", gen.fact_format, "names|letters");
    sub->add_option("--ratios", gen.ratios_text, "train,dev,test");
    sub->add_option("--budget", gen.budget);
  }
  ge_chain->add_option("--depth", gen.depth, "chain length");
  ge_single->add_option("--rule-id", gen.rule_ids,
                        "generate only for these rule ids (repeatable)");

  // verbalize ---------------------------------------------------------
  IoOptions vb_io;
  std::string vb_hypothesis;
  bool vb_shuffle = false;
  std::uint64_t vb_seed = 0;
  CLI::App* vb = app.add_subcommand("verbalize", "render context to English");
  auto* vb_reg = vb->add_option("--registry", vb_io.registry_path);
  auto* vb_rules = vb->add_option("--rules", vb_io.rules_path);
  auto* vb_facts = vb->add_option("--facts", vb_io.facts_path);
  auto* vb_tmpl = vb->add_option("--templates", vb_io.templates_path);
  vb->add_option("--hypothesis", vb_hypothesis,
                 "emit the encoded prompt for this ground atom");
  vb->add_flag("--shuffle", vb_shuffle, "shuffle sentence order");
  vb->add_option("--seed", vb_seed);

  // evaluate ----------------------------------------------------------
  std::string ev_dataset, ev_predictions, ev_out;
  std::string ev_thresholds = "0.15,0.10,0.05,0.01";
  CLI::App* ev = app.add_subcommand("evaluate", "score predictions");
  auto* ev_ds = ev->add_option("--dataset", ev_dataset);
  auto* ev_pr = ev->add_option("--predictions", ev_predictions);
  ev->add_option("--thresholds", ev_thresholds, "CA@k thresholds");
  ev->add_option("--out", ev_out, "also write the metrics JSON here");

  // train-toy ----------------------------------------------------------
  std::string tt_train, tt_eval, tt_out;
  int tt_epochs = 2000;
  double tt_lr = 0.1;
  bool tt_no_tokens = false;
  int tt_hash_dim = 512;
  std::string tt_thresholds = "0.15,0.10,0.05,0.01";
  CLI::App* tt = app.add_subcommand("train-toy",
                                    "fit the toy classifier on a dataset");
  auto* tt_tr = tt->add_option("--train", tt_train);
  tt->add_option("--eval", tt_eval, "defaults to the training file");
  tt->add_option("--out", tt_out, "predictions JSONL");
  tt->add_option("--epochs", tt_epochs);
  tt->add_option("--lr", tt_lr);
  tt->add_flag("--no-token-features", tt_no_tokens);
  tt->add_option("--hash-dim", tt_hash_dim);
  tt->add_option("--thresholds", tt_thresholds);

  std::vector<const char*> argv;
  argv.push_back("softhorn");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kParseError;
  }

  ConfigMap cfg;
  if (!config_path.empty()) cfg = load_config(config_path);

  if (pc->parsed()) {
    ConfigFallback f(cfg, "parse-check");
    f.str(pc_reg, pc_io.registry_path, "registry");
    f.str(pc_rules, pc_io.rules_path, "rules");
    f.str(pc_facts, pc_io.facts_path, "facts");
    f.str(pc_tmpl, pc_io.templates_path, "templates");
    if (pc_io.registry_path.empty() || pc_io.rules_path.empty())
      throw SemanticsError("parse-check needs --registry and --rules");
    return cmd_parse_check(pc_io);
  }
  if (re->parsed()) {
    ConfigFallback f(cfg, "reason");
    f.str(re_reg, re_io.registry_path, "registry");
    f.str(re_rules, re_io.rules_path, "rules");
    f.str(re_facts, re_io.facts_path, "facts");
    f.num(re_budget_opt, re_budget, "budget");
    if (re_io.registry_path.empty() || re_io.rules_path.empty() ||
        re_io.facts_path.empty())
      throw SemanticsError("reason needs --registry, --rules and --facts");
    return cmd_reason(re_io, re_queries, re_verbose, re_budget);
  }
  if (ge->parsed()) {
    std::string mode;
    CLI::App* sub = nullptr;
    if (ge_single->parsed()) { mode = "single"; sub = ge_single; }
    if (ge_overlap->parsed()) { mode = "overlap"; sub = ge_overlap; }
    if (ge_chain->parsed()) { mode = "chain"; sub = ge_chain; }
    ConfigFallback f(cfg, "generate");
    f.str(sub->get_option("--registry"), gen.io.registry_path, "registry");
    f.str(sub->get_option("--rules"), gen.io.rules_path, "rules");
    f.str(sub->get_option("--templates"), gen.io.templates_path, "templates");
    f.str(sub->get_option("--out"), gen.out_dir, "out");
    f.num(sub->get_option("--n"), gen.n, "n");
    f.num(sub->get_option("--m"), gen.m, "m");
    f.num(sub->get_option("--seed"), gen.seed, "seed");
    f.str(sub->get_option("--fact-format"), gen.fact_format, "fact-format");
    f.str(sub->get_option("--ratios"), gen.ratios_text, "ratios");
    f.num(sub->get_option("--budget"), gen.budget, "budget");
    if (mode == "chain")
      f.num(sub->get_option("--depth"), gen.depth, "depth");
    if (gen.io.registry_path.empty() || gen.io.rules_path.empty())
      throw SemanticsError("generate needs --registry and --rules");
    return cmd_generate(mode, gen);
  }
  if (vb->parsed()) {
    ConfigFallback f(cfg, "verbalize");
    f.str(vb_reg, vb_io.registry_path, "registry");
    f.str(vb_rules, vb_io.rules_path, "rules");
    f.str(vb_facts, vb_io.facts_path, "facts");
    f.str(vb_tmpl, vb_io.templates_path, "templates");
    if (vb_io.registry_path.empty() || vb_io.rules_path.empty() ||
        vb_io.facts_path.empty())
      throw SemanticsError("verbalize needs --registry, --rules and --facts");
    return cmd_verbalize(vb_io, vb_hypothesis, vb_shuffle, vb_seed);
  }
  if (ev->parsed()) {
    ConfigFallback f(cfg, "evaluate");
    f.str(ev_ds, ev_dataset, "dataset");
    f.str(ev_pr, ev_predictions, "predictions");
    if (ev_dataset.empty() || ev_predictions.empty())
      throw SemanticsError("evaluate needs --dataset and --predictions");
    return cmd_evaluate(ev_dataset, ev_predictions, ev_thresholds, ev_out);
  }
  if (tt->parsed()) {
    ConfigFallback f(cfg, "train-toy");
    f.str(tt_tr, tt_train, "train");
    if (tt_train.empty()) throw SemanticsError("train-toy needs --train");
    return cmd_train_toy(tt_train, tt_eval, tt_out, tt_epochs, tt_lr,
                         tt_no_tokens, tt_hash_dim, tt_thresholds);
  }
  return kParseError;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  try {
    return run_impl(args);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kParseError;
  } catch (const BudgetError& e) {
    std::fprintf(stderr, "budget error: %s\n", e.what());
    return kBudgetError;
  } catch (const SemanticsError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kParseError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 1;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace softhorn::cli
