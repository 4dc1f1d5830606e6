#include "mlkit/cli.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "mlkit/bbn.hpp"
#include "mlkit/dataset.hpp"
#include "mlkit/eval.hpp"
#include "mlkit/hedge.hpp"
#include "mlkit/svm.hpp"
#include "mlkit/tabular.hpp"
#include "mlkit/text.hpp"
#include "mlkit/transduce.hpp"

namespace mlkit::cli {

namespace {

const CLI::Validator kOpenUnit(
    [](std::string& s) {
      auto v = mlkit::parse_double(s);
      if (!v || !(*v > 0.0 && *v < 1.0)) return std::string("value must be in (0,1)");
      return std::string();
    },
    "FLOAT in (0,1)");

struct KernelFlags {
  std::string kind = "linear";
  int degree = 3;
  double gamma = 1.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--kernel", kind, "kernel: linear, polynomial, or rbf")
        ->check(CLI::IsMember({"linear", "polynomial", "rbf"}));
    cmd->add_option("--degree", degree, "polynomial degree")->check(CLI::Range(1, 1000));
    cmd->add_option("--gamma", gamma, "rbf width")->check(CLI::PositiveNumber);
  }

  svm::KernelSpec spec() const {
    if (kind == "polynomial") return svm::KernelSpec::polynomial(degree);
    if (kind == "rbf") return svm::KernelSpec::rbf(gamma);
    return svm::KernelSpec::linear();
  }
};

bool header_has_column(const std::string& path, const std::string& column) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open file: " + path);
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("empty file: " + path);
  for (const std::string& c : split(std::string(trim(header)), ','))
    if (c == column) return true;
  return false;
}

// Loads path with the label column when present, unlabeled otherwise.
Dataset load_examples(const std::string& path, const std::string& label, CsvMode mode) {
  if (!label.empty() && header_has_column(path, label)) return load_csv(path, label, mode);
  return load_csv_unlabeled(path, mode);
}

// Maps a two-class dataset onto +1/-1 labels. An explicit positive class wins;
// otherwise already-signed labels pass through and the lexicographically first
// class becomes +1.
Dataset to_signed(const Dataset& ds, const std::string& positive) {
  if (!positive.empty()) return relabel_binary(ds, positive);
  bool already = !ds.class_set.empty();
  for (const std::string& c : ds.class_set)
    if (c != "+1" && c != "1" && c != "-1") already = false;
  if (already) return ds;
  if (ds.class_set.empty()) throw std::runtime_error("no labeled examples");
  return relabel_binary(ds, ds.class_set[0]);
}

bbn::Evidence parse_evidence(const std::string& arg) {
  bbn::Evidence ev;
  if (trim(arg).empty()) return ev;
  for (const std::string& item : split(arg, ',')) {
    std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
      throw std::runtime_error("bad evidence token: " + item);
    std::string name(trim(item.substr(0, eq)));
    std::string state(trim(item.substr(eq + 1)));
    if (ev.count(name)) throw std::runtime_error("duplicate evidence for node " + name);
    ev[name] = state;
  }
  return ev;
}

// Reads just the label column of a CSV, skipping attribute parsing.
std::vector<std::string> read_label_column(const std::string& path, const std::string& label) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open file: " + path);
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty file: " + path);
  std::vector<std::string> header = split(std::string(trim(line)), ',');
  std::size_t idx = header.size();
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == label) idx = i;
  if (idx == header.size()) throw std::runtime_error("label column not found: " + label);
  std::vector<std::string> out;
  std::size_t row = 0;
  while (std::getline(is, line)) {
    std::string trimmed(trim(line));
    if (trimmed.empty()) continue;
    ++row;
    std::vector<std::string> cells = split(trimmed, ',');
    if (cells.size() != header.size())
      throw std::runtime_error("ragged row " + std::to_string(row) + ": expected " +
                               std::to_string(header.size()) + " fields, got " +
                               std::to_string(cells.size()));
    out.push_back(cells[idx]);
  }
  return out;
}

struct SvmTrainArgs {
  std::string data, label, out_path, positive;
  KernelFlags kernel;
  double box_c = svm::kDefaultBoxC;
  double tol = svm::kDefaultTol;
  double holdout = 0.0;
  std::uint64_t seed = 0;
  bool binary = false;
};

void run_svm_train(const SvmTrainArgs& a, std::ostream& out) {
  Dataset ds = load_csv(a.data, a.label, a.binary ? CsvMode::binary : CsvMode::numeric);
  Dataset all = to_signed(ds, a.positive);
  Dataset train = all, held;
  bool with_holdout = a.holdout > 0.0;
  if (with_holdout) {
    auto parts = mlkit::split(all, 1.0 - a.holdout, a.seed);
    train = std::move(parts.first);
    held = std::move(parts.second);
  }
  svm::SvmModel m = svm::train(train, a.kernel.spec(), a.box_c, a.tol);
  svm::save_model(m, a.out_path);
  out << "examples: " << train.size() << '\n';
  out << "kernel: " << m.kernel.describe() << '\n';
  out << "box_c: " << fmt_double(m.box_c) << '\n';
  out << "iterations: " << m.iterations << '\n';
  out << "sv_count: " << m.support_vector_indices().size() << '\n';
  out << "loo_bound: " << fmt_fixed(svm::loo_bound(m), 6) << '\n';
  out << "bias: " << fmt_fixed(m.bias, 6) << '\n';
  out << "model: " << a.out_path << '\n';
  if (with_holdout) {
    std::vector<std::string> preds, truth;
    for (const Example& e : held.examples) {
      preds.push_back(svm::predict(m, e.features) > 0 ? "+1" : "-1");
      truth.push_back(e.label);
    }
    EvalReport r = evaluate(preds, truth);
    out << "holdout: " << held.size() << '\n';
    out << "holdout accuracy: " << fmt_fixed(r.accuracy_percent, 1) << "%\n";
  }
}

struct SvmPredictArgs {
  std::string model, data, label;
  bool binary = false;
};

void run_svm_predict(const SvmPredictArgs& a, std::ostream& out) {
  svm::SvmModel m = svm::load_model(a.model);
  Dataset ds = load_examples(a.data, a.label, a.binary ? CsvMode::binary : CsvMode::numeric);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    double dv = svm::decision_value(m, ds.examples[i].features);
    out << i << '\t' << (dv >= 0.0 ? "+1" : "-1") << '\t' << fmt_fixed(dv, 6) << '\n';
  }
}

struct TransduceArgs {
  std::string train, test, label, positive;
  KernelFlags kernel;
  double box_c = svm::kDefaultBoxC;
  bool binary = false;
};

void run_transduce(const TransduceArgs& a, std::ostream& out) {
  CsvMode mode = a.binary ? CsvMode::binary : CsvMode::numeric;
  Dataset train = to_signed(load_csv(a.train, a.label, mode), a.positive);
  Dataset test = load_examples(a.test, a.label, mode);
  std::vector<transduce::TransductiveVerdict> verdicts =
      transduce::batch_transduce(train, test, a.kernel.spec(), a.box_c);
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    const auto& v = verdicts[i];
    out << i << '\t' << transduce::to_string(v.label) << '\t';
    if (v.confidence) out << fmt_fixed(*v.confidence, 6);
    out << '\t' << v.sv_count_black << '\t' << v.sv_count_white << '\t' << (v.fallback ? 1 : 0)
        << '\n';
  }
}

struct GtLearnArgs {
  std::string data, label, out_path;
  std::size_t min_leaf = 1;
  std::size_t max_depth = 0;
  double level = 0.95;
};

void run_gt_learn(const GtLearnArgs& a, std::ostream& out) {
  Dataset ds = load_csv(a.data, a.label, CsvMode::binary);
  std::vector<tabular::RuleSet> rules = tabular::gt_learn_all(ds, a.min_leaf, a.max_depth, a.level);
  tabular::save_rulesets(rules, a.out_path);
  std::size_t leaves = 0;
  for (const auto& rs : rules) leaves += rs.leaves.size();
  out << "examples: " << ds.size() << '\n';
  out << "attributes: " << ds.dim() << '\n';
  out << "classes: " << rules.size() << '\n';
  out << "leaves: " << leaves << '\n';
  out << "rules: " << a.out_path << '\n';
}

struct GtPredictArgs {
  std::string rules, data, label;
};

void run_gt_predict(const GtPredictArgs& a, std::ostream& out) {
  std::vector<tabular::RuleSet> rules = tabular::load_rulesets(a.rules);
  Dataset ds = load_examples(a.data, a.label, CsvMode::binary);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    tabular::GtPrediction p = tabular::gt_predict(rules, ds.examples[i].features);
    out << i << '\t' << p.class_id << '\t' << fmt_fixed(p.p, 6) << '\t'
        << fmt_fixed(p.interval.lo, 6) << '\t' << fmt_fixed(p.interval.hi, 6) << '\t'
        << p.support_n << '\n';
  }
}

struct NbTrainArgs {
  std::string data, label, out_path;
  double smoothing = 1.0;
};

void run_nb_train(const NbTrainArgs& a, std::ostream& out) {
  Dataset ds = load_csv(a.data, a.label, CsvMode::binary);
  tabular::NbModel m = tabular::nb_train(ds, a.smoothing);
  tabular::save_nb(m, a.out_path);
  out << "examples: " << ds.size() << '\n';
  out << "attributes: " << ds.dim() << '\n';
  out << "classes: " << m.classes.size() << '\n';
  out << "model: " << a.out_path << '\n';
}

struct NbPredictArgs {
  std::string model, data, label;
};

void run_nb_predict(const NbPredictArgs& a, std::ostream& out) {
  tabular::NbModel m = tabular::load_nb(a.model);
  Dataset ds = load_examples(a.data, a.label, CsvMode::binary);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    std::vector<double> post = tabular::nb_predict(m, ds.examples[i].features);
    std::size_t best = 0;
    for (std::size_t c = 1; c < post.size(); ++c)
      if (post[c] > post[best]) best = c;
    out << i << '\t' << m.classes[best];
    for (double p : post) out << '\t' << fmt_fixed(p, 6);
    out << '\n';
  }
}

struct BbnQueryArgs {
  std::string net, evidence;
};

void run_bbn_query(const BbnQueryArgs& a, std::ostream& out) {
  bbn::Network net = bbn::load_network(a.net);
  bbn::Evidence ev = parse_evidence(a.evidence);
  bbn::BeliefState initial = bbn::propagate(net, {});
  bbn::BeliefState revised = ev.empty() ? initial : bbn::propagate(net, ev);
  out << "node\tstate\tinitial\trevised\n";
  for (const bbn::Node& n : net.nodes) {
    const std::vector<double>& ini = initial.beliefs.at(n.name);
    const std::vector<double>& rev = revised.beliefs.at(n.name);
    for (std::size_t s = 0; s < n.states.size(); ++s)
      out << n.name << '\t' << n.states[s] << '\t' << fmt_fixed(ini[s], 6) << '\t'
          << fmt_fixed(rev[s], 6) << '\n';
  }
}

void run_bbn_validate(const std::string& path, std::ostream& out) {
  bbn::Network net = bbn::load_network(path);
  std::size_t edges = 0;
  for (const bbn::Node& n : net.nodes)
    if (!n.parent.empty()) ++edges;
  out << "nodes: " << net.nodes.size() << '\n';
  out << "edges: " << edges << '\n';
  out << "ok\n";
}

struct AaRunArgs {
  std::string stream, prior;
  double eta = 1.0;
  std::string loss = "log";
};

void run_aa(const AaRunArgs& a, std::ostream& out) {
  std::ifstream is(a.stream);
  if (!is) throw std::runtime_error("cannot open file: " + a.stream);
  std::vector<hedge::Round> rounds;
  std::string line;
  std::size_t lineno = 0, width = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::string> tok = split_ws(line);
    if (tok.size() < 2)
      throw std::runtime_error("stream row " + std::to_string(lineno) + ": need predictions and an outcome");
    if (width == 0)
      width = tok.size();
    else if (tok.size() != width)
      throw std::runtime_error("ragged stream row " + std::to_string(lineno));
    hedge::Round r;
    for (std::size_t i = 0; i + 1 < tok.size(); ++i) r.predictions.push_back(to_double(tok[i]));
    long long outcome = to_int(tok.back());
    if (outcome != 0 && outcome != 1)
      throw std::runtime_error("stream row " + std::to_string(lineno) + ": outcome must be 0 or 1");
    r.outcome = static_cast<int>(outcome);
    rounds.push_back(std::move(r));
  }
  std::vector<double> prior;
  if (!a.prior.empty())
    for (const std::string& w : split(a.prior, ',')) prior.push_back(to_double(w));
  std::size_t k = prior.empty() ? (rounds.empty() ? 0 : rounds[0].predictions.size()) : prior.size();
  if (k == 0) throw std::runtime_error("empty stream");
  hedge::LossKind kind = a.loss == "zero_one" ? hedge::LossKind::zero_one : hedge::LossKind::log;
  hedge::ExpertPool pool = hedge::init_pool(k, prior, a.eta, kind);
  hedge::Trace trace = hedge::run_stream(pool, rounds);
  for (std::size_t r = 0; r < trace.rounds.size(); ++r) {
    const hedge::RoundRecord& rec = trace.rounds[r];
    out << r << '\t' << fmt_fixed(rec.merged, 6);
    for (double w : rec.weights) out << '\t' << fmt_fixed(w, 8);
    out << '\n';
  }
}

struct EvalArgs {
  std::string pred, truth, label, map;
  std::size_t pred_col = 2;
};

void run_eval(const EvalArgs& a, std::ostream& out) {
  std::ifstream is(a.pred);
  if (!is) throw std::runtime_error("cannot open file: " + a.pred);
  std::vector<std::string> preds;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string trimmed(trim(line));
    if (trimmed.empty()) continue;
    std::vector<std::string> cols = split(trimmed, '\t');
    if (a.pred_col == 0 || a.pred_col > cols.size())
      throw std::runtime_error("prediction row " + std::to_string(lineno) + ": no column " +
                               std::to_string(a.pred_col));
    preds.push_back(cols[a.pred_col - 1]);
  }
  std::vector<std::string> truth = read_label_column(a.truth, a.label);
  if (!a.map.empty()) {
    std::map<std::string, std::string> remap;
    for (const std::string& item : split(a.map, ',')) {
      std::size_t eq = item.find('=');
      if (eq == std::string::npos) throw std::runtime_error("bad map token: " + item);
      remap[item.substr(0, eq)] = item.substr(eq + 1);
    }
    for (std::string& t : truth) {
      auto it = remap.find(t);
      if (it != remap.end()) t = it->second;
    }
  }
  render_report(evaluate(preds, truth), out);
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"machine-learning toolkit"};
  app.name("mlkit");
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  SvmTrainArgs svm_train;
  SvmPredictArgs svm_predict;
  TransduceArgs transduce_args;
  GtLearnArgs gt_learn;
  GtPredictArgs gt_predict;
  NbTrainArgs nb_train;
  NbPredictArgs nb_predict;
  BbnQueryArgs bbn_query;
  std::string bbn_validate_net;
  AaRunArgs aa_run;
  EvalArgs eval_args;

  CLI::App* svm_cmd = app.add_subcommand("svm", "maximal-margin classifiers");
  svm_cmd->require_subcommand(1);
  {
    CLI::App* c = svm_cmd->add_subcommand("train", "train a kernel classifier");
    c->add_option("--data", svm_train.data, "training CSV")->required();
    c->add_option("--label", svm_train.label, "label column")->required();
    c->add_option("--out", svm_train.out_path, "model output path")->required();
    c->add_option("--positive", svm_train.positive, "class mapped to +1");
    svm_train.kernel.attach(c);
    c->add_option("--c", svm_train.box_c, "box constraint")->check(CLI::PositiveNumber);
    c->add_option("--tol", svm_train.tol, "KKT stopping tolerance")->check(CLI::PositiveNumber);
    c->add_option("--holdout", svm_train.holdout, "held-out fraction")->check(kOpenUnit);
    c->add_option("--seed", svm_train.seed, "holdout split seed");
    c->add_flag("--binary", svm_train.binary, "attribute cells are Y/N/1/0");
    c->callback([&] { run_svm_train(svm_train, out); });
  }
  {
    CLI::App* c = svm_cmd->add_subcommand("predict", "classify rows with a trained model");
    c->add_option("--model", svm_predict.model, "model path")->required();
    c->add_option("--data", svm_predict.data, "CSV to classify")->required();
    c->add_option("--label", svm_predict.label, "label column to ignore if present");
    c->add_flag("--binary", svm_predict.binary, "attribute cells are Y/N/1/0");
    c->callback([&] { run_svm_predict(svm_predict, out); });
  }
  {
    CLI::App* c = app.add_subcommand("transduce", "label queries with confidence by double retraining");
    c->add_option("--train", transduce_args.train, "training CSV")->required();
    c->add_option("--test", transduce_args.test, "query CSV")->required();
    c->add_option("--label", transduce_args.label, "label column")->required();
    c->add_option("--positive", transduce_args.positive, "class mapped to +1 (BLACK)");
    transduce_args.kernel.attach(c);
    c->add_option("--c", transduce_args.box_c, "box constraint")->check(CLI::PositiveNumber);
    c->add_flag("--binary", transduce_args.binary, "attribute cells are Y/N/1/0");
    c->callback([&] { run_transduce(transduce_args, out); });
  }

  CLI::App* gt_cmd = app.add_subcommand("gt", "chi-square rule induction");
  gt_cmd->require_subcommand(1);
  {
    CLI::App* c = gt_cmd->add_subcommand("learn", "induce probability rules per class");
    c->add_option("--data", gt_learn.data, "training CSV (binary attributes)")->required();
    c->add_option("--label", gt_learn.label, "label column")->required();
    c->add_option("--out", gt_learn.out_path, "ruleset output path")->required();
    c->add_option("--min-leaf", gt_learn.min_leaf, "stop splitting at this subset size");
    c->add_option("--max-depth", gt_learn.max_depth, "depth cap, 0 = attribute count");
    c->add_option("--level", gt_learn.level, "confidence level")->check(kOpenUnit);
    c->callback([&] { run_gt_learn(gt_learn, out); });
  }
  {
    CLI::App* c = gt_cmd->add_subcommand("predict", "classify rows with induced rules");
    c->add_option("--rules", gt_predict.rules, "ruleset path")->required();
    c->add_option("--data", gt_predict.data, "CSV to classify")->required();
    c->add_option("--label", gt_predict.label, "label column to ignore if present");
    c->callback([&] { run_gt_predict(gt_predict, out); });
  }

  CLI::App* nb_cmd = app.add_subcommand("nb", "simple Bayes");
  nb_cmd->require_subcommand(1);
  {
    CLI::App* c = nb_cmd->add_subcommand("train", "estimate priors and conditionals");
    c->add_option("--data", nb_train.data, "training CSV (binary attributes)")->required();
    c->add_option("--label", nb_train.label, "label column")->required();
    c->add_option("--out", nb_train.out_path, "model output path")->required();
    c->add_option("--smoothing", nb_train.smoothing, "additive smoothing")
        ->check(CLI::NonNegativeNumber);
    c->callback([&] { run_nb_train(nb_train, out); });
  }
  {
    CLI::App* c = nb_cmd->add_subcommand("predict", "posterior per class");
    c->add_option("--model", nb_predict.model, "model path")->required();
    c->add_option("--data", nb_predict.data, "CSV to classify")->required();
    c->add_option("--label", nb_predict.label, "label column to ignore if present");
    c->callback([&] { run_nb_predict(nb_predict, out); });
  }

  CLI::App* bbn_cmd = app.add_subcommand("bbn", "tree-structured belief networks");
  bbn_cmd->require_subcommand(1);
  {
    CLI::App* c = bbn_cmd->add_subcommand("query", "initial and revised beliefs");
    c->add_option("--net", bbn_query.net, "network file")->required();
    c->add_option("--evidence", bbn_query.evidence, "comma-separated NODE=state pairs");
    c->callback([&] { run_bbn_query(bbn_query, out); });
  }
  {
    CLI::App* c = bbn_cmd->add_subcommand("validate", "parse and check a network file");
    c->add_option("--net", bbn_validate_net, "network file")->required();
    c->callback([&] { run_bbn_validate(bbn_validate_net, out); });
  }

  CLI::App* aa_cmd = app.add_subcommand("aa", "aggregating algorithm");
  aa_cmd->require_subcommand(1);
  {
    CLI::App* c = aa_cmd->add_subcommand("run", "merge expert predictions over a stream");
    c->add_option("--stream", aa_run.stream, "TSV: prediction columns then outcome")->required();
    c->add_option("--eta", aa_run.eta, "learning rate")->check(CLI::PositiveNumber);
    c->add_option("--loss", aa_run.loss, "loss kind")->check(CLI::IsMember({"log", "zero_one"}));
    c->add_option("--prior", aa_run.prior, "comma-separated prior weights");
    c->callback([&] { run_aa(aa_run, out); });
  }
  {
    CLI::App* c = app.add_subcommand("eval", "accuracy report from predictions and truth");
    c->add_option("--pred", eval_args.pred, "TSV of predictions")->required();
    c->add_option("--pred-col", eval_args.pred_col, "1-based label column in --pred");
    c->add_option("--truth", eval_args.truth, "labeled CSV with the true classes")->required();
    c->add_option("--label", eval_args.label, "label column in --truth")->required();
    c->add_option("--map", eval_args.map, "truth relabeling, FROM=TO pairs");
    c->callback([&] { run_eval(eval_args, out); });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace mlkit::cli
