// Copyright 2026 The setproto Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <atomic>
#include <csignal>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "setproto/data/cooccurrence.hpp"
#include "setproto/data/frequent_sets.hpp"
#include "setproto/data/posting.hpp"
#include "setproto/data/split.hpp"
#include "setproto/data/synthetic.hpp"
#include "setproto/error.hpp"
#include "setproto/explain/cohesion.hpp"
#include "setproto/explain/context_curves.hpp"
#include "setproto/explain/explanation.hpp"
#include "setproto/explain/metrics.hpp"
#include "setproto/explain/prototypes.hpp"
#include "setproto/interface/checkpoint.hpp"
#include "setproto/interface/service.hpp"
#include "setproto/training/config.hpp"
#include "setproto/training/fit.hpp"

namespace setproto::cli {
namespace {

std::atomic<HttpServer*> g_server{nullptr};

extern "C" void handle_signal(int) {
  if (HttpServer* s = g_server.load()) s->stop();
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << text;
  if (!f) throw Error("write failed for " + path);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

struct GenDataArgs {
  std::string out;
  std::string spec_out;
  int n_skills = 60;
  int groups = 4;
  int min_size = 3;
  int max_size = 5;
  double beta_lo = 3.0;
  double beta_hi = 8.0;
  double noise = 0.5;
  int samples = 5000;
  std::uint64_t seed = 0;
};

int run_gen_data(const GenDataArgs& a, std::ostream& out) {
  const SyntheticSpec spec = make_planted_spec(a.n_skills, a.groups, a.min_size, a.max_size, a.beta_lo,
                                               a.beta_hi, a.noise, a.samples, a.seed);
  const std::vector<RawPosting> postings = generate_synthetic(spec);
  write_postings_file(a.out, postings);
  if (!a.spec_out.empty()) write_text(a.spec_out, spec_to_json(spec).dump(2) + "\n", out);
  spdlog::info("wrote {} postings to {}", postings.size(), a.out);
  return 0;
}

struct Dataset {
  SkillVocabulary vocab;
  std::vector<EncodedSample> samples;
};

Dataset load_dataset(const std::string& path, bool require_salary) {
  const std::vector<RawPosting> raw = read_postings_file(path);
  Dataset d;
  d.vocab = build_vocabulary(raw);
  EncodeOptions opt;
  opt.require_salary = require_salary;
  d.samples = encode_postings(raw, d.vocab, opt);
  return d;
}

struct MineArgs {
  std::string data;
  std::string out;
  double min_support = 0.05;
  std::size_t max_size = 0;
};

int run_mine(const MineArgs& a, std::ostream& out) {
  const Dataset d = load_dataset(a.data, false);
  const FrequentSetPool pool = mine_frequent_sets(std::span<const EncodedSample>(d.samples),
                                                  a.min_support, a.max_size);
  write_text(a.out, pool_to_json(pool, &d.vocab).dump(2) + "\n", out);
  spdlog::info("mined {} frequent sets", pool.size());
  return 0;
}

struct GraphArgs {
  std::string data;
  std::string out;
};

int run_build_graph(const GraphArgs& a, std::ostream& out) {
  const Dataset d = load_dataset(a.data, false);
  const CooccurrenceGraph g = build_cooccurrence_graph(d.samples, d.vocab.n_skills());
  write_text(a.out, graph_to_json(g, &d.vocab).dump(2) + "\n", out);
  spdlog::info("graph has {} edges", g.n_edges());
  return 0;
}

struct TrainArgs {
  std::string data;
  std::string config;
  std::string out;
  std::string variant;
  double min_support = 0.05;
  std::size_t max_set_size = 0;
  std::uint64_t split_seed = 0;
};

int run_train(const TrainArgs& a, std::ostream& out) {
  TrainConfig cfg = a.config.empty() ? TrainConfig{} : load_train_config(a.config);
  if (!a.variant.empty()) cfg = make_ablation(cfg, parse_variant(a.variant));
  cfg.validate();
  const Dataset d = load_dataset(a.data, true);
  const DatasetSplit split = split_dataset(d.samples, SplitRatios{}, a.split_seed);
  const FrequentSetPool pool = mine_frequent_sets(std::span<const EncodedSample>(split.train),
                                                  a.min_support, a.max_set_size);
  const CooccurrenceGraph graph = build_cooccurrence_graph(split.train, d.vocab.n_skills());
  spdlog::info("{} train / {} val / {} test samples, {} frequent sets", split.train.size(),
               split.val.size(), split.test.size(), pool.size());
  FitResult r = fit(make_model_config(d.vocab, cfg), split.train, split.val, pool, graph, cfg);
  if (!split.test.empty()) r.report.test = evaluate(r.model, split.test);
  const nlohmann::json training = {{"config", to_json(cfg)},
                                   {"min_support", a.min_support},
                                   {"max_set_size", a.max_set_size},
                                   {"split_seed", a.split_seed}};
  save_checkpoint(a.out, r.model, d.vocab, training);
  const nlohmann::json report = to_json(r.report);
  write_text((std::filesystem::path(a.out) / "train_report.json").string(), report.dump(2) + "\n", out);
  nlohmann::json summary = {{"checkpoint", a.out}, {"selected_epoch", r.report.selected_epoch}};
  if (r.report.val) summary["val"] = to_json(*r.report.val);
  if (r.report.test) summary["test"] = to_json(*r.report.test);
  out << summary.dump(2) << "\n";
  return 0;
}

struct EvalArgs {
  std::string data;
  std::string ckpt;
  bool cohesion = false;
  bool allow_unknown_context = false;
  int resamples = 100;
  std::uint64_t seed = 0;
};

int run_eval(const EvalArgs& a, std::ostream& out) {
  const Checkpoint ck = load_checkpoint(a.ckpt);
  EncodeOptions opt;
  opt.allow_unknown_context = a.allow_unknown_context;
  const std::vector<RawPosting> raw = read_postings_file(a.data);
  const std::vector<EncodedSample> samples = encode_postings(raw, ck.vocab, opt);
  nlohmann::json report = to_json(evaluate(ck.model, samples));
  if (a.cohesion) {
    const CooccurrenceGraph g = build_cooccurrence_graph(samples, ck.vocab.n_skills());
    report["cohesion"] = to_json(cohesion_report(ck.model, samples, g, a.resamples, a.seed));
  }
  out << report.dump(2) << "\n";
  return 0;
}

struct ExplainArgs {
  std::string ckpt;
  std::string skills;
  std::string levels;
  std::string context;
};

int run_explain(const ExplainArgs& a, std::ostream& out) {
  const Checkpoint ck = load_checkpoint(a.ckpt);
  RawPosting p;
  const std::vector<std::string> names = split_list(a.skills);
  const std::vector<std::string> levels = split_list(a.levels);
  if (!levels.empty() && levels.size() != names.size())
    throw Error("--levels must list one level per skill");
  for (std::size_t i = 0; i < names.size(); ++i) {
    RawSkill s{names[i], std::nullopt};
    if (!levels.empty() && levels[i] != "-") s.level = levels[i];
    p.skills.push_back(std::move(s));
  }
  if (!a.context.empty()) {
    nlohmann::json ctx;
    try {
      ctx = nlohmann::json::parse(a.context);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(std::string("--context is not valid JSON: ") + e.what());
    }
    p.context = parse_posting({{"skills", nlohmann::json::array()}, {"context", ctx}}).context;
  }
  EncodeOptions opt;
  opt.require_salary = false;
  const EncodedSample s = encode_posting(p, ck.vocab, opt);
  out << to_json(explain(ck.model, s.input), ck.vocab).dump(2) << "\n";
  return 0;
}

struct ExportArgs {
  std::string ckpt;
  std::string out;
};

int run_export(const ExportArgs& a, std::ostream& out) {
  const Checkpoint ck = load_checkpoint(a.ckpt);
  if (!ck.model.config.uses_prototypes()) throw Error("checkpoint has no prototypes");
  write_text(a.out, export_prototypes(ck.model, ck.vocab).dump(2) + "\n", out);
  return 0;
}

struct ServeArgs {
  std::string ckpt;
  std::string host = "127.0.0.1";
  std::optional<int> port;
};

int run_serve(const ServeArgs& a) {
  const int port = resolve_port(a.port);
  InferenceService service(load_checkpoint(a.ckpt));
  HttpServer server(service);
  const int bound = server.bind(a.host, port);
  g_server.store(&server);
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  spdlog::info("serving {} on http://{}:{}", a.ckpt, a.host, bound);
  server.listen();
  g_server.store(nullptr);
  return 0;
}

struct CurvesArgs {
  std::string ckpt;
  std::string field;
  std::string out;
  int points = 11;
};

int run_context_curves(const CurvesArgs& a, std::ostream& out) {
  const Checkpoint ck = load_checkpoint(a.ckpt);
  const auto points = context_curves(ck.model, ck.vocab, a.field, a.points);
  std::ostringstream csv;
  write_context_curves_csv(csv, a.field, points);
  write_text(a.out, csv.str(), out);
  return 0;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Self-explainable salary regression over skill sets", "setproto"};
  app.require_subcommand(1);
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off")
      ->capture_default_str();

  GenDataArgs gen;
  auto* c_gen = app.add_subcommand("gen-data", "Generate a synthetic dataset with planted skill groups");
  c_gen->add_option("--out", gen.out, "Output JSONL file")->required();
  c_gen->add_option("--spec-out", gen.spec_out, "Also write the planted groups as JSON");
  c_gen->add_option("--n-skills", gen.n_skills)->capture_default_str();
  c_gen->add_option("--groups", gen.groups)->capture_default_str();
  c_gen->add_option("--min-size", gen.min_size)->capture_default_str();
  c_gen->add_option("--max-size", gen.max_size)->capture_default_str();
  c_gen->add_option("--beta-lo", gen.beta_lo)->capture_default_str();
  c_gen->add_option("--beta-hi", gen.beta_hi)->capture_default_str();
  c_gen->add_option("--noise", gen.noise)->capture_default_str();
  c_gen->add_option("--samples", gen.samples)->capture_default_str();
  c_gen->add_option("--seed", gen.seed)->capture_default_str();

  MineArgs mine;
  auto* c_mine = app.add_subcommand("mine", "Mine frequent skill sets");
  c_mine->add_option("--data", mine.data, "Postings JSONL")->required();
  c_mine->add_option("--min-support", mine.min_support)->capture_default_str();
  c_mine->add_option("--max-size", mine.max_size, "Largest set size, 0 for no limit")->capture_default_str();
  c_mine->add_option("--out", mine.out, "Output JSON file (default: stdout)");

  GraphArgs graph;
  auto* c_graph = app.add_subcommand("build-graph", "Build the skill co-occurrence graph");
  c_graph->add_option("--data", graph.data, "Postings JSONL")->required();
  c_graph->add_option("--out", graph.out, "Output JSON file (default: stdout)");

  TrainArgs train;
  auto* c_train = app.add_subcommand("train", "Train a model and write a checkpoint");
  c_train->add_option("--data", train.data, "Postings JSONL with salaries")->required();
  c_train->add_option("--config", train.config, "Training configuration JSON");
  c_train->add_option("--out", train.out, "Checkpoint directory")->required();
  c_train->add_option("--variant", train.variant, "full, wo_prot, wo_sub or wo_rel");
  c_train->add_option("--min-support", train.min_support)->capture_default_str();
  c_train->add_option("--max-set-size", train.max_set_size)->capture_default_str();
  c_train->add_option("--split-seed", train.split_seed)->capture_default_str();

  EvalArgs eval;
  auto* c_eval = app.add_subcommand("eval", "Report RMSE and MAE of a checkpoint on a dataset");
  c_eval->add_option("--data", eval.data, "Postings JSONL with salaries")->required();
  c_eval->add_option("--ckpt", eval.ckpt, "Checkpoint directory")->required();
  c_eval->add_flag("--cohesion", eval.cohesion, "Also report subset cohesion against a random baseline");
  c_eval->add_option("--resamples", eval.resamples)->capture_default_str();
  c_eval->add_option("--seed", eval.seed)->capture_default_str();
  c_eval->add_flag("--allow-unknown-context", eval.allow_unknown_context,
                   "Treat unseen context categories as missing");

  ExplainArgs ex;
  auto* c_ex = app.add_subcommand("explain", "Explain one prediction");
  c_ex->add_option("--ckpt", ex.ckpt, "Checkpoint directory")->required();
  c_ex->add_option("--skills", ex.skills, "Comma-separated skill names")->required();
  c_ex->add_option("--levels", ex.levels, "Comma-separated levels aligned with --skills, '-' for none");
  c_ex->add_option("--context", ex.context, "Context record as a JSON object");

  ExportArgs exp;
  auto* c_exp = app.add_subcommand("export-prototypes", "Write the learned prototypes as JSON");
  c_exp->add_option("--ckpt", exp.ckpt, "Checkpoint directory")->required();
  c_exp->add_option("--out", exp.out, "Output JSON file (default: stdout)");

  ServeArgs serve;
  auto* c_serve = app.add_subcommand("serve", "Run the HTTP inference service");
  c_serve->add_option("--ckpt", serve.ckpt, "Checkpoint directory")->required();
  c_serve->add_option("--host", serve.host)->capture_default_str();
  c_serve->add_option("--port", serve.port, "Port (default: $SETPROTO_PORT or 8080)");

  CurvesArgs curves;
  auto* c_curves = app.add_subcommand("context-curves", "Write salary weight versus context value as CSV");
  c_curves->add_option("--ckpt", curves.ckpt, "Checkpoint directory")->required();
  c_curves->add_option("--field", curves.field, "Context field to sweep")->required();
  c_curves->add_option("--points", curves.points, "Grid size for numeric fields")->capture_default_str();
  c_curves->add_option("--out", curves.out, "Output CSV file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return 2;
  }

  try {
    spdlog::set_level(spdlog::level::from_str(log_level));
    if (c_gen->parsed()) return run_gen_data(gen, out);
    if (c_mine->parsed()) return run_mine(mine, out);
    if (c_graph->parsed()) return run_build_graph(graph, out);
    if (c_train->parsed()) return run_train(train, out);
    if (c_eval->parsed()) return run_eval(eval, out);
    if (c_ex->parsed()) return run_explain(ex, out);
    if (c_exp->parsed()) return run_export(exp, out);
    if (c_serve->parsed()) return run_serve(serve);
    if (c_curves->parsed()) return run_context_curves(curves, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << app.help();
  return 2;
}

}  // namespace setproto::cli
