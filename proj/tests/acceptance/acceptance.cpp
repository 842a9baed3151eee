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


// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <unistd.h>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "fixtures.hpp"
#include "setproto/data/cooccurrence.hpp"
#include "setproto/data/frequent_sets.hpp"
#include "setproto/data/posting.hpp"
#include "setproto/data/split.hpp"
#include "setproto/data/synthetic.hpp"
#include "setproto/error.hpp"
#include "setproto/explain/cohesion.hpp"
#include "setproto/explain/explanation.hpp"
#include "setproto/interface/checkpoint.hpp"
#include "setproto/interface/service.hpp"
#include "setproto/model/functional.hpp"
#include "setproto/model/predict.hpp"
#include "setproto/training/config.hpp"
#include "setproto/training/fit.hpp"
#include "setproto/training/projection.hpp"

// After Eigen: <resolv.h> defines a `_res` macro.
#include <httplib.h>

namespace setproto {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Independent of the library's implementation.
double reference_similarity(double sq_distance, double eps) {
  return std::log((sq_distance + 1.0) / (sq_distance + eps));
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// ---------------------------------------------------------------------------
// 1. Permutation invariance

Outcome permutation_invariance() {
  const auto t0 = Clock::now();
  auto vocab = testing::small_vocab(40);
  auto cfg = testing::small_config(vocab, 16, 4, 8, 64);
  Model m = testing::random_model(cfg, 101);
  std::mt19937_64 rng(102);
  // Discrete prototypes so the bank path is exercised as well.
  std::vector<SkillSetInput> seeds;
  for (int i = 0; i < 30; ++i) seeds.push_back(testing::random_input(cfg, rng, 2, 10));
  project_prototypes(m, std::span<const SkillSetInput>(seeds));
  std::normal_distribution<double> nd(0.0, 0.05);
  for (int k = 0; k < cfg.n_prototypes; ++k)
    for (int s : m.bank.support(k)) m.bank.delta(k, s) = nd(rng);

  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const SkillSetInput x = testing::random_input(cfg, rng, 1, 20);
    const double y = predict(m, x);
    for (int p = 0; p < 5; ++p) {
      std::vector<std::size_t> order(x.skills.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::shuffle(order.begin(), order.end(), rng);
      SkillSetInput px = x;
      for (std::size_t j = 0; j < order.size(); ++j) {
        px.skills[j] = x.skills[order[j]];
        px.levels[j] = x.levels[order[j]];
      }
      worst = std::max(worst, std::abs(y - predict(m, px)) / (1.0 + std::abs(y)));
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-5 && secs < 30.0,
          fmt::format("max |dy|/(1+|y|) = {:.3g} (limit 1e-5), {:.1f} s (limit 30 s)", worst, secs)};
}

// ---------------------------------------------------------------------------
// 2. Gradient oracle

Outcome gradient_oracle() {
  const auto t0 = Clock::now();
  auto vocab = testing::small_vocab(12);
  auto cfg = testing::small_config(vocab, 8, 2, 4);
  Model m = testing::random_model(cfg, 201);
  auto samples = testing::random_samples(cfg, 4, 202, 3, 8);
  auto graph = build_cooccurrence_graph(testing::random_samples(cfg, 60, 203, 2, 6), cfg.n_skills);
  testing::ModelGradCase c;
  for (const auto& s : samples) {
    c.batch.push_back(s.input);
    c.targets.push_back(s.salary);
  }
  c.graph = &graph;

  // Refinement state: projected prototypes plus a nonzero delta.
  Model d = m;
  std::mt19937_64 rng(204);
  std::vector<SkillSetInput> pool;
  for (int i = 0; i < 12; ++i) pool.push_back(testing::random_input(cfg, rng, 2, 6));
  project_prototypes(d, std::span<const SkillSetInput>(pool));
  std::normal_distribution<double> nd(0.0, 0.1);
  for (Eigen::Index i = 0; i < d.bank.delta.size(); ++i) d.bank.delta.data()[i] = nd(rng);

  using testing::LossTerm;
  const std::pair<LossTerm, const char*> terms[] = {{LossTerm::kPred, "pred"},
                                                    {LossTerm::kCon, "con"},
                                                    {LossTerm::kRep, "rep"},
                                                    {LossTerm::kDiv, "div"},
                                                    {LossTerm::kTotal, "total"}};
  double worst = 0.0;
  std::string where;
  std::size_t checked = 0;
  for (const bool discrete : {false, true}) {
    c.scope = GradientScope{true, !discrete, discrete};
    for (const auto& [term, name] : terms) {
      const auto r = testing::check_model_gradients(discrete ? d : m, c, term);
      checked += r.checked;
      if (r.checked == 0) return {false, fmt::format("no gradients checked for {}", name)};
      if (r.max_rel_error >= worst) {
        worst = r.max_rel_error;
        where = fmt::format("{}{} at {}", name, discrete ? " (discrete)" : "", r.where);
      }
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-3 && secs < 120.0,
          fmt::format("max rel error {:.3g} (limit 1e-3, worst {}) over {} entries, {:.1f} s (limit 120 s)",
                      worst, where, checked, secs)};
}

// ---------------------------------------------------------------------------
// 3. Gumbel-Sigmoid statistics

Outcome gumbel_statistics() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(301);
  const Matrix soft = gumbel_sigmoid(Matrix::Zero(100, 100), 1.0, &rng);
  const double mean = soft.mean();

  // Scores at the boundary |s| = 1, both signs.
  Matrix scores(100, 100);
  for (Eigen::Index i = 0; i < scores.size(); ++i) scores.data()[i] = i % 2 ? 1.0 : -1.0;
  const Matrix sharp = gumbel_sigmoid(scores, 0.05, &rng);
  const double outside =
      static_cast<double>((sharp.array() <= 0.01 || sharp.array() >= 0.99).count()) /
      static_cast<double>(sharp.size());
  // The noise difference is standard logistic, so this is exact.
  const double edge = 0.05 * std::log(0.99 / 0.01);
  auto inside = [edge](double score) { return logistic(edge - score) - logistic(-edge - score); };
  const double analytic = 1.0 - inside(1.0);
  // Smallest |s| at which 99% outside is reachable, by bisection.
  double lo = 1.0, hi = 20.0;
  for (int i = 0; i < 60; ++i) (inside(0.5 * (lo + hi)) > 0.01 ? lo : hi) = 0.5 * (lo + hi);
  const double secs = seconds_since(t0);
  return {std::abs(mean - 0.5) <= 0.05 && outside >= 0.99 && secs < 10.0,
          fmt::format("mean at s=0, tau=1: {:.4f} (0.5 +/- 0.05); outside (0.01, 0.99) at |s|=1, tau=0.05: "
                      "{:.4f} (need >= 0.99; logistic-noise expectation {:.4f}, 0.99 first reached at "
                      "|s| = {:.2f}), {:.2f} s",
                      mean, outside, analytic, hi, secs)};
}

// ---------------------------------------------------------------------------
// 4. Similarity law

Outcome similarity_law() {
  const double eps = 1e-4;
  const double at_zero = similarity_from_sq_distance(0.0, eps);
  const double zero_err = std::abs(at_zero - std::log(1e4));
  std::mt19937_64 rng(401);
  std::uniform_real_distribution<double> expo(-12.0, 30.0);
  int violations = 0, non_positive = 0;
  double worst_ref = 0.0;
  for (int i = 0; i < 1000; ++i) {
    double a = std::pow(10.0, expo(rng)), b = std::pow(10.0, expo(rng));
    if (a == b) b = std::nextafter(b, 1e300);
    if (a > b) std::swap(a, b);
    const double sa = similarity_from_sq_distance(a, eps), sb = similarity_from_sq_distance(b, eps);
    if (!(sa > sb)) ++violations;
    if (!(sa > 0.0) || !(sb > 0.0)) ++non_positive;
    if (a < 1e3) worst_ref = std::max(worst_ref, std::abs(sa - reference_similarity(a, eps)) / sa);
  }
  return {zero_err <= 1e-9 && violations == 0 && non_positive == 0 && worst_ref <= 1e-12,
          fmt::format("|sim(0) - log 1e4| = {:.3g}; {} monotonicity violations and {} non-positive values "
                      "over 1000 pairs; max rel deviation from log((d+1)/(d+eps)) {:.2g}",
                      zero_err, violations, non_positive, worst_ref)};
}

// ---------------------------------------------------------------------------
// 5. Projection oracle

Outcome projection_oracle() {
  const auto t0 = Clock::now();
  auto vocab = testing::small_vocab(16);
  std::mt19937_64 rng(501);
  int trials = 0, mismatches = 0, ties = 0;
  std::string first_issue;
  for (int trial = 0; trial < 40; ++trial) {
    auto cfg = testing::small_config(vocab, 8, 1 << (trial % 3), 3 + trial % 6, 32);
    Model before = testing::random_model(cfg, 510 + static_cast<std::uint64_t>(trial));
    std::vector<SkillSetInput> inputs;
    const int n_inputs = 1 + trial % 12;
    for (int i = 0; i < n_inputs; ++i) inputs.push_back(testing::random_input(cfg, rng, 2, 8));
    CandidateSet cands = extract_candidates(before, inputs);
    if (cands.items.empty()) continue;
    const Matrix zp = prototype_representations(before);
    const double eps = cfg.epsilon;

    auto brute = [&](const CandidateSet& cs, int k) {
      std::size_t best = 0;
      double best_sim = -1.0;
      for (std::size_t c = 0; c < cs.items.size(); ++c) {
        const double s =
            reference_similarity((cs.z.row(static_cast<Eigen::Index>(c)) - zp.row(k)).squaredNorm(), eps);
        if (s > best_sim) {
          best_sim = s;
          best = c;
        }
      }
      return best;
    };

    // Append exact copies of each current winner so that every argmax is a tie.
    for (int k = 0; k < cfg.n_prototypes && cands.items.size() < 50; ++k) {
      const std::size_t w = brute(cands, k);
      cands.items.push_back(cands.items[w]);
      cands.z.conservativeResize(cands.z.rows() + 1, Eigen::NoChange);
      cands.z.row(cands.z.rows() - 1) = cands.z.row(static_cast<Eigen::Index>(w));
      ++ties;
    }
    if (cands.items.size() > 50) {
      cands.items.resize(50);
      cands.z.conservativeResize(50, Eigen::NoChange);
    }

    Model m = before;
    const ProjectionEvent ev = project_prototypes(m, cands);
    ++trials;
    for (int k = 0; k < cfg.n_prototypes; ++k) {
      const std::size_t expect = brute(cands, k);
      const std::size_t got = ev.chosen[static_cast<std::size_t>(k)];
      bool ok = got == expect && m.bank.support(k) == cands.items[expect].skills;
      for (std::size_t i = 0; ok && i < cands.items[expect].skills.size(); ++i)
        ok = m.bank.importance(k, cands.items[expect].skills[i]) == cands.items[expect].alpha[i];
      if (!ok) {
        ++mismatches;
        if (first_issue.empty())
          first_issue = fmt::format(" (trial {} prototype {}: got {}, expected {})", trial, k, got, expect);
      }
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && trials > 0 && secs < 30.0,
          fmt::format("{} pools of <= 50 candidates, {} planted ties, {} mismatches{}, {:.2f} s (limit 30 s)",
                      trials, ties, mismatches, first_issue, secs)};
}

// ---------------------------------------------------------------------------
// 6. Frequent-set oracle

Outcome frequent_set_oracle() {
  std::mt19937_64 rng(601);
  int mismatches = 0;
  std::size_t total_sets = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n_items = std::uniform_int_distribution<int>(2, 12)(rng);
    const int n_tx = std::uniform_int_distribution<int>(1, 60)(rng);
    std::bernoulli_distribution coin(std::uniform_real_distribution<double>(0.2, 0.8)(rng));
    double min_support = std::uniform_real_distribution<double>(0.01, 1.0)(rng);
    if (trial == 0) min_support = 1.0;
    if (trial == 1) min_support = 1.0 / n_tx;
    std::vector<std::vector<int>> tx(static_cast<std::size_t>(n_tx));
    for (auto& t : tx)
      for (int i = 0; i < n_items; ++i)
        if (coin(rng)) t.push_back(i);

    std::map<std::vector<int>, std::size_t> expect;
    for (std::uint32_t mask = 0; mask < (1u << n_items); ++mask) {
      std::vector<int> items;
      for (int i = 0; i < n_items; ++i)
        if (mask >> i & 1u) items.push_back(i);
      if (items.size() < 2) continue;
      std::size_t count = 0;
      for (const auto& t : tx) count += std::includes(t.begin(), t.end(), items.begin(), items.end());
      if (static_cast<double>(count) >= min_support * n_tx - 1e-12) expect[items] = count;
    }
    std::map<std::vector<int>, std::size_t> got;
    const FrequentSetPool pool = mine_frequent_sets(tx, min_support);
    for (const auto& s : pool.sets) got[s.items] = s.count;
    if (got != expect || got.size() != pool.sets.size()) ++mismatches;
    total_sets += expect.size();
  }
  return {mismatches == 0,
          fmt::format("20 datasets with N <= 12, {} frequent sets in total, {} mismatching datasets", total_sets,
                      mismatches)};
}

// ---------------------------------------------------------------------------
// Shared synthetic experiment for criteria 7 to 11.

struct Experiment {
  SyntheticSpec spec;
  SkillVocabulary vocab;
  std::vector<EncodedSample> all;
  DatasetSplit split;
  FrequentSetPool pool;
  CooccurrenceGraph graph;
};

Experiment make_experiment() {
  Experiment e;
  e.spec = make_planted_spec(60, 4, 3, 5, 3.0, 8.0, 0.5, 5000, 7);
  const auto raw = generate_synthetic(e.spec);
  e.vocab = build_vocabulary(raw);
  e.all = encode_postings(raw, e.vocab);
  e.split = split_dataset(e.all, SplitRatios{}, 7);
  e.pool = mine_frequent_sets(std::span<const EncodedSample>(e.split.train), 0.1);
  e.graph = build_cooccurrence_graph(e.split.train, e.vocab.n_skills());
  return e;
}

TrainConfig experiment_config(std::uint64_t seed, Variant variant) {
  TrainConfig c;
  c.total_epochs = 60;
  c.n_prototypes = 8;
  c.n_views = 4;
  c.embed_dim = 32;
  c.learning_rate = 3e-3;
  c.batch_size = 32;
  c.seed = seed;
  return make_ablation(c, variant);
}

FitResult train(const Experiment& e, std::uint64_t seed, Variant variant) {
  const TrainConfig c = experiment_config(seed, variant);
  return fit(make_model_config(e.vocab, c), e.split.train, e.split.val, e.pool, e.graph, c);
}

// 7. Synthetic recovery

Outcome synthetic_recovery(const Experiment& e, const FitResult& r, double train_secs) {
  const double rmse = r.report.val->rmse;
  const double limit = 1.5 * e.spec.noise;
  std::vector<std::string> jaccards;
  bool all_matched = true;
  for (const auto& group : e.spec.groups) {
    std::set<int> g;
    for (int s : group) g.insert(e.vocab.skill_id(synthetic_skill_name(s, e.spec.n_skills)));
    double best = 0.0;
    for (int k = 0; k < r.model.config.n_prototypes; ++k) {
      const auto sup = r.model.bank.support(k);
      std::size_t inter = 0;
      for (int s : sup) inter += g.count(s);
      const double uni = static_cast<double>(sup.size() + g.size() - inter);
      best = std::max(best, uni > 0 ? static_cast<double>(inter) / uni : 0.0);
    }
    all_matched = all_matched && best >= 0.5;
    jaccards.push_back(fmt::format("{:.2f}", best));
  }
  const CohesionReport scs = cohesion_report(r.model, e.split.val, e.graph, 100, 7);
  return {rmse <= limit && all_matched && scs.model_mean >= scs.random_mean && train_secs <= 600.0,
          fmt::format("(a) val RMSE {:.3f} (limit {:.2f}); (b) best Jaccard per group [{}] (need >= 0.5); "
                      "(c) SCS model {:.4f} vs random {:.4f}; training {:.0f} s (limit 600 s)",
                      rmse, limit, fmt::join(jaccards, ", "), scs.model_mean, scs.random_mean, train_secs)};
}

// 8. Ablation direction

Outcome ablation_direction(const Experiment& e, const FitResult& full_seed1) {
  int wins = 0;
  std::vector<std::string> rows;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const double full = seed == 1 ? full_seed1.report.val->rmse : train(e, seed, Variant::kFull).report.val->rmse;
    const double wo = train(e, seed, Variant::kWithoutSubsets).report.val->rmse;
    wins += full <= wo;
    rows.push_back(fmt::format("seed {}: {:.3f} vs {:.3f}", seed, full, wo));
  }
  return {wins >= 4, fmt::format("full <= wo_sub val RMSE in {}/5 seeds (need >= 4): {}", wins,
                                 fmt::join(rows, "; "))};
}

// 9. Explanation additivity

Outcome explanation_additivity(const Experiment& e, const Model& m) {
  double worst = 0.0;
  int bound_violations = 0;
  const std::size_t n = std::min<std::size_t>(1000, e.all.size());
  for (std::size_t i = 0; i < n; ++i) {
    const Explanation ex = explain(m, e.all[i].input);
    const double y = predict(m, e.all[i].input);
    double sum = 0.0, lo = INFINITY, hi = -INFINITY;
    for (const auto& match : ex.matches) {
      sum += match.contribution;
      lo = std::min(lo, match.salary_weight);
      hi = std::max(hi, match.salary_weight);
    }
    worst = std::max({worst, std::abs(sum - y), std::abs(ex.salary - y)});
    if (ex.matches.empty() || y < lo - 1e-12 || y > hi + 1e-12) ++bound_violations;
  }
  return {n == 1000 && worst <= 1e-6 && bound_violations == 0,
          fmt::format("{} samples: max |sum(contributions) - y| = {:.3g} (limit 1e-6); {} convex-bound "
                      "violations",
                      n, worst, bound_violations)};
}

// 10. Checkpoint round-trip

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Outcome checkpoint_round_trip(const Experiment& e, const Model& m, const fs::path& dir) {
  save_checkpoint(dir / "a", m, e.vocab);
  const Checkpoint ck = load_checkpoint(dir / "a");
  save_checkpoint(dir / "b", ck.model, ck.vocab);
  double worst = 0.0;
  for (std::size_t i = 0; i < 100; ++i)
    worst = std::max(worst, std::abs(predict(m, e.all[i].input) - predict(ck.model, e.all[i].input)));
  const std::string a = slurp(dir / "a" / "tensors.bin");
  const bool same_bytes = !a.empty() && a == slurp(dir / "b" / "tensors.bin");
  const bool same_index = json::parse(slurp(dir / "a" / "manifest.json"))["tensors"] ==
                          json::parse(slurp(dir / "b" / "manifest.json"))["tensors"];
  return {worst <= 1e-7 && same_bytes && same_index,
          fmt::format("100 samples: max |dy| = {:.3g} (limit 1e-7); tensors.bin ({} bytes) {} after reload",
                      worst, a.size(), same_bytes && same_index ? "identical" : "DIFFERS")};
}

// 11. Service conformance

Outcome service_conformance(const Experiment& e, const fs::path& ckpt_dir) {
  InferenceService service(load_checkpoint(ckpt_dir));
  HttpServer server(service);
  const int port = server.bind("127.0.0.1", 0);
  std::thread thread([&] { server.listen(); });
  server.wait_until_ready();
  struct Stop {
    HttpServer& s;
    std::thread& t;
    ~Stop() {
      s.stop();
      t.join();
    }
  } stop{server, thread};

  std::vector<std::string> problems;
  auto post = [&](const std::string& body) {
    httplib::Client cli("127.0.0.1", port);
    return cli.Post("/predict", body, "application/json");
  };
  auto request_body = [&](const SkillSetInput& in) {
    json skills = json::array();
    for (std::size_t j = 0; j < in.skills.size(); ++j) {
      json s{{"name", e.vocab.skill_name(in.skills[j])}};
      if (in.levels[j] != kNoLevel) s["level"] = e.vocab.level_name(in.levels[j]);
      skills.push_back(s);
    }
    return json{{"skills", skills}}.dump();
  };

  double worst = 0.0;
  for (std::size_t i = 0; i < 50; ++i) {
    auto r = post(request_body(e.split.test[i].input));
    if (!r || r->status != 200) {
      problems.push_back("predict request failed");
      break;
    }
    worst = std::max(worst, std::abs(json::parse(r->body)["salary"].get<double>() -
                                     predict(service.model(), e.split.test[i].input)));
  }
  if (worst > 1e-6) problems.push_back(fmt::format("salary deviates by {:.3g}", worst));

  const std::string body = request_body(e.split.test[0].input);
  std::vector<std::future<std::string>> futures;
  for (int i = 0; i < 32; ++i)
    futures.push_back(std::async(std::launch::async, [&] {
      auto r = post(body);
      if (!r) return "error: " + httplib::to_string(r.error());
      return r->status == 200 ? r->body : fmt::format("status {}", r->status);
    }));
  std::set<std::string> distinct;
  for (auto& f : futures) distinct.insert(f.get());
  if (distinct.size() != 1 || distinct.begin()->rfind("{", 0) != 0)
    problems.push_back(fmt::format("{} distinct bodies from 32 concurrent requests", distinct.size()));

  auto expect_status = [&](const std::string& what, const std::string& req, int status,
                           const std::string& needle) {
    auto r = post(req);
    if (!r || r->status != status)
      problems.push_back(fmt::format("{}: status {}", what, r ? r->status : -1));
    else if (!json::parse(r->body).contains("error") || r->body.find(needle) == std::string::npos)
      problems.push_back(what + ": error body");
  };
  expect_status("unknown skill", R"({"skills":["skill_that_does_not_exist"]})", 400,
                "skill_that_does_not_exist");
  expect_status("empty set", R"({"skills":[]})", 422, "error");
  expect_status("malformed JSON", R"({"skills":)", 400, "error");
  {
    httplib::Client cli("127.0.0.1", port);
    auto h = cli.Get("/health");
    if (!h || h->status != 200 || json::parse(h->body) != json{{"status", "ok"}})
      problems.push_back("health");
  }
  return {problems.empty(),
          problems.empty()
              ? fmt::format("50 requests within {:.3g} of library predict (limit 1e-6); 32 concurrent "
                            "identical bodies; 400/422/400 error codes and /health ok",
                            worst)
              : fmt::format("{}", fmt::join(problems, "; "))};
}

struct Report {
  std::set<int> only;  // empty: every criterion
  int failures = 0;
  int ran = 0;
  bool wants(int id) const { return only.empty() || only.count(id); }
  void add(int id, const std::string& name, const std::function<Outcome()>& run) {
    if (!wants(id)) return;
    ++ran;
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = run();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    failures += !o.pass;
    std::printf("%s [%2d] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  int finish() const {
    std::printf("%d of %d criteria failed\n", failures, ran);
    return failures == 0 ? 0 : 1;
  }
};

int run(int argc, char** argv) {
  spdlog::set_level(spdlog::level::warn);
  Report rep;
  for (int i = 1; i < argc; ++i) rep.only.insert(std::atoi(argv[i]));
  rep.add(1, "permutation invariance", permutation_invariance);
  rep.add(2, "gradient oracle", gradient_oracle);
  rep.add(3, "Gumbel-Sigmoid statistics", gumbel_statistics);
  rep.add(4, "similarity law", similarity_law);
  rep.add(5, "projection oracle", projection_oracle);
  rep.add(6, "frequent-set oracle", frequent_set_oracle);

  bool later = false;
  for (int id = 7; id <= 11; ++id) later = later || rep.wants(id);
  if (!later) return rep.finish();

  const Experiment e = make_experiment();
  const auto t0 = Clock::now();
  std::optional<FitResult> full;
  std::string train_error;
  try {
    full = train(e, 1, Variant::kFull);
  } catch (const std::exception& ex) {
    train_error = ex.what();
  }
  const double train_secs = seconds_since(t0);
  auto need_model = [&] {
    if (!full) throw Error("training failed: " + train_error);
    return &*full;
  };

  const fs::path dir = fs::temp_directory_path() / fmt::format("setproto_acceptance_{}", ::getpid());
  fs::remove_all(dir);
  fs::create_directories(dir);
  rep.add(7, "synthetic recovery", [&] { return synthetic_recovery(e, *need_model(), train_secs); });
  rep.add(8, "ablation direction", [&] { return ablation_direction(e, *need_model()); });
  rep.add(9, "explanation additivity", [&] { return explanation_additivity(e, need_model()->model); });
  rep.add(10, "checkpoint round-trip", [&] { return checkpoint_round_trip(e, need_model()->model, dir); });
  rep.add(11, "service conformance", [&] { return service_conformance(e, dir / "a"); });
  fs::remove_all(dir);

  return rep.finish();
}

}  // namespace
}  // namespace setproto

// Optional arguments select criteria by number.
int main(int argc, char** argv) { return setproto::run(argc, argv); }
