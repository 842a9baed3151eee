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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "setproto/error.hpp"
#include "setproto/explain/cohesion.hpp"
#include "setproto/explain/context_curves.hpp"
#include "setproto/explain/explanation.hpp"
#include "setproto/explain/metrics.hpp"
#include "setproto/explain/prototypes.hpp"
#include "setproto/model/functional.hpp"
#include "setproto/model/predict.hpp"

namespace setproto {
namespace {

using testing::random_input;
using testing::random_model;
using testing::small_config;
using testing::small_vocab;

TEST(Metrics, Examples) {
  std::vector<double> y{1.0, 2.0, 3.0};
  auto same = compute_metrics(y, y);
  EXPECT_EQ(same.rmse, 0.0);
  EXPECT_EQ(same.mae, 0.0);
  EXPECT_EQ(same.n, 3u);

  std::vector<double> p{1.0, 3.0}, t{0.0, 0.0};
  auto m = compute_metrics(p, t);
  EXPECT_NEAR(m.rmse, std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(m.mae, 2.0, 1e-12);
}

TEST(Metrics, Errors) {
  std::vector<double> a{1.0}, b{1.0, 2.0}, none;
  EXPECT_THROW(compute_metrics(a, b), Error);
  EXPECT_THROW(compute_metrics(none, none), Error);
}

TEST(Metrics, EvaluateMatchesPredictions) {
  auto vocab = small_vocab(10);
  Model m = random_model(small_config(vocab, 4, 2, 3, 8), 1);
  auto samples = testing::random_samples(m.config, 30, 2, 1, 8);
  auto r = evaluate(m, samples);
  double se = 0.0, ae = 0.0;
  for (const auto& s : samples) {
    const double e = predict(m, s.input) - s.salary;
    se += e * e;
    ae += std::abs(e);
  }
  EXPECT_NEAR(r.rmse, std::sqrt(se / 30.0), 1e-12);
  EXPECT_NEAR(r.mae, ae / 30.0, 1e-12);
  auto again = evaluate(m, samples);
  EXPECT_EQ(r.rmse, again.rmse);
  EXPECT_EQ(r.mae, again.mae);
}

TEST(Explain, SinglePrototype) {
  auto vocab = small_vocab(6);
  Model m = random_model(small_config(vocab, 4, 2, 1, 8), 3);
  std::mt19937_64 rng(4);
  auto in = random_input(m.config, rng, 1, 6);
  auto e = explain(m, in);
  ASSERT_EQ(e.matches.size(), 1u);
  EXPECT_NEAR(e.matches[0].contribution, e.salary, 1e-12);
  EXPECT_EQ(e.salary, predict(m, in));
}

TEST(Explain, ContributionsRecomputedIndependently) {
  auto vocab = small_vocab(12);
  Model m = random_model(small_config(vocab, 8, 4, 5, 16), 5);
  std::mt19937_64 rng(6);
  for (int i = 0; i < 50; ++i) {
    auto in = random_input(m.config, rng, 1, 12);
    auto e = explain(m, in);
    ASSERT_EQ(e.matches.size(), 5u);
    std::vector<double> agg;
    for (const auto& pm : e.matches) agg.push_back(pm.similarity);
    const double mx = *std::max_element(agg.begin(), agg.end());
    double z = 0.0;
    for (double a : agg) z += std::exp(a - mx);
    RowVector sal = context_salary_weights(m, in.context);
    double total = 0.0, wsum = 0.0;
    for (std::size_t k = 0; k < 5; ++k) {
      const auto& pm = e.matches[k];
      EXPECT_EQ(pm.prototype, static_cast<int>(k));
      const double w = std::exp(agg[k] - mx) / z;
      EXPECT_NEAR(pm.weight, w, 1e-12);
      EXPECT_NEAR(pm.salary_weight, sal(static_cast<Eigen::Index>(k)), 1e-12);
      EXPECT_NEAR(pm.contribution, w * sal(static_cast<Eigen::Index>(k)), 1e-12);
      total += pm.contribution;
      wsum += pm.weight;
    }
    EXPECT_NEAR(total, e.salary, 1e-6);
    EXPECT_NEAR(wsum, 1.0, 1e-6);
    EXPECT_EQ(e.salary, predict(m, in));
  }
}

TEST(Explain, CanonicalUnderPermutation) {
  auto vocab = small_vocab(15);
  Model m = random_model(small_config(vocab, 8, 4, 4, 16), 7);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 20; ++i) {
    auto in = random_input(m.config, rng, 2, 12);
    SkillSetInput shuffled = in;
    std::vector<std::size_t> perm(in.skills.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t k = 0; k < perm.size(); ++k) {
      shuffled.skills[k] = in.skills[perm[k]];
      shuffled.levels[k] = in.levels[perm[k]];
    }
    auto a = to_json(explain(m, in), vocab);
    auto b = to_json(explain(m, shuffled), vocab);
    EXPECT_EQ(a["input"], b["input"]);
    EXPECT_EQ(a["subsets"].size(), b["subsets"].size());
    for (std::size_t v = 0; v < a["subsets"].size(); ++v) {
      const auto& sa = a["subsets"][v]["skills"];
      const auto& sb = b["subsets"][v]["skills"];
      ASSERT_EQ(sa.size(), sb.size());
      for (std::size_t k = 0; k < sa.size(); ++k) {
        EXPECT_EQ(sa[k]["id"], sb[k]["id"]);
        EXPECT_EQ(sa[k]["mask"], sb[k]["mask"]);
        EXPECT_EQ(sa[k]["selected"], sb[k]["selected"]);
        EXPECT_NEAR(sa[k]["alpha"].get<double>(), sb[k]["alpha"].get<double>(), 1e-12);
      }
    }
    EXPECT_NEAR(a["salary"].get<double>(), b["salary"].get<double>(), 1e-9);
  }
}

TEST(Explain, JsonShape) {
  auto vocab = small_vocab(6);
  Model m = random_model(small_config(vocab, 4, 2, 3, 8), 9);
  SkillSetInput in{{4, 1}, {2, kNoLevel}, {1.0, 0.5}};
  auto j = to_json(explain(m, in), vocab);
  ASSERT_EQ(j["input"]["skills"].size(), 2u);
  EXPECT_EQ(j["input"]["skills"][0]["name"], "s101");
  EXPECT_TRUE(j["input"]["skills"][0]["level"].is_null());
  EXPECT_EQ(j["input"]["skills"][1]["level"], "expert");
  EXPECT_EQ(j["input"]["context"]["city"], "b");
  EXPECT_NEAR(j["input"]["context"]["experience"].get<double>(), 4.0, 1e-12);
  EXPECT_EQ(j["subsets"].size(), 2u);
  EXPECT_EQ(j["prototype_matches"].size(), 3u);
  EXPECT_TRUE(j["salary"].is_number());

  auto ctx = decode_context({3.0, 0.0}, vocab);
  EXPECT_TRUE(ctx["city"].is_null());
  EXPECT_DOUBLE_EQ(ctx["experience"].get<double>(), 3.0);
}

TEST(Explain, EmptyInputRejected) {
  auto vocab = small_vocab(6);
  Model m = random_model(small_config(vocab, 4, 2, 3, 8), 10);
  EXPECT_THROW(explain(m, SkillSetInput{{}, {}, {0.0, 0.0}}), EmptySkillSetError);
}

TEST(Explain, NoPrototypeVariantHasNoMatches) {
  auto vocab = small_vocab(6);
  auto cfg = small_config(vocab, 4, 2, 3, 8);
  cfg.variant = Variant::kWithoutPrototypes;
  Model m = random_model(cfg, 11);
  SkillSetInput in{{0, 3}, {kNoLevel, 0}, {0.0, 0.0}};
  auto e = explain(m, in);
  EXPECT_TRUE(e.matches.empty());
  EXPECT_EQ(e.salary, predict(m, in));
}

TEST(Ranking, TiesBrokenById) {
  std::vector<double> w{2.0, 2.0, 3.0, 1.0};
  auto r = rank_by_weight(w);
  ASSERT_EQ(r.size(), 4u);
  EXPECT_EQ(r[0].prototype, 2);
  EXPECT_EQ(r[1].prototype, 0);
  EXPECT_EQ(r[2].prototype, 1);
  EXPECT_EQ(r[3].prototype, 3);
}

TEST(Ranking, MeansOverContexts) {
  auto vocab = small_vocab(4);
  auto cfg = small_config(vocab, 4, 2, 2, 8);
  Model m = random_model(cfg, 12);
  auto samples = testing::random_samples(cfg, 20, 13, 1, 4);
  auto means = mean_salary_weights(m, samples);
  std::vector<double> oracle(2, 0.0);
  for (const auto& s : samples) {
    RowVector w = context_salary_weights(m, s.input.context);
    oracle[0] += w(0) / 20.0;
    oracle[1] += w(1) / 20.0;
  }
  EXPECT_NEAR(means[0], oracle[0], 1e-12);
  EXPECT_NEAR(means[1], oracle[1], 1e-12);
  // Salary weight rows (1, 3) and (3, 1) average to a tie.
  std::vector<double> tie{0.5 * (1.0 + 3.0), 0.5 * (3.0 + 1.0)};
  auto r = rank_by_weight(tie);
  EXPECT_EQ(r[0].prototype, 0);
  EXPECT_EQ(r[1].prototype, 1);
}

TEST(Ranking, SingleContextMatchesSingleSampleOrder) {
  auto vocab = small_vocab(6);
  auto cfg = small_config(vocab, 4, 2, 6, 8);
  Model m = random_model(cfg, 14);
  auto samples = testing::random_samples(cfg, 10, 15, 1, 4);
  for (auto& s : samples) s.input.context = {1.0, 0.25};
  auto ranked = rank_prototypes(m, samples);
  RowVector w = context_salary_weights(m, samples[0].input.context);
  std::vector<int> order(6);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return w(a) > w(b); });
  for (int i = 0; i < 6; ++i) EXPECT_EQ(ranked[static_cast<std::size_t>(i)].prototype, order[static_cast<std::size_t>(i)]);
}

TEST(Prototypes, ExportListsMembersAndDelta) {
  auto vocab = small_vocab(5);
  auto cfg = small_config(vocab, 4, 2, 2, 8);
  Model m = random_model(cfg, 16);
  m.bank.membership(0, 1) = 1.0;
  m.bank.importance(0, 1) = 0.75;
  m.bank.delta(0, 3) = -0.125;
  m.bank.membership(1, 0) = 1.0;
  m.bank.importance(1, 0) = 0.5;
  m.bank.discrete = true;
  m.prototype_salary_means = {4.0, 6.5};
  auto j = export_prototypes(m, vocab);
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0]["id"], 0);
  ASSERT_EQ(j[0]["skills"].size(), 2u);
  EXPECT_EQ(j[0]["skills"][0]["name"], "s101");
  EXPECT_EQ(j[0]["skills"][0]["gamma_s"], 1.0);
  EXPECT_EQ(j[0]["skills"][0]["gamma_lv"], 0.75);
  EXPECT_EQ(j[0]["skills"][1]["name"], "s103");
  EXPECT_EQ(j[0]["skills"][1]["gamma_s"], 0.0);
  EXPECT_EQ(j[0]["skills"][1]["delta"], -0.125);
  EXPECT_EQ(j[1]["mean_salary_weight"], 6.5);
}

TEST(Cohesion, Examples) {
  CooccurrenceGraph g(4);
  g.set_weight(0, 1, 0.3);
  std::vector<int> pair{0, 1};
  EXPECT_DOUBLE_EQ(subset_cohesion_score(pair, g), 0.3);
  g.set_weight(0, 2, 0.2);
  g.set_weight(0, 3, 0.4);
  g.set_weight(2, 3, 0.6);
  std::vector<int> tri{0, 2, 3};
  EXPECT_NEAR(subset_cohesion_score(tri, g), 0.4, 1e-15);
  std::vector<int> tri_perm{3, 0, 2};
  EXPECT_NEAR(subset_cohesion_score(tri_perm, g), subset_cohesion_score(tri, g), 1e-15);
  CooccurrenceGraph empty(4);
  EXPECT_EQ(subset_cohesion_score(tri, empty), 0.0);
  std::vector<int> one{2};
  EXPECT_THROW(subset_cohesion_score(one, g), Error);
}

TEST(Cohesion, BoundedByMaxWeight) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 0.8);
  CooccurrenceGraph g(10);
  for (int a = 0; a < 10; ++a)
    for (int b = a + 1; b < 10; ++b)
      if (u(rng) > 0.3) g.set_weight(a, b, u(rng));
  double mx = 0.0;
  for (const auto& e : g.edges()) mx = std::max(mx, e.weight);
  std::vector<int> ids(10);
  std::iota(ids.begin(), ids.end(), 0);
  for (int t = 0; t < 100; ++t) {
    std::shuffle(ids.begin(), ids.end(), rng);
    const std::size_t k = 2 + static_cast<std::size_t>(t % 7);
    const double s = subset_cohesion_score(std::span<const int>(ids.data(), k), g);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, mx);
  }
}

TEST(Cohesion, CliqueScoresOne) {
  // Every pair co-occurs in every posting, so extracted subsets score 1.
  auto vocab = small_vocab(6);
  Model m = random_model(small_config(vocab, 8, 4, 3, 16), 18);
  std::vector<EncodedSample> samples(5);
  for (auto& s : samples) s.input = {{0, 1, 2, 3, 4, 5}, std::vector<int>(6, kNoLevel), {0.0, 0.0}};
  auto g = build_cooccurrence_graph(samples, 6);
  auto r = cohesion_report(m, samples, g, 10, 1);
  ASSERT_GT(r.n_subsets, 0u);
  EXPECT_DOUBLE_EQ(r.model_mean, 1.0);
  EXPECT_DOUBLE_EQ(r.random_mean, 1.0);
}

TEST(Cohesion, RandomBaselineMatchesAnalyticExpectation) {
  auto vocab = small_vocab(14);
  auto cfg = small_config(vocab, 8, 4, 3, 16);
  Model m = random_model(cfg, 19);
  auto samples = testing::random_samples(cfg, 120, 20, 4, 10);
  auto g = build_cooccurrence_graph(samples, cfg.n_skills);
  const int resamples = 100;
  auto r = cohesion_report(m, samples, g, resamples, 21);

  // A uniform k-subset of a posting has expected pair mean equal to the
  // posting's mean pair weight.
  double expect = 0.0, model_mean = 0.0;
  std::size_t n = 0;
  for (const auto& s : samples) {
    const double all = subset_cohesion_score(s.input.skills, g);
    for (const auto& sub : extracted_subsets(m, s.input)) {
      if (sub.size() < 2) continue;
      expect += all;
      model_mean += subset_cohesion_score(sub, g);
      ++n;
    }
  }
  ASSERT_GT(n, 20u);
  EXPECT_EQ(r.n_subsets, n);
  EXPECT_NEAR(r.model_mean, model_mean / static_cast<double>(n), 1e-12);
  EXPECT_EQ(r.resamples, resamples);
  EXPECT_NEAR(r.random_mean, expect / static_cast<double>(n), 0.01);
}

TEST(ContextCurves, SweepsCategoriesAndNumbers) {
  auto vocab = small_vocab(4);
  Model m = random_model(small_config(vocab, 4, 2, 3, 8), 22);
  auto cat = context_curves(m, vocab, "city");
  ASSERT_EQ(cat.size(), 3u * 3u);
  EXPECT_EQ(cat[0].value, "a");
  RowVector w = context_salary_weights(m, {0.0, 0.0});
  EXPECT_NEAR(cat[0].salary_weight, w(cat[0].prototype), 1e-12);

  auto num = context_curves(m, vocab, "experience", 5);
  ASSERT_EQ(num.size(), 5u * 3u);
  RowVector lo = context_salary_weights(m, {3.0, -2.0});
  bool found = false;
  for (const auto& p : num)
    if (p.prototype == 1 && std::abs(p.salary_weight - lo(1)) < 1e-12) found = true;
  EXPECT_TRUE(found);
  for (const auto& p : num) EXPECT_GE(p.salary_weight, 0.0);

  std::ostringstream csv;
  write_context_curves_csv(csv, "city", cat);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "field,value,prototype,salary_weight");
  EXPECT_THROW(context_curves(m, vocab, "nope"), Error);
}

}  // namespace
}  // namespace setproto
