#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "meshscore/error.hpp"
#include "meshscore/naive_bayes.hpp"
#include "synthetic.hpp"

using namespace meshscore;

namespace {

constexpr auto G = DomainLabel::Genetic;
constexpr auto N = DomainLabel::NonGenetic;

using Docs = std::vector<std::vector<std::string>>;

std::vector<DocumentVector> counts(const Docs& docs, const Vocabulary& v) {
  std::vector<DocumentVector> out;
  for (const auto& d : docs) out.push_back(count_vector(d, v));
  return out;
}

// Posterior P(genetic | doc) from the textbook formula, in plain probability
// space with term-by-term products.
double brute_posterior(const Docs& train, const std::vector<DomainLabel>& labels,
                       const std::vector<std::string>& doc, double alpha) {
  std::map<std::string, std::array<double, 2>> tc;
  std::array<double, 2> total{0, 0}, docs{0, 0};
  for (std::size_t i = 0; i < train.size(); ++i) {
    const int c = labels[i] == G;
    docs[c] += 1;
    for (const auto& t : train[i]) {
      tc[t][c] += 1;
      total[c] += 1;
    }
  }
  const double V = static_cast<double>(tc.size());
  std::array<double, 2> joint{};
  for (int c = 0; c < 2; ++c) {
    double p = docs[c] / (docs[0] + docs[1]);
    for (const auto& t : doc) {
      auto it = tc.find(t);
      if (it == tc.end()) continue;
      p *= (it->second[c] + alpha) / (total[c] + alpha * V);
    }
    joint[c] = p;
  }
  return joint[1] / (joint[0] + joint[1]);
}

}  // namespace

TEST_SUITE("naive_bayes") {
  TEST_CASE("posterior matches the brute-force Bayes rule") {
    const Docs train{{"gene", "gene", "dna"}, {"gene", "cell"}, {"bone", "cell"}, {"bone", "knee", "knee"}};
    const std::vector<DomainLabel> labels{G, G, N, N};
    const auto vocab = build_vocabulary(train, 1);
    const auto model = nb_train(counts(train, vocab), labels, vocab, 1.0);

    for (const auto& doc : Docs{{"gene"}, {"cell"}, {"knee", "gene"}, {"dna", "bone", "cell"}, {}}) {
      const double p = brute_posterior(train, labels, doc, 1.0);
      const auto pred = nb_predict(model, count_vector(doc, vocab));
      CHECK(pred.log_odds == doctest::Approx(std::log(p / (1 - p))).epsilon(1e-12));
      CHECK(pred.label == (p > 0.5 ? G : N));
    }
    CHECK(model.alpha == 1.0);
  }

  TEST_CASE("class-conditional probabilities are normalized") {
    const Docs train{{"a", "b"}, {"b", "c", "c"}, {"d"}};
    const auto vocab = build_vocabulary(train, 1);
    const auto model = nb_train(counts(train, vocab), {G, N, N}, vocab, 0.5);
    for (int c = 0; c < 2; ++c) {
      double s = 0;
      for (double lp : model.log_prob[c]) s += std::exp(lp);
      CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
    // "a" only in the genetic class, yet smoothed above zero in both.
    const auto a = *vocab.index_of("a");
    CHECK(model.log_prob[1][a] > model.log_prob[0][a]);
    CHECK(std::isfinite(model.log_prob[0][a]));
  }

  TEST_CASE("symmetric corpus and ties") {
    const Docs train{{"x"}, {"y"}};
    const auto vocab = build_vocabulary(train, 1);
    const auto model = nb_train(counts(train, vocab), {G, N}, vocab);
    CHECK(model.log_prior[0] == model.log_prior[1]);
    const auto neutral = nb_predict(model, DocumentVector{});
    CHECK(neutral.log_odds == 0.0);
    CHECK(neutral.label == N);
    CHECK(nb_predict(model, count_vector({"x"}, vocab)).label == G);
  }

  TEST_CASE("empty document follows the larger prior") {
    const Docs train{{"x"}, {"y"}, {"y"}};
    const auto vocab = build_vocabulary(train, 1);
    const auto gen_heavy = nb_train(counts(train, vocab), {G, G, N}, vocab);
    CHECK(nb_predict(gen_heavy, DocumentVector{}).label == G);
    const auto non_heavy = nb_train(counts(train, vocab), {G, N, N}, vocab);
    CHECK(nb_predict(non_heavy, DocumentVector{}).label == N);
  }

  TEST_CASE("scaling all counts keeps decisions") {
    const Docs train{{"a", "b", "b"}, {"a", "c"}, {"c", "d"}, {"b", "d", "d"}};
    const std::vector<DomainLabel> labels{G, G, N, N};
    const auto vocab = build_vocabulary(train, 1);
    auto docs = counts(train, vocab);
    const auto base = nb_train(docs, labels, vocab, 1e-9);
    for (auto& d : docs)
      for (auto& e : d.entries) e.second *= 3;
    const auto scaled = nb_train(docs, labels, vocab, 1e-9);
    for (const auto& q : Docs{{"a"}, {"d"}, {"b", "c"}, {"a", "d", "d"}}) {
      CHECK(nb_predict(base, count_vector(q, vocab)).label ==
            nb_predict(scaled, count_vector(q, vocab)).label);
    }
  }

  TEST_CASE("single-class training is degenerate") {
    const Docs train{{"x"}, {"y"}};
    const auto vocab = build_vocabulary(train, 1);
    CHECK_THROWS_AS(nb_train(counts(train, vocab), {G, G}, vocab), DegenerateError);
  }

  TEST_CASE("model JSON round trip") {
    const Docs train{{"gene", "dna"}, {"knee"}};
    const auto vocab = build_vocabulary(train, 1);
    const auto model = nb_train(counts(train, vocab), {G, N}, vocab, 0.7);
    std::ostringstream out;
    write_nb_json(out, model);
    CHECK(out.str().find("\"format\"") != std::string::npos);
    std::istringstream in(out.str());
    const auto back = read_nb_json(in);
    CHECK(back.alpha == model.alpha);
    CHECK(back.log_prior == model.log_prior);
    CHECK(back.log_prob == model.log_prob);
    CHECK(back.vocabulary == model.vocabulary);
  }

  TEST_CASE("planted class-exclusive vocabularies are learned") {
    testing::SyntheticSpec spec;
    spec.citations = 2000;
    spec.own_rate = 0.5;
    spec.cross_rate = 0.0;
    spec.seed = 31;
    const auto corpus = testing::make_synthetic(spec);
    PipelineConfig cfg;
    cfg.field = FieldSelector::Descriptors;
    const auto cv = nb_cross_validate(corpus, cfg, 5, 2);
    CHECK(cv.mean.acc >= 0.95);
    CHECK(cv.fold_counts.size() == 5);
    ConfusionCounts pooled;
    for (const auto& f : cv.fold_counts) pooled += f;
    CHECK(pooled.total() == corpus.size());
    CHECK(nb_cross_validate(corpus, cfg, 5, 2, 1.0, 3).predictions == cv.predictions);
  }

  TEST_CASE("classifier wrapper over the text pipeline") {
    std::vector<Citation> train;
    auto add = [&](std::string id, std::string title, DomainLabel l) {
      Citation c;
      c.id = std::move(id);
      c.title = std::move(title);
      c.label = l;
      train.push_back(c);
    };
    add("1", "gene mutation sequencing", G);
    add("2", "gene expression mutation", G);
    add("3", "knee fracture surgery", N);
    add("4", "hip fracture surgery", N);
    PipelineConfig cfg;
    cfg.stopwords = {};
    cfg.field = FieldSelector::Title;
    NaiveBayesClassifier nb(cfg);
    nb.fit(train);
    Citation q;
    q.id = "q";
    q.title = "mutations of the gene";
    CHECK(nb.predict(q).label == G);
    q.title = "fractures and surgery";
    CHECK(nb.predict(q).label == N);
  }
}
