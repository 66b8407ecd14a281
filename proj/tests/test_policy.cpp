#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "himpp/policy.hpp"

using namespace himpp;

TEST_CASE("std schedule decays in steps of 0.05 down to the floor") {
  StdSchedule s;  // 0.5 - 0.05 * floor(t / 2.5e5), floor 0.1
  CHECK(s.value(0) == 0.5);
  CHECK(s.value(249999) == 0.5);
  CHECK(s.value(250000) == doctest::Approx(0.45));
  CHECK(s.value(1000000) == doctest::Approx(0.3));
  CHECK(s.value(100000000) == 0.1);  // never below the floor
}

TEST_CASE("emission schedule: manager every K*alpha, sub every alpha") {
  Schedule s{3, 5, 2};
  for (int t = 0; t < 30; ++t) {
    CHECK(s.manager_emits(t) == (t % 10 == 0));
    CHECK(s.submanager_emits(t) == (t % 5 == 0));
  }
  Schedule two{2, 5, 7};  // K ignored at 2 levels
  CHECK(two.manager_period() == 5);
  CHECK_FALSE(two.submanager_emits(0));
}

TEST_CASE("categorical head: uniform logits give log(1/n) and exact entropy") {
  PolicyHead head("h", HeadKind::categorical, 4, 8);
  Vec logits(8, 0.37);  // equal logits, any constant
  for (int a = 0; a < 8; ++a) {
    Vec sample = {static_cast<double>(a)};
    CHECK(head.log_prob(logits, sample, 0.5) ==
          doctest::Approx(-std::log(8.0)).epsilon(1e-12));
  }
  CHECK(head.entropy(logits, 0.5) ==
        doctest::Approx(std::log(8.0)).epsilon(1e-12));

  Vec probs = softmax(logits);
  double total = 0.0;
  for (double p : probs) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gaussian head: closed-form log density and entropy") {
  PolicyHead head("h", HeadKind::gaussian, 4, 3);
  Vec mu = {0.1, -0.4, 2.0};
  Vec x = {0.0, 0.0, 1.5};
  double sigma = 0.3;
  double expect = 0.0;
  for (int j = 0; j < 3; ++j) {
    double d = x[static_cast<size_t>(j)] - mu[static_cast<size_t>(j)];
    expect += -0.5 * d * d / (sigma * sigma) - std::log(sigma) -
              0.5 * std::log(2.0 * M_PI);
  }
  CHECK(head.log_prob(mu, x, sigma) == doctest::Approx(expect).epsilon(1e-12));

  double ent = 3.0 * (0.5 * std::log(2.0 * M_PI) + 0.5 + std::log(sigma));
  CHECK(head.entropy(mu, sigma) == doctest::Approx(ent).epsilon(1e-12));
  // sigma scheduled, not learned: entropy gradient w.r.t. the mean is zero
  CHECK(head.dentropy(mu, sigma) == Vec{0.0, 0.0, 0.0});
}

TEST_CASE("dlogp matches finite differences for both head kinds") {
  const double h = 1e-6;
  {
    PolicyHead head("g", HeadKind::gaussian, 4, 3);
    Vec mu = {0.2, -1.0, 0.7};
    Vec x = {0.5, -0.5, 0.0};
    Vec grad = head.dlogp(mu, x, 0.4);
    for (int j = 0; j < 3; ++j) {
      Vec up = mu, down = mu;
      up[static_cast<size_t>(j)] += h;
      down[static_cast<size_t>(j)] -= h;
      double fd = (head.log_prob(up, x, 0.4) - head.log_prob(down, x, 0.4)) / (2 * h);
      CHECK(grad[static_cast<size_t>(j)] == doctest::Approx(fd).epsilon(1e-6));
    }
  }
  {
    PolicyHead head("c", HeadKind::categorical, 4, 5);
    Vec logits = {0.1, -0.3, 0.8, 0.0, -1.2};
    Vec sample = {2.0};
    Vec grad = head.dlogp(logits, sample, 0.0);
    Vec dent = head.dentropy(logits, 0.0);
    for (int j = 0; j < 5; ++j) {
      Vec up = logits, down = logits;
      up[static_cast<size_t>(j)] += h;
      down[static_cast<size_t>(j)] -= h;
      double fd = (head.log_prob(up, sample, 0.0) - head.log_prob(down, sample, 0.0)) / (2 * h);
      CHECK(grad[static_cast<size_t>(j)] == doctest::Approx(fd).epsilon(1e-5));
      double fde = (head.entropy(up, 0.0) - head.entropy(down, 0.0)) / (2 * h);
      CHECK(dent[static_cast<size_t>(j)] == doctest::Approx(fde).epsilon(1e-5));
    }
  }
}

TEST_CASE("sampling frequencies follow the distribution") {
  ParamStore ps;
  Rng rng(3);
  PolicyHead head("c", HeadKind::categorical, 2, 3);
  head.init(ps, rng);

  // fixed obs -> fixed logits; empirical frequencies approach softmax probs
  Vec obs = {0.4, -0.9};
  Tape tape(ps);
  int x = tape.input(obs);
  Vec probs = softmax(tape.value(head.mean_node(tape, x)));

  std::vector<int> counts(3, 0);
  const int N = 20000;
  for (int i = 0; i < N; ++i) {
    Tape t2(ps);
    ActOut a = head.act(t2, t2.input(obs), 0.5, rng);
    ++counts[static_cast<size_t>(a.sample[0])];
    CHECK(a.log_prob ==
          doctest::Approx(std::log(probs[static_cast<size_t>(a.sample[0])]))
              .epsilon(1e-6));
  }
  for (int j = 0; j < 3; ++j)
    CHECK(static_cast<double>(counts[static_cast<size_t>(j)]) / N ==
          doctest::Approx(probs[static_cast<size_t>(j)]).epsilon(0.08));
}

TEST_CASE("gaussian sampling: mean and std match the schedule sigma") {
  ParamStore ps;
  Rng rng(7);
  PolicyHead head("g", HeadKind::gaussian, 2, 1);
  head.init(ps, rng);
  Vec obs = {1.0, -1.0};

  Tape t0(ps);
  double mu = t0.value(head.mean_node(t0, t0.input(obs)))[0];

  const double sigma = 0.25;
  double sum = 0.0, sq = 0.0;
  const int N = 20000;
  for (int i = 0; i < N; ++i) {
    Tape t2(ps);
    ActOut a = head.act(t2, t2.input(obs), sigma, rng);
    sum += a.sample[0];
    sq += a.sample[0] * a.sample[0];
  }
  double mean = sum / N;
  double var = sq / N - mean * mean;
  CHECK(mean == doctest::Approx(mu).epsilon(0.05));
  CHECK(std::sqrt(var) == doctest::Approx(sigma).epsilon(0.05));

  Tape t3(ps);
  ActOut g = head.act_greedy(t3, t3.input(obs));
  CHECK(g.sample[0] == doctest::Approx(mu));
}
