#include <doctest.h>

#include "evos/schedule.hpp"

using namespace evos;

namespace {

ScheduleConfig make(ScheduleKind kind, int total = 5000) {
  ScheduleConfig c;
  c.kind = kind;
  c.totalIterations = total;
  return c;
}

}  // namespace

TEST_CASE("constant schedule keeps q = round(beta*N) at every iteration") {
  ScheduleConfig c = make(ScheduleKind::Constant);
  c.beta = 0.5;
  for (int t : {1, 100, 2500, 5000}) CHECK(selectionSize(c, t, 1000) == 500);
  c.beta = 0.333;
  CHECK(selectionSize(c, 1, 1000) == 333);
  c.beta = 1.0;
  CHECK(selectionSize(c, 1, 1000) == 1000);
}

TEST_CASE("step-wise schedule ramps 0.2N to N over five equal blocks") {
  const ScheduleConfig c = make(ScheduleKind::StepWise);
  const int n = 1000;
  CHECK(selectionSize(c, 1, n) == 200);
  CHECK(selectionSize(c, 1000, n) == 200);
  CHECK(selectionSize(c, 1001, n) == 400);
  CHECK(selectionSize(c, 2500, n) == 600);
  CHECK(selectionSize(c, 3500, n) == 800);
  CHECK(selectionSize(c, 4001, n) == 1000);
  CHECK(selectionSize(c, 5000, n) == 1000);
}

TEST_CASE("linear schedule passes through the midpoint") {
  const ScheduleConfig c = make(ScheduleKind::Linear);
  CHECK(selectionSize(c, 2500, 1000) == 500);
  CHECK(selectionSize(c, 1, 1000) == 1);  // max(1, round(N/T))
  CHECK(selectionSize(c, 5000, 1000) == 1000);
}

TEST_CASE("cosine schedule follows the half-cosine ramp") {
  const ScheduleConfig c = make(ScheduleKind::Cosine);
  const int n = 1000;
  // t=T: ramp = 1 -> endRatio
  CHECK(selectionSize(c, 5000, n) == 1000);
  // midpoint: ramp = 0.5 -> 0.2 + 0.8*0.5 = 0.6
  CHECK(selectionSize(c, 2500, n) == 600);
  // near start stays close to startRatio
  CHECK(selectionSize(c, 1, n) >= 200);
  CHECK(selectionSize(c, 1, n) <= 201);
}

TEST_CASE("q is nondecreasing in t for ramp schedules") {
  for (const auto kind : {ScheduleKind::StepWise, ScheduleKind::Linear, ScheduleKind::Cosine}) {
    const ScheduleConfig c = make(kind, 777);
    int prev = 0;
    for (int t = 1; t <= 777; ++t) {
      const int q = selectionSize(c, t, 513);
      CHECK(q >= prev);
      CHECK(q >= 1);
      CHECK(q <= 513);
      prev = q;
    }
  }
}

TEST_CASE("survivorCount inverts q = (1+alpha)k") {
  CHECK(survivorCount(150, 0.5) == 100);
  CHECK(survivorCount(1, 0.5) == 1);
  CHECK(survivorCount(7, 0.0) == 7);
  CHECK(survivorCount(100, 1.0) == 50);
}

TEST_CASE("rounding slack of the mutation budget is bounded by one") {
  for (int q = 1; q <= 400; ++q) {
    for (const double alpha : {0.0, 0.1, 0.5, 1.0}) {
      const int k = survivorCount(q, alpha);
      CHECK(k + roundHalfUp(alpha * k) <= q + 1);
    }
  }
}

TEST_CASE("invalid schedule configs are rejected") {
  ScheduleConfig c = make(ScheduleKind::Constant);
  c.beta = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = make(ScheduleKind::StepWise);
  c.startRatio = 0.9;
  c.endRatio = 0.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = make(ScheduleKind::Linear);
  CHECK_THROWS_AS(selectionSize(c, 0, 100), std::out_of_range);
  CHECK_THROWS_AS(selectionSize(c, 5001, 100), std::out_of_range);
  CHECK_THROWS_AS(survivorCount(0, 0.5), std::invalid_argument);
}
