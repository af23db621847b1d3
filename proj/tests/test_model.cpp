#include "doctest.h"
#include "mmest/experiments.hpp"
#include "mmest/model.hpp"

using namespace mmest;

namespace {

SystemModel scalar(double f, double h, double q = 1.0, double r = 1.0) {
  SystemModel m;
  m.F = Matrix::Constant(1, 1, f);
  m.H = Matrix::Constant(1, 1, h);
  m.Q = SymMatrix(Matrix::Constant(1, 1, q));
  m.R = SymMatrix(Matrix::Constant(1, 1, r));
  return m;
}

}  // namespace

TEST_CASE("the four benchmark sets validate") {
  for (char which : {'a', 'b', 'c', 'd'}) {
    const ValidatedModelSet set = validate_model_set(builtin_table1(which));
    CHECK(set.size() == 2);
    CHECK(set.n() == 1);
    CHECK(set.m() == 1);
  }
}

TEST_CASE("zero Q is rejected with the model named") {
  ModelSet raw;
  raw.models = {scalar(1.1, 1.0), scalar(0.9, 1.0, /*q=*/0.0)};
  try {
    validate_model_set(raw);
    FAIL("expected NotPositiveDefinite");
  } catch (const NotPositiveDefinite& e) {
    const std::string what = e.what();
    CHECK(what.find("model 2") != std::string::npos);
    CHECK(what.find("Q") != std::string::npos);
  }
}

TEST_CASE("mismatched state dimensions are rejected") {
  SystemModel two_state;
  two_state.F = Matrix::Identity(2, 2) * 0.5;
  two_state.H = Matrix::Ones(1, 2);
  two_state.Q = SymMatrix(Matrix::Identity(2, 2));
  two_state.R = SymMatrix(Matrix::Identity(1, 1));

  ModelSet raw;
  raw.models = {scalar(1.0, 1.0), two_state};
  CHECK_THROWS_AS(validate_model_set(raw), DimensionMismatch);
}

TEST_CASE("empty set is rejected") {
  CHECK_THROWS_AS(validate_model_set(ModelSet{}), EmptySet);
}

TEST_CASE("x0_hat defaults to zero and wrong lengths are rejected") {
  ModelSet raw;
  raw.models = {scalar(1.0, 1.0)};
  const ValidatedModelSet set = validate_model_set(raw);
  CHECK(set.model(0).x0_hat.size() == 1);
  CHECK(set.model(0).x0_hat(0) == 0.0);

  raw.models[0].x0_hat = Vector::Zero(3);
  CHECK_THROWS_AS(validate_model_set(raw), DimensionMismatch);
}

TEST_CASE("validation is idempotent") {
  const ModelSet raw = builtin_table1('c');
  const ValidatedModelSet once = validate_model_set(raw);
  ModelSet again;
  again.models = once.models();
  const ValidatedModelSet twice = validate_model_set(again);
  REQUIRE(twice.size() == once.size());
  for (int i = 0; i < once.size(); ++i) {
    CHECK(max_abs(once.model(i).F - twice.model(i).F) == 0.0);
    CHECK(max_abs(once.model(i).H - twice.model(i).H) == 0.0);
    CHECK(max_abs(once.model(i).Q.mat() - twice.model(i).Q.mat()) == 0.0);
    CHECK(max_abs(once.model(i).R.mat() - twice.model(i).R.mat()) == 0.0);
    CHECK((once.model(i).x0_hat - twice.model(i).x0_hat).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("non-finite model entries are rejected") {
  ModelSet raw;
  raw.models = {scalar(std::numeric_limits<double>::infinity(), 1.0)};
  CHECK_THROWS_AS(validate_model_set(raw), NonFiniteEntry);
}

TEST_CASE("out-of-range model access") {
  const ValidatedModelSet set = validate_model_set(builtin_table1('a'));
  CHECK_THROWS_AS(set.model(2), IndexOutOfRange);
  CHECK_THROWS_AS(set.model(-1), IndexOutOfRange);
}
