#include "concavlab/properties.hpp"
#include "concavlab/report.hpp"
#include "doctest.h"

using namespace cvlab;

TEST_CASE("property suite passes and is reproducible") {
  const PropertySuiteReport a = run_property_suite(11, 2000);
  const PropertySuiteReport b = run_property_suite(11, 2000);
  CHECK(a.passed());
  CHECK(a.checks.size() == 7);
  for (const auto& c : a.checks) {
    CHECK(c.violations == 0);
    CHECK(c.evaluated + c.skipped == c.draws);
    CHECK(c.evaluated > c.draws / 2);
  }
  CHECK(to_json(a).dump() == to_json(b).dump());
  CHECK(to_json(run_property_suite(12, 2000)).dump() != to_json(a).dump());
}

TEST_CASE("a negative tolerance turns exact equalities into violations") {
  const PropertySuiteReport r = run_property_suite(1, 500, -1.0);
  CHECK(!r.passed());
}
