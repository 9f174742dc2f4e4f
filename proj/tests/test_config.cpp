#include <string>

#include "concavlab/config.hpp"
#include "concavlab/errors.hpp"
#include "doctest.h"

using namespace cvlab;

namespace {

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("custom problem from sections") {
  const Config c = parse_config(R"(
; disk torsion
[domain]
kind = disk
radius = 2

[source]
kind = power_q
q = 0.5

[grid]
h = 0.05
T = 1.5

[audit]
mode = spacetime
transform = power
alpha = 0.25
beta = 1

[scenario]
exact = true
required = h1, h2
quantitative = oscillation, rough
rho = 0.1

[output]
format = csv
seed = 7
)");
  CHECK(c.scenario.id == "custom");
  CHECK(c.scenario.problem.domain.kind == DomainKind::disk);
  CHECK(c.scenario.problem.domain.radius == 2.0);
  CHECK(c.scenario.problem.source.kind == SourceKind::power_q);
  CHECK(c.scenario.grid.h == 0.05);
  CHECK(c.scenario.grid.T == 1.5);
  CHECK(c.scenario.audit.mode == AuditMode::spacetime);
  CHECK(c.scenario.audit.alpha == 0.25);
  CHECK(!c.alpha_auto);
  CHECK(c.scenario.exact);
  CHECK(c.scenario.required == std::vector<std::string>{"h1", "h2"});
  CHECK(c.scenario.quantitative.size() == 2);
  CHECK(c.scenario.rho == 0.1);
  CHECK(c.format == ReportFormat::csv);
  CHECK(c.seed == 7);
}

TEST_CASE("built-in scenario with overrides") {
  const Config c = parse_config("[scenario]\nid = lane-emden-square\n[grid]\nT = 1\n", 0.05);
  CHECK(c.scenario.id == "lane-emden-square");
  CHECK(c.scenario.grid.h == 0.05);
  CHECK(c.scenario.grid.T == 1.0);
  CHECK(c.alpha_auto);
  CHECK(c.scenario.audit.alpha_rule.has_value());
}

TEST_CASE("polygon vertices") {
  const Config c =
      parse_config("[domain]\nkind = convex_polygon\nvertices = 0 0; 1 0; 1 1; 0 1\n[grid]\nh = 0.1\n");
  REQUIRE(c.scenario.problem.domain.vertices.size() == 4);
  CHECK(c.scenario.problem.domain.vertices[2].x == 1.0);
  CHECK(message_of("[domain]\nkind = convex_polygon\nvertices = 0 0; 1 1; 1 0; 0 1\n").find("NonConvexPolygon") !=
        std::string::npos);
}

TEST_CASE("errors name the offending key") {
  CHECK(message_of("[grid]\nhh = 1\n").find("grid.hh") != std::string::npos);
  CHECK(message_of("[grid]\nh = abc\n").find("grid.h") != std::string::npos);
  CHECK(message_of("[grid]\nh = -1\n").find("grid.h") != std::string::npos);
  CHECK(message_of("[audit]\nbeta = 3\n").find("audit.beta") != std::string::npos);
  CHECK(message_of("[source]\nkind = cubic\n").find("source.kind") != std::string::npos);
  CHECK(message_of("[scenario]\nid = nope\n").find("nope") != std::string::npos);
  CHECK(message_of("[bogus]\nx = 1\n").find("bogus.x") != std::string::npos);
}

TEST_CASE("settings and the generated reference") {
  Config c;
  apply_setting(c, "audit", "alpha", "auto");
  CHECK(c.alpha_auto);
  apply_setting(c, "scenario", "rho", "auto");
  CHECK(!c.scenario.rho);
  apply_setting(c, "grid", "substeps", "2");
  CHECK(c.scenario.grid.substeps == 2);
  CHECK_THROWS_AS(apply_setting(c, "grid", "substeps", "2.5"), Error);

  const std::string ref = config_reference();
  for (const char* s : {"[scenario]", "[domain]", "[weight]", "[source]", "[initial]", "[grid]", "[audit]", "[output]"})
    CHECK(ref.find(s) != std::string::npos);
  for (const char* k : {"h = ", "beta = ", "epsilon = ", "kind = ", "format = "}) CHECK(ref.find(k) != std::string::npos);
}
