#include <doctest.h>

#include <cmath>

#include "fa/algebra.hpp"
#include "fa/error.hpp"
#include "fa/generate.hpp"
#include "fa/structure.hpp"
#include "test_helpers.hpp"

using namespace fa;
using fa::test::half_adder_table;
using fa::test::link;
using fa::test::make_adder;
using fa::test::make_zoom_chain;

namespace {

double mass_of(const Value& v) { return std::get<double>(v); }

// A one-input chain P -> Q -> R of pure rewiring arrows, used for functor-law
// checks: each arrow pipes the single input through and the single output
// back out.
void make_pipe_chain(Registry& reg) {
  reg.add_box("P", {"p1"}, {"p2"});
  reg.add_box("Q", {"q1"}, {"q2"});
  reg.add_box("R", {"r1"}, {"r2"});
  reg.add_arrow("n", {"P"}, "Q", {link("n1", "p1", "q1")}, {link("n2", "q2", "p2")});
  reg.add_arrow("m", {"Q"}, "R", {link("m1", "q1", "r1")}, {link("m2", "r2", "q2")});
}

TruthTable not_table(const std::string& in, const std::string& out) {
  TruthTable t;
  t.inputs = {in};
  t.outputs = {out};
  t.rows[{"0"}] = {"1"};
  t.rows[{"1"}] = {"0"};
  return t;
}

}  // namespace

TEST_CASE("mass algebra sums constituent masses") {
  Registry reg;
  reg.add_box("X1", {"u"}, {"v"});
  reg.add_box("X2", {"w"}, {"x"});
  reg.add_box("Y", {"p", "q"}, {"r"});
  const WiringArrow& w = reg.add_arrow("w", {"X1", "X2"}, "Y",
                                       {link("f1", "u", "p"), link("f2", "w", "v")},
                                       {link("f3", "r", "x")});
  MultiArrow ma = multi_arrow("m", {reg.box("X1"), reg.box("X2")}, reg.box("Y"), w);

  MassAssignment masses;
  masses.box_mass = {{"X1", 2.0}, {"X2", 3.0}};
  Algebra sum = mass_algebra(masses, MassVariant::SumOnly);
  CHECK(mass_of(sum.action(ma, {Value{2.0}, Value{3.0}})) == doctest::Approx(5.0));

  SUBCASE("zero link masses reduce the link variant to the sum") {
    masses.link_mass = {{"f1", 0.0}, {"f2", 0.0}, {"f3", 0.0}};
    Algebra with_links = mass_algebra(masses, MassVariant::SumPlusLinks);
    CHECK(mass_of(with_links.action(ma, {Value{2.0}, Value{3.0}})) == doctest::Approx(5.0));
  }
  SUBCASE("identity arrows leave the mass unchanged") {
    MultiArrow id = identity_multi_arrow(reg.box("X1"));
    CHECK(mass_of(sum.action(id, {Value{2.0}})) == doctest::Approx(2.0));
  }
  SUBCASE("a missing link mass is an error") {
    masses.link_mass = {{"f1", 0.5}};
    Algebra with_links = mass_algebra(masses, MassVariant::SumPlusLinks);
    CHECK_THROWS_AS(with_links.action(ma, {Value{2.0}, Value{3.0}}), Error);
  }
  SUBCASE("nonpositive masses are rejected") {
    CHECK_THROWS_AS(sum.action(ma, {Value{0.0}, Value{3.0}}), Error);
  }
}

TEST_CASE("the link-mass variant counts only surviving words") {
  Registry reg;
  make_zoom_chain(reg);
  MatArrow composite = compose(to_mat(reg.arrow("theta")), to_mat(reg.arrow("theta1")));

  std::map<std::string, double> unit_masses;
  for (const char* l : {"l1", "l2", "l3", "l4", "l5", "l6", "l7", "l8", "l9"}) {
    unit_masses[l] = 1.0;
  }
  // Surviving words: l5, l6.l7, l6.l8, l1.l3, l2.l4 — nine atoms in all.
  // l9 vanished with the unconnected port and contributes nothing.
  CHECK(link_mass_total(composite, unit_masses) == doctest::Approx(9.0));

  MultiArrow ma{"zoom", {reg.box("X")}, reg.box("Z"), composite};
  MassAssignment masses;
  masses.link_mass = unit_masses;
  Algebra alg = mass_algebra(masses, MassVariant::SumPlusLinks);
  CHECK(mass_of(alg.action(ma, {Value{4.0}})) == doctest::Approx(13.0));
}

TEST_CASE("mass algebra satisfies the functor laws on the zoom chain") {
  Registry reg;
  make_zoom_chain(reg);
  Algebra alg = mass_algebra({}, MassVariant::SumOnly);

  SampleSet samples;
  Rng rng(17);
  for (const char* box : {"X", "Y", "Z"}) {
    for (int i = 0; i < 50; ++i) samples.by_box[box].emplace_back(rng.real(0.1, 50.0));
  }
  LawReport report = check_functor_laws(alg, reg, samples);
  CHECK(report.ok());
  CHECK(report.checks.size() == 4);  // three identity laws + one composable pair
}

TEST_CASE("a broken identity action is reported") {
  Registry reg;
  reg.add_box("X", {"a"}, {"b"});
  Algebra bad;
  bad.name = "bad";
  bad.action = [](const MultiArrow& ma, const std::vector<Value>& args) {
    double total = 0.0;
    for (const auto& v : args) total += std::get<double>(v);
    if (is_identity(ma.body)) total += 1.0;
    return Value{total};
  };
  bad.equal = [](const BoxShape&, const Value& a, const Value& b) {
    return std::fabs(std::get<double>(a) - std::get<double>(b)) <= 1e-12;
  };
  SampleSet samples;
  samples.by_box["X"] = {Value{1.0}};
  LawReport report = check_functor_laws(bad, reg, samples);
  CHECK_FALSE(report.ok());
  REQUIRE(report.checks.size() == 1);
  CHECK(report.checks.front().law == "identity");
}

TEST_CASE("an empty registry passes vacuously") {
  Registry reg;
  LawReport report = check_functor_laws(mass_algebra({}, MassVariant::SumOnly), reg, {});
  CHECK(report.ok());
  CHECK(report.checks.empty());
}

TEST_CASE("the two-digit numbers adder computes all sixteen cases") {
  Registry reg;
  MultiArrow adder = make_adder(reg);
  std::vector<BoxBehavior> behaviors;
  for (const char* box : {"x1", "x2", "x3", "x4"}) {
    behaviors.push_back(behavior_from_table(half_adder_table(box)));
  }
  BoxBehavior composite = composite_behavior(adder, behaviors);

  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      PortValuation in{{"a0", std::to_string(a & 1)},
                       {"a1", std::to_string((a >> 1) & 1)},
                       {"b0", std::to_string(b & 1)},
                       {"b1", std::to_string((b >> 1) & 1)}};
      PortValuation out = composite(in);
      const int sum = a + b;
      CHECK(out.at("c0") == std::to_string(sum & 1));
      CHECK(out.at("c1") == std::to_string((sum >> 1) & 1));
      CHECK(out.at("c2") == std::to_string((sum >> 2) & 1));
    }
  }
}

TEST_CASE("dataflow on an identity arrow is the box behaviour") {
  Registry reg;
  reg.add_box("x1", {"x1_d0", "x1_d1"}, {"x1_c", "x1_s"});
  BoxBehavior box = behavior_from_table(half_adder_table("x1"));
  BoxBehavior through = composite_behavior(identity_multi_arrow(reg.box("x1")), {box});
  for (int d0 = 0; d0 <= 1; ++d0) {
    for (int d1 = 0; d1 <= 1; ++d1) {
      PortValuation in{{"x1_d0", std::to_string(d0)}, {"x1_d1", std::to_string(d1)}};
      CHECK(through(in) == box(in));
    }
  }
}

TEST_CASE("composing first and evaluating stepwise agree on the adder") {
  Registry reg;
  MultiArrow adder = make_adder(reg);
  // A relabeling box W around Y: inputs wa*, wb* feed Y's inputs, Y's
  // outputs feed wc*.
  reg.add_box("W", {"wa0", "wa1", "wb0", "wb1"}, {"wc0", "wc1", "wc2"});
  const WiringArrow& rewire = reg.add_arrow(
      "rewire", {"Y"}, "W",
      {link("r1", "a0", "wa0"), link("r2", "a1", "wa1"), link("r3", "b0", "wb0"),
       link("r4", "b1", "wb1")},
      {link("r5", "wc0", "c0"), link("r6", "wc1", "c1"), link("r7", "wc2", "c2")});

  std::vector<BoxBehavior> behaviors;
  for (const char* box : {"x1", "x2", "x3", "x4"}) {
    behaviors.push_back(behavior_from_table(half_adder_table(box)));
  }

  // Compose first, then evaluate.
  MultiArrow flattened{"flat", adder.domains, reg.box("W"),
                       compose(to_mat(rewire), adder.body)};
  BoxBehavior composed_first = composite_behavior(flattened, behaviors);

  // Evaluate the adder, then feed its behaviour to the rewiring arrow.
  BoxBehavior inner = composite_behavior(adder, behaviors);
  MultiArrow outer{"rewire", {reg.box("Y")}, reg.box("W"), to_mat(rewire)};
  BoxBehavior stepwise = composite_behavior(outer, {inner});

  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      PortValuation in{{"wa0", std::to_string(a & 1)},
                       {"wa1", std::to_string((a >> 1) & 1)},
                       {"wb0", std::to_string(b & 1)},
                       {"wb1", std::to_string((b >> 1) & 1)}};
      CHECK(composed_first(in) == stepwise(in));
    }
  }
}

TEST_CASE("dataflow rejects wiring it cannot evaluate") {
  SUBCASE("feedback around a constituent is a dependency cycle") {
    Registry reg;
    make_zoom_chain(reg);
    MultiArrow ma{"m", {reg.box("X")}, reg.box("Y"), to_mat(reg.arrow("theta1"))};
    BoxBehavior dummy = [](const PortValuation&) { return PortValuation{}; };
    CHECK_THROWS_AS(composite_behavior(ma, {dummy}), Error);
    try {
      composite_behavior(ma, {dummy});
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::CyclicDependency);
    }
  }

  SUBCASE("an unconnected constituent input needs a default") {
    Registry reg;
    reg.add_box("A", {"a_in"}, {"a_out"});
    reg.add_box("C", {"c_in"}, {"c_out"});
    const WiringArrow& v =
        reg.add_arrow("v", {"A"}, "C", {}, {link("v1", "c_out", "a_out")});
    MultiArrow ma = multi_arrow("mv", {reg.box("A")}, reg.box("C"), v);
    BoxBehavior constant = [](const PortValuation&) {
      return PortValuation{{"a_out", "7"}};
    };
    try {
      composite_behavior(ma, {constant});
      FAIL("expected UnderdeterminedPort");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::UnderdeterminedPort);
    }
    BoxBehavior with_default = composite_behavior(ma, {constant}, {{"a_in", "0"}});
    CHECK(with_default({{"c_in", "1"}}).at("c_out") == "7");
  }

  SUBCASE("converging links must agree") {
    Registry reg;
    reg.add_box("E", {"e1"}, {"e2"});
    reg.add_box("D", {"d1", "d2"}, {"d3"});
    const WiringArrow& v = reg.add_arrow(
        "v", {"E"}, "D", {link("c1", "e1", "d1"), link("c2", "e1", "d2")},
        {link("c3", "d3", "e2")});
    MultiArrow ma = multi_arrow("mv", {reg.box("E")}, reg.box("D"), v);
    BoxBehavior echo = [](const PortValuation& in) {
      return PortValuation{{"e2", in.at("e1")}};
    };
    BoxBehavior behavior = composite_behavior(ma, {echo});
    CHECK(behavior({{"d1", "1"}, {"d2", "1"}}).at("d3") == "1");
    CHECK_THROWS_AS(behavior({{"d1", "0"}, {"d2", "1"}}), Error);
  }

  SUBCASE("diverging links fan the value out") {
    Registry reg;
    reg.add_box("F", {"f1", "f2"}, {"f3"});
    reg.add_box("G", {"g1"}, {"g2"});
    const WiringArrow& v = reg.add_arrow(
        "v", {"F"}, "G", {link("d1", "f1", "g1"), link("d2", "f2", "g1")},
        {link("d3", "g2", "f3")});
    MultiArrow ma = multi_arrow("mv", {reg.box("F")}, reg.box("G"), v);
    BoxBehavior both = [](const PortValuation& in) {
      return PortValuation{{"f3", in.at("f1") + in.at("f2")}};
    };
    BoxBehavior behavior = composite_behavior(ma, {both});
    CHECK(behavior({{"g1", "1"}}).at("g2") == "11");
  }
}

TEST_CASE("dataflow algebra satisfies the functor laws on a pipe chain") {
  Registry reg;
  make_pipe_chain(reg);
  std::map<std::string, TruthTable> tables = {{"P", not_table("p1", "p2")},
                                              {"Q", not_table("q1", "q2")},
                                              {"R", not_table("r1", "r2")}};
  Algebra alg = dataflow_algebra(tables);
  SampleSet samples;
  for (const auto& [id, table] : tables) {
    samples.by_box[id].emplace_back(behavior_from_table(table));
  }
  LawReport report = check_functor_laws(alg, reg, samples);
  CHECK(report.ok());
  CHECK(report.checks.size() == 4);
}

TEST_CASE("instances evaluate registered usage functions") {
  Registry reg;
  make_pipe_chain(reg);
  Instance inst = instance_new(
      {{"P", {"u1", "u2"}}, {"Q", {"v1", "v2"}}, {"R", {"w1", "w2"}}},
      {{"n", {{{"u1"}, "v1"}, {{"u2"}, "v2"}}},
       {"m", {{{"v1"}, "w1"}, {{"v2"}, "w2"}}},
       {"n_then_m", {{{"u1"}, "w1"}, {{"u2"}, "w2"}}}});

  MultiArrow n{"n", {reg.box("P")}, reg.box("Q"), to_mat(reg.arrow("n"))};
  CHECK(instance_eval(inst, n, {"u1"}) == "v1");
  CHECK(instance_eval(inst, identity_multi_arrow(reg.box("P")), {"u2"}) == "u2");

  SUBCASE("arguments must come from the declared sets") {
    CHECK_THROWS_AS(instance_eval(inst, n, {"bogus"}), Error);
  }
  SUBCASE("unregistered arrows are reported") {
    MultiArrow other{"other", {reg.box("P")}, reg.box("Q"), to_mat(reg.arrow("n"))};
    try {
      instance_eval(inst, other, {"u1"});
      FAIL("expected UnknownArrow");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::UnknownArrow);
    }
  }
  SUBCASE("the instance is an algebra and obeys the laws") {
    Algebra alg = instance_algebra(inst);
    SampleSet samples;
    for (const auto& [box, tokens] : inst.usage_sets) {
      for (const auto& t : tokens) samples.by_box[box].emplace_back(t);
    }
    LawReport report = check_functor_laws(alg, reg, samples);
    CHECK(report.ok());
  }
  SUBCASE("a mismatched composite fails the composition law") {
    Instance broken = inst;
    broken.usage_fns["n_then_m"][{"u1"}] = "w2";
    Algebra alg = instance_algebra(broken);
    SampleSet samples;
    samples.by_box["P"] = {Value{std::string("u1")}};
    LawReport report = check_functor_laws(alg, reg, samples);
    CHECK_FALSE(report.ok());
  }
  SUBCASE("a missing composite action aborts the check") {
    Instance partial = inst;
    partial.usage_fns.erase("n_then_m");
    Algebra alg = instance_algebra(partial);
    SampleSet samples;
    samples.by_box["P"] = {Value{std::string("u1")}};
    try {
      check_functor_laws(alg, reg, samples);
      FAIL("expected MissingAction");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::MissingAction);
    }
  }
}

TEST_CASE("singleton usage sets force the evaluation") {
  Registry reg;
  reg.add_box("X1", {"a"}, {"b"});
  reg.add_box("X2", {"c"}, {"d"});
  reg.add_box("Y", {"p", "q"}, {"r"});
  const WiringArrow& w = reg.add_arrow("w", {"X1", "X2"}, "Y",
                                       {link("s1", "a", "p"), link("s2", "c", "q")}, {});
  MultiArrow ma = multi_arrow("w", {reg.box("X1"), reg.box("X2")}, reg.box("Y"), w);
  Instance inst = instance_new({{"X1", {"u1"}}, {"X2", {"u2"}}, {"Y", {"u3"}}},
                               {{"w", {{{"u1", "u2"}, "u3"}}}});
  CHECK(instance_eval(inst, ma, {"u1", "u2"}) == "u3");
}

TEST_CASE("a three-row join-style instance") {
  Registry reg;
  reg.add_box("T1", {"t1_k"}, {"t1_v"});
  reg.add_box("T2", {"t2_k"}, {"t2_v"});
  reg.add_box("J", {"j1", "j2"}, {"j3"});
  const WiringArrow& w = reg.add_arrow(
      "join", {"T1", "T2"}, "J",
      {link("j_a", "t1_k", "j1"), link("j_b", "t2_k", "j2")},
      {link("j_c", "j3", "t1_v")});
  MultiArrow ma = multi_arrow("join", {reg.box("T1"), reg.box("T2")}, reg.box("J"), w);

  // Rows of the joined table, written out by hand.
  Instance inst = instance_new(
      {{"T1", {"r1", "r2", "r3"}}, {"T2", {"s1", "s2", "s3"}}, {"J", {"r1s1", "r2s2", "r3s3"}}},
      {{"join",
        {{{"r1", "s1"}, "r1s1"}, {{"r2", "s2"}, "r2s2"}, {{"r3", "s3"}, "r3s3"}}}});
  CHECK(instance_eval(inst, ma, {"r2", "s2"}) == "r2s2");
  CHECK_THROWS_AS(instance_eval(inst, ma, {"r1", "s2"}), Error);
}
