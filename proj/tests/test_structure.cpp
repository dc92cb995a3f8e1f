#include <doctest.h>

#include "fa/error.hpp"
#include "fa/generate.hpp"
#include "fa/structure.hpp"
#include "test_helpers.hpp"

using namespace fa;
using fa::test::lang;
using fa::test::link;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::ParseError;
}

}  // namespace

TEST_CASE("box registration enforces the port rules") {
  Registry reg;
  const BoxShape& x = reg.add_box("X", {"a", "b"}, {"c", "d"});
  CHECK(x.in_ports == std::set<std::string>{"a", "b"});

  const BoxShape& unit = reg.add_box("U", {}, {});
  CHECK(unit.is_unit());
  CHECK(unit == unit_box());

  CHECK(kind_of([&] { reg.add_box("B", {"p"}, {"p"}); }) == ErrorKind::InOutOverlap);
  CHECK(kind_of([&] { reg.add_box("C", {"a"}, {"q"}); }) == ErrorKind::PortCollision);
  CHECK(kind_of([&] { reg.add_box("X", {"n"}, {"m"}); }) == ErrorKind::DuplicateId);
  CHECK(kind_of([&] { reg.add_box("D", {"bad.port"}, {}); }) == ErrorKind::BadIdentifier);
}

TEST_CASE("the box-Z-composed-of-X arrow validates") {
  Registry reg;
  reg.add_box("X", {"a", "b"}, {"c", "d"});
  reg.add_box("Z", {"i", "j"}, {"k", "l"});
  const WiringArrow& theta = reg.add_arrow(
      "theta", {"X"}, "Z",
      {link("l1", "a", "c"), link("l2", "b", "i"), link("l3", "b", "j")},
      {link("l4", "k", "c"), link("l5", "l", "d")});
  CHECK(theta.links_in.size() == 3);
  CHECK(theta.links_out.size() == 2);
  CHECK(theta.domain.id == "X");
  CHECK(theta.codomain.id == "Z");
}

TEST_CASE("arrow validation rejects each violation with its own error") {
  Registry reg;
  reg.add_box("X", {"a", "b"}, {"c", "d"});
  reg.add_box("Z", {"i", "j"}, {"k", "l"});
  reg.add_arrow("taken", {"X"}, "Z", {link("l1", "a", "c")}, {});

  SUBCASE("feedback around the codomain") {
    CHECK(kind_of([&] {
            reg.add_arrow("t", {"X"}, "Z", {link("f1", "i", "k")}, {});
          }) == ErrorKind::FeedbackProhibited);
    CHECK(kind_of([&] {
            reg.add_arrow("t", {"X"}, "Z", {}, {link("f2", "i", "k")});
          }) == ErrorKind::FeedbackProhibited);
  }
  SUBCASE("passthrough across the codomain") {
    CHECK(kind_of([&] {
            reg.add_arrow("t", {"X"}, "Z", {}, {link("p1", "k", "i")});
          }) == ErrorKind::PassthroughProhibited);
    CHECK(kind_of([&] {
            reg.add_arrow("t", {"X"}, "Z", {link("p2", "k", "i")}, {});
          }) == ErrorKind::PassthroughProhibited);
  }
  SUBCASE("label reuse inside one arrow (R2)") {
    CHECK(kind_of([&] {
            reg.add_arrow("t", {"X"}, "Z", {link("m1", "a", "c")},
                          {link("m1", "k", "c")});
          }) == ErrorKind::LabelCollision);
  }
  SUBCASE("label reuse across arrows (R3)") {
    CHECK(kind_of([&] {
            reg.add_arrow("t", {"X"}, "Z", {link("l1", "b", "c")}, {});
          }) == ErrorKind::LabelCollision);
  }
  SUBCASE("unknown and misplaced ports") {
    CHECK(kind_of([&] {
            reg.add_arrow("t", {"X"}, "Z", {link("u1", "a", "nope")}, {});
          }) == ErrorKind::UnknownPort);
    // target is an output of the domain: not a legal input-link target
    CHECK(kind_of([&] {
            reg.add_arrow("t", {"X"}, "Z", {link("u2", "c", "d")}, {});
          }) == ErrorKind::BadEndpoint);
    // source of an output link must be an output of the domain
    CHECK(kind_of([&] {
            reg.add_arrow("t", {"X"}, "Z", {}, {link("u3", "k", "a")});
          }) == ErrorKind::BadEndpoint);
  }
  SUBCASE("unknown boxes") {
    CHECK(kind_of([&] { reg.add_arrow("t", {"W"}, "Z", {}, {}); }) ==
          ErrorKind::UnknownBox);
  }
}

TEST_CASE("identity arrows connect every port to itself") {
  Registry reg;
  const BoxShape& x = reg.add_box("X", {"a", "b"}, {"c", "d"});
  WiringArrow id = arrow_identity(x);
  CHECK(id.links_in.size() == 2);
  CHECK(id.links_out.size() == 2);
  for (const Link& l : id.links_in) CHECK(l.target == l.source);
  for (const Link& l : id.links_out) CHECK(l.target == l.source);
  CHECK(id.links_in.front().label == Word("X_lin_a"));

  CHECK(arrow_identity(unit_box()).links_in.empty());
  CHECK(arrow_identity(unit_box()).links_out.empty());

  // Matrix form: the empty word on the diagonal, empty on the rest.
  MatArrow m = to_mat(id);
  PortIndex in = in_index(x);
  PortIndex out = out_index(x);
  SemiringMatrix expected_in = block(
      {{SemiringMatrix::identity(in), SemiringMatrix::zero(in, out)}}, {in}, {in, out});
  CHECK(m.m_in == expected_in);
  CHECK(m.m_out == SemiringMatrix::identity(out));
}

TEST_CASE("matrix form of the zoom chain matches the worked displays") {
  Registry reg;
  fa::test::make_zoom_chain(reg);

  MatArrow n = to_mat(reg.arrow("theta1"));
  CHECK(n.m_in.rows() == PortIndex::of({"a", "b"}));
  CHECK(n.m_in.cols() == PortIndex::of({"e", "f", "c", "d"}));
  CHECK(n.m_in.at("a", "c") == lang({"l5"}));
  CHECK(n.m_in.at("b", "e") == lang({"l6"}));
  CHECK(n.m_in.cells().size() == 2);
  CHECK(n.m_out.at("g", "c") == lang({"l3"}));
  CHECK(n.m_out.at("h", "d") == lang({"l4"}));

  MatArrow m = to_mat(reg.arrow("theta"));
  CHECK(m.m_out.at("k", "g") == lang({"l1"}));
  CHECK(m.m_out.at("l", "h") == lang({"l2"}));
  CHECK(m.m_in.at("e", "i") == lang({"l7"}));
  CHECK(m.m_in.at("e", "j") == lang({"l8"}));
  CHECK(m.m_in.at("f", "h") == lang({"l9"}));
}

TEST_CASE("composition reproduces the worked zoom") {
  Registry reg;
  fa::test::make_zoom_chain(reg);
  MatArrow n = to_mat(reg.arrow("theta1"));
  MatArrow m = to_mat(reg.arrow("theta"));

  MatArrow o = compose(m, n);
  CHECK(o.domain.id == "X");
  CHECK(o.codomain.id == "Z");

  CHECK(o.m_out.at("k", "c") == lang({"l1.l3"}));
  CHECK(o.m_out.at("l", "d") == lang({"l2.l4"}));
  CHECK(o.m_out.cells().size() == 2);

  CHECK(o.m_in.cols() == PortIndex::of({"i", "j", "c", "d"}));
  CHECK(o.m_in.at("a", "c") == lang({"l5"}));
  CHECK(o.m_in.at("b", "i") == lang({"l6.l7"}));
  CHECK(o.m_in.at("b", "j") == lang({"l6.l8"}));
  CHECK(o.m_in.cells().size() == 3);

  // The l9 wire into the unconnected port f vanishes.
  for (const SemiringMatrix* mat : {&o.m_in, &o.m_out}) {
    for (const auto& [_, words] : mat->cells()) {
      for (const Word& w : words.words()) {
        for (const auto& atom : w.atoms()) CHECK(atom != "l9");
      }
    }
  }
}

TEST_CASE("the stacked block matrices of the composition formula assemble") {
  Registry reg;
  fa::test::make_zoom_chain(reg);
  PortIndex z_in = in_index(reg.box("Z"));
  PortIndex y_out = out_index(reg.box("Y"));
  PortIndex x_out = out_index(reg.box("X"));

  SemiringMatrix n_out = to_mat(reg.arrow("theta1")).m_out;
  SemiringMatrix stacked = block({{SemiringMatrix::identity(z_in), SemiringMatrix::zero(z_in, x_out)},
                                  {SemiringMatrix::zero(y_out, z_in), n_out},
                                  {SemiringMatrix::zero(x_out, z_in), SemiringMatrix::identity(x_out)}},
                                 {z_in, y_out, x_out}, {z_in, x_out});

  CHECK(stacked.rows() == PortIndex::of({"i", "j", "g", "h", "c", "d"}));
  CHECK(stacked.cols() == PortIndex::of({"i", "j", "c", "d"}));
  SemiringMatrix expected(stacked.rows(), stacked.cols());
  expected.set("i", "i", Lang::one());
  expected.set("j", "j", Lang::one());
  expected.set("g", "c", lang({"l3"}));
  expected.set("h", "d", lang({"l4"}));
  expected.set("c", "c", Lang::one());
  expected.set("d", "d", Lang::one());
  CHECK(stacked == expected);
}

TEST_CASE("arrow validation is total: accept or reject with a named rule") {
  ArrowFactory factory(99);
  Rng& rng = factory.rng();
  Registry& reg = factory.registry();
  const BoxShape& dom = factory.fresh_box_nonempty();
  const BoxShape& cod = factory.fresh_box_nonempty();
  std::vector<std::string> all_ports;
  for (const BoxShape* b : {&dom, &cod}) {
    all_ports.insert(all_ports.end(), b->in_ports.begin(), b->in_ports.end());
    all_ports.insert(all_ports.end(), b->out_ports.begin(), b->out_ports.end());
  }
  all_ports.push_back("nowhere");

  int accepted = 0, rejected = 0;
  for (int i = 0; i < 300; ++i) {
    std::vector<Link> links_in, links_out;
    for (int l = rng.below(3); l >= 0; --l) {
      Link random{Word("z" + std::to_string(i) + "_" + std::to_string(l)),
                  rng.pick(all_ports), rng.pick(all_ports)};
      (rng.chance(0.5) ? links_in : links_out).push_back(random);
    }
    try {
      const WiringArrow& arrow =
          reg.add_arrow("fz" + std::to_string(i), {dom.id}, cod.id, links_in, links_out);
      ++accepted;
      for (const Link& l : arrow.links_in) {
        CHECK(dom.in_ports.count(l.target) == 1);
        CHECK((dom.out_ports.count(l.source) || cod.in_ports.count(l.source)));
      }
      for (const Link& l : arrow.links_out) {
        CHECK(cod.out_ports.count(l.target) == 1);
        CHECK(dom.out_ports.count(l.source) == 1);
      }
    } catch (const Error& e) {
      ++rejected;
      const bool named = e.kind() == ErrorKind::FeedbackProhibited ||
                         e.kind() == ErrorKind::PassthroughProhibited ||
                         e.kind() == ErrorKind::UnknownPort ||
                         e.kind() == ErrorKind::BadEndpoint ||
                         e.kind() == ErrorKind::LabelCollision;
      CHECK(named);
    }
  }
  CHECK(accepted > 0);
  CHECK(rejected > 0);
}

TEST_CASE("composing with identities is exact") {
  Registry reg;
  fa::test::make_zoom_chain(reg);
  MatArrow n = to_mat(reg.arrow("theta1"));
  MatArrow m = to_mat(reg.arrow("theta"));
  MatArrow id_x = to_mat(arrow_identity(reg.box("X")));
  MatArrow id_y = to_mat(arrow_identity(reg.box("Y")));

  CHECK(compose(n, id_x) == n);
  CHECK(compose(id_y, n) == n);
  CHECK(compose(m, id_y) == m);
  CHECK(is_identity(compose(id_y, id_y)));
  CHECK(kind_of([&] { compose(n, m); }) == ErrorKind::CodomainMismatch);
}

TEST_CASE("box tensor is a strict symmetric monoidal product") {
  Registry reg;
  const BoxShape& x1 = reg.add_box("X1", {"a"}, {"b"});
  const BoxShape& x2 = reg.add_box("X2", {"c"}, {"d"});
  const BoxShape& x3 = reg.add_box("X3", {"e"}, {"f"});

  BoxShape t = tensor(x1, x2);
  CHECK(t.in_ports == std::set<std::string>{"a", "c"});
  CHECK(t.out_ports == std::set<std::string>{"b", "d"});

  CHECK(tensor(unit_box(), x1) == x1);
  CHECK(tensor(x1, unit_box()) == x1);
  CHECK(tensor(x1, x1) == x1);
  CHECK(tensor(x1, x1).id == "X1");
  CHECK(tensor(tensor(x1, x2), x3) == tensor(x1, tensor(x2, x3)));
  CHECK(tensor(x1, x2) == tensor(x2, x1));
}

TEST_CASE("arrow tensor unions the link maps") {
  Registry reg;
  const BoxShape& x1 = reg.add_box("X1", {"a"}, {"b"});
  const BoxShape& y1 = reg.add_box("Y1", {"c"}, {"d"});
  const BoxShape& x2 = reg.add_box("X2", {"e"}, {"f"});
  const BoxShape& y2 = reg.add_box("Y2", {"g"}, {"h"});
  const WiringArrow& t1 =
      reg.add_arrow("t1", {"X1"}, "Y1", {link("m1", "a", "c")}, {link("m2", "d", "b")});
  const WiringArrow& t2 =
      reg.add_arrow("t2", {"X2"}, "Y2", {link("m3", "e", "g")}, {link("m4", "h", "f")});

  WiringArrow both = tensor(t1, t2);
  CHECK(both.links_in.size() == 2);
  CHECK(both.links_out.size() == 2);
  CHECK(both.domain == tensor(x1, x2));
  CHECK(both.codomain == tensor(y1, y2));

  CHECK(tensor(t1, arrow_identity(unit_box())) == t1);
  CHECK(tensor(t1, t1) == t1);
  CHECK(to_mat(both) == tensor(to_mat(t1), to_mat(t2)));
}

TEST_CASE("matrix to function form and back") {
  Registry reg;
  fa::test::make_zoom_chain(reg);
  const WiringArrow& theta1 = reg.arrow("theta1");

  SUBCASE("atomic arrows round-trip exactly") {
    CHECK(from_mat(to_mat(theta1), "theta1") == theta1);
  }
  SUBCASE("identity arrows round-trip through the epsilon diagonal") {
    WiringArrow id = arrow_identity(reg.box("X"));
    CHECK(from_mat(to_mat(id), id.id) == id);
  }
  SUBCASE("composed matrices yield links labeled by their provenance words") {
    MatArrow o = compose(to_mat(reg.arrow("theta")), to_mat(theta1));
    WiringArrow w = from_mat(o, "zoomed");
    std::set<std::string> labels;
    for (const Link& l : w.links_in) labels.insert(l.label.str());
    for (const Link& l : w.links_out) labels.insert(l.label.str());
    CHECK(labels == std::set<std::string>{"l1.l3", "l2.l4", "l5", "l6.l7", "l6.l8"});
    CHECK(to_mat(w) == o);
  }
  SUBCASE("self-connecting links round-trip up to their labels") {
    Registry reg2;
    reg2.add_box("E", {"e1"}, {"e2"});
    // A legal endomorphism wiring the composite input straight to the
    // constituent's same input port.
    const WiringArrow& loop =
        reg2.add_arrow("loop", {"E"}, "E", {fa::test::link("s1", "e1", "e1")}, {});
    MatArrow m = to_mat(loop);
    CHECK(m.m_in.at("e1", "e1") == Lang::one());
    WiringArrow back = from_mat(m, "loop");
    CHECK(back.links_in.front().label == Word("E_lin_e1"));
    CHECK(to_mat(back) == m);
  }
  SUBCASE("all-empty matrices yield an arrow without links") {
    MatArrow empty{reg.box("X"), reg.box("Z"),
                   SemiringMatrix(in_index(reg.box("X")),
                                  PortIndex::concat({in_index(reg.box("Z")),
                                                     out_index(reg.box("X"))})),
                   SemiringMatrix(out_index(reg.box("Z")), out_index(reg.box("X")))};
    WiringArrow w = from_mat(empty);
    CHECK(w.links_in.empty());
    CHECK(w.links_out.empty());
  }
}

TEST_CASE("multi-arrows record the domain decomposition") {
  Registry reg;
  const BoxShape& x1 = reg.add_box("X1", {"a"}, {"b"});
  const BoxShape& x2 = reg.add_box("X2", {"c"}, {"d"});
  const BoxShape& y = reg.add_box("Y", {"p", "q"}, {"r"});
  const WiringArrow& w = reg.add_arrow(
      "w", {"X1", "X2"}, "Y", {link("m1", "a", "p"), link("m2", "c", "q")},
      {link("m3", "r", "d")});

  MultiArrow ma = multi_arrow("m", {x1, x2}, y, w);
  CHECK(ma.domains.size() == 2);
  CHECK(ma.body.domain == tensor(x1, x2));

  SUBCASE("one domain reduces to a plain arrow") {
    Registry reg2;
    fa::test::make_zoom_chain(reg2);
    MultiArrow plain = multi_arrow("p", {reg2.box("X")}, reg2.box("Y"), reg2.arrow("theta1"));
    CHECK(plain.body == to_mat(reg2.arrow("theta1")));
  }
  SUBCASE("zero domains mean the unit box") {
    const BoxShape& sink = reg.add_box("S", {}, {"s"});
    const WiringArrow& constant = reg.add_arrow("c", {}, "S", {}, {});
    MultiArrow nullary = multi_arrow("n", {}, sink, constant);
    CHECK(nullary.domains.empty());
    CHECK(nullary.body.domain.is_unit());
  }
  SUBCASE("the wiring must match the tensor of the domains") {
    CHECK(kind_of([&] { multi_arrow("bad", {x1}, y, w); }) == ErrorKind::DomainMismatch);
  }
  SUBCASE("symmetries permute the domains and keep the body") {
    MultiArrow swapped = symmetry_apply(ma, {1, 0});
    CHECK(swapped.domains[0].id == "X2");
    CHECK(swapped.domains[1].id == "X1");
    CHECK(swapped.body == ma.body);
    MultiArrow back = symmetry_apply(swapped, {1, 0});
    CHECK(back.domains[0].id == "X1");
    CHECK(symmetry_apply(ma, {0, 1}).domains[0].id == "X1");
    CHECK(kind_of([&] { symmetry_apply(ma, {0, 0}); }) == ErrorKind::BadPermutation);
    CHECK(kind_of([&] { symmetry_apply(ma, {0}); }) == ErrorKind::BadPermutation);
  }
}

TEST_CASE("registry utilities") {
  Registry reg;
  fa::test::make_zoom_chain(reg);

  SUBCASE("decompose splits tensor boxes into registered constituents") {
    BoxShape t = tensor(reg.box("X"), reg.box("Z"));
    auto parts = reg.decompose(t);
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].id == "X");
    CHECK(parts[1].id == "Z");
    CHECK(reg.decompose(reg.box("Y")).size() == 1);
  }

  SUBCASE("clone_box renames ports deterministically") {
    const BoxShape& copy = reg.clone_box("X", "X2");
    CHECK(copy.in_ports == std::set<std::string>{"X2_a", "X2_b"});
    BoxShape stacked = tensor(reg.box("X"), copy);
    CHECK(stacked.in_ports.size() == 4);
  }

  SUBCASE("merging a colliding registry freshens ports and labels") {
    Registry other;
    fa::test::make_zoom_chain(other);
    reg.merge_renamed(other);
    CHECK(reg.boxes().size() == 6);
    CHECK(reg.arrows().size() == 4);
    CHECK(reg.has_box("X_m"));
    const WiringArrow& merged = reg.arrow("theta1_m");
    CHECK(merged.links_in.size() == 2);
    for (const Link& l : merged.links_in) {
      CHECK(reg.box("X_m").owns_port(l.target));
    }
  }
}
