#include "fa/laws.hpp"

#include <string>

#include "fa/generate.hpp"

namespace fa {

namespace {

const std::vector<std::string> kAlphabet = {"a", "b", "c", "d", "e"};

void expect(SuiteResult& r, bool condition, const std::string& what) {
  ++r.checked;
  if (!condition) r.failures.push_back(what);
}

PortIndex fresh_index(Rng& rng, int& counter, int max_size, const char* stem) {
  std::vector<std::string> ports;
  int n = rng.below(max_size + 1);
  for (int i = 0; i < n; ++i) ports.push_back(stem + std::to_string(counter++));
  return PortIndex::of(std::move(ports));
}

}  // namespace

SuiteResult semiring_axiom_suite(std::uint64_t seed, int samples) {
  SuiteResult r;
  r.name = "semiring-axioms";
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) {
    Lang a = random_lang(rng, kAlphabet);
    Lang b = random_lang(rng, kAlphabet);
    Lang c = random_lang(rng, kAlphabet);
    const std::string at = " at sample " + std::to_string(i);
    expect(r, (a + b) + c == a + (b + c), "union associativity" + at);
    expect(r, a + b == b + a, "union commutativity" + at);
    expect(r, a + Lang::zero() == a, "union unit" + at);
    expect(r, (a * b) * c == a * (b * c), "product associativity" + at);
    expect(r, a * Lang::one() == a && Lang::one() * a == a, "product unit" + at);
    expect(r, (a * Lang::zero()).is_zero() && (Lang::zero() * a).is_zero(),
           "product annihilation" + at);
    expect(r, a * (b + c) == a * b + a * c, "left distributivity" + at);
    expect(r, (b + c) * a == b * a + c * a, "right distributivity" + at);
  }
  return r;
}

SuiteResult matrix_law_suite(std::uint64_t seed, int samples) {
  SuiteResult r;
  r.name = "matrix-laws";
  Rng rng(seed);
  int counter = 0;
  for (int i = 0; i < samples; ++i) {
    PortIndex pi = fresh_index(rng, counter, 3, "i");
    PortIndex pj = fresh_index(rng, counter, 3, "j");
    PortIndex pk = fresh_index(rng, counter, 3, "k");
    PortIndex pl = fresh_index(rng, counter, 3, "l");
    SemiringMatrix a = random_matrix(rng, pi, pj, kAlphabet);
    SemiringMatrix b = random_matrix(rng, pj, pk, kAlphabet);
    SemiringMatrix b2 = random_matrix(rng, pj, pk, kAlphabet);
    SemiringMatrix c = random_matrix(rng, pk, pl, kAlphabet);
    const std::string at = " at sample " + std::to_string(i);
    expect(r, (a * b) * c == a * (b * c), "product associativity" + at);
    expect(r,
           SemiringMatrix::identity(pi) * a == a &&
               a * SemiringMatrix::identity(pj) == a,
           "identity neutrality" + at);
    expect(r, a * entrywise_union(b, b2) == entrywise_union(a * b, a * b2),
           "distributivity over entrywise union" + at);
    expect(r, matrix_from_fn(matrix_to_fn(a), a.rows(), a.cols()) == a,
           "function/matrix round trip" + at);
  }
  return r;
}

SuiteResult identity_law_suite(std::uint64_t seed, int samples) {
  SuiteResult r;
  r.name = "identity-law";
  ArrowFactory factory(seed);
  for (int i = 0; i < samples; ++i) {
    const BoxShape& dom = factory.fresh_box();
    const BoxShape& cod = factory.fresh_box();
    MatArrow m = to_mat(factory.random_arrow(dom, cod));
    if (factory.rng().chance(0.25)) {
      // Also exercise arrows whose entries are longer words.
      const BoxShape& far = factory.fresh_box();
      m = compose(to_mat(factory.random_arrow(cod, far)), m);
    }
    MatArrow id_dom = to_mat(arrow_identity(m.domain));
    MatArrow id_cod = to_mat(arrow_identity(m.codomain));
    const std::string at = " at sample " + std::to_string(i);
    expect(r, compose(m, id_dom) == m, "m after identity" + at);
    expect(r, compose(id_cod, m) == m, "identity after m" + at);
  }
  return r;
}

SuiteResult associativity_suite(std::uint64_t seed, int samples) {
  SuiteResult r;
  r.name = "composition-associativity";
  ArrowFactory factory(seed);
  for (int i = 0; i < samples; ++i) {
    const BoxShape& w = factory.fresh_box();
    // Some chains start with an endomorphism or return to their first box:
    // the cases where the middle index of the composition formula stacks one
    // port set twice.
    const BoxShape& x = factory.rng().chance(0.25) ? w : factory.fresh_box();
    const BoxShape& y = factory.rng().chance(0.25) ? w : factory.fresh_box();
    const BoxShape& z = factory.fresh_box();
    MatArrow n = to_mat(factory.random_arrow(w, x));
    MatArrow m = to_mat(factory.random_arrow(x, y));
    MatArrow p = to_mat(factory.random_arrow(y, z));
    expect(r, compose(p, compose(m, n)) == compose(compose(p, m), n),
           "associativity at sample " + std::to_string(i));
  }
  return r;
}

SuiteResult tensor_law_suite(std::uint64_t seed, int samples) {
  SuiteResult r;
  r.name = "tensor-laws";
  ArrowFactory factory(seed);
  const BoxShape unit = unit_box();
  for (int i = 0; i < samples; ++i) {
    const BoxShape& x1 = factory.fresh_box();
    const BoxShape& x2 = factory.fresh_box();
    const BoxShape& x3 = factory.fresh_box();
    const std::string at = " at sample " + std::to_string(i);
    expect(r, tensor(tensor(x1, x2), x3) == tensor(x1, tensor(x2, x3)),
           "tensor associativity" + at);
    expect(r, tensor(unit, x1) == x1 && tensor(x1, unit) == x1, "tensor unit" + at);
    expect(r, tensor(x1, x2) == tensor(x2, x1), "tensor commutativity" + at);
    expect(r, tensor(x1, x1) == x1, "tensor idempotence" + at);

    const WiringArrow& t1 = factory.random_arrow(x1, x2);
    const WiringArrow& t2 = factory.random_arrow(x3, factory.fresh_box());
    expect(r, tensor(t1, arrow_identity(unit)) == t1, "arrow tensor unit" + at);
    expect(r, tensor(t1, t1) == t1, "arrow tensor idempotence" + at);
    expect(r, tensor(t1, t2) == tensor(t2, t1), "arrow tensor commutativity" + at);
    expect(r, to_mat(tensor(t1, t2)) == tensor(to_mat(t1), to_mat(t2)),
           "tensor commutes with the matrix view" + at);
  }
  return r;
}

SuiteResult interchange_suite(std::uint64_t seed, int samples) {
  SuiteResult r;
  r.name = "interchange";
  ArrowFactory factory(seed);
  for (int i = 0; i < samples; ++i) {
    const BoxShape& x1 = factory.fresh_box();
    const BoxShape& y1 = factory.fresh_box();
    const BoxShape& z1 = factory.fresh_box();
    const BoxShape& x2 = factory.fresh_box();
    const BoxShape& y2 = factory.fresh_box();
    const BoxShape& z2 = factory.fresh_box();
    MatArrow t1 = to_mat(factory.random_arrow(x1, y1));
    MatArrow a1 = to_mat(factory.random_arrow(y1, z1));
    MatArrow t2 = to_mat(factory.random_arrow(x2, y2));
    MatArrow a2 = to_mat(factory.random_arrow(y2, z2));
    expect(r,
           tensor(compose(a1, t1), compose(a2, t2)) ==
               compose(tensor(a1, a2), tensor(t1, t2)),
           "interchange at sample " + std::to_string(i));
  }
  return r;
}

SuiteResult roundtrip_suite(std::uint64_t seed, int samples) {
  SuiteResult r;
  r.name = "matrix-function-roundtrip";
  ArrowFactory factory(seed);
  for (int i = 0; i < samples; ++i) {
    const BoxShape& dom = factory.fresh_box();
    const BoxShape& cod = factory.fresh_box();
    const WiringArrow& theta = factory.random_arrow(dom, cod);
    MatArrow m = to_mat(theta);
    const std::string at = " at sample " + std::to_string(i);
    expect(r, from_mat(m, theta.id) == theta, "from_mat(to_mat(arrow))" + at);
    expect(r, to_mat(from_mat(m)) == m, "to_mat(from_mat(matrix))" + at);
  }
  return r;
}

}  // namespace fa
