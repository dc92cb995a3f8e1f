#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fa/matrix.hpp"
#include "fa/semiring.hpp"

namespace fa {

// A box: a named interface with disjoint sets of input and output ports.
// Boxes are identified by their port sets; because registered boxes have
// pairwise-disjoint ports (rule R1), two distinct registered boxes never
// compare equal. The id is a handle for display and lookup only. Port-less
// boxes are all identified with the tensor unit.
struct BoxShape {
  std::string id;
  std::set<std::string> in_ports;
  std::set<std::string> out_ports;

  bool is_unit() const noexcept { return in_ports.empty() && out_ports.empty(); }
  bool owns_port(const std::string& p) const {
    return in_ports.count(p) > 0 || out_ports.count(p) > 0;
  }

  friend bool operator==(const BoxShape& a, const BoxShape& b) {
    return a.in_ports == b.in_ports && a.out_ports == b.out_ports;
  }
};

// The tensor unit: the box without ports.
BoxShape unit_box();

// Tensor of boxes: the union of their port sets. Stacking a box with itself
// (or with the unit) returns the box unchanged.
BoxShape tensor(const BoxShape& a, const BoxShape& b);

PortIndex in_index(const BoxShape& box);
PortIndex out_index(const BoxShape& box);

// One wire of an arrow b -> a. For an input link the target is an input port
// of b and the source is an output port of b or an input port of a; for an
// output link the target is an output port of a and the source is an output
// port of b. The label is a word: a single atom for hand-authored wires, a
// longer word for wires that came out of a composition and keep their
// provenance.
struct Link {
  Word label;
  std::string target;
  std::string source;

  friend bool operator==(const Link&, const Link&) = default;
  friend auto operator<=>(const Link&, const Link&) = default;
};

// A morphism in function form: how the codomain box is internally built from
// the domain box. Link lists are kept sorted by label; labels are unique
// across both lists (rule R2).
struct WiringArrow {
  std::string id;
  BoxShape domain;
  BoxShape codomain;
  std::vector<Link> links_in;
  std::vector<Link> links_out;

  friend bool operator==(const WiringArrow& a, const WiringArrow& b) {
    return a.domain == b.domain && a.codomain == b.codomain &&
           a.links_in == b.links_in && a.links_out == b.links_out;
  }
};

// The identity arrow on a box: one link per port connecting the port to
// itself, with fresh labels "<boxid>_lin_<port>" / "<boxid>_lout_<port>".
// Self-connecting links denote invisible wires: their matrix form is the
// empty word, so composing with the identity is exact.
WiringArrow arrow_identity(const BoxShape& box);

// Tensor of arrows: the union of their link maps. Requires no label clashes
// between distinct arrows (guaranteed by R2/R3 for registered arrows).
// Tensoring an arrow with itself or with an identity on the unit returns the
// arrow unchanged.
WiringArrow tensor(const WiringArrow& a, const WiringArrow& b);

// The same morphism in matrix form. For an arrow X -> Y:
//   m_in  has rows in(X) and columns in(Y) | out(X),
//   m_out has rows out(Y) and columns out(X);
// the entry at (target, source) is the set of label words of the links
// connecting source to target.
struct MatArrow {
  BoxShape domain;
  BoxShape codomain;
  SemiringMatrix m_in;
  SemiringMatrix m_out;

  friend bool operator==(const MatArrow& a, const MatArrow& b) {
    return a.domain == b.domain && a.codomain == b.codomain &&
           a.m_in == b.m_in && a.m_out == b.m_out;
  }
};

// Function form -> matrix form. Self-connecting links map to the empty word,
// everything else to its label word.
MatArrow to_mat(const WiringArrow& arrow);

// Matrix form -> function form: every word in an entry becomes one link
// labeled by that word (composite words stay opaque). Empty-word entries on
// the diagonal become identity-style links, so the round trip is exact for
// arrows produced by to_mat between distinct boxes and for identities.
WiringArrow from_mat(const MatArrow& m, std::string id = "");

// Arrow composition: for outer: Y -> Z and inner: X -> Y the composite
// X -> Z is
//   out = outer.m_out x inner.m_out
//   in  = inner.m_in x M' x N'
// where M' extends outer.m_in with an identity on out(X) and N' stacks an
// identity on in(Z), inner.m_out, and an identity on out(X). The middle
// index is group-tagged internally so the formula also works when X = Y and
// out(X) would otherwise appear twice.
MatArrow compose(const MatArrow& outer, const MatArrow& inner);

// Tensor in matrix form: indices are unions, entries are copied blockwise,
// cross entries are empty.
MatArrow tensor(const MatArrow& a, const MatArrow& b);

bool is_identity(const MatArrow& m);

// A multicategory arrow a_1, ..., a_n -> a: an arrow from the tensor of the
// ordered domains, remembering the decomposition. n = 0 means the domain is
// the unit box.
struct MultiArrow {
  std::string id;
  std::vector<BoxShape> domains;
  BoxShape codomain;
  MatArrow body;
};

MultiArrow multi_arrow(std::string id, std::vector<BoxShape> domains,
                       const BoxShape& codomain, const WiringArrow& wiring);
MultiArrow identity_multi_arrow(const BoxShape& box);

// Reorder the domain sequence by a permutation of 0..n-1. The braiding is an
// identity (the tensor is a literal union), so the body is unchanged.
MultiArrow symmetry_apply(const MultiArrow& ma, const std::vector<std::size_t>& sigma);

// The enforcement scope for the global disjointness rules: all boxes in one
// registry have pairwise-disjoint port sets (R1) and all arrows have
// pairwise-disjoint label sets (R3). The registry is the only mutable entity
// in the kernel; mutation is single-writer, reads may be concurrent between
// mutations.
class Registry {
 public:
  // Registers a box. Rejects in/out overlap (InOutOverlap), port reuse
  // across boxes (PortCollision, R1) and duplicate ids.
  const BoxShape& add_box(const std::string& id, std::set<std::string> in_ports,
                          std::set<std::string> out_ports);

  // Registers a copy of a box under a new id with ports renamed
  // "<clone_id>_<port>", for stacking a shape with itself.
  const BoxShape& clone_box(const std::string& source_id, const std::string& clone_id);

  // Registers an arrow from the tensor of `domain_ids` to the tensor of
  // `codomain_ids` (usually a single box). Runs the full validation:
  // endpoint rules including the feedback and passthrough prohibitions, R2
  // within the arrow and R3 across the registry. Unconnected ports,
  // converging and diverging wires are all accepted.
  const WiringArrow& add_arrow(const std::string& id,
                               const std::vector<std::string>& domain_ids,
                               const std::vector<std::string>& codomain_ids,
                               std::vector<Link> links_in, std::vector<Link> links_out);
  const WiringArrow& add_arrow(const std::string& id,
                               const std::vector<std::string>& domain_ids,
                               const std::string& codomain_id,
                               std::vector<Link> links_in, std::vector<Link> links_out);

  bool has_box(const std::string& id) const { return boxes_.count(id) > 0; }
  bool has_arrow(const std::string& id) const { return arrows_.count(id) > 0; }
  const BoxShape& box(const std::string& id) const;
  const WiringArrow& arrow(const std::string& id) const;

  const std::map<std::string, BoxShape>& boxes() const noexcept { return boxes_; }
  const std::map<std::string, WiringArrow>& arrows() const noexcept { return arrows_; }

  // The registered box owning a port, if any.
  const BoxShape* owner_of(const std::string& port) const;

  // Splits a (possibly tensored) box into the registered boxes it is a union
  // of, sorted by id. Port-less constituents are not recoverable.
  std::vector<BoxShape> decompose(const BoxShape& box) const;

  // Imports every box and arrow of `other`. Colliding boxes get their ports
  // prefixed with the box id, colliding arrows get their labels prefixed
  // with the arrow id, colliding ids get a "_m" suffix; the renaming is
  // deterministic.
  void merge_renamed(const Registry& other);

 private:
  std::map<std::string, BoxShape> boxes_;
  std::map<std::string, WiringArrow> arrows_;
  std::set<std::string> all_ports_;
  std::set<Word> all_labels_;
};

}  // namespace fa
