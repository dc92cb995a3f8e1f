#include "fa/structure.hpp"

#include <algorithm>

#include "fa/error.hpp"

namespace fa {

namespace {

constexpr const char* kTensorGlyph = "⊗";

std::vector<std::string> split_tensor_id(const std::string& id) {
  std::vector<std::string> parts;
  const std::string glyph = kTensorGlyph;
  std::size_t start = 0;
  while (start <= id.size()) {
    std::size_t pos = id.find(glyph, start);
    if (pos == std::string::npos) {
      parts.push_back(id.substr(start));
      break;
    }
    parts.push_back(id.substr(start, pos - start));
    start = pos + glyph.size();
  }
  return parts;
}

std::string join_tensor_id(const std::string& a, const std::string& b) {
  std::set<std::string> parts;
  for (auto& p : split_tensor_id(a)) parts.insert(p);
  for (auto& p : split_tensor_id(b)) parts.insert(p);
  parts.erase(std::string{});
  if (parts.empty()) return "I";
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += kTensorGlyph;
    out += p;
  }
  return out;
}

void sort_links(std::vector<Link>& links) {
  std::sort(links.begin(), links.end());
}

}  // namespace

BoxShape unit_box() { return BoxShape{"I", {}, {}}; }

BoxShape tensor(const BoxShape& a, const BoxShape& b) {
  if (a.is_unit()) return b;
  if (b.is_unit()) return a;
  if (a == b) return a;
  BoxShape out;
  out.id = join_tensor_id(a.id, b.id);
  out.in_ports = a.in_ports;
  out.in_ports.insert(b.in_ports.begin(), b.in_ports.end());
  out.out_ports = a.out_ports;
  out.out_ports.insert(b.out_ports.begin(), b.out_ports.end());
  return out;
}

PortIndex in_index(const BoxShape& box) { return PortIndex::sorted(box.in_ports); }
PortIndex out_index(const BoxShape& box) { return PortIndex::sorted(box.out_ports); }

WiringArrow arrow_identity(const BoxShape& box) {
  WiringArrow w;
  w.id = "1_" + box.id;
  w.domain = box;
  w.codomain = box;
  for (const auto& p : box.in_ports) {
    w.links_in.push_back({Word(box.id + "_lin_" + p), p, p});
  }
  for (const auto& p : box.out_ports) {
    w.links_out.push_back({Word(box.id + "_lout_" + p), p, p});
  }
  sort_links(w.links_in);
  sort_links(w.links_out);
  return w;
}

namespace {

// Union of two sorted link lists. Equal links collapse; equal labels with
// different endpoints are a label clash.
std::vector<Link> merge_links(const std::vector<Link>& a, const std::vector<Link>& b) {
  std::map<Word, Link> by_label;
  for (const auto& l : a) by_label.emplace(l.label, l);
  for (const auto& l : b) {
    auto [it, inserted] = by_label.emplace(l.label, l);
    if (!inserted && !(it->second == l)) {
      fail(ErrorKind::LabelCollision,
           "label \"" + l.label.str() + "\" is used by both tensor factors");
    }
  }
  std::vector<Link> out;
  out.reserve(by_label.size());
  for (auto& [_, l] : by_label) out.push_back(l);
  return out;
}

}  // namespace

WiringArrow tensor(const WiringArrow& a, const WiringArrow& b) {
  if (a == b) return a;
  WiringArrow out;
  out.id = a.id == b.id ? a.id : join_tensor_id(a.id, b.id);
  out.domain = tensor(a.domain, b.domain);
  out.codomain = tensor(a.codomain, b.codomain);
  out.links_in = merge_links(a.links_in, b.links_in);
  out.links_out = merge_links(a.links_out, b.links_out);
  return out;
}

MatArrow to_mat(const WiringArrow& arrow) {
  MatArrow m;
  m.domain = arrow.domain;
  m.codomain = arrow.codomain;
  m.m_in = SemiringMatrix(
      in_index(arrow.domain),
      PortIndex::concat({in_index(arrow.codomain), out_index(arrow.domain)}));
  m.m_out = SemiringMatrix(out_index(arrow.codomain), out_index(arrow.domain));
  for (const Link& l : arrow.links_in) {
    Word w = l.target == l.source ? Word{} : l.label;
    m.m_in.accumulate(l.target, l.source, Lang::single(std::move(w)));
  }
  for (const Link& l : arrow.links_out) {
    Word w = l.target == l.source ? Word{} : l.label;
    m.m_out.accumulate(l.target, l.source, Lang::single(std::move(w)));
  }
  return m;
}

namespace {

void links_from_matrix(const SemiringMatrix& m, const std::string& box_id,
                       const char* identity_prefix, std::vector<Link>& out) {
  for (const auto& [rc, lang] : m.cells()) {
    const auto& [target, source] = rc;
    for (const Word& w : lang.words()) {
      Word label = w;
      if (w.is_epsilon()) {
        label = target == source
                    ? Word(box_id + "_" + identity_prefix + "_" + target)
                    : Word("eps_" + target + "_" + source);
      }
      out.push_back({std::move(label), target, source});
    }
  }
}

}  // namespace

WiringArrow from_mat(const MatArrow& m, std::string id) {
  WiringArrow w;
  w.id = std::move(id);
  w.domain = m.domain;
  w.codomain = m.codomain;
  links_from_matrix(m.m_in, m.domain.id, "lin", w.links_in);
  links_from_matrix(m.m_out, m.domain.id, "lout", w.links_out);
  sort_links(w.links_in);
  sort_links(w.links_out);
  return w;
}

MatArrow compose(const MatArrow& outer, const MatArrow& inner) {
  if (!(inner.codomain == outer.domain)) {
    fail(ErrorKind::CodomainMismatch,
         "cannot compose: codomain of \"" + inner.codomain.id +
             "\" does not match domain of the outer arrow \"" + outer.domain.id + "\"");
  }
  const BoxShape& dom = inner.domain;    // X
  const BoxShape& mid = outer.domain;    // Y
  const BoxShape& cod = outer.codomain;  // Z

  SemiringMatrix o_out = outer.m_out * inner.m_out;

  // The middle index stacks in(Z), out(Y) and out(X). Entries are tagged by
  // group so the stack stays well-formed when X = Y and out(X) would appear
  // in two groups at once.
  auto tag = [](int group, const std::string& port) {
    return std::to_string(group) + "." + port;
  };
  std::vector<std::string> middle;
  for (const auto& p : cod.in_ports) middle.push_back(tag(0, p));
  for (const auto& p : mid.out_ports) middle.push_back(tag(1, p));
  for (const auto& p : dom.out_ports) middle.push_back(tag(2, p));
  PortIndex middle_idx = PortIndex::of(std::move(middle));

  // M': outer.m_in extended with an identity on out(X).
  SemiringMatrix mprime(PortIndex::concat({in_index(mid), out_index(dom)}), middle_idx);
  for (const auto& [rc, v] : outer.m_in.cells()) {
    int group = cod.in_ports.count(rc.second) ? 0 : 1;
    mprime.set(rc.first, tag(group, rc.second), v);
  }
  for (const auto& p : dom.out_ports) mprime.set(p, tag(2, p), Lang::one());

  // N': identity on in(Z) stacked over inner.m_out over an identity on out(X).
  SemiringMatrix nprime(middle_idx,
                        PortIndex::concat({in_index(cod), out_index(dom)}));
  for (const auto& p : cod.in_ports) nprime.set(tag(0, p), p, Lang::one());
  for (const auto& [rc, v] : inner.m_out.cells()) nprime.set(tag(1, rc.first), rc.second, v);
  for (const auto& p : dom.out_ports) nprime.set(tag(2, p), p, Lang::one());

  SemiringMatrix o_in = inner.m_in * mprime * nprime;
  return MatArrow{dom, cod, std::move(o_in), std::move(o_out)};
}

MatArrow tensor(const MatArrow& a, const MatArrow& b) {
  if (a == b) return a;
  MatArrow out;
  out.domain = tensor(a.domain, b.domain);
  out.codomain = tensor(a.codomain, b.codomain);
  out.m_in = SemiringMatrix(
      in_index(out.domain),
      PortIndex::concat({in_index(out.codomain), out_index(out.domain)}));
  out.m_out = SemiringMatrix(out_index(out.codomain), out_index(out.domain));
  for (const MatArrow* part : {&a, &b}) {
    for (const auto& [rc, v] : part->m_in.cells()) out.m_in.accumulate(rc.first, rc.second, v);
    for (const auto& [rc, v] : part->m_out.cells()) out.m_out.accumulate(rc.first, rc.second, v);
  }
  return out;
}

bool is_identity(const MatArrow& m) {
  if (!(m.domain == m.codomain)) return false;
  return m == to_mat(arrow_identity(m.domain));
}

MultiArrow multi_arrow(std::string id, std::vector<BoxShape> domains,
                       const BoxShape& codomain, const WiringArrow& wiring) {
  BoxShape expected = unit_box();
  for (const auto& d : domains) expected = tensor(expected, d);
  if (!(expected == wiring.domain)) {
    fail(ErrorKind::DomainMismatch,
         "wiring arrow \"" + wiring.id + "\" is not an arrow out of the tensor of the listed domains");
  }
  if (!(codomain == wiring.codomain)) {
    fail(ErrorKind::CodomainMismatch,
         "wiring arrow \"" + wiring.id + "\" does not land in the listed codomain");
  }
  return MultiArrow{std::move(id), std::move(domains), codomain, to_mat(wiring)};
}

MultiArrow identity_multi_arrow(const BoxShape& box) {
  return MultiArrow{"1_" + box.id, {box}, box, to_mat(arrow_identity(box))};
}

MultiArrow symmetry_apply(const MultiArrow& ma, const std::vector<std::size_t>& sigma) {
  const std::size_t n = ma.domains.size();
  if (sigma.size() != n) {
    fail(ErrorKind::BadPermutation, "permutation has wrong length");
  }
  std::vector<bool> seen(n, false);
  for (std::size_t s : sigma) {
    if (s >= n || seen[s]) fail(ErrorKind::BadPermutation, "not a permutation of the domain positions");
    seen[s] = true;
  }
  MultiArrow out = ma;
  for (std::size_t i = 0; i < n; ++i) out.domains[i] = ma.domains[sigma[i]];
  return out;
}

const BoxShape& Registry::add_box(const std::string& id, std::set<std::string> in_ports,
                                  std::set<std::string> out_ports) {
  require_token(id, "box id");
  if (boxes_.count(id)) fail(ErrorKind::DuplicateId, "box \"" + id + "\" already registered");
  for (const auto& p : in_ports) require_token(p, "port");
  for (const auto& p : out_ports) require_token(p, "port");
  for (const auto& p : in_ports) {
    if (out_ports.count(p)) {
      fail(ErrorKind::InOutOverlap,
           "port \"" + p + "\" of box \"" + id + "\" is both input and output");
    }
  }
  for (const auto* side : {&in_ports, &out_ports}) {
    for (const auto& p : *side) {
      if (all_ports_.count(p)) {
        fail(ErrorKind::PortCollision,
             "port \"" + p + "\" of box \"" + id + "\" is already used by another box");
      }
    }
  }
  for (const auto& p : in_ports) all_ports_.insert(p);
  for (const auto& p : out_ports) all_ports_.insert(p);
  auto [it, _] = boxes_.emplace(id, BoxShape{id, std::move(in_ports), std::move(out_ports)});
  return it->second;
}

const BoxShape& Registry::clone_box(const std::string& source_id,
                                    const std::string& clone_id) {
  const BoxShape& src = box(source_id);
  std::set<std::string> in_ports, out_ports;
  for (const auto& p : src.in_ports) in_ports.insert(clone_id + "_" + p);
  for (const auto& p : src.out_ports) out_ports.insert(clone_id + "_" + p);
  return add_box(clone_id, std::move(in_ports), std::move(out_ports));
}

namespace {

enum class Side { In, Out };

// Endpoint validation for one link of an arrow dom -> cod. Legal shapes are
// checked first; a failure is then classified as one of the two modeling
// prohibitions, an unknown port, or a generic bad endpoint.
void validate_endpoint(const Link& link, Side side, const BoxShape& dom,
                       const BoxShape& cod, const std::string& arrow_id) {
  const bool target_known = dom.owns_port(link.target) || cod.owns_port(link.target);
  const bool source_known = dom.owns_port(link.source) || cod.owns_port(link.source);
  if (!target_known || !source_known) {
    fail(ErrorKind::UnknownPort,
         "link \"" + link.label.str() + "\" of arrow \"" + arrow_id +
             "\" references a port that belongs to neither box");
  }
  const bool legal =
      side == Side::In
          ? dom.in_ports.count(link.target) &&
                (dom.out_ports.count(link.source) || cod.in_ports.count(link.source))
          : cod.out_ports.count(link.target) && dom.out_ports.count(link.source);
  if (legal) return;
  if (cod.in_ports.count(link.target) && cod.out_ports.count(link.source)) {
    fail(ErrorKind::FeedbackProhibited,
         "link \"" + link.label.str() + "\" feeds an output of \"" + cod.id +
             "\" back into one of its inputs; model self-feedback as a new box and arrow");
  }
  if (cod.out_ports.count(link.target) && cod.in_ports.count(link.source)) {
    fail(ErrorKind::PassthroughProhibited,
         "link \"" + link.label.str() + "\" runs straight from an input of \"" + cod.id +
             "\" to an output; route it through a basic box instead");
  }
  fail(ErrorKind::BadEndpoint, "link \"" + link.label.str() + "\" of arrow \"" + arrow_id +
                                   "\" connects ports outside the allowed sets");
}

}  // namespace

const WiringArrow& Registry::add_arrow(const std::string& id,
                                       const std::vector<std::string>& domain_ids,
                                       const std::string& codomain_id,
                                       std::vector<Link> links_in,
                                       std::vector<Link> links_out) {
  return add_arrow(id, domain_ids, std::vector<std::string>{codomain_id},
                   std::move(links_in), std::move(links_out));
}

const WiringArrow& Registry::add_arrow(const std::string& id,
                                       const std::vector<std::string>& domain_ids,
                                       const std::vector<std::string>& codomain_ids,
                                       std::vector<Link> links_in,
                                       std::vector<Link> links_out) {
  require_token(id, "arrow id");
  if (arrows_.count(id)) fail(ErrorKind::DuplicateId, "arrow \"" + id + "\" already registered");

  BoxShape dom = unit_box();
  for (const auto& d : domain_ids) dom = tensor(dom, box(d));
  BoxShape cod = unit_box();
  for (const auto& c : codomain_ids) cod = tensor(cod, box(c));

  std::set<Word> labels;
  for (const auto* side : {&links_in, &links_out}) {
    for (const Link& l : *side) {
      if (l.label.is_epsilon()) {
        fail(ErrorKind::BadIdentifier, "links of arrow \"" + id + "\" must carry a nonempty label");
      }
      if (!labels.insert(l.label).second) {
        fail(ErrorKind::LabelCollision, "label \"" + l.label.str() +
                                            "\" is used twice in arrow \"" + id + "\" (R2)");
      }
      if (all_labels_.count(l.label)) {
        fail(ErrorKind::LabelCollision, "label \"" + l.label.str() +
                                            "\" is already used by another arrow (R3)");
      }
    }
  }
  for (const Link& l : links_in) validate_endpoint(l, Side::In, dom, cod, id);
  for (const Link& l : links_out) validate_endpoint(l, Side::Out, dom, cod, id);

  sort_links(links_in);
  sort_links(links_out);
  all_labels_.insert(labels.begin(), labels.end());
  auto [it, _] = arrows_.emplace(
      id, WiringArrow{id, std::move(dom), cod, std::move(links_in), std::move(links_out)});
  return it->second;
}

const BoxShape& Registry::box(const std::string& id) const {
  auto it = boxes_.find(id);
  if (it == boxes_.end()) fail(ErrorKind::UnknownBox, "no box \"" + id + "\"");
  return it->second;
}

const WiringArrow& Registry::arrow(const std::string& id) const {
  auto it = arrows_.find(id);
  if (it == arrows_.end()) fail(ErrorKind::UnknownArrow, "no arrow \"" + id + "\"");
  return it->second;
}

const BoxShape* Registry::owner_of(const std::string& port) const {
  for (const auto& [_, b] : boxes_) {
    if (b.owns_port(port)) return &b;
  }
  return nullptr;
}

std::vector<BoxShape> Registry::decompose(const BoxShape& box) const {
  std::vector<BoxShape> out;
  for (const auto& [_, b] : boxes_) {
    if (b.is_unit()) continue;
    if (std::includes(box.in_ports.begin(), box.in_ports.end(), b.in_ports.begin(),
                      b.in_ports.end()) &&
        std::includes(box.out_ports.begin(), box.out_ports.end(), b.out_ports.begin(),
                      b.out_ports.end())) {
      out.push_back(b);
    }
  }
  return out;
}

void Registry::merge_renamed(const Registry& other) {
  std::map<std::string, std::string> port_rename;
  std::map<std::string, std::string> box_rename;

  for (const auto& [id, b] : other.boxes()) {
    std::string new_id = id;
    while (boxes_.count(new_id)) new_id += "_m";
    box_rename[id] = new_id;
    std::set<std::string> taken;
    auto rename_side = [&](const std::set<std::string>& ports) {
      std::set<std::string> renamed;
      for (const auto& p : ports) {
        std::string np = p;
        if (all_ports_.count(np)) np = new_id + "_" + p;
        while (all_ports_.count(np) || taken.count(np)) np += "_m";
        port_rename[p] = np;
        renamed.insert(np);
        taken.insert(np);
      }
      return renamed;
    };
    auto in_ports = rename_side(b.in_ports);
    auto out_ports = rename_side(b.out_ports);
    add_box(new_id, std::move(in_ports), std::move(out_ports));
  }

  auto mapped_port = [&](const std::string& p) {
    auto it = port_rename.find(p);
    return it == port_rename.end() ? p : it->second;
  };

  for (const auto& [id, a] : other.arrows()) {
    std::string new_id = id;
    while (arrows_.count(new_id)) new_id += "_m";
    std::vector<std::string> dom_ids;
    for (const auto& d : other.decompose(a.domain)) dom_ids.push_back(box_rename.at(d.id));
    auto rename_links = [&](const std::vector<Link>& links) {
      std::vector<Link> out;
      for (const Link& l : links) {
        Word label = l.label;
        if (all_labels_.count(label)) {
          auto atoms = label.atoms();
          atoms.front() = new_id + "_" + atoms.front();
          label = Word(std::move(atoms));
          while (all_labels_.count(label)) {
            auto more = label.atoms();
            more.front() += "_m";
            label = Word(std::move(more));
          }
        }
        out.push_back({std::move(label), mapped_port(l.target), mapped_port(l.source)});
      }
      return out;
    };
    add_arrow(new_id, dom_ids, box_rename.at(a.codomain.id), rename_links(a.links_in),
              rename_links(a.links_out));
  }
}

}  // namespace fa
