#include "fa/algebra.hpp"

#include <algorithm>
#include <cmath>

#include "fa/error.hpp"

namespace fa {

namespace {

double as_mass(const Value& v) {
  const double* d = std::get_if<double>(&v);
  if (!d) fail(ErrorKind::ArgOutOfSet, "the mass carrier holds positive reals");
  if (!(*d > 0.0)) fail(ErrorKind::ArgOutOfSet, "masses are strictly positive");
  return *d;
}

const BoxBehavior& as_behavior(const Value& v) {
  const BoxBehavior* b = std::get_if<BoxBehavior>(&v);
  if (!b || !*b) {
    fail(ErrorKind::ArgOutOfSet, "the dataflow carrier holds box behaviours");
  }
  return *b;
}

const std::string& as_token(const Value& v) {
  const std::string* s = std::get_if<std::string>(&v);
  if (!s) fail(ErrorKind::ArgOutOfSet, "the instance carrier holds usage tokens");
  return *s;
}

}  // namespace

double link_mass_total(const MatArrow& m, const std::map<std::string, double>& link_mass) {
  double total = 0.0;
  for (const SemiringMatrix* mat : {&m.m_in, &m.m_out}) {
    for (const auto& [_, lang] : mat->cells()) {
      for (const Word& w : lang.words()) {
        for (const auto& atom : w.atoms()) {
          auto it = link_mass.find(atom);
          if (it == link_mass.end()) {
            fail(ErrorKind::MissingMass, "no link mass assigned to label \"" + atom + "\"");
          }
          total += it->second;
        }
      }
    }
  }
  return total;
}

Algebra mass_algebra(MassAssignment assignment, MassVariant variant) {
  for (const auto& [id, m] : assignment.box_mass) {
    if (!(m > 0.0)) {
      fail(ErrorKind::ArgOutOfSet, "mass of box \"" + id + "\" must be strictly positive");
    }
  }
  for (const auto& [atom, m] : assignment.link_mass) {
    if (m < 0.0) {
      fail(ErrorKind::ArgOutOfSet, "mass of link \"" + atom + "\" must be nonnegative");
    }
  }
  Algebra alg;
  alg.name = "mass";
  alg.action = [assignment = std::move(assignment),
                variant](const MultiArrow& ma, const std::vector<Value>& args) {
    if (args.size() != ma.domains.size()) {
      fail(ErrorKind::ArgOutOfSet, "expected one mass per domain box");
    }
    double total = 0.0;
    for (const Value& v : args) total += as_mass(v);
    if (variant == MassVariant::SumPlusLinks) {
      total += link_mass_total(ma.body, assignment.link_mass);
    }
    return Value{total};
  };
  alg.equal = [](const BoxShape&, const Value& a, const Value& b) {
    return std::fabs(as_mass(a) - as_mass(b)) <= 1e-12;
  };
  return alg;
}

BoxBehavior behavior_from_table(const TruthTable& table) {
  return [table](const PortValuation& input) {
    std::vector<std::string> key;
    key.reserve(table.inputs.size());
    for (const auto& p : table.inputs) {
      auto it = input.find(p);
      if (it == input.end()) {
        fail(ErrorKind::UnderdeterminedPort, "no value for input port \"" + p + "\"");
      }
      key.push_back(it->second);
    }
    auto row = table.rows.find(key);
    if (row == table.rows.end()) {
      std::string joined;
      for (const auto& t : key) joined += joined.empty() ? t : "," + t;
      fail(ErrorKind::UnknownValue, "truth table has no row for inputs (" + joined + ")");
    }
    PortValuation out;
    for (std::size_t i = 0; i < table.outputs.size(); ++i) {
      out[table.outputs[i]] = row->second.at(i);
    }
    return out;
  };
}

namespace {

struct Wire {
  std::string target;
  std::string source;
};

// The static wiring of a multi-arrow body, plus the port-level dependency
// checks the evaluator needs.
struct DataflowPlan {
  std::vector<Wire> in_wires;   // into constituent inputs
  std::vector<Wire> out_wires;  // into codomain outputs
  std::map<std::string, std::size_t> owner;  // constituent port -> domain position
  std::vector<BoxShape> constituents;
  BoxShape codomain;
  PortValuation defaults;  // only for ports without incoming wires
};

DataflowPlan make_plan(const MultiArrow& ma, const PortValuation& defaults) {
  DataflowPlan plan;
  plan.codomain = ma.codomain;
  plan.constituents = ma.domains;
  for (std::size_t i = 0; i < ma.domains.size(); ++i) {
    for (const auto* side : {&ma.domains[i].in_ports, &ma.domains[i].out_ports}) {
      for (const auto& p : *side) {
        if (!plan.owner.emplace(p, i).second) {
          fail(ErrorKind::ArgOutOfSet,
               "domain boxes of \"" + ma.id + "\" share ports; a repeated box "
               "cannot carry distinct behaviours");
        }
      }
    }
  }
  for (const auto& [rc, lang] : ma.body.m_in.cells()) {
    if (!lang.is_zero()) plan.in_wires.push_back({rc.first, rc.second});
  }
  for (const auto& [rc, lang] : ma.body.m_out.cells()) {
    if (!lang.is_zero()) plan.out_wires.push_back({rc.first, rc.second});
  }

  // Every constituent input needs a wire or a default.
  std::set<std::string> wired;
  for (const auto& w : plan.in_wires) wired.insert(w.target);
  for (const auto& box : plan.constituents) {
    for (const auto& p : box.in_ports) {
      if (!wired.count(p)) {
        if (auto it = defaults.find(p); it != defaults.end()) {
          plan.defaults.emplace(p, it->second);
        } else {
          fail(ErrorKind::UnderdeterminedPort,
               "input port \"" + p + "\" has no incoming link and no default value");
        }
      }
    }
  }

  // Cycle check over ports: wire edges plus, for every constituent, edges
  // from each of its inputs to each of its outputs.
  std::map<std::string, std::vector<std::string>> succ;
  std::map<std::string, int> indegree;
  auto add_edge = [&](const std::string& from, const std::string& to) {
    succ[from].push_back(to);
    indegree.try_emplace(from, 0);
    ++indegree[to];
  };
  for (const auto& w : plan.in_wires) {
    // A self-connecting link is an invisible wire (identity arrows); it
    // cannot form a dependency.
    if (w.source != w.target) add_edge(w.source, w.target);
  }
  for (const auto& box : plan.constituents) {
    for (const auto& p : box.in_ports) {
      for (const auto& q : box.out_ports) add_edge(p, q);
    }
  }
  std::vector<std::string> ready;
  for (const auto& [p, d] : indegree) {
    if (d == 0) ready.push_back(p);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    std::string p = std::move(ready.back());
    ready.pop_back();
    ++visited;
    for (const auto& q : succ[p]) {
      if (--indegree[q] == 0) ready.push_back(q);
    }
  }
  if (visited != indegree.size()) {
    fail(ErrorKind::CyclicDependency,
         "the link pattern of arrow \"" + ma.id + "\" has a dependency cycle");
  }
  return plan;
}

PortValuation run_plan(const DataflowPlan& plan, const std::vector<BoxBehavior>& behaviors,
                       const PortValuation& input) {
  PortValuation values = plan.defaults;
  for (const auto& p : plan.codomain.in_ports) {
    auto it = input.find(p);
    if (it == input.end()) {
      fail(ErrorKind::UnderdeterminedPort, "no value supplied for input port \"" + p + "\"");
    }
    values[p] = it->second;
  }

  auto deliver = [&](const Wire& w, PortValuation& into) -> bool {
    auto src = values.find(w.source);
    if (src == values.end()) return false;
    auto [it, inserted] = into.emplace(w.target, src->second);
    if (!inserted && it->second != src->second) {
      fail(ErrorKind::AmbiguousConvergence,
           "port \"" + w.target + "\" receives both \"" + it->second + "\" and \"" +
               src->second + "\"");
    }
    return inserted;
  };

  std::vector<bool> fired(plan.constituents.size(), false);
  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto& w : plan.in_wires) {
      progress |= deliver(w, values);
    }
    for (std::size_t i = 0; i < plan.constituents.size(); ++i) {
      if (fired[i]) continue;
      const BoxShape& box = plan.constituents[i];
      PortValuation box_in;
      bool complete = true;
      for (const auto& p : box.in_ports) {
        auto it = values.find(p);
        if (it == values.end()) {
          complete = false;
          break;
        }
        box_in.emplace(p, it->second);
      }
      if (!complete) continue;
      PortValuation box_out = behaviors[i](box_in);
      for (const auto& p : box.out_ports) {
        auto it = box_out.find(p);
        if (it == box_out.end()) {
          fail(ErrorKind::UnderdeterminedPort,
               "behaviour of box \"" + box.id + "\" produced no value for port \"" + p + "\"");
        }
        values[p] = it->second;
      }
      fired[i] = true;
      progress = true;
    }
  }
  for (std::size_t i = 0; i < plan.constituents.size(); ++i) {
    if (!fired[i]) {
      fail(ErrorKind::CyclicDependency,
           "box \"" + plan.constituents[i].id + "\" never received all of its inputs");
    }
  }

  PortValuation out;
  for (const auto& w : plan.out_wires) deliver(w, out);
  return out;
}

}  // namespace

BoxBehavior composite_behavior(const MultiArrow& ma,
                               const std::vector<BoxBehavior>& constituents,
                               const PortValuation& defaults) {
  if (constituents.size() != ma.domains.size()) {
    fail(ErrorKind::ArgOutOfSet, "expected one behaviour per domain box");
  }
  DataflowPlan plan = make_plan(ma, defaults);
  return [plan, constituents](const PortValuation& input) {
    return run_plan(plan, constituents, input);
  };
}

Algebra dataflow_algebra(std::map<std::string, TruthTable> tables, DataflowOptions options) {
  if (options.alphabet.empty()) {
    for (const auto& [_, table] : tables) {
      for (const auto& [key, out] : table.rows) {
        options.alphabet.insert(key.begin(), key.end());
        options.alphabet.insert(out.begin(), out.end());
      }
    }
  }
  Algebra alg;
  alg.name = "dataflow";
  alg.action = [](const MultiArrow& ma, const std::vector<Value>& args) {
    std::vector<BoxBehavior> behaviors;
    behaviors.reserve(args.size());
    for (const Value& v : args) behaviors.push_back(as_behavior(v));
    return Value{composite_behavior(ma, behaviors)};
  };
  std::set<std::string> alphabet = options.alphabet;
  alg.equal = [alphabet](const BoxShape& box, const Value& va, const Value& vb) {
    const BoxBehavior& a = as_behavior(va);
    const BoxBehavior& b = as_behavior(vb);
    std::vector<std::string> ports(box.in_ports.begin(), box.in_ports.end());
    std::vector<std::string> tokens(alphabet.begin(), alphabet.end());
    if (tokens.empty()) tokens.push_back("0");
    // Extensional comparison over the full input product.
    std::vector<std::size_t> digits(ports.size(), 0);
    while (true) {
      PortValuation input;
      for (std::size_t i = 0; i < ports.size(); ++i) input[ports[i]] = tokens[digits[i]];
      try {
        if (a(input) != b(input)) return false;
      } catch (const Error&) {
        return false;
      }
      std::size_t i = 0;
      for (; i < digits.size(); ++i) {
        if (++digits[i] < tokens.size()) break;
        digits[i] = 0;
      }
      if (i == digits.size()) break;
    }
    return true;
  };
  return alg;
}

Instance instance_new(
    std::map<std::string, std::set<std::string>> usage_sets,
    std::map<std::string, std::map<std::vector<std::string>, std::string>> usage_fns) {
  return Instance{std::move(usage_sets), std::move(usage_fns)};
}

std::string instance_eval(const Instance& inst, const MultiArrow& ma,
                          const std::vector<std::string>& args) {
  if (args.size() != ma.domains.size()) {
    fail(ErrorKind::ArgOutOfSet, "expected one usage per domain box");
  }
  for (std::size_t i = 0; i < args.size(); ++i) {
    auto it = inst.usage_sets.find(ma.domains[i].id);
    if (it != inst.usage_sets.end() && !it->second.count(args[i])) {
      fail(ErrorKind::ArgOutOfSet, "\"" + args[i] + "\" is not a declared usage of box \"" +
                                       ma.domains[i].id + "\"");
    }
  }
  if (is_identity(ma.body) && args.size() == 1) return args[0];
  auto fn = inst.usage_fns.find(ma.id);
  if (fn == inst.usage_fns.end()) {
    fail(ErrorKind::UnknownArrow, "no usage function registered for arrow \"" + ma.id + "\"");
  }
  auto row = fn->second.find(args);
  if (row == fn->second.end()) {
    fail(ErrorKind::ArgOutOfSet, "usage function of arrow \"" + ma.id +
                                     "\" is not defined on the given arguments");
  }
  return row->second;
}

Algebra instance_algebra(Instance inst) {
  Algebra alg;
  alg.name = "instance";
  alg.action = [inst = std::move(inst)](const MultiArrow& ma, const std::vector<Value>& args) {
    std::vector<std::string> tokens;
    tokens.reserve(args.size());
    for (const Value& v : args) tokens.push_back(as_token(v));
    return Value{instance_eval(inst, ma, tokens)};
  };
  alg.equal = [](const BoxShape&, const Value& a, const Value& b) {
    return as_token(a) == as_token(b);
  };
  return alg;
}

bool LawReport::ok() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const LawCheck& c) { return c.passed; });
}

namespace {

Value checked_action(const Algebra& alg, const MultiArrow& ma,
                     const std::vector<Value>& args) {
  try {
    return alg.action(ma, args);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::UnknownArrow) {
      throw Error(ErrorKind::MissingAction,
                  "algebra \"" + alg.name + "\" has no operation for arrow \"" + ma.id + "\"");
    }
    throw;
  }
}

}  // namespace

LawReport check_functor_laws(const Algebra& algebra, const Registry& registry,
                             const SampleSet& samples) {
  LawReport report;

  for (const auto& [id, box] : registry.boxes()) {
    auto it = samples.by_box.find(id);
    if (it == samples.by_box.end()) continue;
    MultiArrow idm = identity_multi_arrow(box);
    LawCheck check{"identity", id, true, ""};
    for (const Value& v : it->second) {
      Value got = checked_action(algebra, idm, {v});
      if (!algebra.equal(box, got, v)) {
        check.passed = false;
        check.detail = "action(1_" + id + ") moved a sample carrier value";
        break;
      }
    }
    report.checks.push_back(std::move(check));
  }

  for (const auto& [outer_id, outer] : registry.arrows()) {
    for (const auto& [inner_id, inner] : registry.arrows()) {
      if (!(inner.codomain == outer.domain)) continue;
      auto it = samples.by_box.find(inner.domain.id);
      if (it == samples.by_box.end()) continue;
      MultiArrow outer_ma{outer_id, {outer.domain}, outer.codomain, to_mat(outer)};
      MultiArrow inner_ma{inner_id, {inner.domain}, inner.codomain, to_mat(inner)};
      MultiArrow composite{inner_id + "_then_" + outer_id,
                           {inner.domain},
                           outer.codomain,
                           compose(outer_ma.body, inner_ma.body)};
      LawCheck check{"composition", inner_id + " then " + outer_id, true, ""};
      for (const Value& v : it->second) {
        Value lhs = checked_action(algebra, composite, {v});
        Value mid = checked_action(algebra, inner_ma, {v});
        Value rhs = checked_action(algebra, outer_ma, {mid});
        if (!algebra.equal(outer.codomain, lhs, rhs)) {
          check.passed = false;
          check.detail = "action(" + composite.id + ") differs from the composed actions";
          break;
        }
      }
      report.checks.push_back(std::move(check));
    }
  }
  return report;
}

}  // namespace fa
