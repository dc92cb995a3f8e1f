#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "fa/structure.hpp"

namespace fa {

// A valuation of ports: one token per port name.
using PortValuation = std::map<std::string, std::string>;

// The behaviour of a box under the dataflow interpretation: a total function
// from input-port valuations to output-port valuations.
using BoxBehavior = std::function<PortValuation(const PortValuation&)>;

// A carrier element. Which alternative is meaningful depends on the algebra:
// reals for the mass algebra, behaviours for the dataflow algebra, tokens for
// instances.
using Value = std::variant<double, std::string, PortValuation, BoxBehavior>;

// An interpretation of the structure: every box gets a carrier, every
// multi-arrow an operation from the product of the domain carriers to the
// codomain carrier. `equal` is the carrier's equality (extensional for
// behaviours, tolerance 1e-12 for reals), used by the law checker.
struct Algebra {
  std::string name;
  std::function<Value(const MultiArrow&, const std::vector<Value>&)> action;
  std::function<bool(const BoxShape&, const Value&, const Value&)> equal;
};

// ---------------------------------------------------------------------------
// Mass interpretation: carriers are positive reals, the action of an arrow
// sums the masses of its constituents. The SumPlusLinks variant additionally
// counts a mass per link: every word surviving in the arrow's matrices
// contributes the summed masses of its atomic labels, so links that vanish
// under composition stop contributing.

enum class MassVariant { SumOnly, SumPlusLinks };

struct MassAssignment {
  std::map<std::string, double> box_mass;   // keyed by box id; strictly positive
  std::map<std::string, double> link_mass;  // keyed by label atom; nonnegative
};

Algebra mass_algebra(MassAssignment assignment, MassVariant variant);

// Total link mass of an arrow in matrix form: the sum over all entry words of
// the masses of their atoms. Throws MissingMass for an atom without a mass.
double link_mass_total(const MatArrow& m, const std::map<std::string, double>& link_mass);

// ---------------------------------------------------------------------------
// Dataflow interpretation: carriers are box behaviours, the action of an
// arrow wires behaviours together. Values enter at the codomain inputs, flow
// along the links, every constituent fires once all of its inputs are known,
// and the codomain outputs are read off the output links.
//
// Wiring that the structure permits but the evaluation cannot handle is
// rejected: a dependency cycle raises CyclicDependency, a constituent input
// with no incoming link and no default raises UnderdeterminedPort, and
// converging links that deliver different values raise AmbiguousConvergence
// (agreeing values are fine; diverging links simply fan the value out).

struct TruthTable {
  std::vector<std::string> inputs;   // port names, fixed order
  std::vector<std::string> outputs;  // port names, fixed order
  std::map<std::vector<std::string>, std::vector<std::string>> rows;
};

BoxBehavior behavior_from_table(const TruthTable& table);

// The composite behaviour of a multi-arrow given one behaviour per domain
// box. Static checks (cycles, underdetermined inputs) run immediately.
BoxBehavior composite_behavior(const MultiArrow& ma,
                               const std::vector<BoxBehavior>& constituents,
                               const PortValuation& defaults = {});

struct DataflowOptions {
  PortValuation defaults;              // per-port fallback inputs
  std::set<std::string> alphabet;      // token domain for extensional equality
};

Algebra dataflow_algebra(std::map<std::string, TruthTable> tables,
                         DataflowOptions options = {});

// ---------------------------------------------------------------------------
// Instances: the Set-valued usage of a structure. Every box gets a finite set
// of usages, every named arrow a total function between the products.

struct Instance {
  std::map<std::string, std::set<std::string>> usage_sets;  // box id -> usages
  // arrow id -> argument tuple -> result
  std::map<std::string, std::map<std::vector<std::string>, std::string>> usage_fns;
};

Instance instance_new(std::map<std::string, std::set<std::string>> usage_sets,
                      std::map<std::string, std::map<std::vector<std::string>, std::string>> usage_fns);

// Applies the function registered for the arrow. Identity arrows evaluate to
// their argument without being registered. Throws UnknownArrow for an
// unregistered arrow and ArgOutOfSet for arguments outside the declared sets.
std::string instance_eval(const Instance& inst, const MultiArrow& ma,
                          const std::vector<std::string>& args);

Algebra instance_algebra(Instance inst);

// ---------------------------------------------------------------------------
// Functor-law checking, shared by interpretations and instances.

struct SampleSet {
  std::map<std::string, std::vector<Value>> by_box;  // box id -> sample carriers
};

struct LawCheck {
  std::string law;      // "identity" or "composition"
  std::string subject;  // the box or arrow pair checked
  bool passed = false;
  std::string detail;
};

struct LawReport {
  std::vector<LawCheck> checks;
  bool ok() const;
};

// Checks, on the given samples, that (a) the action of every identity arrow
// behaves as the identity and (b) the action of a composite equals the
// composite of the actions, for every composable pair of arrows in the
// registry. Throws MissingAction if the algebra has no operation for an
// arrow involved.
LawReport check_functor_laws(const Algebra& algebra, const Registry& registry,
                             const SampleSet& samples);

}  // namespace fa
