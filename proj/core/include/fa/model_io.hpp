#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fa/algebra.hpp"
#include "fa/structure.hpp"

namespace fa {

// The model-exchange document, format "fa/1": one JSON object holding boxes,
// arrows in function form, multi-arrow declarations and optional algebra
// bindings. Port identifiers are namespaced "<boxid>.<port>" on disk and kept
// flat in memory; link labels are stored as their dot-joined words.
//
// Saving is canonical: sorted keys, sorted records, two-space indent, LF
// endings, UTF-8. Loading a canonical document and saving it again is
// byte-identical.

struct MassBinding {
  MassAssignment assignment;
  MassVariant variant = MassVariant::SumOnly;
};

struct DataflowBinding {
  std::map<std::string, TruthTable> tables;  // box id -> table (flat ports)
  PortValuation defaults;
};

struct InstanceBinding {
  Instance instance;
};

struct Bindings {
  std::optional<std::string> algebra;  // preferred algebra name
  std::optional<MassBinding> mass;
  std::optional<DataflowBinding> dataflow;
  std::optional<InstanceBinding> instance;

  bool empty() const {
    return !algebra && !mass && !dataflow && !instance;
  }
};

struct MultiArrowRecord {
  std::string id;
  std::vector<std::string> domain_ids;  // ordered decomposition
  std::string codomain_id;
  std::string arrow_id;  // the wiring arrow on the tensor of the domains
};

struct Model {
  Registry registry;
  std::vector<MultiArrowRecord> multi_arrows;
  Bindings bindings;

  const MultiArrowRecord* find_multi(const std::string& id) const;
  MultiArrow realize(const MultiArrowRecord& record) const;
};

// Parses and fully validates a document: all structural rules are re-run
// through the registry, and every reference must resolve. Errors carry the
// offending record's location.
Model load_model_text(std::string_view text);
Model load_model(const std::string& path);

std::string save_model(const Model& model);
void save_model_file(const Model& model, const std::string& path);

}  // namespace fa
