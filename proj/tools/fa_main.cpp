// fa — command-line front end for the model kernel: validation, composition,
// tensoring, law checking, rendering and algebra evaluation over model files.
//
// Exit codes: 0 success, 1 validation or law failure, 2 usage error.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fa/algebra.hpp"
#include "fa/dot.hpp"
#include "fa/error.hpp"
#include "fa/generate.hpp"
#include "fa/laws.hpp"
#include "fa/matrix.hpp"
#include "fa/model_io.hpp"
#include "fa/structure.hpp"

namespace {

using nlohmann::json;

struct Options {
  std::string format = "text";
  std::string file;
  std::string outer, inner, left, right, arrow_id, algebra, inputs, output;
  std::string emit = "matrices";
  int samples = 200;
  std::uint64_t seed = 0xfa;
};

bool json_output(const Options& opt) { return opt.format == "json"; }

void write_output(const Options& opt, const std::string& text) {
  if (opt.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.output, std::ios::binary);
  if (!out) {
    fa::fail(fa::ErrorKind::ParseError, "cannot write \"" + opt.output + "\"");
  }
  out << text;
}

json matrix_json(const fa::SemiringMatrix& m) {
  json out;
  out["rows"] = m.rows().ports();
  out["cols"] = m.cols().ports();
  json entries = json::object();
  for (const auto& [rc, lang] : m.cells()) {
    json words = json::array();
    for (const auto& w : lang.words()) words.push_back(w.str());
    entries[rc.first][rc.second] = std::move(words);
  }
  out["entries"] = std::move(entries);
  return out;
}

std::map<std::string, std::string> parse_inputs(const std::string& text) {
  std::map<std::string, std::string> out;
  if (text.empty()) return out;
  std::stringstream stream(text);
  std::string pair;
  while (std::getline(stream, pair, ',')) {
    auto eq = pair.find('=');
    if (eq == std::string::npos || eq == 0) {
      fa::fail(fa::ErrorKind::ParseError, "--inputs expects k=v pairs, got \"" + pair + "\"");
    }
    out[pair.substr(0, eq)] = pair.substr(eq + 1);
  }
  return out;
}

// Picks the arrow to operate on: an explicit id (multi-arrow or plain), or
// the document's only arrow.
fa::MultiArrow select_arrow(const fa::Model& model, const std::string& id) {
  if (!id.empty()) {
    if (const fa::MultiArrowRecord* record = model.find_multi(id)) {
      return model.realize(*record);
    }
    const fa::WiringArrow& arrow = model.registry.arrow(id);
    std::vector<fa::BoxShape> domains = model.registry.decompose(arrow.domain);
    return fa::MultiArrow{arrow.id, std::move(domains), arrow.codomain, fa::to_mat(arrow)};
  }
  if (model.multi_arrows.size() == 1) return model.realize(model.multi_arrows.front());
  if (model.multi_arrows.empty() && model.registry.arrows().size() == 1) {
    return select_arrow(model, model.registry.arrows().begin()->first);
  }
  fa::fail(fa::ErrorKind::UnknownArrow,
           "the document defines several arrows; pick one with --arrow");
}

std::string format_number(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

// Builds a model containing the given matrix arrow and the boxes it runs
// between, for --emit model.
fa::Model model_of_arrow(const fa::Model& source, const fa::MatArrow& m,
                         const std::string& id) {
  fa::Model out;
  std::vector<std::string> dom_ids, cod_ids;
  for (const auto& box : source.registry.decompose(m.domain)) {
    out.registry.add_box(box.id, box.in_ports, box.out_ports);
    dom_ids.push_back(box.id);
  }
  for (const auto& box : source.registry.decompose(m.codomain)) {
    if (!out.registry.has_box(box.id)) {
      out.registry.add_box(box.id, box.in_ports, box.out_ports);
    }
    cod_ids.push_back(box.id);
  }
  fa::WiringArrow arrow = fa::from_mat(m, id);
  out.registry.add_arrow(id, dom_ids, cod_ids, arrow.links_in, arrow.links_out);
  return out;
}

int cmd_validate(const Options& opt) {
  fa::Model model = fa::load_model(opt.file);
  if (json_output(opt)) {
    json report;
    report["valid"] = true;
    report["boxes"] = model.registry.boxes().size();
    report["arrows"] = model.registry.arrows().size();
    report["multi_arrows"] = model.multi_arrows.size();
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << "ok: " << model.registry.boxes().size() << " boxes, "
              << model.registry.arrows().size() << " arrows, "
              << model.multi_arrows.size() << " multi-arrows\n";
  }
  return 0;
}

int cmd_compose(const Options& opt) {
  fa::Model model = fa::load_model(opt.file);
  const fa::WiringArrow& outer = model.registry.arrow(opt.outer);
  const fa::WiringArrow& inner = model.registry.arrow(opt.inner);
  fa::MatArrow composed = fa::compose(fa::to_mat(outer), fa::to_mat(inner));
  const std::string composed_id = opt.outer + "_" + opt.inner;

  if (opt.emit == "matrices") {
    if (json_output(opt)) {
      json out;
      out["O_in"] = matrix_json(composed.m_in);
      out["O_out"] = matrix_json(composed.m_out);
      write_output(opt, out.dump(2) + "\n");
    } else {
      std::string text = "O^in =\n" + fa::format_matrix(composed.m_in) + "O^out =\n" +
                         fa::format_matrix(composed.m_out);
      write_output(opt, text);
    }
  } else if (opt.emit == "model") {
    write_output(opt, fa::save_model(model_of_arrow(model, composed, composed_id)));
  } else if (opt.emit == "dot") {
    write_output(opt, fa::render_dot(fa::from_mat(composed, composed_id),
                                     model.registry.decompose(composed.domain)));
  } else {
    throw CLI::ValidationError("--emit must be matrices, model or dot");
  }
  return 0;
}

int cmd_tensor(const Options& opt) {
  fa::Model model = fa::load_model(opt.file);
  if (model.registry.has_box(opt.left) && model.registry.has_box(opt.right)) {
    fa::BoxShape t = fa::tensor(model.registry.box(opt.left), model.registry.box(opt.right));
    if (json_output(opt)) {
      json out;
      out["id"] = t.id;
      out["in"] = std::vector<std::string>(t.in_ports.begin(), t.in_ports.end());
      out["out"] = std::vector<std::string>(t.out_ports.begin(), t.out_ports.end());
      write_output(opt, out.dump(2) + "\n");
    } else {
      std::string text = t.id + "\n  in:";
      for (const auto& p : t.in_ports) text += " " + p;
      text += "\n  out:";
      for (const auto& p : t.out_ports) text += " " + p;
      write_output(opt, text + "\n");
    }
    return 0;
  }
  const fa::WiringArrow& left = model.registry.arrow(opt.left);
  const fa::WiringArrow& right = model.registry.arrow(opt.right);
  fa::WiringArrow t = fa::tensor(left, right);
  fa::Model out = model_of_arrow(model, fa::to_mat(t), opt.left + "_" + opt.right);
  write_output(opt, fa::save_model(out));
  return 0;
}

int cmd_render(const Options& opt) {
  fa::Model model = fa::load_model(opt.file);
  std::string dot;
  if (const fa::MultiArrowRecord* record = model.find_multi(opt.arrow_id)) {
    dot = fa::render_dot(model.realize(*record));
  } else {
    const fa::WiringArrow& arrow = model.registry.arrow(opt.arrow_id);
    dot = fa::render_dot(arrow, model.registry.decompose(arrow.domain));
  }
  write_output(opt, dot);
  return 0;
}

int cmd_interpret(const Options& opt) {
  fa::Model model = fa::load_model(opt.file);
  fa::MultiArrow ma = select_arrow(model, opt.arrow_id);
  std::map<std::string, std::string> inputs = parse_inputs(opt.inputs);

  std::string algebra = opt.algebra;
  if (algebra.empty() && model.bindings.algebra) algebra = *model.bindings.algebra;
  if (algebra.empty()) {
    fa::fail(fa::ErrorKind::MissingAction,
             "no algebra selected; pass --algebra or bind one in the document");
  }

  json report;
  std::string text;
  if (algebra == "mass") {
    if (!model.bindings.mass && inputs.empty()) {
      fa::fail(fa::ErrorKind::MissingMass, "the document carries no mass bindings");
    }
    fa::MassAssignment assignment;
    fa::MassVariant variant = fa::MassVariant::SumOnly;
    if (model.bindings.mass) {
      assignment = model.bindings.mass->assignment;
      variant = model.bindings.mass->variant;
    }
    for (const auto& [box_id, v] : inputs) {
      assignment.box_mass[box_id] = std::strtod(v.c_str(), nullptr);
    }
    fa::Algebra alg = fa::mass_algebra(assignment, variant);
    std::vector<fa::Value> args;
    for (const auto& box : ma.domains) {
      auto it = assignment.box_mass.find(box.id);
      if (it == assignment.box_mass.end()) {
        fa::fail(fa::ErrorKind::MissingMass, "no mass assigned to box \"" + box.id + "\"");
      }
      args.emplace_back(it->second);
    }
    double mass = std::get<double>(alg.action(ma, args));
    report["value"] = mass;
    text = "mass=" + format_number(mass) + "\n";
  } else if (algebra == "dataflow") {
    if (!model.bindings.dataflow) {
      fa::fail(fa::ErrorKind::MissingAction, "the document carries no dataflow bindings");
    }
    const fa::DataflowBinding& binding = *model.bindings.dataflow;
    std::vector<fa::BoxBehavior> behaviors;
    for (const auto& box : ma.domains) {
      auto it = binding.tables.find(box.id);
      if (it == binding.tables.end()) {
        fa::fail(fa::ErrorKind::MissingAction,
                 "no truth table bound to box \"" + box.id + "\"");
      }
      behaviors.push_back(fa::behavior_from_table(it->second));
    }
    fa::BoxBehavior composite = fa::composite_behavior(ma, behaviors, binding.defaults);
    fa::PortValuation valuation;
    for (const auto& [port, value] : inputs) {
      if (!ma.codomain.in_ports.count(port)) {
        fa::fail(fa::ErrorKind::UnknownPort,
                 "\"" + port + "\" is not an input port of box \"" + ma.codomain.id + "\"");
      }
      valuation[port] = value;
    }
    fa::PortValuation out = composite(valuation);
    json outputs = json::object();
    bool first = true;
    for (const auto& [port, value] : out) {
      outputs[port] = value;
      text += (first ? "" : ",") + port + "=" + value;
      first = false;
    }
    text += "\n";
    report["outputs"] = std::move(outputs);
  } else if (algebra == "instance") {
    if (!model.bindings.instance) {
      fa::fail(fa::ErrorKind::MissingAction, "the document carries no instance bindings");
    }
    std::vector<std::string> args;
    for (const auto& box : ma.domains) {
      auto it = inputs.find(box.id);
      if (it == inputs.end()) {
        fa::fail(fa::ErrorKind::ArgOutOfSet,
                 "pass --inputs " + box.id + "=<usage> for every domain box");
      }
      args.push_back(it->second);
    }
    std::string value = fa::instance_eval(model.bindings.instance->instance, ma, args);
    report["value"] = value;
    text = value + "\n";
  } else {
    fa::fail(fa::ErrorKind::MissingAction, "unknown algebra \"" + algebra + "\"");
  }

  if (json_output(opt)) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << text;
  }
  return 0;
}

// Mass samples for the functor-law check: seeded random positive masses per
// box, plus the bound masses themselves when present.
fa::SampleSet law_samples(const fa::Model& model, const fa::Algebra& alg,
                          std::uint64_t seed, int count) {
  fa::SampleSet samples;
  fa::Rng rng(seed);
  for (const auto& [id, box] : model.registry.boxes()) {
    std::vector<fa::Value>& values = samples.by_box[id];
    if (alg.name == "mass") {
      if (model.bindings.mass) {
        auto it = model.bindings.mass->assignment.box_mass.find(id);
        if (it != model.bindings.mass->assignment.box_mass.end()) {
          values.emplace_back(it->second);
        }
      }
      for (int i = 0; i < count; ++i) values.emplace_back(rng.real(0.1, 100.0));
    } else if (alg.name == "dataflow") {
      auto it = model.bindings.dataflow->tables.find(id);
      if (it != model.bindings.dataflow->tables.end()) {
        values.emplace_back(fa::behavior_from_table(it->second));
      } else {
        samples.by_box.erase(id);
      }
    } else if (alg.name == "instance") {
      auto it = model.bindings.instance->instance.usage_sets.find(id);
      if (it != model.bindings.instance->instance.usage_sets.end()) {
        for (const auto& token : it->second) values.emplace_back(token);
      } else {
        samples.by_box.erase(id);
      }
    }
  }
  return samples;
}

int cmd_check_laws(const Options& opt) {
  fa::Model model = fa::load_model(opt.file);
  std::uint64_t seed = opt.seed;
  if (const char* env = std::getenv("FA_SEED")) {
    seed = std::strtoull(env, nullptr, 10);
  }
  const int n = opt.samples;

  std::vector<fa::SuiteResult> suites = {
      fa::semiring_axiom_suite(seed, n),
      fa::matrix_law_suite(seed, std::max(1, n / 4)),
      fa::identity_law_suite(seed, n),
      fa::associativity_suite(seed, std::max(1, n / 2)),
      fa::tensor_law_suite(seed, std::max(1, n / 2)),
      fa::interchange_suite(seed, std::max(1, n / 2)),
      fa::roundtrip_suite(seed, n),
  };

  // Laws on the document's own arrows.
  fa::SuiteResult doc_suite;
  doc_suite.name = "document-arrows";
  for (const auto& [id, arrow] : model.registry.arrows()) {
    fa::MatArrow m = fa::to_mat(arrow);
    ++doc_suite.checked;
    if (!(fa::compose(m, fa::to_mat(fa::arrow_identity(arrow.domain))) == m &&
          fa::compose(fa::to_mat(fa::arrow_identity(arrow.codomain)), m) == m)) {
      doc_suite.failures.push_back("identity law fails for arrow \"" + id + "\"");
    }
    ++doc_suite.checked;
    // Compare in matrix form: self-connecting links are epsilon wires and
    // only round-trip up to their (synthesized) labels.
    if (!(fa::to_mat(fa::from_mat(m, id)) == m)) {
      doc_suite.failures.push_back("matrix round trip fails for arrow \"" + id + "\"");
    }
  }
  suites.push_back(std::move(doc_suite));

  // Functor laws of the bound algebra, if any.
  std::optional<fa::LawReport> functor_report;
  std::string algebra_name;
  if (model.bindings.algebra || model.bindings.mass || model.bindings.dataflow ||
      model.bindings.instance) {
    std::optional<fa::Algebra> alg;
    algebra_name = model.bindings.algebra.value_or("");
    if (algebra_name.empty()) {
      if (model.bindings.mass) algebra_name = "mass";
      else if (model.bindings.dataflow) algebra_name = "dataflow";
      else algebra_name = "instance";
    }
    if (algebra_name == "mass" && model.bindings.mass) {
      alg = fa::mass_algebra(model.bindings.mass->assignment, model.bindings.mass->variant);
    } else if (algebra_name == "dataflow" && model.bindings.dataflow) {
      alg = fa::dataflow_algebra(model.bindings.dataflow->tables,
                                 fa::DataflowOptions{model.bindings.dataflow->defaults, {}});
    } else if (algebra_name == "instance" && model.bindings.instance) {
      alg = fa::instance_algebra(model.bindings.instance->instance);
    }
    if (alg) {
      functor_report =
          fa::check_functor_laws(*alg, model.registry, law_samples(model, *alg, seed, 50));
    }
  }

  bool all_ok = true;
  for (const auto& s : suites) all_ok &= s.ok();
  if (functor_report) all_ok &= functor_report->ok();

  if (json_output(opt)) {
    json out;
    out["passed"] = all_ok;
    json suites_json = json::array();
    for (const auto& s : suites) {
      json item;
      item["name"] = s.name;
      item["checked"] = s.checked;
      item["failures"] = s.failures;
      suites_json.push_back(std::move(item));
    }
    out["suites"] = std::move(suites_json);
    if (functor_report) {
      json laws = json::array();
      for (const auto& c : functor_report->checks) {
        json item;
        item["law"] = c.law;
        item["subject"] = c.subject;
        item["passed"] = c.passed;
        item["detail"] = c.detail;
        laws.push_back(std::move(item));
      }
      out["functor_laws"] = std::move(laws);
      out["algebra"] = algebra_name;
    }
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& s : suites) {
      std::cout << (s.ok() ? "[ok]   " : "[FAIL] ") << s.name << " (" << s.checked
                << " checks)\n";
      for (const auto& f : s.failures) std::cout << "       " << f << "\n";
    }
    if (functor_report) {
      for (const auto& c : functor_report->checks) {
        std::cout << (c.passed ? "[ok]   " : "[FAIL] ") << algebra_name << " " << c.law
                  << " law: " << c.subject;
        if (!c.detail.empty()) std::cout << " — " << c.detail;
        std::cout << "\n";
      }
    }
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fa — compositional model kernel"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  auto add_file = [&](CLI::App* cmd) {
    cmd->add_option("file", opt.file, "Model file")->required();
  };

  CLI::App* validate = app.add_subcommand("validate", "Load and validate a model file");
  add_file(validate);

  CLI::App* compose = app.add_subcommand("compose", "Compose two arrows of a model");
  add_file(compose);
  compose->add_option("--outer", opt.outer, "Outer arrow id")->required();
  compose->add_option("--inner", opt.inner, "Inner arrow id")->required();
  compose->add_option("--emit", opt.emit, "What to emit")
      ->check(CLI::IsMember({"matrices", "model", "dot"}));
  compose->add_option("-o,--output", opt.output, "Output file (default stdout)");

  CLI::App* tensor = app.add_subcommand("tensor", "Tensor two boxes or two arrows");
  add_file(tensor);
  tensor->add_option("--left", opt.left, "Left box or arrow id")->required();
  tensor->add_option("--right", opt.right, "Right box or arrow id")->required();
  tensor->add_option("-o,--output", opt.output, "Output file (default stdout)");

  CLI::App* render = app.add_subcommand("render", "Render an arrow as DOT");
  add_file(render);
  render->add_option("--arrow", opt.arrow_id, "Arrow id")->required();
  render->add_option("-o,--output", opt.output, "Output file (default stdout)");

  CLI::App* interpret = app.add_subcommand("interpret", "Evaluate an algebra over an arrow");
  add_file(interpret);
  interpret->add_option("--algebra", opt.algebra, "Algebra name (mass, dataflow, instance)");
  interpret->add_option("--inputs", opt.inputs, "Comma-separated k=v inputs");
  interpret->add_option("--arrow", opt.arrow_id, "Arrow id (defaults to the only arrow)");

  CLI::App* check = app.add_subcommand("check-laws", "Run the law suites");
  add_file(check);
  check->add_option("--samples", opt.samples, "Sample count per suite")
      ->capture_default_str();
  check->add_option("--seed", opt.seed, "Random seed (FA_SEED overrides)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(validate)) return cmd_validate(opt);
    if (app.got_subcommand(compose)) return cmd_compose(opt);
    if (app.got_subcommand(tensor)) return cmd_tensor(opt);
    if (app.got_subcommand(render)) return cmd_render(opt);
    if (app.got_subcommand(interpret)) return cmd_interpret(opt);
    if (app.got_subcommand(check)) return cmd_check_laws(opt);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const fa::Error& e) {
    if (json_output(opt)) {
      json out;
      out["error"]["kind"] = std::string(fa::to_string(e.kind()));
      out["error"]["message"] = e.message();
      out["error"]["location"] = e.location();
      std::cout << out.dump(2) << "\n";
    } else {
      std::cerr << "error: " << e.what() << "\n";
    }
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
