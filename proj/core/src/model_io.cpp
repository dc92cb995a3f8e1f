#include "fa/model_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fa/error.hpp"

namespace fa {

namespace {

using nlohmann::json;

constexpr const char* kFormatVersion = "fa/1";

[[noreturn]] void parse_fail(const std::string& message, const std::string& location) {
  throw Error(ErrorKind::ParseError, message, location);
}

const json& field(const json& obj, const char* key, const std::string& location) {
  auto it = obj.find(key);
  if (it == obj.end()) parse_fail(std::string("missing key \"") + key + "\"", location);
  return *it;
}

std::string get_string(const json& value, const std::string& location) {
  if (!value.is_string()) parse_fail("expected a string", location);
  return value.get<std::string>();
}

double get_number(const json& value, const std::string& location) {
  if (!value.is_number()) parse_fail("expected a number", location);
  return value.get<double>();
}

std::vector<std::string> get_string_array(const json& value, const std::string& location) {
  if (!value.is_array()) parse_fail("expected an array", location);
  std::vector<std::string> out;
  for (const auto& item : value) out.push_back(get_string(item, location));
  return out;
}

// Splits a namespaced identifier "<boxid>.<name>" at the first dot.
std::pair<std::string, std::string> split_qualified(const std::string& qualified,
                                                    const std::string& location) {
  auto dot = qualified.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 >= qualified.size()) {
    parse_fail("identifier \"" + qualified + "\" is not of the form <boxid>.<port>", location);
  }
  return {qualified.substr(0, dot), qualified.substr(dot + 1)};
}

// Resolves "<boxid>.<port>" against the registry and returns the flat port.
std::string resolve_port(const Registry& registry, const std::string& qualified,
                         const std::string& location) {
  auto [box_id, port] = split_qualified(qualified, location);
  if (!registry.has_box(box_id)) {
    throw Error(ErrorKind::UnknownBox, "no box \"" + box_id + "\"", location);
  }
  if (!registry.box(box_id).owns_port(port)) {
    throw Error(ErrorKind::UnknownPort,
                "box \"" + box_id + "\" has no port \"" + port + "\"", location);
  }
  return port;
}

std::string qualify_port(const Registry& registry, const std::string& port) {
  const BoxShape* owner = registry.owner_of(port);
  return (owner ? owner->id : std::string("?")) + "." + port;
}

// Re-throws registry validation errors with the document location attached.
template <typename Fn>
auto at_location(const std::string& location, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (!e.location().empty()) throw;
    throw Error(e.kind(), e.message(), location);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what(), location);
  }
}

std::vector<Link> parse_links(const json& arr, const Registry& registry,
                              const std::string& location) {
  if (!arr.is_array()) parse_fail("expected an array of links", location);
  std::vector<Link> links;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string loc = location + "[" + std::to_string(i) + "]";
    const json& l = arr[i];
    if (!l.is_object()) parse_fail("expected a link object", loc);
    Word label = at_location(loc, [&] {
      return Word::parse(get_string(field(l, "label", loc), loc));
    });
    std::string target = resolve_port(registry, get_string(field(l, "target", loc), loc), loc);
    std::string source = resolve_port(registry, get_string(field(l, "source", loc), loc), loc);
    links.push_back({std::move(label), std::move(target), std::move(source)});
  }
  return links;
}

void parse_boxes(const json& doc, Model& model) {
  const json& boxes = field(doc, "boxes", "document");
  if (!boxes.is_array()) parse_fail("\"boxes\" must be an array", "document");
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const std::string loc = "boxes[" + std::to_string(i) + "]";
    const json& b = boxes[i];
    if (!b.is_object()) parse_fail("expected a box object", loc);
    std::string id = get_string(field(b, "id", loc), loc);
    auto strip = [&](const json& arr) {
      std::set<std::string> ports;
      for (const auto& q : get_string_array(arr, loc)) {
        auto [owner, port] = split_qualified(q, loc);
        if (owner != id) {
          parse_fail("port \"" + q + "\" is not namespaced by its box \"" + id + "\"", loc);
        }
        ports.insert(port);
      }
      return ports;
    };
    auto in_ports = strip(field(b, "in", loc));
    auto out_ports = strip(field(b, "out", loc));
    at_location(loc, [&]() -> const BoxShape& {
      return model.registry.add_box(id, std::move(in_ports), std::move(out_ports));
    });
  }
}

void parse_arrows(const json& doc, Model& model) {
  auto it = doc.find("arrows");
  if (it == doc.end()) return;
  if (!it->is_array()) parse_fail("\"arrows\" must be an array", "document");
  for (std::size_t i = 0; i < it->size(); ++i) {
    const std::string loc = "arrows[" + std::to_string(i) + "]";
    const json& a = (*it)[i];
    if (!a.is_object()) parse_fail("expected an arrow object", loc);
    std::string id = get_string(field(a, "id", loc), loc);
    auto box_list = [&](const char* key) {
      const json& value = field(a, key, loc);
      return value.is_string() ? std::vector<std::string>{value.get<std::string>()}
                               : get_string_array(value, loc);
    };
    std::vector<std::string> dom_ids = box_list("dom");
    std::vector<std::string> cod_ids = box_list("cod");
    std::vector<Link> links_in = parse_links(field(a, "links_in", loc), model.registry,
                                             loc + ".links_in");
    std::vector<Link> links_out = parse_links(field(a, "links_out", loc), model.registry,
                                              loc + ".links_out");
    at_location(loc, [&]() -> const WiringArrow& {
      return model.registry.add_arrow(id, dom_ids, cod_ids, std::move(links_in),
                                      std::move(links_out));
    });
  }
}

void parse_multi_arrows(const json& doc, Model& model) {
  auto it = doc.find("multi_arrows");
  if (it == doc.end()) return;
  if (!it->is_array()) parse_fail("\"multi_arrows\" must be an array", "document");
  for (std::size_t i = 0; i < it->size(); ++i) {
    const std::string loc = "multi_arrows[" + std::to_string(i) + "]";
    const json& m = (*it)[i];
    MultiArrowRecord record;
    record.id = get_string(field(m, "id", loc), loc);
    record.domain_ids = get_string_array(field(m, "dom", loc), loc);
    record.codomain_id = get_string(field(m, "cod", loc), loc);
    record.arrow_id = get_string(field(m, "arrow", loc), loc);
    // Realize once so that reference and shape problems surface at load time.
    at_location(loc, [&] { return model.realize(record); });
    model.multi_arrows.push_back(std::move(record));
  }
}

TruthTable parse_table(const json& t, const std::string& box_id, const Model& model,
                       const std::string& loc) {
  if (!t.is_object()) parse_fail("expected a truth-table object", loc);
  const BoxShape& box = at_location(loc, [&]() -> const BoxShape& {
    return model.registry.box(box_id);
  });
  TruthTable table;
  auto resolve_side = [&](const json& arr, const std::set<std::string>& side,
                          const char* what) {
    std::vector<std::string> ports;
    for (const auto& q : get_string_array(arr, loc)) {
      std::string p = resolve_port(model.registry, q, loc);
      if (!side.count(p)) {
        parse_fail("\"" + q + "\" is not an " + what + " port of box \"" + box_id + "\"", loc);
      }
      ports.push_back(p);
    }
    if (ports.size() != side.size()) {
      parse_fail("table must list every " + std::string(what) + " port of box \"" + box_id + "\"",
                 loc);
    }
    return ports;
  };
  table.inputs = resolve_side(field(t, "in", loc), box.in_ports, "input");
  table.outputs = resolve_side(field(t, "out", loc), box.out_ports, "output");
  const json& rows = field(t, "rows", loc);
  if (!rows.is_array()) parse_fail("\"rows\" must be an array", loc);
  for (const auto& row : rows) {
    auto key = get_string_array(field(row, "in", loc), loc);
    auto value = get_string_array(field(row, "out", loc), loc);
    if (key.size() != table.inputs.size() || value.size() != table.outputs.size()) {
      parse_fail("row width does not match the declared ports", loc);
    }
    table.rows[std::move(key)] = std::move(value);
  }
  return table;
}

void parse_bindings(const json& doc, Model& model) {
  auto it = doc.find("bindings");
  if (it == doc.end()) return;
  const json& b = *it;
  if (!b.is_object()) parse_fail("\"bindings\" must be an object", "bindings");

  if (auto a = b.find("algebra"); a != b.end()) {
    std::string name = get_string(*a, "bindings.algebra");
    if (name != "mass" && name != "dataflow" && name != "instance") {
      parse_fail("unknown algebra \"" + name + "\"", "bindings.algebra");
    }
    model.bindings.algebra = name;
  }

  if (auto m = b.find("mass"); m != b.end()) {
    const std::string loc = "bindings.mass";
    MassBinding mass;
    std::string variant = get_string(field(*m, "variant", loc), loc);
    if (variant == "sum") {
      mass.variant = MassVariant::SumOnly;
    } else if (variant == "sum_plus_links") {
      mass.variant = MassVariant::SumPlusLinks;
    } else {
      parse_fail("variant must be \"sum\" or \"sum_plus_links\"", loc);
    }
    if (auto boxes = m->find("boxes"); boxes != m->end()) {
      for (const auto& item : boxes->items()) {
        const std::string& id = item.key();
        at_location(loc, [&]() -> const BoxShape& { return model.registry.box(id); });
        mass.assignment.box_mass[id] = get_number(item.value(), loc);
      }
    }
    if (auto links = m->find("links"); links != m->end()) {
      std::set<std::string> known_atoms;
      for (const auto& [_, arrow] : model.registry.arrows()) {
        for (const auto* side : {&arrow.links_in, &arrow.links_out}) {
          for (const Link& l : *side) {
            known_atoms.insert(l.label.atoms().begin(), l.label.atoms().end());
          }
        }
      }
      for (const auto& [atom, v] : links->items()) {
        if (!known_atoms.count(atom)) {
          parse_fail("link mass names unknown label \"" + atom + "\"", loc);
        }
        mass.assignment.link_mass[atom] = get_number(v, loc);
      }
    }
    model.bindings.mass = std::move(mass);
  }

  if (auto d = b.find("dataflow"); d != b.end()) {
    const std::string loc = "bindings.dataflow";
    DataflowBinding dataflow;
    if (auto defaults = d->find("defaults"); defaults != d->end()) {
      for (const auto& [q, v] : defaults->items()) {
        dataflow.defaults[resolve_port(model.registry, q, loc)] = get_string(v, loc);
      }
    }
    if (auto tables = d->find("tables"); tables != d->end()) {
      for (const auto& [box_id, t] : tables->items()) {
        dataflow.tables[box_id] = parse_table(t, box_id, model, loc + ".tables." + box_id);
      }
    }
    model.bindings.dataflow = std::move(dataflow);
  }

  if (auto inst = b.find("instance"); inst != b.end()) {
    const std::string loc = "bindings.instance";
    std::map<std::string, std::set<std::string>> sets;
    std::map<std::string, std::map<std::vector<std::string>, std::string>> fns;
    if (auto s = inst->find("sets"); s != inst->end()) {
      for (const auto& item : s->items()) {
        const std::string& box_id = item.key();
        at_location(loc, [&]() -> const BoxShape& { return model.registry.box(box_id); });
        auto list = get_string_array(item.value(), loc);
        sets[box_id] = {list.begin(), list.end()};
      }
    }
    if (auto f = inst->find("fns"); f != inst->end()) {
      for (const auto& [arrow_id, rows] : f->items()) {
        if (!model.registry.has_arrow(arrow_id)) {
          bool is_multi = false;
          for (const auto& r : model.multi_arrows) is_multi |= r.id == arrow_id;
          if (!is_multi) {
            throw Error(ErrorKind::UnknownArrow, "no arrow \"" + arrow_id + "\"", loc);
          }
        }
        if (!rows.is_array()) parse_fail("\"fns\" entries must be arrays of rows", loc);
        for (const auto& row : rows) {
          auto args = get_string_array(field(row, "args", loc), loc);
          fns[arrow_id][std::move(args)] = get_string(field(row, "value", loc), loc);
        }
      }
    }
    model.bindings.instance = InstanceBinding{instance_new(std::move(sets), std::move(fns))};
  }
}

json links_to_json(const Registry& registry, const std::vector<Link>& links) {
  json arr = json::array();
  for (const Link& l : links) {
    json item;
    item["label"] = l.label.str();
    item["source"] = qualify_port(registry, l.source);
    item["target"] = qualify_port(registry, l.target);
    arr.push_back(std::move(item));
  }
  return arr;
}

json bindings_to_json(const Model& model) {
  const Bindings& b = model.bindings;
  json out = json::object();
  if (b.algebra) out["algebra"] = *b.algebra;
  if (b.mass) {
    json mass;
    mass["variant"] = b.mass->variant == MassVariant::SumOnly ? "sum" : "sum_plus_links";
    json boxes = json::object();
    for (const auto& [id, v] : b.mass->assignment.box_mass) boxes[id] = v;
    if (!boxes.empty()) mass["boxes"] = std::move(boxes);
    json links = json::object();
    for (const auto& [atom, v] : b.mass->assignment.link_mass) links[atom] = v;
    if (!links.empty()) mass["links"] = std::move(links);
    out["mass"] = std::move(mass);
  }
  if (b.dataflow) {
    json dataflow = json::object();
    if (!b.dataflow->defaults.empty()) {
      json defaults = json::object();
      for (const auto& [p, v] : b.dataflow->defaults) {
        defaults[qualify_port(model.registry, p)] = v;
      }
      dataflow["defaults"] = std::move(defaults);
    }
    if (!b.dataflow->tables.empty()) {
      json tables = json::object();
      for (const auto& [box_id, table] : b.dataflow->tables) {
        // Canonical column order is sorted; rows are re-keyed to match.
        std::vector<std::size_t> in_perm(table.inputs.size());
        std::vector<std::size_t> out_perm(table.outputs.size());
        auto sorted_perm = [](const std::vector<std::string>& ports,
                              std::vector<std::size_t>& perm) {
          for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
          std::sort(perm.begin(), perm.end(),
                    [&](std::size_t a, std::size_t b) { return ports[a] < ports[b]; });
        };
        sorted_perm(table.inputs, in_perm);
        sorted_perm(table.outputs, out_perm);
        json t;
        json in_ports = json::array();
        for (std::size_t i : in_perm) {
          in_ports.push_back(qualify_port(model.registry, table.inputs[i]));
        }
        json out_ports = json::array();
        for (std::size_t i : out_perm) {
          out_ports.push_back(qualify_port(model.registry, table.outputs[i]));
        }
        std::map<std::vector<std::string>, std::vector<std::string>> rows;
        for (const auto& [key, value] : table.rows) {
          std::vector<std::string> k, v;
          for (std::size_t i : in_perm) k.push_back(key[i]);
          for (std::size_t i : out_perm) v.push_back(value[i]);
          rows[std::move(k)] = std::move(v);
        }
        json rows_json = json::array();
        for (const auto& [key, value] : rows) {
          json row;
          row["in"] = key;
          row["out"] = value;
          rows_json.push_back(std::move(row));
        }
        t["in"] = std::move(in_ports);
        t["out"] = std::move(out_ports);
        t["rows"] = std::move(rows_json);
        tables[box_id] = std::move(t);
      }
      dataflow["tables"] = std::move(tables);
    }
    out["dataflow"] = std::move(dataflow);
  }
  if (b.instance) {
    json inst = json::object();
    if (!b.instance->instance.usage_sets.empty()) {
      json sets = json::object();
      for (const auto& [box_id, tokens] : b.instance->instance.usage_sets) {
        sets[box_id] = std::vector<std::string>(tokens.begin(), tokens.end());
      }
      inst["sets"] = std::move(sets);
    }
    if (!b.instance->instance.usage_fns.empty()) {
      json fns = json::object();
      for (const auto& [arrow_id, rows] : b.instance->instance.usage_fns) {
        json arr = json::array();
        for (const auto& [args, value] : rows) {
          json row;
          row["args"] = args;
          row["value"] = value;
          arr.push_back(std::move(row));
        }
        fns[arrow_id] = std::move(arr);
      }
      inst["fns"] = std::move(fns);
    }
    out["instance"] = std::move(inst);
  }
  return out;
}

}  // namespace

const MultiArrowRecord* Model::find_multi(const std::string& id) const {
  for (const auto& r : multi_arrows) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

MultiArrow Model::realize(const MultiArrowRecord& record) const {
  std::vector<BoxShape> domains;
  for (const auto& id : record.domain_ids) domains.push_back(registry.box(id));
  return multi_arrow(record.id, std::move(domains), registry.box(record.codomain_id),
                     registry.arrow(record.arrow_id));
}

Model load_model_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what(), "document");
  }
  if (!doc.is_object()) parse_fail("a model document is a JSON object", "document");
  std::string format = get_string(field(doc, "format", "document"), "format");
  if (format != kFormatVersion) {
    parse_fail("unsupported format \"" + format + "\" (expected \"" +
                   std::string(kFormatVersion) + "\")",
               "format");
  }
  Model model;
  parse_boxes(doc, model);
  parse_arrows(doc, model);
  parse_multi_arrows(doc, model);
  parse_bindings(doc, model);
  std::sort(model.multi_arrows.begin(), model.multi_arrows.end(),
            [](const MultiArrowRecord& a, const MultiArrowRecord& b) { return a.id < b.id; });
  return model;
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::ParseError, "cannot open \"" + path + "\"", "file");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_model_text(buffer.str());
}

std::string save_model(const Model& model) {
  json doc;
  doc["format"] = kFormatVersion;

  json boxes = json::array();
  for (const auto& [id, box] : model.registry.boxes()) {
    json b;
    b["id"] = id;
    json in_ports = json::array();
    for (const auto& p : box.in_ports) in_ports.push_back(id + "." + p);
    json out_ports = json::array();
    for (const auto& p : box.out_ports) out_ports.push_back(id + "." + p);
    b["in"] = std::move(in_ports);
    b["out"] = std::move(out_ports);
    boxes.push_back(std::move(b));
  }
  doc["boxes"] = std::move(boxes);

  json arrows = json::array();
  for (const auto& [id, arrow] : model.registry.arrows()) {
    json a;
    a["id"] = id;
    auto box_list = [&](const BoxShape& box) -> json {
      std::vector<std::string> ids;
      for (const auto& part : model.registry.decompose(box)) ids.push_back(part.id);
      if (ids.size() == 1) return ids.front();
      return ids;
    };
    a["dom"] = box_list(arrow.domain);
    a["cod"] = box_list(arrow.codomain);
    a["links_in"] = links_to_json(model.registry, arrow.links_in);
    a["links_out"] = links_to_json(model.registry, arrow.links_out);
    arrows.push_back(std::move(a));
  }
  if (!arrows.empty()) doc["arrows"] = std::move(arrows);

  if (!model.multi_arrows.empty()) {
    std::vector<MultiArrowRecord> records = model.multi_arrows;
    std::sort(records.begin(), records.end(),
              [](const MultiArrowRecord& a, const MultiArrowRecord& b) { return a.id < b.id; });
    json multi = json::array();
    for (const auto& r : records) {
      json m;
      m["id"] = r.id;
      m["dom"] = r.domain_ids;
      m["cod"] = r.codomain_id;
      m["arrow"] = r.arrow_id;
      multi.push_back(std::move(m));
    }
    doc["multi_arrows"] = std::move(multi);
  }

  if (!model.bindings.empty()) doc["bindings"] = bindings_to_json(model);

  return doc.dump(2) + "\n";
}

void save_model_file(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::ParseError, "cannot write \"" + path + "\"", "file");
  }
  out << save_model(model);
}

}  // namespace fa
