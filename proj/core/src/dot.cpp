#include "fa/dot.hpp"

#include <map>

namespace fa {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string escape_record(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '{' || c == '}' || c == '|' || c == '<' || c == '>' || c == '"' || c == '\\') {
      out += '\\';
    }
    out += c;
  }
  return out;
}

std::string record_label(const BoxShape& box) {
  std::string label = "{{";
  bool first = true;
  for (const auto& p : box.in_ports) {
    if (!first) label += '|';
    first = false;
    label += "<" + escape_record(p) + ">" + escape_record(p);
  }
  label += "}|" + escape_record(box.id) + "|{";
  first = true;
  for (const auto& p : box.out_ports) {
    if (!first) label += '|';
    first = false;
    label += "<" + escape_record(p) + ">" + escape_record(p);
  }
  label += "}}";
  return label;
}

}  // namespace

std::string render_dot(const WiringArrow& arrow, std::vector<BoxShape> constituents) {
  if (constituents.empty()) constituents.push_back(arrow.domain);

  // Port -> constituent id, for edge endpoints into record compartments.
  std::map<std::string, std::string> owner;
  for (const auto& box : constituents) {
    for (const auto& p : box.in_ports) owner.emplace(p, box.id);
    for (const auto& p : box.out_ports) owner.emplace(p, box.id);
  }
  auto endpoint = [&](const std::string& port) {
    auto it = owner.find(port);
    if (it != owner.end()) {
      return "\"" + escape(it->second) + "\":\"" + escape(port) + "\"";
    }
    return "\"" + escape(port) + "\"";
  };

  std::string out = "digraph model {\n";
  out += "  rankdir=LR;\n";
  out += "  subgraph \"cluster_" + escape(arrow.codomain.id) + "\" {\n";
  out += "    label=\"" + escape(arrow.codomain.id) + "\";\n";
  for (const auto& p : arrow.codomain.in_ports) {
    out += "    \"" + escape(p) + "\" [label=\"" + escape(p) + "\", shape=circle];\n";
  }
  for (const auto& p : arrow.codomain.out_ports) {
    out += "    \"" + escape(p) + "\" [label=\"" + escape(p) + "\", shape=doublecircle];\n";
  }
  for (const auto& box : constituents) {
    if (box.is_unit()) continue;
    out += "    \"" + escape(box.id) + "\" [shape=record, label=\"" + record_label(box) +
           "\"];\n";
  }
  out += "  }\n";
  for (const auto* links : {&arrow.links_in, &arrow.links_out}) {
    for (const Link& l : *links) {
      out += "  " + endpoint(l.source) + " -> " + endpoint(l.target) + " [label=\"" +
             escape(l.label.str()) + "\"];\n";
    }
  }
  out += "}\n";
  return out;
}

std::string render_dot(const MultiArrow& ma) {
  return render_dot(from_mat(ma.body, ma.id), ma.domains);
}

}  // namespace fa
