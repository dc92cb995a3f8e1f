#include "fa/generate.hpp"

namespace fa {

int Rng::below(int n) {
  if (n <= 1) return 0;
  return std::uniform_int_distribution<int>(0, n - 1)(engine_);
}

bool Rng::chance(double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_) < p;
}

double Rng::real(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

Lang random_lang(Rng& rng, const std::vector<std::string>& alphabet, int max_words,
                 int max_word_len) {
  std::set<Word> words;
  int n = rng.below(max_words + 1);
  for (int i = 0; i < n; ++i) {
    std::vector<std::string> atoms;
    int len = rng.below(max_word_len + 1);
    for (int j = 0; j < len; ++j) atoms.push_back(rng.pick(alphabet));
    words.insert(Word(std::move(atoms)));
  }
  return Lang(std::move(words));
}

SemiringMatrix random_matrix(Rng& rng, const PortIndex& rows, const PortIndex& cols,
                             const std::vector<std::string>& alphabet, double density) {
  SemiringMatrix m(rows, cols);
  for (const auto& r : rows.ports()) {
    for (const auto& c : cols.ports()) {
      if (rng.chance(density)) m.set(r, c, random_lang(rng, alphabet, 3, 3));
    }
  }
  return m;
}

const BoxShape& ArrowFactory::fresh_box(int max_side) {
  std::string id = "B" + std::to_string(next_box_++);
  std::set<std::string> in_ports, out_ports;
  int n_in = rng_.below(max_side + 1);
  int n_out = rng_.below(max_side + 1);
  for (int i = 0; i < n_in; ++i) in_ports.insert("p" + std::to_string(next_port_++));
  for (int i = 0; i < n_out; ++i) out_ports.insert("p" + std::to_string(next_port_++));
  return registry_.add_box(id, std::move(in_ports), std::move(out_ports));
}

const BoxShape& ArrowFactory::fresh_box_nonempty(int max_side) {
  std::string id = "B" + std::to_string(next_box_++);
  std::set<std::string> in_ports, out_ports;
  int n_in = 1 + rng_.below(max_side);
  int n_out = 1 + rng_.below(max_side);
  for (int i = 0; i < n_in; ++i) in_ports.insert("p" + std::to_string(next_port_++));
  for (int i = 0; i < n_out; ++i) out_ports.insert("p" + std::to_string(next_port_++));
  return registry_.add_box(id, std::move(in_ports), std::move(out_ports));
}

const WiringArrow& ArrowFactory::random_arrow(const BoxShape& dom, const BoxShape& cod,
                                              int max_links) {
  std::vector<std::string> in_targets(dom.in_ports.begin(), dom.in_ports.end());
  std::vector<std::string> in_sources(dom.out_ports.begin(), dom.out_ports.end());
  in_sources.insert(in_sources.end(), cod.in_ports.begin(), cod.in_ports.end());
  std::vector<std::string> out_targets(cod.out_ports.begin(), cod.out_ports.end());
  std::vector<std::string> out_sources(dom.out_ports.begin(), dom.out_ports.end());

  std::vector<Link> links_in, links_out;
  if (!in_targets.empty() && !in_sources.empty()) {
    int n = rng_.below(max_links + 1);
    for (int i = 0; i < n; ++i) {
      links_in.push_back({Word("k" + std::to_string(next_label_++)),
                          rng_.pick(in_targets), rng_.pick(in_sources)});
    }
  }
  if (!out_targets.empty() && !out_sources.empty()) {
    int n = rng_.below(max_links + 1);
    for (int i = 0; i < n; ++i) {
      links_out.push_back({Word("k" + std::to_string(next_label_++)),
                           rng_.pick(out_targets), rng_.pick(out_sources)});
    }
  }
  std::string id = "t" + std::to_string(next_label_++);
  return registry_.add_arrow(id, {dom.id}, cod.id, std::move(links_in),
                             std::move(links_out));
}

}  // namespace fa
