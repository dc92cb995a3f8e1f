#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fa/matrix.hpp"
#include "fa/semiring.hpp"
#include "fa/structure.hpp"

namespace fa {

// Deterministic random source for the law suites and tests. The same seed
// always yields the same sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  int below(int n);                 // uniform in [0, n)
  bool chance(double p);
  double real(double lo, double hi);

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(below(static_cast<int>(items.size())))];
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// A random language: at most max_words words of length at most max_word_len
// over the given alphabet (the empty word included occasionally).
Lang random_lang(Rng& rng, const std::vector<std::string>& alphabet,
                 int max_words = 5, int max_word_len = 4);

SemiringMatrix random_matrix(Rng& rng, const PortIndex& rows, const PortIndex& cols,
                             const std::vector<std::string>& alphabet,
                             double density = 0.4);

// Grows a private registry of fresh boxes and valid random arrows; every port
// and label is globally fresh so R1-R3 hold by construction.
class ArrowFactory {
 public:
  explicit ArrowFactory(std::uint64_t seed) : rng_(seed) {}

  // A box with up to max_side input and output ports (either side may be
  // empty).
  const BoxShape& fresh_box(int max_side = 3);
  // A box with at least one port on each side.
  const BoxShape& fresh_box_nonempty(int max_side = 3);

  // A valid random arrow dom -> cod with up to max_links links per side.
  const WiringArrow& random_arrow(const BoxShape& dom, const BoxShape& cod,
                                  int max_links = 4);

  Rng& rng() noexcept { return rng_; }
  Registry& registry() noexcept { return registry_; }

 private:
  Rng rng_;
  Registry registry_;
  int next_box_ = 0;
  int next_port_ = 0;
  int next_label_ = 0;
};

}  // namespace fa
