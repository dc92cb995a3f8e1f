#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fa {

// Outcome of one seeded law suite. `checked` counts individual law
// instances; a failure message names the law and the offending case.
struct SuiteResult {
  std::string name;
  int checked = 0;
  std::vector<std::string> failures;

  bool ok() const noexcept { return failures.empty(); }
};

// All eight semiring axioms (associativity, commutativity and unit of the
// union; associativity, two-sided unit and two-sided annihilation of the
// product; both distributivities) on random language triples.
SuiteResult semiring_axiom_suite(std::uint64_t seed, int samples);

// Matrix laws over random conformable matrices: product associativity,
// two-sided identity, distributivity over entrywise union, and the
// function/matrix round trip.
SuiteResult matrix_law_suite(std::uint64_t seed, int samples);

// m composed with the identity on either side equals m, with exact matrix
// equality, over random valid arrows.
SuiteResult identity_law_suite(std::uint64_t seed, int samples);

// p(mn) = (pm)n over random composable triples.
SuiteResult associativity_suite(std::uint64_t seed, int samples);

// Strict monoidal laws on boxes (unit, associativity, commutativity,
// idempotence) and the corresponding arrow-level laws.
SuiteResult tensor_law_suite(std::uint64_t seed, int samples);

// Bifunctoriality: tensoring two composites equals composing the tensors.
SuiteResult interchange_suite(std::uint64_t seed, int samples);

// to_mat / from_mat is the identity on random atomic arrows.
SuiteResult roundtrip_suite(std::uint64_t seed, int samples);

}  // namespace fa
