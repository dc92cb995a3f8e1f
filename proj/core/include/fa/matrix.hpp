#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fa/semiring.hpp"

namespace fa {

// An ordered list of distinct port names, used to index matrix rows and
// columns. Matrices are indexed by port *sets*; the order stored here is the
// canonical one used for display and serialization (lexicographic within each
// declared group, groups in declaration order).
class PortIndex {
 public:
  PortIndex() = default;

  // Canonical (sorted) index over a set of ports.
  static PortIndex sorted(const std::set<std::string>& ports);
  // Index with an explicit order. Rejects duplicates.
  static PortIndex of(std::vector<std::string> ports);
  // Concatenation of groups, kept in group order. Rejects cross-group
  // duplicates.
  static PortIndex concat(const std::vector<PortIndex>& groups);

  bool contains(std::string_view port) const;
  std::size_t size() const noexcept { return ports_.size(); }
  bool empty() const noexcept { return ports_.empty(); }
  const std::vector<std::string>& ports() const noexcept { return ports_; }

  // Index equality for matrix semantics is equality of port sets.
  bool same_set(const PortIndex& other) const;

  bool operator==(const PortIndex& other) const { return ports_ == other.ports_; }

 private:
  std::vector<std::string> ports_;
  std::set<std::string, std::less<>> lookup_;
};

// A sparse matrix over the language semiring, with rows and columns indexed
// by ports. Empty entries are not stored. Two matrices are equal when they
// have the same row and column port sets and agree entrywise, regardless of
// storage or index order.
class SemiringMatrix {
 public:
  using CellMap = std::map<std::pair<std::string, std::string>, Lang>;

  SemiringMatrix() = default;
  SemiringMatrix(PortIndex rows, PortIndex cols);

  static SemiringMatrix zero(PortIndex rows, PortIndex cols);
  static SemiringMatrix identity(const PortIndex& index);

  const PortIndex& rows() const noexcept { return rows_; }
  const PortIndex& cols() const noexcept { return cols_; }

  // Entry lookup; the empty language for anything not stored. Throws
  // UnknownPort for ports outside the index.
  const Lang& at(std::string_view row, std::string_view col) const;
  void set(const std::string& row, const std::string& col, Lang value);
  // Union `value` into the entry.
  void accumulate(const std::string& row, const std::string& col, const Lang& value);

  const CellMap& cells() const noexcept { return cells_; }
  bool is_zero() const noexcept { return cells_.empty(); }

  bool operator==(const SemiringMatrix& other) const;

 private:
  void check_indexed(std::string_view row, std::string_view col) const;

  PortIndex rows_, cols_;
  CellMap cells_;
};

// Matrix product over the semiring. Requires cols(a) and rows(b) to be the
// same port set.
SemiringMatrix operator*(const SemiringMatrix& a, const SemiringMatrix& b);

// Entrywise union of two matrices over the same row/col sets.
SemiringMatrix entrywise_union(const SemiringMatrix& a, const SemiringMatrix& b);

// Assemble one matrix from a grid of blocks. grid[i][j] must be indexed by
// (row_groups[i], col_groups[j]); the result is indexed by the concatenated
// groups.
SemiringMatrix block(const std::vector<std::vector<SemiringMatrix>>& grid,
                     const std::vector<PortIndex>& row_groups,
                     const std::vector<PortIndex>& col_groups);

// The function view of a matrix: a total map (row, col) -> Lang and back.
using EntryFn = std::function<Lang(const std::string&, const std::string&)>;
SemiringMatrix matrix_from_fn(const EntryFn& fn, const PortIndex& rows,
                              const PortIndex& cols);
EntryFn matrix_to_fn(const SemiringMatrix& m);

// Debug pretty-printer in the block-array layout used throughout the text
// displays: column headers, one row per row port, entries as brace-sets.
// Not a stable format.
std::string format_matrix(const SemiringMatrix& m);

}  // namespace fa
