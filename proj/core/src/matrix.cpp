#include "fa/matrix.hpp"

#include <algorithm>

#include "fa/error.hpp"

namespace fa {

PortIndex PortIndex::sorted(const std::set<std::string>& ports) {
  PortIndex idx;
  idx.ports_.assign(ports.begin(), ports.end());
  idx.lookup_.insert(ports.begin(), ports.end());
  return idx;
}

PortIndex PortIndex::of(std::vector<std::string> ports) {
  PortIndex idx;
  for (auto& p : ports) {
    if (!idx.lookup_.insert(p).second) {
      fail(ErrorKind::DuplicatePort, "duplicate port \"" + p + "\" in index");
    }
  }
  idx.ports_ = std::move(ports);
  return idx;
}

PortIndex PortIndex::concat(const std::vector<PortIndex>& groups) {
  PortIndex idx;
  for (const auto& g : groups) {
    for (const auto& p : g.ports()) {
      if (!idx.lookup_.insert(p).second) {
        fail(ErrorKind::DuplicatePort,
             "port \"" + p + "\" appears in more than one index group");
      }
      idx.ports_.push_back(p);
    }
  }
  return idx;
}

bool PortIndex::contains(std::string_view port) const {
  return lookup_.find(port) != lookup_.end();
}

bool PortIndex::same_set(const PortIndex& other) const {
  return lookup_ == other.lookup_;
}

SemiringMatrix::SemiringMatrix(PortIndex rows, PortIndex cols)
    : rows_(std::move(rows)), cols_(std::move(cols)) {}

SemiringMatrix SemiringMatrix::zero(PortIndex rows, PortIndex cols) {
  return SemiringMatrix(std::move(rows), std::move(cols));
}

SemiringMatrix SemiringMatrix::identity(const PortIndex& index) {
  SemiringMatrix m(index, index);
  for (const auto& p : index.ports()) m.set(p, p, Lang::one());
  return m;
}

void SemiringMatrix::check_indexed(std::string_view row, std::string_view col) const {
  if (!rows_.contains(row)) {
    fail(ErrorKind::UnknownPort, "row port \"" + std::string(row) + "\" is not indexed");
  }
  if (!cols_.contains(col)) {
    fail(ErrorKind::UnknownPort, "column port \"" + std::string(col) + "\" is not indexed");
  }
}

const Lang& SemiringMatrix::at(std::string_view row, std::string_view col) const {
  static const Lang kZero;
  check_indexed(row, col);
  auto it = cells_.find({std::string(row), std::string(col)});
  return it == cells_.end() ? kZero : it->second;
}

void SemiringMatrix::set(const std::string& row, const std::string& col, Lang value) {
  check_indexed(row, col);
  if (value.is_zero()) {
    cells_.erase({row, col});
  } else {
    cells_[{row, col}] = std::move(value);
  }
}

void SemiringMatrix::accumulate(const std::string& row, const std::string& col,
                                const Lang& value) {
  if (value.is_zero()) {
    check_indexed(row, col);
    return;
  }
  set(row, col, at(row, col) + value);
}

bool SemiringMatrix::operator==(const SemiringMatrix& other) const {
  return rows_.same_set(other.rows_) && cols_.same_set(other.cols_) &&
         cells_ == other.cells_;
}

SemiringMatrix operator*(const SemiringMatrix& a, const SemiringMatrix& b) {
  if (!a.cols().same_set(b.rows())) {
    fail(ErrorKind::DimensionMismatch,
         "matrix product needs cols(a) = rows(b) as port sets");
  }
  SemiringMatrix out(a.rows(), b.cols());
  for (const auto& [rk, u] : a.cells()) {
    const auto& [r, k] = rk;
    auto it = b.cells().lower_bound({k, std::string()});
    for (; it != b.cells().end() && it->first.first == k; ++it) {
      out.accumulate(r, it->first.second, u * it->second);
    }
  }
  return out;
}

SemiringMatrix entrywise_union(const SemiringMatrix& a, const SemiringMatrix& b) {
  if (!a.rows().same_set(b.rows()) || !a.cols().same_set(b.cols())) {
    fail(ErrorKind::DimensionMismatch, "entrywise union needs equal index sets");
  }
  SemiringMatrix out = a;
  for (const auto& [rc, v] : b.cells()) out.accumulate(rc.first, rc.second, v);
  return out;
}

SemiringMatrix block(const std::vector<std::vector<SemiringMatrix>>& grid,
                     const std::vector<PortIndex>& row_groups,
                     const std::vector<PortIndex>& col_groups) {
  if (grid.size() != row_groups.size()) {
    fail(ErrorKind::ShapeMismatch, "block grid has wrong number of row groups");
  }
  for (const auto& row : grid) {
    if (row.size() != col_groups.size()) {
      fail(ErrorKind::ShapeMismatch, "block grid has wrong number of column groups");
    }
  }
  SemiringMatrix out(PortIndex::concat(row_groups), PortIndex::concat(col_groups));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < grid[i].size(); ++j) {
      const SemiringMatrix& b = grid[i][j];
      if (!b.rows().same_set(row_groups[i]) || !b.cols().same_set(col_groups[j])) {
        fail(ErrorKind::ShapeMismatch, "block (" + std::to_string(i) + "," +
                                           std::to_string(j) +
                                           ") does not match its index groups");
      }
      for (const auto& [rc, v] : b.cells()) out.set(rc.first, rc.second, v);
    }
  }
  return out;
}

SemiringMatrix matrix_from_fn(const EntryFn& fn, const PortIndex& rows,
                              const PortIndex& cols) {
  SemiringMatrix out(rows, cols);
  for (const auto& r : rows.ports()) {
    for (const auto& c : cols.ports()) {
      out.set(r, c, fn(r, c));
    }
  }
  return out;
}

EntryFn matrix_to_fn(const SemiringMatrix& m) {
  return [m](const std::string& r, const std::string& c) { return m.at(r, c); };
}

std::string format_matrix(const SemiringMatrix& m) {
  const auto& rows = m.rows().ports();
  const auto& cols = m.cols().ports();

  std::size_t head = 0;
  for (const auto& r : rows) head = std::max(head, r.size());

  std::vector<std::size_t> width(cols.size());
  std::vector<std::vector<std::string>> text(rows.size());
  for (std::size_t j = 0; j < cols.size(); ++j) width[j] = cols[j].size();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    text[i].resize(cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      std::string cell = m.at(rows[i], cols[j]).display();
      // display() emits multi-byte glyphs for the empty set and the empty
      // word; count display columns, not bytes.
      std::size_t printed = 0;
      for (unsigned char c : cell) printed += (c & 0xc0) != 0x80;
      width[j] = std::max(width[j], printed);
      text[i][j] = std::move(cell);
    }
  }

  auto pad = [](const std::string& s, std::size_t w) {
    std::size_t printed = 0;
    for (unsigned char c : s) printed += (c & 0xc0) != 0x80;
    return s + std::string(w > printed ? w - printed : 0, ' ');
  };

  std::string out(head, ' ');
  for (std::size_t j = 0; j < cols.size(); ++j) out += "  " + pad(cols[j], width[j]);
  out += '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out += pad(rows[i], head);
    for (std::size_t j = 0; j < cols.size(); ++j) out += "  " + pad(text[i][j], width[j]);
    out += '\n';
  }
  return out;
}

}  // namespace fa
