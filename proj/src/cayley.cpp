#include "prodtri/cayley.hpp"

#include <bit>

#include "prodtri/geometry.hpp"

namespace prodtri {

MixedCell cell_to_minkowski(Mask c, const Shape& s) {
  MixedCell m;
  m.summands.assign(s.n, 0);
  for (int r = 0; r < s.n; ++r)
    for (int col = 0; col < s.d; ++col)
      if (has_vertex(c, s, r, col)) m.summands[r] |= 1u << col;
  return m;
}

Mask minkowski_to_cell(const MixedCell& m, const Shape& s) {
  if (m.rows() != s.n) throw std::domain_error("summand count does not match shape");
  Mask c = 0;
  int size = 0;
  for (int r = 0; r < s.n; ++r) {
    if (m.summands[r] == 0) throw std::domain_error("empty Minkowski summand");
    if (m.summands[r] >> s.d) throw std::domain_error("summand outside column set");
    size += std::popcount(m.summands[r]);
    for (int col = 0; col < s.d; ++col)
      if (m.summands[r] >> col & 1) c |= Mask(1) << vbit(s, r, col);
  }
  if (size - s.n != s.d - 1 || !is_fine_cell(m, s.d))
    throw std::domain_error("cell is not fine and full-dimensional");
  return c;
}

bool is_fine_cell(const MixedCell& m, int d) {
  Shape s{m.rows(), d};
  Mask graph = 0;
  for (int r = 0; r < s.n; ++r) {
    if (m.summands[r] == 0) return false;
    for (int col = 0; col < d; ++col)
      if (m.summands[r] >> col & 1) graph |= Mask(1) << vbit(s, r, col);
  }
  return is_forest(graph, s);
}

std::optional<int> unmixed_row(const MixedCell& m, int d) {
  uint32_t full = (1u << d) - 1;
  int row = -1;
  for (int r = 0; r < m.rows(); ++r) {
    if (m.summands[r] == full && row < 0) row = r;
    else if (std::popcount(m.summands[r]) != 1) return std::nullopt;
  }
  if (row < 0) return std::nullopt;
  return row;
}

PositionVector unmixed_position(const MixedCell& m, int d) {
  auto row = unmixed_row(m, d);
  if (!row) throw std::domain_error("cell is not unmixed");
  PositionVector v(d, 0);
  for (int r = 0; r < m.rows(); ++r) {
    if (r == *row) continue;
    v[std::countr_zero(m.summands[r])] += 1;
  }
  return v;
}

PositionSystem unmixed_positions(const Triangulation& t) {
  const Shape& s = t.shape;
  PositionSystem out;
  out.vectors.assign(s.n, {});
  std::vector<int> hits(s.n, 0);
  for (Mask c : t.cells) {
    MixedCell m = cell_to_minkowski(c, s);
    auto row = unmixed_row(m, s.d);
    if (!row) continue;
    if (s.d == 1) {  // degenerate: the single cell is unmixed for every row
      for (int r = 0; r < s.n; ++r) { out.vectors[r] = {s.n - 1}; hits[r]++; }
      continue;
    }
    out.vectors[*row] = unmixed_position(m, s.d);
    hits[*row]++;
  }
  for (int r = 0; r < s.n; ++r)
    if (hits[r] != 1)
      throw std::domain_error("row " + std::to_string(r + 1) +
                              " does not have exactly one unmixed cell");
  return out;
}

bool labeled_face_condition(const Triangulation& t) {
  const Shape& s = t.shape;
  for (size_t i = 0; i < t.cells.size(); ++i)
    for (size_t j = i + 1; j < t.cells.size(); ++j) {
      MixedCell b = cell_to_minkowski(t.cells[i], s);
      MixedCell c = cell_to_minkowski(t.cells[j], s);
      // summand-wise intersections must reassemble to the vertex intersection
      Mask meet = t.cells[i] & t.cells[j];
      MixedCell d = cell_to_minkowski(meet, s);
      for (int r = 0; r < s.n; ++r)
        if (d.summands[r] != (b.summands[r] & c.summands[r])) return false;
      // and that intersection must be a common face (proper intersection)
      if (!oracle_properly_intersect(t.cells[i], t.cells[j], s)) return false;
    }
  return true;
}

}  // namespace prodtri
