#pragma once

#include <optional>
#include <vector>

#include "prodtri/core.hpp"

// Cayley-trick translation: cells of a triangulation of Delta_{n-1} x
// Delta_{d-1} correspond to Minkowski cells (B_1,...,B_n) of a fine mixed
// subdivision of n*Delta_{d-1}, where B_i is the set of columns the cell uses
// in row i.

namespace prodtri {

struct MixedCell {
  std::vector<uint32_t> summands;  // B_i as d-bit column masks, one per row

  int rows() const { return (int)summands.size(); }
  bool operator==(const MixedCell&) const = default;
};

MixedCell cell_to_minkowski(Mask c, const Shape& s);
// Inverse of cell_to_minkowski; throws std::domain_error on a cell that is
// not fine and full-dimensional.
Mask minkowski_to_cell(const MixedCell& m, const Shape& s);

// Dimension additivity: the bipartite row/column graph of the cell is a forest.
bool is_fine_cell(const MixedCell& m, int d);

using PositionVector = std::vector<int>;

struct PositionSystem {
  std::vector<PositionVector> vectors;

  int count() const { return (int)vectors.size(); }
  int dims() const { return vectors.empty() ? 0 : (int)vectors[0].size(); }
  bool operator==(const PositionSystem&) const = default;
};

// If the cell is unmixed (B_i the whole column set, every other summand a
// vertex), the row holding the simplex summand.
std::optional<int> unmixed_row(const MixedCell& m, int d);
PositionVector unmixed_position(const MixedCell& m, int d);

// Positions of the n unmixed simplices of the subdivision of t, indexed by
// row. Throws std::domain_error if some row does not have exactly one.
PositionSystem unmixed_positions(const Triangulation& t);

// The labeled face condition for a pair of cells: summand intersections
// reassemble to the vertex intersection, which must be a common face.
bool labeled_face_condition(const Triangulation& t);

}  // namespace prodtri
