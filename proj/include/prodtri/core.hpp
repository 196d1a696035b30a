#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Core encoding of the product of two simplices Delta_{n-1} x Delta_{d-1}.
//
// Vertices of the product are pairs (row, col) with row in [n] and col in [d].
// A set of grid vertices is a bitmask over the n*d grid positions, bit index
// row*d + col (0-based internally; rows print as 1..n, cols as A,B,C,...).
// Full-dimensional simplices are exactly the sets that form a spanning tree of
// the complete bipartite graph K_{n,d} on rows and columns.

namespace prodtri {

using Mask = uint32_t;

struct Shape {
  int n = 0;  // row vertices (Delta_{n-1})
  int d = 0;  // column vertices (Delta_{d-1})

  bool valid() const { return n >= 1 && d >= 1 && n * d <= 30; }
  int dim() const { return n + d - 2; }
  int bits() const { return n * d; }
  Mask grid() const { return (n * d == 32) ? ~Mask(0) : ((Mask(1) << (n * d)) - 1); }
  bool operator==(const Shape&) const = default;
};

inline int vbit(const Shape& s, int row, int col) { return row * s.d + col; }
inline bool has_vertex(Mask m, const Shape& s, int row, int col) {
  return (m >> vbit(s, row, col)) & 1u;
}

std::string vertex_name(const Shape& s, int row, int col);
std::string mask_to_string(Mask m, const Shape& s);
// Accepts tokens like "1A" or "A1".
Mask parse_cell(const std::vector<std::string>& tokens, const Shape& s);

// Bitmask of rows (resp. columns) touched by at least one grid vertex of m.
uint32_t touched_rows(Mask m, const Shape& s);
uint32_t touched_cols(Mask m, const Shape& s);

// Viewing m as a bipartite graph on rows + cols: no cycle.
bool is_forest(Mask m, const Shape& s);
// Spanning tree of K_{n,d}: the encoding of a full-dimensional simplex.
bool is_full_simplex(Mask m, const Shape& s);

long long binomial(int a, int b);
// Number of maximal cells in every triangulation: C(n+d-2, n-1).
long long simplex_count(const Shape& s);

// All spanning trees of K_{n,d}, ascending as masks.
std::vector<Mask> spanning_trees(const Shape& s);

// Combinatorial proper-intersection test: true iff conv(a) and conv(b) meet in
// a common face. Improper intersection is witnessed by a simple cycle in the
// union graph whose edges can be assigned alternately to a and b around the
// cycle (shared edges may serve either side).
bool properly_intersect(Mask a, Mask b, const Shape& s);

// Product face Delta_rows x Delta_cols, both as bitmasks over [n] and [d].
struct Face {
  uint32_t rows = 0;
  uint32_t cols = 0;

  int dim() const;
  bool valid(const Shape& s) const;
  auto operator<=>(const Face&) const = default;
};

Face full_face(const Shape& s);
// Grid mask of all vertices lying in the face.
Mask face_grid(const Face& f, const Shape& s);
Shape face_shape(const Face& f);
// Relabel a subset of the face's grid into the face's own (|rows|,|cols|) grid.
Mask project_mask(Mask m, const Face& f, const Shape& s);
// Inverse relabeling of project_mask.
Mask lift_mask(Mask small, const Face& f, const Shape& s);
// All faces of the product with 0 <= dim <= max_dim, sorted.
std::vector<Face> faces_up_to(const Shape& s, int max_dim);
std::vector<Face> facets(const Shape& s);

struct Triangulation {
  Shape shape;
  std::vector<Mask> cells;  // canonical: sorted ascending, deduplicated

  void canonicalize();
  bool operator==(const Triangulation&) const = default;
};

// Pairwise proper intersection plus exact cardinality; by unimodularity this
// characterizes triangulations among sets of full simplices.
bool is_triangulation(const std::vector<Mask>& cells, const Shape& s);
bool is_triangulation(const Triangulation& t);

// Cells of t cut down to the face and relabeled to the face's grid; keeps the
// pieces that span the face.
Triangulation restrict_triangulation(const Triangulation& t, const Face& f);

// Swap the roles of rows and columns.
Mask transpose_mask(Mask m, const Shape& s);
Triangulation transpose_triangulation(const Triangulation& t);

// Ridges: a full simplex minus one grid vertex. A ridge lies on the boundary
// of the product iff it misses some row or column entirely.
bool is_boundary_ridge(Mask ridge, const Shape& s);

}  // namespace prodtri
