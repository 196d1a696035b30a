#pragma once

#include <map>
#include <optional>
#include <vector>

#include "prodtri/cayley.hpp"
#include "prodtri/core.hpp"
#include "prodtri/perms.hpp"

// Exact complete search for triangulations of Delta_{n-1} x Delta_{d-1} under
// combinatorial constraints. The search is a ridge-frontier DFS over candidate
// cells: start from a seed cell, repeatedly pick an interior ridge covered by
// exactly one chosen cell, and branch over the compatible candidates that
// cover it from the other side.

namespace prodtri {

enum class SolveMode { Decide, Enumerate, Count };

// The restriction of the triangulation to `face` must equal `tri` (given in
// the face's own grid coordinates).
struct FaceConstraint {
  Face face;
  Triangulation tri;
};

struct Constraints {
  // Every column-pair prism must carry the staircase of the system's
  // permutation for that edge.
  std::optional<PermSystem> system;
  std::vector<FaceConstraint> faces;
  // Per-row requirement on the unmixed cell's position vector; empty vector
  // means no position constraints at all.
  std::vector<std::optional<PositionVector>> positions;
  std::vector<Mask> must_contain;
};

struct SolveResult {
  bool sat = false;
  std::vector<Triangulation> found;  // decide: at most one; enumerate: all (or limit)
  uint64_t count = 0;
  uint64_t nodes = 0;  // search tree nodes visited
};

// The face constraints induced by a permutation system: one staircase per
// column-pair prism.
std::vector<FaceConstraint> system_face_constraints(const Shape& s, const PermSystem& sys);

// All spanning trees compatible with the face and position constraints,
// ascending as masks. Throws std::invalid_argument on malformed constraints.
std::vector<Mask> candidate_cells(const Shape& s, const Constraints& c);

// Complete search. `limit` caps enumerate output (0 = unlimited). `jobs` fans
// top-level branches out to a thread pool; reported results are canonicalized
// so output does not depend on scheduling. `shuffle_seed` randomizes the
// candidate exploration order as an order-invariance audit; verdicts and
// canonical outputs do not change (decide mode re-runs in canonical order for
// its witness and cross-checks the verdicts).
SolveResult solve(const Shape& s, const Constraints& c, SolveMode mode,
                  uint64_t limit = 0, int jobs = 1, uint64_t shuffle_seed = 0);

// Relabel a face-local triangulation into the ambient grid.
Triangulation lift_triangulation(const Triangulation& local, const Face& f, const Shape& ambient);

// All coherent ways of triangulating the whole boundary of the product so
// that every facet extends the system. Facets are keyed by their Face; the
// stored triangulations are facet-local.
struct BoundaryCompletions {
  std::vector<std::map<Face, Triangulation>> completions;
};
BoundaryCompletions count_boundary_completions(const Shape& s, const PermSystem& sys, int jobs = 1);

}  // namespace prodtri
