#pragma once

#include <optional>
#include <vector>

#include "prodtri/cayley.hpp"
#include "prodtri/core.hpp"
#include "prodtri/perms.hpp"

// Deciding which position systems are realizable as the unmixed-cell
// positions of a triangulation: reductions that strip coordinates or vectors,
// the facet-gluing cone construction that inverts them, and the full
// realization procedure.

namespace prodtri {

struct ReductionStep {
  enum class Kind { StripPositive, DropNull };
  Kind kind;
  int coordinate = -1;                    // in pre-reduction coordinates
  std::optional<PositionVector> removed;  // StripPositive: the removed vector
  int removed_index = -1;                 // its pre-reduction row

  bool operator==(const ReductionStep&) const = default;
};

// A coordinate positive everywhere except in exactly one vector: remove that
// vector and subtract one from the coordinate elsewhere. Among applicable
// coordinates, prefers the one whose zero lies in the latest vector, then the
// lowest coordinate; preserves realizability in both directions.
std::optional<std::pair<PositionSystem, ReductionStep>> reduce_positive_coordinate(
    const PositionSystem& u);

// A coordinate that is zero in every vector: delete it. Lowest applicable
// coordinate; preserves spread-out status and realizability both ways.
std::optional<std::pair<PositionSystem, ReductionStep>> drop_null_coordinate(
    const PositionSystem& u);

// Cone two compatible facet triangulations to the vertex they both miss.
// t1 triangulates the rows-1..n-1 facet (shape (n-1,d)), t2 the facet missing
// column `opposite_col` (shape (n,d-1)); they must agree on the common face.
// The apex is (row n, column opposite_col). Output positions: row n keeps its
// t2 position with a zero inserted at opposite_col, the others gain one unit
// there.
Triangulation glue_and_cone(const Triangulation& t1, const Triangulation& t2, int opposite_col);

// Lift a triangulation by one column, inserted at index i, so that every
// unmixed position gains a zero i-coordinate: the input sits on the facet
// missing the new column and the lift is found by constrained search.
std::optional<Triangulation> inull_lift(const Triangulation& t_prime, int i, int jobs = 1);

struct Realization {
  Triangulation tri;
  std::vector<ReductionStep> chain;  // reductions applied, outermost first
};

// Definite NO for non-spread-out input; otherwise reduce to a minimal core,
// realize it by constrained search, and lift back through the recorded chain.
// The returned triangulation's unmixed positions equal u (verified).
std::optional<Realization> realize_positions(const PositionSystem& u, int jobs = 1);

// One-shot constrained search on the unreduced instance; cross-check for
// realize_positions at small shapes.
std::optional<Triangulation> realize_direct(const PositionSystem& u, int jobs = 1);

// Necessary conditions for a minimal unrealizable spread-out system: every
// coordinate vanishes on at least two vectors and is nonzero on at least one.
// Systems failing this are reducible.
bool minimal_counterexample_screen(const PositionSystem& u);

}  // namespace prodtri
