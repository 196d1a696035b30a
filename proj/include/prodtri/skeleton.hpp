#pragma once

#include <map>
#include <optional>

#include "prodtri/core.hpp"
#include "prodtri/perms.hpp"
#include "prodtri/solver.hpp"

// Coherent triangulations of collections of product faces: skeleta of the
// product, and the "prism graph" family fixed by a permutation system.

namespace prodtri {

struct SkeletonTriangulation {
  Shape shape;
  int level = 0;  // max dimension of an assigned face
  std::map<Face, Triangulation> assignment;  // face-local cells

  bool operator==(const SkeletonTriangulation&) const = default;
};

// Every assigned pair of faces agrees on its common subface.
bool is_coherent(const SkeletonTriangulation& sk);

// Express g (a subface of f, in ambient labels) in f's local labels.
Face face_in_face(const Face& g, const Face& f);

SkeletonTriangulation restrict_to_skeleton(const Triangulation& t, int k);

// Staircases on all prism faces [n] x {X,Y}, their subfaces, and (with_dual)
// the dual staircases on {i,j} x [d]. Throws std::invalid_argument naming a
// cyclic triple if with_dual is requested for a cyclic system.
SkeletonTriangulation skeleton_from_system(const Shape& s, const PermSystem& sys, bool with_dual);

// The assigned faces as solver constraints on the whole shape.
std::vector<FaceConstraint> skeleton_constraints(const SkeletonTriangulation& sk);

struct ExtendResult {
  std::optional<SkeletonTriangulation> sk;
  std::optional<Face> witness;  // on failure: a face with no compatible triangulation
};

// Extend a complete level-k skeleton one level at a time up to to_level. Each
// new face is triangulated independently (its boundary is fixed by the lower
// levels, so coherence is automatic); the solver picks the canonically first
// triangulation. Throws std::invalid_argument if sk is not a complete
// coherent skeleton.
ExtendResult extend_skeleton(const SkeletonTriangulation& sk, int to_level, int jobs = 1);

}  // namespace prodtri
