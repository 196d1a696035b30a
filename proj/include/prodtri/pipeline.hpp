#pragma once

#include <string>

#include "prodtri/io.hpp"
#include "prodtri/realize.hpp"
#include "prodtri/skeleton.hpp"
#include "prodtri/solver.hpp"

// Scripted experiment stages. Each stage re-derives a block of documented
// reference data from scratch by exhaustive search and returns a RunManifest
// whose artifacts field carries the full, deterministic evidence. Stages:
//
//   s31          - shape (3,4): find the acyclic permutation system with
//                  exactly three full realizations and four coherent boundary
//                  completions, certify the unrealized boundary UNSAT, and run
//                  the forced-cell diagnosis on it.
//   s32          - shape (5,4): lift that system to five symbols so that each
//                  column-triple facet extends uniquely, and certify that the
//                  lifted system admits no full triangulation; compare its
//                  position vectors against the documented five.
//   spread-chain - the documented five-vector position system: reduce it twice,
//                  drop the null coordinate, and realize it by lifting a core
//                  realization back through the recorded chain.
//   parity       - skeleton extendability by level: 1->2 and 3->4 always
//                  succeed at small shapes (exhaustively), while a cyclic
//                  prism blocks 2->3 and the stage-s31 boundary blocks the
//                  final extension.
//   lemma1       - the four-way equivalence battery over every permutation
//                  system at shapes (3,3), (3,4), (4,3).

namespace prodtri {

struct StageOptions {
  int jobs = 1;
  uint64_t shuffle_seed = 0;  // randomize solver candidate order (audit)
};

// Throws std::invalid_argument for an unknown stage name and std::logic_error
// when a stage's internal cross-checks fail.
RunManifest run_pipeline(const std::string& stage, const StageOptions& opt = {});

// --- building blocks shared by the stages, the CLI, and the tests ---

// A system qualifies for stage s31 when it is acyclic, has exactly three full
// realizations, and exactly four coherent boundary completions.
struct QualifyingSystem {
  PermSystem system;
  std::vector<Triangulation> realizations;           // canonical order
  std::vector<std::map<Face, Triangulation>> completions;
  int bad_completion = -1;  // index of the completion realized by no full one
};

struct S31Search {
  uint64_t dual_candidates = 0;   // node-permutation triples examined
  uint64_t acyclic_candidates = 0;
  std::vector<QualifyingSystem> qualifying;
};
S31Search search_s31(const StageOptions& opt = {});

// Forced-cell diagnosis of an unrealized boundary completion: a pair of
// boundary cells from different facets whose union is a full simplex, each
// forced as the unique cell of its facet over the shared ridge, names one
// missing interior cell; each realization then contains a unique cell whose
// columns match the missing cell's multi-row columns exactly.
struct ForcedCellDiagnosis {
  bool ok = false;
  Mask missing = 0;
  std::vector<Mask> candidates;  // one per realization, ascending
};
ForcedCellDiagnosis diagnose_bad_boundary(const Shape& s,
                                          const std::map<Face, Triangulation>& bad,
                                          const std::vector<Triangulation>& realizations);

// Five-symbol systems on four columns extending `base` (their two extra
// symbols deleted gives back `base`) such that every column-triple facet
// admits exactly one triangulation, which restricts to the corresponding
// facet of `bad` on its three base symbols.
std::vector<PermSystem> search_s32_lifts(const PermSystem& base,
                                         const std::map<Face, Triangulation>& bad,
                                         const StageOptions& opt = {});

// Complete coherent skeleton of the product determined by one diagonal bit
// per square face: faces with a single row or column are simplices, squares
// take the selected diagonal, and every larger prism face is the staircase of
// the transitive order its squares induce. Empty when some prism face's
// square orientations are cyclic. Supports level <= 3.
// Square bits are indexed by (row pair, column pair) in lexicographic order;
// bit = 1 places the diagonal joining (low row, high col) and (high row, low col).
std::optional<SkeletonTriangulation> skeleton_from_squares(const Shape& s, uint64_t bits,
                                                           int level);
int square_count(const Shape& s);

}  // namespace prodtri
