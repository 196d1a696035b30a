#pragma once

#include <optional>
#include <vector>

#include "prodtri/cayley.hpp"
#include "prodtri/core.hpp"

// Systems of permutations: one ordering of the symbol set written along each
// edge of the complete graph on a node set. For a triangulation of
// Delta_{n-1} x Delta_{d-1} the primal system has symbols [n] and nodes the d
// columns; the dual system swaps the roles. Permutations are stored read from
// the smaller node; reading the edge the other way reverses the order.

namespace prodtri {

struct Permutation {
  std::vector<int> order;  // each symbol 0..k-1 exactly once

  int size() const { return (int)order.size(); }
  bool operator==(const Permutation&) const = default;
};

bool valid_permutation(const Permutation& p, int k);
Permutation reversed(const Permutation& p);

// Edges {x,y}, x<y, of the complete graph on k nodes, listed in
// lexicographic order: 01, 02, ..., 0(k-1), 12, 13, ...
int edge_count(int k);
int edge_id(int x, int y, int k);
std::pair<int, int> edge_nodes(int id, int k);

struct PermSystem {
  int symbols = 0;  // size of the permuted set
  int nodes = 0;    // vertices of the complete graph
  std::vector<Permutation> perms;  // indexed by edge_id over nodes

  bool valid() const;
  bool operator==(const PermSystem&) const = default;
};

// A directed 3-cycle violating acyclicity: for symbol pair (i, j), nodes
// x -> y -> z -> x.
struct CyclicTriple {
  int i, j;
  int x, y, z;
};

// Tournament on the nodes for ordered symbol pair i -> j: edge {x,y} points
// x -> y iff i precedes j reading the permutation from x to y. Returns its
// topological order (source first) when acyclic.
std::optional<Permutation> pair_order(const PermSystem& s, int i, int j);

bool is_acyclic(const PermSystem& s);
std::optional<CyclicTriple> find_cyclic_triple(const PermSystem& s);

// The dual system: orderings of the nodes along edges of the complete graph
// on the symbols. Throws std::invalid_argument carrying the cyclic triple
// text when the system is cyclic.
PermSystem dual_system(const PermSystem& s);

// Position of symbol i at node x: how many pairs (i, j) have their tournament
// source at x. Requires acyclicity.
PositionSystem positions_from_system(const PermSystem& s);

struct Deletion {
  PermSystem system;
  std::vector<int> old_to_new;  // -1 for killed symbols
};
Deletion delete_symbols(const PermSystem& s, uint32_t kill);

// Spread-out predicate: for every k of the n vectors the coordinatewise
// minimum sums to at most n-k. Brute force over all subsets.
bool is_spread_out(const PositionSystem& u);
void check_position_sums(const PositionSystem& u);  // throws on bad sums

enum class CoordClass { Spread, Null, Neither };
std::vector<CoordClass> classify_coordinates(const PositionSystem& u);

// Staircase triangulation of the prism Delta_{n-1} x Delta_1 for sigma, read
// from column X (index 0) to column Y (index 1).
Triangulation staircase(const Permutation& sigma);
// Inverse of staircase; from_col 1 returns the reversal.
Permutation extract_permutation(const Triangulation& t, int from_col);

// The primal system of t: for each column edge, the permutation read from the
// restriction of t to that prism face.
PermSystem system_from_triangulation(const Triangulation& t);

}  // namespace prodtri
