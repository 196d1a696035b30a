#pragma once

#include <optional>
#include <vector>

#include "prodtri/core.hpp"

// Exact geometric oracle over the 0/1 vertex coordinates of the product.
// Every grid vertex (row, col) is the point e_row + f_col in R^{n+d}. All
// computations are exact rational; no tolerances anywhere.

namespace prodtri {

// Small exact rational. Numerators/denominators stay tiny here (incidence
// matrices of unimodular configurations); overflow still checked.
struct Rat {
  long long num = 0;
  long long den = 1;

  Rat() = default;
  Rat(long long n) : num(n), den(1) {}
  Rat(long long n, long long d);

  Rat operator+(const Rat& o) const;
  Rat operator-(const Rat& o) const;
  Rat operator*(const Rat& o) const;
  Rat operator/(const Rat& o) const;
  Rat operator-() const { return Rat(-num, den); }
  bool operator==(const Rat& o) const { return num == o.num && den == o.den; }
  bool operator<(const Rat& o) const;
  bool is_zero() const { return num == 0; }
  bool is_neg() const { return num < 0; }
  bool is_pos() const { return num > 0; }
};

// Normalized volume of a full simplex with respect to the lattice of the
// product polytope; spanning trees give exactly 1.
long long normalized_volume(Mask cell, const Shape& s);

// Sum of normalized volumes of a cell set (cells need not be disjoint).
long long volume_sum(const std::vector<Mask>& cells, const Shape& s);

// An affine dependence sum c_v * v = 0, sum c_v = 0, with the positive part
// supported in a and the negative part in b. Existence of a nonzero one is
// exactly improper intersection of the two simplices.
struct Dependence {
  std::vector<std::pair<int, Rat>> terms;  // (grid bit index, coefficient)
};
std::optional<Dependence> find_dependence(Mask a, Mask b, const Shape& s);

// Proper-intersection verdict via exact linear programming; independent of
// the alternating-cycle test in core.
bool oracle_properly_intersect(Mask a, Mask b, const Shape& s);

// Barycentric coordinates of a point (length n+d, entries summing to 2) with
// respect to a full simplex; nullopt if the system is singular (never for
// spanning trees).
std::optional<std::vector<Rat>> barycentric(Mask cell, const Shape& s,
                                            const std::vector<Rat>& point);
bool point_in_simplex(Mask cell, const Shape& s, const std::vector<Rat>& point);

}  // namespace prodtri
