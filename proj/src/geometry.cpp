#include "prodtri/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <numeric>

namespace prodtri {

namespace {

long long checked_ll(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("rational overflow");
  return (long long)v;
}

}  // namespace

Rat::Rat(long long n, long long d) {
  if (d == 0) throw std::invalid_argument("zero denominator");
  if (d < 0) { n = -n; d = -d; }
  long long g = std::gcd(n < 0 ? -n : n, d);
  if (g > 1) { n /= g; d /= g; }
  num = n;
  den = d;
}

Rat Rat::operator+(const Rat& o) const {
  __int128 n = (__int128)num * o.den + (__int128)o.num * den;
  __int128 d = (__int128)den * o.den;
  __int128 a = n < 0 ? -n : n, g = d;
  while (g) { __int128 t = a % g; a = g; g = t; }
  if (a > 1) { n /= a; d /= a; }
  Rat r; r.num = checked_ll(n); r.den = checked_ll(d); return r;
}

Rat Rat::operator-(const Rat& o) const { return *this + Rat(-o.num, o.den); }

Rat Rat::operator*(const Rat& o) const {
  long long g1 = std::gcd(num < 0 ? -num : num, o.den);
  long long g2 = std::gcd(o.num < 0 ? -o.num : o.num, den);
  __int128 n = (__int128)(num / g1) * (o.num / g2);
  __int128 d = (__int128)(den / g2) * (o.den / g1);
  Rat r; r.num = checked_ll(n); r.den = checked_ll(d); return r;
}

Rat Rat::operator/(const Rat& o) const {
  if (o.num == 0) throw std::invalid_argument("division by zero");
  return *this * Rat(o.den, o.num);
}

bool Rat::operator<(const Rat& o) const {
  return (__int128)num * o.den < (__int128)o.num * den;
}

long long normalized_volume(Mask cell, const Shape& s) {
  if (!is_full_simplex(cell, s)) throw std::invalid_argument("not a full simplex");
  // Differences of vertices in the lattice basis {e_i - e_0} + {f_c - f_0}.
  std::vector<std::pair<int, int>> verts;
  for (int r = 0; r < s.n; ++r)
    for (int c = 0; c < s.d; ++c)
      if (has_vertex(cell, s, r, c)) verts.push_back({r, c});
  int k = s.n + s.d - 2;
  std::vector<std::vector<long long>> m(k, std::vector<long long>(k, 0));
  auto [r0, c0] = verts[0];
  for (int i = 0; i < k; ++i) {
    auto [r, c] = verts[i + 1];
    for (int j = 1; j < s.n; ++j) m[i][j - 1] = (r == j) - (r0 == j);
    for (int j = 1; j < s.d; ++j) m[i][s.n - 1 + j - 1] = (c == j) - (c0 == j);
  }
  // Bareiss fraction-free determinant.
  long long prev = 1, sign = 1;
  for (int p = 0; p < k; ++p) {
    int piv = -1;
    for (int i = p; i < k; ++i)
      if (m[i][p] != 0) { piv = i; break; }
    if (piv < 0) return 0;
    if (piv != p) { std::swap(m[piv], m[p]); sign = -sign; }
    for (int i = p + 1; i < k; ++i)
      for (int j = p + 1; j < k; ++j)
        m[i][j] = (m[i][j] * m[p][p] - m[i][p] * m[p][j]) / prev;
    prev = m[p][p];
  }
  long long det = sign * m[k - 1][k - 1];
  return det < 0 ? -det : det;
}

long long volume_sum(const std::vector<Mask>& cells, const Shape& s) {
  long long total = 0;
  for (Mask c : cells) total += normalized_volume(c, s);
  return total;
}

namespace {

// Phase-1 exact simplex (Bland's rule) for A z = b, z >= 0 with b >= 0.
// Returns a feasible z, or nullopt.
std::optional<std::vector<Rat>> phase1(const std::vector<std::vector<Rat>>& A,
                                       const std::vector<Rat>& b) {
  int m = (int)A.size();
  int nv = m ? (int)A[0].size() : 0;
  int total = nv + m;  // artificials appended
  // tableau: m rows of [A | I | b], objective = minimize sum of artificials
  std::vector<std::vector<Rat>> T(m, std::vector<Rat>(total + 1));
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < nv; ++j) T[i][j] = A[i][j];
    T[i][nv + i] = Rat(1);
    T[i][total] = b[i];
    basis[i] = nv + i;
  }
  std::vector<Rat> obj(total + 1);  // reduced costs for min sum(artificials)
  for (int j = 0; j <= total; ++j) {
    Rat sum;
    for (int i = 0; i < m; ++i) sum = sum + T[i][j];
    obj[j] = -sum;
  }
  for (int i = 0; i < m; ++i) obj[nv + i] = Rat(0);
  while (true) {
    int enter = -1;
    for (int j = 0; j < total; ++j)
      if (obj[j].is_neg()) { enter = j; break; }  // Bland: smallest index
    if (enter < 0) break;
    int leave = -1;
    Rat best;
    for (int i = 0; i < m; ++i) {
      if (!T[i][enter].is_pos()) continue;
      Rat ratio = T[i][total] / T[i][enter];
      if (leave < 0 || ratio < best ||
          (ratio == best && basis[i] < basis[leave]))
        { leave = i; best = ratio; }
    }
    if (leave < 0) throw std::logic_error("phase-1 unbounded");
    Rat piv = T[leave][enter];
    for (int j = 0; j <= total; ++j) T[leave][j] = T[leave][j] / piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave || T[i][enter].is_zero()) continue;
      Rat f = T[i][enter];
      for (int j = 0; j <= total; ++j) T[i][j] = T[i][j] - f * T[leave][j];
    }
    if (!obj[enter].is_zero()) {
      Rat f = obj[enter];
      for (int j = 0; j <= total; ++j) obj[j] = obj[j] - f * T[leave][j];
    }
    basis[leave] = enter;
  }
  if (!obj[total].is_zero()) return std::nullopt;  // positive residual: infeasible
  std::vector<Rat> z(nv);
  for (int i = 0; i < m; ++i)
    if (basis[i] < nv) z[basis[i]] = T[i][total];
    else if (!T[i][total].is_zero()) return std::nullopt;  // artificial stuck nonzero
  return z;
}

}  // namespace

std::optional<Dependence> find_dependence(Mask a, Mask b, const Shape& s) {
  Mask only_a = a & ~b, only_b = b & ~a, shared = a & b;
  if (only_a == 0 || only_b == 0) return std::nullopt;
  // variables: x_e (e in a\b, c=+x), y_e (e in b\a, c=-y), p_e,q_e (shared, c=p-q)
  struct Var { int bitidx; int sign; };
  std::vector<Var> vars;
  for (int i = 0; i < s.bits(); ++i) {
    if (only_a >> i & 1) vars.push_back({i, +1});
    if (only_b >> i & 1) vars.push_back({i, -1});
    if (shared >> i & 1) { vars.push_back({i, +1}); vars.push_back({i, -1}); }
  }
  int nv = (int)vars.size();
  int rows = s.n + s.d + 1;
  std::vector<std::vector<Rat>> A(rows, std::vector<Rat>(nv));
  std::vector<Rat> rhs(rows);
  for (int j = 0; j < nv; ++j) {
    int r = vars[j].bitidx / s.d, c = vars[j].bitidx % s.d;
    A[r][j] = Rat(vars[j].sign);
    A[s.n + c][j] = Rat(vars[j].sign);
    if ((only_a >> vars[j].bitidx) & 1) A[rows - 1][j] = Rat(1);  // normalization
  }
  rhs[rows - 1] = Rat(1);
  auto z = phase1(A, rhs);
  if (!z) return std::nullopt;
  Dependence dep;
  std::vector<Rat> coeff(s.bits());
  for (int j = 0; j < nv; ++j)
    coeff[vars[j].bitidx] =
        coeff[vars[j].bitidx] + (vars[j].sign > 0 ? (*z)[j] : -(*z)[j]);
  for (int i = 0; i < s.bits(); ++i)
    if (!coeff[i].is_zero()) dep.terms.push_back({i, coeff[i]});
  return dep;
}

bool oracle_properly_intersect(Mask a, Mask b, const Shape& s) {
  return !find_dependence(a, b, s).has_value();
}

std::optional<std::vector<Rat>> barycentric(Mask cell, const Shape& s,
                                            const std::vector<Rat>& point) {
  if ((int)point.size() != s.n + s.d) throw std::invalid_argument("bad point size");
  std::vector<int> verts;
  for (int i = 0; i < s.bits(); ++i)
    if (cell >> i & 1) verts.push_back(i);
  int k = (int)verts.size();
  int rows = s.n + s.d + 1;
  // Solve sum lambda_v * v = point, sum lambda = 1 by Gaussian elimination.
  std::vector<std::vector<Rat>> M(rows, std::vector<Rat>(k + 1));
  for (int j = 0; j < k; ++j) {
    M[verts[j] / s.d][j] = Rat(1);
    M[s.n + verts[j] % s.d][j] = Rat(1);
    M[rows - 1][j] = Rat(1);
  }
  for (int i = 0; i < s.n + s.d; ++i) M[i][k] = point[i];
  M[rows - 1][k] = Rat(1);
  std::vector<int> pivot_col_of_row(rows, -1);
  int rank = 0;
  for (int col = 0; col < k && rank < rows; ++col) {
    int piv = -1;
    for (int i = rank; i < rows; ++i)
      if (!M[i][col].is_zero()) { piv = i; break; }
    if (piv < 0) continue;
    std::swap(M[piv], M[rank]);
    Rat p = M[rank][col];
    for (int j = 0; j <= k; ++j) M[rank][j] = M[rank][j] / p;
    for (int i = 0; i < rows; ++i) {
      if (i == rank || M[i][col].is_zero()) continue;
      Rat f = M[i][col];
      for (int j = 0; j <= k; ++j) M[i][j] = M[i][j] - f * M[rank][j];
    }
    pivot_col_of_row[rank] = col;
    ++rank;
  }
  for (int i = rank; i < rows; ++i)
    if (!M[i][k].is_zero()) return std::nullopt;  // inconsistent: point off the hull's span
  std::vector<Rat> lambda(k);
  for (int i = 0; i < rank; ++i) lambda[pivot_col_of_row[i]] = M[i][k];
  return lambda;
}

bool point_in_simplex(Mask cell, const Shape& s, const std::vector<Rat>& point) {
  auto lam = barycentric(cell, s, point);
  if (!lam) return false;
  for (const Rat& l : *lam)
    if (l.is_neg()) return false;
  return true;
}

}  // namespace prodtri
