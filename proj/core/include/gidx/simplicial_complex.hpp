#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gidx/integer_matrix.hpp"

namespace gidx {

using Simplex = std::vector<int>;  // strictly increasing vertex indices

// Finite abstract simplicial complex with simplices stored per dimension in
// lexicographic order. Orientation is induced by the vertex order.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  // Closure of the given simplices (vertex tuples in any order).
  static SimplicialComplex from_maximal(int vertex_count, const std::vector<Simplex>& maximal);
  // Explicit per-dimension lists; validated (faces present, no duplicates,
  // vertices in range). Throws InvalidComplex.
  static SimplicialComplex from_lists(int vertex_count, std::vector<std::vector<Simplex>> lists);

  int vertex_count() const noexcept { return vertex_count_; }
  int dimension() const noexcept { return static_cast<int>(simplices_.size()) - 1; }
  std::size_t count(int k) const;
  const std::vector<Simplex>& simplices(int k) const;
  std::optional<std::size_t> index_of(const Simplex& s) const;
  std::size_t require_index(const Simplex& s) const;
  bool contains(const Simplex& s) const { return index_of(s).has_value(); }

  // Matrix of delta_k : C^k -> C^{k+1}; rows indexed by (k+1)-simplices.
  // An empty matrix with the right shape is returned at the ends.
  IntegerMatrix coboundary_matrix(int k) const;

  std::string describe() const;
  // "[v0,v1,...]"
  static std::string label(const Simplex& s);

 private:
  void rebuild_index();

  int vertex_count_ = 0;
  std::vector<std::vector<Simplex>> simplices_;
  std::vector<std::map<Simplex, std::size_t>> index_;
};

// Sorts a vertex tuple and returns the parity of the sorting permutation
// (+1 even, -1 odd, 0 if a vertex repeats).
int sort_with_sign(Simplex& s);

// Bundled complexes used by fixtures and tests.
namespace complexes {
SimplicialComplex point();
SimplicialComplex edge();                     // nerve of a two-set cover
SimplicialComplex triangle();                 // full 2-simplex, nerve of a three-set cover
SimplicialComplex tetrahedron_boundary();     // S^2
SimplicialComplex circle(int n = 3);          // n-cycle
SimplicialComplex projective_plane6();        // 6-vertex RP^2
SimplicialComplex suspension(const SimplicialComplex& x);
// Staircase triangulation of |X| x |Y|; vertex (i, j) -> i * |Y_0| + j.
SimplicialComplex product(const SimplicialComplex& x, const SimplicialComplex& y);
SimplicialComplex suspended_projective_plane();  // Sigma RP^2, H^3 = Z/2
SimplicialComplex projective_plane_times_circle();  // RP^2 x S^1, H^3 = Z/2
}  // namespace complexes

}  // namespace gidx
