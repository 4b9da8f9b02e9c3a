#include "gidx/simplicial_complex.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "gidx/error.hpp"

namespace gidx {

int sort_with_sign(Simplex& s) {
  int sign = 1;
  // insertion sort; tuples are tiny
  for (std::size_t i = 1; i < s.size(); ++i) {
    for (std::size_t j = i; j > 0 && s[j - 1] > s[j]; --j) {
      std::swap(s[j - 1], s[j]);
      sign = -sign;
    }
  }
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] == s[i - 1]) return 0;
  return sign;
}

namespace {

std::string show(const Simplex& s) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << ')';
  return os.str();
}

void add_faces(const Simplex& s, std::vector<std::set<Simplex>>& out) {
  const std::size_t k = s.size() - 1;
  if (out.size() <= k) out.resize(k + 1);
  if (!out[k].insert(s).second) return;
  if (k == 0) return;
  for (std::size_t i = 0; i < s.size(); ++i) {
    Simplex f;
    f.reserve(k);
    for (std::size_t j = 0; j < s.size(); ++j)
      if (j != i) f.push_back(s[j]);
    add_faces(f, out);
  }
}

}  // namespace

SimplicialComplex SimplicialComplex::from_maximal(int vertex_count,
                                                  const std::vector<Simplex>& maximal) {
  std::vector<std::set<Simplex>> sets;
  sets.resize(1);
  for (int v = 0; v < vertex_count; ++v) sets[0].insert(Simplex{v});
  for (Simplex s : maximal) {
    if (s.empty()) continue;
    if (sort_with_sign(s) == 0) {
      throw Error(ErrorCode::InvalidComplex, "simplicial-cohomology", "from_maximal",
                  "repeated vertex in " + show(s));
    }
    if (s.front() < 0 || s.back() >= vertex_count) {
      throw Error(ErrorCode::InvalidComplex, "simplicial-cohomology", "from_maximal",
                  "vertex out of range in " + show(s));
    }
    add_faces(s, sets);
  }
  SimplicialComplex x;
  x.vertex_count_ = vertex_count;
  for (auto& set : sets) x.simplices_.emplace_back(set.begin(), set.end());
  x.rebuild_index();
  return x;
}

SimplicialComplex SimplicialComplex::from_lists(int vertex_count,
                                                std::vector<std::vector<Simplex>> lists) {
  SimplicialComplex x;
  x.vertex_count_ = vertex_count;
  for (std::size_t k = 0; k < lists.size(); ++k) {
    std::set<Simplex> seen;
    for (Simplex& s : lists[k]) {
      if (s.size() != k + 1) {
        throw Error(ErrorCode::InvalidComplex, "simplicial-cohomology", "from_lists",
                    "simplex " + show(s) + " listed in dimension " + std::to_string(k));
      }
      if (!std::is_sorted(s.begin(), s.end()) ||
          std::adjacent_find(s.begin(), s.end()) != s.end()) {
        throw Error(ErrorCode::InvalidComplex, "simplicial-cohomology", "from_lists",
                    "vertices of " + show(s) + " not strictly increasing");
      }
      if (s.front() < 0 || s.back() >= vertex_count) {
        throw Error(ErrorCode::InvalidComplex, "simplicial-cohomology", "from_lists",
                    "vertex out of range in " + show(s));
      }
      if (!seen.insert(s).second) {
        throw Error(ErrorCode::InvalidComplex, "simplicial-cohomology", "from_lists",
                    "duplicate simplex " + show(s));
      }
    }
    std::sort(lists[k].begin(), lists[k].end());
  }
  x.simplices_ = std::move(lists);
  x.rebuild_index();
  for (int k = 1; k <= x.dimension(); ++k) {
    for (const Simplex& s : x.simplices_[k]) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        Simplex f;
        for (std::size_t j = 0; j < s.size(); ++j)
          if (j != i) f.push_back(s[j]);
        if (!x.contains(f)) {
          throw Error(ErrorCode::InvalidComplex, "simplicial-cohomology", "from_lists",
                      "face " + show(f) + " of " + show(s) + " missing");
        }
      }
    }
  }
  return x;
}

void SimplicialComplex::rebuild_index() {
  index_.assign(simplices_.size(), {});
  for (std::size_t k = 0; k < simplices_.size(); ++k)
    for (std::size_t i = 0; i < simplices_[k].size(); ++i) index_[k][simplices_[k][i]] = i;
}

std::size_t SimplicialComplex::count(int k) const {
  if (k < 0 || k > dimension()) return 0;
  return simplices_[k].size();
}

const std::vector<Simplex>& SimplicialComplex::simplices(int k) const {
  static const std::vector<Simplex> empty;
  if (k < 0 || k > dimension()) return empty;
  return simplices_[k];
}

std::optional<std::size_t> SimplicialComplex::index_of(const Simplex& s) const {
  const int k = static_cast<int>(s.size()) - 1;
  if (k < 0 || k > dimension()) return std::nullopt;
  auto it = index_[k].find(s);
  if (it == index_[k].end()) return std::nullopt;
  return it->second;
}

std::size_t SimplicialComplex::require_index(const Simplex& s) const {
  auto i = index_of(s);
  if (!i) {
    throw Error(ErrorCode::InvalidArgument, "simplicial-cohomology", "index_of",
                "simplex " + show(s) + " not in complex");
  }
  return *i;
}

IntegerMatrix SimplicialComplex::coboundary_matrix(int k) const {
  IntegerMatrix m(count(k + 1), count(k));
  if (k < 0) return m;
  const auto& upper = simplices(k + 1);
  for (std::size_t r = 0; r < upper.size(); ++r) {
    const Simplex& s = upper[r];
    for (std::size_t i = 0; i < s.size(); ++i) {
      Simplex f;
      f.reserve(s.size() - 1);
      for (std::size_t j = 0; j < s.size(); ++j)
        if (j != i) f.push_back(s[j]);
      m(r, require_index(f)) = (i % 2 == 0) ? 1 : -1;
    }
  }
  return m;
}

std::string SimplicialComplex::label(const Simplex& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "]";
}

std::string SimplicialComplex::describe() const {
  std::ostringstream os;
  os << "complex: " << vertex_count_ << " vertices, f-vector (";
  for (int k = 0; k <= dimension(); ++k) os << (k ? "," : "") << count(k);
  os << ')';
  return os.str();
}

namespace complexes {

SimplicialComplex point() { return SimplicialComplex::from_maximal(1, {{0}}); }
SimplicialComplex edge() { return SimplicialComplex::from_maximal(2, {{0, 1}}); }
SimplicialComplex triangle() { return SimplicialComplex::from_maximal(3, {{0, 1, 2}}); }

SimplicialComplex tetrahedron_boundary() {
  return SimplicialComplex::from_maximal(4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
}

SimplicialComplex circle(int n) {
  std::vector<Simplex> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  return SimplicialComplex::from_maximal(n, edges);
}

SimplicialComplex projective_plane6() {
  return SimplicialComplex::from_maximal(
      6, {{0, 1, 3}, {0, 1, 5}, {0, 2, 4}, {0, 2, 5}, {0, 3, 4},
          {1, 2, 3}, {1, 2, 4}, {1, 4, 5}, {2, 3, 5}, {3, 4, 5}});
}

SimplicialComplex suspension(const SimplicialComplex& x) {
  const int n = x.vertex_count();
  std::vector<Simplex> maximal;
  for (int k = 0; k <= x.dimension(); ++k) {
    for (const Simplex& s : x.simplices(k)) {
      Simplex a = s, b = s;
      a.push_back(n);
      b.push_back(n + 1);
      maximal.push_back(a);
      maximal.push_back(b);
    }
  }
  return SimplicialComplex::from_maximal(n + 2, maximal);
}

SimplicialComplex product(const SimplicialComplex& x, const SimplicialComplex& y) {
  const int ny = y.vertex_count();
  std::vector<Simplex> maximal;
  for (int p = 0; p <= x.dimension(); ++p) {
    for (const Simplex& s : x.simplices(p)) {
      for (int q = 0; q <= y.dimension(); ++q) {
        for (const Simplex& t : y.simplices(q)) {
          // monotone lattice paths from (0,0) to (p,q)
          std::vector<int> steps(p + q, 0);
          std::fill(steps.begin() + p, steps.end(), 1);
          do {
            Simplex cell;
            int i = 0, j = 0;
            cell.push_back(s[0] * ny + t[0]);
            for (int step : steps) {
              if (step == 0) ++i; else ++j;
              cell.push_back(s[i] * ny + t[j]);
            }
            maximal.push_back(cell);
          } while (std::next_permutation(steps.begin(), steps.end()));
        }
      }
    }
  }
  return SimplicialComplex::from_maximal(x.vertex_count() * ny, maximal);
}

SimplicialComplex suspended_projective_plane() { return suspension(projective_plane6()); }

SimplicialComplex projective_plane_times_circle() {
  return product(projective_plane6(), circle(3));
}

}  // namespace complexes

}  // namespace gidx
