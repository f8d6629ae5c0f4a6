#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pfpath/jacobian.hpp"

namespace pfpath {

/// Smooth k-nomial quartics with all coefficients 1, sorted by canonical
/// string.
struct VertexSet {
  int k = 0;
  std::vector<QPolynomial> members;

  std::vector<std::string> member_strings() const {
    std::vector<std::string> out;
    out.reserve(members.size());
    for (const auto& m : members) out.push_back(to_string(m));
    return out;
  }
};

/// The 35 degree-4 monomials in x,y,z,w, grevlex descending; the fixed
/// coordinate order for coefficient vectors.
const std::vector<Monomial>& quartic_monomials();

/// Exhaustive enumeration of V_k: every k-subset of the 35 monomials whose
/// sum is smooth. A necessary-condition screen (every variable must reach
/// degree >= 3 in some chosen monomial, else a coordinate point is singular)
/// prunes candidates; the Groebner check decides.
VertexSet enumerate_fewnomials(int k, int jobs = 1);

struct OrbitTable {
  std::vector<std::vector<std::string>> orbits;       // members, sorted; orbits sorted by rep
  std::unordered_map<std::string, size_t> orbit_of;   // canonical string -> orbit index
  std::vector<std::string> representatives;           // canonically smallest member
};

/// Partition of the vertex set under the 24 variable permutations.
OrbitTable s4_orbits(const VertexSet& v);

/// Distinct images of f under all 24 permutations, sorted.
std::vector<std::string> s4_orbit_of(const QPolynomial& f);

QPolynomial apply_permutation(const QPolynomial& f, const std::array<int, kNumVars>& perm);

struct Edge {
  std::string f, g;
  std::string id() const { return f + " ~ " + g; }
};

inline uint64_t complete_edge_count(uint64_t n) { return n * (n - 1) / 2; }

/// All unordered pairs, canonical (string-sorted) orientation, deterministic
/// order.
std::vector<Edge> complete_edges(const VertexSet& w);

/// Edges (f, g) into the companion set V_{k+1} or V_{k-1}: the support
/// symmetric difference is one monomial and g is smooth.
std::vector<Edge> monomial_difference_edges(const QPolynomial& f, int companion_k);

struct SplitSpec {
  double alpha = 0.5;
  uint64_t seed = 0;
  std::vector<std::string> train, test;
};

/// Uniform split without replacement; |train| = round(alpha * total).
SplitSpec split(const std::vector<std::string>& ids, double alpha, uint64_t seed);

/// Duplicates minority-class ids uniformly at random until the classes have
/// equal counts. Throws std::invalid_argument when one class is empty.
std::vector<std::string> balance_oversample(
    const std::vector<std::pair<std::string, bool>>& labeled, uint64_t seed);

}  // namespace pfpath
