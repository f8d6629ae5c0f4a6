#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

namespace pfpath {

inline constexpr int kNumVars = 4;
inline constexpr const char* kVarNames = "xyzw";

/// Power product in x,y,z,w (x > y > z > w). Total degree is cached.
struct Monomial {
  std::array<uint16_t, kNumVars> e{0, 0, 0, 0};
  uint16_t deg = 0;

  Monomial() = default;
  explicit Monomial(std::array<uint16_t, kNumVars> exps) : e(exps) {
    deg = static_cast<uint16_t>(e[0] + e[1] + e[2] + e[3]);
  }
  static Monomial one() { return Monomial(); }
  static Monomial var(int i, uint16_t power = 1) {
    Monomial m;
    m.e[static_cast<size_t>(i)] = power;
    m.deg = power;
    return m;
  }

  bool is_one() const { return deg == 0; }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.e == b.e; }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (int i = 0; i < kNumVars; ++i) r.e[static_cast<size_t>(i)] = static_cast<uint16_t>(a.e[static_cast<size_t>(i)] + b.e[static_cast<size_t>(i)]);
    r.deg = static_cast<uint16_t>(a.deg + b.deg);
    return r;
  }

  bool divides(const Monomial& m) const {
    for (int i = 0; i < kNumVars; ++i)
      if (e[static_cast<size_t>(i)] > m.e[static_cast<size_t>(i)]) return false;
    return true;
  }

  /// Quotient m / this; caller must ensure divisibility.
  Monomial quotient_of(const Monomial& m) const {
    Monomial r;
    for (int i = 0; i < kNumVars; ++i) r.e[static_cast<size_t>(i)] = static_cast<uint16_t>(m.e[static_cast<size_t>(i)] - e[static_cast<size_t>(i)]);
    r.deg = static_cast<uint16_t>(m.deg - deg);
    return r;
  }

  std::string to_string() const {
    if (deg == 0) return "1";
    std::string s;
    for (int i = 0; i < kNumVars; ++i) {
      int p = e[static_cast<size_t>(i)];
      if (p == 0) continue;
      if (!s.empty()) s += '*';
      s += kVarNames[i];
      if (p > 1) s += '^' + std::to_string(p);
    }
    return s;
  }
};

inline Monomial lcm(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (int i = 0; i < kNumVars; ++i) r.e[static_cast<size_t>(i)] = std::max(a.e[static_cast<size_t>(i)], b.e[static_cast<size_t>(i)]);
  r.deg = static_cast<uint16_t>(r.e[0] + r.e[1] + r.e[2] + r.e[3]);
  return r;
}

enum class Ordering { Less = -1, Equal = 0, Greater = 1 };

/// Graded reverse lexicographic comparison. Higher total degree wins; on a
/// tie, the monomial whose exponent difference has a negative last nonzero
/// entry is the larger one.
inline Ordering grevlex_compare(const Monomial& a, const Monomial& b) {
  if (a.deg != b.deg) return a.deg < b.deg ? Ordering::Less : Ordering::Greater;
  for (int i = kNumVars - 1; i >= 0; --i) {
    int d = static_cast<int>(a.e[static_cast<size_t>(i)]) - static_cast<int>(b.e[static_cast<size_t>(i)]);
    if (d != 0) return d < 0 ? Ordering::Greater : Ordering::Less;
  }
  return Ordering::Equal;
}

inline bool grevlex_less(const Monomial& a, const Monomial& b) {
  return grevlex_compare(a, b) == Ordering::Less;
}
inline bool grevlex_greater(const Monomial& a, const Monomial& b) {
  return grevlex_compare(a, b) == Ordering::Greater;
}

/// All monomials of total degree d, grevlex descending.
std::vector<Monomial> monomials_of_degree(int d);

}  // namespace pfpath

template <>
struct std::hash<pfpath::Monomial> {
  size_t operator()(const pfpath::Monomial& m) const noexcept {
    uint64_t key = 0;
    for (int i = 0; i < pfpath::kNumVars; ++i) key = (key << 16) | m.e[static_cast<size_t>(i)];
    return std::hash<uint64_t>{}(key);
  }
};
