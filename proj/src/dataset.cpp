#include "pfpath/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

#include "pfpath/rng.hpp"

namespace pfpath {

const std::vector<Monomial>& quartic_monomials() {
  static const std::vector<Monomial> table = monomials_of_degree(4);
  return table;
}

namespace {

QPolynomial sum_of(const std::vector<Monomial>& all, const std::vector<int>& pick) {
  std::vector<QPolynomial::Term> ts;
  ts.reserve(pick.size());
  for (int i : pick) ts.push_back({all[static_cast<size_t>(i)], Rational(1)});
  return QPolynomial::from_terms(std::move(ts));
}

// Necessary condition for smoothness: for every variable some chosen monomial
// carries it with degree >= 3, otherwise the coordinate point is singular.
bool passes_screen(const std::vector<Monomial>& all, const std::vector<int>& pick) {
  std::array<bool, kNumVars> ok{false, false, false, false};
  for (int i : pick)
    for (int v = 0; v < kNumVars; ++v)
      if (all[static_cast<size_t>(i)].e[static_cast<size_t>(v)] >= 3) ok[static_cast<size_t>(v)] = true;
  return ok[0] && ok[1] && ok[2] && ok[3];
}

void enumerate_combinations(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> c(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) c[static_cast<size_t>(i)] = i;
  while (true) {
    fn(c);
    int i = k - 1;
    while (i >= 0 && c[static_cast<size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++c[static_cast<size_t>(i)];
    for (int j = i + 1; j < k; ++j) c[static_cast<size_t>(j)] = c[static_cast<size_t>(j - 1)] + 1;
  }
}

}  // namespace

VertexSet enumerate_fewnomials(int k, int jobs) {
  if (k < 1 || k > 35) throw std::invalid_argument("enumerate_fewnomials: k out of range");
  const auto& all = quartic_monomials();

  std::vector<std::vector<int>> candidates;
  enumerate_combinations(35, k, [&](const std::vector<int>& pick) {
    if (passes_screen(all, pick)) candidates.push_back(pick);
  });

  std::vector<char> smooth_flag(candidates.size(), 0);
  const int workers = std::max(1, jobs);
  std::atomic<size_t> next{0};
  auto work = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= candidates.size()) break;
      QPolynomial f = sum_of(all, candidates[i]);
      smooth_flag[i] = is_smooth(f) ? 1 : 0;
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  VertexSet out;
  out.k = k;
  for (size_t i = 0; i < candidates.size(); ++i)
    if (smooth_flag[i]) out.members.push_back(sum_of(all, candidates[i]));
  std::sort(out.members.begin(), out.members.end(),
            [](const QPolynomial& a, const QPolynomial& b) { return to_string(a) < to_string(b); });
  out.members.erase(std::unique(out.members.begin(), out.members.end()), out.members.end());
  return out;
}

QPolynomial apply_permutation(const QPolynomial& f, const std::array<int, kNumVars>& perm) {
  std::vector<QPolynomial::Term> ts;
  ts.reserve(f.terms().size());
  for (const auto& t : f.terms()) {
    std::array<uint16_t, kNumVars> e{};
    for (int i = 0; i < kNumVars; ++i)
      e[static_cast<size_t>(perm[static_cast<size_t>(i)])] = t.m.e[static_cast<size_t>(i)];
    ts.push_back({Monomial(e), t.c});
  }
  return QPolynomial::from_terms(std::move(ts));
}

std::vector<std::string> s4_orbit_of(const QPolynomial& f) {
  std::array<int, kNumVars> perm{0, 1, 2, 3};
  std::vector<std::string> images;
  do {
    images.push_back(to_string(apply_permutation(f, perm)));
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::sort(images.begin(), images.end());
  images.erase(std::unique(images.begin(), images.end()), images.end());
  return images;
}

OrbitTable s4_orbits(const VertexSet& v) {
  OrbitTable table;
  std::unordered_map<std::string, const QPolynomial*> present;
  for (const auto& m : v.members) present.emplace(to_string(m), &m);

  for (const auto& m : v.members) {
    std::string key = to_string(m);
    if (table.orbit_of.count(key)) continue;
    std::vector<std::string> orbit;
    for (const std::string& img : s4_orbit_of(m))
      if (present.count(img)) orbit.push_back(img);
    size_t id = table.orbits.size();
    for (const std::string& s : orbit) table.orbit_of.emplace(s, id);
    table.representatives.push_back(orbit.front());  // sorted, so front is smallest
    table.orbits.push_back(std::move(orbit));
  }
  return table;
}

std::vector<Edge> complete_edges(const VertexSet& w) {
  std::vector<std::string> ids = w.member_strings();
  std::vector<Edge> out;
  out.reserve(ids.size() * (ids.size() - 1) / 2);
  for (size_t i = 0; i < ids.size(); ++i)
    for (size_t j = i + 1; j < ids.size(); ++j) out.push_back({ids[i], ids[j]});
  return out;
}

std::vector<Edge> monomial_difference_edges(const QPolynomial& f, int companion_k) {
  const int k = static_cast<int>(f.term_count());
  if (companion_k != k + 1 && companion_k != k - 1)
    throw std::invalid_argument("monomial_difference_edges: companion set must be V_{k+1} or V_{k-1}");
  const std::string f_str = to_string(f);
  std::vector<Edge> out;
  if (companion_k == k + 1) {
    for (const Monomial& m : quartic_monomials()) {
      if (!f.coeff_of(m).is_zero()) continue;
      QPolynomial g = f + QPolynomial::monomial(m);
      if (is_smooth(g)) out.push_back({f_str, to_string(g)});
    }
  } else {
    for (const auto& t : f.terms()) {
      QPolynomial g = f - QPolynomial::monomial(t.m, t.c);
      if (g.is_zero()) continue;
      if (is_smooth(g)) out.push_back({f_str, to_string(g)});
    }
  }
  return out;
}

SplitSpec split(const std::vector<std::string>& ids, double alpha, uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("split: alpha must be in (0,1)");
  SplitSpec s;
  s.alpha = alpha;
  s.seed = seed;
  std::vector<std::string> shuffled = ids;
  std::mt19937_64 rng(seed);
  fisher_yates(shuffled, rng);
  size_t n_train = static_cast<size_t>(std::llround(alpha * static_cast<double>(ids.size())));
  n_train = std::min(n_train, shuffled.size());
  s.train.assign(shuffled.begin(), shuffled.begin() + static_cast<long>(n_train));
  s.test.assign(shuffled.begin() + static_cast<long>(n_train), shuffled.end());
  return s;
}

std::vector<std::string> balance_oversample(
    const std::vector<std::pair<std::string, bool>>& labeled, uint64_t seed) {
  std::vector<std::string> pos, neg;
  for (const auto& [id, lab] : labeled) (lab ? pos : neg).push_back(id);
  if (pos.empty() || neg.empty())
    throw std::invalid_argument("balance_oversample: both classes must be nonempty");
  std::vector<std::string> out;
  for (const auto& [id, lab] : labeled) out.push_back(id);
  std::mt19937_64 rng(seed);
  const auto& minority = pos.size() < neg.size() ? pos : neg;
  size_t deficit = (pos.size() < neg.size() ? neg.size() : pos.size()) - minority.size();
  std::uniform_int_distribution<size_t> d(0, minority.size() - 1);
  for (size_t i = 0; i < deficit; ++i) out.push_back(minority[d(rng)]);
  return out;
}

}  // namespace pfpath
