#include "pfpath/scheduler.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "pfpath/clock.hpp"
#include "pfpath/picard_fuchs.hpp"
#include "pfpath/rng.hpp"

namespace pfpath {

using nlohmann::json;

std::string attempt_kind_name(AttemptKind k) {
  switch (k) {
    case AttemptKind::Success: return "success";
    case AttemptKind::Timeout: return "timeout";
    case AttemptKind::Faulted: return "faulted";
    case AttemptKind::SingularFamily: return "singular_family";
    case AttemptKind::Cancelled: return "cancelled";
  }
  return "faulted";
}

AttemptKind attempt_kind_from_name(const std::string& s) {
  if (s == "success") return AttemptKind::Success;
  if (s == "timeout") return AttemptKind::Timeout;
  if (s == "faulted") return AttemptKind::Faulted;
  if (s == "singular_family") return AttemptKind::SingularFamily;
  if (s == "cancelled") return AttemptKind::Cancelled;
  throw std::invalid_argument("unknown attempt kind: " + s);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

SyntheticOracle::SyntheticOracle() : opt_(Options()) {}

double SyntheticOracle::cost_of(const Edge& e) const {
  auto it = costs_.find(e.id());
  if (it != costs_.end()) return it->second;
  std::uint64_t h = splitmix64(std::hash<std::string>{}(e.id()) ^ opt_.seed);
  return opt_.hash_scale * (static_cast<double>(h >> 11) / 9007199254740992.0);  // [0,1) * scale
}

AttemptOutcome SyntheticOracle::attempt(const Edge& e, double budget_s,
                                        const std::atomic<bool>* cancel) {
  calls_.fetch_add(1);
  if (faults_.count(e.id())) throw std::runtime_error("synthetic worker crash on " + e.id());
  double cost = cost_of(e);
  if (!opt_.realtime) {
    if (cost < budget_s) return {AttemptKind::Success, cost, 1, 1, ""};
    return {AttemptKind::Timeout, budget_s, -1, -1, ""};
  }
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  const double stop_at = std::min(cost, budget_s);
  while (elapsed() < stop_at) {
    if (cancel && cancel->load(std::memory_order_relaxed))
      return {AttemptKind::Cancelled, elapsed(), -1, -1, ""};
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  if (cost < budget_s) return {AttemptKind::Success, elapsed(), 1, 1, ""};
  return {AttemptKind::Timeout, elapsed(), -1, -1, ""};
}

AttemptOutcome PicardFuchsOracle::attempt(const Edge& e, double budget_s,
                                          const std::atomic<bool>* cancel) {
  AttemptOutcome out;
  try {
    Pencil p = Pencil::make_unchecked(parse_polynomial(e.f), parse_polynomial(e.g));
    Budget b;
    b.wall_clock_s = budget_s;
    FirstOdeResult r = first_ode(p, b, cancel);
    out.elapsed_s = r.elapsed_s;
    out.detail = r.detail;
    switch (r.status) {
      case OdeStatus::Success:
        out.kind = AttemptKind::Success;
        out.order = r.op->order();
        out.degree = r.op->degree();
        break;
      case OdeStatus::Timeout:
        out.kind = AttemptKind::Timeout;
        break;
      case OdeStatus::SingularFamily:
        out.kind = AttemptKind::SingularFamily;
        break;
    }
  } catch (const Cancelled&) {
    out.kind = AttemptKind::Cancelled;
  }
  return out;
}

void CheckpointLog::append(const AttemptRecord& r) {
  if (!enabled()) return;
  std::lock_guard<std::mutex> lock(mu_);
  std::ofstream f(path_, std::ios::app);
  if (!f) throw std::runtime_error("checkpoint: cannot open " + path_);
  json j{{"f", r.e.f},
         {"g", r.e.g},
         {"outcome", attempt_kind_name(r.o.kind)},
         {"elapsed_s", r.o.elapsed_s},
         {"order", r.o.order},
         {"degree", r.o.degree},
         {"timestamp", r.timestamp_ms}};
  f << j.dump() << "\n";
}

std::vector<AttemptRecord> CheckpointLog::load(const std::string& path) {
  std::vector<AttemptRecord> out;
  std::ifstream f(path);
  if (!f) return out;  // no checkpoint yet: fresh run
  std::string line;
  size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
      AttemptRecord r;
      r.e = {j.at("f").get<std::string>(), j.at("g").get<std::string>()};
      r.o.kind = attempt_kind_from_name(j.at("outcome").get<std::string>());
      r.o.elapsed_s = j.at("elapsed_s").get<double>();
      r.o.order = j.value("order", -1);
      r.o.degree = j.value("degree", -1);
      r.timestamp_ms = j.at("timestamp").get<std::int64_t>();
      out.push_back(std::move(r));
    } catch (const CorruptCheckpoint&) {
      throw;
    } catch (const std::exception& ex) {
      throw CorruptCheckpoint(std::string("checkpoint: ") + ex.what(), lineno);
    }
  }
  return out;
}

namespace {

struct Forest {
  std::unordered_map<std::string, size_t> index;
  UnionFind uf;

  explicit Forest(const std::vector<std::string>& waypoints) : uf(waypoints.size()) {
    for (size_t i = 0; i < waypoints.size(); ++i) index.emplace(waypoints[i], i);
  }
  size_t at(const std::string& v) const {
    auto it = index.find(v);
    if (it == index.end()) throw std::invalid_argument("search: vertex outside W: " + v);
    return it->second;
  }
  void accept(const Edge& e) { uf.unite(at(e.f), at(e.g)); }
  bool targets_connected(const std::vector<std::string>& targets) {
    if (targets.empty()) return true;
    size_t root = uf.find(at(targets[0]));
    for (const auto& t : targets)
      if (uf.find(at(t)) != root) return false;
    return true;
  }
};

}  // namespace

SearchResult brute_force(const SearchProblem& p, const std::vector<Edge>& queue,
                         const BruteForceOptions& opt) {
  if (!p.oracle) throw std::invalid_argument("brute_force: no oracle");
  Forest forest(p.waypoints);
  for (const auto& t : p.targets) forest.at(t);  // validates V inside W
  for (const auto& e : queue) forest.at(e.f), forest.at(e.g);

  SearchResult res;
  std::unordered_set<std::string> attempted;
  if (opt.resume_from) {
    for (const AttemptRecord& r : *opt.resume_from) {
      attempted.insert(r.e.id());
      if (r.o.kind == AttemptKind::Success) {
        forest.accept(r.e);
        res.accepted.push_back(r.e);
      }
    }
  }
  if (forest.targets_connected(p.targets)) {
    res.connected = true;
    return res;
  }

  auto attempt_one = [&](const Edge& e, const std::atomic<bool>* cancel) -> AttemptOutcome {
    try {
      return p.oracle->attempt(e, p.budget_s, cancel);
    } catch (const std::exception& ex) {
      return {AttemptKind::Faulted, 0.0, -1, -1, ex.what()};
    }
  };

  if (opt.workers <= 1) {
    for (const Edge& e : queue) {
      if (attempted.count(e.id())) continue;
      AttemptOutcome o = attempt_one(e, nullptr);
      AttemptRecord rec{e, o, now_ms()};
      if (opt.log) opt.log->append(rec);
      res.attempts.push_back(rec);
      attempted.insert(e.id());
      if (o.kind == AttemptKind::Success) {
        forest.accept(e);
        res.accepted.push_back(e);
        if (forest.targets_connected(p.targets)) {
          res.connected = true;
          return res;
        }
      }
    }
    res.connected = forest.targets_connected(p.targets);
    return res;
  }

  // Parallel pool: workers pull the next queue index; whoever finishes takes
  // the coordinator lock to record the outcome. Early stop is best-effort:
  // in-flight attempts are cancelled but still logged.
  std::mutex mu;
  std::atomic<bool> stop{false};
  size_t next = 0;
  auto worker = [&]() {
    while (true) {
      Edge e;
      {
        std::lock_guard<std::mutex> lock(mu);
        while (next < queue.size() && attempted.count(queue[next].id())) ++next;
        if (next >= queue.size() || stop.load()) return;
        e = queue[next];
        attempted.insert(e.id());
        ++next;
      }
      AttemptOutcome o = attempt_one(e, &stop);
      {
        std::lock_guard<std::mutex> lock(mu);
        AttemptRecord rec{e, o, now_ms()};
        if (opt.log) opt.log->append(rec);
        res.attempts.push_back(rec);
        if (o.kind == AttemptKind::Success) {
          forest.accept(e);
          res.accepted.push_back(e);
          if (forest.targets_connected(p.targets)) stop.store(true);
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 0; i < opt.workers; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  res.connected = forest.targets_connected(p.targets);
  return res;
}

SearchResult informed_brute_force(SearchProblem p, const InformedOptions& opt) {
  std::vector<AttemptRecord> collected;
  if (opt.base.resume_from)
    collected.insert(collected.end(), opt.base.resume_from->begin(), opt.base.resume_from->end());

  SearchResult last;
  for (int round = 0; round < std::max(1, opt.max_rounds); ++round) {
    std::vector<Edge> queue = p.edges;
    if (p.scorer) {
      std::vector<std::pair<double, size_t>> keyed(queue.size());
      for (size_t i = 0; i < queue.size(); ++i) keyed[i] = {p.scorer(queue[i]), i};
      std::stable_sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;  // descending score
        return queue[a.second].id() < queue[b.second].id();
      });
      std::vector<Edge> sorted;
      sorted.reserve(queue.size());
      for (const auto& [s, i] : keyed) sorted.push_back(queue[i]);
      queue = std::move(sorted);
    } else {
      std::mt19937_64 rng(opt.shuffle_seed + static_cast<std::uint64_t>(round));
      fisher_yates(queue, rng);
    }

    BruteForceOptions bopt = opt.base;
    bopt.resume_from = &collected;
    SearchResult res = brute_force(p, queue, bopt);
    collected.insert(collected.end(), res.attempts.begin(), res.attempts.end());
    // Cumulative view: accepted edges include resumed successes.
    last = std::move(res);
    if (last.connected) return last;
    if (!opt.enlarge || round + 1 >= std::max(1, opt.max_rounds)) return last;
    if (!opt.enlarge(p)) return last;
    if (opt.retrain) opt.retrain(collected, p);
  }
  return last;
}

std::vector<Edge> extract_tree(const std::vector<Edge>& accepted,
                               const std::vector<std::string>& targets) {
  if (targets.empty()) return {};
  std::unordered_map<std::string, std::vector<std::string>> adj;
  for (const Edge& e : accepted) {
    adj[e.f].push_back(e.g);
    adj[e.g].push_back(e.f);
  }
  for (auto& [v, nbrs] : adj) std::sort(nbrs.begin(), nbrs.end());

  std::unordered_map<std::string, std::string> parent;
  std::deque<std::string> bfs{targets[0]};
  parent[targets[0]] = targets[0];
  while (!bfs.empty()) {
    std::string v = bfs.front();
    bfs.pop_front();
    for (const std::string& w : adj[v])
      if (!parent.count(w)) {
        parent[w] = v;
        bfs.push_back(w);
      }
  }
  for (const auto& t : targets)
    if (!parent.count(t))
      throw std::invalid_argument("extract_tree: targets are not in one component");

  // keep only the union of root->target paths (prunes non-target leaves)
  std::unordered_set<std::string> keep;
  for (const auto& t : targets) {
    std::string v = t;
    while (!keep.count(v)) {
      keep.insert(v);
      if (parent[v] == v) break;
      v = parent[v];
    }
  }
  std::vector<Edge> tree;
  for (const auto& v : keep) {
    if (parent[v] == v) continue;
    const std::string& u = parent[v];
    tree.push_back(u < v ? Edge{u, v} : Edge{v, u});
  }
  std::sort(tree.begin(), tree.end(), [](const Edge& a, const Edge& b) { return a.id() < b.id(); });
  return tree;
}

std::vector<std::string> extract_path(const std::vector<Edge>& tree, const std::string& f,
                                      const std::string& g) {
  std::unordered_map<std::string, std::vector<std::string>> adj;
  for (const Edge& e : tree) {
    adj[e.f].push_back(e.g);
    adj[e.g].push_back(e.f);
  }
  std::unordered_map<std::string, std::string> parent;
  std::deque<std::string> bfs{f};
  parent[f] = f;
  while (!bfs.empty()) {
    std::string v = bfs.front();
    bfs.pop_front();
    if (v == g) break;
    for (const std::string& w : adj[v])
      if (!parent.count(w)) {
        parent[w] = v;
        bfs.push_back(w);
      }
  }
  if (!parent.count(g)) throw std::invalid_argument("extract_path: endpoints not connected in tree");
  std::vector<std::string> path{g};
  while (path.back() != f) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace pfpath
