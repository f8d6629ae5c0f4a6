#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pfpath/dataset.hpp"

namespace pfpath {

enum class AttemptKind { Success, Timeout, Faulted, SingularFamily, Cancelled };

std::string attempt_kind_name(AttemptKind k);
AttemptKind attempt_kind_from_name(const std::string& s);

struct AttemptOutcome {
  AttemptKind kind = AttemptKind::Faulted;
  double elapsed_s = 0.0;
  int order = -1, degree = -1;
  std::string detail;
};

/// The expensive per-edge program of the search. Implementations enforce the
/// budget themselves and poll `cancel` for an early stop. Throwing counts as
/// a fault and never crashes the search loop.
class EdgeOracle {
public:
  virtual ~EdgeOracle() = default;
  virtual AttemptOutcome attempt(const Edge& e, double budget_s,
                                 const std::atomic<bool>* cancel) = 0;
};

/// Deterministic stand-in oracle: per-edge cost from an explicit table or a
/// seeded hash of the edge id. In realtime mode it burns wall clock in 1 ms
/// slices (for timeout/cancellation tests); otherwise outcomes are instant.
class SyntheticOracle : public EdgeOracle {
public:
  struct Options {
    bool realtime = false;
    double hash_scale = 2.0;  // hashed costs land in [0, hash_scale)
    std::uint64_t seed = 0;
  };
  SyntheticOracle();
  explicit SyntheticOracle(Options opt) : opt_(opt) {}

  void set_cost(const std::string& edge_id, double cost_s) { costs_[edge_id] = cost_s; }
  void set_fault(const std::string& edge_id) { faults_.insert(edge_id); }
  double cost_of(const Edge& e) const;

  AttemptOutcome attempt(const Edge& e, double budget_s, const std::atomic<bool>* cancel) override;
  long calls() const { return calls_.load(); }

private:
  Options opt_;
  std::unordered_map<std::string, double> costs_;
  std::unordered_set<std::string> faults_;
  std::atomic<long> calls_{0};
};

/// Runs the budgeted first-ODE derivation on the pencil an edge denotes.
class PicardFuchsOracle : public EdgeOracle {
public:
  AttemptOutcome attempt(const Edge& e, double budget_s, const std::atomic<bool>* cancel) override;
};

struct SearchProblem {
  std::vector<std::string> targets;    // V
  std::vector<std::string> waypoints;  // W, contains V
  std::vector<Edge> edges;             // E, inside W x W
  double budget_s = 30.0;
  EdgeOracle* oracle = nullptr;
  std::function<double(const Edge&)> scorer;  // optional computability score
};

struct AttemptRecord {
  Edge e;
  AttemptOutcome o;
  std::int64_t timestamp_ms = 0;
};

struct SearchResult {
  bool connected = false;
  std::vector<Edge> accepted;
  std::vector<AttemptRecord> attempts;  // this run only, arrival order
};

class UnionFind {
public:
  explicit UnionFind(size_t n) : parent_(n), rank_(n, 0) {
    for (size_t i = 0; i < n; ++i) parent_[i] = i;
  }
  size_t find(size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(size_t a, size_t b) {
    a = find(a), b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }
  bool same(size_t a, size_t b) { return find(a) == find(b); }

private:
  std::vector<size_t> parent_;
  std::vector<size_t> rank_;
};

struct CorruptCheckpoint : std::runtime_error {
  size_t line;
  CorruptCheckpoint(const std::string& what, size_t ln)
      : std::runtime_error(what + " (line " + std::to_string(ln) + ")"), line(ln) {}
};

/// Append-only JSON-Lines attempt log; replaying it reconstructs the forest.
class CheckpointLog {
public:
  CheckpointLog() = default;  // disabled
  explicit CheckpointLog(std::string path) : path_(std::move(path)) {}
  bool enabled() const { return !path_.empty(); }
  void append(const AttemptRecord& r);
  static std::vector<AttemptRecord> load(const std::string& path);

private:
  std::string path_;
  std::mutex mu_;
};

struct BruteForceOptions {
  int workers = 1;
  CheckpointLog* log = nullptr;
  const std::vector<AttemptRecord>* resume_from = nullptr;
};

/// Algorithm: walk the queue, attempt each edge under the threshold budget,
/// keep successes, stop as soon as the targets are connected. Oracle faults
/// are recorded and skipped. With one worker the attempt sequence is exactly
/// the queue truncated at success.
SearchResult brute_force(const SearchProblem& p, const std::vector<Edge>& queue,
                         const BruteForceOptions& opt = {});

struct InformedOptions {
  BruteForceOptions base;
  std::uint64_t shuffle_seed = 0;
  int max_rounds = 1;
  /// Grow W/E or raise the budget between rounds; return false to give up.
  std::function<bool(SearchProblem&)> enlarge;
  /// Retrain the scorer from the labels collected so far.
  std::function<void(const std::vector<AttemptRecord>&, SearchProblem&)> retrain;
};

/// Score-sorted (descending, edge-id tiebreak) or seeded-random queue, then
/// brute force; collected attempt outcomes feed the retrain hook between
/// rounds.
SearchResult informed_brute_force(SearchProblem p, const InformedOptions& opt = {});

/// Breadth-first spanning tree of the component containing the targets,
/// pruned so every leaf is a target. Edges come out in canonical orientation.
std::vector<Edge> extract_tree(const std::vector<Edge>& accepted,
                               const std::vector<std::string>& targets);

/// Vertex sequence from f to g inside the tree.
std::vector<std::string> extract_path(const std::vector<Edge>& tree, const std::string& f,
                                      const std::string& g);

}  // namespace pfpath
