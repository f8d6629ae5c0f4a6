#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "pfpath/rng.hpp"

#include "pfpath/scheduler.hpp"

using namespace pfpath;

namespace {

// Literal transcription of the brute-force-with-thresholding loop, used as a
// reference interpreter: no early-exit tricks, no pooling, just the algorithm.
struct ReferenceRun {
  bool connected = false;
  std::vector<std::string> attempted;
  std::vector<Edge> accepted;
};

ReferenceRun reference_brute_force(const std::vector<std::string>& targets,
                                   const std::vector<std::string>& waypoints,
                                   const std::vector<Edge>& queue, double k,
                                   SyntheticOracle& oracle) {
  ReferenceRun run;
  std::unordered_map<std::string, std::string> parent;
  for (const auto& w : waypoints) parent[w] = w;
  std::function<std::string(std::string)> find = [&](std::string v) {
    while (parent[v] != v) v = parent[v];
    return v;
  };
  auto connected = [&]() {
    for (const auto& t : targets)
      if (find(t) != find(targets[0])) return false;
    return true;
  };
  if (connected()) {
    run.connected = true;
    return run;
  }
  for (size_t n = 0; n < queue.size(); ++n) {
    const Edge& e = queue[n];
    run.attempted.push_back(e.id());
    bool success = oracle.cost_of(e) < k;
    if (success) {
      run.accepted.push_back(e);
      parent[find(e.f)] = find(e.g);
      if (connected()) {
        run.connected = true;
        return run;
      }
    }
  }
  run.connected = connected();
  return run;
}

SearchProblem toy_problem(SyntheticOracle* oracle) {
  SearchProblem p;
  p.targets = {"a", "b"};
  p.waypoints = {"a", "b", "c"};
  p.edges = {{"a", "b"}, {"a", "c"}, {"b", "c"}};
  p.budget_s = 30.0;
  p.oracle = oracle;
  return p;
}

void configure_toy(SyntheticOracle& o) {
  o.set_cost("a ~ b", std::numeric_limits<double>::infinity());
  o.set_cost("a ~ c", 1.0);
  o.set_cost("b ~ c", 1.0);
}

std::string tmp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("brute force on the three-edge toy instance") {
  SyntheticOracle oracle;
  configure_toy(oracle);
  SearchProblem p = toy_problem(&oracle);
  SearchResult r = brute_force(p, p.edges);
  CHECK(r.connected);
  REQUIRE(r.accepted.size() == 2);
  CHECK(r.accepted[0].id() == "a ~ c");
  CHECK(r.accepted[1].id() == "b ~ c");
  CHECK(r.attempts.size() == 3);  // the infinite edge was attempted and timed out
  CHECK(r.attempts[0].o.kind == AttemptKind::Timeout);
}

TEST_CASE("brute force fails on an empty edge list with two targets") {
  SyntheticOracle oracle;
  SearchProblem p = toy_problem(&oracle);
  p.edges.clear();
  SearchResult r = brute_force(p, {});
  CHECK(!r.connected);
  CHECK(r.attempts.empty());
}

TEST_CASE("singleton target set succeeds with no oracle calls") {
  SyntheticOracle oracle;
  configure_toy(oracle);
  SearchProblem p = toy_problem(&oracle);
  p.targets = {"a"};
  SearchResult r = brute_force(p, p.edges);
  CHECK(r.connected);
  CHECK(r.accepted.empty());
  CHECK(oracle.calls() == 0);
}

TEST_CASE("edges and targets must live inside W") {
  SyntheticOracle oracle;
  configure_toy(oracle);
  SearchProblem p = toy_problem(&oracle);
  p.targets.push_back("zzz");
  CHECK_THROWS_AS(brute_force(p, p.edges), std::invalid_argument);
}

TEST_CASE("informed search with a perfect scorer attempts only the tree") {
  SyntheticOracle oracle;
  configure_toy(oracle);
  SearchProblem p = toy_problem(&oracle);
  p.scorer = [&](const Edge& e) { return 1.0 / (1.0 + oracle.cost_of(e)); };
  SearchResult r = informed_brute_force(p);
  CHECK(r.connected);
  CHECK(r.attempts.size() == 2);
}

TEST_CASE("informed search with an adversarial scorer still succeeds") {
  SyntheticOracle oracle;
  configure_toy(oracle);
  SearchProblem p = toy_problem(&oracle);
  p.scorer = [&](const Edge& e) {
    double c = oracle.cost_of(e);
    return std::isinf(c) ? 1.0 : 0.0;  // prefers the impossible edge
  };
  SearchResult r = informed_brute_force(p);
  CHECK(r.connected);
  CHECK(r.attempts.size() == 3);
  CHECK(r.attempts[0].o.kind == AttemptKind::Timeout);
}

TEST_CASE("scorerless informed search shuffles reproducibly") {
  SyntheticOracle oracle;
  configure_toy(oracle);
  SearchProblem p = toy_problem(&oracle);
  InformedOptions opt;
  opt.shuffle_seed = 5;
  SearchResult a = informed_brute_force(p, opt);
  SearchResult b = informed_brute_force(p, opt);
  REQUIRE(a.attempts.size() == b.attempts.size());
  for (size_t i = 0; i < a.attempts.size(); ++i)
    CHECK(a.attempts[i].e.id() == b.attempts[i].e.id());
}

TEST_CASE("attempt timing honors the budget on sleeping edges") {
  SyntheticOracle::Options ropt;
  ropt.realtime = true;
  SyntheticOracle oracle(ropt);
  oracle.set_cost("a ~ b", 0.01);
  oracle.set_cost("s ~ s2", std::numeric_limits<double>::infinity());

  AttemptOutcome quick = oracle.attempt({"a", "b"}, 30.0, nullptr);
  CHECK(quick.kind == AttemptKind::Success);

  auto start = std::chrono::steady_clock::now();
  AttemptOutcome stalled = oracle.attempt({"s", "s2"}, 0.1, nullptr);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(stalled.kind == AttemptKind::Timeout);
  CHECK(wall <= 0.1 * 1.2 + 0.05);
  CHECK(stalled.elapsed_s >= 0.1);
}

TEST_CASE("fault injection is logged and the search continues") {
  SyntheticOracle oracle;
  configure_toy(oracle);
  oracle.set_fault("a ~ b");
  SearchProblem p = toy_problem(&oracle);
  SearchResult r = brute_force(p, p.edges);
  CHECK(r.connected);
  REQUIRE(r.attempts.size() == 3);
  CHECK(r.attempts[0].o.kind == AttemptKind::Faulted);
  CHECK(r.attempts[0].o.detail.find("crash") != std::string::npos);
}

TEST_CASE("extract_tree and extract_path on the toy instance") {
  std::vector<Edge> accepted{{"a", "c"}, {"b", "c"}};
  std::vector<Edge> tree = extract_tree(accepted, {"a", "b"});
  REQUIRE(tree.size() == 2);
  CHECK(tree[0].id() == "a ~ c");
  CHECK(tree[1].id() == "b ~ c");
  std::vector<std::string> path = extract_path(tree, "a", "b");
  REQUIRE(path.size() == 3);
  CHECK(path[0] == "a");
  CHECK(path[1] == "c");
  CHECK(path[2] == "b");
}

TEST_CASE("extract_tree prunes non-target leaves") {
  // star with hub h, targets two of four leaves
  std::vector<Edge> accepted{{"h", "l1"}, {"h", "l2"}, {"h", "l3"}, {"h", "l4"}};
  std::vector<Edge> tree = extract_tree(accepted, {"l1", "l2"});
  REQUIRE(tree.size() == 2);
  std::set<std::string> ids{tree[0].id(), tree[1].id()};
  CHECK(ids.count("h ~ l1"));
  CHECK(ids.count("h ~ l2"));
  std::vector<std::string> path = extract_path(tree, "l1", "l2");
  CHECK(path.size() == 3);
  CHECK(path[1] == "h");

  CHECK_THROWS_AS(extract_tree({{"a", "b"}}, std::vector<std::string>{"a", "zzz"}),
                  std::invalid_argument);
}

TEST_CASE("checkpoint interrupt and resume reproduce the uninterrupted run") {
  std::string path = tmp_path("pfpath_ckpt_test.jsonl");
  std::filesystem::remove(path);

  SyntheticOracle oracle;
  configure_toy(oracle);
  SearchProblem p = toy_problem(&oracle);

  // uninterrupted baseline
  SearchResult full = brute_force(p, p.edges);

  // interrupted: only the first queue entry, logged
  SyntheticOracle oracle2;
  configure_toy(oracle2);
  p.oracle = &oracle2;
  CheckpointLog log(path);
  BruteForceOptions opt;
  opt.log = &log;
  std::vector<Edge> first_only{p.edges[0]};
  SearchResult partial = brute_force(p, first_only, opt);
  CHECK(!partial.connected);
  CHECK(oracle2.calls() == 1);

  // resume: never re-attempts the logged edge, same final state
  std::vector<AttemptRecord> loaded = CheckpointLog::load(path);
  REQUIRE(loaded.size() == 1);
  BruteForceOptions ropt;
  ropt.resume_from = &loaded;
  SearchResult resumed = brute_force(p, p.edges, ropt);
  CHECK(oracle2.calls() == 3);  // 1 + the two remaining edges
  CHECK(resumed.connected == full.connected);
  std::set<std::string> r1, r2;
  for (const Edge& e : full.accepted) r1.insert(e.id());
  for (const Edge& e : resumed.accepted) r2.insert(e.id());
  CHECK(r1 == r2);
  std::filesystem::remove(path);
}

TEST_CASE("resume of a completed search makes no oracle calls") {
  std::string path = tmp_path("pfpath_ckpt_done.jsonl");
  std::filesystem::remove(path);
  SyntheticOracle oracle;
  configure_toy(oracle);
  SearchProblem p = toy_problem(&oracle);
  CheckpointLog log(path);
  BruteForceOptions opt;
  opt.log = &log;
  SearchResult full = brute_force(p, p.edges, opt);
  REQUIRE(full.connected);
  long calls_before = oracle.calls();

  std::vector<AttemptRecord> loaded = CheckpointLog::load(path);
  BruteForceOptions ropt;
  ropt.resume_from = &loaded;
  SearchResult resumed = brute_force(p, p.edges, ropt);
  CHECK(resumed.connected);
  CHECK(oracle.calls() == calls_before);
  std::filesystem::remove(path);
}

TEST_CASE("empty checkpoint equals a fresh run") {
  SyntheticOracle oracle;
  configure_toy(oracle);
  SearchProblem p = toy_problem(&oracle);
  std::vector<AttemptRecord> empty;
  BruteForceOptions opt;
  opt.resume_from = &empty;
  SearchResult r = brute_force(p, p.edges, opt);
  SearchResult fresh = brute_force(p, p.edges);
  CHECK(r.connected == fresh.connected);
  CHECK(r.attempts.size() == fresh.attempts.size());
}

TEST_CASE("corrupt checkpoint lines are rejected with their line number") {
  std::string path = tmp_path("pfpath_ckpt_corrupt.jsonl");
  {
    std::ofstream f(path);
    f << R"({"f":"a","g":"b","outcome":"success","elapsed_s":1.0,"timestamp":5})" << "\n";
    f << "{ this is not json\n";
  }
  try {
    CheckpointLog::load(path);
    FAIL("expected CorruptCheckpoint");
  } catch (const CorruptCheckpoint& e) {
    CHECK(e.line == 2);
  }
  std::filesystem::remove(path);
}

TEST_CASE("checkpoint replay reconstructs the forest exactly") {
  std::string path = tmp_path("pfpath_ckpt_replay.jsonl");
  std::filesystem::remove(path);
  SyntheticOracle::Options opts;
  opts.hash_scale = 2.0;
  opts.seed = 17;
  SyntheticOracle oracle(opts);
  SearchProblem p;
  for (int i = 0; i < 12; ++i) p.waypoints.push_back("v" + std::to_string(i));
  p.targets = {"v0", "v7", "v11"};
  std::mt19937_64 rng(19);
  for (int i = 0; i < 12; ++i)
    for (int j = i + 1; j < 12; ++j)
      if (rng() % 3 == 0) p.edges.push_back({"v" + std::to_string(i), "v" + std::to_string(j)});
  p.budget_s = 1.0;
  p.oracle = &oracle;
  CheckpointLog log(path);
  BruteForceOptions opt;
  opt.log = &log;
  SearchResult r = brute_force(p, p.edges, opt);

  // every accepted edge has a successful logged outcome; union-find over the
  // log's successes matches the result's accepted set
  std::vector<AttemptRecord> loaded = CheckpointLog::load(path);
  CHECK(loaded.size() == r.attempts.size());
  std::set<std::string> accepted_ids;
  for (const Edge& e : r.accepted) accepted_ids.insert(e.id());
  std::set<std::string> logged_successes;
  for (const auto& rec : loaded)
    if (rec.o.kind == AttemptKind::Success) logged_successes.insert(rec.e.id());
  CHECK(accepted_ids == logged_successes);
  std::filesystem::remove(path);
}

TEST_CASE("single-worker runs match the reference interpreter on random instances") {
  std::mt19937_64 rng(23);
  for (int inst = 0; inst < 100; ++inst) {
    SyntheticOracle::Options opts;
    opts.hash_scale = 2.0;
    opts.seed = rng();
    SyntheticOracle oracle(opts);
    int n = 5 + static_cast<int>(rng() % 36);  // up to 40 vertices
    SearchProblem p;
    for (int i = 0; i < n; ++i) p.waypoints.push_back("v" + std::to_string(i));
    int nt = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < nt; ++i) p.targets.push_back(p.waypoints[rng() % static_cast<size_t>(n)]);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng() % 4 == 0) p.edges.push_back({p.waypoints[static_cast<size_t>(i)], p.waypoints[static_cast<size_t>(j)]});
    if (rng() % 5 == 0 && !p.edges.empty())
      oracle.set_cost(p.edges[rng() % p.edges.size()].id(), std::numeric_limits<double>::infinity());
    p.budget_s = 1.0;
    p.oracle = &oracle;
    std::vector<Edge> queue = p.edges;
    std::mt19937_64 qrng(rng());
    fisher_yates(queue, qrng);

    SearchResult lib = brute_force(p, queue);
    ReferenceRun ref = reference_brute_force(p.targets, p.waypoints, queue, p.budget_s, oracle);

    CHECK(lib.connected == ref.connected);
    REQUIRE(lib.attempts.size() == ref.attempted.size());
    for (size_t i = 0; i < ref.attempted.size(); ++i)
      CHECK(lib.attempts[i].e.id() == ref.attempted[i]);
    REQUIRE(lib.accepted.size() == ref.accepted.size());
    for (size_t i = 0; i < ref.accepted.size(); ++i)
      CHECK(lib.accepted[i].id() == ref.accepted[i].id());
  }
}

TEST_CASE("multi-worker accepts a superset and agrees on connectivity") {
  std::mt19937_64 rng(29);
  for (int inst = 0; inst < 10; ++inst) {
    SyntheticOracle::Options opts;
    opts.seed = rng();
    SyntheticOracle o1(opts), o2(opts);
    int n = 10 + static_cast<int>(rng() % 20);
    SearchProblem p;
    for (int i = 0; i < n; ++i) p.waypoints.push_back("v" + std::to_string(i));
    p.targets = {p.waypoints[0], p.waypoints[1]};
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng() % 3 == 0) p.edges.push_back({p.waypoints[static_cast<size_t>(i)], p.waypoints[static_cast<size_t>(j)]});
    p.budget_s = 1.0;
    p.oracle = &o1;

    SearchResult single = brute_force(p, p.edges);
    p.oracle = &o2;
    BruteForceOptions mopt;
    mopt.workers = 3;
    SearchResult multi = brute_force(p, p.edges, mopt);

    CHECK(single.connected == multi.connected);
    std::set<std::string> ms;
    for (const Edge& e : multi.accepted) ms.insert(e.id());
    for (const Edge& e : single.accepted) CHECK(ms.count(e.id()) == 1);
  }
}

TEST_CASE("informed search retrains and enlarges between rounds") {
  SyntheticOracle oracle;
  configure_toy(oracle);
  oracle.set_cost("b ~ d", 0.5);
  oracle.set_cost("a ~ c", std::numeric_limits<double>::infinity());  // breaks round 1
  oracle.set_cost("a ~ d", 0.5);
  SearchProblem p = toy_problem(&oracle);

  InformedOptions opt;
  opt.max_rounds = 2;
  int enlarged = 0, retrained = 0;
  opt.enlarge = [&](SearchProblem& prob) {
    ++enlarged;
    prob.waypoints.push_back("d");
    prob.edges.push_back({"a", "d"});
    prob.edges.push_back({"b", "d"});
    return true;
  };
  opt.retrain = [&](const std::vector<AttemptRecord>& data, SearchProblem& prob) {
    ++retrained;
    CHECK(!data.empty());
    prob.scorer = [&oracle](const Edge& e) { return 1.0 / (1.0 + oracle.cost_of(e)); };
  };
  SearchResult r = informed_brute_force(p, opt);
  CHECK(r.connected);
  CHECK(enlarged == 1);
  CHECK(retrained == 1);
}
