// Command-line front end: enumerate -> orbits/edges -> gm -> label -> pca ->
// train -> predict -> roc -> search -> report. Every command is re-runnable
// against its stores; outputs carry the producing command, a config hash and
// the version.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <unordered_set>
#include <thread>

#include "pfpath/clock.hpp"
#include "pfpath/dataset.hpp"
#include "pfpath/features.hpp"
#include "pfpath/nn.hpp"
#include "pfpath/picard_fuchs.hpp"
#include "pfpath/rng.hpp"
#include "pfpath/scheduler.hpp"
#include "pfpath/stores.hpp"

using namespace pfpath;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;       // operational failure
constexpr int kExitSearchFail = 2;  // the search ran fine and returned Fail

struct Ctx {
  std::string data_dir = "data";
  std::string command_line;
  std::string config_hash;

  std::string path(const std::string& name) const { return (fs::path(data_dir) / name).string(); }
  Meta meta() const { return Meta{command_line, config_hash, kVersion}; }
  void ensure_data_dir() const { fs::create_directories(data_dir); }
};

std::vector<Rational> parse_basepoints(const std::string& spec) {
  std::vector<Rational> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(Rational::from_string(tok));
  }
  if (out.empty()) throw std::runtime_error("no basepoints given");
  return out;
}

std::vector<int> parse_widths(const std::string& spec) {
  std::vector<int> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::stoi(tok));
  return out;
}

std::vector<std::string> load_vertex_strings(const std::string& path) {
  std::vector<std::string> out;
  for (const json& row : read_jsonl(path)) out.push_back(row.at("poly").get<std::string>());
  return out;
}

std::vector<Edge> load_edges(const std::string& path) {
  std::vector<Edge> out;
  for (const json& row : read_jsonl(path))
    out.push_back({row.at("f").get<std::string>(), row.at("g").get<std::string>()});
  return out;
}


std::map<std::string, std::vector<ConnectionMatrix>> load_matrices(const std::string& path) {
  std::map<std::string, std::vector<ConnectionMatrix>> out;
  for (const json& row : read_jsonl(path)) {
    std::vector<ConnectionMatrix> ms;
    for (const json& jm : row.at("matrices")) ms.push_back(connection_matrix_from_json(jm));
    out[row.at("edge").get<std::string>()] = std::move(ms);
  }
  return out;
}

Tensor3 channels_tensor(const std::vector<ConnectionMatrix>& ms) {
  std::vector<RationalMatrix> raw;
  for (const auto& m : ms) raw.push_back(m.entries);
  Tensor3 t;
  t.ch = psi_channels(raw);
  return t;
}

struct ModelFile {
  std::string kind;  // "mlp", "cnn", "ensemble"
  Network mlp, cnn;
};

ModelFile load_model(const std::string& path) {
  json j = read_json(path);
  ModelFile m;
  m.kind = j.at("kind").get<std::string>();
  if (m.kind == "ensemble") {
    m.mlp = network_from_json(j.at("mlp"));
    m.cnn = network_from_json(j.at("cnn"));
  } else if (m.kind == "mlp") {
    m.mlp = network_from_json(j.at("network"));
  } else if (m.kind == "cnn") {
    m.cnn = network_from_json(j.at("network"));
  } else {
    throw std::runtime_error("unknown model kind: " + m.kind);
  }
  return m;
}

double score_edge(const ModelFile& m, const PCAModel* pca, const Edge& e,
                  const std::vector<ConnectionMatrix>* ms) {
  double s = 1.0;
  if (m.kind == "mlp" || m.kind == "ensemble") {
    if (!pca) throw std::runtime_error("scoring with an MLP needs a PCA model");
    Eigen::VectorXd x = pca->transform(edge_vector(parse_polynomial(e.f), parse_polynomial(e.g)));
    s *= forward(m.mlp, x)(0);
  }
  if (m.kind == "cnn" || m.kind == "ensemble") {
    if (!ms) throw std::runtime_error("scoring with a CNN needs connection matrices");
    s *= forward(m.cnn, channels_tensor(*ms))(0);
  }
  return s;
}

// ---- command handlers ----

int cmd_enumerate(const Ctx& ctx, int k, int jobs) {
  VertexSet v = enumerate_fewnomials(k, jobs);
  std::vector<json> rows;
  for (const auto& f : v.members) rows.push_back(json{{"poly", to_string(f)}});
  ctx.ensure_data_dir();
  std::string out = ctx.path("vertices_k" + std::to_string(k) + ".jsonl");
  write_jsonl(out, ctx.meta(), rows);
  std::cout << "V_" << k << ": " << v.members.size() << " vertices -> " << out << "\n";
  return kExitOk;
}

int cmd_orbits(const Ctx& ctx, int k) {
  VertexSet v;
  v.k = k;
  for (const std::string& s :
       load_vertex_strings(ctx.path("vertices_k" + std::to_string(k) + ".jsonl")))
    v.members.push_back(parse_polynomial(s));
  OrbitTable table = s4_orbits(v);
  std::vector<json> rows;
  for (size_t i = 0; i < table.orbits.size(); ++i)
    rows.push_back(
        json{{"orbit", i}, {"rep", table.representatives[i]}, {"members", table.orbits[i]}});
  std::string out = ctx.path("orbits_k" + std::to_string(k) + ".jsonl");
  write_jsonl(out, ctx.meta(), rows);
  std::cout << "orbits of V_" << k << ": " << table.orbits.size() << " -> " << out << "\n";
  return kExitOk;
}

int cmd_edges(const Ctx& ctx, const std::string& policy, int k, int companion_k, long sample,
              std::uint64_t seed, bool count_only, const std::string& out_override,
              bool orbit_reps, long vertex_sample) {
  std::vector<Edge> edges;
  if (policy == "complete") {
    std::vector<std::string> ids =
        load_vertex_strings(ctx.path("vertices_k" + std::to_string(k) + ".jsonl"));
    if (count_only) {
      std::cout << "complete edges on V_" << k << ": " << complete_edge_count(ids.size()) << "\n";
      return kExitOk;
    }
    VertexSet v;
    v.k = k;
    for (const auto& s : ids) v.members.push_back(parse_polynomial(s));
    edges = complete_edges(v);
  } else if (policy == "monomial-difference") {
    std::vector<std::string> sources;
    if (orbit_reps) {
      for (const json& row : read_jsonl(ctx.path("orbits_k" + std::to_string(k) + ".jsonl")))
        sources.push_back(row.at("rep").get<std::string>());
    } else {
      sources = load_vertex_strings(ctx.path("vertices_k" + std::to_string(k) + ".jsonl"));
    }
    if (vertex_sample > 0 && static_cast<size_t>(vertex_sample) < sources.size()) {
      std::mt19937_64 rng(seed);
      std::vector<size_t> idx =
          sample_indices(sources.size(), static_cast<size_t>(vertex_sample), rng);
      std::vector<std::string> keep;
      for (size_t i : idx) keep.push_back(sources[i]);
      std::sort(keep.begin(), keep.end());
      sources = std::move(keep);
    }
    for (const std::string& s : sources)
      for (Edge& e : monomial_difference_edges(parse_polynomial(s), companion_k))
        edges.push_back(std::move(e));
    if (count_only) {
      std::cout << "monomial-difference edges: " << edges.size() << " from " << "sources\n";
      return kExitOk;
    }
  } else {
    throw std::runtime_error("unknown edge policy: " + policy);
  }

  if (sample > 0 && static_cast<size_t>(sample) < edges.size()) {
    std::mt19937_64 rng(seed);
    std::vector<size_t> idx = sample_indices(edges.size(), static_cast<size_t>(sample), rng);
    std::sort(idx.begin(), idx.end());
    std::vector<Edge> kept;
    for (size_t i : idx) kept.push_back(edges[i]);
    edges = std::move(kept);
  }
  std::vector<json> rows;
  for (const Edge& e : edges) rows.push_back(json{{"f", e.f}, {"g", e.g}});
  ctx.ensure_data_dir();
  std::string out = out_override.empty() ? ctx.path("edges.jsonl") : out_override;
  write_jsonl(out, ctx.meta(), rows);
  std::cout << edges.size() << " edges -> " << out << "\n";
  return kExitOk;
}

int cmd_gm(const Ctx& ctx, const std::string& edges_path, const std::string& basepoints,
           const std::string& out_override, long limit) {
  std::vector<Edge> edges = load_edges(edges_path);
  if (limit > 0 && static_cast<size_t>(limit) < edges.size())
    edges.resize(static_cast<size_t>(limit));
  std::vector<Rational> ts = parse_basepoints(basepoints);
  RingCache cache;
  std::vector<json> rows;
  for (const Edge& e : edges) {
    Pencil p = Pencil::make_unchecked(parse_polynomial(e.f), parse_polynomial(e.g));
    json ms = json::array();
    for (const Rational& t0 : ts)
      ms.push_back(connection_matrix_to_json(gm_connection_at(p, t0, nullptr, nullptr, &cache)));
    rows.push_back(json{{"edge", e.id()}, {"f", e.f}, {"g", e.g}, {"matrices", std::move(ms)}});
  }
  ctx.ensure_data_dir();
  std::string out = out_override.empty() ? ctx.path("matrices.jsonl") : out_override;
  write_jsonl(out, ctx.meta(), rows);
  std::cout << rows.size() << " connection-matrix rows -> " << out << "\n";
  return kExitOk;
}

int cmd_label(const Ctx& ctx, const std::string& edges_path, double budget_s, int jobs,
              const std::string& out_override, long limit, bool compact, bool relabel) {
  ctx.ensure_data_dir();
  std::string out = out_override.empty() ? ctx.path("labels.jsonl") : out_override;

  if (compact) {
    compact_label_store(out, ctx.meta());
    std::cout << "compacted " << out << " to " << load_label_store(out).size() << " labels\n";
    return kExitOk;
  }

  std::vector<Edge> edges = load_edges(edges_path);
  std::map<std::string, EdgeLabel> existing;
  if (fs::exists(out)) existing = load_label_store(out);
  std::vector<Edge> todo;
  for (const Edge& e : edges)
    if (relabel || !existing.count(e.id())) todo.push_back(e);
  if (limit > 0 && static_cast<size_t>(limit) < todo.size())
    todo.resize(static_cast<size_t>(limit));

  if (!fs::exists(out)) write_jsonl(out, ctx.meta(), {});

  std::mutex mu;
  std::atomic<size_t> next{0};
  std::atomic<long> done{0}, successes{0};
  auto worker = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= todo.size()) return;
      Pencil p = Pencil::make_unchecked(parse_polynomial(todo[i].f), parse_polynomial(todo[i].g));
      Budget b;
      b.wall_clock_s = budget_s;
      EdgeLabel lab = label_edge(p, b);
      {
        std::lock_guard<std::mutex> lock(mu);
        append_jsonl(out, label_to_json(lab));
      }
      done.fetch_add(1);
      if (lab.success) successes.fetch_add(1);
    }
  };
  int workers = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (int i = 0; i < std::max(1, workers); ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  std::cout << "labeled " << done.load() << " edges (" << successes.load() << " successes, "
            << existing.size() << " already present) -> " << out << "\n";
  return kExitOk;
}

int cmd_pca(const Ctx& ctx, const std::string& edges_path, int components,
            const std::string& out_override) {
  std::vector<Edge> edges = load_edges(edges_path);
  if (edges.empty()) throw std::runtime_error("no edges in " + edges_path);
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(edges.size()), 70);
  for (size_t i = 0; i < edges.size(); ++i)
    rows.row(static_cast<Eigen::Index>(i)) =
        edge_vector(parse_polynomial(edges[i].f), parse_polynomial(edges[i].g)).transpose();
  PCAModel m = pca_fit(rows, components);
  ctx.ensure_data_dir();
  std::string out = out_override.empty() ? ctx.path("pca.json") : out_override;
  write_json(out, ctx.meta(), pca_to_json(m));
  std::cout << "pca k=" << components
            << " explained=" << m.explained_variance_ratio(components) << " -> " << out << "\n";
  return kExitOk;
}

struct TrainPaths {
  std::string labels, matrices, pca, out;
};

int cmd_train(const Ctx& ctx, const std::string& model, double alpha, std::uint64_t seed,
              const TrainPaths& paths, const TrainConfig& base_cfg,
              const std::vector<int>& mlp_widths, bool balance) {
  std::map<std::string, EdgeLabel> labels = load_label_store(paths.labels);
  if (labels.empty()) throw std::runtime_error("no labels in " + paths.labels);

  const bool needs_cnn = model == "cnn" || model == "ensemble";
  const bool needs_mlp = model == "mlp" || model == "ensemble";

  std::map<std::string, std::vector<ConnectionMatrix>> matrices;
  if (needs_cnn) matrices = load_matrices(paths.matrices);
  PCAModel pca;
  if (needs_mlp) pca = pca_from_json(read_json(paths.pca));

  // labeled edges usable by every requested network
  std::vector<std::string> ids;
  for (const auto& [id, lab] : labels) {
    if (needs_cnn && !matrices.count(id)) continue;
    ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end());
  if (ids.empty()) throw std::runtime_error("no labeled edges with the required features");

  SplitSpec sp = split(ids, alpha, seed);
  std::vector<std::pair<std::string, bool>> train_labeled;
  for (const std::string& id : sp.train) train_labeled.push_back({id, labels.at(id).success});
  std::vector<std::string> train_ids;
  if (balance)
    train_ids = balance_oversample(train_labeled, seed + 1);
  else
    for (const auto& [id, s] : train_labeled) train_ids.push_back(id);

  auto edge_of = [&](const std::string& id) {
    size_t at = id.find(" ~ ");
    return Edge{id.substr(0, at), id.substr(at + 3)};
  };

  json out_j{{"kind", model},
             {"alpha", alpha},
             {"seed", seed},
             {"balanced", balance},
             {"split", {{"train", sp.train}, {"test", sp.test}}}};

  if (needs_mlp) {
    std::vector<Sample> data;
    for (const std::string& id : train_ids) {
      Edge e = edge_of(id);
      Eigen::VectorXd x = pca.transform(edge_vector(parse_polynomial(e.f), parse_polynomial(e.g)));
      data.push_back({x, labels.at(id).success ? 1.0 : 0.0});
    }
    Network net = make_mlp(pca.k, mlp_widths, seed);
    TrainConfig cfg = base_cfg;
    cfg.seed = seed + 2;
    TrainTrace trace = train(net, cfg, data);
    out_j[model == "mlp" ? "network" : "mlp"] = network_to_json(net);
    out_j["mlp_final_loss"] = trace.epoch_loss.back();
  }
  if (needs_cnn) {
    std::vector<Sample> data;
    int channels = -1;
    for (const std::string& id : train_ids) {
      Tensor3 t = channels_tensor(matrices.at(id));
      if (channels < 0) channels = static_cast<int>(t.ch.size());
      data.push_back({std::move(t), labels.at(id).success ? 1.0 : 0.0});
    }
    Network net = make_cnn(channels, 21, 21, seed + 3);
    TrainConfig cfg = base_cfg;
    cfg.seed = seed + 4;
    TrainTrace trace = train(net, cfg, data);
    out_j[model == "cnn" ? "network" : "cnn"] = network_to_json(net);
    out_j["cnn_final_loss"] = trace.epoch_loss.back();
  }

  ctx.ensure_data_dir();
  std::string out = paths.out.empty() ? ctx.path("model_" + model + ".json") : paths.out;
  write_json(out, ctx.meta(), std::move(out_j));
  std::cout << "trained " << model << " on " << train_ids.size() << " samples ("
            << sp.train.size() << " train edges, " << sp.test.size() << " held out) -> " << out
            << "\n";
  return kExitOk;
}

int cmd_predict(const Ctx& ctx, const std::string& model_path, const std::string& edges_path,
                const std::string& matrices_path, const std::string& pca_path,
                const std::string& out_override, long top) {
  ModelFile model = load_model(model_path);
  std::vector<Edge> edges = load_edges(edges_path);
  std::map<std::string, std::vector<ConnectionMatrix>> matrices;
  if (model.kind != "mlp") matrices = load_matrices(matrices_path);
  PCAModel pca;
  bool has_pca = model.kind != "cnn";
  if (has_pca) pca = pca_from_json(read_json(pca_path));

  struct Scored {
    Edge e;
    double score;
  };
  std::vector<Scored> scored;
  for (const Edge& e : edges) {
    const std::vector<ConnectionMatrix>* ms = nullptr;
    if (model.kind != "mlp") {
      auto it = matrices.find(e.id());
      if (it == matrices.end()) throw std::runtime_error("missing connection matrices for " + e.id());
      ms = &it->second;
    }
    scored.push_back({e, score_edge(model, has_pca ? &pca : nullptr, e, ms)});
  }

  if (top > 0) {
    std::map<std::string, std::vector<Scored>> by_source;
    for (auto& s : scored) by_source[s.e.f].push_back(s);
    scored.clear();
    for (auto& [src, group] : by_source) {
      std::stable_sort(group.begin(), group.end(), [](const Scored& a, const Scored& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.e.id() < b.e.id();
      });
      if (static_cast<size_t>(top) < group.size()) group.resize(static_cast<size_t>(top));
      for (auto& s : group) scored.push_back(std::move(s));
    }
  }

  std::vector<json> rows;
  for (const auto& s : scored)
    rows.push_back(json{{"edge", s.e.id()}, {"f", s.e.f}, {"g", s.e.g}, {"score", s.score}});
  ctx.ensure_data_dir();
  std::string out = out_override.empty() ? ctx.path("scores.jsonl") : out_override;
  write_jsonl(out, ctx.meta(), rows);
  std::cout << rows.size() << " scores -> " << out << "\n";
  return kExitOk;
}

int cmd_roc(const Ctx& ctx, const std::string& scores_path, const std::string& labels_path,
            const std::string& out_override) {
  std::map<std::string, EdgeLabel> labels = load_label_store(labels_path);
  std::vector<double> scores;
  std::vector<int> truth;
  for (const json& row : read_jsonl(scores_path)) {
    auto it = labels.find(row.at("edge").get<std::string>());
    if (it == labels.end()) continue;
    scores.push_back(row.at("score").get<double>());
    truth.push_back(it->second.success ? 1 : 0);
  }
  if (scores.empty()) throw std::runtime_error("no scored edges with labels");
  RocCurve curve = roc_curve(scores, truth);
  ctx.ensure_data_dir();
  std::string out = out_override.empty() ? ctx.path("metrics.csv") : out_override;
  std::ofstream f(out, std::ios::trunc);
  f << "# " << meta_json(ctx.meta()).dump() << "\n";
  f << "tau,TP,FP,FN,TN,TPR,TNR\n";
  for (const RocPoint& p : curve.points)
    f << p.tau << "," << p.c.tp << "," << p.c.fp << "," << p.c.fn << "," << p.c.tn << ","
      << p.c.tpr() << "," << p.c.tnr() << "\n";
  std::cout << "AUC " << curve.auc << " over " << scores.size() << " edges -> " << out << "\n";
  return kExitOk;
}

int cmd_search(const Ctx& ctx, const std::string& targets_path, const std::string& waypoints_path,
               const std::string& edges_path, double threshold, const std::string& scores_path,
               bool random_order, std::uint64_t seed, int jobs, const std::string& checkpoint_path,
               bool synthetic, std::uint64_t synthetic_seed, const std::string& synthetic_costs,
               const std::string& report_path) {
  SearchProblem p;
  p.targets = load_vertex_strings(targets_path);
  p.waypoints = load_vertex_strings(waypoints_path);
  p.budget_s = threshold;
  {
    std::unordered_set<std::string> w(p.waypoints.begin(), p.waypoints.end());
    size_t dropped = 0;
    for (Edge& e : load_edges(edges_path)) {
      if (w.count(e.f) && w.count(e.g))
        p.edges.push_back(std::move(e));
      else
        ++dropped;
    }
    if (dropped > 0)
      std::cout << "dropped " << dropped << " edges outside the waypoint set\n";
  }

  SyntheticOracle::Options sopt;
  sopt.seed = synthetic_seed;
  SyntheticOracle synth(sopt);
  if (!synthetic_costs.empty()) {
    json cost_table = read_json(synthetic_costs);
    for (const auto& [id, cost] : cost_table.items())
      synth.set_cost(id, cost.is_string() ? std::numeric_limits<double>::infinity()
                                          : cost.get<double>());
  }
  PicardFuchsOracle real;
  p.oracle = synthetic ? static_cast<EdgeOracle*>(&synth) : &real;

  std::map<std::string, double> score_map;
  if (!scores_path.empty()) {
    for (const json& row : read_jsonl(scores_path))
      score_map[row.at("edge").get<std::string>()] = row.at("score").get<double>();
    p.scorer = [&score_map](const Edge& e) {
      auto it = score_map.find(e.id());
      return it == score_map.end() ? 0.0 : it->second;
    };
  } else if (!random_order) {
    throw std::runtime_error("search needs --scored PATH or --random");
  }

  ctx.ensure_data_dir();
  std::string ckpt = checkpoint_path.empty() ? ctx.path("checkpoint.jsonl") : checkpoint_path;
  CheckpointLog log(ckpt);
  std::vector<AttemptRecord> resume = CheckpointLog::load(ckpt);

  InformedOptions opt;
  opt.base.workers = std::max(1, jobs);
  opt.base.log = &log;
  opt.base.resume_from = &resume;
  opt.shuffle_seed = seed;
  SearchResult res = informed_brute_force(p, opt);

  json report{{"connected", res.connected},
              {"budget_s", threshold},
              {"attempted", res.attempts.size()},
              {"resumed_attempts", resume.size()}};
  json attempts = json::array();
  for (const auto& rec : res.attempts)
    attempts.push_back(json{{"edge", rec.e.id()},
                            {"outcome", attempt_kind_name(rec.o.kind)},
                            {"elapsed_s", rec.o.elapsed_s}});
  report["attempts"] = std::move(attempts);
  json accepted = json::array();
  std::vector<Edge> all_accepted = res.accepted;
  for (const Edge& e : all_accepted) accepted.push_back(e.id());
  report["accepted"] = std::move(accepted);

  // frequency-of-successes table: per source vertex, how many attempted edges
  // succeeded (counting resumed work too)
  std::map<std::string, int> success_by_source;
  for (const auto& rec : resume)
    if (rec.o.kind == AttemptKind::Success) success_by_source[rec.e.f]++;
  for (const auto& rec : res.attempts)
    if (rec.o.kind == AttemptKind::Success) success_by_source[rec.e.f]++;
  std::map<int, int> histogram;
  for (const auto& [src, n] : success_by_source) histogram[n]++;
  json freq = json::object();
  for (const auto& [n, count] : histogram) freq[std::to_string(n)] = count;
  report["frequency_of_successes"] = std::move(freq);

  if (res.connected) {
    std::vector<Edge> tree = extract_tree(all_accepted, p.targets);
    json jt = json::array();
    for (const Edge& e : tree) jt.push_back(e.id());
    report["tree"] = std::move(jt);
    json paths = json::array();
    for (size_t i = 1; i < p.targets.size(); ++i)
      paths.push_back(extract_path(tree, p.targets[0], p.targets[i]));
    report["paths"] = std::move(paths);
  }

  // Attempt outcomes from the real oracle are fresh labels; park them in the
  // label store so the next training round can use them.
  if (!synthetic && !res.attempts.empty()) {
    std::string labels_out = ctx.path("labels.jsonl");
    if (!fs::exists(labels_out)) write_jsonl(labels_out, ctx.meta(), {});
    for (const auto& rec : res.attempts) {
      if (rec.o.kind == AttemptKind::Faulted || rec.o.kind == AttemptKind::Cancelled) continue;
      EdgeLabel lab;
      lab.edge = rec.e.id();
      lab.elapsed_s = rec.o.elapsed_s;
      lab.success = rec.o.kind == AttemptKind::Success;
      lab.order = rec.o.order;
      lab.degree = rec.o.degree;
      lab.failure = lab.success ? "" : attempt_kind_name(rec.o.kind);
      lab.host = host_tag();
      lab.timestamp_ms = rec.timestamp_ms;
      lab.budget_s = threshold;
      append_label(labels_out, lab);
    }
  }

  std::string out = report_path.empty() ? ctx.path("search_report.json") : report_path;
  write_json(out, ctx.meta(), std::move(report));
  std::cout << (res.connected ? "connected" : "FAIL") << "; " << res.attempts.size()
            << " attempts this run -> " << out << "\n";
  return res.connected ? kExitOk : kExitSearchFail;
}

int cmd_report(const Ctx& ctx, const std::string& labels_path, const std::string& scores_path,
               const std::string& out_override) {
  json body = json::object();
  if (!labels_path.empty() && fs::exists(labels_path)) {
    std::map<std::string, EdgeLabel> labels = load_label_store(labels_path);
    long successes = 0, timeouts = 0, singular = 0;
    double total_s = 0;
    for (const auto& [id, l] : labels) {
      total_s += l.elapsed_s;
      if (l.success)
        ++successes;
      else if (l.failure == "timeout")
        ++timeouts;
      else if (l.failure == "singular_family")
        ++singular;
    }
    body["labels"] = json{{"count", labels.size()},
                          {"successes", successes},
                          {"timeouts", timeouts},
                          {"singular_family", singular},
                          {"oracle_seconds", total_s}};
    if (!scores_path.empty() && fs::exists(scores_path)) {
      // frequency-of-successes for top-N prediction experiments: how many of
      // each source vertex's chosen edges carried a successful label
      std::map<std::string, int> per_source;
      for (const json& row : read_jsonl(scores_path)) {
        auto it = labels.find(row.at("edge").get<std::string>());
        if (it == labels.end()) continue;
        per_source[row.at("f").get<std::string>()] += it->second.success ? 1 : 0;
      }
      std::map<int, int> histogram;
      for (const auto& [src, n] : per_source) histogram[n]++;
      json freq = json::object();
      for (const auto& [n, count] : histogram) freq[std::to_string(n)] = count;
      body["frequency_of_successes"] = std::move(freq);
    }
  }
  ctx.ensure_data_dir();
  std::string out = out_override.empty() ? ctx.path("report.json") : out_override;
  write_json(out, ctx.meta(), std::move(body));
  std::cout << "report -> " << out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gauss-Manin pencil planner: exact first-order connection data, "
               "a budgeted first-ODE oracle, learned computability scores, and "
               "an informed graph search"};
  app.set_config("--config");
  app.require_subcommand(1);

  Ctx ctx;
  app.add_option("--data", ctx.data_dir, "data directory for stores")->capture_default_str();

  auto* enumerate = app.add_subcommand("enumerate", "enumerate the smooth k-nomial vertex set");
  int en_k = 4;
  int en_jobs = static_cast<int>(std::thread::hardware_concurrency());
  enumerate->add_option("--k", en_k, "term count")->required();
  enumerate->add_option("--jobs", en_jobs, "worker threads");

  auto* orbits = app.add_subcommand("orbits", "S4 orbit decomposition of a vertex store");
  int orb_k = 5;
  orbits->add_option("--k", orb_k, "vertex set to read")->required();

  auto* edges = app.add_subcommand("edges", "build an edge store under a policy");
  std::string ed_policy = "complete", ed_out;
  int ed_k = 4, ed_companion = 0;
  long ed_sample = 0, ed_vertex_sample = 0;
  std::uint64_t ed_seed = 0;
  bool ed_count_only = false, ed_orbit_reps = false;
  edges->add_option("--policy", ed_policy, "complete | monomial-difference")->capture_default_str();
  edges->add_option("--k", ed_k, "vertex set")->required();
  edges->add_option("--companion-k", ed_companion, "companion set for monomial-difference");
  edges->add_option("--sample", ed_sample, "keep a uniform edge sample of this size");
  edges->add_option("--sample-vertices", ed_vertex_sample, "uniform source-vertex sample size");
  edges->add_option("--seed", ed_seed, "sampling seed");
  edges->add_flag("--count-only", ed_count_only, "print the count, write nothing");
  edges->add_flag("--orbit-reps", ed_orbit_reps, "sources = orbit representatives");
  edges->add_option("--out", ed_out, "output path override");

  auto* gm = app.add_subcommand("gm", "first-order Gauss-Manin matrices at basepoints");
  std::string gm_edges, gm_basepoints = "0,1", gm_out;
  long gm_limit = 0;
  gm->add_option("--edges", gm_edges, "edge store");
  gm->add_option("--basepoints", gm_basepoints, "comma-separated rational t values")
      ->capture_default_str();
  gm->add_option("--limit", gm_limit, "stop after this many edges");
  gm->add_option("--out", gm_out, "output path override");

  auto* label = app.add_subcommand("label", "run the budgeted first-ODE oracle over an edge store");
  std::string lb_edges, lb_out;
  double lb_budget = 30.0;
  int lb_jobs = 0;
  long lb_limit = 0;
  bool lb_compact = false, lb_relabel = false;
  label->add_option("--edges", lb_edges, "edge store");
  label->add_option("--budget", lb_budget, "seconds per edge")->capture_default_str();
  label->add_option("--jobs", lb_jobs, "parallel labelers (0 = all cores)");
  label->add_option("--limit", lb_limit, "label at most this many new edges");
  label->add_flag("--compact", lb_compact, "rewrite the store keeping the newest label per edge");
  label->add_flag("--relabel", lb_relabel, "relabel edges that already have labels");
  label->add_option("--out", lb_out, "label store override");

  auto* pca = app.add_subcommand("pca", "fit the coefficient-vector PCA");
  std::string pc_edges, pc_out;
  int pc_components = 23;
  pca->add_option("--edges", pc_edges, "edge store (fit population)");
  pca->add_option("--components", pc_components, "retained components")->capture_default_str();
  pca->add_option("--out", pc_out, "output path override");

  auto* traincmd = app.add_subcommand("train", "train mlp, cnn, or the product ensemble");
  std::string tr_model = "ensemble", tr_labels, tr_matrices, tr_pca, tr_out,
              tr_widths = "500,500,500,100,100";
  double tr_alpha = 0.5, tr_gamma = 1e-3;
  std::uint64_t tr_seed = 0;
  int tr_epochs = 60, tr_batch = 32;
  bool tr_no_balance = false;
  traincmd->add_option("--model", tr_model, "mlp | cnn | ensemble")->capture_default_str();
  traincmd->add_option("--alpha", tr_alpha, "training fraction")->capture_default_str();
  traincmd->add_option("--seed", tr_seed, "split/init/sgd seed")->capture_default_str();
  traincmd->add_option("--labels", tr_labels, "label store");
  traincmd->add_option("--matrices", tr_matrices, "connection-matrix store");
  traincmd->add_option("--pca", tr_pca, "pca model path");
  traincmd->add_option("--gamma", tr_gamma, "SGD step size")->capture_default_str();
  traincmd->add_option("--epochs", tr_epochs, "training epochs")->capture_default_str();
  traincmd->add_option("--batch", tr_batch, "minibatch size")->capture_default_str();
  traincmd->add_option("--mlp-widths", tr_widths, "hidden widths")->capture_default_str();
  traincmd->add_flag("--no-balance", tr_no_balance, "skip minority oversampling");
  traincmd->add_option("--out", tr_out, "model path override");

  auto* predict = app.add_subcommand("predict", "score edges with a trained model");
  std::string pr_model, pr_edges, pr_matrices, pr_pca, pr_out;
  long pr_top = 0;
  predict->add_option("--model", pr_model, "model file")->required();
  predict->add_option("--edges", pr_edges, "edge store");
  predict->add_option("--matrices", pr_matrices, "connection-matrix store");
  predict->add_option("--pca", pr_pca, "pca model path");
  predict->add_option("--top", pr_top, "keep top-N per source vertex");
  predict->add_option("--out", pr_out, "score store override");

  auto* roc = app.add_subcommand("roc", "confusion counts and AUC against labels");
  std::string rc_scores, rc_labels, rc_out;
  roc->add_option("--scores", rc_scores, "score store");
  roc->add_option("--labels", rc_labels, "label store");
  roc->add_option("--out", rc_out, "metrics CSV override");

  auto* search = app.add_subcommand("search", "informed brute force over an edge store");
  std::string se_targets, se_waypoints, se_edges, se_scores, se_ckpt, se_report;
  double se_threshold = 30.0;
  bool se_random = false, se_synthetic = false;
  std::uint64_t se_seed = 0, se_synth_seed = 0;
  int se_jobs = 1;
  search->add_option("--targets", se_targets, "target vertex store")->required();
  search->add_option("--waypoints", se_waypoints, "waypoint vertex store")->required();
  search->add_option("--edges", se_edges, "edge store");
  search->add_option("--threshold", se_threshold, "per-edge budget seconds")->capture_default_str();
  search->add_option("--scored", se_scores, "score store for the informed queue");
  search->add_flag("--random", se_random, "randomized queue instead of scores");
  search->add_option("--seed", se_seed, "shuffle seed");
  search->add_option("--jobs", se_jobs, "worker pool size")->capture_default_str();
  search->add_option("--checkpoint", se_ckpt, "checkpoint path (resumes if present)");
  search->add_flag("--synthetic", se_synthetic, "use the deterministic synthetic oracle");
  search->add_option("--synthetic-seed", se_synth_seed, "synthetic oracle seed");
  std::string se_synth_costs;
  search->add_option("--synthetic-costs", se_synth_costs,
                     "JSON edge-id -> cost table for the synthetic oracle");
  search->add_option("--report", se_report, "report path override");

  auto* report = app.add_subcommand("report", "summarize label/score stores");
  std::string rp_labels, rp_scores, rp_out;
  report->add_option("--labels", rp_labels, "label store");
  report->add_option("--scores", rp_scores, "score store (top-N selection)");
  report->add_option("--out", rp_out, "report path override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  std::string cmdline;
  for (int i = 0; i < argc; ++i) cmdline += std::string(i ? " " : "") + argv[i];
  ctx.command_line = cmdline;
  ctx.config_hash = fnv1a_hex(app.config_to_str(true, false));

  auto defaulted = [&](const std::string& given, const std::string& fallback) {
    return given.empty() ? ctx.path(fallback) : given;
  };

  try {
    if (*enumerate) return cmd_enumerate(ctx, en_k, en_jobs);
    if (*orbits) return cmd_orbits(ctx, orb_k);
    if (*edges) {
      int companion = ed_companion == 0 ? ed_k + 1 : ed_companion;
      return cmd_edges(ctx, ed_policy, ed_k, companion, ed_sample, ed_seed, ed_count_only, ed_out,
                       ed_orbit_reps, ed_vertex_sample);
    }
    if (*gm)
      return cmd_gm(ctx, defaulted(gm_edges, "edges.jsonl"), gm_basepoints, gm_out, gm_limit);
    if (*label)
      return cmd_label(ctx, defaulted(lb_edges, "edges.jsonl"), lb_budget, lb_jobs, lb_out,
                       lb_limit, lb_compact, lb_relabel);
    if (*pca) return cmd_pca(ctx, defaulted(pc_edges, "edges.jsonl"), pc_components, pc_out);
    if (*traincmd) {
      TrainPaths paths{defaulted(tr_labels, "labels.jsonl"),
                       defaulted(tr_matrices, "matrices.jsonl"), defaulted(tr_pca, "pca.json"),
                       tr_out};
      TrainConfig cfg;
      cfg.gamma = tr_gamma;
      cfg.batch = tr_batch;
      cfg.epochs = tr_epochs;
      return cmd_train(ctx, tr_model, tr_alpha, tr_seed, paths, cfg, parse_widths(tr_widths),
                       !tr_no_balance);
    }
    if (*predict)
      return cmd_predict(ctx, pr_model, defaulted(pr_edges, "edges.jsonl"),
                         defaulted(pr_matrices, "matrices.jsonl"), defaulted(pr_pca, "pca.json"),
                         pr_out, pr_top);
    if (*roc)
      return cmd_roc(ctx, defaulted(rc_scores, "scores.jsonl"),
                     defaulted(rc_labels, "labels.jsonl"), rc_out);
    if (*search)
      return cmd_search(ctx, se_targets, se_waypoints, defaulted(se_edges, "edges.jsonl"),
                        se_threshold, se_scores, se_random, se_seed, se_jobs, se_ckpt, se_synthetic,
                        se_synth_seed, se_synth_costs, se_report);
    if (*report) return cmd_report(ctx, defaulted(rp_labels, "labels.jsonl"), rp_scores, rp_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
