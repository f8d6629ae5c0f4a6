#include "pfpath/stores.hpp"

#include <fstream>

namespace pfpath {

using nlohmann::json;

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json meta_json(const Meta& m) {
  return json{{"meta", {{"command", m.command}, {"config_hash", m.config_hash}, {"version", m.version}}}};
}

bool is_meta_row(const json& row) { return row.is_object() && row.contains("meta"); }

void write_jsonl(const std::string& path, const Meta& meta, const std::vector<json>& rows) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << meta_json(meta).dump() << "\n";
  for (const auto& r : rows) f << r.dump() << "\n";
}

void append_jsonl(const std::string& path, const json& row) {
  std::ofstream f(path, std::ios::app);
  if (!f) throw std::runtime_error("cannot open for appending: " + path);
  f << row.dump() << "\n";
}

std::vector<json> read_jsonl(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::vector<json> rows;
  std::string line;
  size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const std::exception& ex) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + ex.what());
    }
    if (!is_meta_row(j)) rows.push_back(std::move(j));
  }
  return rows;
}

void write_json(const std::string& path, const Meta& meta, json body) {
  body["meta"] = meta_json(meta)["meta"];
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << body.dump(2) << "\n";
}

json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path);
  json j;
  f >> j;
  return j;
}

json rational_matrix_to_json(const RationalMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j).to_string());
    rows.push_back(std::move(row));
  }
  return rows;
}

RationalMatrix rational_matrix_from_json(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows > 0 ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
  RationalMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = Rational::from_string(j.at(static_cast<size_t>(r)).at(static_cast<size_t>(c)).get<std::string>());
  return m;
}

json connection_matrix_to_json(const ConnectionMatrix& m) {
  return json{{"f", m.f_str},
              {"g", m.g_str},
              {"t0", m.t0.to_string()},
              {"entries", rational_matrix_to_json(m.entries)}};
}

ConnectionMatrix connection_matrix_from_json(const json& j) {
  ConnectionMatrix m;
  m.f_str = j.at("f").get<std::string>();
  m.g_str = j.at("g").get<std::string>();
  m.t0 = Rational::from_string(j.at("t0").get<std::string>());
  m.entries = rational_matrix_from_json(j.at("entries"));
  return m;
}

json label_to_json(const EdgeLabel& l) {
  json j{{"edge", l.edge},      {"elapsed_s", l.elapsed_s}, {"success", l.success},
         {"host", l.host},      {"timestamp", l.timestamp_ms}, {"budget_s", l.budget_s}};
  if (l.success) {
    j["order"] = l.order;
    j["degree"] = l.degree;
  } else {
    j["failure"] = l.failure;
  }
  return j;
}

std::map<std::string, EdgeLabel> load_label_store(const std::string& path) {
  std::map<std::string, EdgeLabel> out;
  for (const json& row : read_jsonl(path)) {
    EdgeLabel l = label_from_json(row);
    auto it = out.find(l.edge);
    if (it == out.end() || it->second.timestamp_ms < l.timestamp_ms) out[l.edge] = l;
  }
  return out;
}

void append_label(const std::string& path, const EdgeLabel& l) {
  append_jsonl(path, label_to_json(l));
}

void compact_label_store(const std::string& path, const Meta& meta) {
  std::map<std::string, EdgeLabel> latest = load_label_store(path);
  std::vector<json> rows;
  for (const auto& [id, lab] : latest) rows.push_back(label_to_json(lab));
  write_jsonl(path, meta, rows);
}

EdgeLabel label_from_json(const json& j) {
  EdgeLabel l;
  l.edge = j.at("edge").get<std::string>();
  l.elapsed_s = j.at("elapsed_s").get<double>();
  l.success = j.at("success").get<bool>();
  l.order = j.value("order", -1);
  l.degree = j.value("degree", -1);
  l.failure = j.value("failure", "");
  l.host = j.value("host", "");
  l.timestamp_ms = j.value("timestamp", std::int64_t(0));
  l.budget_s = j.value("budget_s", 30.0);
  return l;
}

namespace {

json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j.at(static_cast<size_t>(i)).get<double>();
  return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows > 0 ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = j.at(static_cast<size_t>(r)).at(static_cast<size_t>(c)).get<double>();
  return m;
}

std::string act_name(Act a) {
  switch (a) {
    case Act::None: return "none";
    case Act::ReLU: return "relu";
    case Act::Sigmoid: return "sigmoid";
  }
  return "none";
}

Act act_from(const std::string& s) {
  if (s == "relu") return Act::ReLU;
  if (s == "sigmoid") return Act::Sigmoid;
  return Act::None;
}

}  // namespace

json pca_to_json(const PCAModel& m) {
  return json{{"k", m.k},
              {"mean", vector_to_json(m.mean)},
              {"components", matrix_to_json(m.components)},
              {"singular_values", vector_to_json(m.singular_values)}};
}

PCAModel pca_from_json(const json& j) {
  PCAModel m;
  m.k = j.at("k").get<int>();
  m.mean = vector_from_json(j.at("mean"));
  m.components = matrix_from_json(j.at("components"));
  m.singular_values = vector_from_json(j.at("singular_values"));
  return m;
}

json network_to_json(const Network& n) {
  // architecture descriptors plus one flat row-major parameter array
  json arch = json::array();
  for (const Layer& l : n.layers) {
    if (const auto* d = std::get_if<DenseLayer>(&l)) {
      arch.push_back(json{{"type", "dense"},
                          {"act", act_name(d->act)},
                          {"out", d->w.rows()},
                          {"in", d->w.cols()}});
    } else if (const auto* c = std::get_if<ConvLayer>(&l)) {
      arch.push_back(json{{"type", "conv"},
                          {"act", act_name(c->act)},
                          {"in_ch", c->in_ch},
                          {"out_ch", c->out_ch},
                          {"ksize", c->ksize}});
    } else if (const auto* p = std::get_if<PoolLayer>(&l)) {
      arch.push_back(json{{"type", "pool"}, {"size", p->size}});
    } else {
      arch.push_back(json{{"type", "flatten"}});
    }
  }
  json params = json::array();
  for (double v : n.flat_parameters()) params.push_back(v);
  return json{{"arch", std::move(arch)}, {"parameters", std::move(params)}};
}

Network network_from_json(const json& j) {
  Network n;
  for (const auto& jl : j.at("arch")) {
    const std::string type = jl.at("type").get<std::string>();
    if (type == "dense") {
      DenseLayer d;
      d.act = act_from(jl.at("act").get<std::string>());
      d.w = Eigen::MatrixXd::Zero(jl.at("out").get<Eigen::Index>(), jl.at("in").get<Eigen::Index>());
      d.b = Eigen::VectorXd::Zero(jl.at("out").get<Eigen::Index>());
      n.layers.emplace_back(std::move(d));
    } else if (type == "conv") {
      ConvLayer c;
      c.act = act_from(jl.at("act").get<std::string>());
      c.in_ch = jl.at("in_ch").get<int>();
      c.out_ch = jl.at("out_ch").get<int>();
      c.ksize = jl.at("ksize").get<int>();
      for (int i = 0; i < c.in_ch * c.out_ch; ++i)
        c.k.push_back(Eigen::MatrixXd::Zero(c.ksize, c.ksize));
      c.b = Eigen::VectorXd::Zero(c.out_ch);
      n.layers.emplace_back(std::move(c));
    } else if (type == "pool") {
      n.layers.emplace_back(PoolLayer{jl.at("size").get<int>()});
    } else if (type == "flatten") {
      n.layers.emplace_back(FlattenLayer{});
    } else {
      throw std::runtime_error("unknown layer type: " + type);
    }
  }
  std::vector<double> params;
  params.reserve(j.at("parameters").size());
  for (const auto& v : j.at("parameters")) params.push_back(v.get<double>());
  n.set_flat_parameters(params);
  return n;
}

json feature_record_to_json(const FeatureRecord& r) {
  json channels = json::array();
  for (const auto& c : r.channels) channels.push_back(matrix_to_json(c));
  return json{{"edge", r.edge},
              {"vec70", vector_to_json(r.vec70)},
              {"pca", vector_to_json(r.pca)},
              {"channels", std::move(channels)},
              {"stats", {{"sum", r.stats.sum}, {"entropy", r.stats.entropy}, {"nonzero", r.stats.nonzero}}}};
}

FeatureRecord feature_record_from_json(const json& j) {
  FeatureRecord r;
  r.edge = j.at("edge").get<std::string>();
  r.vec70 = vector_from_json(j.at("vec70"));
  r.pca = vector_from_json(j.at("pca"));
  for (const auto& c : j.at("channels")) r.channels.push_back(matrix_from_json(c));
  r.stats.sum = j.at("stats").at("sum").get<double>();
  r.stats.entropy = j.at("stats").at("entropy").get<double>();
  r.stats.nonzero = j.at("stats").at("nonzero").get<long>();
  return r;
}

}  // namespace pfpath
