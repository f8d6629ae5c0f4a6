#pragma once

#include <json.hpp>
#include <map>
#include <string>
#include <vector>

#include "pfpath/connection.hpp"
#include "pfpath/features.hpp"
#include "pfpath/nn.hpp"
#include "pfpath/picard_fuchs.hpp"

namespace pfpath {

inline constexpr const char* kVersion = "0.1.0";

/// Provenance stamped into every output file.
struct Meta {
  std::string command;
  std::string config_hash;
  std::string version = kVersion;
};

std::string fnv1a_hex(const std::string& s);

nlohmann::json meta_json(const Meta& m);
bool is_meta_row(const nlohmann::json& row);

/// JSON-Lines with a leading meta row.
void write_jsonl(const std::string& path, const Meta& meta,
                 const std::vector<nlohmann::json>& rows);
void append_jsonl(const std::string& path, const nlohmann::json& row);
/// Data rows only; parse failures report the line number.
std::vector<nlohmann::json> read_jsonl(const std::string& path);

void write_json(const std::string& path, const Meta& meta, nlohmann::json body);
nlohmann::json read_json(const std::string& path);

// ---- typed conversions ----

nlohmann::json rational_matrix_to_json(const RationalMatrix& m);
RationalMatrix rational_matrix_from_json(const nlohmann::json& j);

nlohmann::json connection_matrix_to_json(const ConnectionMatrix& m);
ConnectionMatrix connection_matrix_from_json(const nlohmann::json& j);

nlohmann::json label_to_json(const EdgeLabel& l);
EdgeLabel label_from_json(const nlohmann::json& j);

/// Newest label per edge: the store is append-only, re-labeling overwrites by
/// timestamp, never duplicates.
std::map<std::string, EdgeLabel> load_label_store(const std::string& path);
void append_label(const std::string& path, const EdgeLabel& l);
/// Rewrites the store keeping only the newest label per edge.
void compact_label_store(const std::string& path, const Meta& meta);

nlohmann::json pca_to_json(const PCAModel& m);
PCAModel pca_from_json(const nlohmann::json& j);

nlohmann::json network_to_json(const Network& n);
Network network_from_json(const nlohmann::json& j);

nlohmann::json feature_record_to_json(const FeatureRecord& r);
FeatureRecord feature_record_from_json(const nlohmann::json& j);

}  // namespace pfpath
