#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "pfpath/stores.hpp"

using namespace pfpath;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {
std::string tmp_file(const char* name) {
  return (fs::temp_directory_path() / name).string();
}
}  // namespace

TEST_CASE("jsonl stores carry a meta row with command, config hash and version") {
  std::string path = tmp_file("pfpath_store_meta.jsonl");
  Meta meta{"pfpath enumerate --k 4", fnv1a_hex("k=4"), kVersion};
  write_jsonl(path, meta, {json{{"poly", "x^4"}}});

  std::ifstream f(path);
  std::string first;
  std::getline(f, first);
  json j = json::parse(first);
  REQUIRE(is_meta_row(j));
  CHECK(j.at("meta").at("command") == "pfpath enumerate --k 4");
  CHECK(j.at("meta").at("version") == kVersion);
  CHECK(!j.at("meta").at("config_hash").get<std::string>().empty());

  // readers skip the meta row
  std::vector<json> rows = read_jsonl(path);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].at("poly") == "x^4");
  fs::remove(path);
}

TEST_CASE("read_jsonl reports the offending line on malformed input") {
  std::string path = tmp_file("pfpath_store_bad.jsonl");
  {
    std::ofstream f(path);
    f << "{\"ok\": 1}\n";
    f << "{broken\n";
  }
  CHECK_THROWS_WITH_AS(read_jsonl(path), doctest::Contains(":2:"), std::runtime_error);
  fs::remove(path);
}

TEST_CASE("label store keeps the newest label per edge; compaction deduplicates") {
  std::string path = tmp_file("pfpath_store_labels.jsonl");
  fs::remove(path);
  Meta meta{"test", "0", kVersion};
  write_jsonl(path, meta, {});

  EdgeLabel old_label;
  old_label.edge = "f ~ g";
  old_label.success = false;
  old_label.failure = "timeout";
  old_label.elapsed_s = 30.0;
  old_label.timestamp_ms = 1000;
  append_label(path, old_label);

  EdgeLabel newer = old_label;
  newer.success = true;
  newer.failure = "";
  newer.order = 3;
  newer.degree = 12;
  newer.elapsed_s = 4.0;
  newer.timestamp_ms = 2000;
  append_label(path, newer);

  EdgeLabel other;
  other.edge = "f ~ h";
  other.success = false;
  other.failure = "timeout";
  other.timestamp_ms = 1500;
  append_label(path, other);

  auto latest = load_label_store(path);
  REQUIRE(latest.size() == 2);
  CHECK(latest.at("f ~ g").success);
  CHECK(latest.at("f ~ g").timestamp_ms == 2000);

  // relabeling appended, never replaced in place: three data lines on disk
  CHECK(read_jsonl(path).size() == 3);
  compact_label_store(path, meta);
  CHECK(read_jsonl(path).size() == 2);
  auto after = load_label_store(path);
  CHECK(after.at("f ~ g").order == 3);
  fs::remove(path);
}

TEST_CASE("rational matrices serialize as num/den strings, bit exact") {
  RationalMatrix m(2, 2);
  m(0, 0) = Rational(22, 7);
  m(0, 1) = Rational(-1, 3);
  m(1, 0) = Rational(0);
  m(1, 1) = Rational(mpz_class("123456789123456789123456789"), mpz_class(2));
  json j = rational_matrix_to_json(m);
  CHECK(j[0][0] == "22/7");
  RationalMatrix back = rational_matrix_from_json(json::parse(j.dump()));
  CHECK(back == m);
}
