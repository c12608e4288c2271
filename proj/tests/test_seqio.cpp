#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "skewlabs/oracle.hpp"
#include "skewlabs/seqio.hpp"
#include "support/test_oracles.hpp"

using namespace skewlabs;

namespace {
std::vector<std::int8_t> seq(std::initializer_list<int> xs) {
  std::vector<std::int8_t> v;
  for (int x : xs) v.push_back(static_cast<std::int8_t>(x));
  return v;
}

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}
}  // namespace

TEST_CASE("decode_hex hand cases") {
  CHECK(decode_hex("6", 3) == seq({1, 1, -1}));
  CHECK(decode_hex("5", 5) == seq({-1, -1, 1, -1, 1}));
  CHECK(decode_hex("0", 3) == seq({-1, -1, -1}));
  CHECK(decode_hex(" 6\n", 3) == seq({1, 1, -1}));  // whitespace stripped
  CHECK(decode_hex("06", 3) == seq({1, 1, -1}));    // leading zero digit ok
}

TEST_CASE("decode_hex rejects bad input") {
  CHECK_THROWS_AS(decode_hex("6g", 8), std::invalid_argument);
  CHECK_THROWS_AS(decode_hex("", 3), std::invalid_argument);
  CHECK_THROWS_AS(decode_hex("f", 3), std::invalid_argument);  // needs 4 bits
  CHECK_THROWS_AS(decode_hex("100", 8), std::invalid_argument);
  CHECK_THROWS_AS(decode_hex("6", 0), std::invalid_argument);
}

TEST_CASE("encode_hex hand cases") {
  CHECK(encode_hex(seq({1, 1, -1})) == "6");
  CHECK(encode_hex(seq({-1, -1, -1})) == "0");
  CHECK(encode_hex(seq({-1, -1, 1, -1, 1})) == "5");
  CHECK_THROWS_AS(encode_hex(seq({})), std::invalid_argument);
  CHECK_THROWS_AS(encode_hex(seq({1, 2, 1})), std::invalid_argument);
}

TEST_CASE("hex codec round-trips") {
  std::mt19937_64 rng(404);
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = 3 + static_cast<int>(rng() % 447);  // 3..449, any parity
    std::vector<std::int8_t> s(static_cast<std::size_t>(n));
    for (auto& v : s) v = static_cast<std::int8_t>((rng() & 1) ? 1 : -1);
    CHECK(decode_hex(encode_hex(s), n) == s);
  }
  // canonical strings survive encode(decode(.))
  for (const char* h : {"6", "5", "1f35", "712", "0", "deadbeef"}) {
    const int bits = static_cast<int>(std::string(h).size()) * 4;
    CHECK(encode_hex(decode_hex(h, bits + 3)) == h);
  }
}

TEST_CASE("the published payload re-encodes to the printed string") {
  const auto s = decode_hex(kRecord449Hex, 449);
  CHECK(encode_hex(s) == kRecord449Hex);
  const auto b13 = decode_hex("1f35", 13);
  CHECK(report(sidelobes_naive(b13)).energy == 6);
}

TEST_CASE("run records round-trip through the log") {
  ShcConfig cfg;
  cfg.seed = 31;
  cfg.step_threshold = 64;
  const auto rec = shc_search(21, cfg);

  const auto path = temp_file("skewlabs_roundtrip.jsonl");
  std::filesystem::remove(path);
  append_run_record(path, rec);
  append_run_record(path, rec);

  const auto page = read_run_records(path);
  CHECK(page.errors.empty());
  REQUIRE(page.records.size() == 2);
  CHECK(page.records[0] == rec);
  CHECK(page.records[1] == rec);
  std::filesystem::remove(path);
}

TEST_CASE("run records round-trip for saw configs too") {
  SawConfig cfg;
  cfg.seed = 8;
  cfg.inner_threshold = 16;
  cfg.outer_threshold = 2;
  cfg.target_mf = 3.0;
  const auto rec = saw_search(9, cfg);

  std::stringstream ss;
  write_run_record(ss, rec);
  const auto path = temp_file("skewlabs_saw_roundtrip.jsonl");
  {
    std::ofstream os(path);
    os << ss.str();
  }
  const auto page = read_run_records(path);
  REQUIRE(page.records.size() == 1);
  CHECK(page.errors.empty());
  CHECK(page.records[0] == rec);
  std::filesystem::remove(path);
}

TEST_CASE("reading an empty log yields nothing") {
  const auto path = temp_file("skewlabs_empty.jsonl");
  {
    std::ofstream os(path);
  }
  const auto page = read_run_records(path);
  CHECK(page.records.empty());
  CHECK(page.errors.empty());
  std::filesystem::remove(path);
}

TEST_CASE("malformed and mis-versioned lines are reported per line") {
  ShcConfig cfg;
  cfg.seed = 1;
  cfg.step_threshold = 16;
  const auto rec = shc_search(5, cfg);
  std::stringstream good;
  write_run_record(good, rec);

  const auto path = temp_file("skewlabs_bad.jsonl");
  {
    std::ofstream os(path);
    os << good.str();
    os << "{\"schema\":\"skewlabs.run/99\",\"n\":5}\n";
    os << "not json at all\n";
    os << good.str();
    os << "{\"schema\":\"skewlabs.run/1\",\"n\":5";  // truncated final line
  }
  const auto page = read_run_records(path);
  CHECK(page.records.size() == 2);
  REQUIRE(page.errors.size() == 3);
  CHECK(page.errors[0].line == 2);
  CHECK(page.errors[0].message.find("skewlabs.run/99") != std::string::npos);
  CHECK(page.errors[1].line == 3);
  CHECK(page.errors[2].line == 5);
  std::filesystem::remove(path);
}

TEST_CASE("schedule csv export") {
  std::stringstream ss;
  const int ns[] = {999, 10001};
  export_schedule_csv(ss, ns);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "n,quake,est_seconds");
  std::getline(ss, line);
  CHECK(line == "999,1,123.47");
  std::getline(ss, line);
  CHECK(line.rfind("10001,15,", 0) == 0);
  CHECK_FALSE(std::getline(ss, line));  // exactly two data rows

  std::stringstream big;
  const int ns2[] = {100001};
  export_schedule_csv(big, ns2);
  std::getline(big, line);
  std::getline(big, line);
  const auto comma = line.rfind(',');
  const double t = std::stod(line.substr(comma + 1));
  CHECK(t == Catch::Approx(17958.0).margin(1.0));

  CHECK_THROWS_AS(export_schedule_csv("/nonexistent-dir/x.csv",
                                      std::span<const int>(ns)),
                  std::runtime_error);
}
