#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "support/oracles.hpp"
#include "tacdss/error.hpp"
#include "tacdss/model_io.hpp"

using namespace tacdss;
using namespace tacdss::io;

namespace {

FuzzySystem sample_system() {
  const LinguisticVariable a("fuel", 0.0, 1.0, {0.0, 0.5, 1.0}, {"low", "half", "full"});
  const LinguisticVariable b("time", 0.0, 1.0, {0.1, 0.9}, {"fast", "slow"});
  const LinguisticVariable y("score", 0.0, 1.0, {0.0, 0.5, 1.0});
  return FuzzySystem({a, b}, y, {{{0, 1}, 0, 0.25}, {{2, 0}, 2, 1.0}},
                     InferenceConfig::classic());
}

std::string error_of(const std::string& text) {
  try {
    model_from_string(text);
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("tacdss_io_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("format_number") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.096) == "0.096");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("model document layout") {
  const Json j = model_to_json(sample_system());
  CHECK(j["format_version"] == 1);
  CHECK(j["inputs"][0]["name"] == "fuel");
  CHECK(j["inputs"][1]["labels"] == Json::array({"fast", "slow"}));
  CHECK(j["output"]["domain"] == Json::array({0.0, 1.0}));
  CHECK(j["rules"][0]["antecedent"] == Json::array({0, 1}));
  CHECK(j["rules"][0]["weight"] == 0.25);
  CHECK(j["inference"]["tnorm"] == "min");
  CHECK(j["inference"]["defuzzifier"] == "centroid");
  CHECK(j["inference"]["centroid_resolution"] == 201);

  const std::string text = model_to_string(sample_system());
  CHECK(text.back() == '\n');
  CHECK(model_from_string(text) == sample_system());
}

TEST_CASE("property: save/load round-trips exactly and deterministically") {
  testing::Rng rng(61);
  TempDir tmp;
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = static_cast<std::size_t>(trial);
    const std::size_t mfs[] = {2 + t % 3, 3, 2 + t % 4};
    const auto cfg = trial % 2 ? InferenceConfig::classic() : InferenceConfig::trainable();
    const FuzzySystem s = testing::random_system(rng, mfs, 2 + t % 5, 5, cfg);
    const auto file = tmp.path / "m.json";
    save_model(s, file);
    const FuzzySystem back = load_model(file);
    CHECK(back == s);
    const std::string first = model_to_string(s);
    CHECK(model_to_string(back) == first);

    const double x[] = {0.3, 0.6, 0.9};
    CHECK(predict(back, x) == predict(s, x));
  }
}

TEST_CASE("load errors") {
  const std::string good = model_to_string(sample_system());

  SUBCASE("syntax error reports line and column") {
    const std::string msg = error_of("{\n  \"format_version\": 1,\n  oops\n}");
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("column") != std::string::npos);
    CHECK_THROWS_AS(model_from_string("{"), ParseError);
  }
  SUBCASE("unsupported version") {
    CHECK_THROWS_AS(model_from_string(replace(good, "\"format_version\": 1",
                                              "\"format_version\": 2")),
                    ValidationError);
  }
  SUBCASE("missing field names its path") {
    Json j = model_to_json(sample_system());
    j["inputs"][1].erase("centers");
    try {
      model_from_json(j);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("inputs[1]") != std::string::npos);
    }
  }
  SUBCASE("unsorted centers") {
    Json j = model_to_json(sample_system());
    j["inputs"][0]["centers"] = Json::array({0.0, 0.7, 0.5});
    CHECK_THROWS_AS(model_from_json(j), ValidationError);
  }
  SUBCASE("duplicate antecedent") {
    Json j = model_to_json(sample_system());
    j["rules"][1]["antecedent"] = Json::array({0, 1});
    try {
      model_from_json(j);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("duplicate antecedent") != std::string::npos);
    }
  }
  SUBCASE("unknown operator") {
    Json j = model_to_json(sample_system());
    j["inference"]["tnorm"] = "lukasiewicz";
    CHECK_THROWS_AS(model_from_json(j), ParseError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_model("/nonexistent/model.json"), IoError);
  }
}

TEST_CASE("dataset round-trip") {
  testing::Rng rng(62);
  const auto data = testing::random_samples(rng, 4, 200);
  std::stringstream ss;
  write_dataset(data, ss);
  std::string first_line;
  std::getline(std::stringstream(ss.str()), first_line);
  CHECK(first_line == kDatasetHeader);
  CHECK(read_dataset(ss) == data);

  std::stringstream empty;
  write_dataset(std::vector<TrainingSample>{}, empty);
  CHECK(read_dataset(empty).empty());
}

TEST_CASE("dataset errors cite the line") {
  auto message_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_dataset(in);
    } catch (const std::exception& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  const std::string header = "fuel,time,weapon,danger,score\n";

  const std::string arity = message_of(header + "0.1,0.2,0.3,0.4,0.5\n0.1,0.2,0.3\n");
  CHECK(arity.rfind("line 3", 0) == 0);

  const std::string text = message_of(header + "0.1,0.2,abc,0.4,0.5\n");
  CHECK(text.rfind("line 2, column 3", 0) == 0);

  const std::string range = message_of(header + "0.1,0.2,0.3,0.4,0.5\n\n0.1,0.2,0.3,1.4,0.5\n");
  CHECK(range.rfind("line 4, column 4", 0) == 0);

  CHECK(message_of("0.1,0.2,0.3,0.4,0.5\n").rfind("line 1", 0) == 0);
  CHECK(message_of("").rfind("line 1", 0) == 0);

  std::istringstream bad_range(header + "0.1,0.2,0.3,0.4,2\n");
  CHECK_THROWS_AS(read_dataset(bad_range), ValidationError);
  std::istringstream bad_text(header + "x,0.2,0.3,0.4,0.5\n");
  CHECK_THROWS_AS(read_dataset(bad_text), ParseError);
}

TEST_CASE("trace files") {
  auto lines_of = [](const std::vector<gradient::TraceRow>& rows) {
    std::ostringstream out;
    write_trace(rows, out);
    std::vector<std::string> lines;
    std::istringstream in(out.str());
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
  };

  std::vector<gradient::TraceRow> ten;
  for (int i = 1; i <= 10; ++i) ten.push_back({i, 0.5 / i});
  const auto l10 = lines_of(ten);
  REQUIRE(l10.size() == 11);
  CHECK(l10[0] == kTraceHeader);
  CHECK(l10[1] == "1,0.5");
  CHECK(l10[10] == "10,0.05");

  std::vector<gradient::TraceRow> fifty;
  for (int i = 1; i <= 50; ++i) fifty.push_back({i, 0.1});
  CHECK(lines_of(fifty).size() == 51);

  const auto header_only = lines_of({});
  REQUIRE(header_only.size() == 1);
  CHECK(header_only[0] == "step,rmse");
}
