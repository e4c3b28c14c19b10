#include "tacdss/model_io.hpp"

#include <charconv>
#include <cstdint>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "tacdss/error.hpp"

namespace tacdss::io {

namespace {

Json variable_to_json(const LinguisticVariable& v) {
  Json j;
  j["name"] = v.name();
  j["domain"] = Json::array({v.domain_min(), v.domain_max()});
  j["centers"] = v.centers();
  j["labels"] = v.labels();
  return j;
}

const Json& field(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + ": missing field '" + key + "'");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path + ": expected a number");
  return j.get<double>();
}

std::size_t index(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) throw ParseError(path + ": expected a non-negative integer");
  return j.get<std::size_t>();
}

std::string text(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ParseError(path + ": expected a string");
  return j.get<std::string>();
}

const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + ": expected an array");
  return j;
}

LinguisticVariable variable_from_json(const Json& j, const std::string& path) {
  const std::string name = text(field(j, "name", path), path + ".name");
  const Json& dom = array(field(j, "domain", path), path + ".domain");
  if (dom.size() != 2) throw ParseError(path + ".domain: expected [min, max]");
  std::vector<double> centers;
  const Json& cs = array(field(j, "centers", path), path + ".centers");
  for (std::size_t i = 0; i < cs.size(); ++i) {
    centers.push_back(number(cs[i], path + ".centers[" + std::to_string(i) + "]"));
  }
  std::vector<std::string> labels;
  const Json& ls = array(field(j, "labels", path), path + ".labels");
  for (std::size_t i = 0; i < ls.size(); ++i) {
    labels.push_back(text(ls[i], path + ".labels[" + std::to_string(i) + "]"));
  }
  return LinguisticVariable(name, number(dom[0], path + ".domain[0]"),
                            number(dom[1], path + ".domain[1]"), std::move(centers),
                            std::move(labels));
}

template <typename E>
E parse_enum(const Json& j, const std::string& path, std::initializer_list<E> values) {
  const std::string s = text(j, path);
  for (E v : values) {
    if (to_string(v) == s) return v;
  }
  throw ParseError(path + ": unknown value '" + s + "'");
}

InferenceConfig config_from_json(const Json& j, const std::string& path) {
  InferenceConfig c;
  c.tnorm = parse_enum(field(j, "tnorm", path), path + ".tnorm",
                       {TNorm::min, TNorm::product});
  c.implication = parse_enum(field(j, "implication", path), path + ".implication",
                             {Implication::min, Implication::product});
  c.aggregation = parse_enum(field(j, "aggregation", path), path + ".aggregation",
                             {Aggregation::max, Aggregation::weighted_sum});
  c.defuzzifier = parse_enum(field(j, "defuzzifier", path), path + ".defuzzifier",
                             {Defuzzifier::centroid, Defuzzifier::center_average});
  const Json& res = field(j, "centroid_resolution", path);
  if (!res.is_number_integer()) {
    throw ParseError(path + ".centroid_resolution: expected an integer");
  }
  c.centroid_resolution = res.get<int>();
  c.weight_mode = parse_enum(field(j, "weight_mode", path), path + ".weight_mode",
                             {WeightMode::scale_firing, WeightMode::ignore});
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return c;
}

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool parse_double(std::string_view cell, double& out) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size() && !cell.empty();
}

}  // namespace

Json model_to_json(const FuzzySystem& system) {
  Json doc;
  doc["format_version"] = kModelFormatVersion;
  Json inputs = Json::array();
  for (const auto& v : system.inputs()) inputs.push_back(variable_to_json(v));
  doc["inputs"] = std::move(inputs);
  doc["output"] = variable_to_json(system.output());
  Json rules = Json::array();
  for (const FuzzyRule& r : system.rules()) {
    Json jr;
    jr["antecedent"] = r.antecedent;
    jr["consequent"] = r.consequent;
    jr["weight"] = r.weight;
    rules.push_back(std::move(jr));
  }
  doc["rules"] = std::move(rules);
  const InferenceConfig& c = system.config();
  Json inf;
  inf["tnorm"] = to_string(c.tnorm);
  inf["implication"] = to_string(c.implication);
  inf["aggregation"] = to_string(c.aggregation);
  inf["defuzzifier"] = to_string(c.defuzzifier);
  inf["centroid_resolution"] = c.centroid_resolution;
  inf["weight_mode"] = to_string(c.weight_mode);
  doc["inference"] = std::move(inf);
  return doc;
}

FuzzySystem model_from_json(const Json& doc) {
  const Json& version = field(doc, "format_version", "$");
  if (!version.is_number_integer()) throw ParseError("$.format_version: expected an integer");
  if (version.get<long long>() != kModelFormatVersion) {
    throw ValidationError("unsupported format_version " + version.dump() +
                          " (expected " + std::to_string(kModelFormatVersion) + ")");
  }
  std::vector<LinguisticVariable> inputs;
  const Json& ins = array(field(doc, "inputs", "$"), "$.inputs");
  for (std::size_t i = 0; i < ins.size(); ++i) {
    inputs.push_back(variable_from_json(ins[i], "$.inputs[" + std::to_string(i) + "]"));
  }
  LinguisticVariable output = variable_from_json(field(doc, "output", "$"), "$.output");

  std::vector<FuzzyRule> rules;
  const Json& rs = array(field(doc, "rules", "$"), "$.rules");
  for (std::size_t r = 0; r < rs.size(); ++r) {
    const std::string path = "$.rules[" + std::to_string(r) + "]";
    FuzzyRule rule;
    const Json& ante = array(field(rs[r], "antecedent", path), path + ".antecedent");
    for (std::size_t j = 0; j < ante.size(); ++j) {
      rule.antecedent.push_back(
          index(ante[j], path + ".antecedent[" + std::to_string(j) + "]"));
    }
    rule.consequent = index(field(rs[r], "consequent", path), path + ".consequent");
    rule.weight = number(field(rs[r], "weight", path), path + ".weight");
    rules.push_back(std::move(rule));
  }
  const InferenceConfig config = config_from_json(field(doc, "inference", "$"), "$.inference");
  return FuzzySystem(std::move(inputs), std::move(output), std::move(rules), config);
}

std::string model_to_string(const FuzzySystem& system) {
  return model_to_json(system).dump(2) + "\n";
}

FuzzySystem model_from_string(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("malformed model document at " + line_column(text, e.byte));
  }
  return model_from_json(doc);
}

void save_model(const FuzzySystem& system, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << model_to_string(system);
  finish(out, path);
}

FuzzySystem load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_string(buf.str());
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_dataset(std::span<const TrainingSample> data, std::ostream& out) {
  out << kDatasetHeader << '\n';
  for (const TrainingSample& s : data) {
    if (s.inputs.size() != 4) throw DataError("dataset rows need exactly 4 inputs");
    for (double v : s.inputs) out << format_number(v) << ',';
    out << format_number(s.target) << '\n';
  }
}

void write_dataset(std::span<const TrainingSample> data,
                   const std::filesystem::path& path) {
  auto out = open_out(path);
  write_dataset(data, out);
  finish(out, path);
}

std::vector<TrainingSample> read_dataset(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("line 1: header row required");
  {
    const auto header = split_commas(trim(line));
    double probe = 0.0;
    if (header.size() != 5) {
      throw ParseError("line 1: header must name 5 columns");
    }
    if (parse_double(header[0], probe)) throw ParseError("line 1: header row required");
  }

  std::vector<TrainingSample> data;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    const auto cells = split_commas(row);
    const std::string where = "line " + std::to_string(line_no);
    if (cells.size() != 5) {
      throw ParseError(where + ": expected 5 columns, found " + std::to_string(cells.size()));
    }
    double values[5];
    for (std::size_t c = 0; c < 5; ++c) {
      if (!parse_double(cells[c], values[c])) {
        throw ParseError(where + ", column " + std::to_string(c + 1) +
                         ": not a number: '" + std::string(cells[c]) + "'");
      }
      if (!(values[c] >= 0.0 && values[c] <= 1.0)) {
        throw ValidationError(where + ", column " + std::to_string(c + 1) +
                              ": value " + std::string(cells[c]) + " outside [0, 1]");
      }
    }
    data.push_back({{values[0], values[1], values[2], values[3]}, values[4]});
  }
  if (in.bad()) throw IoError("read failure after line " + std::to_string(line_no));
  return data;
}

std::vector<TrainingSample> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset '" + path.string() + "'");
  return read_dataset(in);
}

void write_trace(std::span<const gradient::TraceRow> rows, std::ostream& out) {
  out << kTraceHeader << '\n';
  for (const auto& r : rows) out << r.step << ',' << format_number(r.rmse) << '\n';
}

void write_trace(std::span<const gradient::TraceRow> rows,
                 const std::filesystem::path& path) {
  auto out = open_out(path);
  write_trace(rows, out);
  finish(out, path);
}

}  // namespace tacdss::io
