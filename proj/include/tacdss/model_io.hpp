#pragma once

// Model documents (JSON), datasets and training traces (CSV).
// The grammars are documented in docs/formats.md.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tacdss/fuzzy.hpp"
#include "tacdss/gradient_tuner.hpp"

namespace tacdss::io {

inline constexpr int kModelFormatVersion = 1;
inline constexpr std::string_view kDatasetHeader = "fuel,time,weapon,danger,score";
inline constexpr std::string_view kTraceHeader = "step,rmse";

using Json = nlohmann::ordered_json;

Json model_to_json(const FuzzySystem& system);
/// Throws ParseError for structural problems (with a JSON path) and
/// ValidationError when the described system violates an invariant.
FuzzySystem model_from_json(const Json& document);

/// Canonical text: two-space indented JSON with a trailing newline.
std::string model_to_string(const FuzzySystem& system);
/// As model_from_json; syntax errors report line and column.
FuzzySystem model_from_string(std::string_view text);

void save_model(const FuzzySystem& system, const std::filesystem::path& path);
FuzzySystem load_model(const std::filesystem::path& path);

void write_dataset(std::span<const TrainingSample> data, std::ostream& out);
void write_dataset(std::span<const TrainingSample> data,
                   const std::filesystem::path& path);
/// Errors cite the 1-based line number (the header is line 1).
std::vector<TrainingSample> read_dataset(std::istream& in);
std::vector<TrainingSample> read_dataset(const std::filesystem::path& path);

void write_trace(std::span<const gradient::TraceRow> rows, std::ostream& out);
void write_trace(std::span<const gradient::TraceRow> rows,
                 const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_number(double v);

}  // namespace tacdss::io
