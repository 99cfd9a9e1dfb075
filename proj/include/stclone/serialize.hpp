#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "stclone/detector.hpp"
#include "stclone/metrics.hpp"
#include "stclone/selection.hpp"
#include "stclone/studystats.hpp"

namespace stclone {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// clones.json: the clone classes of one option run, blocks as path + 1-based inclusive lines.
Json clones_to_json(std::span<const CloneClass> classes, std::span<const CorpusFile> corpus,
                    const DetectionConfig& config, std::span<const LanguageId> languages);

Json report_to_json(const DetectionReport& report);
Json reports_to_json(std::span<const DetectionReport> reports);

/// Cells recovered from a clones.json document, one per analyzed language.
std::vector<StudyCell> cells_from_clones_json(const Json& doc);

/// "<language>:<option>:<class_id>", the study-wide key of a sampled clone.
std::string clone_key(LanguageId language, std::string_view option, int class_id);

Json plan_to_json(const StudyPlan& plan, std::uint64_t seed, std::span<const SelectionKind> strategies);

Json icc_to_json(const IccResult& result);

void write_scatter_csv(std::ostream& out, std::span<const ScatterRow> rows);
void write_treemap_csv(std::ostream& out, std::span<const TreemapRow> rows);

/// Minimal RFC 4180 reader: quoted fields, doubled quotes, CRLF tolerant.
std::vector<std::vector<std::string>> read_csv(std::istream& in);
std::string csv_escape(std::string_view field);

/// Parses `clone_id,rater_id,variable,label`. Throws CsvSchemaError naming the 1-based row.
RatingSheet read_rating_sheet(std::istream& in);

/// printf-style "%.*g" formatting with a fixed precision.
std::string format_number(double value, int precision = 10);

}  // namespace stclone
