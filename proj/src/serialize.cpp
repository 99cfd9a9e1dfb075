#include "stclone/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <unordered_map>

#include "stclone/errors.hpp"

namespace stclone {

namespace {

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

Json number_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

}  // namespace

std::string format_number(double value, int precision) {
    if (!std::isfinite(value)) return value > 0 ? "inf" : (value < 0 ? "-inf" : "nan");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, value);
    return buf;
}

Json clones_to_json(std::span<const CloneClass> classes, std::span<const CorpusFile> corpus,
                    const DetectionConfig& config, std::span<const LanguageId> languages) {
    std::unordered_map<int, const std::string*> paths;
    for (const auto& f : corpus) paths[f.file_id] = &f.path;

    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["option"] = option_label(config.options);
    doc["config"] = {
        {"min_lines", config.min_lines},
        {"allow_overlap", config.allow_overlap},
        {"ignore_punct_lines", config.ignore_punct_lines},
    };
    Json langs = Json::array();
    for (const auto l : languages) langs.push_back(language_name(l));
    doc["languages"] = std::move(langs);

    Json out = Json::array();
    for (const auto& cls : classes) {
        Json blocks = Json::array();
        for (const auto& b : cls.blocks) {
            blocks.push_back({
                {"path", *paths.at(b.file_id)},
                {"start_line", b.start_line},
                {"end_line", b.end_line},
                {"sig_count", b.sig_count},
            });
        }
        out.push_back({
            {"class_id", cls.class_id},
            {"language", language_name(cls.language_id)},
            {"sig_count", cls.sig_count()},
            {"sequence_key", hex64(cls.sequence_key)},
            {"blocks", std::move(blocks)},
        });
    }
    doc["classes"] = std::move(out);
    return doc;
}

Json report_to_json(const DetectionReport& r) {
    return {
        {"language", language_name(r.language_id)},
        {"option", r.option_label},
        {"files_with_clones", r.files_with_clones},
        {"duplicated_lines", r.duplicated_lines},
        {"duplicated_blocks", r.duplicated_blocks},
        {"total_files", r.total_files},
        {"total_significant_lines", r.total_significant_lines},
    };
}

Json reports_to_json(std::span<const DetectionReport> reports) {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    Json rows = Json::array();
    for (const auto& r : reports) rows.push_back(report_to_json(r));
    doc["reports"] = std::move(rows);
    return doc;
}

std::vector<StudyCell> cells_from_clones_json(const Json& doc) {
    if (!doc.contains("schema_version") || doc["schema_version"] != kSchemaVersion)
        throw Error("clones.json: unsupported or missing schema_version");
    const auto options = parse_option_label(doc.at("option").get<std::string>());
    if (!options) throw Error("clones.json: unknown option '" + doc.at("option").get<std::string>() + "'");

    std::map<LanguageId, StudyCell> cells;
    for (const auto& name : doc.at("languages")) {
        const auto lang = parse_language(name.get<std::string>());
        if (!lang) throw Error("clones.json: unknown language '" + name.get<std::string>() + "'");
        auto& cell = cells[*lang];
        cell.language = *lang;
        cell.options = *options;
    }

    std::map<LanguageId, std::set<std::string>> paths;
    for (const auto& cls : doc.at("classes")) {
        const auto lang = parse_language(cls.at("language").get<std::string>());
        if (!lang || !cells.contains(*lang)) throw Error("clones.json: class with unlisted language");
        for (const auto& b : cls.at("blocks")) paths[*lang].insert(b.at("path").get<std::string>());
    }
    for (auto& [lang, cell] : cells) {
        int id = 0;
        for (const auto& p : paths[lang]) {
            CorpusFile f;
            f.file_id = id++;
            f.path = p;
            f.language_id = lang;
            cell.corpus.push_back(std::move(f));
        }
    }
    for (const auto& cls : doc.at("classes")) {
        const auto lang = *parse_language(cls.at("language").get<std::string>());
        auto& cell = cells[lang];
        CloneClass c;
        c.class_id = cls.at("class_id").get<int>();
        c.language_id = lang;
        for (const auto& b : cls.at("blocks")) {
            const auto path = b.at("path").get<std::string>();
            const auto it = std::lower_bound(cell.corpus.begin(), cell.corpus.end(), path,
                                             [](const CorpusFile& f, const std::string& p) { return f.path < p; });
            Block block;
            block.file_id = it->file_id;
            block.start_line = b.at("start_line").get<std::uint32_t>();
            block.end_line = b.at("end_line").get<std::uint32_t>();
            block.sig_count = b.at("sig_count").get<std::size_t>();
            c.blocks.push_back(block);
        }
        cell.classes.push_back(std::move(c));
    }
    std::vector<StudyCell> out;
    for (auto& [lang, cell] : cells) out.push_back(std::move(cell));
    return out;
}

std::string clone_key(LanguageId language, std::string_view option, int class_id) {
    return std::string(language_name(language)) + ":" + std::string(option) + ":" + std::to_string(class_id);
}

Json plan_to_json(const StudyPlan& plan, std::uint64_t seed, std::span<const SelectionKind> strategies) {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["k"] = plan.group_size;
    doc["seed"] = seed;
    Json names = Json::array();
    for (const auto s : strategies) names.push_back(selection_name(s));
    doc["strategies"] = std::move(names);
    Json groups = Json::array();
    for (const auto& g : plan.groups) {
        Json keys = Json::array();
        for (const int id : g.clone_ids) keys.push_back(clone_key(g.language, g.option, id));
        groups.push_back({
            {"language", language_name(g.language)},
            {"option", g.option},
            {"strategy", selection_name(g.strategy)},
            {"clone_ids", g.clone_ids},
            {"clone_keys", std::move(keys)},
        });
    }
    doc["groups"] = std::move(groups);
    doc["total_entries"] = plan.total_entries();
    doc["warnings"] = plan.warnings;
    return doc;
}

Json icc_to_json(const IccResult& r) {
    return {
        {"type", "ICC3k"},
        {"icc", r.icc},
        {"ci_lower", r.ci_lower},
        {"ci_upper", r.ci_upper},
        {"f_value", number_or_null(r.f_value)},
        {"df1", r.df1},
        {"df2", r.df2},
        {"p_value", r.p_value},
    };
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_scatter_csv(std::ostream& out, std::span<const ScatterRow> rows) {
    out << "fileA,fileB,blocks\n";
    for (const auto& r : rows)
        out << csv_escape(r.path_a) << ',' << csv_escape(r.path_b) << ',' << r.shared_block_count << '\n';
}

void write_treemap_csv(std::ostream& out, std::span<const TreemapRow> rows) {
    out << "dir,total,dup,ratio\n";
    for (const auto& r : rows) {
        char ratio[32];
        std::snprintf(ratio, sizeof ratio, "%.6f", r.duplication_ratio);
        out << csv_escape(r.directory) << ',' << r.total_sig_lines << ',' << r.duplicated_lines << ','
            << ratio << '\n';
    }
}

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool any = false;
    char c = 0;
    auto end_row = [&] {
        if (any || !field.empty() || !row.empty()) {
            row.push_back(std::move(field));
            rows.push_back(std::move(row));
        }
        row.clear();
        field.clear();
        any = false;
    };
    while (in.get(c)) {
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\n') {
            end_row();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    end_row();
    return rows;
}

RatingSheet read_rating_sheet(std::istream& in) {
    const auto rows = read_csv(in);
    if (rows.empty()) throw CsvSchemaError("row 1: missing header clone_id,rater_id,variable,label");
    static const std::vector<std::string> header = {"clone_id", "rater_id", "variable", "label"};
    bool header_ok = rows.front().size() == header.size();
    for (std::size_t i = 0; header_ok && i < header.size(); ++i)
        header_ok = trim(rows.front()[i]) == header[i];
    if (!header_ok) throw CsvSchemaError("row 1: expected header clone_id,rater_id,variable,label");

    RatingSheet sheet;
    std::set<std::tuple<std::string, std::string, ResponseVariable>> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto row_no = std::to_string(r + 1);
        const auto& row = rows[r];
        if (row.size() == 1 && trim(row[0]).empty()) continue;
        if (row.size() != 4)
            throw CsvSchemaError("row " + row_no + ": expected 4 fields, got " + std::to_string(row.size()));
        const std::string clone(trim(row[0]));
        const std::string rater(trim(row[1]));
        if (clone.empty() || rater.empty()) throw CsvSchemaError("row " + row_no + ": empty clone_id or rater_id");
        const auto variable = parse_variable(row[2]);
        if (!variable) throw CsvSchemaError("row " + row_no + ": unknown variable '" + row[2] + "'");
        try {
            likert_value(row[3]);
        } catch (const UnknownLabel& e) {
            throw CsvSchemaError("row " + row_no + ": " + e.what());
        }
        if (!seen.emplace(clone, rater, *variable).second)
            throw CsvSchemaError("row " + row_no + ": duplicate rating for (" + clone + ", " + rater + ")");
        sheet.set_response(*variable, clone, rater, row[3]);
    }
    return sheet;
}

}  // namespace stclone
