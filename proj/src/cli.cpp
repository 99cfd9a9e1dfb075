#include "stclone/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "stclone/corpus.hpp"
#include "stclone/detector.hpp"
#include "stclone/errors.hpp"
#include "stclone/metrics.hpp"
#include "stclone/selection.hpp"
#include "stclone/serialize.hpp"
#include "stclone/studystats.hpp"

namespace stclone {

namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void write_file(const fs::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw OutputError("cannot write '" + path.generic_string() + "'");
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

OutputFormat parse_format(const std::string& name) {
    if (name == "json") return OutputFormat::Json;
    if (name == "csv") return OutputFormat::Csv;
    return OutputFormat::Text;
}

std::vector<NormalizationOptions> parse_options(const std::vector<std::string>& labels) {
    std::vector<NormalizationOptions> out;
    for (const auto& label : labels) {
        if (label == "all") {
            for (const auto& o : all_options()) out.push_back(o);
            continue;
        }
        const auto o = parse_option_label(label);
        if (!o) throw UsageError("--normalize: unknown option '" + label + "'");
        out.push_back(*o);
    }
    // Canonical order, no repeats.
    std::vector<NormalizationOptions> canonical;
    for (const auto& o : all_options()) {
        if (std::find(out.begin(), out.end(), o) != out.end()) canonical.push_back(o);
    }
    return canonical;
}

std::vector<SelectionKind> parse_strategies(const std::vector<std::string>& names) {
    std::vector<SelectionKind> out;
    for (const auto& n : names) {
        const auto kind = parse_selection(n);
        if (!kind) throw UsageError("--strategies: unknown strategy '" + n + "'");
        if (std::find(out.begin(), out.end(), *kind) == out.end()) out.push_back(*kind);
    }
    return out;
}

std::vector<LanguageId> parse_languages(const std::vector<std::string>& names, const char* flag) {
    std::vector<LanguageId> out;
    for (const auto& n : names) {
        const auto l = parse_language(n);
        if (!l) throw UsageError(std::string(flag) + ": unknown language '" + n + "'");
        if (std::find(out.begin(), out.end(), *l) == out.end()) out.push_back(*l);
    }
    return out;
}

void apply_language_map(RunConfig& config, const std::vector<std::string>& entries) {
    for (const auto& entry : entries) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--language-map: expected EXT=LANG, got '" + entry + "'");
        auto ext = entry.substr(0, eq);
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (ext.front() != '.') ext.insert(ext.begin(), '.');
        const auto lang = parse_language(entry.substr(eq + 1));
        if (!lang) throw UsageError("--language-map: unknown language in '" + entry + "'");
        config.language_map[ext] = *lang;
    }
}

std::vector<std::vector<std::vector<Token>>> tokenize_all(const std::vector<SourceFile>& files) {
    std::vector<std::vector<std::vector<Token>>> tokens(files.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (auto i = next++; i < files.size(); i = next++)
            tokens[i] = tokenize(files[i].text, profile_for(files[i].language));
    };
    const auto n = std::min<std::size_t>(thread_budget(), files.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return tokens;
}

void print_reports(std::ostream& out, const std::vector<DetectionReport>& reports, OutputFormat format) {
    if (format == OutputFormat::Json) {
        out << dump(reports_to_json(reports));
        return;
    }
    if (format == OutputFormat::Csv) {
        out << "language,option,files_with_clones,duplicated_lines,duplicated_blocks,total_files,"
               "total_significant_lines\n";
        for (const auto& r : reports) {
            out << language_name(r.language_id) << ',' << r.option_label << ',' << r.files_with_clones << ','
                << r.duplicated_lines << ',' << r.duplicated_blocks << ',' << r.total_files << ','
                << r.total_significant_lines << '\n';
        }
        return;
    }
    char line[256];
    std::snprintf(line, sizeof line, "%-8s %-20s %17s %16s %17s %11s %16s\n", "Language", "Option",
                  "Files with Clones", "Duplicated Lines", "Duplicated Blocks", "Total Files",
                  "Total Sig. Lines");
    out << line;
    for (const auto& r : reports) {
        std::snprintf(line, sizeof line, "%-8s %-20s %17zu %16zu %17zu %11zu %16zu\n",
                      std::string(language_name(r.language_id)).c_str(), r.option_label.c_str(),
                      r.files_with_clones, r.duplicated_lines, r.duplicated_blocks, r.total_files,
                      r.total_significant_lines);
        out << line;
    }
}

int run_detect(const RunConfig& config, std::ostream& out, std::ostream& err) {
    config.validate();
    const auto scan = scan_corpus(config);
    for (const auto& w : scan.warnings) err << "warning: " << w << '\n';
    if (scan.unreadable > 0 && config.strict) {
        err << "error: " << scan.unreadable << " unreadable input(s) with --strict\n";
        return kExitInput;
    }
    if (scan.files.empty()) {
        err << "error: no source files found under the given roots\n";
        return kExitInput;
    }

    const auto tokens = tokenize_all(scan.files);
    std::set<LanguageId> present;
    for (const auto& f : scan.files) present.insert(f.language);
    const std::vector<LanguageId> languages(present.begin(), present.end());

    std::vector<DetectionReport> all_reports;
    for (const auto& options : config.options) {
        DetectionConfig dc;
        dc.options = options;
        dc.min_lines = config.min_lines;
        dc.allow_overlap = config.allow_overlap;
        dc.ignore_punct_lines = config.ignore_punct_lines;

        std::vector<CorpusFile> corpus;
        for (std::size_t i = 0; i < scan.files.size(); ++i) {
            CorpusFile f;
            f.file_id = static_cast<int>(i);
            f.path = scan.files[i].path;
            f.language_id = scan.files[i].language;
            f.lines = significant_lines(tokens[i], profile_for(f.language_id), options, dc.ignore_punct_lines);
            f.total_significant = f.lines.size();
            corpus.push_back(std::move(f));
        }

        std::vector<CloneClass> classes;
        std::vector<std::string> warnings;
        try {
            classes = detect(corpus, dc, &warnings);
        } catch (const EmptyCorpus& e) {
            err << "error: " << e.what() << '\n';
            return kExitInput;
        }
        for (const auto& w : warnings) err << "warning: " << w << '\n';

        std::vector<DetectionReport> reports;
        for (const auto lang : languages) {
            std::vector<CorpusFile> part;
            std::vector<CloneClass> part_classes;
            for (const auto& f : corpus) {
                if (f.language_id == lang) part.push_back(f);
            }
            for (const auto& c : classes) {
                if (c.language_id == lang) part_classes.push_back(c);
            }
            auto report = compute_metrics(part_classes, part);
            report.language_id = lang;
            report.option_label = std::string(option_label(options));
            reports.push_back(report);
        }

        const fs::path dir = config.options.size() == 1
                                 ? fs::path(config.output_dir)
                                 : fs::path(config.output_dir) / std::string(option_label(options));
        write_file(dir / "clones.json", dump(clones_to_json(classes, corpus, dc, languages)));
        write_file(dir / "report.json", dump(reports_to_json(reports)));
        std::ostringstream scatter;
        write_scatter_csv(scatter, scatter_data(classes, corpus));
        write_file(dir / "scatter.csv", scatter.str());
        std::ostringstream treemap;
        write_treemap_csv(treemap, treemap_data(classes, corpus));
        write_file(dir / "treemap.csv", treemap.str());

        all_reports.insert(all_reports.end(), reports.begin(), reports.end());
    }
    print_reports(out, all_reports, config.format);
    return kExitOk;
}

std::vector<fs::path> find_detection_files(const std::vector<std::string>& inputs) {
    std::vector<fs::path> found;
    for (const auto& input : inputs) {
        std::error_code ec;
        const fs::path p(input);
        if (fs::is_regular_file(p, ec)) {
            found.push_back(p);
        } else if (fs::is_directory(p, ec)) {
            std::vector<fs::path> here;
            for (fs::recursive_directory_iterator it(p, ec), end; !ec && it != end; it.increment(ec)) {
                if (it->is_regular_file() && it->path().filename() == "clones.json") here.push_back(it->path());
            }
            std::sort(here.begin(), here.end());
            found.insert(found.end(), here.begin(), here.end());
        } else {
            throw InputError("cannot read detection input '" + input + "'");
        }
    }
    return found;
}

Json load_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read '" + path.generic_string() + "'");
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw InputError("invalid JSON in '" + path.generic_string() + "': " + e.what());
    }
}

struct SampleArgs {
    std::vector<std::string> detections;
    std::size_t k = 15;
    std::vector<std::string> strategies = {"random", "lines", "blocks"};
    std::uint64_t seed = 0;
    std::vector<std::string> languages;
    std::vector<std::string> options;
    std::string out_dir = ".";
    std::string format = "text";
};

int run_study_sample(const SampleArgs& args, std::ostream& out, std::ostream& err) {
    const auto strategies = parse_strategies(args.strategies);
    const auto want_languages = parse_languages(args.languages, "--languages");
    const auto want_options = args.options.empty() ? std::vector<NormalizationOptions>{} : parse_options(args.options);

    using CellKey = std::pair<LanguageId, std::string>;
    std::map<CellKey, StudyCell> cells;
    for (const auto& path : find_detection_files(args.detections)) {
        std::vector<StudyCell> loaded;
        try {
            loaded = cells_from_clones_json(load_json(path));
        } catch (const Error& e) {
            throw InputError(path.generic_string() + ": " + e.what());
        } catch (const Json::exception& e) {
            throw InputError(path.generic_string() + ": " + e.what());
        }
        for (auto& cell : loaded) {
            CellKey key{cell.language, std::string(option_label(cell.options))};
            if (cells.contains(key))
                throw InputError("duplicate detection for cell " + std::string(language_name(key.first)) + "/" +
                                 key.second + " in '" + path.generic_string() + "'");
            cells.emplace(std::move(key), std::move(cell));
        }
    }

    std::set<LanguageId> languages(want_languages.begin(), want_languages.end());
    std::vector<NormalizationOptions> options = want_options;
    if (languages.empty()) {
        for (const auto& [key, cell] : cells) languages.insert(key.first);
    }
    if (options.empty()) {
        for (const auto& o : all_options()) {
            for (const auto& [key, cell] : cells) {
                if (key.second == option_label(o)) {
                    options.push_back(o);
                    break;
                }
            }
        }
    }
    if (languages.empty() || options.empty()) throw MissingDetection("no detection results found");

    std::vector<StudyCell> grid;
    for (const auto lang : languages) {
        for (const auto& o : options) {
            const auto it = cells.find({lang, std::string(option_label(o))});
            if (it == cells.end())
                throw MissingDetection("missing detection for cell " + std::string(language_name(lang)) + "/" +
                                       std::string(option_label(o)));
            grid.push_back(it->second);
        }
    }

    const auto plan = sample_study_set(grid, strategies, args.k, args.seed);
    for (const auto& w : plan.warnings) err << "warning: " << w << '\n';
    const auto doc = plan_to_json(plan, args.seed, strategies);
    write_file(fs::path(args.out_dir) / "plan.json", dump(doc));
    if (args.format == "json") {
        out << dump(doc);
    } else {
        out << "groups: " << plan.groups.size() << ", entries: " << plan.total_entries() << '\n';
        for (const auto& g : plan.groups) {
            out << language_name(g.language) << ' ' << g.option << ' ' << selection_name(g.strategy) << ' '
                << g.clone_ids.size() << '\n';
        }
    }
    return kExitOk;
}

struct IccArgs {
    std::string ratings;
    std::string plan;
    double alpha = 0.05;
    std::string out_dir = ".";
    std::string format = "text";
};

int run_study_icc(const IccArgs& args, std::ostream& out, std::ostream& err) {
    std::ifstream in(args.ratings, std::ios::binary);
    if (!in) throw InputError("cannot read ratings '" + args.ratings + "'");
    const auto sheet = read_rating_sheet(in);
    if (sheet.subjects().empty()) throw CsvSchemaError("ratings contain no data rows");

    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["n"] = sheet.subjects().size();
    doc["k"] = sheet.raters().size();
    doc["alpha"] = args.alpha;
    Json results = Json::array();
    std::ostringstream icc_csv;
    icc_csv << "variable,type,icc,ci_lower,ci_upper,f_value,df1,df2,p_value\n";
    std::map<ResponseVariable, std::map<std::string, double>> means;
    for (const auto variable : sheet.variables()) {
        const auto matrix = sheet.matrix(variable);  // IncompleteSheet propagates
        const auto agg = aggregate_ratings(sheet, variable);
        for (std::size_t i = 0; i < agg.size(); ++i) means[variable][sheet.subjects()[i]] = agg[i];

        Json entry;
        entry["variable"] = variable_name(variable);
        try {
            const auto r = icc3k(matrix, args.alpha);
            const auto fields = icc_to_json(r);
            for (const auto& [key, value] : fields.items()) entry[key] = value;
            icc_csv << variable_name(variable) << ",ICC3k," << format_number(r.icc) << ','
                    << format_number(r.ci_lower) << ',' << format_number(r.ci_upper) << ','
                    << format_number(r.f_value) << ',' << r.df1 << ',' << r.df2 << ','
                    << format_number(r.p_value) << '\n';
        } catch (const DegenerateData& e) {
            entry["error"] = e.what();
            err << "warning: " << variable_name(variable) << ": " << e.what() << '\n';
        }
        results.push_back(std::move(entry));
    }
    doc["results"] = std::move(results);

    struct Group {
        std::string language, option, strategy;
        std::vector<std::string> members;
    };
    std::vector<Group> groups;
    if (!args.plan.empty()) {
        const auto plan = load_json(args.plan);
        try {
            for (const auto& g : plan.at("groups")) {
                groups.push_back({g.at("language").get<std::string>(), g.at("option").get<std::string>(),
                                  g.at("strategy").get<std::string>(),
                                  g.at("clone_keys").get<std::vector<std::string>>()});
            }
        } catch (const Json::exception& e) {
            throw InputError("invalid plan '" + args.plan + "': " + e.what());
        }
    } else {
        groups.push_back({"all", "all", "all", sheet.subjects()});
    }

    std::ostringstream summary_csv;
    summary_csv << "language,option,strategy,nature,n,min,q1,median,q3,max,mean\n";
    for (const auto& g : groups) {
        for (const auto& [variable, per_clone] : means) {
            std::vector<double> values;
            for (const auto& m : g.members) {
                if (const auto it = per_clone.find(m); it != per_clone.end()) values.push_back(it->second);
            }
            if (values.empty()) continue;
            const auto s = group_summary(values);
            summary_csv << csv_escape(g.language) << ',' << csv_escape(g.option) << ',' << csv_escape(g.strategy)
                        << ',' << variable_name(variable) << ',' << s.count << ',' << format_number(s.min) << ','
                        << format_number(s.q1) << ',' << format_number(s.median) << ',' << format_number(s.q3)
                        << ',' << format_number(s.max) << ',' << format_number(s.mean) << '\n';
        }
    }

    const fs::path dir(args.out_dir);
    write_file(dir / "icc.json", dump(doc));
    write_file(dir / "icc.csv", icc_csv.str());
    write_file(dir / "summary.csv", summary_csv.str());
    if (args.format == "json") {
        out << dump(doc);
    } else {
        out << icc_csv.str();
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Type 1 / Type 2 clone detection for Structured Text and C/C++", "stclone"};
    app.require_subcommand(1);

    RunConfig config;
    config.language_map = default_language_map();
    std::vector<std::string> normalize = {"none"};
    std::vector<std::string> language_map;
    std::string language_default;
    std::string format = "text";

    auto* detect_cmd = app.add_subcommand("detect", "Find clone classes and write duplication metrics");
    detect_cmd->add_option("--root", config.roots, "Directory (or file) to scan; repeatable")->required();
    detect_cmd->add_option("--include", config.include, "Glob over root-relative paths; repeatable");
    detect_cmd->add_option("--exclude", config.exclude, "Glob over root-relative paths; repeatable");
    detect_cmd->add_option("--normalize", normalize, "none, identifier, literal, identifier+literal or all")
        ->delimiter(',');
    detect_cmd->add_option("--min-lines", config.min_lines, "Minimum significant lines per clone")
        ->check(CLI::PositiveNumber);
    detect_cmd->add_flag("--allow-overlap,!--no-overlap", config.allow_overlap, "Allow overlapping blocks");
    detect_cmd->add_flag("--ignore-punct-lines", config.ignore_punct_lines,
                         "Exclude punctuation-only lines from significance");
    detect_cmd->add_option("--seed", config.seed, "Seed (recorded for reproducibility)");
    detect_cmd->add_option("--format", format, "Summary format on stdout")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    detect_cmd->add_option("--out", config.output_dir, "Output directory");
    detect_cmd->add_flag("--strict", config.strict, "Fail on unreadable files");
    detect_cmd->add_option("--language-map", language_map, "EXT=LANG override; repeatable");
    detect_cmd->add_option("--language-default", language_default, "Language for unmapped extensions (st|cpp)");

    auto* study_cmd = app.add_subcommand("study", "Clone inspection study support");
    study_cmd->require_subcommand(1);

    SampleArgs sample;
    auto* sample_cmd = study_cmd->add_subcommand("sample", "Sample clone groups for inspection");
    sample_cmd->add_option("--detections", sample.detections, "clones.json files or directories holding them")
        ->required();
    sample_cmd->add_option("--k", sample.k, "Clones per group")->check(CLI::PositiveNumber);
    sample_cmd->add_option("--strategies", sample.strategies, "random, lines, blocks, lines-desc")
        ->delimiter(',');
    sample_cmd->add_option("--seed", sample.seed, "Seed for the random strategy");
    sample_cmd->add_option("--languages", sample.languages, "Languages of the grid (default: all found)")
        ->delimiter(',');
    sample_cmd->add_option("--options", sample.options, "Options of the grid (default: all found)")
        ->delimiter(',');
    sample_cmd->add_option("--out", sample.out_dir, "Output directory for plan.json");
    sample_cmd->add_option("--format", sample.format)->check(CLI::IsMember({"json", "text"}));

    IccArgs icc;
    auto* icc_cmd = study_cmd->add_subcommand("icc", "Inter-rater reliability of clone ratings");
    icc_cmd->add_option("--ratings", icc.ratings, "CSV with clone_id,rater_id,variable,label")->required();
    icc_cmd->add_option("--plan", icc.plan, "plan.json for per-group summaries");
    icc_cmd->add_option("--alpha", icc.alpha, "Significance level of the confidence interval")
        ->check(CLI::Range(1e-6, 0.999999));
    icc_cmd->add_option("--out", icc.out_dir, "Output directory");
    icc_cmd->add_option("--format", icc.format)->check(CLI::IsMember({"json", "text"}));

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (detect_cmd->parsed()) {
            apply_language_map(config, language_map);
            if (!language_default.empty()) {
                config.language_default = parse_language(language_default);
                if (!config.language_default)
                    throw UsageError("--language-default: unknown language '" + language_default + "'");
            }
            config.options = parse_options(normalize);
            config.format = parse_format(format);
            try {
                config.validate();
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            return run_detect(config, out, err);
        }
        if (sample_cmd->parsed()) return run_study_sample(sample, out, err);
        if (icc_cmd->parsed()) return run_study_icc(icc, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const OutputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitUsage;
}

}  // namespace stclone
