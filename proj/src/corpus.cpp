#include "stclone/corpus.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace stclone {

namespace fs = std::filesystem;

void RunConfig::validate() const {
    if (roots.empty()) throw std::invalid_argument("at least one --root is required");
    if (min_lines < 1) throw std::invalid_argument("--min-lines must be at least 1");
    if (options.empty()) throw std::invalid_argument("--normalize selected no option");
}

std::map<std::string, LanguageId> default_language_map() {
    return {
        {".st", LanguageId::ST},   {".pou", LanguageId::ST},  {".exp", LanguageId::ST},
        {".iec", LanguageId::ST},  {".c", LanguageId::CPP},   {".h", LanguageId::CPP},
        {".cpp", LanguageId::CPP}, {".hpp", LanguageId::CPP}, {".cc", LanguageId::CPP},
    };
}

std::optional<LanguageId> language_for_path(const std::string& path,
                                            const std::map<std::string, LanguageId>& map,
                                            std::optional<LanguageId> fallback) {
    auto ext = fs::path(path).extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (const auto it = map.find(ext); it != map.end()) return it->second;
    return fallback;
}

bool glob_match(const std::string& pattern, const std::string& path) {
    return ::fnmatch(pattern.c_str(), path.c_str(), 0) == 0;
}

namespace {

bool selected(const RunConfig& config, const std::string& rel) {
    const auto name = fs::path(rel).filename().string();
    auto matches = [&](const std::string& p) { return glob_match(p, rel) || glob_match(p, name); };
    if (!config.include.empty() && std::none_of(config.include.begin(), config.include.end(), matches))
        return false;
    return std::none_of(config.exclude.begin(), config.exclude.end(), matches);
}

}  // namespace

CorpusScan scan_corpus(const RunConfig& config) {
    CorpusScan scan;
    std::set<std::string> seen;
    std::vector<SourceFile> candidates;

    auto consider = [&](const fs::path& file, const std::string& rel) {
        const auto path = file.lexically_normal().generic_string();
        if (!selected(config, rel)) return;
        const auto lang = language_for_path(path, config.language_map, config.language_default);
        if (!lang) return;
        if (!seen.insert(path).second) return;
        candidates.push_back({path, *lang, {}});
    };

    for (const auto& root : config.roots) {
        std::error_code ec;
        const fs::path root_path(root);
        if (fs::is_regular_file(root_path, ec)) {
            consider(root_path, root_path.filename().string());
            continue;
        }
        if (!fs::is_directory(root_path, ec)) throw InputError("cannot read root '" + root + "'");
        fs::recursive_directory_iterator it(root_path, fs::directory_options::skip_permission_denied, ec);
        if (ec) throw InputError("cannot read root '" + root + "': " + ec.message());
        for (const fs::recursive_directory_iterator end; it != end; it.increment(ec)) {
            if (ec) {
                scan.warnings.push_back("skipping unreadable entry under '" + root + "': " + ec.message());
                ++scan.unreadable;
                ec.clear();
                continue;
            }
            if (!it->is_regular_file(ec)) continue;
            consider(it->path(), fs::relative(it->path(), root_path, ec).generic_string());
        }
    }

    std::sort(candidates.begin(), candidates.end(),
              [](const SourceFile& a, const SourceFile& b) { return a.path < b.path; });
    for (auto& f : candidates) {
        std::ifstream in(f.path, std::ios::binary);
        if (!in) {
            scan.warnings.push_back("skipping unreadable file '" + f.path + "'");
            ++scan.unreadable;
            continue;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        if (in.bad()) {
            scan.warnings.push_back("skipping unreadable file '" + f.path + "'");
            ++scan.unreadable;
            continue;
        }
        f.text = std::move(buf).str();
        scan.files.push_back(std::move(f));
    }
    return scan;
}

unsigned thread_budget() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("STCLONE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
    }
    return n;
}

}  // namespace stclone
