#pragma once

#include <stdexcept>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stclone/lexnorm.hpp"

namespace stclone {

enum class OutputFormat { Json, Csv, Text };

struct RunConfig {
    std::vector<std::string> roots;
    std::vector<std::string> include;  // glob patterns over root-relative paths
    std::vector<std::string> exclude;
    std::map<std::string, LanguageId> language_map;  // lower-case extension with dot
    std::optional<LanguageId> language_default;      // for unmapped extensions
    std::vector<NormalizationOptions> options;
    std::size_t min_lines = 5;
    bool allow_overlap = true;
    bool ignore_punct_lines = false;
    std::uint64_t seed = 0;
    std::string output_dir = ".";
    OutputFormat format = OutputFormat::Text;
    bool strict = false;

    void validate() const;  // throws std::invalid_argument
};

/// .st .pou .exp .iec -> ST; .c .h .cpp .hpp .cc -> CPP.
std::map<std::string, LanguageId> default_language_map();

std::optional<LanguageId> language_for_path(const std::string& path,
                                            const std::map<std::string, LanguageId>& map,
                                            std::optional<LanguageId> fallback);

/// fnmatch-style match where '*' also crosses directory separators.
bool glob_match(const std::string& pattern, const std::string& path);

struct SourceFile {
    std::string path;  // generic form, as reachable from the working directory
    LanguageId language = LanguageId::CPP;
    std::string text;
};

struct CorpusScan {
    std::vector<SourceFile> files;  // sorted by path, unique
    std::vector<std::string> warnings;
    std::size_t unreadable = 0;
};

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Walks the roots; missing roots throw InputError, unreadable files are counted and warned.
CorpusScan scan_corpus(const RunConfig& config);

/// Worker count from STCLONE_THREADS, defaulting to the hardware concurrency.
unsigned thread_budget();

}  // namespace stclone
