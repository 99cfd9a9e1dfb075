#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "stclone/detector.hpp"

namespace stclone {

/// One row of the duplication summary table.
struct DetectionReport {
    LanguageId language_id = LanguageId::CPP;
    std::string option_label;
    std::size_t files_with_clones = 0;
    std::size_t duplicated_lines = 0;  // distinct significant positions covered by any block
    std::size_t duplicated_blocks = 0;
    std::size_t total_files = 0;
    std::size_t total_significant_lines = 0;

    bool operator==(const DetectionReport&) const = default;
};

DetectionReport compute_metrics(std::span<const CloneClass> classes,
                                std::span<const CorpusFile> corpus);

struct ScatterRow {
    std::string path_a;
    std::string path_b;
    std::size_t shared_block_count = 0;

    bool operator==(const ScatterRow&) const = default;
};

/// Block pairs of the same class across two files, one row per unordered file pair.
std::vector<ScatterRow> scatter_data(std::span<const CloneClass> classes,
                                     std::span<const CorpusFile> corpus);

struct TreemapRow {
    std::string directory;
    std::size_t total_sig_lines = 0;
    std::size_t duplicated_lines = 0;
    double duplication_ratio = 0.0;

    bool operator==(const TreemapRow&) const = default;
};

/// Subtree totals for every directory holding a corpus file, sorted by path.
/// Files without a parent directory are aggregated under ".".
std::vector<TreemapRow> treemap_data(std::span<const CloneClass> classes,
                                     std::span<const CorpusFile> corpus);

}  // namespace stclone
