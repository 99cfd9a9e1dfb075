#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stclone/detector.hpp"

namespace stclone {

enum class SelectionKind {
    Random,
    Lines,            // ascending by significant lines spanned
    Blocks,           // ascending by block count
    LinesDescending,  // optional extra strategy, not part of the default set
};

std::string_view selection_name(SelectionKind kind);  // random, lines, blocks, lines-desc
std::optional<SelectionKind> parse_selection(std::string_view name);
/// {Random, Lines, Blocks}.
std::vector<SelectionKind> default_selection_kinds();

struct SelectionStrategy {
    SelectionKind kind = SelectionKind::Random;
    std::uint64_t seed = 0;
};

/**
 * Orders class ids for inspection. Lines and Blocks sort ascending by their
 * measure and break ties by (path, start_line) of the first block, then by
 * class id. Random starts from ascending class ids and applies a
 * Fisher-Yates shuffle driven by std::mt19937_64 with rejection-sampled
 * bounds, so a seed gives the same order on every platform.
 */
std::vector<int> rank(std::span<const CloneClass> classes, std::span<const CorpusFile> corpus,
                      SelectionStrategy strategy);

/// Detection results for one (language, option) cell.
struct StudyCell {
    LanguageId language = LanguageId::CPP;
    NormalizationOptions options;
    std::vector<CloneClass> classes;
    std::vector<CorpusFile> corpus;  // only file_id and path are consulted
};

struct StudyGroup {
    LanguageId language = LanguageId::CPP;
    std::string option;
    SelectionKind strategy = SelectionKind::Random;
    std::vector<int> clone_ids;
};

struct StudyPlan {
    std::size_t group_size = 0;
    std::vector<StudyGroup> groups;
    std::vector<std::string> warnings;  // one per group that came out empty

    std::size_t total_entries() const;
};

/**
 * Builds one group per (cell, strategy), taking the first `k` ranked ids not
 * already used by an earlier strategy of the same cell. Strategies are
 * served in the order given. Random strategies get a per-cell seed derived
 * from `seed`, the language and the option.
 */
StudyPlan sample_study_set(std::span<const StudyCell> cells,
                           std::span<const SelectionKind> strategies, std::size_t k,
                           std::uint64_t seed);

/// Stable per-cell seed used by sample_study_set.
std::uint64_t cell_seed(std::uint64_t seed, LanguageId language, const NormalizationOptions& options);

}  // namespace stclone
