#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stclone/lexnorm.hpp"

namespace stclone {

struct DetectionConfig {
    NormalizationOptions options;
    std::size_t min_lines = 5;
    bool allow_overlap = true;
    bool ignore_punct_lines = false;
    // Per-fingerprint seed cap. Unset means automatic: no cap below
    // kAutoSeedCapThreshold total significant lines, kDefaultSeedCap above it.
    std::optional<std::size_t> seed_cap;

    static constexpr std::size_t kAutoSeedCapThreshold = 1'000'000;
    static constexpr std::size_t kDefaultSeedCap = 1'000;

    void validate() const;  // throws std::invalid_argument
};

struct CorpusFile {
    int file_id = 0;
    std::string path;
    LanguageId language_id = LanguageId::CPP;
    std::vector<SignificantLine> lines;
    std::size_t total_significant = 0;
};

/// Lexes `text` under the config's options and punct-line policy.
CorpusFile make_corpus_file(int file_id, std::string path, LanguageId language,
                            std::string_view text, const DetectionConfig& config);

struct Block {
    int file_id = 0;
    std::uint32_t start_line = 1;  // original, 1-based, inclusive
    std::uint32_t end_line = 1;
    std::size_t sig_count = 0;
    std::size_t first_index = 0;  // index of the first covered line in CorpusFile::lines

    auto operator<=>(const Block&) const = default;
};

struct ClonePair {
    Block a;
    Block b;
};

struct CloneClass {
    int class_id = 0;
    std::uint64_t sequence_key = 0;
    LanguageId language_id = LanguageId::CPP;
    std::vector<Block> blocks;

    std::size_t sig_count() const { return blocks.empty() ? 0 : blocks.front().sig_count; }
};

/// Every unordered pair of blocks in the class, ordered per ClonePair's invariant.
std::vector<ClonePair> clone_pairs(const CloneClass& clone_class);

struct MaximalRun {
    std::size_t offset_a = 0;
    std::size_t offset_b = 0;
    std::size_t length = 0;

    auto operator<=>(const MaximalRun&) const = default;
};

/**
 * Maximal runs of equal consecutive lines between `a` and `b` with length at
 * least `min_lines`. Equality is decided on normalized text. With
 * `same_sequence`, `a` and `b` must be the same sequence and only runs with
 * offset_a < offset_b are reported. Output is sorted.
 */
std::vector<MaximalRun> find_maximal_runs(std::span<const SignificantLine> a,
                                          std::span<const SignificantLine> b,
                                          std::size_t min_lines, bool same_sequence);

/**
 * Finds clone classes across and within files of the same language.
 *
 * Classes are ordered by descending sig_count, then path and start line of
 * their first block, and numbered from 1 in that order. Throws EmptyCorpus
 * when no file has a significant line. Seed-cap notices are appended to
 * `warnings` when given.
 */
std::vector<CloneClass> detect(std::span<const CorpusFile> corpus, const DetectionConfig& config,
                               std::vector<std::string>* warnings = nullptr);

}  // namespace stclone
