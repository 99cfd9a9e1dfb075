#include "stclone/detector.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include "stclone/errors.hpp"

namespace stclone {

namespace {

// Maps normalized text to dense ids. Buckets are keyed by fingerprint and
// resolved by text comparison, so digest collisions never merge lines.
class LineInterner {
public:
    std::uint32_t intern(const SignificantLine& line) {
        auto& bucket = buckets_[line.fingerprint];
        for (const auto& [text, id] : bucket) {
            if (text == line.normalized_text) return id;
        }
        const auto id = next_++;
        bucket.emplace_back(line.normalized_text, id);
        return id;
    }

    std::uint32_t size() const { return next_; }

private:
    std::unordered_map<std::uint64_t, std::vector<std::pair<std::string_view, std::uint32_t>>> buckets_;
    std::uint32_t next_ = 0;
};

struct Position {
    std::uint32_t file = 0;  // index into the language partition
    std::uint32_t index = 0;
};

struct Run {
    std::uint32_t file_a = 0;
    std::uint32_t start_a = 0;
    std::uint32_t file_b = 0;
    std::uint32_t start_b = 0;
    std::uint32_t length = 0;
};

bool contains(std::uint32_t outer_start, std::uint32_t outer_len,
              std::uint32_t inner_start, std::uint32_t inner_len) {
    return outer_start <= inner_start && inner_start + inner_len <= outer_start + outer_len;
}

bool subsumes(const Run& outer, const Run& inner, bool same_file) {
    if (outer.length <= inner.length) return false;
    if (contains(outer.start_a, outer.length, inner.start_a, inner.length) &&
        contains(outer.start_b, outer.length, inner.start_b, inner.length))
        return true;
    return same_file && contains(outer.start_a, outer.length, inner.start_b, inner.length) &&
           contains(outer.start_b, outer.length, inner.start_a, inner.length);
}

// Drops runs strictly contained in a longer run between the same two files.
std::vector<Run> apply_subsumption(std::vector<Run> runs) {
    std::sort(runs.begin(), runs.end(), [](const Run& x, const Run& y) {
        return std::tie(x.file_a, x.file_b, y.length, x.start_a, x.start_b) <
               std::tie(y.file_a, y.file_b, x.length, y.start_a, y.start_b);
    });
    std::vector<Run> kept;
    std::size_t group_begin = 0;
    while (group_begin < runs.size()) {
        std::size_t group_end = group_begin;
        while (group_end < runs.size() && runs[group_end].file_a == runs[group_begin].file_a &&
               runs[group_end].file_b == runs[group_begin].file_b)
            ++group_end;
        const bool same_file = runs[group_begin].file_a == runs[group_begin].file_b;
        for (std::size_t i = group_begin; i < group_end; ++i) {
            bool dropped = false;
            // Longer runs precede i within the group.
            for (std::size_t j = group_begin; j < i && !dropped; ++j) {
                dropped = subsumes(runs[j], runs[i], same_file);
            }
            if (!dropped) kept.push_back(runs[i]);
        }
        group_begin = group_end;
    }
    return kept;
}

struct BlockRef {
    std::uint32_t file = 0;
    std::uint32_t start = 0;
    std::uint32_t length = 0;

    auto operator<=>(const BlockRef&) const = default;
};

std::uint64_t sequence_digest(const std::vector<SignificantLine>& lines, std::size_t first,
                              std::size_t count) {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ count;
    for (std::size_t i = first; i < first + count; ++i) {
        h ^= lines[i].fingerprint + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

// Greedy pruning of overlapping blocks within a file: longest first, then lowest start.
void prune_overlaps(std::map<std::vector<std::uint32_t>, std::set<BlockRef>>& classes) {
    std::vector<BlockRef> all;
    for (const auto& [key, blocks] : classes) all.insert(all.end(), blocks.begin(), blocks.end());
    std::sort(all.begin(), all.end(), [](const BlockRef& x, const BlockRef& y) {
        return std::tie(y.length, x.file, x.start) < std::tie(x.length, y.file, y.start);
    });
    std::map<std::uint32_t, std::vector<std::pair<std::uint32_t, std::uint32_t>>> taken;
    std::set<BlockRef> rejected;
    for (const auto& b : all) {
        auto& intervals = taken[b.file];
        const bool overlaps = std::any_of(intervals.begin(), intervals.end(), [&](const auto& iv) {
            return b.start < iv.second && iv.first < b.start + b.length;
        });
        if (overlaps) {
            rejected.insert(b);
        } else {
            intervals.emplace_back(b.start, b.start + b.length);
        }
    }
    for (auto it = classes.begin(); it != classes.end();) {
        std::erase_if(it->second, [&](const BlockRef& b) { return rejected.contains(b); });
        it = it->second.size() < 2 ? classes.erase(it) : std::next(it);
    }
}

}  // namespace

void DetectionConfig::validate() const {
    if (min_lines < 1) throw std::invalid_argument("min_lines must be at least 1");
    if (seed_cap && *seed_cap < 2) throw std::invalid_argument("seed_cap must be at least 2");
}

CorpusFile make_corpus_file(int file_id, std::string path, LanguageId language,
                            std::string_view text, const DetectionConfig& config) {
    CorpusFile file;
    file.file_id = file_id;
    file.path = std::move(path);
    file.language_id = language;
    file.lines = significant_lines(text, profile_for(language), config.options,
                                   config.ignore_punct_lines);
    file.total_significant = file.lines.size();
    return file;
}

std::vector<ClonePair> clone_pairs(const CloneClass& clone_class) {
    std::vector<ClonePair> pairs;
    const auto& blocks = clone_class.blocks;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        for (std::size_t j = i + 1; j < blocks.size(); ++j) pairs.push_back({blocks[i], blocks[j]});
    }
    return pairs;
}

std::vector<MaximalRun> find_maximal_runs(std::span<const SignificantLine> a,
                                          std::span<const SignificantLine> b,
                                          std::size_t min_lines, bool same_sequence) {
    LineInterner interner;
    std::vector<std::uint32_t> ids_a;
    std::vector<std::uint32_t> ids_b;
    for (const auto& line : a) ids_a.push_back(interner.intern(line));
    for (const auto& line : b) ids_b.push_back(interner.intern(line));

    std::vector<std::vector<std::size_t>> where_b(interner.size());
    for (std::size_t j = 0; j < ids_b.size(); ++j) where_b[ids_b[j]].push_back(j);

    std::vector<MaximalRun> runs;
    for (std::size_t i = 0; i < ids_a.size(); ++i) {
        for (const auto j : where_b[ids_a[i]]) {
            if (same_sequence && j <= i) continue;
            if (i > 0 && j > 0 && ids_a[i - 1] == ids_b[j - 1]) continue;
            std::size_t len = 0;
            while (i + len < ids_a.size() && j + len < ids_b.size() &&
                   ids_a[i + len] == ids_b[j + len])
                ++len;
            if (len >= min_lines) runs.push_back({i, j, len});
        }
    }
    std::sort(runs.begin(), runs.end());
    return runs;
}

std::vector<CloneClass> detect(std::span<const CorpusFile> corpus, const DetectionConfig& config,
                               std::vector<std::string>* warnings) {
    config.validate();
    std::size_t total_lines = 0;
    for (const auto& f : corpus) total_lines += f.lines.size();
    if (total_lines == 0) throw EmptyCorpus();

    std::optional<std::size_t> cap = config.seed_cap;
    if (!cap && total_lines >= DetectionConfig::kAutoSeedCapThreshold)
        cap = DetectionConfig::kDefaultSeedCap;

    std::vector<CloneClass> result;
    for (const auto language : {LanguageId::ST, LanguageId::CPP}) {
        std::vector<const CorpusFile*> files;
        for (const auto& f : corpus) {
            if (f.language_id == language) files.push_back(&f);
        }
        if (files.empty()) continue;

        LineInterner interner;
        std::vector<std::vector<std::uint32_t>> ids(files.size());
        for (std::size_t f = 0; f < files.size(); ++f) {
            for (const auto& line : files[f]->lines) ids[f].push_back(interner.intern(line));
        }
        std::vector<std::vector<Position>> positions(interner.size());
        for (std::uint32_t f = 0; f < files.size(); ++f) {
            for (std::uint32_t i = 0; i < ids[f].size(); ++i) positions[ids[f][i]].push_back({f, i});
        }

        std::vector<Run> runs;
        for (auto& where : positions) {
            if (where.size() < 2) continue;
            if (cap && where.size() > *cap) {
                if (warnings) {
                    const auto& p = where.front();
                    warnings->push_back("line '" + files[p.file]->lines[p.index].normalized_text +
                                        "' occurs " + std::to_string(where.size()) +
                                        " times; seeding capped at " + std::to_string(*cap));
                }
                where.resize(*cap);
            }
            for (std::size_t x = 0; x < where.size(); ++x) {
                const auto& p = where[x];
                const auto& seq_p = ids[p.file];
                for (std::size_t y = x + 1; y < where.size(); ++y) {
                    const auto& q = where[y];
                    const auto& seq_q = ids[q.file];
                    if (p.index > 0 && q.index > 0 && seq_p[p.index - 1] == seq_q[q.index - 1])
                        continue;
                    std::uint32_t len = 0;
                    while (p.index + len < seq_p.size() && q.index + len < seq_q.size() &&
                           seq_p[p.index + len] == seq_q[q.index + len])
                        ++len;
                    if (len >= config.min_lines) runs.push_back({p.file, p.index, q.file, q.index, len});
                }
            }
        }
        runs = apply_subsumption(std::move(runs));

        std::map<std::vector<std::uint32_t>, std::set<BlockRef>> grouped;
        for (const auto& r : runs) {
            const auto first = ids[r.file_a].begin() + r.start_a;
            std::vector<std::uint32_t> key(first, first + r.length);
            auto& blocks = grouped[std::move(key)];
            blocks.insert({r.file_a, r.start_a, r.length});
            blocks.insert({r.file_b, r.start_b, r.length});
        }
        if (!config.allow_overlap) prune_overlaps(grouped);

        for (const auto& [key, refs] : grouped) {
            CloneClass cls;
            cls.language_id = language;
            for (const auto& ref : refs) {
                const auto& file = *files[ref.file];
                Block block;
                block.file_id = file.file_id;
                block.first_index = ref.start;
                block.sig_count = ref.length;
                block.start_line = file.lines[ref.start].original_line;
                block.end_line = file.lines[ref.start + ref.length - 1].original_line;
                cls.blocks.push_back(block);
            }
            const auto& front = refs.begin();
            cls.sequence_key = sequence_digest(files[front->file]->lines, front->start, front->length);
            std::sort(cls.blocks.begin(), cls.blocks.end(), [](const Block& x, const Block& y) {
                return std::tie(x.file_id, x.start_line, x.first_index) <
                       std::tie(y.file_id, y.start_line, y.first_index);
            });
            result.push_back(std::move(cls));
        }
    }

    std::unordered_map<int, const std::string*> paths;
    for (const auto& f : corpus) paths[f.file_id] = &f.path;
    std::sort(result.begin(), result.end(), [&](const CloneClass& x, const CloneClass& y) {
        const auto& bx = x.blocks.front();
        const auto& by = y.blocks.front();
        return std::make_tuple(y.sig_count(), std::cref(*paths.at(bx.file_id)), bx.start_line,
                               bx.first_index, x.language_id) <
               std::make_tuple(x.sig_count(), std::cref(*paths.at(by.file_id)), by.start_line,
                               by.first_index, y.language_id);
    });
    for (std::size_t i = 0; i < result.size(); ++i) result[i].class_id = static_cast<int>(i) + 1;
    return result;
}

}  // namespace stclone
