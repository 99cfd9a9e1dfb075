#include "stclone/metrics.hpp"

#include <filesystem>
#include <map>
#include <set>
#include <unordered_map>

namespace stclone {

namespace {

// Covered line indices per file id.
std::unordered_map<int, std::vector<bool>> coverage(std::span<const CloneClass> classes,
                                                    std::span<const CorpusFile> corpus) {
    std::unordered_map<int, std::vector<bool>> covered;
    for (const auto& f : corpus) covered[f.file_id].assign(f.lines.size(), false);
    for (const auto& cls : classes) {
        for (const auto& b : cls.blocks) {
            auto it = covered.find(b.file_id);
            if (it == covered.end()) continue;
            auto& mask = it->second;
            for (std::size_t i = b.first_index; i < b.first_index + b.sig_count && i < mask.size(); ++i)
                mask[i] = true;
        }
    }
    return covered;
}

std::size_t count_true(const std::vector<bool>& mask) {
    std::size_t n = 0;
    for (const bool b : mask) n += b ? 1 : 0;
    return n;
}

}  // namespace

DetectionReport compute_metrics(std::span<const CloneClass> classes,
                                std::span<const CorpusFile> corpus) {
    DetectionReport report;
    if (!corpus.empty()) report.language_id = corpus.front().language_id;
    report.total_files = corpus.size();
    for (const auto& f : corpus) report.total_significant_lines += f.lines.size();

    std::set<int> files;
    for (const auto& cls : classes) {
        report.duplicated_blocks += cls.blocks.size();
        for (const auto& b : cls.blocks) files.insert(b.file_id);
    }
    report.files_with_clones = files.size();
    for (const auto& [id, mask] : coverage(classes, corpus)) report.duplicated_lines += count_true(mask);
    return report;
}

std::vector<ScatterRow> scatter_data(std::span<const CloneClass> classes,
                                     std::span<const CorpusFile> corpus) {
    std::unordered_map<int, std::string> paths;
    for (const auto& f : corpus) paths[f.file_id] = f.path;
    auto path_of = [&](int id) {
        auto it = paths.find(id);
        return it == paths.end() ? std::to_string(id) : it->second;
    };

    std::map<std::pair<std::string, std::string>, std::size_t> counts;
    for (const auto& cls : classes) {
        for (const auto& pair : clone_pairs(cls)) {
            if (pair.a.file_id == pair.b.file_id) continue;
            auto pa = path_of(pair.a.file_id);
            auto pb = path_of(pair.b.file_id);
            if (pb < pa) std::swap(pa, pb);
            ++counts[{std::move(pa), std::move(pb)}];
        }
    }
    std::vector<ScatterRow> rows;
    for (const auto& [key, n] : counts) rows.push_back({key.first, key.second, n});
    return rows;
}

std::vector<TreemapRow> treemap_data(std::span<const CloneClass> classes,
                                     std::span<const CorpusFile> corpus) {
    const auto covered = coverage(classes, corpus);
    std::map<std::string, TreemapRow> rows;
    for (const auto& f : corpus) {
        const auto dup = count_true(covered.at(f.file_id));
        auto dir = std::filesystem::path(f.path).parent_path();
        if (dir.empty()) dir = ".";
        while (true) {
            auto& row = rows[dir.generic_string()];
            row.directory = dir.generic_string();
            row.total_sig_lines += f.lines.size();
            row.duplicated_lines += dup;
            const auto parent = dir.parent_path();
            if (parent.empty() || parent == dir) break;
            dir = parent;
        }
    }
    std::vector<TreemapRow> out;
    for (auto& [dir, row] : rows) {
        row.duplication_ratio = row.total_sig_lines == 0
                                    ? 0.0
                                    : static_cast<double>(row.duplicated_lines) /
                                          static_cast<double>(row.total_sig_lines);
        out.push_back(row);
    }
    return out;
}

}  // namespace stclone
