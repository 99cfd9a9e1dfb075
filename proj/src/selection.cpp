#include "stclone/selection.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace stclone {

namespace {

// Unbiased draw in [0, bound) independent of the standard library's distributions.
std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (true) {
        const std::uint64_t r = gen();
        if (r >= threshold) return r % bound;
    }
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::string_view selection_name(SelectionKind kind) {
    switch (kind) {
        case SelectionKind::Random: return "random";
        case SelectionKind::Lines: return "lines";
        case SelectionKind::Blocks: return "blocks";
        case SelectionKind::LinesDescending: return "lines-desc";
    }
    return "?";
}

std::optional<SelectionKind> parse_selection(std::string_view name) {
    for (const auto kind : {SelectionKind::Random, SelectionKind::Lines, SelectionKind::Blocks,
                            SelectionKind::LinesDescending}) {
        if (selection_name(kind) == name) return kind;
    }
    return std::nullopt;
}

std::vector<SelectionKind> default_selection_kinds() {
    return {SelectionKind::Random, SelectionKind::Lines, SelectionKind::Blocks};
}

std::vector<int> rank(std::span<const CloneClass> classes, std::span<const CorpusFile> corpus,
                      SelectionStrategy strategy) {
    std::unordered_map<int, const std::string*> paths;
    for (const auto& f : corpus) paths[f.file_id] = &f.path;
    static const std::string unknown;
    auto path_of = [&](const CloneClass& c) -> const std::string& {
        if (c.blocks.empty()) return unknown;
        auto it = paths.find(c.blocks.front().file_id);
        return it == paths.end() ? unknown : *it->second;
    };
    auto start_of = [](const CloneClass& c) { return c.blocks.empty() ? 0u : c.blocks.front().start_line; };

    std::vector<const CloneClass*> order;
    for (const auto& c : classes) order.push_back(&c);

    auto by_measure = [&](auto measure, bool descending) {
        std::stable_sort(order.begin(), order.end(), [&](const CloneClass* x, const CloneClass* y) {
            const auto mx = measure(*x);
            const auto my = measure(*y);
            if (mx != my) return descending ? mx > my : mx < my;
            return std::forward_as_tuple(path_of(*x), start_of(*x), x->class_id) <
                   std::forward_as_tuple(path_of(*y), start_of(*y), y->class_id);
        });
    };

    switch (strategy.kind) {
        case SelectionKind::Lines:
            by_measure([](const CloneClass& c) { return c.sig_count(); }, false);
            break;
        case SelectionKind::LinesDescending:
            by_measure([](const CloneClass& c) { return c.sig_count(); }, true);
            break;
        case SelectionKind::Blocks:
            by_measure([](const CloneClass& c) { return c.blocks.size(); }, false);
            break;
        case SelectionKind::Random: {
            std::stable_sort(order.begin(), order.end(), [](const CloneClass* x, const CloneClass* y) {
                return x->class_id < y->class_id;
            });
            std::mt19937_64 gen(strategy.seed);
            for (std::size_t i = order.size(); i > 1; --i) {
                const auto j = static_cast<std::size_t>(uniform_below(gen, i));
                std::swap(order[i - 1], order[j]);
            }
            break;
        }
    }

    std::vector<int> ids;
    ids.reserve(order.size());
    for (const auto* c : order) ids.push_back(c->class_id);
    return ids;
}

std::size_t StudyPlan::total_entries() const {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.clone_ids.size();
    return n;
}

std::uint64_t cell_seed(std::uint64_t seed, LanguageId language, const NormalizationOptions& options) {
    std::uint64_t cell = static_cast<std::uint64_t>(language == LanguageId::ST ? 1 : 2) << 8;
    cell |= (options.normalize_identifiers ? 1u : 0u) | (options.normalize_literals ? 2u : 0u);
    return splitmix64(seed ^ splitmix64(cell));
}

StudyPlan sample_study_set(std::span<const StudyCell> cells,
                           std::span<const SelectionKind> strategies, std::size_t k,
                           std::uint64_t seed) {
    if (k < 1) throw std::invalid_argument("group size k must be at least 1");
    StudyPlan plan;
    plan.group_size = k;
    for (const auto& cell : cells) {
        std::set<int> used;
        for (const auto kind : strategies) {
            StudyGroup group;
            group.language = cell.language;
            group.option = std::string(option_label(cell.options));
            group.strategy = kind;
            const SelectionStrategy strategy{kind, cell_seed(seed, cell.language, cell.options)};
            for (const int id : rank(cell.classes, cell.corpus, strategy)) {
                if (group.clone_ids.size() >= k) break;
                if (used.insert(id).second) group.clone_ids.push_back(id);
            }
            if (group.clone_ids.empty()) {
                plan.warnings.push_back("EmptyCell: " + std::string(language_name(cell.language)) + "/" +
                                        group.option + "/" + std::string(selection_name(kind)) +
                                        " has no clones left to sample");
            }
            plan.groups.push_back(std::move(group));
        }
    }
    return plan;
}

}  // namespace stclone
