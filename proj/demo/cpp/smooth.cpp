#include <cstddef>
#include <vector>

// Same algorithm as moving_average, renamed.
double trailing_mean(const std::vector<double>& values, std::size_t span) {
    if (values.empty() || span == 0) return 0.0;
    double total = 0.0;
    std::size_t used = 0;
    for (std::size_t i = values.size(); i > 0 && used < span; --i) {
        total += values[i - 1];
        ++used;
    }
    return total / static_cast<double>(used);
}
