#include <cstddef>
#include <vector>

double moving_average(const std::vector<double>& samples, std::size_t window) {
    if (samples.empty() || window == 0) return 0.0;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = samples.size(); i > 0 && count < window; --i) {
        sum += samples[i - 1];
        ++count;
    }
    return sum / static_cast<double>(count);
}

int clamp_level(int level) {
    if (level < 0) return 0;
    if (level > 255) return 255;
    return level;
}
