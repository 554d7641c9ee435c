#include "abcsg/dtw.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace abcsg {

double dtw_distance(const TimeSeries& s, const TimeSeries& r) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const std::size_t m = r.size();

    // Two rolling rows over the columns; index 0 is the virtual DTW(i, 0) = inf
    // column, and the virtual DTW(0, 0) = 0 seeds the first cell.
    std::vector<double> prev(m + 1, inf), cur(m + 1, inf);
    prev[0] = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        cur[0] = inf;
        for (std::size_t j = 1; j <= m; ++j) {
            const double diff = s[i] - r[j - 1];
            cur[j] = diff * diff + std::min({prev[j], cur[j - 1], prev[j - 1]});
        }
        std::swap(prev, cur);
        prev[0] = inf;
    }
    return prev[m];
}

}  // namespace abcsg
