#include "detsgrad/rng.hpp"

#include <algorithm>

#include "detsgrad/errors.hpp"

namespace detsgrad {

std::vector<long> RngStream::sample_without_replacement(long n, long k) {
    if (k > n) throw InsufficientData("cannot draw " + std::to_string(k) +
                                      " distinct samples from " + std::to_string(n));
    std::vector<long> out;
    out.reserve(k);
    // Floyd's algorithm: for j = n-k .. n-1, draw t in [0, j]; take t unless
    // already taken, in which case take j.
    if (k <= 64) {
        for (long j = n - k; j < n; ++j) {
            const long t = static_cast<long>(uniform_below(static_cast<std::uint64_t>(j) + 1));
            if (std::find(out.begin(), out.end(), t) != out.end())
                out.push_back(j);
            else
                out.push_back(t);
        }
    } else {
        std::vector<char> taken(n, 0);
        for (long j = n - k; j < n; ++j) {
            const long t = static_cast<long>(uniform_below(static_cast<std::uint64_t>(j) + 1));
            const long pick = taken[t] ? j : t;
            taken[pick] = 1;
            out.push_back(pick);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detsgrad
