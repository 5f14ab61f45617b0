#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdk {

inline constexpr const char* version = "1.0.0";

// Mapped by the CLI onto exit codes: invalid_argument -> 2, numerical_error -> 3, io_error -> 4.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A homology class that never dies below the filtration cutoff.
struct essential_class_error : numerical_error {
    int dimension;
    double birth;
    essential_class_error(int q, double b)
        : numerical_error("essential class in dimension " + std::to_string(q) + " born at " +
                          std::to_string(b) + " does not die within r_max; raise r_max"),
          dimension(q), birth(b) {}
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

// Round-trip formatting for reals.
inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double median(std::vector<double> v) {
    require(!v.empty(), "median of an empty set");
    const std::size_t n = v.size();
    std::sort(v.begin(), v.end());
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// FNV-1a, used for input fingerprints in run manifests.
inline std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace pdk
