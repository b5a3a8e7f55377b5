// Shared basics: wide integers, error taxonomy, small numeric helpers.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace graphens {

using u128 = unsigned __int128;
using i128 = __int128;

// Constraint point not realisable / outside the achievable region. CLI exit 2.
struct infeasible_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Solver breakdown (no convergence, singular system, ...). CLI exit 3.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad arguments / malformed input files. CLI exit 1.
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string u128_to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    return s;
}

inline std::string i128_to_string(i128 v) {
    if (v < 0) return "-" + u128_to_string(static_cast<u128>(-v));
    return u128_to_string(static_cast<u128>(v));
}

// x^e by repeated multiplication; small exponents only.
inline u128 ipow_u128(u128 x, int e) {
    u128 r = 1;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

inline i128 ipow_i128(i128 x, int e) {
    i128 r = 1;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

inline double pow_int(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

} // namespace graphens
