#pragma once

#include "ivexpand/interval.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

namespace testsupport {

// Relative Hausdorff closeness: max endpoint error <= tol * max(1, |expected|).
inline bool close(const ivexpand::Interval& actual, const ivexpand::Interval& expected, double tol) {
    const double scale = std::max(1.0, ivexpand::magnitude(expected));
    return ivexpand::hausdorff(actual, expected) <= tol * scale;
}

inline bool close(double actual, double expected, double tol) {
    return std::fabs(actual - expected) <= tol * std::max(1.0, std::fabs(expected));
}

} // namespace testsupport

#define CHECK_INTERVAL_CLOSE(actual, expected, tol)                                                     \
    do {                                                                                                \
        const ivexpand::Interval check_actual_ = (actual);                                              \
        const ivexpand::Interval check_expected_ = (expected);                                          \
        INFO("actual " << check_actual_ << ", expected " << check_expected_);                           \
        CHECK(testsupport::close(check_actual_, check_expected_, (tol)));                               \
    } while (false)
