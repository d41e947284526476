#pragma once

#include <stdexcept>

namespace eqharm {

/// H_N^m is empty (|m| > N or N−m odd), or a dimension-0 basis was used.
struct EmptySpaceError : std::domain_error {
    using std::domain_error::domain_error;
};

/// A chart-based operation was requested within ε of a chart pole.
struct ChartPoleError : std::domain_error {
    using std::domain_error::domain_error;
};

/// A covariance matrix required to be positive definite is not.
struct NotPositiveDefiniteError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Kac–Rice predictions require m ≠ 0.
struct ZeroEquivarianceError : std::domain_error {
    using std::domain_error::domain_error;
};

/// fiber_sheet_count evaluated at a base point where the section vanishes.
struct BaseOnZeroSetError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Normalization fitting needs at least 3 distinct (N, m) reports.
struct InsufficientDataError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace eqharm
