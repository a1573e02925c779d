#pragma once

#include <stdexcept>
#include <string>

namespace kitaev {

/// Bad user input: malformed config, out-of-range parameter, unknown name.
/// The CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A requested computation exceeds a hard size guard (exponential-cost
/// oracles, enumeration limits). The CLI maps this to exit code 3.
struct ResourceGuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A verification run found a violated invariant. The CLI maps this to
/// exit code 2.
struct VerificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace kitaev
