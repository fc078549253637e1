#pragma once

#include <stdexcept>
#include <string>

namespace freewill {

// Bad arguments to a library operation (empty input, non-finite score, ...).
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// KL(p||q) requested where some q_i = 0 with p_i > 0. No silent smoothing.
struct DivergenceUndefined : std::domain_error {
    using std::domain_error::domain_error;
};

// Run configuration failed to parse or validate. Message names the key.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem failure while writing or reading an artifact.
struct IoError : std::runtime_error {
    IoError(const std::string& path, const std::string& detail)
        : std::runtime_error(path + ": " + detail) {}
};

// A manifest references a file that is missing at manifest-build time.
struct ManifestInconsistent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace freewill
