#pragma once

#include <stdexcept>
#include <string>

namespace hlab {

/// Base of every error raised by the library. The CLI maps the category
/// onto its exit code.
class Error : public std::runtime_error {
public:
    enum class Category { config, numeric, adiabaticity };

    Error(Category category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    Category category() const noexcept { return category_; }

private:
    Category category_;
};

// Malformed input: bad labels, unknown edges, non-finite parameters,
// unparseable braid words, strict-schema violations.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(Category::config, what) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(Category::numeric, what) {}
};

/// Raised when a transient run leaves the zero-mode subspace.
class AdiabaticityError : public Error {
public:
    AdiabaticityError(const std::string& what, double leakage)
        : Error(Category::adiabaticity, what), leakage_(leakage) {}

    double leakage() const noexcept { return leakage_; }

private:
    double leakage_;
};

} // namespace hlab
