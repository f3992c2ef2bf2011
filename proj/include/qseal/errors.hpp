#pragma once

#include <stdexcept>
#include <string>

namespace qseal {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error { public: using Error::Error; };
class EmptyFamilyError : public Error { public: using Error::Error; };
class NotOrthonormalError : public Error { public: using Error::Error; };
class CompletenessError : public Error { public: using Error::Error; };
class NullOutcomeError : public Error { public: using Error::Error; };
class InvalidStateError : public Error { public: using Error::Error; };

class EmptyMessageError : public Error { public: using Error::Error; };
class RecordMismatchError : public Error { public: using Error::Error; };
class IndexError : public Error { public: using Error::Error; };

// Raised by the collective attack when a triplet is not an eigenstate of the
// bit measurement.
class NotSealFormatError : public Error { public: using Error::Error; };

// The families have overlapping spans, so no perfect reader exists.
class NotBreakableAsStatedError : public Error { public: using Error::Error; };

class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class FormatError : public Error { public: using Error::Error; };

}  // namespace qseal
