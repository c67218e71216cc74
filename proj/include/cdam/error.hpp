#pragma once

#include <stdexcept>
#include <string>

namespace cdam {

enum class ErrorKind {
    invalid_size,
    lookup,
    contract,
    numeric_divergence,
    undefined_correlation,
    energy_undefined,
    retry_exhausted,
    format,
    length,
    ingest,
    spec,
    io,
};

inline const char* to_string(ErrorKind k)
{
    switch (k) {
    case ErrorKind::invalid_size: return "invalid-size";
    case ErrorKind::lookup: return "lookup";
    case ErrorKind::contract: return "contract";
    case ErrorKind::numeric_divergence: return "numeric-divergence";
    case ErrorKind::undefined_correlation: return "undefined-correlation";
    case ErrorKind::energy_undefined: return "energy-undefined";
    case ErrorKind::retry_exhausted: return "retry-exhausted";
    case ErrorKind::format: return "format";
    case ErrorKind::length: return "length";
    case ErrorKind::ingest: return "ingest";
    case ErrorKind::spec: return "spec";
    case ErrorKind::io: return "io";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace cdam
