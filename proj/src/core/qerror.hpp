#ifndef QB_CORE_QERROR_HPP
#define QB_CORE_QERROR_HPP

#include <stdexcept>
#include <string>

namespace qb {

enum class ErrorKind {
    Domain,    // argument outside the mathematical domain (bad q, bad n, ...)
    Contract,  // caller broke a precondition (space mismatch, non-unitary input, ...)
    Capacity,  // requested object too large (dimension cap, empty solution set)
    Range,     // index outside a table
    Config,    // malformed or inconsistent run configuration
    Io,        // file could not be read or written
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

} // namespace qb

#endif
