#pragma once

#include <stdexcept>
#include <string>

namespace capdl {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidEdge : Error {
    using Error::Error;
};
struct StratificationViolation : Error {
    using Error::Error;
};
struct UniverseMismatch : Error {
    using Error::Error;
};
struct NegationPresent : Error {
    using Error::Error;
};
struct CandidateInvalid : Error {
    using Error::Error;
};
struct IncompleteFamily : Error {
    using Error::Error;
};
struct ParamMismatch : Error {
    using Error::Error;
};
struct DuplicateEdge : Error {
    using Error::Error;
};
struct UnknownEdge : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_no(line) {}
    size_t line_no;
};

}  // namespace capdl
