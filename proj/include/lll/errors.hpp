#ifndef LLL_ERRORS_HPP
#define LLL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lll {

/** Input failed validation (malformed instance, bad flag combination, ...). */
class input_error : public std::invalid_argument {
public:
    explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

/** The request is well-formed but outside what this build can do
    (enumeration cap exceeded, missing SWAP realization, theta >= 1, ...). */
class capability_error : public std::runtime_error {
public:
    explicit capability_error(const std::string& what) : std::runtime_error(what) {}
};

/** A structural property that the caller asked us to rely on turned out to be
    violated at run time (invalid walk step, shrinking-property failure, ...). */
class property_violation : public std::runtime_error {
public:
    explicit property_violation(const std::string& what) : std::runtime_error(what) {}
};

} // namespace lll

#endif
