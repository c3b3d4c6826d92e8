#ifndef CGR_ERROR_HPP
#define CGR_ERROR_HPP

#include <stdexcept>
#include <string>

namespace cgr {

/// Malformed input data (FASTA, b-files, IFS tables, image files, ...).
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A caller broke an operation's contract (bad dimensions, out-of-range
/// symbols, mismatched alphabets, invalid parameters).
class ContractError : public std::runtime_error {
public:
  explicit ContractError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cgr

#endif  // CGR_ERROR_HPP
