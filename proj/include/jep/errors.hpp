#ifndef JEP_ERRORS_HPP
#define JEP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace jep {

/// Base class for all domain errors raised by the toolkit.
class JepError : public std::runtime_error {
  public:
    explicit JepError(const std::string& what) : std::runtime_error(what) {}
};

class LabelMismatchError : public JepError {
  public:
    explicit LabelMismatchError(const std::string& what) : JepError(what) {}
};

class AlphabetError : public JepError {
  public:
    explicit AlphabetError(const std::string& what) : JepError(what) {}
};

class ArityError : public JepError {
  public:
    explicit ArityError(const std::string& what) : JepError(what) {}
};

class InvalidEncodingError : public JepError {
  public:
    explicit InvalidEncodingError(const std::string& what) : JepError(what) {}
};

class InvalidCotreeError : public JepError {
  public:
    explicit InvalidCotreeError(const std::string& what) : JepError(what) {}
};

class NotCographError : public JepError {
  public:
    explicit NotCographError(const std::string& what) : JepError(what) {}
};

class MissingP4Error : public JepError {
  public:
    explicit MissingP4Error(const std::string& what) : JepError(what) {}
};

/// Raised when an enumeration or fixpoint would exceed its configured cap.
/// The message quotes the relevant size diagnostics when they are known.
class SizeLimitError : public JepError {
  public:
    explicit SizeLimitError(const std::string& what) : JepError(what) {}
};

class ParseError : public JepError {
  public:
    ParseError(const std::string& what, int line, int column)
        : JepError(what + " (line " + std::to_string(line) + ", column " +
                   std::to_string(column) + ")"),
          line(line),
          column(column) {}
    explicit ParseError(const std::string& what) : JepError(what), line(0), column(0) {}
    int line;
    int column;
};

/// Internal consistency failure: a cross-checked invariant did not hold.
class InternalError : public JepError {
  public:
    explicit InternalError(const std::string& what) : JepError(what) {}
};

}  // namespace jep

#endif
