#ifndef MILD_ERROR_HPP
#define MILD_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mild {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based source location.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line = 0, int column = 0)
      : Error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + msg : msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Inhomogeneous or wrongly graded element, or a degree outside the cap.
class DegreeError : public Error {
 public:
  using Error::Error;
};

/// A coefficient that does not belong to the ring, or an invalid ring.
class RingError : public Error {
 public:
  using Error::Error;
};

/// Reference to an algebra, morphism or generator that does not exist.
class NameError : public Error {
 public:
  using Error::Error;
};

/// d(I) is not contained in I.
class NotDStable : public Error {
 public:
  NotDStable(const std::string& msg, std::string generator, int degree)
      : Error(msg), generator_(std::move(generator)), degree_(degree) {}
  const std::string& generator() const { return generator_; }
  int degree() const { return degree_; }

 private:
  std::string generator_;
  int degree_;
};

/// One of the standing hypotheses of a construction fails.
class HypothesisViolated : public Error {
 public:
  HypothesisViolated(const std::string& msg, std::string which, int degree)
      : Error(msg), which_(std::move(which)), degree_(degree) {}
  const std::string& which() const { return which_; }
  int degree() const { return degree_; }

 private:
  std::string which_;
  int degree_;
};

class NotSurjective : public Error {
 public:
  NotSurjective(const std::string& msg, int degree) : Error(msg), degree_(degree) {}
  int degree() const { return degree_; }

 private:
  int degree_;
};

class NotQuasiIso : public Error {
 public:
  NotQuasiIso(const std::string& msg, int degree) : Error(msg), degree_(degree) {}
  int degree() const { return degree_; }

 private:
  int degree_;
};

class LiftFailed : public Error {
 public:
  LiftFailed(const std::string& msg, std::string generator)
      : Error(msg), generator_(std::move(generator)) {}
  const std::string& generator() const { return generator_; }

 private:
  std::string generator_;
};

class WindowExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace mild

#endif  // MILD_ERROR_HPP
