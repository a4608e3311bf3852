#ifndef ROBAVG_ERRORS_HPP
#define ROBAVG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace robavg {

/// Base class for all robavg errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Residual IQR is zero, so the semi-interquartile bandwidth degenerates.
class DegenerateBandwidthError : public Error {
 public:
  using Error::Error;
};

/// No residual falls inside the Huber acceptance region |e| <= c.
class EmptyAcceptRegionError : public Error {
 public:
  using Error::Error;
};

/// The averaged curvature estimate R2 is zero or negative.
class ZeroCurvatureError : public Error {
 public:
  using Error::Error;
};

/// Candidate enumeration guard against combinatorial blowup.
class TooManyColumnsError : public Error {
 public:
  using Error::Error;
};

/// Design submatrix is rank deficient at the working tolerance.
class RankDeficientError : public Error {
 public:
  using Error::Error;
};

/// Objective returned NaN/Inf at a feasible simplex point.
class NonFiniteObjectiveError : public Error {
 public:
  using Error::Error;
};

/// The estimated normalizing matrix in the RCp score is singular.
class SingularNormalizerError : public Error {
 public:
  using Error::Error;
};

class LengthMismatchError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

/// CSV ingestion failures.
class ParseError : public Error {
 public:
  using Error::Error;
};

class NonNumericCellError : public ParseError {
 public:
  using ParseError::ParseError;
};

class MissingColumnError : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace robavg

#endif  // ROBAVG_ERRORS_HPP
