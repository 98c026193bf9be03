#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mdhp {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using CRowVec = Eigen::RowVectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kRankDeficient,
  kNotHermitian,
  kNotPositiveDefinite,
  kZeroTarget,
  kSingularNoiseCovariance,
  kSvdFailure,
  kConfig,
  kIo,
  kTooManyTrialFailures,
  kInternal,
};

/// Library-wide exception type carrying a stable error code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

/// Wraps an angle to [0, 2*pi).
inline double wrap_phase(double phi) {
  double w = std::fmod(phi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;  // fmod(-eps) + 2*pi can round up to 2*pi
  return w;
}

/// Signed angular difference a - b mapped to (-pi, pi].
inline double principal_angle(double a, double b) {
  double d = std::fmod(a - b, kTwoPi);
  if (d > std::numbers::pi) d -= kTwoPi;
  if (d <= -std::numbers::pi) d += kTwoPi;
  return d;
}

inline void require(bool cond, ErrorCode code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace mdhp
