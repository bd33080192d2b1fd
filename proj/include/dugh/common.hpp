#ifndef DUGH_COMMON_HPP
#define DUGH_COMMON_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

/// Common aliases, numeric constants, and the error hierarchy shared by all
/// library modules.
namespace dugh {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Floor applied to every spatial variance (source and noise). Update rules
/// take square roots of ratios and must never divide by zero; an entry at the
/// floor encodes a pruned source.
inline constexpr double k_h_min = 1e-12;

/// Floor applied to every circulant-spectrum coefficient, for the same reason.
inline constexpr double k_p_min = 1e-12;

/// Relative jitter threshold/magnitude: before inversion or square roots,
/// eigenvalues are shifted by eps * (trace / dim) whenever the smallest
/// eigenvalue falls below that same quantity.
inline constexpr double k_jitter_eps = 1e-10;

/// Absolute tolerance (on entry magnitudes) for accepting a matrix as
/// symmetric.
inline constexpr double k_sym_tol = 1e-10;

inline constexpr double kPi = 3.14159265358979323846;

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Operand shapes are inconsistent.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A matrix required to be symmetric is not.
class NonSymmetricError : public Error {
 public:
  using Error::Error;
};

/// A matrix is numerically singular beyond jitter repair.
class SingularError : public Error {
 public:
  using Error::Error;
};

/// A configuration or domain value violates its documented invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A file could not be parsed; the message carries the offending line number.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A computation produced a non-finite value (e.g. the marginal likelihood).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace dugh

#endif  // DUGH_COMMON_HPP
