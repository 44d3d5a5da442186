#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tricrit {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Local dimensions (n1, n2, n3) of the three parties.
struct Dims {
  std::array<int, 3> n{2, 2, 2};

  constexpr int operator[](std::size_t p) const { return n[p]; }
  constexpr int total() const { return n[0] * n[1] * n[2]; }
  /// Composite index of |ijk>, k fastest.
  constexpr int index(int i, int j, int k) const { return (i * n[1] + j) * n[2] + k; }

  friend constexpr bool operator==(const Dims&, const Dims&) = default;
};

/// Malformed or out-of-domain input: wrong lengths, bad dimensions, parameters
/// outside their range, invalid density matrices.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A structural precondition on a matrix (symmetry, hermiticity) failed.
/// Signals a caller bug rather than noisy data.
class SymmetryViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The exact A-tensor path was asked for a rank above its limit.
class RankLimitExceeded : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

using Warnings = std::vector<std::string>;

}  // namespace tricrit
