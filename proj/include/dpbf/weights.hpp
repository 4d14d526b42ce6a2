// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "dpbf/array_model.hpp"

namespace dpbf {

/// Complex excitation per element for polarizations A and B.
///
/// A ULA uses a single row; a URA is an M x N matrix. Storage is flat in the
/// same column-major order as ArrayGeometry::index().
class DualPolWeights {
 public:
  DualPolWeights() = default;

  /// ULA-shaped weights; b may be empty, meaning all zero.
  static DualPolWeights ula(std::vector<cplx> a, std::vector<cplx> b = {});

  /// URA-shaped weights given flat column-major data.
  static DualPolWeights ura(std::size_t rows, std::size_t cols, std::vector<cplx> a,
                            std::vector<cplx> b);

  /// All-zero weights of the given shape.
  static DualPolWeights zeros(ArrayKind kind, std::size_t rows, std::size_t cols);

  ArrayKind kind() const { return kind_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return a_.size(); }

  const std::vector<cplx>& a() const { return a_; }
  const std::vector<cplx>& b() const { return b_; }
  std::vector<cplx>& a() { return a_; }
  std::vector<cplx>& b() { return b_; }

  cplx a(std::size_t row, std::size_t col) const { return a_[col * rows_ + row]; }
  cplx b(std::size_t row, std::size_t col) const { return b_[col * rows_ + row]; }
  cplx& a(std::size_t row, std::size_t col) { return a_[col * rows_ + row]; }
  cplx& b(std::size_t row, std::size_t col) { return b_[col * rows_ + row]; }

  bool all_zero() const;

  /// Throws std::invalid_argument if the shape does not fit `geom`.
  void check_matches(const ArrayGeometry& geom) const;

  friend bool operator==(const DualPolWeights&, const DualPolWeights&) = default;

 private:
  DualPolWeights(ArrayKind kind, std::size_t rows, std::size_t cols, std::vector<cplx> a,
                 std::vector<cplx> b);

  ArrayKind kind_ = ArrayKind::ULA;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> a_;
  std::vector<cplx> b_;
};

DualPolWeights operator+(const DualPolWeights& lhs, const DualPolWeights& rhs);
DualPolWeights operator*(cplx scale, const DualPolWeights& w);
DualPolWeights operator-(const DualPolWeights& w);

/// Sum of |w|^2 over both polarizations.
double total_energy(const DualPolWeights& w);

}  // namespace dpbf
