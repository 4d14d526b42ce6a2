// SPDX-License-Identifier: Apache-2.0

#include "dpbf/weights.hpp"

#include <stdexcept>
#include <string>

namespace dpbf {

DualPolWeights::DualPolWeights(ArrayKind kind, std::size_t rows, std::size_t cols,
                               std::vector<cplx> a, std::vector<cplx> b)
    : kind_(kind), rows_(rows), cols_(cols), a_(std::move(a)), b_(std::move(b)) {
  if (rows_ == 0 || cols_ == 0) throw std::invalid_argument("weights need at least one element");
  if (kind_ == ArrayKind::ULA && rows_ != 1) throw std::invalid_argument("ULA weights have one row");
  if (b_.empty()) b_.assign(a_.size(), cplx{});
  if (a_.size() != rows_ * cols_ || b_.size() != rows_ * cols_) {
    throw std::invalid_argument("weight vectors do not match the declared " +
                                std::to_string(rows_) + "x" + std::to_string(cols_) + " shape");
  }
}

DualPolWeights DualPolWeights::ula(std::vector<cplx> a, std::vector<cplx> b) {
  const std::size_t n = a.size();
  return {ArrayKind::ULA, 1, n, std::move(a), std::move(b)};
}

DualPolWeights DualPolWeights::ura(std::size_t rows, std::size_t cols, std::vector<cplx> a,
                                   std::vector<cplx> b) {
  return {ArrayKind::URA, rows, cols, std::move(a), std::move(b)};
}

DualPolWeights DualPolWeights::zeros(ArrayKind kind, std::size_t rows, std::size_t cols) {
  return {kind, rows, cols, std::vector<cplx>(rows * cols), std::vector<cplx>(rows * cols)};
}

bool DualPolWeights::all_zero() const {
  for (std::size_t k = 0; k < a_.size(); ++k) {
    if (a_[k] != cplx{} || b_[k] != cplx{}) return false;
  }
  return true;
}

void DualPolWeights::check_matches(const ArrayGeometry& geom) const {
  if (kind_ != geom.kind() || rows_ != geom.rows() || cols_ != geom.cols()) {
    throw std::invalid_argument("weights shape " + std::to_string(rows_) + "x" +
                                std::to_string(cols_) + " does not match array geometry " +
                                std::to_string(geom.rows()) + "x" + std::to_string(geom.cols()));
  }
}

DualPolWeights operator+(const DualPolWeights& lhs, const DualPolWeights& rhs) {
  if (lhs.kind() != rhs.kind() || lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
    throw std::invalid_argument("cannot add weights of different shape");
  }
  DualPolWeights out = lhs;
  for (std::size_t k = 0; k < out.size(); ++k) {
    out.a()[k] += rhs.a()[k];
    out.b()[k] += rhs.b()[k];
  }
  return out;
}

DualPolWeights operator*(cplx scale, const DualPolWeights& w) {
  DualPolWeights out = w;
  for (std::size_t k = 0; k < out.size(); ++k) {
    out.a()[k] *= scale;
    out.b()[k] *= scale;
  }
  return out;
}

DualPolWeights operator-(const DualPolWeights& w) {
  DualPolWeights out = w;
  for (std::size_t k = 0; k < out.size(); ++k) {
    out.a()[k] = -out.a()[k];
    out.b()[k] = -out.b()[k];
  }
  return out;
}

double total_energy(const DualPolWeights& w) {
  double sum = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) sum += std::norm(w.a()[k]) + std::norm(w.b()[k]);
  return sum;
}

}  // namespace dpbf
