// SPDX-License-Identifier: Apache-2.0
//
// Orthogonally polarized companion beams and URA weight composition.
//
// Given beam-1 weights (w_a, w_b) on a centered array, the companion
//   w2_a = -J conj(w_b),  w2_b = J conj(w_a)
// (J = element-order reversal) has the same total power pattern and a
// polarization orthogonal to beam 1 in every direction. For a URA, J reverses
// both the row and the column axis.

#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "dpbf/weights.hpp"

namespace dpbf {

enum class UraMode { DpbfBoth, SpbfElevation };

enum class Axis { Rows, Cols, Both };

/// Index reversal of a vector.
std::vector<cplx> reverse(std::vector<cplx> v);

/// Reversal of a column-major rows x cols matrix along the given axis.
std::vector<cplx> reverse(const std::vector<cplx>& m, std::size_t rows, std::size_t cols, Axis axis);

std::vector<cplx> conj(std::vector<cplx> v);

DualPolWeights companion_ula(const DualPolWeights& w);
DualPolWeights companion_ura(const DualPolWeights& w);

/// Dispatches on the weight shape.
DualPolWeights companion(const DualPolWeights& w);

/// Separable description of URA beam-1 weights. u1_a/u1_b (length M) form a
/// virtual element alpha in elevation; its companion beta is derived from
/// them. v_alpha/v_beta (length N) steer alpha and beta in azimuth.
struct UraComposition {
  std::vector<cplx> u1_a;
  std::vector<cplx> u1_b;
  std::vector<cplx> v_alpha;
  std::vector<cplx> v_beta;
  UraMode mode = UraMode::DpbfBoth;
};

struct PartitionReport {
  bool ok = true;
  // Elements (row, col) receiving two nonzero contributions, per polarization.
  std::vector<std::pair<std::size_t, std::size_t>> overlap_a;
  std::vector<std::pair<std::size_t, std::size_t>> overlap_b;
  // Distinct rows named in either overlap list.
  std::vector<std::size_t> rows;
  // Mode invariant problems (e.g. nonzero u1_b in spbf-elevation mode).
  std::vector<std::string> mode_issues;

  std::string describe() const;
};

PartitionReport validate_partition(const UraComposition& c);

/// Thrown by compose_ura when the composition would combine two weighted
/// replicas on one element.
class PartitionError : public std::invalid_argument {
 public:
  explicit PartitionError(PartitionReport report);
  const PartitionReport& report() const { return report_; }

 private:
  PartitionReport report_;
};

/// W1_a = u1_a v_alpha^T - J conj(u1_b) v_beta^T
/// W1_b = u1_b v_alpha^T + J conj(u1_a) v_beta^T
/// Nonuniform modulus on active entries is reported through `warnings` but is
/// not an error.
DualPolWeights compose_ura(const UraComposition& c, std::vector<std::string>* warnings = nullptr);

/// Factor-level companion: same u vectors, v2_alpha = -J conj(v_beta),
/// v2_beta = J conj(v_alpha). compose_ura of the result equals companion_ura
/// of compose_ura(c).
UraComposition companion_factors(const UraComposition& c);

/// Default dpbf-both zero-power scheme: first M/2 rows active. Odd M throws.
std::vector<bool> default_active_rows(std::size_t m);

/// True when all nonzero entries share one modulus within tol (relative).
bool has_uniform_modulus(const DualPolWeights& w, double tol = 1e-12);

}  // namespace dpbf
