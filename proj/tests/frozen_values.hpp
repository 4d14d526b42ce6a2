// SPDX-License-Identifier: Apache-2.0
//
// Values computed by tests/oracles/oracle.py (independent numpy brute force)
// and frozen here. Setup unless noted: 4-element ULA, 0.5 wavelength spacing,
// 90 degree Gaussian element, azimuth cut -90..90 degrees in 1 degree steps,
// 65 degree Gaussian target, 10 dB cost window, -60 dB floor.

#pragma once

namespace frozen {

// Peak of the 65 degree Gaussian after scaling its trapezoidal integral to 2 pi.
inline constexpr double kGaussian65PeakAfterNorm = 5.208837167731759;

// Reference SPBF weights [1, 1, -0.48, 0.24].
inline constexpr double kSpbfWeightingLossDb = 2.426039712069758;
inline constexpr double kSpbfCost1 = 0.6420292255932816;
inline constexpr double kSpbfHpbwDeg = 80.42187681438546;  // exact crossing, 1e-4 degree scan + bisection

// Phases [2.32, 2.06, 0.00, 0.97] on A, conjugates on B.
inline constexpr double kDpbfReferenceCost1 = 0.053188974011168594;
inline constexpr double kDpbfReferenceHpbwDeg = 64.0606733897983;

// Uniform 4-element array.
inline constexpr double kUniformHpbwIsotropicDeg = 26.322952034675886;
inline constexpr double kUniformHpbwElem90Deg = 25.324859224495384;

// Companion of the reference DPBF beam with w2_a[0] perturbed by 1e-3.
inline constexpr double kPerturbedParallelityRel = 0.00025860332072191934;

}  // namespace frozen
