// SPDX-License-Identifier: Apache-2.0

#include "dpbf/companion.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dpbf {

namespace {

const char* mode_name(UraMode mode) {
  return mode == UraMode::DpbfBoth ? "dpbf-both" : "spbf-elevation";
}

std::vector<bool> support(const std::vector<cplx>& v) {
  std::vector<bool> s(v.size());
  std::transform(v.begin(), v.end(), s.begin(), [](cplx x) { return x != cplx{}; });
  return s;
}

// Support of the term J conj(u): the reversal of u's support.
std::vector<bool> reversed(std::vector<bool> s) {
  std::reverse(s.begin(), s.end());
  return s;
}

void check_lengths(const UraComposition& c) {
  if (c.u1_a.empty() || c.u1_a.size() != c.u1_b.size()) {
    throw std::invalid_argument("u1_a and u1_b must be nonempty and of equal length");
  }
  if (c.v_alpha.empty() || c.v_alpha.size() != c.v_beta.size()) {
    throw std::invalid_argument("v_alpha and v_beta must be nonempty and of equal length");
  }
}

// Elements where supports (u1 x v1) and (u2 x v2) of an outer-product sum both hold.
std::vector<std::pair<std::size_t, std::size_t>> overlaps(const std::vector<bool>& u1,
                                                         const std::vector<bool>& v1,
                                                         const std::vector<bool>& u2,
                                                         const std::vector<bool>& v2) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t n = 0; n < v1.size(); ++n) {
    for (std::size_t m = 0; m < u1.size(); ++m) {
      if (u1[m] && v1[n] && u2[m] && v2[n]) out.emplace_back(m, n);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<cplx> reverse(std::vector<cplx> v) {
  std::reverse(v.begin(), v.end());
  return v;
}

std::vector<cplx> reverse(const std::vector<cplx>& m, std::size_t rows, std::size_t cols, Axis axis) {
  if (m.size() != rows * cols) throw std::invalid_argument("matrix data does not match shape");
  std::vector<cplx> out(m.size());
  for (std::size_t n = 0; n < cols; ++n) {
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t rr = (axis == Axis::Cols) ? r : rows - 1 - r;
      const std::size_t nn = (axis == Axis::Rows) ? n : cols - 1 - n;
      out[nn * rows + rr] = m[n * rows + r];
    }
  }
  return out;
}

std::vector<cplx> conj(std::vector<cplx> v) {
  for (auto& x : v) x = std::conj(x);
  return v;
}

DualPolWeights companion_ula(const DualPolWeights& w) {
  if (w.kind() != ArrayKind::ULA) throw std::invalid_argument("companion_ula needs ULA weights");
  auto w2_a = reverse(conj(w.b()));
  for (auto& x : w2_a) x = -x;
  return DualPolWeights::ula(std::move(w2_a), reverse(conj(w.a())));
}

DualPolWeights companion_ura(const DualPolWeights& w) {
  if (w.kind() != ArrayKind::URA) throw std::invalid_argument("companion_ura needs URA weights");
  auto w2_a = reverse(conj(w.b()), w.rows(), w.cols(), Axis::Both);
  for (auto& x : w2_a) x = -x;
  auto w2_b = reverse(conj(w.a()), w.rows(), w.cols(), Axis::Both);
  return DualPolWeights::ura(w.rows(), w.cols(), std::move(w2_a), std::move(w2_b));
}

DualPolWeights companion(const DualPolWeights& w) {
  return w.kind() == ArrayKind::ULA ? companion_ula(w) : companion_ura(w);
}

std::string PartitionReport::describe() const {
  std::ostringstream os;
  if (ok) return "partition ok";
  os << "partition violation";
  if (!rows.empty()) {
    os << ": overlapping NZP contributions on rows";
    for (std::size_t r : rows) os << ' ' << r;
    os << " (" << overlap_a.size() << " elements in polarization A, " << overlap_b.size()
       << " in polarization B)";
  }
  for (const auto& issue : mode_issues) os << "; " << issue;
  return os.str();
}

PartitionReport validate_partition(const UraComposition& c) {
  check_lengths(c);
  const auto sa = support(c.u1_a);
  const auto sb = support(c.u1_b);
  const auto s_alpha = support(c.v_alpha);
  const auto s_beta = support(c.v_beta);

  PartitionReport r;
  // Polarization A: u1_a x v_alpha against J conj(u1_b) x v_beta.
  r.overlap_a = overlaps(sa, s_alpha, reversed(sb), s_beta);
  // Polarization B: u1_b x v_alpha against J conj(u1_a) x v_beta.
  r.overlap_b = overlaps(sb, s_alpha, reversed(sa), s_beta);

  std::set<std::size_t> rows;
  for (const auto& [m, n] : r.overlap_a) rows.insert(m);
  for (const auto& [m, n] : r.overlap_b) rows.insert(m);
  r.rows.assign(rows.begin(), rows.end());

  if (c.mode == UraMode::SpbfElevation) {
    if (std::any_of(sb.begin(), sb.end(), [](bool x) { return x; })) {
      r.mode_issues.emplace_back(std::string(mode_name(c.mode)) + " mode requires u1_b to be all zero");
    }
  } else if (sa != sb) {
    r.mode_issues.emplace_back(std::string(mode_name(c.mode)) +
                               " mode requires u1_a and u1_b to share one NZP support");
  }
  r.ok = r.overlap_a.empty() && r.overlap_b.empty() && r.mode_issues.empty();
  return r;
}

PartitionError::PartitionError(PartitionReport report)
    : std::invalid_argument(report.describe()), report_(std::move(report)) {}

DualPolWeights compose_ura(const UraComposition& c, std::vector<std::string>* warnings) {
  auto report = validate_partition(c);
  if (!report.ok) throw PartitionError(std::move(report));

  const std::size_t rows = c.u1_a.size();
  const std::size_t cols = c.v_alpha.size();
  const auto u2_a = reverse(conj(c.u1_b));  // sign applied below
  const auto u2_b = reverse(conj(c.u1_a));

  auto w = DualPolWeights::zeros(ArrayKind::URA, rows, cols);
  for (std::size_t n = 0; n < cols; ++n) {
    for (std::size_t m = 0; m < rows; ++m) {
      w.a(m, n) = c.u1_a[m] * c.v_alpha[n] - u2_a[m] * c.v_beta[n];
      w.b(m, n) = c.u1_b[m] * c.v_alpha[n] + u2_b[m] * c.v_beta[n];
    }
  }
  if (warnings && !has_uniform_modulus(w, 1e-9)) {
    warnings->emplace_back("composed URA weights carry an amplitude taper");
  }
  return w;
}

UraComposition companion_factors(const UraComposition& c) {
  UraComposition out = c;
  out.v_alpha = reverse(conj(c.v_beta));
  for (auto& x : out.v_alpha) x = -x;
  out.v_beta = reverse(conj(c.v_alpha));
  return out;
}

std::vector<bool> default_active_rows(std::size_t m) {
  if (m == 0 || m % 2 != 0) {
    throw std::invalid_argument("dpbf-both needs an even, nonzero row count (got " +
                                std::to_string(m) + ")");
  }
  std::vector<bool> active(m, false);
  std::fill(active.begin(), active.begin() + static_cast<std::ptrdiff_t>(m / 2), true);
  return active;
}

bool has_uniform_modulus(const DualPolWeights& w, double tol) {
  double lo = 0.0;
  double hi = 0.0;
  bool any = false;
  for (const auto* pol : {&w.a(), &w.b()}) {
    for (const cplx& v : *pol) {
      if (v == cplx{}) continue;
      const double mag = std::abs(v);
      lo = any ? std::min(lo, mag) : mag;
      hi = any ? std::max(hi, mag) : mag;
      any = true;
    }
  }
  return !any || (hi - lo) <= tol * hi;
}

}  // namespace dpbf
