// Copyright 2026 The pmech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/// Finite-alphabet probability tables and the Shannon measures computed on
/// them. Everything here is a value type; operations are pure.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "pmech/errors.hpp"

namespace pmech {

/// Information units and validation tolerance shared by every module.
struct InfoConfig {
  double log_base = 2.0;
  double tau_norm = 1e-9;
};

inline void check_log_base(double base) {
  if (!std::isfinite(base) || !(base > 0.0) || base == 1.0) {
    throw ValidationError("log base must be positive, finite and != 1");
  }
}

/// Validates nonnegativity and normalization within `tol`.
inline void validate_pmf(std::span<const double> p, double tol, const char* what = "pmf") {
  if (p.empty()) throw ValidationError(std::string(what) + ": empty");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p[i]) || p[i] < 0.0) {
      std::ostringstream os;
      os << what << ": entry " << i << " = " << p[i] << " is not a probability";
      throw ValidationError(os.str());
    }
    sum += p[i];
  }
  if (std::abs(sum - 1.0) > tol) {
    std::ostringstream os;
    os << what << ": sums to " << sum << " (tolerance " << tol << ")";
    throw ValidationError(os.str());
  }
}

namespace detail {

// 0 log 0 = 0. No validation; callers pass tables they built themselves.
inline double entropy_nats(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

}  // namespace detail

/// Shannon entropy of a pmf in units of `cfg.log_base`.
inline double entropy(std::span<const double> p, const InfoConfig& cfg = {}) {
  check_log_base(cfg.log_base);
  validate_pmf(p, cfg.tau_norm);
  return std::max(0.0, detail::entropy_nats(p) / std::log(cfg.log_base));
}

inline double entropy(std::initializer_list<double> p, const InfoConfig& cfg = {}) {
  return entropy(std::span<const double>(p.begin(), p.size()), cfg);
}

/// Joint law of (X, Y) as an |X| x |Y| table, row index x, column index y.
class JointPmf {
 public:
  JointPmf(std::size_t x_size, std::size_t y_size, std::vector<double> p,
           double tau_norm = 1e-9)
      : x_size_(x_size), y_size_(y_size), p_(std::move(p)) {
    if (x_size_ == 0 || y_size_ == 0) throw ValidationError("JointPmf: empty alphabet");
    if (p_.size() != x_size_ * y_size_) {
      throw ValidationError("JointPmf: table size does not match x_size * y_size");
    }
    validate_pmf(p_, tau_norm, "JointPmf");
    px_.assign(x_size_, 0.0);
    py_.assign(y_size_, 0.0);
    for (std::size_t x = 0; x < x_size_; ++x) {
      for (std::size_t y = 0; y < y_size_; ++y) {
        px_[x] += (*this)(x, y);
        py_[y] += (*this)(x, y);
      }
    }
  }

  static JointPmf from_rows(const std::vector<std::vector<double>>& rows,
                            double tau_norm = 1e-9) {
    if (rows.empty()) throw ValidationError("JointPmf: no rows");
    const std::size_t ny = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * ny);
    for (const auto& r : rows) {
      if (r.size() != ny) throw ValidationError("JointPmf: ragged rows");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return JointPmf(rows.size(), ny, std::move(flat), tau_norm);
  }

  /// Product law P_X (x) P_Y.
  static JointPmf product(std::span<const double> px, std::span<const double> py) {
    std::vector<double> flat;
    flat.reserve(px.size() * py.size());
    for (double a : px)
      for (double b : py) flat.push_back(a * b);
    return JointPmf(px.size(), py.size(), std::move(flat));
  }

  std::size_t x_size() const { return x_size_; }
  std::size_t y_size() const { return y_size_; }
  double operator()(std::size_t x, std::size_t y) const { return p_[x * y_size_ + y]; }
  std::span<const double> data() const { return p_; }
  std::span<const double> row(std::size_t x) const {
    return std::span<const double>(p_).subspan(x * y_size_, y_size_);
  }
  const std::vector<double>& px() const { return px_; }
  const std::vector<double>& py() const { return py_; }

  /// P_{Y|X}(.|x); defined only when P_X(x) > 0.
  std::vector<double> y_given_x(std::size_t x) const {
    if (!(px_.at(x) > 0.0)) throw ValidationError("P_{Y|X}(.|x) undefined: P_X(x) = 0");
    std::vector<double> out(y_size_);
    for (std::size_t y = 0; y < y_size_; ++y) out[y] = (*this)(x, y) / px_[x];
    return out;
  }

  /// P_{X|Y}(.|y); defined only when P_Y(y) > 0.
  std::vector<double> x_given_y(std::size_t y) const {
    if (!(py_.at(y) > 0.0)) throw ValidationError("P_{X|Y}(.|y) undefined: P_Y(y) = 0");
    std::vector<double> out(x_size_);
    for (std::size_t x = 0; x < x_size_; ++x) out[x] = (*this)(x, y) / py_[y];
    return out;
  }

  friend bool operator==(const JointPmf& a, const JointPmf& b) {
    return a.x_size_ == b.x_size_ && a.y_size_ == b.y_size_ && a.p_ == b.p_;
  }

 private:
  std::size_t x_size_;
  std::size_t y_size_;
  std::vector<double> p_;
  std::vector<double> px_;
  std::vector<double> py_;
};

/// Bit masks selecting axes of a TripletPmf. For a mechanism the axes are
/// (X, Y, U); for a separated source they are (X1, X2, Y).
inline constexpr unsigned kAxis0 = 1u;
inline constexpr unsigned kAxis1 = 2u;
inline constexpr unsigned kAxis2 = 4u;
inline constexpr unsigned kX = kAxis0;
inline constexpr unsigned kY = kAxis1;
inline constexpr unsigned kU = kAxis2;

/// Joint law over three finite variables, stored row-major (a, b, c).
class TripletPmf {
 public:
  TripletPmf(std::array<std::size_t, 3> dims, std::vector<double> p, double tau_norm = 1e-9)
      : dims_(dims), p_(std::move(p)) {
    if (dims_[0] == 0 || dims_[1] == 0 || dims_[2] == 0) {
      throw ValidationError("TripletPmf: empty alphabet");
    }
    if (p_.size() != dims_[0] * dims_[1] * dims_[2]) {
      throw ValidationError("TripletPmf: table size does not match dimensions");
    }
    validate_pmf(p_, tau_norm, "TripletPmf");
  }

  const std::array<std::size_t, 3>& dims() const { return dims_; }
  std::size_t size(std::size_t axis) const { return dims_.at(axis); }
  double operator()(std::size_t a, std::size_t b, std::size_t c) const {
    return p_[(a * dims_[1] + b) * dims_[2] + c];
  }
  std::span<const double> data() const { return p_; }

  /// Marginal table over the axes in `mask`, laid out row-major in axis order.
  std::vector<double> marginal(unsigned mask) const {
    std::array<std::size_t, 3> keep{};
    std::size_t total = 1;
    for (std::size_t k = 0; k < 3; ++k) {
      keep[k] = (mask >> k) & 1u ? dims_[k] : 1;
      total *= keep[k];
    }
    std::vector<double> out(total, 0.0);
    const bool k0 = mask & kAxis0, k1 = mask & kAxis1, k2 = mask & kAxis2;
    std::size_t i = 0;
    for (std::size_t a = 0; a < dims_[0]; ++a)
      for (std::size_t b = 0; b < dims_[1]; ++b)
        for (std::size_t c = 0; c < dims_[2]; ++c, ++i) {
          const double v = p_[i];
          if (v == 0.0) continue;
          const std::size_t ia = k0 ? a : 0, ib = k1 ? b : 0, ic = k2 ? c : 0;
          out[(ia * keep[1] + ib) * keep[2] + ic] += v;
        }
    return out;
  }

  /// The (axis0, axis1) marginal as a JointPmf.
  JointPmf pair_marginal(double tau_norm = 1e-9) const {
    return JointPmf(dims_[0], dims_[1], marginal(kAxis0 | kAxis1), tau_norm);
  }

 private:
  std::array<std::size_t, 3> dims_;
  std::vector<double> p_;
};

/// Entropy of the marginal over `mask` (mask 0 gives 0).
inline double marginal_entropy(const TripletPmf& t, unsigned mask, const InfoConfig& cfg = {}) {
  if (mask == 0) return 0.0;
  return detail::entropy_nats(t.marginal(mask)) / std::log(cfg.log_base);
}

/// H(A | C) for disjoint axis masks.
inline double conditional_entropy(const TripletPmf& t, unsigned target, unsigned given,
                                  const InfoConfig& cfg = {}) {
  check_log_base(cfg.log_base);
  const double h = marginal_entropy(t, target | given, cfg) - marginal_entropy(t, given, cfg);
  return std::max(0.0, h);
}

/// I(A; B | C) = sum_c P(c) I(A; B | C = c), clamped at zero.
inline double conditional_mutual_information(const TripletPmf& t, unsigned a, unsigned b,
                                             unsigned given, const InfoConfig& cfg = {}) {
  check_log_base(cfg.log_base);
  if ((a & b) || (a & given) || (b & given) || a == 0 || b == 0) {
    throw ValidationError("conditional_mutual_information: axis sets must be disjoint and non-empty");
  }
  const double v = marginal_entropy(t, a | given, cfg) + marginal_entropy(t, b | given, cfg) -
                   marginal_entropy(t, a | b | given, cfg) - marginal_entropy(t, given, cfg);
  return std::max(0.0, v);
}

inline double mutual_information(const TripletPmf& t, unsigned a, unsigned b,
                                 const InfoConfig& cfg = {}) {
  return conditional_mutual_information(t, a, b, 0u, cfg);
}

inline double entropy_x(const JointPmf& j, const InfoConfig& cfg = {}) {
  return entropy(j.px(), cfg);
}
inline double entropy_y(const JointPmf& j, const InfoConfig& cfg = {}) {
  return entropy(j.py(), cfg);
}
inline double joint_entropy(const JointPmf& j, const InfoConfig& cfg = {}) {
  check_log_base(cfg.log_base);
  return detail::entropy_nats(j.data()) / std::log(cfg.log_base);
}
inline double entropy_y_given_x(const JointPmf& j, const InfoConfig& cfg = {}) {
  return std::max(0.0, joint_entropy(j, cfg) - entropy_x(j, cfg));
}
inline double entropy_x_given_y(const JointPmf& j, const InfoConfig& cfg = {}) {
  return std::max(0.0, joint_entropy(j, cfg) - entropy_y(j, cfg));
}

/// I(X;Y) = H(X) + H(Y) - H(X,Y), clamped at zero.
inline double mutual_information(const JointPmf& j, const InfoConfig& cfg = {}) {
  return std::max(0.0, entropy_x(j, cfg) + entropy_y(j, cfg) - joint_entropy(j, cfg));
}

/// The additive term log(I(X;Y) + 1) + 4 from the strong functional
/// representation bound, in the configured base.
inline double sfrl_constant(double mutual_info, const InfoConfig& cfg = {}) {
  return std::log(mutual_info + 1.0) / std::log(cfg.log_base) + 4.0;
}

}  // namespace pmech
