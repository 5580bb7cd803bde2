// Copyright 2026 The HSBM Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Double-double arithmetic: an unevaluated sum hi + lo of two doubles with
// |lo| <= ulp(hi) / 2, giving about 32 significant decimal digits. Only the
// operations needed by the aggregation tiers are provided.

#ifndef HSBM_DOUBLE_DOUBLE_H_
#define HSBM_DOUBLE_DOUBLE_H_

#include <cmath>

namespace hsbm {

class DoubleDouble {
 public:
  constexpr DoubleDouble() = default;
  constexpr DoubleDouble(double v) : hi_(v), lo_(0.0) {}  // NOLINT

  static constexpr DoubleDouble FromParts(double hi, double lo) {
    DoubleDouble r;
    r.hi_ = hi;
    r.lo_ = lo;
    return r;
  }

  double hi() const { return hi_; }
  double lo() const { return lo_; }
  explicit operator double() const { return hi_ + lo_; }

  friend DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
    double s, e;
    TwoSum(a.hi_, b.hi_, s, e);
    double t, f;
    TwoSum(a.lo_, b.lo_, t, f);
    e += t;
    QuickTwoSum(s, e, s, e);
    e += f;
    QuickTwoSum(s, e, s, e);
    return FromParts(s, e);
  }

  friend DoubleDouble operator-(DoubleDouble a) {
    return FromParts(-a.hi_, -a.lo_);
  }
  friend DoubleDouble operator-(DoubleDouble a, DoubleDouble b) {
    return a + (-b);
  }

  friend DoubleDouble operator*(DoubleDouble a, DoubleDouble b) {
    const double p = a.hi_ * b.hi_;
    double e = std::fma(a.hi_, b.hi_, -p);
    e += a.hi_ * b.lo_ + a.lo_ * b.hi_;
    double s;
    QuickTwoSum(p, e, s, e);
    return FromParts(s, e);
  }

  friend DoubleDouble operator/(DoubleDouble a, DoubleDouble b) {
    // Two Newton-style correction steps on the quotient.
    const double q1 = a.hi_ / b.hi_;
    DoubleDouble r = a - b * DoubleDouble(q1);
    const double q2 = r.hi_ / b.hi_;
    r = r - b * DoubleDouble(q2);
    const double q3 = r.hi_ / b.hi_;
    DoubleDouble q = FromParts(q1, 0.0) + DoubleDouble(q2);
    return q + DoubleDouble(q3);
  }

  DoubleDouble& operator+=(DoubleDouble o) { return *this = *this + o; }
  DoubleDouble& operator-=(DoubleDouble o) { return *this = *this - o; }
  DoubleDouble& operator*=(DoubleDouble o) { return *this = *this * o; }
  DoubleDouble& operator/=(DoubleDouble o) { return *this = *this / o; }

  friend bool operator==(DoubleDouble a, DoubleDouble b) {
    return a.hi_ == b.hi_ && a.lo_ == b.lo_;
  }
  friend bool operator<(DoubleDouble a, DoubleDouble b) {
    return a.hi_ < b.hi_ || (a.hi_ == b.hi_ && a.lo_ < b.lo_);
  }
  friend bool operator>(DoubleDouble a, DoubleDouble b) { return b < a; }

  friend DoubleDouble sqrt(DoubleDouble a) {
    if (a.hi_ <= 0.0) return DoubleDouble(0.0);
    const double x = std::sqrt(a.hi_);
    // One Newton step: x + (a - x^2) / (2x).
    const DoubleDouble xx = DoubleDouble(x) * DoubleDouble(x);
    return DoubleDouble(x) + DoubleDouble((a - xx).hi_ / (2.0 * x));
  }
  friend DoubleDouble abs(DoubleDouble a) { return a.hi_ < 0.0 ? -a : a; }

 private:
  static void TwoSum(double a, double b, double& s, double& e) {
    s = a + b;
    const double bb = s - a;
    e = (a - (s - bb)) + (b - bb);
  }
  static void QuickTwoSum(double a, double b, double& s, double& e) {
    s = a + b;
    e = b - (s - a);
  }

  double hi_ = 0.0;
  double lo_ = 0.0;
};

}  // namespace hsbm

#endif  // HSBM_DOUBLE_DOUBLE_H_
