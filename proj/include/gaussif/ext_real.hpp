#pragma once

#include <cmath>
#include <ostream>

namespace gaussif {

/// A value of R ∪ {+inf}. The infinite case is an explicit tag, never a NaN
/// and never a floating infinity, so it survives arithmetic-free plumbing
/// (sorting, CSV, JSON) unambiguously.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  constexpr explicit ExtReal(double v) : value_(v) {}

  static constexpr ExtReal plus_infinity() {
    ExtReal r;
    r.infinite_ = true;
    return r;
  }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_finite() const { return !infinite_; }

  /// Finite value; 0 for the infinite sentinel. Check is_finite() first.
  constexpr double value() const { return value_; }

  friend constexpr bool operator==(const ExtReal& l, const ExtReal& r) {
    return l.infinite_ == r.infinite_ && (l.infinite_ || l.value_ == r.value_);
  }

  /// Total order with +inf above every finite value.
  friend constexpr bool operator<(const ExtReal& l, const ExtReal& r) {
    if (l.infinite_) return false;
    if (r.infinite_) return true;
    return l.value_ < r.value_;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExtReal& x) {
    if (x.infinite_) return os << "inf";
    return os << x.value_;
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

}  // namespace gaussif
