// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

namespace cimc {

/// Exact count ratio. A 0/0 ratio is vacuous and reads as 1.
struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 0;

  bool vacuous() const noexcept { return den == 0; }
  double value() const noexcept { return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Ratio& a, const Ratio& b) noexcept {
    const std::int64_t an = a.den == 0 ? 1 : a.num, ad = a.den == 0 ? 1 : a.den;
    const std::int64_t bn = b.den == 0 ? 1 : b.num, bd = b.den == 0 ? 1 : b.den;
    return an * bd == bn * ad;
  }
  friend bool operator<=(const Ratio& a, const Ratio& b) noexcept {
    const std::int64_t an = a.den == 0 ? 1 : a.num, ad = a.den == 0 ? 1 : a.den;
    const std::int64_t bn = b.den == 0 ? 1 : b.num, bd = b.den == 0 ? 1 : b.den;
    return an * bd <= bn * ad;
  }

  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

}  // namespace cimc
