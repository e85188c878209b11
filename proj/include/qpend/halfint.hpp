#pragma once

#include <cstdlib>
#include <ostream>
#include <string>

#include "qpend/errors.hpp"

namespace qpend {

// Half-integer quantum number stored as its doubled value, so that
// M = 1/2 is the exact integer 1 and never a float key.  All of J, K, M
// and the wavefunction exponents go through this type.
struct HalfInt {
  int twice = 0;

  constexpr HalfInt() = default;
  constexpr explicit HalfInt(int twice_value) : twice(twice_value) {}

  static constexpr HalfInt from_int(int n) { return HalfInt(2 * n); }

  constexpr bool is_integer() const { return twice % 2 == 0; }
  constexpr double value() const { return 0.5 * twice; }
  // Integral part for exact integers; caller must check is_integer().
  constexpr int as_int() const { return twice / 2; }

  friend constexpr HalfInt operator+(HalfInt a, HalfInt b) {
    return HalfInt(a.twice + b.twice);
  }
  friend constexpr HalfInt operator-(HalfInt a, HalfInt b) {
    return HalfInt(a.twice - b.twice);
  }
  friend constexpr HalfInt operator-(HalfInt a) { return HalfInt(-a.twice); }
  friend constexpr HalfInt operator+(HalfInt a, int n) {
    return HalfInt(a.twice + 2 * n);
  }
  friend constexpr HalfInt operator-(HalfInt a, int n) {
    return HalfInt(a.twice - 2 * n);
  }
  friend constexpr bool operator==(HalfInt a, HalfInt b) {
    return a.twice == b.twice;
  }
  friend constexpr bool operator!=(HalfInt a, HalfInt b) {
    return a.twice != b.twice;
  }
  friend constexpr bool operator<(HalfInt a, HalfInt b) {
    return a.twice < b.twice;
  }
  friend constexpr bool operator<=(HalfInt a, HalfInt b) {
    return a.twice <= b.twice;
  }
  friend constexpr bool operator>(HalfInt a, HalfInt b) {
    return a.twice > b.twice;
  }
  friend constexpr bool operator>=(HalfInt a, HalfInt b) {
    return a.twice >= b.twice;
  }
};

inline constexpr HalfInt abs(HalfInt a) {
  return a.twice < 0 ? HalfInt(-a.twice) : a;
}

inline constexpr HalfInt half_int(int twice_value) {
  return HalfInt(twice_value);
}

// Accepts "2", "-1", "1/2", "-3/2", "0.5", "-2.5".
inline HalfInt parse_half_int(const std::string& text) {
  const std::string what = "malformed half-integer: '" + text + "'";
  if (text.empty()) throw domain_error(what);
  std::size_t slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      int num = std::stoi(text.substr(0, slash));
      int den = std::stoi(text.substr(slash + 1));
      if (den == 1) return HalfInt(2 * num);
      if (den == 2) return HalfInt(num);
      throw domain_error(what);
    }
    std::size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size()) throw domain_error(what);
    double tw = 2.0 * v;
    int twi = static_cast<int>(tw < 0 ? tw - 0.5 : tw + 0.5);
    if (tw != static_cast<double>(twi)) throw domain_error(what);
    return HalfInt(twi);
  } catch (const domain_error&) {
    throw;
  } catch (const std::exception&) {
    throw domain_error(what);
  }
}

inline std::string to_string(HalfInt a) {
  if (a.is_integer()) return std::to_string(a.as_int());
  return std::to_string(a.twice) + "/2";
}

inline std::ostream& operator<<(std::ostream& os, HalfInt a) {
  return os << to_string(a);
}

}  // namespace qpend
