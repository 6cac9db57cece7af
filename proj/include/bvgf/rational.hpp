#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace bvgf {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Error with a stable machine-readable code ("E_SCHEMA", "E_JACOBI", ...).
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Canonical "p/q" form, q >= 1, gcd(p,q) = 1. Integers print as "p/1".
inline std::string rat_to_string(const Rat& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

Rat rat_from_string(const std::string& s);

inline int sign_pow(long k) { return (k % 2 == 0) ? 1 : -1; }

}  // namespace bvgf
