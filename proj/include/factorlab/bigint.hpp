#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace factorlab {

using BigInt = boost::multiprecision::cpp_int;

inline std::string to_string(const BigInt& x) { return x.str(); }

BigInt big_pow(const BigInt& base, unsigned long exponent);
BigInt big_gcd(BigInt a, BigInt b);

}  // namespace factorlab
