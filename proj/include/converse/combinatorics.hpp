#pragma once

// Exact big-integer combinatorics. Bound calculators evaluate counting
// formulas exactly and only then take logarithms, so finite-size results do
// not inherit asymptotic simplifications.

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

namespace converse {

using BigInt = boost::multiprecision::cpp_int;

BigInt big_binomial(std::uint64_t n, std::uint64_t k);
BigInt big_factorial(std::uint64_t n);
BigInt big_pow2(std::uint64_t e);

// Natural log of a positive big integer.
double log_big(const BigInt& x);

double log_binomial(std::uint64_t n, std::uint64_t k);

}  // namespace converse
