#include "converse/combinatorics.hpp"

#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace converse {

BigInt big_binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;  // exact at every step
    }
    return result;
}

BigInt big_factorial(std::uint64_t n) {
    BigInt result = 1;
    for (std::uint64_t i = 2; i <= n; ++i) result *= i;
    return result;
}

BigInt big_pow2(std::uint64_t e) { return BigInt(1) << e; }

double log_big(const BigInt& x) {
    if (x <= 0) throw std::invalid_argument("log_big: argument must be positive");
    using Float = boost::multiprecision::cpp_bin_float_50;
    return static_cast<double>(log(Float(x)));
}

double log_binomial(std::uint64_t n, std::uint64_t k) { return log_big(big_binomial(n, k)); }

}  // namespace converse
