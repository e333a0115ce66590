#pragma once
#include <gmpxx.h>
#include <vector>

namespace gengap::primes {

bool is_prime(long n);
std::vector<long> factor_primes(long n);           // distinct primes of n >= 1
std::vector<long> factor_primes(const mpz_class&); // trial division; small inputs only
long next_prime_after(long n);
int valuation(long n, long p);
long power_of(long p, int e);

// first prime not in the given sorted-or-not list
long smallest_prime_outside(const std::vector<long>& avoid);

} // namespace gengap::primes
