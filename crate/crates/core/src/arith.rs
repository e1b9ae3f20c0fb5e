//! Small number-theory helpers on machine integers.

use num_integer::Integer;

/// Prime factorization as `(p, exponent)` pairs in ascending order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = vec![];
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// Primes `≤ n` by sieve.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    let n = n as usize;
    if n < 2 {
        return vec![];
    }
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            for j in (i * i..=n).step_by(i) {
                sieve[j] = false;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect()
}

pub fn coprime(a: u64, b: u64) -> bool {
    a.gcd(&b) == 1
}

/// Whether `n` is a power (possibly the zeroth) of the prime `p`.
pub fn is_power_of(n: u64, p: u64) -> bool {
    let mut n = n;
    while n > 1 && n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// Largest divisor of `n` that is a power of `p`.
pub fn prime_power_part(n: u64, p: u64) -> u64 {
    let mut n = n;
    let mut part = 1;
    while n.is_multiple_of(p) {
        n /= p;
        part *= p;
    }
    part
}

/// All unordered coprime pairs `2 ≤ m < n` with `m·n ≤ max`.
pub fn coprime_pairs(max: u64) -> Vec<(u64, u64)> {
    let mut out = vec![];
    for m in 2..=max {
        if m * (m + 1) > max {
            break;
        }
        for n in m + 1..=max / m {
            if coprime(m, n) {
                out.push((m, n));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorizations() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(65), vec![(5, 1), (13, 1)]);
        assert_eq!(factorize(1000), vec![(2, 3), (5, 3)]);
        assert_eq!(factorize(97), vec![(97, 1)]);
        assert!(is_prime(13) && !is_prime(1) && !is_prime(25));
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn prime_powers() {
        assert!(is_power_of(1, 5) && is_power_of(25, 5) && !is_power_of(10, 5));
        assert_eq!(prime_power_part(75, 5), 25);
        assert_eq!(prime_power_part(75, 2), 1);
    }

    #[test]
    fn pairs() {
        assert_eq!(coprime_pairs(12), vec![(2, 3), (2, 5), (3, 4)]);
        assert!(coprime_pairs(5).is_empty());
    }
}
