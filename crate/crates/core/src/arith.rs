//! Elementary integer arithmetic used throughout: factorization, Euler's
//! totient, Möbius function, multiplicative orders and primitive roots.

use num_integer::Integer;

/// Prime factorization as `(p, e)` pairs in increasing order of `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
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

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// First `k` primes by trial division.
pub fn first_primes(k: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(k);
    let mut c = 2u64;
    while primes.len() < k {
        if primes.iter().take_while(|&&p| p * p <= c).all(|&p| c % p != 0) {
            primes.push(c);
        }
        c += 1;
    }
    primes
}

pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u128;
    let mut b = (base % m) as u128;
    let m128 = m as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    result as u64
}

/// Multiplicative order of `a` modulo `m`; `a` must be coprime to `m`.
pub fn mult_order(a: u64, m: u64) -> u64 {
    debug_assert_eq!(a.gcd(&m), 1);
    if m == 1 {
        return 1;
    }
    let phi = euler_phi(m);
    let mut ord = phi;
    for (p, _) in factorize(phi) {
        while ord % p == 0 && mod_pow(a, ord / p, m) == 1 {
            ord /= p;
        }
    }
    ord
}

/// Smallest primitive root modulo `m`, when the unit group is cyclic.
pub fn primitive_root(m: u64) -> Option<u64> {
    if m <= 2 {
        return Some(1);
    }
    let phi = euler_phi(m);
    (2..m).find(|&g| g.gcd(&m) == 1 && mult_order(g, m) == phi)
}

/// Units of Z/nZ in increasing order.
pub fn units_mod(n: u64) -> Vec<u64> {
    (1..n.max(2)).filter(|a| a.gcd(&n) == 1).collect()
}

/// Ramanujan sum c_n(k) = Σ_{a ∈ (Z/n)^×} e^{2πi a k / n}, i.e. the trace of
/// ζ_n^k from Q(ζ_n) to Q.
pub fn ramanujan_sum(n: u64, k: i64) -> i64 {
    let k = k.rem_euclid(n as i64) as u64;
    let g = if k == 0 { n } else { k.gcd(&n) };
    let m = n / g;
    mobius(m) * (euler_phi(n) / euler_phi(m)) as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totient_and_factorization() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(16), 8);
        assert_eq!(euler_phi(84), 24);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
    }

    #[test]
    fn orders_and_roots() {
        assert_eq!(mult_order(2, 7), 3);
        assert_eq!(mult_order(3, 16), 4);
        assert_eq!(primitive_root(25), Some(2));
        assert_eq!(primitive_root(27), Some(2));
    }

    #[test]
    fn ramanujan_sum_matches_direct_trace() {
        for n in [3u64, 4, 5, 8, 12, 15] {
            for k in 0..(2 * n as i64) {
                let direct: f64 = units_mod(n)
                    .iter()
                    .map(|&a| (2.0 * std::f64::consts::PI * (a as f64) * (k as f64) / n as f64).cos())
                    .sum();
                assert!((direct - ramanujan_sum(n, k) as f64).abs() < 1e-9, "n={n} k={k}");
            }
        }
    }
}
