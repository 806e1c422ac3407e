//! Small-integer number theory: primality, factorization, binomials mod p.

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

// Brent's variant of Pollard rho; `n` must be composite and odd.
fn rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization as sorted `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    if n <= 1 {
        return Vec::new();
    }
    for p in 2u64..1000 {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                primes.push(p);
                n /= p;
            }
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            primes.push(m);
            continue;
        }
        let d = rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Binomial coefficient reduced mod `p` via Lucas' theorem (`p = 0` gives the exact value when it fits).
pub fn binomial_mod(n: u64, k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    if p == 0 {
        let k = k.min(n - k);
        let mut acc: u128 = 1;
        for i in 0..k {
            acc = acc * (n - i) as u128 / (i + 1) as u128;
        }
        return acc as u64;
    }
    let (mut n, mut k) = (n, k);
    let mut acc = 1u64;
    while n > 0 || k > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return 0;
        }
        acc = mul_mod(acc, binomial_mod(ni, ki, 0) % p, p);
        n /= p;
        k /= p;
    }
    acc
}

/// Returns `(e, l)` with `n = p^e * l` and `p ∤ l`.
pub fn split_prime_power(mut n: u64, p: u64) -> (u32, u64) {
    let mut e = 0;
    while n.is_multiple_of(p) && n > 0 {
        n /= p;
        e += 1;
    }
    (e, n)
}

/// If `q` is a power of the prime `p`, returns the exponent.
pub fn prime_power_exponent(q: u64, p: u64) -> Option<u32> {
    if p < 2 || q < 1 {
        return None;
    }
    let (e, rest) = split_prime_power(q, p);
    (rest == 1 && e >= 1).then_some(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_and_large() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            small,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(3_215_031_751));
        assert!(is_prime(18_446_744_073_709_551_557));
    }

    #[test]
    fn factorization_roundtrip() {
        for n in [
            1u64,
            2,
            80,
            6560,
            65535,
            1 << 40,
            600_851_475_143,
            999_999_000_001,
        ] {
            let f = factorize(n);
            let back = f.iter().fold(1u64, |acc, &(p, e)| acc * p.pow(e));
            assert_eq!(back, n);
            assert!(f.iter().all(|&(p, _)| is_prime(p)));
        }
    }

    #[test]
    fn binomials_mod_p() {
        assert_eq!(binomial_mod(4, 2, 0), 6);
        assert_eq!(binomial_mod(4, 2, 3), 0);
        assert_eq!(binomial_mod(3, 1, 3), 0);
        assert_eq!(binomial_mod(4, 1, 3), 1);
        assert_eq!(split_prime_power(12, 2), (2, 3));
        assert_eq!(prime_power_exponent(81, 3), Some(4));
        assert_eq!(prime_power_exponent(12, 2), None);
        assert_eq!(totient(12), 4);
    }
}
