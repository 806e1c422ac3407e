//! Root finding over `Q(zeta_N)` by reduction modulo a split prime,
//! Hensel lifting, and exact verification.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::primes::is_prime;
use super::{roots_in_field, FieldDesc, Scalar, UniPoly};

const MAX_COMBINATIONS: usize = 1 << 16;
const MAX_PRIME_TRIALS: usize = 200;

/// Distinct roots of a squarefree `f` over a cyclotomic field.
pub(super) fn distinct_roots(f: &UniPoly) -> Vec<Scalar> {
    let field = f.field().clone();
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![-&f.coeffs()[0] * &f.coeffs()[1].inv().unwrap()];
    }
    let mut out = Vec::new();
    let mut f = f.clone();
    if f.coeffs()[0].is_zero() {
        out.push(field.zero());
        f = f.exact_div(&UniPoly::t(&field)).unwrap();
        if f.degree() == Some(1) || f.degree() == Some(0) {
            out.extend(distinct_roots(&f));
            return out;
        }
    }
    out.extend(nonzero_roots(&f));
    out
}

fn denominator_lcm(s: &Scalar) -> BigInt {
    s.cyc_coeffs()
        .unwrap()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

fn coords(s: &Scalar, phi: usize) -> Vec<BigInt> {
    let c = s.cyc_coeffs().unwrap();
    (0..phi)
        .map(|j| {
            c.get(j)
                .map(|x| x.to_integer())
                .unwrap_or_else(BigInt::zero)
        })
        .collect()
}

fn nonzero_roots(f: &UniPoly) -> Vec<Scalar> {
    let field = f.field().clone();
    let index = field.cyclotomic_index().unwrap();
    let phi = field.extension_degree();
    let n = f.degree().unwrap();

    // Clear denominators, then pass to the monic g(t) = a^(n-1) f(t/a), whose
    // roots b = a*r are algebraic integers and so have integer coordinates.
    let den = f
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(&denominator_lcm(c)));
    let den = field.from_bigint(&den);
    let fi: Vec<Scalar> = f.coeffs().iter().map(|c| c * &den).collect();
    let a = fi[n].clone();
    let mut g = Vec::with_capacity(n + 1);
    let mut apow = field.one();
    for i in (0..n).rev() {
        g.push((i, &fi[i] * &apow));
        apow = &apow * &a;
    }
    g.reverse();
    let mut gc: Vec<Vec<BigInt>> = g.iter().map(|(_, c)| coords(c, phi)).collect();
    gc.push({
        let mut one = vec![BigInt::zero(); phi];
        one[0] = BigInt::one();
        one
    });

    let max_l1 = gc
        .iter()
        .map(|c| c.iter().fold(BigInt::zero(), |acc, x| acc + x.abs()))
        .max()
        .unwrap();
    let bound_bits = (max_l1 + BigInt::one()).bits() as usize + phi + 70;

    let Some(setup) = pick_prime(index, phi, &gc) else {
        return Vec::new();
    };
    let ell = BigInt::from(setup.ell);
    let k = bound_bits
        .div_ceil(63 - setup.ell.leading_zeros() as usize)
        .max(1);
    let m = ell.pow(k as u32);

    let phi_n: Vec<BigInt> = super::cyclotomic_polynomial(index);
    let omega = hensel_lift(&phi_n, &BigInt::from(setup.omega), &m, k);
    let units: Vec<u64> = (1..=index.max(1))
        .filter(|s| s.gcd(&index) == 1)
        .take(phi)
        .collect();

    let mut lifted: Vec<Vec<BigInt>> = Vec::new();
    for (si, s) in units.iter().enumerate() {
        let w = omega.modpow(&BigInt::from(*s), &m);
        let h: Vec<BigInt> = gc.iter().map(|c| embed(c, &w, &m)).collect();
        let roots: Vec<BigInt> = setup.roots[si]
            .iter()
            .map(|r| hensel_lift(&h, &BigInt::from(*r), &m, k))
            .collect();
        lifted.push(roots);
    }

    // Inverse Vandermonde for (omega^(s j)) modulo m.
    let vander: Vec<Vec<BigInt>> = units
        .iter()
        .map(|s| {
            let w = omega.modpow(&BigInt::from(*s), &m);
            (0..phi).map(|j| w.modpow(&BigInt::from(j), &m)).collect()
        })
        .collect();
    let Some(vinv) = invert_mod(&vander, &m) else {
        return Vec::new();
    };

    let total: usize = lifted.iter().map(|r| r.len()).product();
    let mut found: Vec<Scalar> = Vec::new();
    let mut idx = vec![0usize; phi];
    let g_poly = UniPoly::new(
        g.iter()
            .map(|(_, c)| c.clone())
            .chain([field.one()])
            .collect(),
        &field,
    );
    let half = &m >> 1;
    for _ in 0..total.min(MAX_COMBINATIONS) {
        let vals: Vec<&BigInt> = (0..phi).map(|s| &lifted[s][idx[s]]).collect();
        let x: Vec<BigRational> = vinv
            .iter()
            .map(|row| {
                let v = row
                    .iter()
                    .zip(&vals)
                    .fold(BigInt::zero(), |acc, (r, v)| acc + r * *v)
                    .mod_floor(&m);
                let v = if v > half { v - &m } else { v };
                BigRational::from_integer(v)
            })
            .collect();
        let b = Scalar::from_cyc_coeffs(&field, x);
        if g_poly.eval(&b).is_zero() {
            let r = &b * &a.inv().unwrap();
            if !found.contains(&r) {
                found.push(r);
            }
            if found.len() == n {
                break;
            }
        }
        // advance the mixed-radix counter
        for s in 0..phi {
            idx[s] += 1;
            if idx[s] < lifted[s].len() {
                break;
            }
            idx[s] = 0;
        }
    }
    found
}

struct PrimeSetup {
    ell: u64,
    omega: u64,
    /// Roots mod ell of each embedded polynomial, one list per embedding.
    roots: Vec<Vec<u64>>,
}

fn pick_prime(index: u64, phi: usize, gc: &[Vec<BigInt>]) -> Option<PrimeSetup> {
    let start = (1u64 << 20).div_ceil(index) * index + 1;
    let mut ell = start;
    let mut trials = 0;
    while trials < MAX_PRIME_TRIALS {
        if is_prime(ell) {
            trials += 1;
            if let Some(setup) = try_prime(ell, index, phi, gc) {
                return Some(setup);
            }
        }
        ell += index;
    }
    None
}

fn try_prime(ell: u64, index: u64, phi: usize, gc: &[Vec<BigInt>]) -> Option<PrimeSetup> {
    let fl = FieldDesc::finite(ell, 1, 0).ok()?;
    let omega = fl.primitive_root_of_unity(index).ok()?;
    let units: Vec<u64> = (1..=index.max(1))
        .filter(|s| s.gcd(&index) == 1)
        .take(phi)
        .collect();
    let mut roots = Vec::new();
    let m = BigInt::from(ell);
    for s in &units {
        let w = omega.pow(*s);
        let w_int = BigInt::from(w.to_prime_residue().unwrap());
        let h = UniPoly::new(
            gc.iter()
                .map(|c| fl.from_bigint(&embed(c, &w_int, &m)))
                .collect(),
            &fl,
        );
        if h.degree() != Some(gc.len() - 1) || h.gcd(&h.derivative()).degree() != Some(0) {
            return None;
        }
        let r: Vec<u64> = roots_in_field(&h)
            .iter()
            .map(|x| x.to_prime_residue().unwrap())
            .collect();
        if r.is_empty() {
            // no root under this embedding, hence no root at all
            return Some(PrimeSetup {
                ell,
                omega: omega.to_prime_residue().unwrap(),
                roots: vec![Vec::new(); phi],
            });
        }
        roots.push(r);
    }
    Some(PrimeSetup {
        ell,
        omega: omega.to_prime_residue().unwrap(),
        roots,
    })
}

fn embed(c: &[BigInt], w: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for x in c.iter().rev() {
        acc = (acc * w + x).mod_floor(m);
    }
    acc
}

fn eval_mod(h: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    embed(h, x, m)
}

fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Newton lifting of a simple root from mod ell to mod ell^k.
fn hensel_lift(h: &[BigInt], r0: &BigInt, m: &BigInt, k: usize) -> BigInt {
    let dh: Vec<BigInt> = h
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let mut r = r0.clone();
    let mut prec = 1;
    loop {
        let d = inv_mod(&eval_mod(&dh, &r, m), m).expect("simple root");
        r = (&r - eval_mod(h, &r, m) * d).mod_floor(m);
        if prec >= k {
            break;
        }
        prec *= 2;
    }
    r
}

/// Inverse of a square matrix modulo `m`, pivoting on units.
fn invert_mod(a: &[Vec<BigInt>], m: &BigInt) -> Option<Vec<Vec<BigInt>>> {
    let n = a.len();
    let mut aug: Vec<Vec<BigInt>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigInt> = row.iter().map(|x| x.mod_floor(m)).collect();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| inv_mod(&aug[r][col], m).is_some())?;
        aug.swap(col, piv);
        let inv = inv_mod(&aug[col][col], m)?;
        for x in aug[col].iter_mut() {
            *x = (&*x * &inv).mod_floor(m);
        }
        for r in 0..n {
            if r != col && aug[r][col].sign() != Sign::NoSign {
                let factor = aug[r][col].clone();
                let pivot_row = aug[col].clone();
                for (x, p) in aug[r].iter_mut().zip(&pivot_row) {
                    *x = (&*x - &factor * p).mod_floor(m);
                }
            }
        }
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}
