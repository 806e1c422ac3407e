use num_bigint::BigInt;
use num_integer::Integer;
use rand::Rng;

use super::primes::is_prime;
use super::{FieldDesc, FieldInner, Scalar};
use crate::error::{Error, Result};

/// Reduction `Z[zeta_N]_(l) -> GF(l)` at a degree-one prime above `l = 1 mod N`,
/// sending `zeta` to a fixed primitive N-th root of unity `omega`.
#[derive(Clone, Debug)]
pub struct PrimeReduction {
    pub source: FieldDesc,
    pub target: FieldDesc,
    pub omega: Scalar,
}

impl PrimeReduction {
    pub fn new(source: &FieldDesc, ell: u64) -> Result<Self> {
        let n = source
            .cyclotomic_index()
            .ok_or_else(|| Error::Precondition("prime reduction needs Q or Q(zeta N)".into()))?;
        if !is_prime(ell) || !(ell - 1).is_multiple_of(n) {
            return Err(Error::Precondition(format!(
                "{ell} is not a prime congruent to 1 mod {n}"
            )));
        }
        let target = FieldDesc::finite(ell, 1, 0)?;
        let omega = target.primitive_root_of_unity(n)?;
        Ok(PrimeReduction {
            source: source.clone(),
            target,
            omega,
        })
    }

    /// The first `count` primes `l = 1 mod N` with `l >= min`.
    pub fn split_primes(source: &FieldDesc, min: u64, count: usize) -> Vec<u64> {
        let n = source.cyclotomic_index().unwrap_or(1);
        let mut ell = min.div_ceil(n) * n + 1;
        let mut out = Vec::new();
        while out.len() < count {
            if is_prime(ell) {
                out.push(ell);
            }
            ell += n;
        }
        out
    }

    /// `None` when a denominator vanishes modulo `l`.
    pub fn reduce(&self, s: &Scalar) -> Option<Scalar> {
        let coeffs = s.cyc_coeffs().expect("cyclotomic scalar");
        let ell = BigInt::from(self.target.characteristic());
        let mut acc = self.target.zero();
        for c in coeffs.iter().rev() {
            let den = c.denom().mod_floor(&ell);
            if den == BigInt::from(0) {
                return None;
            }
            let v =
                self.target.from_bigint(c.numer()) * self.target.from_bigint(&den).inv().ok()?;
            acc = &acc * &self.omega + &v;
        }
        Some(acc)
    }
}

impl FieldDesc {
    /// A pseudo-random element: uniform for finite fields, small integer
    /// coordinates in `-bound..=bound` for cyclotomic fields.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> Scalar {
        match self.inner() {
            FieldInner::Finite(f) => Scalar::from_packed(self, rng.gen_range(0..f.size)),
            FieldInner::Cyclotomic { phi, .. } => {
                let coeffs = (0..*phi)
                    .map(|_| {
                        num_rational::BigRational::from_integer(
                            rng.gen_range(-bound..=bound).into(),
                        )
                    })
                    .collect();
                Scalar::from_cyc_coeffs(self, coeffs)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_is_a_ring_map() {
        let k = FieldDesc::cyclotomic(12);
        let ell = PrimeReduction::split_primes(&k, 100, 1)[0];
        assert_eq!(ell % 12, 1);
        let r = PrimeReduction::new(&k, ell).unwrap();
        let z = k.generator();
        assert!(r.reduce(&z.pow(12)).unwrap().is_one());
        let a = &z * &z + k.from_i64(3);
        let b = z.pow(5) - k.from_i64(7);
        assert_eq!(
            r.reduce(&(&a * &b)).unwrap(),
            r.reduce(&a).unwrap() * r.reduce(&b).unwrap()
        );
        assert_eq!(
            r.reduce(&(&a + &b)).unwrap(),
            r.reduce(&a).unwrap() + r.reduce(&b).unwrap()
        );
        let q = FieldDesc::rationals();
        let rq = PrimeReduction::new(&q, 101).unwrap();
        let third = q.from_i64(3).inv().unwrap();
        assert_eq!(
            rq.reduce(&third).unwrap() * rq.target.from_i64(3),
            rq.target.one()
        );
    }
}
