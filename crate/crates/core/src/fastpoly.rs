//! Packed evaluation of polynomials over finite fields, for enumeration loops.

use crate::field::{FieldDesc, FiniteField, Scalar};
use crate::multipoly::MultiPoly;

pub(crate) struct PackedPoly {
    field: FieldDesc,
    terms: Vec<(u64, Vec<(usize, u32)>)>,
    max_exp: Vec<u32>,
}

impl PackedPoly {
    pub fn new(f: &MultiPoly) -> Self {
        assert!(
            f.field().is_finite(),
            "packed evaluation needs a finite field"
        );
        let mut max_exp = vec![0u32; f.nvars()];
        let terms = f
            .terms()
            .map(|(m, c)| {
                let exps: Vec<(usize, u32)> =
                    m.0.iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(i, &e)| {
                            max_exp[i] = max_exp[i].max(e);
                            (i, e)
                        })
                        .collect();
                (c.packed().unwrap(), exps)
            })
            .collect();
        PackedPoly {
            field: f.field().clone(),
            terms,
            max_exp,
        }
    }

    fn ff(&self) -> &FiniteField {
        self.field.finite_data().unwrap()
    }

    /// Power tables `pows[i][e] = x_i^e` for one point, shared across polynomials.
    pub fn power_table(&self, x: &[u64], max_exp: &[u32]) -> Vec<Vec<u64>> {
        let ff = self.ff();
        x.iter()
            .zip(max_exp)
            .map(|(&xi, &m)| {
                let mut row = Vec::with_capacity(m as usize + 1);
                let mut acc = 1u64;
                row.push(acc);
                for _ in 0..m {
                    acc = ff.mul(acc, xi);
                    row.push(acc);
                }
                row
            })
            .collect()
    }

    pub fn eval_with(&self, pows: &[Vec<u64>]) -> u64 {
        let ff = self.ff();
        let mut acc = 0u64;
        for (c, exps) in &self.terms {
            let mut t = *c;
            for &(i, e) in exps {
                t = ff.mul(t, pows[i][e as usize]);
            }
            acc = ff.add(acc, t);
        }
        acc
    }

    pub fn eval(&self, x: &[u64]) -> u64 {
        let pows = self.power_table(x, &self.max_exp);
        self.eval_with(&pows)
    }

    pub fn eval_scalars(&self, x: &[Scalar]) -> Scalar {
        let packed: Vec<u64> = x.iter().map(|s| s.packed().unwrap()).collect();
        self.field.element(self.eval(&packed))
    }
}

/// Componentwise maximum of exponent bounds.
pub(crate) fn merged_max_exp(polys: &[PackedPoly]) -> Vec<u32> {
    let n = polys.first().map_or(0, |p| p.max_exp.len());
    (0..n)
        .map(|i| polys.iter().map(|p| p.max_exp[i]).max().unwrap_or(0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::field_make;
    use crate::polyparse::parse_str;

    #[test]
    fn agrees_with_generic_eval() {
        let f = field_make(3, 2, 0).unwrap();
        let p = parse_str("g*X^3*Y + Y^4 - X + 2", &["X", "Y"], &f).unwrap();
        let pp = PackedPoly::new(&p);
        for a in f.elements() {
            for b in f.elements().step_by(3) {
                let pt = [a.clone(), b.clone()];
                assert_eq!(pp.eval_scalars(&pt), p.eval(&pt));
            }
        }
    }
}
