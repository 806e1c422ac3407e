//! Indexed enumeration of `P^N(GF(q))`.
//!
//! Points are ordered by the position of their leading 1 (ascending), then by
//! the remaining coordinates read as base-q digits, most significant first.

use rayon::prelude::*;

use super::ProjPoint;
use crate::error::{Error, Result};
use crate::field::{FieldDesc, Scalar};

const DEFAULT_BUDGET: u128 = 1 << 25;
const CHUNK: u64 = 1 << 9;

/// Enumeration cap, overridable with `GALOIS_LOCUS_BUDGET`.
pub fn enumeration_budget() -> u128 {
    std::env::var("GALOIS_LOCUS_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// Number of points of projective space with `nvars` homogeneous coordinates over `GF(q)`.
pub fn point_count(q: u64, nvars: usize) -> u128 {
    let q = q as u128;
    (0..nvars).map(|i| q.pow(i as u32)).sum()
}

/// Packed coordinates of the point with the given index.
pub fn point_at(q: u64, nvars: usize, mut index: u64) -> Vec<u64> {
    let mut out = vec![0u64; nvars];
    for lead in 0..nvars {
        let free = (nvars - 1 - lead) as u32;
        let block = q.pow(free);
        if index < block {
            out[lead] = 1;
            for i in (lead + 1..nvars).rev() {
                out[i] = index % q;
                index /= q;
            }
            return out;
        }
        index -= block;
    }
    panic!("point index out of range");
}

/// Steps to the next point in enumeration order; false after the last point.
fn advance(q: u64, x: &mut [u64]) -> bool {
    let n = x.len();
    let lead = x.iter().position(|&c| c != 0).unwrap();
    for i in (lead + 1..n).rev() {
        x[i] += 1;
        if x[i] < q {
            return true;
        }
        x[i] = 0;
    }
    if lead + 1 == n {
        return false;
    }
    x[lead] = 0;
    x[lead + 1] = 1;
    true
}

#[derive(Clone, Debug)]
pub struct ProjectiveSpace {
    pub field: FieldDesc,
    pub nvars: usize,
}

impl ProjectiveSpace {
    pub fn new(field: &FieldDesc, nvars: usize) -> Result<Self> {
        if !field.is_finite() {
            return Err(Error::CharacteristicZero(field.name()));
        }
        Ok(ProjectiveSpace {
            field: field.clone(),
            nvars,
        })
    }

    pub fn q(&self) -> u64 {
        self.field.order().unwrap()
    }

    pub fn len(&self) -> u128 {
        point_count(self.q(), self.nvars)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn check_budget(&self) -> Result<()> {
        let budget = enumeration_budget();
        if self.len() > budget {
            return Err(Error::BudgetExceeded {
                needed: self.len(),
                budget,
            });
        }
        Ok(())
    }

    pub fn point(&self, index: u64) -> ProjPoint {
        self.to_point(&point_at(self.q(), self.nvars, index))
    }

    pub fn to_point(&self, packed: &[u64]) -> ProjPoint {
        ProjPoint::new(packed.iter().map(|&c| self.field.element(c)).collect()).unwrap()
    }

    pub fn to_packed(p: &ProjPoint) -> Vec<u64> {
        p.coords().iter().map(|c| c.packed().unwrap()).collect()
    }

    pub fn points(&self) -> impl Iterator<Item = ProjPoint> + '_ {
        (0..self.len() as u64).map(move |i| self.point(i))
    }

    /// Applies `f` to every point (packed coordinates) in parallel and
    /// returns the results in enumeration order, skipping `None`.
    pub fn par_filter_map<T, F>(&self, f: F) -> Vec<(u64, T)>
    where
        T: Send,
        F: Fn(&[u64]) -> Option<T> + Sync,
    {
        let total = self.len() as u64;
        let q = self.q();
        let nvars = self.nvars;
        let chunks = total.div_ceil(CHUNK);
        let parts: Vec<Vec<(u64, T)>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let start = c * CHUNK;
                let end = (start + CHUNK).min(total);
                let mut x = point_at(q, nvars, start);
                let mut out = Vec::new();
                for idx in start..end {
                    if let Some(v) = f(&x) {
                        out.push((idx, v));
                    }
                    if idx + 1 < end {
                        advance(q, &mut x);
                    }
                }
                out
            })
            .collect();
        parts.into_iter().flatten().collect()
    }

    /// Number of points satisfying `pred`, computed in parallel.
    pub fn par_count<F>(&self, pred: F) -> u64
    where
        F: Fn(&[u64]) -> bool + Sync,
    {
        let total = self.len() as u64;
        let q = self.q();
        let nvars = self.nvars;
        (0..total.div_ceil(CHUNK))
            .into_par_iter()
            .map(|c| {
                let start = c * CHUNK;
                let end = (start + CHUNK).min(total);
                let mut x = point_at(q, nvars, start);
                let mut n = 0u64;
                for idx in start..end {
                    if pred(&x) {
                        n += 1;
                    }
                    if idx + 1 < end {
                        advance(q, &mut x);
                    }
                }
                n
            })
            .sum()
    }
}

/// Uniformly random point with coordinates in the field (rejection of zero vector).
pub fn random_point<R: rand::Rng + ?Sized>(
    field: &FieldDesc,
    nvars: usize,
    rng: &mut R,
    bound: i64,
) -> ProjPoint {
    loop {
        let c: Vec<Scalar> = (0..nvars)
            .map(|_| field.random_element(rng, bound))
            .collect();
        if let Ok(p) = ProjPoint::new(c) {
            return p;
        }
    }
}
