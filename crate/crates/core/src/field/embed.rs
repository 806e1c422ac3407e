use super::{roots_in_field, FieldDesc, Scalar, UniPoly};
use crate::error::{Error, Result};

/// A field embedding `GF(p^k) -> GF(p^(k m))`, determined by the image of `g`.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub source: FieldDesc,
    pub target: FieldDesc,
    image_of_gen: Scalar,
}

impl Embedding {
    pub(super) fn finite_extension(source: &FieldDesc, m: u32) -> Result<Embedding> {
        let f = source.finite_data().ok_or_else(|| {
            Error::Precondition("field extensions are built for GF(p^k) only".into())
        })?;
        if m == 0 {
            return Err(Error::Precondition(
                "extension degree must be positive".into(),
            ));
        }
        if m == 1 {
            return Ok(Embedding {
                source: source.clone(),
                target: source.clone(),
                image_of_gen: source.generator(),
            });
        }
        let target = FieldDesc::finite(f.p, f.k * m, 0)?;
        let modulus = UniPoly::new(
            f.modulus.iter().map(|&c| target.from_u64(c)).collect(),
            &target,
        );
        let image_of_gen = roots_in_field(&modulus)
            .into_iter()
            .next()
            .ok_or_else(|| Error::Internal("modulus has no root in the extension".into()))?;
        Ok(Embedding {
            source: source.clone(),
            target,
            image_of_gen,
        })
    }

    pub fn map(&self, a: &Scalar) -> Scalar {
        if self.source.same(&self.target) {
            return a.clone();
        }
        let f = self.source.finite_data().unwrap();
        let coeffs = f.coeffs(a.packed().expect("element of the source field"));
        let mut acc = self.target.zero();
        for &c in coeffs.iter().rev() {
            acc = &acc * &self.image_of_gen + &self.target.from_u64(c);
        }
        acc
    }

    /// Maps a polynomial coefficientwise.
    pub fn map_poly(&self, p: &UniPoly) -> UniPoly {
        p.map_coeffs(&self.target, |c| self.map(c))
    }
}
