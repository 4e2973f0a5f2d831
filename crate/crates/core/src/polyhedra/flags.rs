use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::ratlin::vector::{dot, int_vec};
use crate::IntVec;

use super::PolyhedraError;

/// Oriented hyperplanes `L = {⟨l, x⟩ = 0}` and `I = {⟨i, x⟩ = 0}`.
///
/// The half-hyperplane of interest is `L ∩ I⁺` where `I⁺` is the side on which
/// `i_sign · ⟨i, x⟩ > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlagPair {
    pub l_normal: IntVec,
    pub i_normal: IntVec,
    pub l_sign: i8,
    pub i_sign: i8,
}

impl FlagPair {
    /// `L = {x₁ = 0}`, `I⁺ = {x₂ > 0}` in `ℝⁿ`.
    pub fn coordinate(n: usize) -> Self {
        let mut l = vec![0i64; n];
        let mut i = vec![0i64; n];
        l[0] = 1;
        i[1] = 1;
        FlagPair { l_normal: int_vec(&l), i_normal: int_vec(&i), l_sign: 1, i_sign: 1 }
    }

    pub fn l_value(&self, x: &[BigInt]) -> BigInt {
        dot(&self.l_normal, x)
    }

    /// Oriented pairing with `I`, positive on `I⁺`.
    pub fn i_value(&self, x: &[BigInt]) -> BigInt {
        let v = dot(&self.i_normal, x);
        if self.i_sign < 0 {
            -v
        } else {
            v
        }
    }
}

/// Whether the relative interior of `cone(rays)` meets `{x ∈ L : x ∈ I⁺}`.
///
/// With `ℓ_i = ⟨l, r_i⟩` and `ι_i` the oriented `I` pairing, the slice of the
/// cone on `L` is generated by `|ℓ_j| r_i + ℓ_i r_j` for `ℓ_i > 0 > ℓ_j`, so the
/// answer is whether one of these has positive `I` pairing.
pub fn cone_meets_halfplane(rays: &[IntVec], flags: &FlagPair) -> Result<bool, PolyhedraError> {
    let ls: Vec<BigInt> = rays.iter().map(|r| flags.l_value(r)).collect();
    if let Some(bad) = ls.iter().position(|x| x.is_zero()) {
        return Err(PolyhedraError::NotTransversal(bad));
    }
    let is: Vec<BigInt> = rays.iter().map(|r| flags.i_value(r)).collect();
    for i in 0..rays.len() {
        for j in 0..rays.len() {
            if ls[i].is_positive() && ls[j].is_negative() {
                let val = ls[j].abs() * &is[i] + &ls[i] * &is[j];
                if val.is_positive() {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}
