//! One-parameter-subgroup weights: wall-crossing weights, window membership,
//! stack descent, and quasi-BPS intervals.
//!
//! Weights are exact rationals since half-integers occur in the quasi-BPS
//! windows. The window width for the section-stack embedding is `g` and the
//! distinguished subgroup on the semistable stack has `n_ν = g-1` with
//! `weight ν*Λ = -1`; these are constants of the construction.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::EngineError;
use crate::lattice::{Block, KernelFamily, LineBundle};

/// Closed interval of weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightInterval {
    pub lo: Rational64,
    pub hi: Rational64,
}

impl WeightInterval {
    pub fn new(lo: Rational64, hi: Rational64) -> Self {
        debug_assert!(lo <= hi);
        WeightInterval { lo, hi }
    }

    pub fn of_ints(lo: i64, hi: i64) -> Self {
        WeightInterval::new(Rational64::from_integer(lo), Rational64::from_integer(hi))
    }

    pub fn contains_interval_closed(&self, inner: WeightInterval) -> bool {
        self.lo <= inner.lo && inner.hi <= self.hi
    }
}

/// Weight of `O(m,n)` for the `i`-th wall crossing: `n + m(1-i)`.
pub fn wall_weight(lb: LineBundle, i: i64) -> i64 {
    lb.n + lb.m * (1 - i)
}

/// Weight range of a block for the section-stack window.
///
/// A block `θ^x Λ^y ⊠F^∨⊠z` has weights `[-y, z-y]`; the undualized family
/// `Λ^y ⊠F⊠z = Λ^{y+z} ⊠F^∨⊠z` shifts accordingly. `D`-sheaf blocks descend
/// from objects with weights `[0, k]`, which is taken as authoritative.
pub fn weight_interval(block: &Block, g: i64) -> Result<WeightInterval, EngineError> {
    let (_, y) = block.theta_lambda(g);
    let z = block.sym_power;
    match block.family {
        KernelFamily::StructureSheaf => Ok(WeightInterval::of_ints(-y, -y)),
        KernelFamily::TensorDualF | KernelFamily::BarTensorDualF => {
            Ok(WeightInterval::of_ints(-y, z - y))
        }
        KernelFamily::TensorF | KernelFamily::BarTensorF => {
            Ok(WeightInterval::of_ints(-y - z, -y))
        }
        KernelFamily::DSheaf => Ok(WeightInterval::of_ints(0, z)),
        _ => Err(EngineError::UnsupportedBlock(format!(
            "no weight interval for family {:?}",
            block.family
        ))),
    }
}

/// Window membership: `lo <= iv.lo` and `iv.hi < lo + width` (half-open).
pub fn in_window(iv: WeightInterval, lo: Rational64, width: Rational64) -> bool {
    debug_assert!(width > Rational64::from_integer(0));
    lo <= iv.lo && iv.hi < lo + width
}

/// Quasi-BPS interval at weight `w`: `[-(g-1)/2 - w/2, (g-1)/2 - w/2]`.
pub fn quasi_bps_window(w: i64, g: i64) -> WeightInterval {
    let half = Rational64::new(g - 1, 2);
    let shift = Rational64::new(w, 2);
    WeightInterval::new(-half - shift, half - shift)
}

/// Whether the block's weight interval sits inside the quasi-BPS window at
/// weight `w` (closed containment, at the distinguished subgroup with
/// `n_ν = g-1` and `weight ν*Λ = -1`).
pub fn quasi_bps_member(block: &Block, w: i64, g: i64) -> Result<bool, EngineError> {
    let iv = weight_interval(block, g)?;
    Ok(quasi_bps_window(w, g).contains_interval_closed(iv))
}

/// Weight of `θ^x Λ^y ⊠F^∨⊠z` under scalar automorphisms of the bundle:
/// `2y - z`. The block descends to the rigidified stack exactly when it
/// vanishes.
pub fn stack_weight(block: &Block, g: i64) -> i64 {
    let (_, y) = block.theta_lambda(g);
    let z = block.sym_power;
    match block.family {
        KernelFamily::TensorF | KernelFamily::BarTensorF => 2 * y + z,
        _ => 2 * y - z,
    }
}

pub fn descends(block: &Block, g: i64) -> bool {
    stack_weight(block, g) == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Ambient;

    fn rb(x: i64, y: i64, z: i64, g: i64) -> Block {
        Block::theta_lambda_dual_f(Ambient::ZCirc, x, y, z, g)
    }

    #[test]
    fn wall_weight_examples() {
        for i in 1..=8 {
            assert_eq!(wall_weight(LineBundle::big_lambda(), i), -1);
            assert_eq!(wall_weight(LineBundle::zero(), i), 0);
        }
        // L^{k,s}_i has weight s - floor(s/(i-k)) (i-k) ∈ [0, i-k)
        for i in 2..=8i64 {
            for k in 0..i {
                for s in 0..=(3 * (i - k)) {
                    let x = s.div_euclid(i - k);
                    let lks = LineBundle::new(x, s + x * (k - 1));
                    let w = wall_weight(lks, i);
                    assert_eq!(w, s - x * (i - k));
                    assert!((0..i - k).contains(&w));
                }
            }
        }
    }

    #[test]
    fn wall_weight_additive() {
        for i in 1..=6 {
            for (a, b) in [((1, 4), (0, -1)), ((2, -3), (5, 7)), ((0, 0), (-2, 9))] {
                let x = LineBundle::new(a.0, a.1);
                let y = LineBundle::new(b.0, b.1);
                assert_eq!(wall_weight(x.combine(y), i), wall_weight(x, i) + wall_weight(y, i));
            }
        }
    }

    #[test]
    fn weight_interval_examples() {
        let g = 5;
        assert_eq!(weight_interval(&rb(5, 0, 0, g).normalized(), g).unwrap(), WeightInterval::of_ints(0, 0));
        // Λ^m F^∨⊠2m -> [-m, m]
        for m in 0..4 {
            assert_eq!(weight_interval(&rb(0, m, 2 * m, g), g).unwrap(), WeightInterval::of_ints(-m, m));
        }
        // first-megablock block at (λ, k): [k - floor((g-2)/2), λ-k - floor((g-2)/2)]
        let fl = (g - 2) / 2;
        for lam in 0..=(g - 2) {
            for k in 0..=(lam / 2) {
                let b = rb(-1, fl - k, lam - 2 * k, g);
                assert_eq!(
                    weight_interval(&b, g).unwrap(),
                    WeightInterval::of_ints(k - fl, lam - k - fl)
                );
            }
        }
    }

    #[test]
    fn window_examples() {
        assert!(in_window(WeightInterval::of_ints(0, 0), Rational64::from_integer(0), Rational64::from_integer(1)));
        assert!(!in_window(WeightInterval::of_ints(0, 1), Rational64::from_integer(0), Rational64::from_integer(1)));
    }

    #[test]
    fn quasi_bps_examples() {
        // C_k blocks at w = 2-g: [k, g-2-k] ⊆ [-1/2, g-3/2]
        for g in 2..=12i64 {
            for k in 0..=((g - 2) / 2) {
                let c = Block::new(
                    Ambient::NStack,
                    KernelFamily::TensorF,
                    g - 2 - 2 * k,
                    LineBundle::from_theta_lambda(0, 2 - g + k, g),
                );
                assert_eq!(weight_interval(&c, g).unwrap(), WeightInterval::of_ints(k, g - 2 - k));
                assert!(quasi_bps_member(&c, 2 - g, g).unwrap());
            }
            for k in 0..=((g - 1) / 2) {
                let d = Block::new(
                    Ambient::NStack,
                    KernelFamily::TensorF,
                    g - 1 - 2 * k,
                    LineBundle::from_theta_lambda(0, 2 - g + k, g),
                );
                assert_eq!(weight_interval(&d, g).unwrap(), WeightInterval::of_ints(k - 1, g - 2 - k));
                assert!(quasi_bps_member(&d, 3 - g, g).unwrap());
            }
        }
        // structure sheaf at w = 0, g = 2
        let o = rb(0, 0, 0, 2).normalized();
        assert!(quasi_bps_member(&o, 0, 2).unwrap());
    }

    #[test]
    fn descent_criterion() {
        let g = 6;
        for j in 0..4 {
            for k in 0..8 {
                let b = rb(2, j, k, g);
                assert_eq!(descends(&b, g), k == 2 * j);
            }
        }
    }
}
