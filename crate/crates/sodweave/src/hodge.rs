//! Bivariate Hodge polynomials of symmetric products, Hochschild-homology
//! diagonal vectors, and the additivity ledger.
//!
//! `h^{p,q}(Sym^n C)` is the coefficient of `x^p y^q t^n` in
//! `(1+xt)^g (1+yt)^g / ((1-t)(1-xyt))`, which unpacks to the closed form
//! `Σ_d C(g, p-d) C(g, q-d)` over `max(0, p+q-n) <= d <= min(p, q)`.
//! Hochschild homology is graded by the diagonal `n = q - p` and is additive
//! across semiorthogonal decompositions; twists and shifts do not change it,
//! so only the symmetric power of a block matters.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::EngineError;
use crate::hecke::HeckeBlock;
use crate::lattice::{ModuliParams, Sod};

/// Hodge numbers `h^{p,q}` of a smooth projective variety.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HodgePoly {
    pub coeffs: BTreeMap<(i64, i64), BigUint>,
}

impl HodgePoly {
    pub fn point() -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert((0, 0), BigUint::from(1u32));
        HodgePoly { coeffs }
    }

    pub fn get(&self, p: i64, q: i64) -> BigUint {
        self.coeffs.get(&(p, q)).cloned().unwrap_or_default()
    }

    pub fn is_symmetric(&self) -> bool {
        self.coeffs.iter().all(|(&(p, q), v)| self.get(q, p) == *v)
    }

    pub fn total(&self) -> BigUint {
        self.coeffs.values().sum()
    }
}

fn binomial(n: i64, k: i64) -> BigUint {
    if k < 0 || k > n {
        return BigUint::zero();
    }
    num_integer::binomial(BigUint::from(n as u64), BigUint::from(k as u64))
}

/// Hodge polynomial of `Sym^n C` for a genus-`g` curve.
pub fn sym_hodge(g: i64, n: i64) -> HodgePoly {
    assert!(g >= 0 && n >= 0);
    let mut coeffs = BTreeMap::new();
    for p in 0..=n {
        for q in 0..=n {
            let mut c = BigUint::zero();
            let d_lo = 0.max(p + q - n);
            let d_hi = p.min(q);
            for d in d_lo..=d_hi {
                c += binomial(g, p - d) * binomial(g, q - d);
            }
            if !c.is_zero() {
                coeffs.insert((p, q), c);
            }
        }
    }
    HodgePoly { coeffs }
}

/// Integer dimensions of Hochschild homology indexed by `n = q - p`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct HhVector {
    pub dims: BTreeMap<i64, BigUint>,
}

impl HhVector {
    pub fn zero() -> Self {
        HhVector::default()
    }

    pub fn from_hodge(h: &HodgePoly) -> Self {
        let mut dims: BTreeMap<i64, BigUint> = BTreeMap::new();
        for (&(p, q), v) in &h.coeffs {
            *dims.entry(q - p).or_default() += v.clone();
        }
        HhVector { dims }
    }

    pub fn add_assign(&mut self, other: &HhVector) {
        for (k, v) in &other.dims {
            *self.dims.entry(*k).or_default() += v.clone();
        }
    }

    pub fn scaled(&self, factor: u64) -> HhVector {
        let mut dims = BTreeMap::new();
        for (k, v) in &self.dims {
            dims.insert(*k, v.clone() * BigUint::from(factor));
        }
        HhVector { dims }
    }

    pub fn total(&self) -> BigUint {
        self.dims.values().sum()
    }

    pub fn is_mirror_symmetric(&self) -> bool {
        self.dims.iter().all(|(&n, v)| {
            self.dims.get(&-n).cloned().unwrap_or_default() == *v
        })
    }

    /// Per-diagonal difference `self - other` as signed decimal strings;
    /// empty when the vectors agree.
    pub fn residuals(&self, other: &HhVector) -> BTreeMap<i64, String> {
        let mut out = BTreeMap::new();
        let keys: std::collections::BTreeSet<i64> =
            self.dims.keys().chain(other.dims.keys()).copied().collect();
        for k in keys {
            let a = self.dims.get(&k).cloned().unwrap_or_default();
            let b = other.dims.get(&k).cloned().unwrap_or_default();
            if a != b {
                let s = if a >= b {
                    format!("+{}", a - b)
                } else {
                    format!("-{}", b - a)
                };
                out.insert(k, s);
            }
        }
        out
    }
}

/// HH of `Sym^n C`, memo-free (sizes are tiny).
pub fn hh_sym(g: i64, n: i64) -> HhVector {
    HhVector::from_hodge(&sym_hodge(g, n))
}

/// Sum of the HH vectors of every block of an SOD; blocks contribute through
/// their symmetric power only.
pub fn hh_of_blocks(sod: &Sod, g: i64) -> Result<HhVector, EngineError> {
    let mut acc = HhVector::zero();
    for b in &sod.blocks {
        let n = b.resolved_sym_power();
        if n < 0 {
            return Err(EngineError::UnsupportedBlock(format!(
                "negative symmetric power in block {b:?}"
            )));
        }
        acc.add_assign(&hh_sym(g, n));
    }
    Ok(acc)
}

pub fn hh_of_hecke_blocks(blocks: &[HeckeBlock], g: i64) -> HhVector {
    let mut acc = HhVector::zero();
    for b in blocks {
        acc.add_assign(&hh_sym(g, b.sym_power(g)));
    }
    acc
}

/// Reference vector built by walking the windows chain: `HH(M_0) = HH(P^{d+g-2})`,
/// then each level `i` adds `d+g-3i-1` copies of `HH(Sym^i C)`.
pub fn hh_windows_chain(params: &ModuliParams) -> HhVector {
    let mut acc = HhVector::zero();
    // projective space P^{d+g-2}
    acc.dims.insert(0, BigUint::from((params.d + params.g - 1) as u64));
    for i in 1..=params.i_d {
        let copies = params.level_width(i) as u64;
        acc.add_assign(&hh_sym(params.g, i).scaled(copies));
    }
    acc
}

/// Outcome of an HH additivity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HhReport {
    pub reference: HhVector,
    pub blocks: HhVector,
    pub residuals: BTreeMap<i64, String>,
    pub pass: bool,
}

/// Componentwise comparison of the block sum against a reference vector.
pub fn verify_hh(reference: &HhVector, sod: &Sod, g: i64) -> Result<HhReport, EngineError> {
    let blocks = hh_of_blocks(sod, g)?;
    let residuals = blocks.residuals(reference);
    let pass = residuals.is_empty();
    Ok(HhReport { reference: reference.clone(), blocks, residuals, pass })
}
