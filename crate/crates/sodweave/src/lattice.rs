//! Picard-lattice arithmetic, moduli parameters, and the block/SOD data model.
//!
//! Line bundles on the stable-pair spaces `M_i(d)` are written `O(m,n) =
//! O((m+n)H - nE)` and stored as the integer pair `(m, n)`. The distinguished
//! bundles are `θ = O(1, g-1)`, `Λ = O(0, -1)` and `ω_{M_i(d)} = O(-3, 4-d-g)`.
//! Blocks are symbolic labels for Fourier-Mukai kernels; equality of blocks is
//! equality of labels after twist normalization, and no sheaf is ever
//! materialized.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::EngineError;

/// Parameters of a stable-pair moduli problem for a genus-`g` curve and a
/// determinant of degree `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuliParams {
    pub g: i64,
    pub d: i64,
    /// Top stability index `i_d = ceil((d+g-1)/3) - 1`.
    pub i_d: i64,
    /// Defect `m = d+g-1-3*i_d`, always in `{1,2,3}`.
    pub m: i64,
    /// Indicator `m_1 = 1` iff `m <= 1`.
    pub m_1: i64,
    /// Indicator `m_2 = 1` iff `m <= 2`.
    pub m_2: i64,
    /// `v = floor((d-1)/2)`, the largest stability index.
    pub v: i64,
    /// Whether `(g, d)` lies in the proven range `d <= 2g` with `i_d <= v`.
    pub proven_range: bool,
}

fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b) + if a.rem_euclid(b) != 0 { 1 } else { 0 }
}

/// Computes the moduli parameters for `(g, d)`.
///
/// Rejects `i_d > v`, where the construction of the maximal space breaks
/// down, unless `conjectural` is set.
pub fn derive_params_with(g: i64, d: i64, conjectural: bool) -> Result<ModuliParams, EngineError> {
    if g < 2 {
        return Err(EngineError::InvalidParams(format!("genus must be >= 2, got {g}")));
    }
    if d <= 2 {
        return Err(EngineError::InvalidParams(format!("degree must be > 2, got {d}")));
    }
    let i_d = ceil_div(d + g - 1, 3) - 1;
    let m = d + g - 1 - 3 * i_d;
    debug_assert!((1..=3).contains(&m));
    let v = (d - 1).div_euclid(2);
    if i_d > v && !conjectural {
        return Err(EngineError::InvalidParams(format!(
            "i_d = {i_d} exceeds v = {v} for (g, d) = ({g}, {d})"
        )));
    }
    Ok(ModuliParams {
        g,
        d,
        i_d,
        m,
        m_1: i64::from(m <= 1),
        m_2: i64::from(m <= 2),
        v,
        proven_range: d <= 2 * g && i_d <= v,
    })
}

pub fn derive_params(g: i64, d: i64) -> Result<ModuliParams, EngineError> {
    derive_params_with(g, d, false)
}

impl ModuliParams {
    /// Parameters for the even-determinant space `M_{g-1}(2g)`.
    pub fn even(g: i64) -> Result<Self, EngineError> {
        derive_params(g, 2 * g)
    }

    /// Number of blocks `d+g-3k-1` appended at level `k` by the windows
    /// embedding (also the Beilinson length at `k = 0`).
    pub fn level_width(&self, k: i64) -> i64 {
        self.d + self.g - 3 * k - 1
    }
}

/// `O(m, n) = O((m+n)H - nE)` in the Picard lattice of `M_i(d)`, `i >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LineBundle {
    pub m: i64,
    pub n: i64,
}

impl LineBundle {
    pub const fn new(m: i64, n: i64) -> Self {
        LineBundle { m, n }
    }

    pub const fn zero() -> Self {
        LineBundle { m: 0, n: 0 }
    }

    /// `θ = O(1, g-1)`, the pullback of the ample generator.
    pub const fn theta(g: i64) -> Self {
        LineBundle { m: 1, n: g - 1 }
    }

    /// `Λ = O(0, -1)`.
    pub const fn big_lambda() -> Self {
        LineBundle { m: 0, n: -1 }
    }

    /// `ω_{M_i(d)} = O(-3, 4-d-g)`.
    pub const fn omega(d: i64, g: i64) -> Self {
        LineBundle { m: -3, n: 4 - d - g }
    }

    pub fn is_zero(self) -> bool {
        self.m == 0 && self.n == 0
    }

    /// Componentwise sum; the lattice is free abelian of rank 2.
    pub fn combine(self, other: LineBundle) -> LineBundle {
        LineBundle::new(self.m + other.m, self.n + other.n)
    }

    pub fn inverse(self) -> LineBundle {
        LineBundle::new(-self.m, -self.n)
    }

    pub fn pow(self, e: i64) -> LineBundle {
        LineBundle::new(self.m * e, self.n * e)
    }

    /// Decomposes `O(m,n) = θ^x Λ^y`; the pair `(θ, Λ)` is a basis.
    pub fn theta_lambda(self, g: i64) -> (i64, i64) {
        (self.m, self.m * (g - 1) - self.n)
    }

    pub fn from_theta_lambda(x: i64, y: i64, g: i64) -> LineBundle {
        LineBundle::new(x, x * (g - 1) - y)
    }
}

impl std::ops::Add for LineBundle {
    type Output = LineBundle;
    fn add(self, rhs: LineBundle) -> LineBundle {
        self.combine(rhs)
    }
}

impl std::ops::Neg for LineBundle {
    type Output = LineBundle;
    fn neg(self) -> LineBundle {
        self.inverse()
    }
}

impl fmt::Display for LineBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O({},{})", self.m, self.n)
    }
}

/// Componentwise sum of twists.
pub fn lb_combine(a: LineBundle, b: LineBundle) -> LineBundle {
    a.combine(b)
}

/// Where a block lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ambient {
    /// Stable-pair space `M_i(d)`.
    M { i: i64, d: i64 },
    /// The stack of nonvanishing sections over the semistable stack.
    ZCirc,
    /// Stack of semistable bundles with fixed even determinant.
    NStack,
    /// Odd-determinant moduli space.
    NHat,
    /// Parabolic moduli space, a `P^1`-bundle over the odd side.
    P,
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ambient::M { i, d } => write!(f, "M_{i}({d})"),
            Ambient::ZCirc => write!(f, "Z°"),
            Ambient::NStack => write!(f, "N"),
            Ambient::NHat => write!(f, "N^"),
            Ambient::P => write!(f, "P"),
        }
    }
}

/// Kernel family tags. The symmetric power is stored separately on [`Block`];
/// for `DSheaf` it is the stability drop `k` of the stratum `D^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum KernelFamily {
    StructureSheaf,
    TensorDualF,
    BarTensorDualF,
    TensorF,
    BarTensorF,
    DSheaf,
    TensorE,
    BarTensorE,
}

impl KernelFamily {
    pub fn barred(self) -> bool {
        matches!(
            self,
            KernelFamily::BarTensorDualF | KernelFamily::BarTensorF | KernelFamily::BarTensorE
        )
    }

    pub fn toggle_bar(self) -> KernelFamily {
        match self {
            KernelFamily::TensorDualF => KernelFamily::BarTensorDualF,
            KernelFamily::BarTensorDualF => KernelFamily::TensorDualF,
            KernelFamily::TensorF => KernelFamily::BarTensorF,
            KernelFamily::BarTensorF => KernelFamily::TensorF,
            KernelFamily::TensorE => KernelFamily::BarTensorE,
            KernelFamily::BarTensorE => KernelFamily::TensorE,
            other => other,
        }
    }
}

/// Membership annotation attached during the Plain Weave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Annotation {
    #[default]
    None,
    InK,
    InKDual,
    DescendsToN,
}

/// A symbolic Fourier-Mukai kernel label: family, symmetric power, twist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Block {
    pub ambient: Ambient,
    pub family: KernelFamily,
    pub sym_power: i64,
    pub twist: LineBundle,
    /// Power of `O_π(1)`; only meaningful on the parabolic space.
    pub serre_twist: i64,
    pub dual: bool,
    pub annotation: Annotation,
}

impl Block {
    pub fn new(ambient: Ambient, family: KernelFamily, sym_power: i64, twist: LineBundle) -> Self {
        Block {
            ambient,
            family,
            sym_power,
            twist,
            serre_twist: 0,
            dual: false,
            annotation: Annotation::None,
        }
    }

    /// `θ^x Λ^y ⊠F^∨⊠z` on the given ambient space.
    pub fn theta_lambda_dual_f(ambient: Ambient, x: i64, y: i64, z: i64, g: i64) -> Self {
        Block::new(
            ambient,
            KernelFamily::TensorDualF,
            z,
            LineBundle::from_theta_lambda(x, y, g),
        )
    }

    pub fn with_twist(mut self, t: LineBundle) -> Self {
        self.twist = self.twist.combine(t);
        self
    }

    pub fn with_annotation(mut self, a: Annotation) -> Self {
        self.annotation = a;
        self
    }

    pub fn retagged(mut self, ambient: Ambient) -> Self {
        self.ambient = ambient;
        self
    }

    /// `(θ-power, Λ-power)` of the twist.
    pub fn theta_lambda(&self, g: i64) -> (i64, i64) {
        self.twist.theta_lambda(g)
    }

    /// Symmetric power of the source `Sym^a C`, when the family resolves to
    /// one (all families do; `DSheaf` blocks are kernels over `Sym^k C`).
    pub fn resolved_sym_power(&self) -> i64 {
        self.sym_power
    }

    /// Canonical label. `sym_power = 0` collapses tensor families to the
    /// structure sheaf; a `D`-sheaf on the top stratum absorbs any twist with
    /// trivial restriction to the projective-bundle fibers.
    pub fn normalized(mut self) -> Self {
        if self.sym_power == 0 && self.family != KernelFamily::StructureSheaf {
            self.family = KernelFamily::StructureSheaf;
        }
        if self.family == KernelFamily::DSheaf {
            if let Ambient::M { i, .. } = self.ambient {
                if self.sym_power == i {
                    // On D^i_i the twist only matters through its fiber weight.
                    let w = self.twist.n + self.twist.m * (1 - i);
                    self.twist = LineBundle::big_lambda().pow(-w);
                }
            }
        }
        self
    }

    pub fn same_label(&self, other: &Block) -> bool {
        let a = self.normalized();
        let b = other.normalized();
        a.ambient == b.ambient
            && a.family == b.family
            && a.sym_power == b.sym_power
            && a.twist == b.twist
            && a.serre_twist == b.serre_twist
            && a.dual == b.dual
    }

    /// Display in `θ^x Λ^y` coordinates, used by the text emitter.
    pub fn text(&self, g: i64) -> String {
        let (x, y) = self.theta_lambda(g);
        let mut s = String::new();
        if x != 0 {
            s.push_str(&format!("θ^{x}"));
        }
        if y != 0 {
            s.push_str(&format!("Λ^{y}"));
        }
        let fam = match self.family {
            KernelFamily::StructureSheaf => "O".to_string(),
            KernelFamily::TensorDualF => format!("F∨⊠{}", self.sym_power),
            KernelFamily::BarTensorDualF => format!("F̄∨⊠{}", self.sym_power),
            KernelFamily::TensorF => format!("F⊠{}", self.sym_power),
            KernelFamily::BarTensorF => format!("F̄⊠{}", self.sym_power),
            KernelFamily::DSheaf => format!("D^{}", self.sym_power),
            KernelFamily::TensorE => format!("E⊠{}", self.sym_power),
            KernelFamily::BarTensorE => format!("Ē⊠{}", self.sym_power),
        };
        if s.is_empty() && self.family == KernelFamily::StructureSheaf && self.serre_twist == 0 {
            return "O".to_string();
        }
        s.push_str(&fam);
        if self.serre_twist != 0 {
            s.push_str(&format!("({})", self.serre_twist));
        }
        s
    }
}

/// Dual of a barred or unbarred tensor block: `⟨θ^x Λ^y F̄^∨⊠z⟩^∨ =
/// ⟨θ^{-x} Λ^{z-y} F^∨⊠z⟩`, toggling the bar.
pub fn dual_block(b: &Block, g: i64) -> Result<Block, EngineError> {
    match b.family {
        KernelFamily::TensorDualF
        | KernelFamily::BarTensorDualF
        | KernelFamily::StructureSheaf => {
            let (x, y) = b.theta_lambda(g);
            let z = b.sym_power;
            let fam = if b.family == KernelFamily::StructureSheaf {
                KernelFamily::StructureSheaf
            } else {
                b.family.toggle_bar()
            };
            let mut out = *b;
            out.family = fam;
            out.twist = LineBundle::from_theta_lambda(-x, z - y, g);
            Ok(out)
        }
        _ => Err(EngineError::UnsupportedBlock(format!(
            "no closed-form dual for family {:?}",
            b.family
        ))),
    }
}

/// Result of restricting a twist along a `D`-sheaf stratum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Restricted {
    /// Restriction to the projective-space fibers of `D^{k'}_{k'}`, recorded
    /// as a power of `Λ`.
    FiberLambda(i64),
    /// Restriction to `M_{i-k'}(d-2k')`.
    Bundle(LineBundle),
}

/// Restricts `O(m,n)` to the stratum indexed by `kprime` at level `floor_t`.
///
/// On the top stratum (`kprime = floor_t`) the restriction to the fibers is
/// `Λ^{-n-m(1-k')}`; otherwise it is `O(m, n - m k')` on `M_{i-k'}(d-2k')`.
pub fn restrict_to_stratum(
    lb: LineBundle,
    kprime: i64,
    floor_t: i64,
    params: &ModuliParams,
) -> Result<Restricted, EngineError> {
    if !(0 <= kprime && kprime <= floor_t && floor_t <= params.i_d) {
        return Err(EngineError::IndexRange(format!(
            "stratum index k'={kprime} at level {floor_t} outside 0..={}",
            params.i_d
        )));
    }
    if kprime == floor_t {
        Ok(Restricted::FiberLambda(-lb.n - lb.m * (1 - kprime)))
    } else {
        Ok(Restricted::Bundle(LineBundle::new(lb.m, lb.n - lb.m * kprime)))
    }
}

/// An ordered sequence of blocks with megablock grouping.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sod {
    pub blocks: Vec<Block>,
    /// Half-open spans `(start, end, label)` partitioning `blocks`.
    pub megablocks: Vec<(usize, usize, String)>,
    pub provenance: String,
}

impl Sod {
    pub fn new(provenance: impl Into<String>) -> Self {
        Sod { blocks: Vec::new(), megablocks: Vec::new(), provenance: provenance.into() }
    }

    pub fn push_megablock(&mut self, label: impl Into<String>, blocks: Vec<Block>) {
        let start = self.blocks.len();
        self.blocks.extend(blocks);
        self.megablocks.push((start, self.blocks.len(), label.into()));
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn megablock(&self, label: &str) -> Option<&[Block]> {
        self.megablocks
            .iter()
            .find(|(_, _, l)| l == label)
            .map(|&(s, e, _)| &self.blocks[s..e])
    }

    /// Megablock spans must partition the block sequence without overlap.
    pub fn validate(&self) -> Result<(), EngineError> {
        let mut cursor = 0usize;
        for (s, e, label) in &self.megablocks {
            if *s != cursor || *e < *s || *e > self.blocks.len() {
                return Err(EngineError::MalformedSod(format!(
                    "megablock `{label}` spans {s}..{e}, expected to start at {cursor}"
                )));
            }
            cursor = *e;
        }
        if cursor != self.blocks.len() {
            return Err(EngineError::MalformedSod(format!(
                "megablocks cover {cursor} of {} blocks",
                self.blocks.len()
            )));
        }
        Ok(())
    }

    pub fn text(&self, g: i64) -> String {
        let mut parts = Vec::new();
        for (s, e, label) in &self.megablocks {
            let inner: Vec<String> = self.blocks[*s..*e].iter().map(|b| b.text(g)).collect();
            parts.push(format!("{label}: ⟨{}⟩", inner.join(", ")));
        }
        format!("⟨{}⟩", parts.join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_g5_d10() {
        let p = derive_params(5, 10).unwrap();
        assert_eq!((p.i_d, p.m, p.m_1, p.m_2, p.v), (4, 2, 0, 1, 4));
        assert!(p.proven_range);
    }

    #[test]
    fn params_g2_d4() {
        let p = derive_params(2, 4).unwrap();
        assert_eq!((p.i_d, p.m, p.v), (1, 2, 1));
    }

    #[test]
    fn params_g5_d9() {
        let p = derive_params(5, 9).unwrap();
        assert_eq!((p.i_d, p.m, p.v), (4, 1, 4));
        // cross-check: m = d+g-1-3 i_d = 13 - 12 = 1
        assert_eq!(p.d + p.g - 1 - 3 * p.i_d, 1);
    }

    #[test]
    fn params_d_eq_2g_always_m2() {
        for g in 2..=12 {
            let p = ModuliParams::even(g).unwrap();
            assert_eq!(p.i_d, g - 1);
            assert_eq!(p.m, 2);
        }
    }

    #[test]
    fn params_rejections() {
        assert!(derive_params(1, 4).is_err());
        assert!(derive_params(2, 2).is_err());
        // d = 2g-4 has i_d > v
        assert!(derive_params(4, 4).is_err());
        assert!(derive_params_with(4, 4, true).is_ok());
    }

    #[test]
    fn lb_group_law() {
        assert_eq!(lb_combine(LineBundle::new(1, 4), LineBundle::new(0, -1)), LineBundle::new(1, 3));
        let x = LineBundle::new(7, -3);
        assert_eq!(lb_combine(LineBundle::zero(), x), x);
    }

    #[test]
    fn t2_for_g3_d6() {
        // θ²Λ = O(2,3) must equal O(2, 2 i_d - m_2 - m_1) for (g,d) = (3,6).
        let p = derive_params(3, 6).unwrap();
        let t2 = LineBundle::theta(3).pow(2).combine(LineBundle::big_lambda());
        assert_eq!(t2, LineBundle::new(2, 3));
        assert_eq!(t2, LineBundle::new(2, 2 * p.i_d - p.m_2 - p.m_1));
    }

    #[test]
    fn omega_identities() {
        for g in 2..=12 {
            // ω_{M_{g-1}(2g)} = θ^{-3} Λ^{-1}
            let omega = LineBundle::omega(2 * g, g);
            let rhs = LineBundle::theta(g).pow(-3).combine(LineBundle::big_lambda().pow(-1));
            assert_eq!(omega, rhs);
            assert_eq!(omega, LineBundle::new(-3, 4 - 3 * g));
            // odd side: ω = Z^{-3} Λ^{-2} with Z = O(1, g-1)
            let omega_odd = LineBundle::omega(2 * g - 1, g);
            let rhs_odd = LineBundle::theta(g).pow(-3).combine(LineBundle::big_lambda().pow(-2));
            assert_eq!(omega_odd, rhs_odd);
        }
    }

    #[test]
    fn theta_lambda_coords_roundtrip() {
        for g in 2..=8 {
            for x in -5..=5 {
                for y in -5..=5 {
                    let lb = LineBundle::from_theta_lambda(x, y, g);
                    assert_eq!(lb.theta_lambda(g), (x, y));
                }
            }
        }
    }

    #[test]
    fn dual_is_involution() {
        let amb = Ambient::ZCirc;
        for g in 2..=6 {
            for x in -3..=3 {
                for y in -3..=3 {
                    for z in 0..=4 {
                        for fam in [KernelFamily::TensorDualF, KernelFamily::BarTensorDualF] {
                            let mut b = Block::theta_lambda_dual_f(amb, x, y, z, g);
                            b.family = fam;
                            if z == 0 {
                                b = b.normalized();
                            }
                            let dd = dual_block(&dual_block(&b, g).unwrap(), g).unwrap();
                            assert!(dd.same_label(&b), "dual not involutive on {b:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dual_examples() {
        let g = 5;
        // θ Λ^0 F̄∨⊠3 -> θ^{-1} Λ^3 F∨⊠3
        let mut b = Block::theta_lambda_dual_f(Ambient::ZCirc, 1, 0, 3, g);
        b.family = KernelFamily::BarTensorDualF;
        let d = dual_block(&b, g).unwrap();
        assert_eq!(d.theta_lambda(g), (-1, 3));
        assert_eq!(d.family, KernelFamily::TensorDualF);
        // Λ^{-k} -> Λ^{k}
        let lk = Block::theta_lambda_dual_f(Ambient::ZCirc, 0, -4, 0, g).normalized();
        let dk = dual_block(&lk, g).unwrap();
        assert_eq!(dk.theta_lambda(g), (0, 4));
    }

    #[test]
    fn dual_rejects_dsheaf() {
        let p = derive_params(2, 4).unwrap();
        let b = Block::new(Ambient::M { i: p.i_d, d: p.d }, KernelFamily::DSheaf, 1, LineBundle::zero());
        assert!(dual_block(&b, p.g).is_err());
    }

    #[test]
    fn restriction_examples() {
        let p = derive_params(5, 10).unwrap();
        let i = 3;
        let s = 2;
        // L^{i,s}_i = O(s, s i) restricts to O(s) = Λ^{-s} on the fibers of D^i_i
        let lb = LineBundle::new(s, s * i);
        match restrict_to_stratum(lb, i, i, &p).unwrap() {
            Restricted::FiberLambda(w) => assert_eq!(w, -s),
            _ => panic!("expected fiber restriction"),
        }
        match restrict_to_stratum(LineBundle::zero(), 1, 2, &p).unwrap() {
            Restricted::Bundle(b) => assert_eq!(b, LineBundle::zero()),
            _ => panic!("expected bundle restriction"),
        }
        assert!(restrict_to_stratum(lb, 3, 2, &p).is_err());
        assert!(restrict_to_stratum(lb, 0, p.i_d + 1, &p).is_err());
    }

    #[test]
    fn dsheaf_top_stratum_normalization() {
        let p = derive_params(2, 4).unwrap();
        let amb = Ambient::M { i: p.i_d, d: p.d };
        // D^1(2, 2(i_d - 1)) has fiber weight 0 and equals D^1
        let tw = LineBundle::new(2, 2 * (p.i_d - 1));
        let a = Block::new(amb, KernelFamily::DSheaf, p.i_d, tw);
        let b = Block::new(amb, KernelFamily::DSheaf, p.i_d, LineBundle::zero());
        assert!(a.same_label(&b));
    }

    #[test]
    fn sod_validation() {
        let mut sod = Sod::new("test");
        let b = Block::new(Ambient::ZCirc, KernelFamily::StructureSheaf, 0, LineBundle::zero());
        sod.push_megablock("I", vec![b, b]);
        sod.push_megablock("II", vec![b]);
        sod.validate().unwrap();
        sod.megablocks[1].0 = 1;
        assert!(sod.validate().is_err());
    }

    #[test]
    fn block_json_roundtrip() {
        let b = Block::new(Ambient::ZCirc, KernelFamily::TensorDualF, 2, LineBundle::new(0, -1))
            .with_annotation(Annotation::DescendsToN);
        let s = serde_json::to_string(&b).unwrap();
        let back: Block = serde_json::from_str(&s).unwrap();
        assert_eq!(b, back);
    }
}
