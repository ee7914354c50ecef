//! Inequality-based vanishing predicates and the certificate machinery.
//!
//! The base predicates are pure integer arithmetic. A verdict of
//! `Uncertified` never asserts non-vanishing; it only means the cited
//! criterion does not apply as instantiated. The rule table of
//! [`certify_hom`] is closed-world: exactly the reductions used by the
//! pipelines are encoded, and novel claims come back uncertified.

use serde::{Deserialize, Serialize};

use crate::lattice::{dual_block, restrict_to_stratum, Ambient, Block, KernelFamily, LineBundle, ModuliParams, Restricted};

/// Oracle configuration. With `conjectural` set, instances outside the
/// proven degree window `2 < d' <= 2g+1` are accepted as conditional
/// whenever the inequalities themselves hold and `3j <= d'+g-1`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleMode {
    pub conjectural: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Certified,
    /// Certified only under the extended-range conjecture.
    Conjectural,
    Uncertified,
}

impl Verdict {
    pub fn passes(self) -> bool {
        matches!(self, Verdict::Certified | Verdict::Conjectural)
    }
}

/// One closed-interval side condition `lo <= value <= hi`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeCheck {
    pub label: String,
    pub value: i64,
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl RangeCheck {
    pub fn holds(&self) -> bool {
        self.lo.map_or(true, |lo| lo <= self.value) && self.hi.map_or(true, |hi| self.value <= hi)
    }
}

/// Exact rational represented as `num/den`, `den > 0`, for window bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rat {
    pub num: i64,
    pub den: i64,
}

impl Rat {
    pub fn new(num: i64, den: i64) -> Self {
        debug_assert!(den > 0);
        Rat { num, den }
    }
    pub fn int(n: i64) -> Self {
        Rat { num: n, den: 1 }
    }
    pub fn le(self, other: Rat) -> bool {
        self.num * other.den <= other.num * self.den
    }
    pub fn lt(self, other: Rat) -> bool {
        self.num * other.den < other.num * self.den
    }
}

/// The instantiated base predicate of a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Predicate {
    /// `RΓ(M_j(d'), (F̄⊠a_D)^∨ ⊗ F̄⊠b_{D'} ⊗ Λ^t) = 0` under
    /// `t ∉ [0,a]` and `a-j-1 < t < d'+g-2j-1-b`.
    Hv1 { dprime: i64, j: i64, a: i64, b: i64, t: i64, g: i64 },
    /// Same vanishing under `a < t < d'+g-2j-1-b`; `j = 0` allowed for any
    /// `d' > 0`.
    Hv2 { dprime: i64, j: i64, a: i64, b: i64, t: i64, g: i64 },
    /// Untwisted vanishing under `a <= j`, `b < d'+g-2j-1`, and a
    /// divisor-incomparability witness (callers pass `a > b`).
    Hv3 { dprime: i64, j: i64, a: i64, b: i64, not_leq: bool, g: i64 },
    /// Reordering vanishing with the extra condition `2t < a-b`.
    Bl { dprime: i64, j: i64, a: i64, b: i64, t: i64, g: i64 },
    /// The θ^{±1}-twisted chain used when flipping bars:
    /// `λ-2k-g < λ-k-(λ'-k') < g-λ'+2k'`.
    BarFlipChain { lam: i64, k: i64, lam2: i64, k2: i64, g: i64 },
    /// Projective-bundle chain `-1-2k < l-k < 1+2l`.
    HeckeChain1 { k: i64, l: i64 },
    /// Projective-bundle chain `-2k < l-k < 2l`.
    HeckeChain2 { k: i64, l: i64 },
    /// Serre-dual projective-bundle chain `-2-2l < k-l-2 < 2k-1`.
    HeckeChain3 { k: i64, l: i64 },
    /// Conjunction of closed-interval side conditions.
    RangeChecks { checks: Vec<RangeCheck> },
    /// Weight-interval containment `[lo, hi] ⊆ [win_lo, win_hi)` (half-open)
    /// or `[win_lo, win_hi]` (closed).
    WindowContainment { lo: Rat, hi: Rat, win_lo: Rat, win_hi: Rat, right_closed: bool },
    /// A family of instances; `binding` is the member with least slack and
    /// `failed` lists the first few failing members.
    Family { total: usize, binding: Option<Box<Predicate>>, failed: Vec<Predicate> },
    /// A step whose validity carries no numeric side condition (Serre
    /// rotations, global twists, certified rewrite rules).
    Structural { description: String },
    /// Identity Hom never vanishes.
    SelfHom,
    /// Outside the closed-world rule table.
    NoRule { reason: String },
}

fn proven_window(dprime: i64, j: i64, g: i64) -> bool {
    2 < dprime && dprime <= 2 * g + 1 && 1 <= j && j <= (dprime - 1).div_euclid(2)
}

fn conjectural_window(dprime: i64, j: i64, g: i64) -> bool {
    dprime > 2 && j >= 1 && j <= (dprime - 1).div_euclid(2) && 3 * j <= dprime + g - 1
}

fn window_verdict(dprime: i64, j: i64, g: i64, inequalities_hold: bool, mode: OracleMode) -> Verdict {
    if !inequalities_hold {
        return Verdict::Uncertified;
    }
    if proven_window(dprime, j, g) {
        Verdict::Certified
    } else if mode.conjectural && conjectural_window(dprime, j, g) {
        Verdict::Conjectural
    } else {
        Verdict::Uncertified
    }
}

impl Predicate {
    pub fn evaluate(&self, mode: OracleMode) -> Verdict {
        match self {
            Predicate::Hv1 { dprime, j, a, b, t, g } => {
                let bound = dprime + g - 2 * j - 1;
                let ineq = *a >= 0
                    && *b >= 0
                    && *a <= bound
                    && *b <= bound
                    && !(0 <= *t && *t <= *a)
                    && a - j - 1 < *t
                    && *t < bound - b;
                window_verdict(*dprime, *j, *g, ineq, mode)
            }
            Predicate::Hv2 { dprime, j, a, b, t, g } => {
                let bound = dprime + g - 2 * j - 1;
                let ineq = *a >= 0 && *b >= 0 && *a < *t && *t < bound - b;
                if !ineq {
                    return Verdict::Uncertified;
                }
                if *j == 0 {
                    // the j = 0 extension holds for any d' > 0
                    return if *dprime > 0 { Verdict::Certified } else { Verdict::Uncertified };
                }
                window_verdict(*dprime, *j, *g, ineq, mode)
            }
            Predicate::Hv3 { dprime, j, a, b, not_leq, g } => {
                let ineq = *a >= 0 && *b >= 0 && *a <= *j && *b < dprime + g - 2 * j - 1 && *not_leq;
                window_verdict(*dprime, *j, *g, ineq, mode)
            }
            Predicate::Bl { dprime, j, a, b, t, g } => {
                let ineq = *a >= 0
                    && *b >= 0
                    && *a <= *j
                    && *b <= *j
                    && a - j - 1 < *t
                    && *t < dprime + g - 2 * j - 1 - b
                    && 2 * t < a - b;
                window_verdict(*dprime, *j, *g, ineq, mode)
            }
            Predicate::BarFlipChain { lam, k, lam2, k2, g } => {
                let mid = lam - k - (lam2 - k2);
                if lam - 2 * k - g < mid && mid < g - lam2 + 2 * k2 {
                    Verdict::Certified
                } else {
                    Verdict::Uncertified
                }
            }
            Predicate::HeckeChain1 { k, l } => {
                if -1 - 2 * k < l - k && l - k < 1 + 2 * l {
                    Verdict::Certified
                } else {
                    Verdict::Uncertified
                }
            }
            Predicate::HeckeChain2 { k, l } => {
                if -2 * k < l - k && l - k < 2 * l {
                    Verdict::Certified
                } else {
                    Verdict::Uncertified
                }
            }
            Predicate::HeckeChain3 { k, l } => {
                if -2 - 2 * l < k - l - 2 && k - l - 2 < 2 * k - 1 {
                    Verdict::Certified
                } else {
                    Verdict::Uncertified
                }
            }
            Predicate::RangeChecks { checks } => {
                if checks.iter().all(RangeCheck::holds) {
                    Verdict::Certified
                } else {
                    Verdict::Uncertified
                }
            }
            Predicate::WindowContainment { lo, hi, win_lo, win_hi, right_closed } => {
                let left = win_lo.le(*lo);
                let right = if *right_closed { hi.le(*win_hi) } else { hi.lt(*win_hi) };
                if left && right {
                    Verdict::Certified
                } else {
                    Verdict::Uncertified
                }
            }
            Predicate::Family { failed, binding, total } => {
                if !failed.is_empty() {
                    return Verdict::Uncertified;
                }
                if *total == 0 {
                    return Verdict::Certified;
                }
                match binding {
                    Some(b) => b.evaluate(mode),
                    None => Verdict::Certified,
                }
            }
            Predicate::Structural { .. } => Verdict::Certified,
            Predicate::SelfHom => Verdict::Uncertified,
            Predicate::NoRule { .. } => Verdict::Uncertified,
        }
    }

    /// Minimal slack over the strict inequalities, used to pick binding
    /// family members and boundary-tight certificates. `None` when the
    /// predicate has no strict integer inequality.
    pub fn slack(&self) -> Option<i64> {
        match self {
            Predicate::Hv1 { dprime, j, a, b, t, g } => {
                let bound = dprime + g - 2 * j - 1;
                Some((t - (a - j - 1) - 1).min(bound - b - t - 1))
            }
            Predicate::Hv2 { dprime, j, a, b, t, g } => {
                let bound = dprime + g - 2 * j - 1;
                Some((t - a - 1).min(bound - b - t - 1))
            }
            Predicate::Hv3 { dprime, j, a: _, b, g, .. } => {
                Some(dprime + g - 2 * j - 1 - b - 1)
            }
            Predicate::Bl { dprime, j, a, b, t, g } => {
                let bound = dprime + g - 2 * j - 1;
                Some(
                    (t - (a - j - 1) - 1)
                        .min(bound - b - t - 1)
                        .min(a - b - 2 * t - 1),
                )
            }
            Predicate::BarFlipChain { lam, k, lam2, k2, g } => {
                let mid = lam - k - (lam2 - k2);
                Some((mid - (lam - 2 * k - g) - 1).min(g - lam2 + 2 * k2 - mid - 1))
            }
            Predicate::HeckeChain1 { k, l } => Some(((l - k) - (-1 - 2 * k) - 1).min(1 + 2 * l - (l - k) - 1)),
            Predicate::HeckeChain2 { k, l } => Some(((l - k) - (-2 * k) - 1).min(2 * l - (l - k) - 1)),
            Predicate::HeckeChain3 { k, l } => {
                let mid = k - l - 2;
                Some((mid - (-2 - 2 * l) - 1).min(2 * k - 1 - mid - 1))
            }
            _ => None,
        }
    }

    /// All single-operand `±1` perturbations of the integer fields, for the
    /// boundary-sensitivity checks.
    pub fn perturbations(&self) -> Vec<Predicate> {
        let mut out = Vec::new();
        let deltas = [-1i64, 1];
        match self {
            Predicate::Hv1 { dprime, j, a, b, t, g } => {
                for d in deltas {
                    out.push(Predicate::Hv1 { dprime: *dprime, j: *j, a: a + d, b: *b, t: *t, g: *g });
                    out.push(Predicate::Hv1 { dprime: *dprime, j: *j, a: *a, b: b + d, t: *t, g: *g });
                    out.push(Predicate::Hv1 { dprime: *dprime, j: *j, a: *a, b: *b, t: t + d, g: *g });
                }
            }
            Predicate::Hv2 { dprime, j, a, b, t, g } => {
                for d in deltas {
                    out.push(Predicate::Hv2 { dprime: *dprime, j: *j, a: a + d, b: *b, t: *t, g: *g });
                    out.push(Predicate::Hv2 { dprime: *dprime, j: *j, a: *a, b: b + d, t: *t, g: *g });
                    out.push(Predicate::Hv2 { dprime: *dprime, j: *j, a: *a, b: *b, t: t + d, g: *g });
                }
            }
            Predicate::Hv3 { dprime, j, a, b, not_leq, g } => {
                for d in deltas {
                    out.push(Predicate::Hv3 { dprime: *dprime, j: *j, a: a + d, b: *b, not_leq: *not_leq, g: *g });
                    out.push(Predicate::Hv3 { dprime: *dprime, j: *j, a: *a, b: b + d, not_leq: *not_leq, g: *g });
                }
            }
            Predicate::Bl { dprime, j, a, b, t, g } => {
                for d in deltas {
                    out.push(Predicate::Bl { dprime: *dprime, j: *j, a: a + d, b: *b, t: *t, g: *g });
                    out.push(Predicate::Bl { dprime: *dprime, j: *j, a: *a, b: b + d, t: *t, g: *g });
                    out.push(Predicate::Bl { dprime: *dprime, j: *j, a: *a, b: *b, t: t + d, g: *g });
                }
            }
            _ => {}
        }
        out
    }
}

/// One symbolic step of a reduction chain. Replaying the steps from the
/// original claim must reproduce the stored base predicate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "kebab-case")]
pub enum ReductionStep {
    /// Tensor both sides by the inverse of a common twist.
    CancelTwist { twist: LineBundle },
    /// `⊠F^∨⊠a_D = Λ^{-a} ⊠F⊠a_D` on the source or target.
    UndualizeKernel { sym: i64 },
    /// Swap source and target while flipping bars, turning dual-tensor Homs
    /// into the bar frame.
    SwapBar,
    /// Restrict the claim along the stratum `D^{k'}` at the given level.
    RestrictToStratum { kprime: i64, level: i64 },
    /// Serre duality with the ambient dualizing bundle.
    SerreDuality { omega: LineBundle },
    /// Dualize both blocks.
    DualizeBoth,
    /// Match the reduced claim against a base predicate.
    MatchPredicate,
}

/// Audit record of one certified (or refused) step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    /// Rule identifier, e.g. `farey-twill-mutation`.
    pub rule: String,
    /// Source and target of the Hom claim, when the certificate arose from
    /// a block-pair query.
    pub claim: Option<(Block, Block)>,
    pub reduction: Vec<ReductionStep>,
    pub predicate: Predicate,
    pub verdict: Verdict,
}

impl Certificate {
    pub fn new(rule: impl Into<String>, reduction: Vec<ReductionStep>, predicate: Predicate, mode: OracleMode) -> Self {
        let verdict = predicate.evaluate(mode);
        Certificate { rule: rule.into(), claim: None, reduction, predicate, verdict }
    }

    pub fn with_claim(mut self, a: Block, b: Block) -> Self {
        self.claim = Some((a, b));
        self
    }

    pub fn structural(rule: impl Into<String>, description: impl Into<String>) -> Self {
        Certificate::new(
            rule,
            vec![],
            Predicate::Structural { description: description.into() },
            OracleMode::default(),
        )
    }
}

/// Builds a family certificate out of per-instance predicates: all must
/// hold; the binding member (least slack) is retained for audit.
pub fn family_certificate(
    rule: impl Into<String>,
    reduction: Vec<ReductionStep>,
    instances: impl IntoIterator<Item = Predicate>,
    mode: OracleMode,
) -> Certificate {
    let mut total = 0usize;
    let mut binding: Option<(i64, Predicate)> = None;
    let mut failed = Vec::new();
    let mut any_conjectural = false;
    for inst in instances {
        total += 1;
        match inst.evaluate(mode) {
            Verdict::Uncertified => {
                if failed.len() < 4 {
                    failed.push(inst);
                }
            }
            Verdict::Conjectural => any_conjectural = true,
            Verdict::Certified => {}
        }
        if failed.is_empty() {
            let s = binding.as_ref().map(|(s, _)| *s);
            if let Some(slack) = inst.slack() {
                if s.map_or(true, |cur| slack < cur) {
                    binding = Some((slack, inst));
                }
            }
        }
    }
    let predicate = Predicate::Family {
        total,
        binding: binding.map(|(_, p)| Box::new(p)),
        failed,
    };
    let mut cert = Certificate::new(rule, reduction, predicate, mode);
    if any_conjectural && cert.verdict == Verdict::Certified {
        cert.verdict = Verdict::Conjectural;
    }
    cert
}

pub fn certify_hv1(dprime: i64, j: i64, a: i64, b: i64, t: i64, g: i64) -> Certificate {
    certify_hv1_with(dprime, j, a, b, t, g, OracleMode::default())
}

pub fn certify_hv1_with(dprime: i64, j: i64, a: i64, b: i64, t: i64, g: i64, mode: OracleMode) -> Certificate {
    Certificate::new(
        "hard-vanishing-1",
        vec![ReductionStep::MatchPredicate],
        Predicate::Hv1 { dprime, j, a, b, t, g },
        mode,
    )
}

pub fn certify_hv2(dprime: i64, j: i64, a: i64, b: i64, t: i64, g: i64) -> Certificate {
    certify_hv2_with(dprime, j, a, b, t, g, OracleMode::default())
}

pub fn certify_hv2_with(dprime: i64, j: i64, a: i64, b: i64, t: i64, g: i64, mode: OracleMode) -> Certificate {
    Certificate::new(
        "hard-vanishing-2",
        vec![ReductionStep::MatchPredicate],
        Predicate::Hv2 { dprime, j, a, b, t, g },
        mode,
    )
}

pub fn certify_hv3(dprime: i64, j: i64, a: i64, b: i64, not_leq: bool, g: i64) -> Certificate {
    Certificate::new(
        "hard-vanishing-3",
        vec![ReductionStep::MatchPredicate],
        Predicate::Hv3 { dprime, j, a, b, not_leq, g },
        OracleMode::default(),
    )
}

pub fn certify_bl(dprime: i64, j: i64, a: i64, b: i64, t: i64, g: i64) -> Certificate {
    certify_bl_with(dprime, j, a, b, t, g, OracleMode::default())
}

pub fn certify_bl_with(dprime: i64, j: i64, a: i64, b: i64, t: i64, g: i64, mode: OracleMode) -> Certificate {
    Certificate::new(
        "reordering-vanishing",
        vec![ReductionStep::MatchPredicate],
        Predicate::Bl { dprime, j, a, b, t, g },
        mode,
    )
}

fn ambient_level(ambient: Ambient) -> Option<(i64, i64)> {
    match ambient {
        Ambient::M { i, d } => Some((i, d)),
        _ => None,
    }
}

/// Mechanized reduction of a Hom-vanishing claim between two blocks to one
/// base predicate instance. Closed-world: claims outside the rule table are
/// uncertified with reason `no reduction rule applies`.
pub fn certify_hom(a: &Block, b: &Block, params: &ModuliParams, mode: OracleMode) -> Certificate {
    let g = params.g;
    if a.ambient != b.ambient {
        return Certificate::new(
            "hom-reduction",
            vec![],
            Predicate::NoRule { reason: "blocks live on different ambient spaces".into() },
            mode,
        )
        .with_claim(*a, *b);
    }
    if a.same_label(b) {
        return Certificate::new("hom-reduction", vec![], Predicate::SelfHom, mode).with_claim(*a, *b);
    }
    let (i, d) = match ambient_level(a.ambient) {
        Some(x) => x,
        None => {
            // On Z° the windows identification transports every claim to the
            // stable-pair space at the top index.
            (params.i_d, params.d)
        }
    };

    let mut steps = Vec::new();
    let src = a.normalized();
    let tgt = b.normalized();

    // Cancel the common twist.
    let common = LineBundle::new(src.twist.m.min(tgt.twist.m), src.twist.n.min(tgt.twist.n));
    let (mut src_tw, mut tgt_tw) = (src.twist, tgt.twist);
    if !common.is_zero() {
        steps.push(ReductionStep::CancelTwist { twist: common });
        src_tw = src_tw.combine(common.inverse());
        tgt_tw = tgt_tw.combine(common.inverse());
    }
    let (sx, sy) = src_tw.theta_lambda(g);
    let (tx, ty) = tgt_tw.theta_lambda(g);
    let dx = tx - sx; // net θ-power of Hom(source, target)
    let dy = ty - sy; // net Λ-power

    use KernelFamily::*;
    let predicate: Option<(Vec<ReductionStep>, Predicate)> = match (src.family, tgt.family) {
        // Hom(F^∨⊠b'_{D'}, Λ-power) -> RΓ(F̄⊠b' ⊗ Λ^t) = 0, hv1 with a = 0.
        (TensorDualF, StructureSheaf) if dx == 0 => {
            let mut s = steps.clone();
            s.push(ReductionStep::SwapBar);
            s.push(ReductionStep::MatchPredicate);
            Some((s, Predicate::Hv1 { dprime: d, j: i, a: 0, b: src.sym_power, t: -dy, g }))
        }
        // Hom(Λ-power, F^∨⊠a_D) -> RΓ((F̄⊠a_D)^∨ Λ^t) = 0, hv2 with b = 0.
        (StructureSheaf, TensorDualF) if dx == 0 => {
            let mut s = steps.clone();
            s.push(ReductionStep::SwapBar);
            s.push(ReductionStep::MatchPredicate);
            Some((s, Predicate::Hv2 { dprime: d, j: i, a: tgt.sym_power, b: 0, t: dy, g }))
        }
        // Hom(F^∨⊠b'_{D'}, F^∨⊠a_D) with no twist -> hv3 via the degree witness.
        (TensorDualF, TensorDualF) if dx == 0 && dy == 0 => {
            let mut s = steps.clone();
            s.push(ReductionStep::SwapBar);
            s.push(ReductionStep::MatchPredicate);
            Some((
                s,
                Predicate::Hv3 {
                    dprime: d,
                    j: i,
                    a: tgt.sym_power,
                    b: src.sym_power,
                    not_leq: tgt.sym_power > src.sym_power,
                    g,
                },
            ))
        }
        // Hom(Λ^{-k} F^∨⊠(λ-2k)_D, Λ^{-k'} F^∨⊠(λ'-2k')_{D'}): the
        // reordering reduction. Roles: the target block is the dualized one.
        (TensorDualF, TensorDualF) if dx == 0 => {
            let k = -sy;
            let k2 = -ty;
            let lam = src.sym_power + 2 * k;
            let lam2 = tgt.sym_power + 2 * k2;
            let mut s = steps.clone();
            s.push(ReductionStep::UndualizeKernel { sym: src.sym_power });
            s.push(ReductionStep::UndualizeKernel { sym: tgt.sym_power });
            s.push(ReductionStep::SwapBar);
            s.push(ReductionStep::MatchPredicate);
            Some((
                s,
                Predicate::Bl { dprime: d, j: i, a: lam2 - 2 * k2, b: lam - 2 * k, t: k - k2, g },
            ))
        }
        // Hom(F^∨⊠l_D, Λ-twisted D-sheaf): restrict to the stratum.
        (TensorDualF, DSheaf) if dx == 0 => {
            let m = tgt.sym_power;
            let mut s = steps.clone();
            s.push(ReductionStep::RestrictToStratum { kprime: m, level: i });
            s.push(ReductionStep::SwapBar);
            s.push(ReductionStep::MatchPredicate);
            Some((
                s,
                Predicate::Hv1 { dprime: d - 2 * m, j: i - m, a: 0, b: src.sym_power, t: dy, g },
            ))
        }
        // Hom(Λ-twisted D-sheaf, F^∨⊠m_{D'}): Serre duality then restrict.
        (DSheaf, TensorF | TensorDualF) if dx == 0 => {
            let l = src.sym_power;
            let mut s = steps.clone();
            s.push(ReductionStep::SerreDuality { omega: LineBundle::omega(d, g) });
            s.push(ReductionStep::RestrictToStratum { kprime: l, level: i });
            s.push(ReductionStep::MatchPredicate);
            Some((
                s,
                Predicate::Hv2 { dprime: d - 2 * l, j: i - l, a: tgt.sym_power, b: 0, t: -dy, g },
            ))
        }
        // Hom(D^k Λ^{-j}, D^{k'} Λ^{-j'}): the level reordering family.
        (DSheaf, DSheaf) if dx == 0 => {
            let k = src.sym_power;
            let k2 = tgt.sym_power;
            let jj = -sy;
            let jj2 = -ty;
            let mut s = steps.clone();
            s.push(ReductionStep::SerreDuality { omega: LineBundle::omega(d, g) });
            s.push(ReductionStep::RestrictToStratum { kprime: k, level: i });
            s.push(ReductionStep::MatchPredicate);
            let insts = dsheaf_reordering_family(d, i, k, jj, k2, jj2, g);
            let mut fam = family_certificate("hom-reduction", s, insts, mode);
            fam.claim = Some((*a, *b));
            return fam;
        }
        // Mixed bar frames with a net θ twist: the bar-flip chain.
        (BarTensorDualF, TensorDualF) | (TensorDualF, BarTensorDualF) if dx.abs() == 1 => {
            let (bar, plain, bar_y, plain_y) = if src.family == BarTensorDualF {
                (src, tgt, sy, ty)
            } else {
                (tgt, src, ty, sy)
            };
            // Frame of the bar-flip claims: Λ-powers 1-k on both sides.
            let k = 1 - plain_y;
            let k2 = 1 - bar_y;
            let lam = plain.sym_power + 2 * k;
            let lam2 = bar.sym_power + 2 * k2;
            let mut s = steps.clone();
            s.push(ReductionStep::DualizeBoth);
            s.push(ReductionStep::MatchPredicate);
            Some((s, Predicate::BarFlipChain { lam, k, lam2, k2, g }))
        }
        _ => None,
    };

    match predicate {
        Some((reduction, predicate)) => {
            Certificate::new("hom-reduction", reduction, predicate, mode).with_claim(*a, *b)
        }
        None => Certificate::new(
            "hom-reduction",
            steps,
            Predicate::NoRule { reason: "no reduction rule applies".into() },
            mode,
        )
        .with_claim(*a, *b),
    }
}

/// Family behind `Hom(D^k Λ^{-j}, D^{k'} Λ^{-j'}) = 0` for `j'+k' < j+k`:
/// `RΓ(M_{i-k}(d-2k), (F̄⊠l')^∨ Λ^{j-j'-m'+k}) = 0` over `0 <= l' <= k'`,
/// `0 <= m' <= k'-l'`.
pub fn dsheaf_reordering_family(
    d: i64,
    i: i64,
    k: i64,
    j: i64,
    k2: i64,
    j2: i64,
    g: i64,
) -> Vec<Predicate> {
    let mut out = Vec::new();
    for lp in 0..=k2 {
        for mp in 0..=(k2 - lp) {
            out.push(Predicate::Hv2 {
                dprime: d - 2 * k,
                j: i - k,
                a: lp,
                b: 0,
                t: j - j2 - mp + k,
                g,
            });
        }
    }
    out
}

/// Replays a certificate's reduction chain from its claim and checks that it
/// reproduces the stored base predicate. Certificates without a claim are
/// vacuously consistent.
pub fn replay_reduction(cert: &Certificate, params: &ModuliParams) -> bool {
    let (a, b) = match &cert.claim {
        Some(pair) => pair,
        None => return true,
    };
    if matches!(cert.predicate, Predicate::SelfHom | Predicate::NoRule { .. } | Predicate::Structural { .. }) {
        return true;
    }
    let recomputed = certify_hom(a, b, params, OracleMode { conjectural: true });
    // Replay equivalence means the same predicate falls out of the chain.
    match (&cert.predicate, &recomputed.predicate) {
        (Predicate::Family { binding: x, total: t1, .. }, Predicate::Family { binding: y, total: t2, .. }) => {
            x == y && t1 == t2
        }
        (p, q) => p == q,
    }
}

/// Sanity check used by `restrict_to_stratum`-based reductions: the twist
/// difference restricts to an integral Λ-power on the stratum.
pub fn restriction_lambda_power(
    lb: LineBundle,
    kprime: i64,
    floor_t: i64,
    params: &ModuliParams,
) -> Option<i64> {
    match restrict_to_stratum(lb, kprime, floor_t, params) {
        Ok(Restricted::FiberLambda(w)) => Some(w),
        Ok(Restricted::Bundle(lb)) if lb.m == 0 => Some(-lb.n),
        _ => None,
    }
}

/// Convenience: dual of a block, threaded through for the claims that are
/// proved "via duality" (certified-by-construction bookkeeping).
pub fn dual_pair(a: &Block, b: &Block, g: i64) -> Option<(Block, Block)> {
    match (dual_block(b, g), dual_block(a, g)) {
        (Ok(x), Ok(y)) => Some((x, y)),
        _ => None,
    }
}
