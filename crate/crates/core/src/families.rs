//! Constructors for the named extremal and test families, each paired with the
//! values it is predicted to attain.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::check::{CheckResult, Status, Strictness};
use crate::error::{Error, Result};
use crate::ffield::{make_field, FieldCtx, FieldElem};
use crate::matgroup::{fixed_space_dim, mat_mul, MatGroup, SemilinearMap};
use crate::numtheory::{bound_f, bound_g, bound_h, ln_enclosure, prime_power, Bound};
use crate::perm::{Perm, PermGroup, DEFAULT_CAP};
use crate::ratio::{ExactRatio, Relation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyId {
    FrobeniusAffine,
    SharpGammal1,
    Sl25Z,
    Q8NormalizerMember,
    Sl2q,
    Extraspecial2,
    AltDeleted,
    ClassicalNatural,
}

impl FamilyId {
    pub const ALL: [FamilyId; 8] = [
        FamilyId::FrobeniusAffine,
        FamilyId::SharpGammal1,
        FamilyId::Sl25Z,
        FamilyId::Q8NormalizerMember,
        FamilyId::Sl2q,
        FamilyId::Extraspecial2,
        FamilyId::AltDeleted,
        FamilyId::ClassicalNatural,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyId::FrobeniusAffine => "frobenius_affine",
            FamilyId::SharpGammal1 => "sharp_gammal1",
            FamilyId::Sl25Z => "sl2_5_z",
            FamilyId::Q8NormalizerMember => "q8_normalizer_member",
            FamilyId::Sl2q => "sl2q",
            FamilyId::Extraspecial2 => "extraspecial2",
            FamilyId::AltDeleted => "alt_deleted",
            FamilyId::ClassicalNatural => "classical_natural",
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown family `{s}`")))
    }
}

/// Predicted exact statistics of a family member.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub delta: Option<ExactRatio>,
    pub alpha: Option<ExactRatio>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub id: FamilyId,
    pub params: Vec<i64>,
    pub prediction: Option<Prediction>,
}

impl FamilySpec {
    pub fn label(&self) -> String {
        let p: Vec<String> = self.params.iter().map(|x| x.to_string()).collect();
        format!("{}({})", self.id, p.join(","))
    }
}

/// A constructed family member; the group is not yet enumerated.
#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub spec: FamilySpec,
    pub group: MatGroup,
}

impl FamilyMember {
    pub fn name(&self) -> String {
        self.spec.label()
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}

fn field_of(q: u64) -> Result<Arc<FieldCtx>> {
    let (p, f) = prime_power(q).ok_or_else(|| invalid(format!("{q} is not a prime power")))?;
    Ok(Arc::new(make_field(p, f)?))
}

fn exact(b: Result<Bound>) -> Result<ExactRatio> {
    b?.exact().cloned().ok_or_else(|| invalid("threshold is irrational at this argument"))
}

fn mat(ctx: &FieldCtx, d: usize, m: Vec<FieldElem>) -> Result<SemilinearMap> {
    SemilinearMap::linear(ctx, d, m)
}

/// `F_n ⋊ ⟨ω^a⟩`: semiregular on `F_n \ {0}`, so `δ = a/n`.
pub fn frobenius_affine(n: u64, a: u64) -> Result<FamilyMember> {
    let ctx = field_of(n)?;
    if a == 0 || !(n - 1).is_multiple_of(a) {
        return Err(invalid(format!("{a} does not divide {n} - 1")));
    }
    let gen = mat(&ctx, 1, vec![ctx.omega_pow(a as i64)])?;
    let group = MatGroup::new(ctx, 1, vec![gen])?;
    Ok(FamilyMember {
        spec: FamilySpec {
            id: FamilyId::FrobeniusAffine,
            params: vec![n as i64, a as i64],
            prediction: Some(Prediction {
                delta: Some(ExactRatio::new(a, n)),
                alpha: Some(ExactRatio::new(a, n - 1)),
            }),
        },
        group,
    })
}

/// `GL_1(q) ⋊ ⟨σ⟩` with `σ: v ↦ v^(q^(1/2))`, predicted to attain `α = h(q)`, `δ = g(q)`.
pub fn sharp_gammal1(q: u64) -> Result<FamilyMember> {
    let ctx = field_of(q)?;
    if ctx.f() % 2 != 0 {
        return Err(invalid(format!("{q} is not an even power of its prime")));
    }
    let gens = vec![mat(&ctx, 1, vec![ctx.generator()])?, SemilinearMap::frobenius(&ctx, 1, ctx.f() / 2)?];
    let prediction = Prediction { delta: Some(exact(bound_g(q))?), alpha: Some(exact(bound_h(q))?) };
    Ok(FamilyMember {
        spec: FamilySpec { id: FamilyId::SharpGammal1, params: vec![q as i64], prediction: Some(prediction) },
        group: MatGroup::new(ctx, 1, gens)?,
    })
}

/// Determinant-one 2×2 matrices in a fixed order.
fn sl2_elements(ctx: &FieldCtx) -> impl Iterator<Item = [FieldElem; 4]> + '_ {
    let all: Vec<FieldElem> = ctx.elements().collect();
    let nz: Vec<FieldElem> = ctx.nonzero_elements().collect();
    let nz2 = nz.clone();
    let all2 = all.clone();
    let with_a = nz.into_iter().flat_map(move |a| {
        let all = all.clone();
        all.clone().into_iter().flat_map(move |b| {
            all.clone().into_iter().map(move |c| (a, b, c))
        })
    });
    let first = with_a.map(move |(a, b, c)| {
        let d = ctx.div(ctx.add(FieldElem::ONE, ctx.mul(b, c)), a).expect("a is nonzero");
        [a, b, c, d]
    });
    let second = nz2.into_iter().flat_map(move |b| {
        let c = ctx.neg(ctx.inv(b).expect("b is nonzero"));
        all2.clone().into_iter().map(move |d| [FieldElem::ZERO, b, c, d])
    });
    first.chain(second)
}

/// Element-order census of a group, as `(order, count)` pairs sorted by order.
pub fn order_census(group: &MatGroup) -> Result<Vec<(u64, u64)>> {
    let ctx = group.ctx().clone();
    let bound = group.require_order()?;
    let mut census = std::collections::BTreeMap::new();
    let mut err = None;
    group.for_each_element(|g| match g.order(&ctx, bound) {
        Ok(o) => *census.entry(o).or_insert(0u64) += 1,
        Err(e) => err = Some(e),
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(census.into_iter().collect())
}

/// Element orders of `SL_2(5)`.
pub const SL2_5_CENSUS: [(u64, u64); 7] = [(1, 1), (2, 1), (3, 20), (4, 30), (5, 24), (6, 20), (10, 24)];

/// `L = SL_2(5) ≤ SL_2(q)`, optionally with the scalars `Z = F_q^×` adjoined.
///
/// `L` is found by searching for `x` of order 10 and `y` of order 4 whose
/// closure has order 120 and the element-order census of `SL_2(5)`.
pub fn sl2_5_z(q: u64, with_full_scalars: bool) -> Result<FamilyMember> {
    if q % 10 != 1 && q % 10 != 9 {
        return Err(invalid(format!("SL_2(5) embeds in SL_2(q) only for q = ±1 mod 10, got {q}")));
    }
    let ctx = field_of(q)?;
    let as_map = |m: [FieldElem; 4]| SemilinearMap::linear(&ctx, 2, m.to_vec());
    let x = sl2_elements(&ctx)
        .map(as_map)
        .find(|g| g.as_ref().is_ok_and(|g| g.order(&ctx, 10).ok() == Some(10)))
        .ok_or(Error::SearchFailed("no element of order 10".into()))??;
    let mut found = None;
    for m in sl2_elements(&ctx) {
        let y = as_map(m)?;
        if y.order(&ctx, 4).ok() != Some(4) {
            continue;
        }
        let l = MatGroup::new(ctx.clone(), 2, vec![x.clone(), y.clone()])?;
        let Ok(l) = l.enumerated(120) else { continue };
        if l.order() == Some(120) && order_census(&l)? == SL2_5_CENSUS {
            found = Some(y);
            break;
        }
    }
    let y = found.ok_or_else(|| Error::SearchFailed(format!("no SL_2(5) found in SL_2({q})")))?;
    let mut gens = vec![x, y];
    if with_full_scalars {
        gens.push(SemilinearMap::scalar(&ctx, 2, ctx.generator())?);
    }
    let prediction = (with_full_scalars && q % 60 == 59).then(|| -> Result<Prediction> {
        Ok(Prediction { delta: Some(exact(bound_f(q * q))?), alpha: Some(ExactRatio::new(1, 60 * (q - 1))) })
    });
    Ok(FamilyMember {
        spec: FamilySpec {
            id: FamilyId::Sl25Z,
            params: vec![q as i64, with_full_scalars as i64],
            prediction: prediction.transpose()?,
        },
        group: MatGroup::new(ctx, 2, gens)?,
    })
}

/// `i = [[0,1],[-1,0]]`, `j = [[a,b],[b,-a]]` with `a² + b² = −1`.
fn q8_generators(ctx: &FieldCtx) -> Result<Vec<SemilinearMap>> {
    let minus_one = ctx.neg(FieldElem::ONE);
    let (a, b) = ctx
        .elements()
        .flat_map(|a| ctx.elements().map(move |b| (a, b)))
        .find(|&(a, b)| ctx.add(ctx.mul(a, a), ctx.mul(b, b)) == minus_one)
        .ok_or(Error::SearchFailed("no solution of a^2 + b^2 = -1".into()))?;
    Ok(vec![
        mat(ctx, 2, vec![FieldElem::ZERO, FieldElem::ONE, minus_one, FieldElem::ZERO])?,
        mat(ctx, 2, vec![a, b, b, ctx.neg(a)])?,
    ])
}

/// `Q_8 ≤ SL_2(q)`, `q` odd.
pub fn q8_in_gl2(q: u64) -> Result<MatGroup> {
    let ctx = field_of(q)?;
    if ctx.p() == 2 {
        return Err(invalid("Q_8 needs odd q"));
    }
    let gens = q8_generators(&ctx)?;
    MatGroup::new(ctx, 2, gens)
}

/// Members of the `Q_8` normalizer family: `variant` 0 is `Q_8`, 1 is `Z·Q_8`,
/// 2 is the full normalizer of `Q_8` in `GL_2(q)` (found by scanning `GL_2(q)`).
pub fn q8_normalizer_member(q: u64, variant: u32) -> Result<FamilyMember> {
    let base = q8_in_gl2(q)?;
    let ctx = base.ctx().clone();
    let group = match variant {
        0 => base,
        1 => {
            let mut gens = base.generators().to_vec();
            gens.push(SemilinearMap::scalar(&ctx, 2, ctx.generator())?);
            MatGroup::new(ctx.clone(), 2, gens)?
        }
        2 => {
            if q > 31 {
                return Err(Error::OutOfRange(format!("normalizer scan is limited to q ≤ 31, got {q}")));
            }
            let q8 = base.clone().enumerated(8)?;
            let gens = base.generators().to_vec();
            let all: Vec<FieldElem> = ctx.elements().collect();
            let mut normalizer = MatGroup::new(ctx.clone(), 2, gens.clone())?.enumerated(DEFAULT_CAP)?;
            let mut chosen = gens.clone();
            for &a in &all {
                for &b in &all {
                    for &c in &all {
                        for &d in &all {
                            let Ok(g) = mat(&ctx, 2, vec![a, b, c, d]) else { continue };
                            if normalizer.contains(&g)? {
                                continue;
                            }
                            let gi = g.invert(&ctx)?;
                            let normalizes = gens.iter().all(|h| {
                                let c = gi.compose(h, &ctx).and_then(|x| x.compose(&g, &ctx));
                                c.and_then(|c| q8.contains(&c)).unwrap_or(false)
                            });
                            if normalizes {
                                chosen.push(g);
                                normalizer = MatGroup::new(ctx.clone(), 2, chosen.clone())?.enumerated(DEFAULT_CAP)?;
                            }
                        }
                    }
                }
            }
            MatGroup::new(ctx.clone(), 2, chosen)?
        }
        _ => return Err(invalid(format!("Q_8 family variant {variant} is not 0, 1 or 2"))),
    };
    Ok(FamilyMember {
        spec: FamilySpec { id: FamilyId::Q8NormalizerMember, params: vec![q as i64, variant as i64], prediction: None },
        group,
    })
}

/// `SL_2(q)` from the elementary transvections and `diag(ω, ω⁻¹)`.
pub fn sl2(q: u64) -> Result<MatGroup> {
    classical_natural(ClassicalKind::Sl, 2, q).map(|m| m.group)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassicalKind {
    Sl,
    Sp,
    Su,
}

impl ClassicalKind {
    pub fn code(self) -> i64 {
        match self {
            ClassicalKind::Sl => 0,
            ClassicalKind::Sp => 1,
            ClassicalKind::Su => 2,
        }
    }

    pub fn from_code(c: i64) -> Result<Self> {
        match c {
            0 => Ok(ClassicalKind::Sl),
            1 => Ok(ClassicalKind::Sp),
            2 => Ok(ClassicalKind::Su),
            _ => Err(invalid(format!("classical kind code {c} is not 0 (SL), 1 (Sp) or 2 (SU)"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ClassicalKind::Sl => "SL",
            ClassicalKind::Sp => "Sp",
            ClassicalKind::Su => "SU",
        }
    }
}

impl FromStr for ClassicalKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sl" => Ok(ClassicalKind::Sl),
            "sp" => Ok(ClassicalKind::Sp),
            "su" => Ok(ClassicalKind::Su),
            _ => Err(invalid(format!("unknown classical kind `{s}`"))),
        }
    }
}

/// Order of `SL_n(s)`, `Sp_n(s)` or `SU_n(s)`.
pub fn classical_order(kind: ClassicalKind, n: u32, s: u64) -> Option<u64> {
    let pw = |e: u32| s.checked_pow(e);
    match kind {
        ClassicalKind::Sl => (2..=n).try_fold(pw(n * (n - 1) / 2)?, |acc, i| acc.checked_mul(pw(i)? - 1)),
        ClassicalKind::Sp => {
            let m = n / 2;
            (1..=m).try_fold(pw(m * m)?, |acc, i| acc.checked_mul(pw(2 * i)? - 1))
        }
        ClassicalKind::Su => (2..=n).try_fold(pw(n * (n - 1) / 2)?, |acc, i| {
            let t = if i % 2 == 0 { pw(i)? - 1 } else { pw(i)? + 1 };
            acc.checked_mul(t)
        }),
    }
}

fn elementary(ctx: &FieldCtx, n: usize, i: usize, j: usize, x: FieldElem) -> Result<SemilinearMap> {
    let mut m = identity(n);
    m[i * n + j] = x;
    mat(ctx, n, m)
}

fn identity(n: usize) -> Vec<FieldElem> {
    let mut m = vec![FieldElem::ZERO; n * n];
    for i in 0..n {
        m[i * n + i] = FieldElem::ONE;
    }
    m
}

/// Additive basis `1, ω, …, ω^(f−1)` of the field over its prime field.
fn additive_basis(ctx: &FieldCtx) -> Vec<FieldElem> {
    (0..ctx.f() as i64).map(|k| ctx.omega_pow(k)).collect()
}

fn sl_generators(ctx: &FieldCtx, n: usize) -> Result<Vec<SemilinearMap>> {
    let mut gens = Vec::new();
    for x in additive_basis(ctx) {
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    gens.push(elementary(ctx, n, i, j, x)?);
                }
            }
        }
    }
    Ok(gens)
}

/// Antidiagonal alternating form: `B(x, y) = Σ_{i<m} x_i y_{n−1−i} − x_{n−1−i} y_i`.
fn symplectic_form(ctx: &FieldCtx, n: usize, x: &[FieldElem], y: &[FieldElem]) -> FieldElem {
    (0..n / 2).fold(FieldElem::ZERO, |acc, i| {
        let j = n - 1 - i;
        ctx.add(acc, ctx.sub(ctx.mul(x[i], y[j]), ctx.mul(x[j], y[i])))
    })
}

/// Symplectic transvection `x ↦ x + a·B(x, v)·v`, as a matrix.
fn symplectic_transvection(ctx: &FieldCtx, n: usize, v: &[FieldElem], a: FieldElem) -> Result<SemilinearMap> {
    let mut m = identity(n);
    for r in 0..n {
        let mut e = vec![FieldElem::ZERO; n];
        e[r] = FieldElem::ONE;
        let c = ctx.mul(a, symplectic_form(ctx, n, &e, v));
        for k in 0..n {
            m[r * n + k] = ctx.add(m[r * n + k], ctx.mul(c, v[k]));
        }
    }
    mat(ctx, n, m)
}

fn sp_generators(ctx: &FieldCtx, n: usize) -> Result<Vec<SemilinearMap>> {
    let mut vs = Vec::new();
    for i in 0..n {
        let mut v = vec![FieldElem::ZERO; n];
        v[i] = FieldElem::ONE;
        vs.push(v.clone());
        for j in i + 1..n {
            let mut w = v.clone();
            w[j] = FieldElem::ONE;
            vs.push(w);
        }
    }
    let mut gens = Vec::new();
    for v in &vs {
        for a in additive_basis(ctx) {
            gens.push(symplectic_transvection(ctx, n, v, a)?);
        }
    }
    Ok(gens)
}

fn preserves_symplectic(ctx: &FieldCtx, n: usize, g: &SemilinearMap) -> bool {
    let basis: Vec<Vec<FieldElem>> = (0..n)
        .map(|i| {
            let mut v = vec![FieldElem::ZERO; n];
            v[i] = FieldElem::ONE;
            v
        })
        .collect();
    basis.iter().all(|x| {
        basis.iter().all(|y| {
            symplectic_form(ctx, n, &g.apply(ctx, x), &g.apply(ctx, y)) == symplectic_form(ctx, n, x, y)
        })
    })
}

/// `g·J·ḡᵀ = J` with `J` the antidiagonal identity and `ḡ` the entrywise `s`-th power.
fn is_unitary(ctx: &FieldCtx, n: usize, m: &[FieldElem], half: u32) -> bool {
    let mut jm = vec![FieldElem::ZERO; n * n];
    for i in 0..n {
        jm[i * n + (n - 1 - i)] = FieldElem::ONE;
    }
    let bar_t: Vec<FieldElem> =
        (0..n * n).map(|k| ctx.frobenius(m[(k % n) * n + k / n], half)).collect();
    let lhs = mat_mul(ctx, n, &mat_mul(ctx, n, m, &jm), &bar_t);
    lhs == jm
}

fn su_generators(ctx: &FieldCtx, n: usize) -> Result<Vec<SemilinearMap>> {
    if n != 3 {
        return Err(invalid("unitary groups are built in dimension 3 only"));
    }
    let half = ctx.f() / 2;
    let all: Vec<FieldElem> = ctx.elements().collect();
    let mut upper = Vec::new();
    for &a in &all {
        for &b in &all {
            for &c in &all {
                let m = vec![FieldElem::ONE, a, b, FieldElem::ZERO, FieldElem::ONE, c, FieldElem::ZERO, FieldElem::ZERO, FieldElem::ONE];
                if is_unitary(ctx, n, &m, half) && m != identity(n) {
                    upper.push(m);
                }
            }
        }
    }
    let mut gens = Vec::new();
    for m in upper {
        // Conjugating by the antidiagonal permutation matrix gives the lower root groups.
        let lower: Vec<FieldElem> = (0..n * n).map(|k| m[(n - 1 - k / n) * n + (n - 1 - k % n)]).collect();
        gens.push(mat(ctx, n, m)?);
        gens.push(mat(ctx, n, lower)?);
    }
    Ok(gens)
}

/// The natural module of `SL_n(s)`, `Sp_n(s)` (`n` even) or `SU_n(s)` (over
/// `F_(s²)`), with the group order certified against the order formula.
pub fn classical_natural(kind: ClassicalKind, n: u32, s: u64) -> Result<FamilyMember> {
    let d = n as usize;
    if n < 2 || d > crate::matgroup::MAX_DIM {
        return Err(Error::OutOfRange(format!("dimension {n}")));
    }
    let expected = classical_order(kind, n, s)
        .filter(|&o| o <= DEFAULT_CAP as u64)
        .ok_or_else(|| Error::OutOfRange(format!("{}_{n}({s}) exceeds the enumeration cap", kind.name())))?;
    let (ctx, gens) = match kind {
        ClassicalKind::Sl => {
            let ctx = field_of(s)?;
            let gens = sl_generators(&ctx, d)?;
            (ctx, gens)
        }
        ClassicalKind::Sp => {
            if !n.is_multiple_of(2) {
                return Err(invalid("symplectic groups need even dimension"));
            }
            let ctx = field_of(s)?;
            let gens = sp_generators(&ctx, d)?;
            if !gens.iter().all(|g| preserves_symplectic(&ctx, d, g)) {
                return Err(Error::Mismatch("symplectic generator does not preserve the form".into()));
            }
            (ctx, gens)
        }
        ClassicalKind::Su => {
            let ctx = field_of(s * s)?;
            let gens = su_generators(&ctx, d)?;
            (ctx, gens)
        }
    };
    let group = MatGroup::new(ctx, d, gens)?.enumerated(expected as usize)?;
    let got = group.require_order()?;
    if got != expected {
        return Err(Error::OrderMismatch { expected, got });
    }
    Ok(FamilyMember {
        spec: FamilySpec {
            id: FamilyId::ClassicalNatural,
            params: vec![kind.code(), n as i64, s as i64],
            prediction: None,
        },
        group,
    })
}

/// Bounds on `α` for the natural module: `(lower, upper)`.
pub fn natural_module_interval(kind: ClassicalKind, s: u64) -> (ExactRatio, ExactRatio) {
    let r = |a: u64, b: u64| ExactRatio::new(a, b);
    match kind {
        ClassicalKind::Sl => {
            let u = r(1, s - 1);
            ((ExactRatio::one() - &u) * &u, u)
        }
        ClassicalKind::Sp => ((ExactRatio::one() - r(1, s - 1)) * r(1, s), r(1, s - 1)),
        ClassicalKind::Su => {
            let u = r(s, s * s - 1);
            ((ExactRatio::one() - &u) * r(1, s + 1), u)
        }
    }
}

/// Proportion of elements fixing a nonzero vector.
pub fn eigenvalue_one_proportion(group: &MatGroup) -> Result<ExactRatio> {
    let hist = group.fixed_dim_histogram()?;
    let fixing: u64 = hist[1..].iter().sum();
    Ok(ExactRatio::new(fixing, group.require_order()?))
}

/// Exact `α` of the natural module against the interval for its kind
/// (`s ≥ 3`), or against `α > 1/2` for `SL_n(2)` and `Sp_n(2)`.
pub fn natural_module_bounds(kind: ClassicalKind, n: u32, s: u64) -> Result<CheckResult> {
    let member = classical_natural(kind, n, s)?;
    natural_module_check(&member, kind, n, s)
}

pub fn natural_module_check(member: &FamilyMember, kind: ClassicalKind, n: u32, s: u64) -> Result<CheckResult> {
    let alpha = eigenvalue_one_proportion(&member.group)?;
    let id = format!("natural-module/{}_{n}({s})", kind.name());
    if s == 2 && kind != ClassicalKind::Su {
        // Only SL_n(2) for n ≥ 3 and Sp_2n(2) for 2n ≥ 6 are claimed outright.
        let claimed = match kind {
            ClassicalKind::Sl => n >= 3,
            _ => n >= 6,
        };
        let strictness = if claimed { Strictness::Identity } else { Strictness::Asymptotic };
        return Ok(CheckResult::compare(id, "alpha(G, V) > 1/2 over F_2", alpha, Relation::Gt, ExactRatio::new(1, 2), strictness)
            .with("order", member.group.require_order()?)
            .ensure_witness());
    }
    let (lower, upper) = natural_module_interval(kind, s);
    let upper_ok = alpha <= upper;
    let mut r = CheckResult::compare(id, "lower(s) <= alpha(G, V) <= upper(s)", alpha.clone(), Relation::Ge, lower, Strictness::Identity)
        .with("upper", &upper)
        .with("upper_holds", upper_ok)
        .with("order", member.group.require_order()?);
    if !upper_ok {
        r = r.with_status(Status::Fail);
    }
    Ok(r.ensure_witness())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i64(x: i64) -> Result<Self> {
        match x {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(invalid(format!("sign must be +1 or -1, got {x}"))),
        }
    }
}

fn kron(ctx: &FieldCtx, a: &[FieldElem], da: usize, b: &[FieldElem], db: usize) -> Vec<FieldElem> {
    let n = da * db;
    let mut out = vec![FieldElem::ZERO; n * n];
    for i in 0..da {
        for j in 0..da {
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k) * n + (j * db + l)] = ctx.mul(a[i * da + j], b[k * db + l]);
                }
            }
        }
    }
    out
}

/// Nontrivial elements fixing a nonzero vector in `2_±^(1+2s)`: `4^s ± 2^s − 2`.
pub fn extraspecial_fixer_count(s: u32, sign: Sign) -> u64 {
    let a = 4u64.pow(s);
    let b = 2u64.pow(s);
    match sign {
        Sign::Plus => a + b - 2,
        Sign::Minus => a - b - 2,
    }
}

/// `2_±^(1+2s)` in `GL_(2^s)(q)` as a central product of `D_8` blocks, with
/// one `Q_8` block for the minus type.
pub fn extraspecial2(s: u32, sign: Sign, q: u64) -> Result<FamilyMember> {
    let dim = 1usize << s;
    if s == 0 || dim > crate::matgroup::MAX_DIM {
        return Err(Error::OutOfRange(format!("2^{s} exceeds the dimension ceiling")));
    }
    let ctx = field_of(q)?;
    if ctx.p() == 2 {
        return Err(invalid("extraspecial groups need odd q"));
    }
    let one = FieldElem::ONE;
    let zero = FieldElem::ZERO;
    let m1 = ctx.neg(one);
    let d8 = vec![vec![zero, one, one, zero], vec![one, zero, zero, m1]];
    let q8: Vec<Vec<FieldElem>> = q8_generators(&ctx)?.into_iter().map(|g| g.matrix().to_vec()).collect();
    let id2 = identity(2);
    let mut gens = Vec::new();
    for k in 0..s as usize {
        let block = if sign == Sign::Minus && k == 0 { &q8 } else { &d8 };
        for b in block {
            let mut m = vec![one];
            let mut dm = 1;
            for pos in 0..s as usize {
                let factor = if pos == k { b } else { &id2 };
                m = kron(&ctx, &m, dm, factor, 2);
                dm *= 2;
            }
            gens.push(mat(&ctx, dim, m)?);
        }
    }
    let order = 1u64 << (2 * s + 1);
    let count = extraspecial_fixer_count(s, sign);
    Ok(FamilyMember {
        spec: FamilySpec {
            id: FamilyId::Extraspecial2,
            params: vec![s as i64, sign.as_i64(), q as i64],
            prediction: Some(Prediction { delta: None, alpha: Some(ExactRatio::new(count + 1, order)) }),
        },
        group: MatGroup::new(ctx, dim, gens)?,
    })
}

/// Proportion of `A_m` with at most two cycles:
/// `2/m` for odd `m`, `2(Σ_{1≤i<m/2} 1/(i(m−i)) + 2/m²)` for even `m`.
pub fn two_cycle_formula(m: u64) -> ExactRatio {
    if m % 2 == 1 {
        return ExactRatio::new(2, m);
    }
    let mut s = ExactRatio::new(2, m * m);
    let mut i = 1;
    while 2 * i < m {
        s = s + ExactRatio::new(1, i * (m - i));
        i += 1;
    }
    ExactRatio::from_integer(2) * s
}

/// Matrix of a permutation on the fully deleted module over `F_p`, in the basis
/// `w_i = e_i − e_(m−1)` (reduced modulo the all-ones vector when `p | m`).
pub fn deleted_module_matrix(ctx: &FieldCtx, m: usize, sigma: &Perm) -> Result<SemilinearMap> {
    let quotient = (m as u64).is_multiple_of(ctx.p());
    let dim = if quotient { m - 2 } else { m - 1 };
    let mut out = vec![FieldElem::ZERO; dim * dim];
    let last = sigma.image((m - 1) as u32) as usize;
    for i in 0..dim {
        // image of w_i is w_{σ(i)} − w_{σ(m−1)}, with w_{m−1} = 0
        let mut row = vec![FieldElem::ZERO; m - 1];
        let a = sigma.image(i as u32) as usize;
        if a < m - 1 {
            row[a] = ctx.add(row[a], FieldElem::ONE);
        }
        if last < m - 1 {
            row[last] = ctx.sub(row[last], FieldElem::ONE);
        }
        if quotient {
            // w_{m−2} ≡ −Σ_{k<m−2} w_k
            let c = row[m - 2];
            for x in row.iter_mut().take(m - 2) {
                *x = ctx.sub(*x, c);
            }
        }
        out[i * dim..(i + 1) * dim].copy_from_slice(&row[..dim]);
    }
    mat(ctx, dim, out)
}

pub const ALT_DELETED_MAX: usize = 10;

/// `A_m` on its fully deleted permutation module over `F_p`.
pub fn alt_deleted(m: usize, p: u64) -> Result<FamilyMember> {
    if !(5..=ALT_DELETED_MAX).contains(&m) {
        return Err(Error::OutOfRange(format!("m = {m} outside 5..={ALT_DELETED_MAX}")));
    }
    let ctx = Arc::new(make_field(p, 1)?);
    let gens = PermGroup::alternating(m)?
        .generators()
        .iter()
        .map(|g| deleted_module_matrix(&ctx, m, g))
        .collect::<Result<Vec<_>>>()?;
    let dim = gens[0].dim();
    Ok(FamilyMember {
        spec: FamilySpec { id: FamilyId::AltDeleted, params: vec![m as i64, p as i64], prediction: None },
        group: MatGroup::new(ctx, dim, gens)?,
    })
}

/// Exhaustive scan of `A_m` on the fully deleted module.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeletedModuleCensus {
    pub m: usize,
    pub p: u64,
    pub order: u64,
    /// Proportion with at most two cycles.
    pub two_cycle: ExactRatio,
    /// Proportion fixing a nonzero vector of the module.
    pub alpha: ExactRatio,
    /// Elements with at least three cycles that fix no nonzero vector.
    pub three_cycle_exceptions: u64,
}

pub fn deleted_module_census(m: usize, p: u64) -> Result<DeletedModuleCensus> {
    let ctx = make_field(p, 1)?;
    let a = PermGroup::alternating(m)?.enumerated(DEFAULT_CAP)?;
    let (mut few, mut fixing, mut exceptions) = (0u64, 0u64, 0u64);
    let mut err = None;
    a.for_each_element(|g| {
        let cycles = g.cycle_count();
        match deleted_module_matrix(&ctx, m, g) {
            Ok(x) => {
                let fixes = fixed_space_dim(&ctx, &x) > 0;
                few += (cycles <= 2) as u64;
                fixing += fixes as u64;
                exceptions += (cycles >= 3 && !fixes) as u64;
            }
            Err(e) => err = Some(e),
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    let order = a.require_order()?;
    Ok(DeletedModuleCensus {
        m,
        p,
        order,
        two_cycle: ExactRatio::new(few, order),
        alpha: ExactRatio::new(fixing, order),
        three_cycle_exceptions: exceptions,
    })
}

/// Rational lower bound for `1 − 2(1 + ln m)/m`, using the upper end of the
/// certified enclosure of `ln m`.
pub fn deleted_module_floor(m: u64) -> ExactRatio {
    let (_, ln_hi) = ln_enclosure(m);
    ExactRatio::one() - ExactRatio::new(2, m) * (ExactRatio::one() + ln_hi)
}

/// Eigenvalue-`λ` proportions over every coset `SL_2(q)·diag(d, 1)` and every
/// `λ ∈ F_q^×`: at least `1/q`, exactly `1/(q−1)` when `λ² ≠ d`, and at least
/// `q/(q²−1)` when `λ² = d`.
pub fn coset_eigenvalue_checks(q: u64) -> Result<Vec<CheckResult>> {
    let base = sl2(q)?.enumerated(DEFAULT_CAP)?;
    let ctx = base.ctx().clone();
    let mut out = Vec::new();
    for d in ctx.nonzero_elements() {
        let rep = mat(&ctx, 2, vec![d, FieldElem::ZERO, FieldElem::ZERO, FieldElem::ONE])?;
        for lambda in ctx.nonzero_elements() {
            let prop = crate::matgroup::coset_eigenvalue_proportion(&base, &rep, lambda)?;
            let id = format!("coset-eigenvalue/q={q},det={},lambda={}", d.index(), lambda.index());
            let floor_ok = prop >= ExactRatio::new(1, q);
            let square = ctx.mul(lambda, lambda) == d;
            let (anchor, rel, rhs) = if square {
                ("eigenvalue-lambda proportion in a coset of SL_2(q) with lambda^2 = det is >= q/(q^2-1)", Relation::Ge, ExactRatio::new(q, q * q - 1))
            } else {
                ("eigenvalue-lambda proportion in a coset of SL_2(q) with lambda^2 != det is 1/(q-1)", Relation::Eq, ExactRatio::new(1, q - 1))
            };
            let mut r = CheckResult::compare(id, anchor, prop, rel, rhs, Strictness::Identity).with("at_least_1_over_q", floor_ok);
            if !floor_ok {
                r = r.with_status(Status::Fail);
            }
            out.push(r.ensure_witness());
        }
    }
    Ok(out)
}

/// Quadratic form `Q(x) = Σ_{i<n/2} x_i x_(n−1−i)` (plus type).
fn hyperbolic_q(ctx: &FieldCtx, x: &[FieldElem]) -> FieldElem {
    let n = x.len();
    (0..n / 2).fold(FieldElem::ZERO, |acc, i| ctx.add(acc, ctx.mul(x[i], x[n - 1 - i])))
}

fn hyperbolic_b(ctx: &FieldCtx, x: &[FieldElem], y: &[FieldElem]) -> FieldElem {
    let s: Vec<FieldElem> = x.iter().zip(y).map(|(&a, &b)| ctx.add(a, b)).collect();
    ctx.sub(ctx.sub(hyperbolic_q(ctx, &s), hyperbolic_q(ctx, x)), hyperbolic_q(ctx, y))
}

/// Generators of `Ω^+_n(s)`: the maps `x ↦ x + B(x,u)v − B(x,v)u` for
/// orthogonal singular basis vectors `u ≠ v`.
pub fn omega_plus_generators(n: usize, s: u64) -> Result<(Arc<FieldCtx>, Vec<SemilinearMap>)> {
    if !n.is_multiple_of(2) || !(4..=crate::matgroup::MAX_DIM).contains(&n) {
        return Err(invalid(format!("dimension {n} is not an even number in 4..=16")));
    }
    let ctx = field_of(s)?;
    let basis: Vec<Vec<FieldElem>> = (0..n)
        .map(|i| {
            let mut v = vec![FieldElem::ZERO; n];
            v[i] = FieldElem::ONE;
            v
        })
        .collect();
    let mut gens = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u == v || u + v == n - 1 {
                continue;
            }
            let mut m = vec![FieldElem::ZERO; n * n];
            for (r, x) in basis.iter().enumerate() {
                let bu = hyperbolic_b(&ctx, x, &basis[u]);
                let bv = hyperbolic_b(&ctx, x, &basis[v]);
                for k in 0..n {
                    let val = ctx.sub(ctx.add(x[k], ctx.mul(bu, basis[v][k])), ctx.mul(bv, basis[u][k]));
                    m[r * n + k] = val;
                }
            }
            let g = mat(&ctx, n, m)?;
            let keeps = basis.iter().all(|x| {
                let gx = g.apply(&ctx, x);
                hyperbolic_q(&ctx, &gx) == hyperbolic_q(&ctx, x)
                    && basis.iter().all(|y| hyperbolic_b(&ctx, &gx, &g.apply(&ctx, y)) == hyperbolic_b(&ctx, x, y))
            });
            if !keeps {
                return Err(Error::Mismatch("orthogonal generator does not preserve the form".into()));
            }
            gens.push(g);
        }
    }
    Ok((ctx, gens))
}

/// Sampled `α` of `Ω^+_n(s)` on its natural module by product replacement,
/// compared with the interval for that case by a 4σ band. Statistical only.
pub fn omega_plus_sampled(n: usize, s: u64, samples: u64, seed: u64) -> Result<CheckResult> {
    let (ctx, gens) = omega_plus_generators(n, s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut slots: Vec<SemilinearMap> = (0..10).map(|i| gens[i % gens.len()].clone()).collect();
    let mut acc = SemilinearMap::identity(n);
    let step = |slots: &mut Vec<SemilinearMap>, acc: &mut SemilinearMap, rng: &mut ChaCha8Rng| -> Result<()> {
        let i = rng.gen_range(0..slots.len());
        let mut j = rng.gen_range(0..slots.len() - 1);
        if j >= i {
            j += 1;
        }
        slots[i] = if rng.gen_bool(0.5) { slots[i].compose(&slots[j], &ctx)? } else { slots[j].compose(&slots[i], &ctx)? };
        *acc = acc.compose(&slots[i], &ctx)?;
        Ok(())
    };
    for _ in 0..200 {
        step(&mut slots, &mut acc, &mut rng)?;
    }
    let mut hits = 0u64;
    for _ in 0..samples {
        step(&mut slots, &mut acc, &mut rng)?;
        hits += (fixed_space_dim(&ctx, &acc) > 0) as u64;
    }
    let est = hits as f64 / samples as f64;
    let sigma = (est * (1.0 - est) / samples as f64).sqrt();
    let s2 = (s * s - 1) as f64;
    let lower = s as f64 * (1.0 - 2.0 * s as f64 / s2) / s2;
    let upper = 2.0 * s as f64 / s2;
    let consistent = est + 4.0 * sigma >= lower && est - 4.0 * sigma <= upper;
    Ok(CheckResult::statistical(
        format!("natural-module/Omega+_{n}({s})"),
        "s(1 - 2s/(s^2-1))/(s^2-1) <= alpha(G, V) <= 2s/(s^2-1), estimated by sampling",
    )
    .with("samples", samples)
    .with("hits", hits)
    .with("estimate", est)
    .with("sigma", sigma)
    .with("band", [est - 4.0 * sigma, est + 4.0 * sigma])
    .with("interval", [lower, upper])
    .with("consistent", consistent)
    .with("seed", seed))
}

/// Builds the family member named by `id` from integer parameters.
pub fn build_family(id: FamilyId, params: &[i64]) -> Result<FamilyMember> {
    let need = |k: usize| -> Result<()> {
        if params.len() == k {
            Ok(())
        } else {
            Err(invalid(format!("{id} takes {k} parameters, got {}", params.len())))
        }
    };
    let u = |i: usize| -> Result<u64> {
        u64::try_from(params[i]).map_err(|_| invalid(format!("parameter {} must be nonnegative", params[i])))
    };
    match id {
        FamilyId::FrobeniusAffine => {
            need(2)?;
            frobenius_affine(u(0)?, u(1)?)
        }
        FamilyId::SharpGammal1 => {
            need(1)?;
            sharp_gammal1(u(0)?)
        }
        FamilyId::Sl25Z => {
            need(2)?;
            sl2_5_z(u(0)?, u(1)? != 0)
        }
        FamilyId::Q8NormalizerMember => {
            need(2)?;
            q8_normalizer_member(u(0)?, u(1)? as u32)
        }
        FamilyId::Sl2q => {
            need(1)?;
            let mut m = classical_natural(ClassicalKind::Sl, 2, u(0)?)?;
            m.spec.id = FamilyId::Sl2q;
            m.spec.params = vec![params[0]];
            Ok(m)
        }
        FamilyId::Extraspecial2 => {
            if params.len() == 2 {
                extraspecial2(u(0)? as u32, Sign::from_i64(params[1])?, 3)
            } else {
                need(3)?;
                extraspecial2(u(0)? as u32, Sign::from_i64(params[1])?, u(2)?)
            }
        }
        FamilyId::AltDeleted => {
            need(2)?;
            alt_deleted(u(0)? as usize, u(1)?)
        }
        FamilyId::ClassicalNatural => {
            need(3)?;
            classical_natural(ClassicalKind::from_code(params[0])?, u(1)? as u32, u(2)?)
        }
    }
}
