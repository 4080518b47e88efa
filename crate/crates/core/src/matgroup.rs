//! Semilinear groups `G ≤ ΓL_d(q)` acting on row vectors of `V = F_q^d`.
//!
//! A map `(A, e)` sends `v` to `φ_e(v)·A`, where `φ_e` raises every coordinate
//! to the power `p^e`. Composition reads left to right: `(A, e)∘(B, e')` is
//! "apply `(A, e)`, then `(B, e')`" and equals `(φ_{e'}(A)·B, e + e' mod f)`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::check::{CheckResult, Strictness};
use crate::closure::{Action, Enumeration, DEFAULT_ROW_BUDGET};
use crate::error::{Error, Result};
use crate::ffield::{FieldCtx, FieldElem};
use crate::perm::{Perm, PermGroup, MAX_DEGREE};
use crate::ratio::{ExactRatio, Relation};

/// Largest supported dimension.
pub const MAX_DIM: usize = 16;
/// Ceiling on the number of proper nonzero subspaces scanned by [`is_irreducible`].
pub const SUBSPACE_CEILING: u64 = 1_000_000;

// ---------------------------------------------------------------------------
// Dense matrices over F_q, row-major.

pub(crate) fn mat_mul(ctx: &FieldCtx, d: usize, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    let mut out = vec![FieldElem::ZERO; d * d];
    for i in 0..d {
        for k in 0..d {
            let aik = a[i * d + k];
            if aik.is_zero() {
                continue;
            }
            for j in 0..d {
                out[i * d + j] = ctx.add(out[i * d + j], ctx.mul(aik, b[k * d + j]));
            }
        }
    }
    out
}

pub(crate) fn identity_matrix(d: usize) -> Vec<FieldElem> {
    let mut m = vec![FieldElem::ZERO; d * d];
    for i in 0..d {
        m[i * d + i] = FieldElem::ONE;
    }
    m
}

/// Row-reduces `m` (`rows × cols`) in place; returns the pivot columns.
fn row_reduce(ctx: &FieldCtx, m: &mut [FieldElem], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i * cols + c].is_zero()) else {
            continue;
        };
        for j in 0..cols {
            m.swap(r * cols + j, pr * cols + j);
        }
        let inv = ctx.inv(m[r * cols + c]).expect("pivot is nonzero");
        for j in 0..cols {
            m[r * cols + j] = ctx.mul(m[r * cols + j], inv);
        }
        for i in 0..rows {
            if i == r || m[i * cols + c].is_zero() {
                continue;
            }
            let factor = m[i * cols + c];
            for j in 0..cols {
                let sub = ctx.mul(factor, m[r * cols + j]);
                m[i * cols + j] = ctx.sub(m[i * cols + j], sub);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub(crate) fn mat_inverse(ctx: &FieldCtx, d: usize, a: &[FieldElem]) -> Result<Vec<FieldElem>> {
    let cols = 2 * d;
    let mut aug = vec![FieldElem::ZERO; d * cols];
    for i in 0..d {
        aug[i * cols..i * cols + d].copy_from_slice(&a[i * d..(i + 1) * d]);
        aug[i * cols + d + i] = FieldElem::ONE;
    }
    let pivots = row_reduce(ctx, &mut aug, d, cols);
    if pivots.len() < d || pivots[d - 1] >= d {
        return Err(Error::Singular);
    }
    let mut inv = vec![FieldElem::ZERO; d * d];
    for i in 0..d {
        inv[i * d..(i + 1) * d].copy_from_slice(&aug[i * cols + d..(i + 1) * cols]);
    }
    Ok(inv)
}

pub(crate) fn determinant(ctx: &FieldCtx, d: usize, a: &[FieldElem]) -> FieldElem {
    let mut m = a.to_vec();
    let mut det = FieldElem::ONE;
    for c in 0..d {
        let Some(pr) = (c..d).find(|&i| !m[i * d + c].is_zero()) else {
            return FieldElem::ZERO;
        };
        if pr != c {
            for j in 0..d {
                m.swap(c * d + j, pr * d + j);
            }
            det = ctx.neg(det);
        }
        let pivot = m[c * d + c];
        det = ctx.mul(det, pivot);
        let inv = ctx.inv(pivot).expect("pivot is nonzero");
        for i in c + 1..d {
            let factor = ctx.mul(m[i * d + c], inv);
            if factor.is_zero() {
                continue;
            }
            for j in c..d {
                let sub = ctx.mul(factor, m[c * d + j]);
                m[i * d + j] = ctx.sub(m[i * d + j], sub);
            }
        }
    }
    det
}

// ---------------------------------------------------------------------------

/// An invertible semilinear map `(A, e)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SemilinearMap {
    frob: u32,
    dim: usize,
    matrix: Vec<FieldElem>,
}

impl SemilinearMap {
    pub fn new(ctx: &FieldCtx, dim: usize, matrix: Vec<FieldElem>, frob: u32) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::OutOfRange(format!("dimension {dim} outside 1..={MAX_DIM}")));
        }
        if matrix.len() != dim * dim {
            return Err(Error::Mismatch(format!("{} entries for dimension {dim}", matrix.len())));
        }
        if frob >= ctx.f() {
            return Err(Error::OutOfRange(format!("Frobenius exponent {frob} not below {}", ctx.f())));
        }
        if let Some(x) = matrix.iter().find(|x| x.index() as u64 >= ctx.q()) {
            return Err(Error::OutOfRange(format!("entry {} not in F_{}", x.index(), ctx.q())));
        }
        if determinant(ctx, dim, &matrix).is_zero() {
            return Err(Error::Singular);
        }
        Ok(SemilinearMap { frob, dim, matrix })
    }

    pub fn linear(ctx: &FieldCtx, dim: usize, matrix: Vec<FieldElem>) -> Result<Self> {
        Self::new(ctx, dim, matrix, 0)
    }

    /// Builds a linear map from integer-encoded entries.
    pub fn from_indices(ctx: &FieldCtx, dim: usize, entries: &[u64], frob: u32) -> Result<Self> {
        let m = entries.iter().map(|&x| ctx.elem(x)).collect::<Result<Vec<_>>>()?;
        Self::new(ctx, dim, m, frob)
    }

    pub fn identity(dim: usize) -> Self {
        SemilinearMap { frob: 0, dim, matrix: identity_matrix(dim) }
    }

    pub fn scalar(ctx: &FieldCtx, dim: usize, x: FieldElem) -> Result<Self> {
        let mut m = vec![FieldElem::ZERO; dim * dim];
        for i in 0..dim {
            m[i * dim + i] = x;
        }
        Self::linear(ctx, dim, m)
    }

    /// The field automorphism `v ↦ φ_e(v)` on `F_q^d`.
    pub fn frobenius(ctx: &FieldCtx, dim: usize, e: u32) -> Result<Self> {
        Self::new(ctx, dim, identity_matrix(dim), e % ctx.f())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn frob(&self) -> u32 {
        self.frob
    }

    pub fn matrix(&self) -> &[FieldElem] {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> FieldElem {
        self.matrix[i * self.dim + j]
    }

    pub fn is_linear(&self) -> bool {
        self.frob == 0
    }

    pub fn is_identity(&self) -> bool {
        self.frob == 0 && self.matrix == identity_matrix(self.dim)
    }

    /// "`self`, then `other`".
    pub fn compose(&self, other: &SemilinearMap, ctx: &FieldCtx) -> Result<SemilinearMap> {
        if self.dim != other.dim {
            return Err(Error::Mismatch(format!("dimensions {} and {}", self.dim, other.dim)));
        }
        if self.frob >= ctx.f() || other.frob >= ctx.f() {
            return Err(Error::Mismatch("Frobenius exponent does not fit the field".into()));
        }
        let twisted: Vec<FieldElem> = self.matrix.iter().map(|&x| ctx.frobenius(x, other.frob)).collect();
        Ok(SemilinearMap {
            frob: (self.frob + other.frob) % ctx.f(),
            dim: self.dim,
            matrix: mat_mul(ctx, self.dim, &twisted, &other.matrix),
        })
    }

    pub fn invert(&self, ctx: &FieldCtx) -> Result<SemilinearMap> {
        let e = (ctx.f() - self.frob) % ctx.f();
        let twisted: Vec<FieldElem> = self.matrix.iter().map(|&x| ctx.frobenius(x, e)).collect();
        Ok(SemilinearMap { frob: e, dim: self.dim, matrix: mat_inverse(ctx, self.dim, &twisted)? })
    }

    pub fn pow(&self, ctx: &FieldCtx, mut n: u64) -> Result<SemilinearMap> {
        let mut result = SemilinearMap::identity(self.dim);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = result.compose(&base, ctx)?;
            }
            base = base.compose(&base, ctx)?;
            n >>= 1;
        }
        Ok(result)
    }

    /// Order, searched up to `bound`.
    pub fn order(&self, ctx: &FieldCtx, bound: u64) -> Result<u64> {
        let mut x = self.clone();
        for k in 1..=bound {
            if x.is_identity() {
                return Ok(k);
            }
            x = x.compose(self, ctx)?;
        }
        Err(Error::SearchFailed(format!("order exceeds {bound}")))
    }

    pub fn determinant(&self, ctx: &FieldCtx) -> FieldElem {
        determinant(ctx, self.dim, &self.matrix)
    }

    /// Image of a row vector.
    pub fn apply(&self, ctx: &FieldCtx, v: &[FieldElem]) -> Vec<FieldElem> {
        let d = self.dim;
        let mut out = vec![FieldElem::ZERO; d];
        for (j, &vj) in v.iter().enumerate() {
            let x = ctx.frobenius(vj, self.frob);
            if x.is_zero() {
                continue;
            }
            for l in 0..d {
                out[l] = ctx.add(out[l], ctx.mul(x, self.matrix[j * d + l]));
            }
        }
        out
    }

    pub(crate) fn to_row(&self) -> Vec<u16> {
        let mut row = Vec::with_capacity(1 + self.matrix.len());
        row.push(self.frob as u16);
        row.extend(self.matrix.iter().map(|x| x.index() as u16));
        row
    }

    pub(crate) fn from_row(dim: usize, row: &[u16]) -> Self {
        SemilinearMap {
            frob: row[0] as u32,
            dim,
            matrix: row[1..].iter().map(|&x| FieldElem::from_index(x as u32)).collect(),
        }
    }
}

impl fmt::Display for SemilinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.dim {
            if i > 0 {
                f.write_str("; ")?;
            }
            for j in 0..self.dim {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", self.entry(i, j).index())?;
            }
        }
        write!(f, "] frob {}", self.frob)
    }
}

#[derive(Clone)]
pub(crate) struct MatAction {
    ctx: Arc<FieldCtx>,
    d: usize,
}

impl Action for MatAction {
    fn width(&self) -> usize {
        1 + self.d * self.d
    }

    fn identity(&self) -> Vec<u16> {
        SemilinearMap::identity(self.d).to_row()
    }

    fn compose(&self, a: &[u16], b: &[u16], out: &mut [u16]) {
        let ctx = &*self.ctx;
        let d = self.d;
        let e2 = b[0] as u32;
        out[0] = ((a[0] as u32 + e2) % ctx.f()) as u16;
        let mut twisted = [0u16; MAX_DIM * MAX_DIM];
        for (t, &x) in twisted.iter_mut().zip(&a[1..]) {
            *t = if e2 == 0 { x } else { ctx.frobenius(FieldElem::from_index(x as u32), e2).index() as u16 };
        }
        let bm = &b[1..];
        for i in 0..d {
            for j in 0..d {
                let mut s = FieldElem::ZERO;
                for k in 0..d {
                    let x = twisted[i * d + k];
                    if x == 0 {
                        continue;
                    }
                    s = ctx.add(
                        s,
                        ctx.mul(FieldElem::from_index(x as u32), FieldElem::from_index(bm[k * d + j] as u32)),
                    );
                }
                out[1 + i * d + j] = s.index() as u16;
            }
        }
    }
}

/// Dimension over `F_p` of the space fixed by the map stored in `row`.
pub(crate) fn fixed_dim_row(ctx: &FieldCtx, d: usize, row: &[u16]) -> u32 {
    let f = ctx.f() as usize;
    let p = ctx.p();
    let e = row[0] as u32;
    let a = &row[1..];
    let n = d * f;
    let mut m = vec![0u64; n * n];
    let mut pk = 1u64;
    for k in 0..f {
        let basis = ctx.frobenius(FieldElem::from_index(pk as u32), e);
        for j in 0..d {
            let r = j * f + k;
            for l in 0..d {
                let mut val = ctx.mul(basis, FieldElem::from_index(a[j * d + l] as u32)).index() as u64;
                for c in 0..f {
                    m[r * n + l * f + c] = val % p;
                    val /= p;
                }
            }
            let diag = &mut m[r * n + r];
            *diag = (*diag + p - 1) % p;
        }
        pk *= p;
    }
    n as u32 - rank_mod_p(&mut m, n, p)
}

fn rank_mod_p(m: &mut [u64], n: usize, p: u64) -> u32 {
    let mut rank = 0usize;
    for c in 0..n {
        let Some(pr) = (rank..n).find(|&i| m[i * n + c] != 0) else {
            continue;
        };
        if pr != rank {
            for j in 0..n {
                m.swap(rank * n + j, pr * n + j);
            }
        }
        let inv = inv_mod_p(m[rank * n + c], p);
        for j in c..n {
            m[rank * n + j] = m[rank * n + j] * inv % p;
        }
        for i in rank + 1..n {
            let factor = m[i * n + c];
            if factor == 0 {
                continue;
            }
            for j in c..n {
                m[i * n + j] = (m[i * n + j] + (p - factor) * m[rank * n + j]) % p;
            }
        }
        rank += 1;
    }
    rank as u32
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    let (mut r, mut b, mut e) = (1u64, a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Number of vectors fixed by `g`: always a power of `p`, computed over the
/// prime field so the same code covers semilinear maps.
pub fn fixed_vector_count(ctx: &FieldCtx, g: &SemilinearMap) -> u64 {
    ctx.p().pow(fixed_space_dim(ctx, g))
}

/// Dimension over `F_p` of the fixed space of `g`.
pub fn fixed_space_dim(ctx: &FieldCtx, g: &SemilinearMap) -> u32 {
    fixed_dim_row(ctx, g.dim(), &g.to_row())
}

// ---------------------------------------------------------------------------

/// A group of semilinear maps, optionally enumerated.
#[derive(Clone)]
pub struct MatGroup {
    ctx: Arc<FieldCtx>,
    dim: usize,
    generators: Vec<SemilinearMap>,
    elements: Option<Arc<Enumeration<MatAction>>>,
}

impl fmt::Debug for MatGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatGroup")
            .field("q", &self.ctx.q())
            .field("dim", &self.dim)
            .field("generators", &self.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>())
            .field("order", &self.order())
            .finish()
    }
}

impl MatGroup {
    pub fn new(ctx: Arc<FieldCtx>, dim: usize, generators: Vec<SemilinearMap>) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::OutOfRange(format!("dimension {dim} outside 1..={MAX_DIM}")));
        }
        if ctx.q() > 1 << 16 {
            return Err(Error::OutOfRange(format!("matrix groups need q ≤ 2^16, got {}", ctx.q())));
        }
        if (ctx.q() as f64).powi(dim as i32) >= 2f64.powi(63) {
            return Err(Error::OutOfRange("vector space too large".into()));
        }
        for g in &generators {
            if g.dim() != dim {
                return Err(Error::Mismatch(format!("generator of dimension {} in dimension {dim}", g.dim())));
            }
            if g.frob() >= ctx.f() || g.matrix().iter().any(|x| x.index() as u64 >= ctx.q()) {
                return Err(Error::Mismatch("generator does not belong to this field".into()));
            }
        }
        Ok(MatGroup { ctx, dim, generators, elements: None })
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[SemilinearMap] {
        &self.generators
    }

    /// `|V| = q^d`.
    pub fn vector_count(&self) -> u64 {
        self.ctx.q().pow(self.dim as u32)
    }

    pub fn is_linear(&self) -> bool {
        self.generators.iter().all(SemilinearMap::is_linear)
    }

    pub fn is_enumerated(&self) -> bool {
        self.elements.is_some()
    }

    fn action(&self) -> MatAction {
        MatAction { ctx: self.ctx.clone(), d: self.dim }
    }

    /// Enumerates the group if not already done; generators are sorted and
    /// deduplicated first.
    pub fn enumerate(&mut self, cap: usize) -> Result<()> {
        if self.elements.is_some() {
            return Ok(());
        }
        let mut gens: Vec<SemilinearMap> = self.generators.iter().filter(|g| !g.is_identity()).cloned().collect();
        gens.sort();
        gens.dedup();
        let rows: Vec<Vec<u16>> = gens.iter().map(SemilinearMap::to_row).collect();
        let e = Enumeration::generate(self.action(), &rows, cap, DEFAULT_ROW_BUDGET)?;
        self.elements = Some(Arc::new(e));
        Ok(())
    }

    pub fn enumerated(mut self, cap: usize) -> Result<Self> {
        self.enumerate(cap)?;
        Ok(self)
    }

    pub(crate) fn enumeration(&self) -> Result<&Enumeration<MatAction>> {
        self.elements.as_deref().ok_or(Error::NotEnumerated)
    }

    pub fn order(&self) -> Option<u64> {
        self.elements.as_ref().map(|e| e.len() as u64)
    }

    pub fn require_order(&self) -> Result<u64> {
        self.order().ok_or(Error::NotEnumerated)
    }

    pub fn element(&self, idx: usize) -> Result<SemilinearMap> {
        let e = self.enumeration()?;
        if idx >= e.len() {
            return Err(Error::OutOfRange(format!("element index {idx}")));
        }
        Ok(SemilinearMap::from_row(self.dim, &e.element(idx)))
    }

    pub fn contains(&self, g: &SemilinearMap) -> Result<bool> {
        if g.dim() != self.dim {
            return Ok(false);
        }
        Ok(self.enumeration()?.contains(&g.to_row()))
    }

    pub fn for_each_element(&self, mut f: impl FnMut(&SemilinearMap)) -> Result<()> {
        let d = self.dim;
        self.enumeration()?.for_each(&mut |_, row| f(&SemilinearMap::from_row(d, row)));
        Ok(())
    }

    /// Exact count of elements satisfying `pred`.
    pub fn count_where(&self, pred: impl Fn(&SemilinearMap) -> bool + Sync + Send) -> Result<u64> {
        let d = self.dim;
        Ok(self.enumeration()?.fold(
            || 0u64,
            |acc, row| {
                if pred(&SemilinearMap::from_row(d, row)) {
                    *acc += 1;
                }
            },
            |a, b| a + b,
        ))
    }

    /// `hist[k]` = number of elements whose fixed space has `F_p`-dimension `k`.
    pub fn fixed_dim_histogram(&self) -> Result<Vec<u64>> {
        let n = self.dim * self.ctx.f() as usize;
        let ctx = self.ctx.clone();
        let d = self.dim;
        Ok(self.enumeration()?.fold(
            || vec![0u64; n + 1],
            |h, row| h[fixed_dim_row(&ctx, d, row) as usize] += 1,
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        ))
    }

    fn with_enumeration(&self, e: Enumeration<MatAction>) -> MatGroup {
        let generators = e.generators().iter().map(|r| SemilinearMap::from_row(self.dim, r)).collect();
        MatGroup { ctx: self.ctx.clone(), dim: self.dim, generators, elements: Some(Arc::new(e)) }
    }

    /// `A(G)`, the subgroup generated by elements fixing a nonzero vector, and its index.
    pub fn eigenvalue_one_subgroup(&self) -> Result<(MatGroup, u64)> {
        let e = self.enumeration()?;
        let ctx = self.ctx.clone();
        let d = self.dim;
        let a = e.generated_by(&|row| fixed_dim_row(&ctx, d, row) > 0)?;
        let index = (e.len() / a.len()) as u64;
        Ok((self.with_enumeration(a), index))
    }

    /// The subgroup generated by the elements satisfying `pred`, and its index.
    pub fn subgroup_generated_by(
        &self,
        pred: impl Fn(&SemilinearMap) -> bool + Sync,
    ) -> Result<(MatGroup, u64)> {
        let e = self.enumeration()?;
        let d = self.dim;
        let s = e.generated_by(&|row| pred(&SemilinearMap::from_row(d, row)))?;
        let index = (e.len() / s.len()) as u64;
        Ok((self.with_enumeration(s), index))
    }

    // -- vectors as points -------------------------------------------------

    /// Encodes a vector as `Σ c_i q^i`.
    pub fn encode_vector(&self, v: &[FieldElem]) -> u64 {
        v.iter().rev().fold(0u64, |acc, x| acc * self.ctx.q() + x.index() as u64)
    }

    pub fn decode_vector(&self, mut x: u64) -> Vec<FieldElem> {
        let q = self.ctx.q();
        (0..self.dim)
            .map(|_| {
                let c = FieldElem::from_index((x % q) as u32);
                x /= q;
                c
            })
            .collect()
    }

    fn point_count(&self) -> Result<usize> {
        let n = self.vector_count();
        if n as usize > MAX_DEGREE {
            return Err(Error::OutOfRange(format!("|V| = {n} exceeds the permutation degree ceiling")));
        }
        Ok(n as usize)
    }

    fn map_as_perm(&self, g: &SemilinearMap) -> Result<Perm> {
        let n = self.point_count()?;
        let images = (0..n as u64)
            .map(|x| self.encode_vector(&g.apply(&self.ctx, &self.decode_vector(x))) as u32)
            .collect();
        Perm::new(images)
    }

    /// Basis of `V` over the prime field: `x^k e_j`.
    fn prime_basis(&self) -> Vec<Vec<FieldElem>> {
        let mut out = Vec::new();
        for j in 0..self.dim {
            let mut pk = 1u64;
            for _ in 0..self.ctx.f() {
                let mut v = vec![FieldElem::ZERO; self.dim];
                v[j] = FieldElem::from_index(pk as u32);
                out.push(v);
                pk *= self.ctx.p();
            }
        }
        out
    }

    /// The action on the vectors of `V`, without translations.
    pub fn linear_perm_action(&self) -> Result<PermGroup> {
        let n = self.point_count()?;
        let gens = self.generators.iter().map(|g| self.map_as_perm(g)).collect::<Result<Vec<_>>>()?;
        PermGroup::new(n, gens)
    }

    /// The affine group `V⋊G` acting on `V` by `u ↦ u·g + v`, generated by the
    /// generators of `G` and the translations by a prime-field basis.
    pub fn affine_to_perm(&self) -> Result<PermGroup> {
        let n = self.point_count()?;
        let mut gens = self.generators.iter().map(|g| self.map_as_perm(g)).collect::<Result<Vec<_>>>()?;
        for b in self.prime_basis() {
            let images = (0..n as u64)
                .map(|x| {
                    let u = self.decode_vector(x);
                    let w: Vec<FieldElem> = u.iter().zip(&b).map(|(&a, &c)| self.ctx.add(a, c)).collect();
                    self.encode_vector(&w) as u32
                })
                .collect();
            gens.push(Perm::new(images)?);
        }
        PermGroup::new(n, gens)
    }
}

/// Exact statistics of `G` acting on `V`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineStats {
    pub order: u64,
    pub vector_count: u64,
    /// Proportion of elements fixing a nonzero vector.
    pub alpha: ExactRatio,
    /// Mean of `1/π(g)`, `π(g)` the number of fixed vectors.
    pub eta: ExactRatio,
    /// Proportion of derangements of `V⋊G` on `V`, equal to `1 − η`.
    pub delta_affine: ExactRatio,
    /// `|G : A(G)|`.
    pub a_index: u64,
    /// Only the identity fixes a nonzero vector.
    pub semiregular_nonzero: bool,
    /// Element counts by `F_p`-dimension of the fixed space.
    pub fixed_dim_histogram: Vec<u64>,
}

pub fn affine_stats(group: &MatGroup) -> Result<AffineStats> {
    let order = group.require_order()?;
    let hist = group.fixed_dim_histogram()?;
    let p = group.ctx().p();
    let fixing: u64 = hist[1..].iter().sum();
    let mut eta = ExactRatio::zero();
    for (k, &count) in hist.iter().enumerate() {
        if count > 0 {
            let pk = num_bigint::BigInt::from(p).pow(k as u32);
            eta = eta + ExactRatio::new(count, pk);
        }
    }
    let eta = eta / ExactRatio::from_integer(order);
    let (_, a_index) = group.eigenvalue_one_subgroup()?;
    Ok(AffineStats {
        order,
        vector_count: group.vector_count(),
        alpha: ExactRatio::new(fixing, order),
        delta_affine: ExactRatio::one() - &eta,
        eta,
        a_index,
        semiregular_nonzero: fixing == 1,
        fixed_dim_histogram: hist,
    })
}

/// `(1 − 1/q_eff)·α ≤ δ ≤ α`.
pub fn sandwich_check(check_id: &str, stats: &AffineStats, q_effective: u64) -> CheckResult {
    let lower = (ExactRatio::one() - ExactRatio::new(1, q_effective)) * &stats.alpha;
    let upper_ok = stats.delta_affine <= stats.alpha;
    let mut r = CheckResult::compare(
        check_id,
        "(1 - 1/q) alpha(G) <= delta(V:G) <= alpha(G)",
        stats.delta_affine.clone(),
        Relation::Ge,
        lower,
        Strictness::Identity,
    );
    if !upper_ok {
        r = r.with_status(crate::check::Status::Fail);
    }
    r.with("alpha", &stats.alpha)
        .with("delta", &stats.delta_affine)
        .with("q_effective", q_effective)
        .with("upper_holds", upper_ok)
        .ensure_witness()
}

/// The effective field size for the sandwich: `q` for linear groups, `p` otherwise.
pub fn sandwich_field_size(group: &MatGroup) -> u64 {
    if group.is_linear() {
        group.ctx().q()
    } else {
        group.ctx().p()
    }
}

/// Compares `|V⋊G : D(V⋊G)|`, computed on the permutation image, with `|G : A(G)|`.
pub fn a_subgroup_index_identity(group: &MatGroup, cap: usize) -> Result<CheckResult> {
    let order = group.require_order()?;
    let reach = group.vector_count().saturating_mul(order);
    if reach > cap as u64 {
        return Err(Error::CapExceeded { cap, reached: 0 });
    }
    let (_, a_index) = group.eigenvalue_one_subgroup()?;
    let affine = group.affine_to_perm()?.enumerated(cap)?;
    let (_, d_index) = affine.derangement_subgroup(cap)?;
    Ok(CheckResult::compare(
        "subgroup-index",
        "|V:G : D(V:G)| = |G : A(G)|",
        ExactRatio::from_integer(d_index),
        Relation::Eq,
        ExactRatio::from_integer(a_index),
        Strictness::Identity,
    )
    .with("affine_order", affine.require_order()?)
    .with("order", order)
    .ensure_witness())
}

/// Number of proper nonzero subspaces of `F_q^d`.
pub fn proper_subspace_count(q: u64, d: usize) -> u128 {
    let q = q as u128;
    let mut total = 0u128;
    for k in 1..d {
        // Gaussian binomial [d choose k]_q
        let mut num = 1u128;
        let mut den = 1u128;
        for i in 0..k {
            num = num.saturating_mul(q.pow((d - i) as u32) - 1);
            den = den.saturating_mul(q.pow((i + 1) as u32) - 1);
        }
        total = total.saturating_add(num / den);
    }
    total
}

/// Whether no proper nonzero subspace is invariant under all generators, by an
/// exhaustive scan over reduced row-echelon bases.
pub fn is_irreducible(group: &MatGroup) -> Result<bool> {
    if !group.is_linear() {
        return Err(Error::InvalidParams("irreducibility is tested for linear groups only".into()));
    }
    let ctx = group.ctx().clone();
    let d = group.dim();
    let count = proper_subspace_count(ctx.q(), d);
    if count > SUBSPACE_CEILING as u128 {
        return Err(Error::CapExceeded { cap: SUBSPACE_CEILING as usize, reached: count.min(usize::MAX as u128) as usize });
    }
    for k in 1..d {
        let mut found = false;
        for_each_subspace(&ctx, d, k, &mut |basis, pivots| {
            if found {
                return;
            }
            if group.generators().iter().all(|g| invariant(&ctx, d, basis, pivots, g)) {
                found = true;
            }
        });
        if found {
            return Ok(false);
        }
    }
    Ok(true)
}

fn invariant(ctx: &FieldCtx, d: usize, basis: &[FieldElem], pivots: &[usize], g: &SemilinearMap) -> bool {
    for row in basis.chunks_exact(d) {
        let mut w = g.apply(ctx, row);
        for (i, &c) in pivots.iter().enumerate() {
            let factor = w[c];
            if factor.is_zero() {
                continue;
            }
            for j in 0..d {
                w[j] = ctx.sub(w[j], ctx.mul(factor, basis[i * d + j]));
            }
        }
        if w.iter().any(|x| !x.is_zero()) {
            return false;
        }
    }
    true
}

/// Visits every `k`-dimensional subspace once via its reduced echelon basis.
fn for_each_subspace(ctx: &FieldCtx, d: usize, k: usize, f: &mut dyn FnMut(&[FieldElem], &[usize])) {
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| {
                let pv = pivots.clone();
                (pivots[i] + 1..d).filter(move |c| !pv.contains(c)).map(move |c| (i, c))
            })
            .collect();
        let mut basis = vec![FieldElem::ZERO; k * d];
        for (i, &c) in pivots.iter().enumerate() {
            basis[i * d + c] = FieldElem::ONE;
        }
        let q = ctx.q();
        let mut digits = vec![0u64; free.len()];
        'assign: loop {
            for (slot, &(i, c)) in free.iter().enumerate() {
                basis[i * d + c] = FieldElem::from_index(digits[slot] as u32);
            }
            f(&basis, &pivots);
            for digit in digits.iter_mut() {
                *digit += 1;
                if *digit < q {
                    continue 'assign;
                }
                *digit = 0;
            }
            break;
        }
        // next combination of pivot columns
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if pivots[i] < d - k + i {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Proportion of elements `x·r`, `x ∈ base`, having `λ` as an eigenvalue
/// (`det(x·r − λI) = 0`). Dimension 2, linear maps only.
pub fn coset_eigenvalue_proportion(
    base: &MatGroup,
    coset_rep: &SemilinearMap,
    lambda: FieldElem,
) -> Result<ExactRatio> {
    if base.dim() != 2 || coset_rep.dim() != 2 {
        return Err(Error::InvalidParams("coset eigenvalue scan is for dimension 2".into()));
    }
    if !base.is_linear() || !coset_rep.is_linear() {
        return Err(Error::InvalidParams("coset eigenvalue scan is for linear maps".into()));
    }
    let ctx = base.ctx().clone();
    let order = base.require_order()?;
    let rep = coset_rep.clone();
    let hits = base.count_where(move |x| {
        let y = mat_mul(&ctx, 2, x.matrix(), rep.matrix());
        let m = [ctx.sub(y[0], lambda), y[1], y[2], ctx.sub(y[3], lambda)];
        determinant(&ctx, 2, &m).is_zero()
    })?;
    Ok(ExactRatio::new(hits, order))
}
