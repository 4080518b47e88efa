//! The verification corpus and the per-member facts every suite draws on.

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{
    alt_deleted, classical_natural, extraspecial2, frobenius_affine, q8_normalizer_member, sharp_gammal1,
    sl2_5_z, ClassicalKind, FamilyId, FamilyMember, FamilySpec, Sign,
};
use crate::ffield::make_field;
use crate::gammal1::{enumerate_in, GammaL1, GammaL1Group};
use crate::matgroup::{affine_stats, is_irreducible, proper_subspace_count, AffineStats, MatGroup, SUBSPACE_CEILING};
use crate::numtheory::divisors;
use crate::perm::{PermGroup, DEFAULT_CAP};
use crate::ratio::ExactRatio;

use super::specfile::{read_spec, GroupSpec};

/// Largest `|V|·|G|` for which the affine permutation image is built.
pub const AFFINE_IMAGE_LIMIT: u64 = 1_000_000;
/// Members whose work exceeds this many stored entries run one at a time.
const HEAVY_ENTRIES: u64 = 30_000_000;

pub const GAMMAL1_FIELDS: [(u64, u32); 5] = [(2, 4), (5, 2), (2, 6), (3, 4), (2, 8)];

/// The repository's own directory of group spec files.
pub fn default_corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

#[derive(Debug, Clone)]
pub struct CorpusConfig {
    pub corpus_dir: Option<PathBuf>,
    pub cap: usize,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig { corpus_dir: Some(default_corpus_dir()), cap: DEFAULT_CAP }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum Provenance {
    Family(FamilySpec),
    Gammal1 { q: u64, t: u64, e0: u32, x: u64 },
    SpecFile { file: String },
}

#[derive(Debug)]
pub enum MemberGroup {
    Perm(PermGroup),
    Mat { group: MatGroup, gammal1: Option<GammaL1Group> },
}

pub fn affine_image_in_range(g: &MatGroup) -> bool {
    g.order().is_some_and(|o| g.vector_count().saturating_mul(o) <= AFFINE_IMAGE_LIMIT)
}

/// Facts of a permutation group; the transitive-only fields are `None` otherwise.
#[derive(Debug, Clone, Serialize)]
pub struct PermFacts {
    pub degree: usize,
    pub order: u64,
    pub transitive: bool,
    pub fixed_point_histogram: Vec<u64>,
    pub delta: Option<ExactRatio>,
    pub frobenius: Option<bool>,
    pub primitive: Option<bool>,
    /// `|G : D(G)|`.
    pub d_index: Option<u64>,
    /// `(block size, block count, δ of the induced action)` per block system.
    pub block_quotients: Vec<(usize, usize, ExactRatio)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatFacts {
    pub stats: AffineStats,
    pub irreducible: Option<bool>,
    /// Facts of `V⋊G` on `V`, when `|V|·|G|` is small enough.
    pub affine: Option<PermFacts>,
    pub affine_error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Facts {
    Perm(PermFacts),
    Mat(Box<MatFacts>),
    Error(String),
}

#[derive(Debug)]
pub struct Member {
    pub name: String,
    pub provenance: Provenance,
    pub group: MemberGroup,
    facts: OnceLock<Facts>,
}

impl Member {
    fn new(name: String, provenance: Provenance, group: MemberGroup) -> Self {
        Member { name, provenance, group, facts: OnceLock::new() }
    }

    pub fn family(&self) -> Option<&FamilySpec> {
        match &self.provenance {
            Provenance::Family(s) => Some(s),
            _ => None,
        }
    }

    pub fn mat(&self) -> Option<&MatGroup> {
        match &self.group {
            MemberGroup::Mat { group, .. } => Some(group),
            MemberGroup::Perm(_) => None,
        }
    }

    pub fn gammal1(&self) -> Option<&GammaL1Group> {
        match &self.group {
            MemberGroup::Mat { gammal1, .. } => gammal1.as_ref(),
            MemberGroup::Perm(_) => None,
        }
    }

    pub fn order(&self) -> u64 {
        match &self.group {
            MemberGroup::Perm(g) => g.order().unwrap_or(0),
            MemberGroup::Mat { group, .. } => group.order().unwrap_or(0),
        }
    }

    /// Whether the affine permutation image is built for this member.
    pub fn has_affine_image(&self) -> bool {
        self.mat().is_some_and(affine_image_in_range)
    }

    fn weight(&self) -> u64 {
        match &self.group {
            MemberGroup::Perm(g) => self.order().saturating_mul(g.degree() as u64),
            MemberGroup::Mat { group, .. } => {
                let own = self.order().saturating_mul((group.dim() * group.dim()) as u64);
                if self.has_affine_image() {
                    own.max(self.order() * group.vector_count() * group.vector_count())
                } else {
                    own
                }
            }
        }
    }

    pub fn facts(&self, cap: usize) -> &Facts {
        self.facts.get_or_init(|| match compute_facts(self, cap) {
            Ok(f) => f,
            Err(e) => Facts::Error(e.to_string()),
        })
    }
}

fn compute_facts(m: &Member, cap: usize) -> Result<Facts> {
    match &m.group {
        MemberGroup::Perm(g) => Ok(Facts::Perm(perm_facts(g, cap)?)),
        MemberGroup::Mat { group, .. } => Ok(Facts::Mat(Box::new(mat_facts(group, m.has_affine_image(), cap)?))),
    }
}

/// Facts of an enumerated matrix group; the affine image is built only on request.
pub fn mat_facts(group: &MatGroup, with_affine: bool, cap: usize) -> Result<MatFacts> {
    let stats = affine_stats(group)?;
    let irreducible = if group.is_linear()
        && proper_subspace_count(group.ctx().q(), group.dim()) <= SUBSPACE_CEILING as u128
    {
        Some(is_irreducible(group)?)
    } else {
        None
    };
    let (affine, affine_error) = if with_affine {
        match group.affine_to_perm().and_then(|p| p.enumerated(cap)).and_then(|p| perm_facts(&p, cap)) {
            Ok(f) => (Some(f), None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, None)
    };
    Ok(MatFacts { stats, irreducible, affine, affine_error })
}

/// Facts of an enumerated permutation group; the fixed-point histogram is
/// computed once and `δ` and the Frobenius test are read from it.
pub fn perm_facts(g: &PermGroup, cap: usize) -> Result<PermFacts> {
    let order = g.require_order()?;
    let n = g.degree();
    let hist = g.fixed_point_histogram()?;
    let transitive = g.is_transitive();
    let mut facts = PermFacts {
        degree: n,
        order,
        transitive,
        fixed_point_histogram: hist.clone(),
        delta: None,
        frobenius: None,
        primitive: None,
        d_index: None,
        block_quotients: Vec::new(),
    };
    if !transitive {
        return Ok(facts);
    }
    facts.delta = Some(ExactRatio::new(hist[0], order));
    facts.frobenius = Some(n >= 2 && hist[1] > 0 && hist[2..n].iter().all(|&c| c == 0));
    let systems = g.block_systems()?;
    facts.primitive = Some(systems.is_empty());
    for bs in &systems {
        let quotient = g.block_quotient(bs)?.enumerated(cap)?;
        facts.block_quotients.push((bs.block_size, bs.block_count, quotient.delta()?));
    }
    facts.d_index = Some(g.derangement_subgroup(cap)?.1);
    Ok(facts)
}

#[derive(Debug, Clone, Serialize)]
pub struct SkippedMember {
    pub name: String,
    pub reason: String,
}

#[derive(Debug)]
pub struct Corpus {
    pub members: Vec<Member>,
    pub skipped: Vec<SkippedMember>,
    pub cap: usize,
}

/// Sorted rows of a small matrix group, for removing duplicates.
fn fingerprint(g: &MatGroup) -> Option<(u64, u32, usize, Vec<Vec<u32>>)> {
    if g.order()? > 5000 {
        return None;
    }
    let mut rows = Vec::new();
    g.for_each_element(|x| {
        let mut r = vec![x.frob()];
        r.extend(x.matrix().iter().map(|e| e.index()));
        rows.push(r);
    })
    .ok()?;
    rows.sort();
    Some((g.ctx().p(), g.ctx().f(), g.dim(), rows))
}

struct Builder {
    cap: usize,
    members: Vec<Member>,
    skipped: Vec<SkippedMember>,
    seen: HashSet<(u64, u32, usize, Vec<Vec<u32>>)>,
}

impl Builder {
    fn push_mat(&mut self, name: String, provenance: Provenance, group: Result<MatGroup>, gammal1: Option<GammaL1Group>) {
        match group.and_then(|g| g.enumerated(self.cap)) {
            Ok(g) => {
                if let Some(fp) = fingerprint(&g) {
                    if !self.seen.insert(fp) {
                        return;
                    }
                }
                self.members.push(Member::new(name, provenance, MemberGroup::Mat { group: g, gammal1 }));
            }
            Err(e) => self.skipped.push(SkippedMember { name, reason: e.to_string() }),
        }
    }

    fn push_family(&mut self, member: Result<FamilyMember>, fallback: String) {
        match member {
            Ok(m) => {
                let name = m.name();
                self.push_mat(name, Provenance::Family(m.spec), Ok(m.group), None);
            }
            Err(e) => self.skipped.push(SkippedMember { name: fallback, reason: e.to_string() }),
        }
    }
}

/// The default corpus, in a fixed order: families first, then all subgroups
/// of `ΓL_1(q)` not already present, then spec files sorted by file name.
pub fn build_default_corpus(config: &CorpusConfig) -> Result<Corpus> {
    let mut b = Builder { cap: config.cap, members: Vec::new(), skipped: Vec::new(), seen: HashSet::new() };
    for n in [5u64, 7, 8, 9, 11, 13, 16] {
        for a in divisors(n - 1) {
            b.push_family(frobenius_affine(n, a), format!("frobenius_affine({n},{a})"));
        }
    }
    for q in [16u64, 64, 81, 256] {
        b.push_family(sharp_gammal1(q), format!("sharp_gammal1({q})"));
    }
    for (q, z) in [(11u64, false), (19, true), (59, true)] {
        b.push_family(sl2_5_z(q, z), format!("sl2_5_z({q},{})", z as u8));
    }
    for q in [3u64, 5, 7, 9, 11] {
        for v in 0..3 {
            b.push_family(q8_normalizer_member(q, v), format!("q8_normalizer_member({q},{v})"));
        }
    }
    for q in [3u64, 4, 5, 7, 8, 9, 11] {
        let m = classical_natural(ClassicalKind::Sl, 2, q).map(|mut m| {
            m.spec.id = FamilyId::Sl2q;
            m.spec.params = vec![q as i64];
            m
        });
        b.push_family(m, format!("sl2q({q})"));
    }
    for (kind, n, s) in [
        (ClassicalKind::Sl, 3, 3),
        (ClassicalKind::Sp, 4, 3),
        (ClassicalKind::Su, 3, 3),
        (ClassicalKind::Sl, 3, 2),
        (ClassicalKind::Sl, 4, 2),
        (ClassicalKind::Sp, 4, 2),
        (ClassicalKind::Sp, 6, 2),
    ] {
        b.push_family(classical_natural(kind, n, s), format!("classical_natural({},{n},{s})", kind.code()));
    }
    for s in 1..=3 {
        for sign in [Sign::Plus, Sign::Minus] {
            b.push_family(extraspecial2(s, sign, 3), format!("extraspecial2({s},{},3)", sign.as_i64()));
        }
    }
    for m in 5..=9 {
        for p in [2u64, 3] {
            b.push_family(alt_deleted(m, p), format!("alt_deleted({m},{p})"));
        }
    }
    for (p, f) in GAMMAL1_FIELDS {
        let universe = GammaL1::new(Arc::new(make_field(p, f)?))?;
        for g in enumerate_in(&universe)? {
            let prov = Provenance::Gammal1 { q: universe.q(), t: g.t, e0: g.e0, x: g.x_log };
            let mat = g.to_matgroup();
            b.push_mat(format!("gammal1[{}]", g.label()), prov, mat, Some(g));
        }
    }
    if let Some(dir) = &config.corpus_dir {
        load_spec_dir(&mut b, dir)?;
    }
    Ok(Corpus { members: b.members, skipped: b.skipped, cap: config.cap })
}

fn load_spec_dir(b: &mut Builder, dir: &Path) -> Result<()> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "grp"))
        .collect();
    files.sort();
    for path in files {
        let file = path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
        let prov = Provenance::SpecFile { file: file.clone() };
        match read_spec(&path) {
            Ok(GroupSpec::Perm { name, group }) => {
                let name = format!("spec[{}]", name.unwrap_or_else(|| file.clone()));
                match group.enumerated(b.cap) {
                    Ok(g) => b.members.push(Member::new(name, prov, MemberGroup::Perm(g))),
                    Err(e) => b.skipped.push(SkippedMember { name, reason: e.to_string() }),
                }
            }
            Ok(GroupSpec::Matrix { name, group }) => {
                let name = format!("spec[{}]", name.unwrap_or_else(|| file.clone()));
                b.push_mat(name, prov, Ok(group), None);
            }
            Err(e) => b.skipped.push(SkippedMember { name: file, reason: e.to_string() }),
        }
    }
    Ok(())
}

impl Corpus {
    /// Computes every member's facts: light members concurrently, heavy ones
    /// one at a time so peak memory stays bounded.
    pub fn prepare(&self) {
        let cap = self.cap;
        let (heavy, light): (Vec<&Member>, Vec<&Member>) =
            self.members.iter().partition(|m| m.weight() > HEAVY_ENTRIES);
        light.par_iter().for_each(|m| {
            m.facts(cap);
        });
        for m in heavy {
            m.facts(cap);
        }
    }

    pub fn find(&self, name: &str) -> Option<&Member> {
        self.members.iter().find(|m| m.name == name)
    }

    pub fn from_members(members: Vec<(String, Provenance, MemberGroup)>, cap: usize) -> Self {
        Corpus {
            members: members.into_iter().map(|(n, p, g)| Member::new(n, p, g)).collect(),
            skipped: Vec::new(),
            cap,
        }
    }
}

/// Errors from the corpus directory are reported, never silently dropped.
pub fn require_members(c: &Corpus) -> Result<()> {
    if c.members.is_empty() {
        return Err(Error::InvalidParams("corpus is empty".into()));
    }
    Ok(())
}
