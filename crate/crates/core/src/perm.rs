//! Permutations and permutation groups on `{0, …, n−1}`.

use std::fmt;
use std::sync::Arc;

use crate::closure::{Action, Enumeration, DEFAULT_ROW_BUDGET};
use crate::error::{Error, Result};
use crate::ratio::ExactRatio;

/// Largest supported degree; points are stored as `u16`.
pub const MAX_DEGREE: usize = 1 << 16;
/// Default ceiling on group order during enumeration.
pub const DEFAULT_CAP: usize = 20_000_000;

/// A permutation given by its image sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn new(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::InvalidParams(format!("image sequence is not a permutation of 0..{n}")));
            }
            seen[x] = true;
        }
        Ok(Perm { images })
    }

    pub fn identity(n: usize) -> Self {
        Perm { images: (0..n as u32).collect() }
    }

    /// Builds a permutation of degree `n` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<u32>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for &x in cycle {
                let xi = x as usize;
                if xi >= n {
                    return Err(Error::OutOfRange(format!("point {x} outside 0..{n}")));
                }
                if used[xi] {
                    return Err(Error::InvalidParams(format!("point {x} repeated in cycles")));
                }
                used[xi] = true;
            }
            for (i, &x) in cycle.iter().enumerate() {
                images[x as usize] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Perm { images })
    }

    pub(crate) fn from_row(row: &[u16]) -> Self {
        Perm { images: row.iter().map(|&x| x as u32).collect() }
    }

    pub(crate) fn to_row(&self) -> Vec<u16> {
        self.images.iter().map(|&x| x as u16).collect()
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn image(&self, i: u32) -> u32 {
        self.images[i as usize]
    }

    /// The product "`self` then `other`".
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        if self.degree() != other.degree() {
            return Err(Error::Mismatch(format!(
                "degrees {} and {}",
                self.degree(),
                other.degree()
            )));
        }
        Ok(Perm { images: self.images.iter().map(|&x| other.images[x as usize]).collect() })
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| x as usize == i)
    }

    pub fn fixed_point_count(&self) -> usize {
        self.images.iter().enumerate().filter(|&(i, &x)| x as usize == i).count()
    }

    pub fn is_derangement(&self) -> bool {
        self.fixed_point_count() == 0
    }

    /// Nontrivial cycles, each starting at its least point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x as u32);
                x = self.images[x] as usize;
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Number of cycles, fixed points included.
    pub fn cycle_count(&self) -> usize {
        fixed_cycle_count(&self.to_row())
    }

    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| num_integer::lcm(acc, c.len() as u64))
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

pub(crate) fn row_fixed_points(row: &[u16]) -> usize {
    row.iter().enumerate().filter(|&(i, &x)| x as usize == i).count()
}

pub(crate) fn fixed_cycle_count(row: &[u16]) -> usize {
    let mut seen = vec![false; row.len()];
    let mut count = 0;
    for s in 0..row.len() {
        if seen[s] {
            continue;
        }
        count += 1;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = row[x] as usize;
        }
    }
    count
}

#[derive(Debug, Clone)]
pub(crate) struct PermAction {
    n: usize,
}

impl Action for PermAction {
    fn width(&self) -> usize {
        self.n
    }

    fn identity(&self) -> Vec<u16> {
        (0..self.n).map(|i| i as u16).collect()
    }

    #[inline]
    fn compose(&self, a: &[u16], b: &[u16], out: &mut [u16]) {
        for (o, &x) in out.iter_mut().zip(a) {
            *o = b[x as usize];
        }
    }
}

/// A partition of the points into blocks of equal size.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockSystem {
    /// Block id of each point; ids are numbered by first appearance.
    pub block_of: Vec<u32>,
    pub block_count: usize,
    pub block_size: usize,
}

impl BlockSystem {
    /// Builds a system from arbitrary labels, renumbering by first appearance.
    pub fn from_labels(labels: &[u32]) -> Result<Self> {
        let mut map = std::collections::HashMap::new();
        let mut block_of = Vec::with_capacity(labels.len());
        for &l in labels {
            let next = map.len() as u32;
            block_of.push(*map.entry(l).or_insert(next));
        }
        let block_count = map.len();
        let mut sizes = vec![0usize; block_count];
        for &b in &block_of {
            sizes[b as usize] += 1;
        }
        let block_size = sizes.first().copied().unwrap_or(0);
        if sizes.iter().any(|&s| s != block_size) {
            return Err(Error::InvalidBlocks("blocks have unequal sizes".into()));
        }
        Ok(BlockSystem { block_of, block_count, block_size })
    }

    pub fn is_trivial(&self) -> bool {
        self.block_count <= 1 || self.block_size <= 1
    }

    pub fn blocks(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.block_count];
        for (p, &b) in self.block_of.iter().enumerate() {
            out[b as usize].push(p as u32);
        }
        out
    }

    /// Checks that every generator maps blocks onto blocks.
    pub fn validate(&self, group: &PermGroup) -> Result<()> {
        if self.block_of.len() != group.degree() {
            return Err(Error::InvalidBlocks("block map has the wrong length".into()));
        }
        for g in group.generators() {
            let mut image = vec![u32::MAX; self.block_count];
            for (p, &b) in self.block_of.iter().enumerate() {
                let target = self.block_of[g.image(p as u32) as usize];
                let slot = &mut image[b as usize];
                if *slot == u32::MAX {
                    *slot = target;
                } else if *slot != target {
                    return Err(Error::InvalidBlocks(format!("generator {g} splits a block")));
                }
            }
        }
        Ok(())
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let up = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = up;
            x = up;
        }
        x
    }

    /// Merges the classes of `a` and `b`; returns the surviving roots if they differed.
    fn union(&mut self, a: u32, b: u32) -> Option<(u32, u32)> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
        Some((lo, hi))
    }
}

/// A permutation group given by generators, optionally enumerated.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Option<Arc<Enumeration<PermAction>>>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("generators", &self.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>())
            .field("order", &self.order())
            .finish()
    }
}

impl PermGroup {
    /// The group generated by `generators` on `degree` points; an empty list
    /// gives the trivial group.
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::OutOfRange(format!("degree {degree} outside 1..={MAX_DEGREE}")));
        }
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::Mismatch(format!(
                "generator of degree {} in a group of degree {degree}",
                g.degree()
            )));
        }
        Ok(PermGroup { degree, generators, elements: None })
    }

    pub fn symmetric(n: usize) -> Result<Self> {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Perm::from_cycles(n, &[vec![0, 1]])?);
            gens.push(Perm::from_cycles(n, &[(0..n as u32).collect()])?);
        }
        Self::new(n, gens)
    }

    pub fn alternating(n: usize) -> Result<Self> {
        let mut gens = Vec::new();
        if n >= 3 {
            gens.push(Perm::from_cycles(n, &[vec![0, 1, 2]])?);
            let long: Vec<u32> = if n % 2 == 1 { (0..n as u32).collect() } else { (1..n as u32).collect() };
            gens.push(Perm::from_cycles(n, &[long])?);
        }
        Self::new(n, gens)
    }

    /// The regular cyclic group on `n` points.
    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new(n, vec![Perm::from_cycles(n, &[(0..n as u32).collect()])?])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn is_enumerated(&self) -> bool {
        self.elements.is_some()
    }

    /// Enumerates the group if not already done. Generators are sorted and
    /// deduplicated first, so the element order does not depend on how they
    /// were listed.
    pub fn enumerate(&mut self, cap: usize) -> Result<()> {
        self.enumerate_with_budget(cap, DEFAULT_ROW_BUDGET)
    }

    pub(crate) fn enumerate_with_budget(&mut self, cap: usize, row_budget: usize) -> Result<()> {
        if self.elements.is_some() {
            return Ok(());
        }
        let mut gens: Vec<Perm> = self.generators.iter().filter(|g| !g.is_identity()).cloned().collect();
        gens.sort();
        gens.dedup();
        let rows: Vec<Vec<u16>> = gens.iter().map(Perm::to_row).collect();
        let e = Enumeration::generate(PermAction { n: self.degree }, &rows, cap, row_budget)?;
        self.elements = Some(Arc::new(e));
        Ok(())
    }

    pub fn enumerated(mut self, cap: usize) -> Result<Self> {
        self.enumerate(cap)?;
        Ok(self)
    }

    pub(crate) fn enumeration(&self) -> Result<&Enumeration<PermAction>> {
        self.elements.as_deref().ok_or(Error::NotEnumerated)
    }

    pub fn order(&self) -> Option<u64> {
        self.elements.as_ref().map(|e| e.len() as u64)
    }

    pub fn require_order(&self) -> Result<u64> {
        self.order().ok_or(Error::NotEnumerated)
    }

    /// Element number `idx` in enumeration order (index 0 is the identity).
    pub fn element(&self, idx: usize) -> Result<Perm> {
        let e = self.enumeration()?;
        if idx >= e.len() {
            return Err(Error::OutOfRange(format!("element index {idx}")));
        }
        Ok(Perm::from_row(&e.element(idx)))
    }

    pub fn contains(&self, g: &Perm) -> Result<bool> {
        if g.degree() != self.degree {
            return Ok(false);
        }
        Ok(self.enumeration()?.contains(&g.to_row()))
    }

    /// Calls `f` on every element in enumeration order.
    pub fn for_each_element(&self, mut f: impl FnMut(&Perm)) -> Result<()> {
        self.enumeration()?.for_each(&mut |_, row| f(&Perm::from_row(row)));
        Ok(())
    }

    /// Orbits on points, each sorted, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<u32>> {
        let mut uf = UnionFind::new(self.degree);
        for g in &self.generators {
            for (i, &x) in g.images().iter().enumerate() {
                uf.union(i as u32, x);
            }
        }
        let mut by_root: Vec<Vec<u32>> = vec![Vec::new(); self.degree];
        for p in 0..self.degree as u32 {
            let r = uf.find(p);
            by_root[r as usize].push(p);
        }
        by_root.into_iter().filter(|o| !o.is_empty()).collect()
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits().len() == 1
    }

    fn require_transitive(&self) -> Result<()> {
        if self.is_transitive() {
            Ok(())
        } else {
            Err(Error::NotTransitive)
        }
    }

    /// The finest invariant block system with `a` and `b` in one block.
    pub fn minimal_blocks(&self, a: u32, b: u32) -> Result<BlockSystem> {
        self.require_transitive()?;
        let n = self.degree as u32;
        if a >= n || b >= n {
            return Err(Error::OutOfRange(format!("seed pair ({a}, {b})")));
        }
        let mut uf = UnionFind::new(self.degree);
        let mut queue = Vec::new();
        if let Some(pair) = uf.union(a, b) {
            queue.push(pair);
        }
        while let Some((x, y)) = queue.pop() {
            for g in &self.generators {
                if let Some(pair) = uf.union(g.image(x), g.image(y)) {
                    queue.push(pair);
                }
            }
        }
        let labels: Vec<u32> = (0..n).map(|p| uf.find(p)).collect();
        BlockSystem::from_labels(&labels)
    }

    /// Representatives `β ≠ 0` of the orbits of a subgroup of the stabiliser
    /// of 0, generated by a handful of Schreier generators. `minimal_blocks(0, β)`
    /// is constant on stabiliser orbits, so these suffice for block searches.
    fn stabilizer_orbit_reps(&self) -> Vec<u32> {
        const MAX_SCHREIER: usize = 32;
        let n = self.degree;
        // Schreier tree rooted at 0: (generator index, predecessor).
        let mut tree: Vec<Option<(usize, u32)>> = vec![None; n];
        let mut order = vec![0u32];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for (k, g) in self.generators.iter().enumerate() {
                let y = g.image(x);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    tree[y as usize] = Some((k, x));
                    order.push(y);
                }
            }
        }
        // u_β as an image vector: the tree path from 0 to β.
        let transversal = |beta: u32| -> Vec<u32> {
            let mut path = Vec::new();
            let mut cur = beta;
            while let Some((k, prev)) = tree[cur as usize] {
                path.push(k);
                cur = prev;
            }
            let mut img: Vec<u32> = (0..n as u32).collect();
            for &k in path.iter().rev() {
                let g = &self.generators[k];
                img.iter_mut().for_each(|x| *x = g.image(*x));
            }
            img
        };
        let mut uf = UnionFind::new(n);
        let stride = (order.len() / MAX_SCHREIER).max(1);
        let mut made = 0;
        'outer: for &beta in order.iter().rev().step_by(stride) {
            for g in &self.generators {
                if made == MAX_SCHREIER {
                    break 'outer;
                }
                made += 1;
                let u = transversal(beta);
                let mut w_inv = vec![0u32; n];
                for (i, &x) in transversal(g.image(beta)).iter().enumerate() {
                    w_inv[x as usize] = i as u32;
                }
                // x ↦ u_{gβ}⁻¹(g(u_β(x))) fixes 0.
                for x in 0..n {
                    uf.union(x as u32, w_inv[g.image(u[x]) as usize]);
                }
            }
        }
        (1..n as u32).filter(|&p| uf.find(p) == p && uf.find(0) != p).collect()
    }

    pub fn is_primitive(&self) -> Result<bool> {
        self.require_transitive()?;
        for beta in self.stabilizer_orbit_reps() {
            if self.minimal_blocks(0, beta)?.block_count > 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All distinct nontrivial block systems of the form `minimal_blocks(0, β)`.
    /// Every minimal nontrivial system appears among them.
    pub fn block_systems(&self) -> Result<Vec<BlockSystem>> {
        self.require_transitive()?;
        let mut out: Vec<BlockSystem> = Vec::new();
        for beta in self.stabilizer_orbit_reps() {
            let bs = self.minimal_blocks(0, beta)?;
            if !bs.is_trivial() && !out.contains(&bs) {
                out.push(bs);
            }
        }
        Ok(out)
    }

    /// The action induced on the blocks of `blocks`.
    pub fn block_quotient(&self, blocks: &BlockSystem) -> Result<PermGroup> {
        blocks.validate(self)?;
        let reps: Vec<u32> = blocks.blocks().iter().map(|b| b[0]).collect();
        let gens = self
            .generators
            .iter()
            .map(|g| Perm::new(reps.iter().map(|&r| blocks.block_of[g.image(r) as usize]).collect()))
            .collect::<Result<Vec<_>>>()?;
        PermGroup::new(blocks.block_count, gens)
    }

    /// `hist[k]` is the number of elements with exactly `k` fixed points.
    pub fn fixed_point_histogram(&self) -> Result<Vec<u64>> {
        let n = self.degree;
        Ok(self.enumeration()?.fold(
            || vec![0u64; n + 1],
            |h, row| h[row_fixed_points(row)] += 1,
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        ))
    }

    pub fn derangement_count(&self) -> Result<u64> {
        Ok(self.fixed_point_histogram()?[0])
    }

    /// Exact proportion of derangements; defined for transitive groups only.
    pub fn delta(&self) -> Result<ExactRatio> {
        self.require_transitive()?;
        let order = self.require_order()?;
        Ok(ExactRatio::new(self.derangement_count()?, order))
    }

    /// Transitive, some nontrivial element fixes a point, and no nontrivial
    /// element fixes two.
    pub fn is_frobenius(&self) -> Result<bool> {
        self.require_transitive()?;
        let hist = self.fixed_point_histogram()?;
        let n = self.degree;
        if n < 2 {
            return Ok(false);
        }
        let fixing_two_or_more: u64 = hist[2..n].iter().sum();
        Ok(hist[1] > 0 && fixing_two_or_more == 0)
    }

    /// Whether only the identity fixes a point of `domain`.
    pub fn is_semiregular(&self, domain: &[u32]) -> Result<bool> {
        let n = self.degree;
        if let Some(&p) = domain.iter().find(|&&p| p as usize >= n) {
            return Err(Error::OutOfRange(format!("point {p}")));
        }
        let offenders = self.enumeration()?.fold(
            || 0u64,
            |acc, row| {
                let nontrivial = row.iter().enumerate().any(|(i, &x)| x as usize != i);
                if nontrivial && domain.iter().any(|&p| row[p as usize] as u32 == p) {
                    *acc += 1;
                }
            },
            |a, b| a + b,
        );
        Ok(offenders == 0)
    }

    fn from_enumeration(degree: usize, e: Enumeration<PermAction>) -> PermGroup {
        let generators = e.generators().iter().map(|r| Perm::from_row(r)).collect();
        PermGroup { degree, generators, elements: Some(Arc::new(e)) }
    }

    /// The subgroup generated by all derangements, and its index.
    pub fn derangement_subgroup(&self, cap: usize) -> Result<(PermGroup, u64)> {
        let e = self.enumeration()?;
        if e.len() > cap {
            return Err(Error::CapExceeded { cap, reached: e.len() });
        }
        let d = e.generated_by(&|row| row_fixed_points(row) == 0)?;
        let index = (e.len() / d.len()) as u64;
        Ok((PermGroup::from_enumeration(self.degree, d), index))
    }

    /// The subgroup generated by the elements satisfying `pred`, and its index.
    pub fn subgroup_generated_by(&self, pred: impl Fn(&Perm) -> bool + Sync) -> Result<(PermGroup, u64)> {
        let e = self.enumeration()?;
        let d = e.generated_by(&|row| pred(&Perm::from_row(row)))?;
        let index = (e.len() / d.len()) as u64;
        Ok((PermGroup::from_enumeration(self.degree, d), index))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, cycles: &[&[u32]]) -> Perm {
        Perm::from_cycles(n, &cycles.iter().map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn agl15() -> PermGroup {
        PermGroup::new(5, vec![cyc(5, &[&[0, 1, 2, 3, 4]]), cyc(5, &[&[1, 2, 4, 3]])])
            .unwrap()
            .enumerated(DEFAULT_CAP)
            .unwrap()
    }

    /// Independent closure oracle: naive BFS over a `BTreeSet`.
    fn naive_closure(gens: &[Perm]) -> std::collections::BTreeSet<Vec<u32>> {
        let n = gens[0].degree();
        let mut set = std::collections::BTreeSet::new();
        let id = Perm::identity(n);
        set.insert(id.images().to_vec());
        let mut frontier = vec![id];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = x.compose(g).unwrap();
                if set.insert(y.images().to_vec()) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    #[test]
    fn enumerate_examples() {
        let c5 = PermGroup::cyclic(5).unwrap().enumerated(DEFAULT_CAP).unwrap();
        assert_eq!(c5.order(), Some(5));
        assert_eq!(agl15().order(), Some(20));
        let gens = vec![cyc(5, &[&[0, 1, 2, 3, 4]]), cyc(5, &[&[1, 2, 4, 3]])];
        assert_eq!(naive_closure(&gens).len(), 20);
    }

    #[test]
    fn alternating_nine() {
        let a9 = PermGroup::alternating(9).unwrap().enumerated(DEFAULT_CAP).unwrap();
        assert_eq!(a9.order(), Some(181_440));
        assert!(a9.is_transitive());
    }

    #[test]
    fn cap_exceeded_reports_partial_count() {
        let mut s6 = PermGroup::symmetric(6).unwrap();
        match s6.enumerate(100) {
            Err(Error::CapExceeded { cap, reached }) => {
                assert_eq!(cap, 100);
                assert!(reached <= 100);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn fixed_point_examples() {
        assert_eq!(Perm::identity(6).fixed_point_count(), 6);
        let c = cyc(5, &[&[0, 1, 2, 3, 4]]);
        assert_eq!(c.fixed_point_count(), 0);
        assert!(c.is_derangement());
        let d = cyc(5, &[&[0, 1], &[2, 3]]);
        assert_eq!(d.fixed_point_count(), 1);
        assert!(!d.is_derangement());
    }

    #[test]
    fn perm_basics() {
        assert!(Perm::new(vec![0, 0, 1]).is_err());
        assert!(Perm::from_cycles(3, &[vec![0, 3]]).is_err());
        assert!(Perm::from_cycles(4, &[vec![0, 1], vec![1, 2]]).is_err());
        let g = cyc(5, &[&[0, 1, 2], &[3, 4]]);
        assert_eq!(g.to_string(), "(0 1 2)(3 4)");
        assert_eq!(g.order(), 6);
        assert!(g.compose(&g.inverse()).unwrap().is_identity());
        assert_eq!(Perm::identity(3).to_string(), "()");
        // "self then other": 0 -> 1 under (0 1), then 1 -> 2 under (1 2).
        let a = cyc(3, &[&[0, 1]]);
        let b = cyc(3, &[&[1, 2]]);
        assert_eq!(a.compose(&b).unwrap().image(0), 2);
    }

    #[test]
    fn delta_examples() {
        assert_eq!(agl15().delta().unwrap(), ExactRatio::new(1, 5));
        let s3 = PermGroup::symmetric(3).unwrap().enumerated(DEFAULT_CAP).unwrap();
        assert_eq!(s3.delta().unwrap(), ExactRatio::new(1, 3));
        for n in 2..12 {
            let c = PermGroup::cyclic(n).unwrap().enumerated(DEFAULT_CAP).unwrap();
            assert_eq!(c.delta().unwrap(), ExactRatio::new(n as i64 - 1, n as i64));
        }
        let not_transitive = PermGroup::new(3, vec![cyc(3, &[&[0, 1]])]).unwrap().enumerated(10).unwrap();
        assert!(matches!(not_transitive.delta(), Err(Error::NotTransitive)));
    }

    #[test]
    fn symmetric_derangements_match_subfactorials() {
        // !n = (n−1)(!(n−1) + !(n−2))
        let mut sub = vec![1u64, 0];
        for n in 2..=8usize {
            let next = (n as u64 - 1) * (sub[n - 1] + sub[n - 2]);
            sub.push(next);
        }
        for n in 2..=8usize {
            let s = PermGroup::symmetric(n).unwrap().enumerated(DEFAULT_CAP).unwrap();
            assert_eq!(s.derangement_count().unwrap(), sub[n], "n = {n}");
        }
    }

    #[test]
    fn orbit_examples() {
        let g = PermGroup::new(3, vec![cyc(3, &[&[0, 1]])]).unwrap();
        assert_eq!(g.orbits(), vec![vec![0, 1], vec![2]]);
        assert!(!g.is_transitive());
        assert!(PermGroup::cyclic(5).unwrap().is_transitive());
        assert!(PermGroup::alternating(9).unwrap().is_transitive());
    }

    #[test]
    fn block_examples() {
        let c4 = PermGroup::cyclic(4).unwrap();
        let bs = c4.minimal_blocks(0, 2).unwrap();
        assert_eq!(bs.blocks(), vec![vec![0, 2], vec![1, 3]]);
        bs.validate(&c4).unwrap();
        assert!(!c4.is_primitive().unwrap());

        let s4 = PermGroup::symmetric(4).unwrap();
        for b in 1..4 {
            assert_eq!(s4.minimal_blocks(0, b).unwrap().block_count, 1);
        }
        assert!(s4.is_primitive().unwrap());

        let klein = PermGroup::new(4, vec![cyc(4, &[&[0, 1], &[2, 3]]), cyc(4, &[&[0, 2], &[1, 3]])]).unwrap();
        let bs = klein.minimal_blocks(0, 1).unwrap();
        assert_eq!(bs.block_size, 2);
        bs.validate(&klein).unwrap();

        assert!(agl15().is_primitive().unwrap());

        // S_3 acting on two copies of {0,1,2} and swapping them.
        let wr = PermGroup::new(
            6,
            vec![cyc(6, &[&[0, 1, 2]]), cyc(6, &[&[0, 1]]), cyc(6, &[&[0, 3], &[1, 4], &[2, 5]])],
        )
        .unwrap();
        assert!(!wr.is_primitive().unwrap());
        let systems = wr.block_systems().unwrap();
        assert!(systems.iter().any(|s| s.block_size == 3));
        assert!(matches!(
            PermGroup::new(3, vec![cyc(3, &[&[0, 1]])]).unwrap().minimal_blocks(0, 1),
            Err(Error::NotTransitive)
        ));
    }

    #[test]
    fn invalid_block_system_rejected() {
        let c4 = PermGroup::cyclic(4).unwrap();
        let bad = BlockSystem::from_labels(&[0, 0, 1, 1]).unwrap();
        assert!(matches!(c4.block_quotient(&bad), Err(Error::InvalidBlocks(_))));
        assert!(BlockSystem::from_labels(&[0, 0, 0, 1]).is_err());
    }

    #[test]
    fn quotient_examples() {
        let c4 = PermGroup::cyclic(4).unwrap();
        let bs = c4.minimal_blocks(0, 2).unwrap();
        let q = c4.block_quotient(&bs).unwrap().enumerated(DEFAULT_CAP).unwrap();
        assert_eq!(q.degree(), 2);
        assert_eq!(q.order(), Some(2));

        let wr = PermGroup::new(
            6,
            vec![cyc(6, &[&[0, 1, 2], &[3, 4, 5]]), cyc(6, &[&[0, 1], &[3, 4]]), cyc(6, &[&[0, 3], &[1, 4], &[2, 5]])],
        )
        .unwrap();
        let bs = wr.block_systems().unwrap().into_iter().find(|s| s.block_count == 2).unwrap();
        assert_eq!(wr.block_quotient(&bs).unwrap().degree(), 2);

        let s5 = PermGroup::symmetric(5).unwrap();
        let one = BlockSystem::from_labels(&[0; 5]).unwrap();
        assert_eq!(s5.block_quotient(&one).unwrap().degree(), 1);
    }

    #[test]
    fn frobenius_and_semiregular() {
        assert!(agl15().is_frobenius().unwrap());
        let c5 = PermGroup::cyclic(5).unwrap().enumerated(DEFAULT_CAP).unwrap();
        assert!(!c5.is_frobenius().unwrap());
        assert!(c5.is_semiregular(&[0, 1, 2, 3, 4]).unwrap());
        let s3 = PermGroup::symmetric(3).unwrap().enumerated(DEFAULT_CAP).unwrap();
        assert!(s3.is_frobenius().unwrap());
        assert!(!s3.is_semiregular(&[0, 1, 2]).unwrap());
    }

    #[test]
    fn derangement_subgroup_examples() {
        let c6 = PermGroup::cyclic(6).unwrap().enumerated(DEFAULT_CAP).unwrap();
        let (d, idx) = c6.derangement_subgroup(DEFAULT_CAP).unwrap();
        assert_eq!((d.order(), idx), (Some(6), 1));

        let g = agl15();
        let (_, idx) = g.derangement_subgroup(DEFAULT_CAP).unwrap();
        // The derangements are the 4 nontrivial translations: D is C_5, index 4.
        assert_eq!(idx, 4);
        assert!(ExactRatio::from_integer(idx) <= g.delta().unwrap().recip());

        let s3 = PermGroup::symmetric(3).unwrap().enumerated(DEFAULT_CAP).unwrap();
        let (d, idx) = s3.derangement_subgroup(DEFAULT_CAP).unwrap();
        assert_eq!(d.order(), Some(3));
        assert_eq!(idx, 2);
        assert!(d.contains(&cyc(3, &[&[0, 1, 2]])).unwrap());
        assert!(!d.contains(&cyc(3, &[&[0, 1]])).unwrap());
    }

    #[test]
    fn enumeration_is_independent_of_generator_order() {
        let a = vec![cyc(6, &[&[0, 1]]), cyc(6, &[&[0, 1, 2, 3, 4, 5]]), cyc(6, &[&[2, 3]])];
        let mut b = a.clone();
        b.reverse();
        let ga = PermGroup::new(6, a).unwrap().enumerated(DEFAULT_CAP).unwrap();
        let gb = PermGroup::new(6, b).unwrap().enumerated(DEFAULT_CAP).unwrap();
        for i in 0..720 {
            assert_eq!(ga.element(i).unwrap(), gb.element(i).unwrap());
        }
    }

    #[test]
    fn closure_against_naive_oracle() {
        let gens = vec![cyc(7, &[&[0, 1, 2, 3, 4, 5, 6]]), cyc(7, &[&[1, 2, 4], &[3, 6, 5]])];
        let naive = naive_closure(&gens);
        let g = PermGroup::new(7, gens).unwrap().enumerated(DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), Some(naive.len() as u64));
        g.for_each_element(|p| assert!(naive.contains(p.images()))).unwrap();
    }
}
