//! Group closure by coset enumeration.
//!
//! Elements are fixed-width `u16` rows (permutation images, or a Frobenius
//! exponent followed by matrix entries). A group is built one generator at a
//! time: when `g` is added to an enumerated subgroup `H`, the new elements are
//! laid out as whole right cosets `H·r`, so element `j·|H| + i` is `h_i · r_j`.
//! This makes every element a product of one coset representative per level,
//! which lets us drop the full rows once they exceed a memory budget and
//! rebuild any element on demand.
//!
//! Rows are hashed through a key: the whole row for narrow rows, otherwise a
//! fixed sample of positions. Key equality is trusted only when the key is the
//! whole row, or when the queried element is known to lie in an ambient group
//! whose elements all have distinct keys.

use std::hash::{Hash, Hasher};

use hashbrown::HashTable;
use rayon::prelude::*;
use rustc_hash::FxHasher;

use crate::error::{Error, Result};

/// Default ceiling on stored row entries (`u16`s) before switching to
/// on-demand reconstruction.
pub(crate) const DEFAULT_ROW_BUDGET: usize = 64 << 20;
const FULL_KEY_WIDTH: usize = 128;
const SAMPLE_WIDTH: usize = 48;

pub(crate) trait Action: Sync + Send {
    fn width(&self) -> usize;
    fn identity(&self) -> Vec<u16>;
    /// Writes the product "`a` then `b`" into `out`.
    fn compose(&self, a: &[u16], b: &[u16], out: &mut [u16]);
}

fn key_hash(key: &[u16]) -> u64 {
    let mut h = FxHasher::default();
    key.hash(&mut h);
    h.finish()
}

struct Level {
    /// Order of the subgroup this level extends.
    base: usize,
    /// Right coset representatives, flattened; the first is the identity.
    reps: Vec<u16>,
}

struct Store {
    width: usize,
    /// Positions forming the key; empty means the whole row.
    sample: Vec<usize>,
    keys: Vec<u16>,
    rows: Option<Vec<u16>>,
    row_budget: usize,
    table: HashTable<u32>,
    len: usize,
    distinct_keys: bool,
}

impl Store {
    fn key_len(&self) -> usize {
        if self.sample.is_empty() {
            self.width
        } else {
            self.sample.len()
        }
    }

    fn make_key(&self, row: &[u16], out: &mut Vec<u16>) {
        out.clear();
        if self.sample.is_empty() {
            out.extend_from_slice(row);
        } else {
            out.extend(self.sample.iter().map(|&i| row[i]));
        }
    }

    fn key(&self, idx: usize) -> &[u16] {
        let k = self.key_len();
        &self.keys[idx * k..(idx + 1) * k]
    }

    fn push(&mut self, row: &[u16], key_buf: &mut Vec<u16>) {
        self.make_key(row, key_buf);
        let h = key_hash(key_buf);
        let k = self.key_len();
        if self.distinct_keys {
            let keys = &self.keys;
            if self
                .table
                .find(h, |&i| &keys[i as usize * k..(i as usize + 1) * k] == key_buf.as_slice())
                .is_some()
            {
                self.distinct_keys = false;
            }
        }
        self.keys.extend_from_slice(key_buf);
        if let Some(rows) = &mut self.rows {
            rows.extend_from_slice(row);
        }
        let idx = self.len as u32;
        let keys = &self.keys;
        self.table
            .insert_unique(h, idx, |&i| key_hash(&keys[i as usize * k..(i as usize + 1) * k]));
        self.len += 1;
    }
}

/// Walks the elements of the subgroup spanned by `levels` in index order,
/// building each one as `r_1 · r_2 · ... · r_k` from the right.
fn walk(
    action: &dyn Action,
    levels: &[Level],
    identity: &[u16],
    f: &mut dyn FnMut(usize, &[u16]),
) {
    if levels.is_empty() {
        f(0, identity);
        return;
    }
    let w = identity.len();
    let mut bufs = vec![vec![0u16; w]; levels.len()];
    walk_rec(action, levels, levels.len(), identity, 0, &mut bufs, w, f);
}

#[allow(clippy::too_many_arguments)]
fn walk_rec(
    action: &dyn Action,
    levels: &[Level],
    depth: usize,
    suffix: &[u16],
    offset: usize,
    bufs: &mut [Vec<u16>],
    w: usize,
    f: &mut dyn FnMut(usize, &[u16]),
) {
    let level = &levels[depth - 1];
    let (lower, upper) = bufs.split_at_mut(depth - 1);
    let buf = &mut upper[0];
    for (j, rep) in level.reps.chunks_exact(w).enumerate() {
        action.compose(rep, suffix, buf);
        let at = offset + j * level.base;
        if depth == 1 {
            f(at, buf);
        } else {
            walk_rec(action, levels, depth - 1, buf, at, lower, w, f);
        }
    }
}

/// An enumerated group, grown by [`Enumeration::add_generator`].
pub(crate) struct Enumeration<A: Action> {
    action: A,
    identity: Vec<u16>,
    store: Store,
    levels: Vec<Level>,
    generators: Vec<Vec<u16>>,
    /// Queries are promised to come from an ambient group with distinct keys.
    trusted: bool,
}

impl<A: Action> Enumeration<A> {
    /// The trivial group.
    pub(crate) fn trivial(action: A, row_budget: usize) -> Self {
        let width = action.width();
        let sample = if width <= FULL_KEY_WIDTH {
            Vec::new()
        } else {
            let stride = width / SAMPLE_WIDTH;
            (0..SAMPLE_WIDTH).map(|i| i * stride).collect()
        };
        Self::with_sample(action, row_budget, sample, false)
    }

    /// The trivial subgroup of `ambient`; membership queries must only ever be
    /// made for elements of `ambient`.
    pub(crate) fn trivial_within(action: A, ambient: &Enumeration<A>) -> Self {
        let trusted = ambient.store.distinct_keys;
        Self::with_sample(action, ambient.store.row_budget, ambient.store.sample.clone(), trusted)
    }

    fn with_sample(action: A, row_budget: usize, sample: Vec<usize>, trusted: bool) -> Self {
        let width = action.width();
        let identity = action.identity();
        let mut e = Enumeration {
            action,
            identity: identity.clone(),
            store: Store {
                width,
                sample,
                keys: Vec::new(),
                rows: Some(Vec::new()),
                row_budget,
                table: HashTable::new(),
                len: 0,
                distinct_keys: true,
            },
            levels: Vec::new(),
            generators: Vec::new(),
            trusted,
        };
        let mut kb = Vec::new();
        e.store.push(&identity, &mut kb);
        e
    }

    /// Enumerates `⟨generators⟩`, adding generators in the given order.
    pub(crate) fn generate(
        action: A,
        generators: &[Vec<u16>],
        cap: usize,
        row_budget: usize,
    ) -> Result<Self> {
        let mut e = Self::trivial(action, row_budget);
        for g in generators {
            e.add_generator(g, cap)?;
        }
        Ok(e)
    }

    pub(crate) fn len(&self) -> usize {
        self.store.len
    }

    #[cfg(test)]
    fn rows_stored(&self) -> bool {
        self.store.rows.is_some()
    }

    pub(crate) fn generators(&self) -> &[Vec<u16>] {
        &self.generators
    }

    fn exact_keys(&self) -> bool {
        self.store.sample.is_empty() || self.trusted
    }

    /// Rebuilds element `idx` into `out`.
    pub(crate) fn element_into(&self, idx: usize, out: &mut [u16]) {
        let w = self.store.width;
        if let Some(rows) = &self.store.rows {
            out.copy_from_slice(&rows[idx * w..(idx + 1) * w]);
            return;
        }
        let mut digits = Vec::with_capacity(self.levels.len());
        let mut rest = idx;
        for level in self.levels.iter().rev() {
            digits.push(rest / level.base);
            rest %= level.base;
        }
        digits.reverse();
        out.copy_from_slice(&self.identity);
        let mut tmp = vec![0u16; w];
        for (level, &j) in self.levels.iter().zip(&digits) {
            self.action.compose(out, &level.reps[j * w..(j + 1) * w], &mut tmp);
            out.copy_from_slice(&tmp);
        }
    }

    pub(crate) fn element(&self, idx: usize) -> Vec<u16> {
        let mut out = vec![0u16; self.store.width];
        self.element_into(idx, &mut out);
        out
    }

    /// Index of `row` if it is a member.
    pub(crate) fn find(&self, row: &[u16]) -> Option<usize> {
        let mut kb = Vec::with_capacity(self.store.key_len());
        self.store.make_key(row, &mut kb);
        let h = key_hash(&kb);
        let exact = self.exact_keys();
        let mut scratch = Vec::new();
        for &i in self.store.table.iter_hash(h) {
            let i = i as usize;
            if self.store.key(i) != kb.as_slice() {
                continue;
            }
            if exact {
                return Some(i);
            }
            if let Some(rows) = &self.store.rows {
                let w = self.store.width;
                if &rows[i * w..(i + 1) * w] == row {
                    return Some(i);
                }
            } else {
                scratch.resize(self.store.width, 0);
                self.element_into(i, &mut scratch);
                if scratch.as_slice() == row {
                    return Some(i);
                }
            }
        }
        None
    }

    pub(crate) fn contains(&self, row: &[u16]) -> bool {
        self.find(row).is_some()
    }

    /// Extends the group by `g`. Returns whether the group grew.
    pub(crate) fn add_generator(&mut self, g: &[u16], cap: usize) -> Result<bool> {
        if self.contains(g) {
            return Ok(false);
        }
        let w = self.store.width;
        let base = self.store.len;
        self.generators.push(g.to_vec());
        self.levels.push(Level { base, reps: self.identity.clone() });
        let level_idx = self.levels.len() - 1;
        let mut x = vec![0u16; w];
        let mut next = 0usize;
        while next < self.levels[level_idx].reps.len() / w {
            let r = self.levels[level_idx].reps[next * w..(next + 1) * w].to_vec();
            for s in 0..self.generators.len() {
                self.action.compose(&r, &self.generators[s], &mut x);
                if self.contains(&x) {
                    continue;
                }
                if self.store.len + base > cap {
                    return Err(Error::CapExceeded { cap, reached: self.store.len });
                }
                self.levels[level_idx].reps.extend_from_slice(&x);
                self.add_coset(level_idx, base, &x);
            }
            next += 1;
        }
        Ok(true)
    }

    /// Appends the coset `H·x`, where `H` is the first `base` elements.
    fn add_coset(&mut self, level_idx: usize, base: usize, x: &[u16]) {
        let w = self.store.width;
        if self.store.rows.is_some() && (self.store.len + base) * w > self.store.row_budget {
            self.store.rows = None;
        }
        let mut kb = Vec::with_capacity(self.store.key_len());
        let mut y = vec![0u16; w];
        if self.store.rows.is_some() {
            let mut h = vec![0u16; w];
            for i in 0..base {
                h.copy_from_slice(&self.store.rows.as_ref().expect("rows present")[i * w..(i + 1) * w]);
                self.action.compose(&h, x, &mut y);
                self.store.push(&y, &mut kb);
            }
        } else {
            let store = &mut self.store;
            let action = &self.action;
            walk(action, &self.levels[..level_idx], &self.identity, &mut |_, h| {
                action.compose(h, x, &mut y);
                store.push(&y, &mut kb);
            });
        }
    }

    /// Visits every element in index order.
    pub(crate) fn for_each(&self, f: &mut dyn FnMut(usize, &[u16])) {
        let w = self.store.width;
        match &self.store.rows {
            Some(rows) => {
                for (i, row) in rows.chunks_exact(w).enumerate() {
                    f(i, row);
                }
            }
            None => walk(&self.action, &self.levels, &self.identity, f),
        }
    }

    /// Folds over all elements; `combine` must be associative and commutative
    /// so the result does not depend on how the work is split.
    pub(crate) fn fold<T, I, F, C>(&self, init: I, fold: F, combine: C) -> T
    where
        T: Send,
        I: Fn() -> T + Sync + Send,
        F: Fn(&mut T, &[u16]) + Sync + Send,
        C: Fn(T, T) -> T + Sync + Send,
    {
        let w = self.store.width;
        match &self.store.rows {
            Some(rows) => rows
                .par_chunks(w * 256)
                .map(|chunk| {
                    let mut acc = init();
                    for row in chunk.chunks_exact(w) {
                        fold(&mut acc, row);
                    }
                    acc
                })
                .reduce(&init, &combine),
            None => {
                let mut acc = init();
                walk(&self.action, &self.levels, &self.identity, &mut |_, row| fold(&mut acc, row));
                acc
            }
        }
    }

    /// The subgroup generated by the members satisfying `pred`, found by
    /// adding qualifying elements in index order whenever they are not yet
    /// covered.
    pub(crate) fn generated_by(&self, pred: &(dyn Fn(&[u16]) -> bool + Sync)) -> Result<Enumeration<A>>
    where
        A: Clone,
    {
        let mut sub = Enumeration::trivial_within(self.action.clone(), self);
        let total = self.len();
        let mut err = None;
        let mut full = false;
        self.for_each(&mut |_, row| {
            if full || err.is_some() || !pred(row) {
                return;
            }
            if !sub.contains(row) {
                if let Err(e) = sub.add_generator(row, total) {
                    err = Some(e);
                }
                full = sub.len() == total;
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(sub),
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    #[derive(Clone)]
    pub(crate) struct Sym(pub usize);

    impl Action for Sym {
        fn width(&self) -> usize {
            self.0
        }
        fn identity(&self) -> Vec<u16> {
            (0..self.0 as u16).collect()
        }
        fn compose(&self, a: &[u16], b: &[u16], out: &mut [u16]) {
            for (o, &x) in out.iter_mut().zip(a) {
                *o = b[x as usize];
            }
        }
    }

    fn cycle(n: usize) -> Vec<u16> {
        (0..n as u16).map(|i| (i + 1) % n as u16).collect()
    }

    fn swap(n: usize) -> Vec<u16> {
        let mut v: Vec<u16> = (0..n as u16).collect();
        v.swap(0, 1);
        v
    }

    #[test]
    fn symmetric_group_orders() {
        for n in 2..=7usize {
            let e = Enumeration::generate(Sym(n), &[swap(n), cycle(n)], 10_000, DEFAULT_ROW_BUDGET)
                .unwrap();
            let expected: usize = (1..=n).product();
            assert_eq!(e.len(), expected, "n = {n}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        let r = Enumeration::generate(Sym(6), &[swap(6), cycle(6)], 100, DEFAULT_ROW_BUDGET);
        assert!(matches!(r, Err(Error::CapExceeded { cap: 100, .. })));
    }

    #[test]
    fn reconstruction_matches_stored_rows() {
        let n = 7;
        let stored = Enumeration::generate(Sym(n), &[swap(n), cycle(n)], 10_000, DEFAULT_ROW_BUDGET).unwrap();
        let implicit = Enumeration::generate(Sym(n), &[swap(n), cycle(n)], 10_000, 64).unwrap();
        assert!(stored.rows_stored());
        assert!(!implicit.rows_stored());
        assert_eq!(implicit.len(), 5040);
        let mut seen = Vec::new();
        implicit.for_each(&mut |i, row| {
            assert_eq!(row, stored.element(i).as_slice());
            assert_eq!(implicit.element(i), row);
            seen.push(i);
        });
        assert_eq!(seen, (0..5040).collect::<Vec<_>>());
        for i in (0..5040).step_by(37) {
            assert_eq!(implicit.find(&stored.element(i)), Some(i));
        }
    }

    #[test]
    fn sampled_keys_on_wide_rows() {
        // A regular cyclic group on 200 points: wide rows use sampled keys.
        let n = 200;
        let e = Enumeration::generate(Sym(n), &[cycle(n)], 1000, 1000).unwrap();
        assert_eq!(e.len(), 200);
        assert!(!e.rows_stored());
        let d = e.generated_by(&|row| row[0] % 2 == 0).unwrap();
        assert_eq!(d.len(), 100);
    }

    #[test]
    fn fold_counts_match() {
        let n = 5;
        let e = Enumeration::generate(Sym(n), &[swap(n), cycle(n)], 1000, DEFAULT_ROW_BUDGET).unwrap();
        let derangements = e.fold(
            || 0u64,
            |acc, row| {
                if row.iter().enumerate().all(|(i, &x)| x as usize != i) {
                    *acc += 1;
                }
            },
            |a, b| a + b,
        );
        assert_eq!(derangements, 44);
        let alt = e
            .generated_by(&|row| {
                let mut seen = vec![false; row.len()];
                let mut parity = 0;
                for s in 0..row.len() {
                    if seen[s] {
                        continue;
                    }
                    let mut len = 0;
                    let mut x = s;
                    while !seen[x] {
                        seen[x] = true;
                        x = row[x] as usize;
                        len += 1;
                    }
                    parity += len - 1;
                }
                parity % 2 == 0
            })
            .unwrap();
        assert_eq!(alt.len(), 60);
    }
}
