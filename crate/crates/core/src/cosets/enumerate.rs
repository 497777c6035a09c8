//! Relator-driven (HLT) coset enumeration with coincidence processing, and the
//! truncate-and-verify driver for L-presentations.

use super::{CosetTable, EnumerationLimits};
use crate::analysis::iterating_endomorphisms;
use crate::error::{Error, Result};
use crate::perms::{act_word, GeneratorAction, Permutation};
use crate::words::{LPresentation, Word};

const UNDEF: u32 = u32::MAX;

struct Enumerator {
    cols: usize,
    table: Vec<u32>,
    /// Forwarding pointers; `forward[c] == c` for live cosets.
    forward: Vec<u32>,
    queue: Vec<u32>,
    max_cosets: usize,
    overflow: bool,
}

impl Enumerator {
    fn new(rank: usize, max_cosets: usize) -> Self {
        let cols = 2 * rank;
        Enumerator {
            cols,
            table: vec![UNDEF; cols],
            forward: vec![0],
            queue: Vec::new(),
            max_cosets,
            overflow: false,
        }
    }

    #[inline]
    fn get(&self, c: u32, col: usize) -> u32 {
        self.table[c as usize * self.cols + col]
    }

    #[inline]
    fn set(&mut self, c: u32, col: usize, d: u32) {
        self.table[c as usize * self.cols + col] = d;
    }

    fn len(&self) -> usize {
        self.forward.len()
    }

    fn is_live(&self, c: u32) -> bool {
        self.forward[c as usize] == c
    }

    fn define(&mut self, c: u32, col: usize) -> bool {
        if self.len() >= self.max_cosets {
            self.overflow = true;
            return false;
        }
        let d = self.len() as u32;
        self.forward.push(d);
        self.table.extend(std::iter::repeat_n(UNDEF, self.cols));
        self.set(c, col, d);
        self.set(d, col ^ 1, c);
        true
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut root = c;
        while self.forward[root as usize] != root {
            root = self.forward[root as usize];
        }
        let mut k = c;
        while self.forward[k as usize] != root {
            let next = self.forward[k as usize];
            self.forward[k as usize] = root;
            k = next;
        }
        root
    }

    fn merge(&mut self, k: u32, l: u32) {
        let (k, l) = (self.rep(k), self.rep(l));
        if k == l {
            return;
        }
        let (lo, hi) = if k < l { (k, l) } else { (l, k) };
        self.forward[hi as usize] = lo;
        self.queue.push(hi);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let e = self.queue[i];
            i += 1;
            for col in 0..self.cols {
                let f = self.get(e, col);
                if f == UNDEF {
                    continue;
                }
                self.set(f, col ^ 1, UNDEF);
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let img = self.get(e1, col);
                if img != UNDEF {
                    self.merge(f1, img);
                } else {
                    let back = self.get(f1, col ^ 1);
                    if back != UNDEF {
                        self.merge(e1, back);
                    } else {
                        self.set(e1, col, f1);
                        self.set(f1, col ^ 1, e1);
                    }
                }
            }
        }
    }

    /// Scans `w` (as column indices) at coset `c`, defining cosets as needed.
    fn scan_and_fill(&mut self, c: u32, w: &[usize]) {
        if w.is_empty() {
            return;
        }
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = w.len() - 1;
        loop {
            while i <= j && self.get(f, w[i]) != UNDEF {
                f = self.get(f, w[i]);
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return;
            }
            while j >= i && self.get(b, w[j] ^ 1) != UNDEF {
                b = self.get(b, w[j] ^ 1);
                if j == 0 {
                    // the whole word traced backwards
                    if f != b {
                        self.coincidence(f, b);
                    }
                    return;
                }
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return;
            }
            if i == j {
                self.set(f, w[i], b);
                self.set(b, w[i] ^ 1, f);
                return;
            }
            if !self.define(f, w[i]) {
                return;
            }
        }
    }

    fn run(&mut self, relators: &[Vec<usize>], subgroup: &[Vec<usize>]) -> bool {
        for w in subgroup {
            let base = self.rep(0);
            self.scan_and_fill(base, w);
            if self.overflow {
                return false;
            }
        }
        let mut c = 0u32;
        while (c as usize) < self.len() {
            if self.is_live(c) {
                for r in relators {
                    self.scan_and_fill(c, r);
                    if self.overflow {
                        return false;
                    }
                    if !self.is_live(c) {
                        break;
                    }
                }
                if self.is_live(c) {
                    for col in 0..self.cols {
                        if self.get(c, col) == UNDEF && !self.define(c, col) {
                            return false;
                        }
                    }
                }
            }
            c += 1;
        }
        true
    }

    fn into_action(mut self, rank: usize) -> GeneratorAction {
        let live: Vec<u32> = (0..self.len() as u32).filter(|&c| self.is_live(c)).collect();
        let mut label = vec![UNDEF; self.len()];
        for (k, &c) in live.iter().enumerate() {
            label[c as usize] = k as u32;
        }
        let perms = (0..rank)
            .map(|g| {
                let images = live
                    .iter()
                    .map(|&c| {
                        let d = self.get(c, 2 * g);
                        label[self.rep(d) as usize]
                    })
                    .collect();
                Permutation::from_raw(images)
            })
            .collect();
        GeneratorAction::new(live.len(), perms)
            .expect("enumerated permutations have the table's degree")
            .standardized()
    }
}

fn columns(w: &Word) -> Vec<usize> {
    w.letters().iter().map(|l| l.column()).collect()
}

/// Classical enumeration of the cosets of `<subgroup_gens>` in `<X | relators>`.
/// Returns `None` when more than `max_cosets` cosets would be needed.
pub fn enumerate_finite(
    rank: usize,
    relators: &[Word],
    subgroup_gens: &[Word],
    max_cosets: usize,
) -> Option<GeneratorAction> {
    let mut rels: Vec<Vec<usize>> = Vec::new();
    for r in relators {
        let c = columns(&r.cyclically_reduced());
        if !c.is_empty() && !rels.contains(&c) {
            rels.push(c);
        }
    }
    rels.sort_by_key(|r| r.len());
    let subgroup: Vec<Vec<usize>> = subgroup_gens.iter().map(columns).collect();
    let mut e = Enumerator::new(rank, max_cosets);
    if rank == 0 {
        return Some(GeneratorAction::trivial(0, 1));
    }
    if !e.run(&rels, &subgroup) {
        return None;
    }
    Some(e.into_action(rank))
}

/// Checks that every fixed relator and every iterated relator under every
/// representative substitution acts trivially on all points.
pub fn verify_table(lp: &LPresentation, action: &GeneratorAction) -> Result<bool> {
    for q in lp.fixed() {
        if !act_word(action, q)?.is_identity() {
            return Ok(false);
        }
    }
    let tree = iterating_endomorphisms(&lp.endomorphisms(), action)?;
    for node in tree.nodes() {
        for r in lp.iterated() {
            if !act_word(&node.action, r)?.is_identity() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Enumerates the cosets of `<subgroup_gens> K` where `K` is the full relation
/// subgroup of `lp`, by enumerating against growing instantiations and
/// verifying each candidate exactly.
pub fn enumerate_cosets(
    lp: &LPresentation,
    subgroup_gens: &[Word],
    limits: &EnumerationLimits,
) -> Result<CosetTable> {
    limits.validate()?;
    for w in subgroup_gens {
        lp.alphabet().check_word(w)?;
    }
    let mut last_failure = String::from("no depth attempted");
    for &depth in &limits.depth_schedule {
        let fp = lp.instantiate(depth);
        match enumerate_finite(lp.rank(), &fp.relators, subgroup_gens, limits.max_cosets) {
            None => {
                last_failure = format!("more than {} cosets at depth {depth}", limits.max_cosets);
            }
            Some(action) => {
                if verify_table(lp, &action)? {
                    return Ok(CosetTable::new_unchecked(action, subgroup_gens.to_vec()));
                }
                last_failure = format!("table closed at depth {depth} but failed verification");
            }
        }
    }
    Err(Error::Inconclusive(format!(
        "coset enumeration did not verify ({last_failure}); the subgroup may have infinite index"
    )))
}
