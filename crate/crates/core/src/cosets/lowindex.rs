//! Backtracking search over partial coset tables for all subgroups of bounded index.

use super::{CosetTable, EnumerationLimits};
use crate::cosets::enumerate::verify_table;
use crate::error::{Error, Result};
use crate::perms::{GeneratorAction, Permutation};
use crate::words::LPresentation;

const UNDEF: u32 = u32::MAX;

#[derive(Clone)]
struct Partial {
    cols: usize,
    n: usize,
    table: Vec<u32>,
}

impl Partial {
    #[inline]
    fn get(&self, c: usize, col: usize) -> u32 {
        self.table[c * self.cols + col]
    }

    #[inline]
    fn set(&mut self, c: usize, col: usize, d: usize) {
        self.table[c * self.cols + col] = d as u32;
    }

    fn first_undefined(&self) -> Option<(usize, usize)> {
        let pos = self.table[..self.n * self.cols].iter().position(|&d| d == UNDEF)?;
        Some((pos / self.cols, pos % self.cols))
    }

    /// Traces every relator at every coset, filling forced entries.
    /// Returns false if some relator fails to close.
    fn deduce(&mut self, relators: &[Vec<usize>]) -> bool {
        loop {
            let mut changed = false;
            for c in 0..self.n {
                for r in relators {
                    match self.scan(c, r) {
                        Scan::Closed | Scan::Open => {}
                        Scan::Conflict => return false,
                        Scan::Deduce(f, col, b) => {
                            self.set(f, col, b);
                            self.set(b, col ^ 1, f);
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn scan(&self, c: usize, r: &[usize]) -> Scan {
        let mut f = c;
        let mut i = 0;
        while i < r.len() {
            let d = self.get(f, r[i]);
            if d == UNDEF {
                break;
            }
            f = d as usize;
            i += 1;
        }
        if i == r.len() {
            return if f == c { Scan::Closed } else { Scan::Conflict };
        }
        let mut b = c;
        let mut j = r.len();
        while j > i {
            let d = self.get(b, r[j - 1] ^ 1);
            if d == UNDEF {
                break;
            }
            b = d as usize;
            j -= 1;
        }
        if j == i {
            return if f == b { Scan::Closed } else { Scan::Conflict };
        }
        if j == i + 1 {
            return Scan::Deduce(f, r[i], b);
        }
        Scan::Open
    }

    fn to_action(&self, rank: usize) -> GeneratorAction {
        let perms = (0..rank)
            .map(|g| Permutation::from_raw((0..self.n).map(|c| self.get(c, 2 * g)).collect()))
            .collect();
        GeneratorAction::new(self.n, perms).expect("complete table")
    }
}

enum Scan {
    Closed,
    Open,
    Conflict,
    Deduce(usize, usize, usize),
}

struct Search<'a> {
    lp: &'a LPresentation,
    relators: Vec<Vec<usize>>,
    max_index: usize,
    budget: usize,
    visited: usize,
    found: Vec<CosetTable>,
}

impl Search<'_> {
    fn run(&mut self, st: Partial) -> Result<()> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(Error::ResourceLimit(format!(
                "low-index search budget of {} nodes exhausted",
                self.budget
            )));
        }
        let Some((c, col)) = st.first_undefined() else {
            let action = st.to_action(self.lp.rank());
            if verify_table(self.lp, &action)? {
                self.found.push(CosetTable::from_action(action.standardized())?);
            }
            return Ok(());
        };
        let top = if st.n < self.max_index { st.n } else { st.n - 1 };
        for d in 0..=top {
            if d < st.n && st.get(d, col ^ 1) != UNDEF {
                continue;
            }
            let mut next = st.clone();
            if d == st.n {
                next.n += 1;
            }
            next.set(c, col, d);
            next.set(d, col ^ 1, c);
            if next.deduce(&self.relators) {
                self.run(next)?;
            }
        }
        Ok(())
    }
}

/// All subgroups of index at most `max_index`, one table each, sorted by
/// index and then by the permutation images.
pub fn low_index_tables(
    lp: &LPresentation,
    max_index: usize,
    limits: &EnumerationLimits,
) -> Result<Vec<CosetTable>> {
    limits.validate()?;
    if max_index == 0 {
        return Err(Error::Malformed("maximal index must be at least 1".into()));
    }
    let rank = lp.rank();
    if rank == 0 {
        return Ok(vec![CosetTable::whole_group(0)]);
    }
    let mut relators: Vec<Vec<usize>> = Vec::new();
    for r in &lp.instantiate(limits.depth_schedule[0]).relators {
        let cols: Vec<usize> = r.cyclically_reduced().letters().iter().map(|l| l.column()).collect();
        if !cols.is_empty() && !relators.contains(&cols) {
            relators.push(cols);
        }
    }
    relators.sort_by_key(|r| r.len());
    let cols = 2 * rank;
    let start = Partial {
        cols,
        n: 1,
        table: vec![UNDEF; cols * max_index],
    };
    let mut search = Search {
        lp,
        relators,
        max_index,
        budget: limits.search_budget,
        visited: 0,
        found: Vec::new(),
    };
    let mut start = start;
    let outcome = if start.deduce(&search.relators.clone()) {
        search.run(start)
    } else {
        Ok(())
    };
    let mut found = search.found;
    found.sort_by(|a, b| {
        a.index()
            .cmp(&b.index())
            .then_with(|| a.action().perms().cmp(b.action().perms()))
    });
    match outcome {
        Ok(()) => Ok(found),
        Err(e) if e.is_resource_limit() => Err(Error::LowIndexInconclusive {
            reason: e.to_string(),
            partial: found,
        }),
        Err(e) => Err(e),
    }
}
