//! Coset tables of finite-index subgroups, Schreier generators and rewriting,
//! and low-index subgroup search.

mod enumerate;
mod lowindex;
mod schreier;

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perms::{closure_of, GeneratorAction, Permutation, DEFAULT_CLOSURE_CAP};
use crate::words::{Letter, Word};

pub use enumerate::{enumerate_cosets, enumerate_finite, verify_table};
pub use lowindex::low_index_tables;
pub use schreier::{SchreierData, SchreierGenerator};

/// Budgets for enumeration and search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationLimits {
    pub max_cosets: usize,
    /// Instantiation depths tried in turn; must be increasing.
    pub depth_schedule: Vec<usize>,
    pub closure_cap: usize,
    /// Maximum number of search nodes visited by low-index search.
    pub search_budget: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_cosets: 1 << 16,
            depth_schedule: vec![2, 4, 6, 8],
            closure_cap: DEFAULT_CLOSURE_CAP,
            search_budget: 50_000_000,
        }
    }
}

impl EnumerationLimits {
    pub fn validate(&self) -> Result<()> {
        if self.max_cosets == 0 || self.closure_cap == 0 || self.search_budget == 0 {
            return Err(Error::Malformed("enumeration limits must be positive".into()));
        }
        if self.depth_schedule.is_empty() {
            return Err(Error::Malformed("empty depth schedule".into()));
        }
        if self.depth_schedule.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Malformed("depth schedule must be increasing".into()));
        }
        Ok(())
    }
}

/// A closed, transitive coset table with base coset 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct CosetTable {
    action: GeneratorAction,
    inverses: Vec<Permutation>,
    subgroup_gens: Vec<Word>,
}

#[derive(Serialize, Deserialize)]
struct RawTable {
    action: GeneratorAction,
    subgroup_gens: Vec<Word>,
}

impl TryFrom<RawTable> for CosetTable {
    type Error = Error;

    fn try_from(raw: RawTable) -> Result<Self> {
        CosetTable::new(raw.action, raw.subgroup_gens)
    }
}

impl From<CosetTable> for RawTable {
    fn from(t: CosetTable) -> Self {
        RawTable {
            action: t.action,
            subgroup_gens: t.subgroup_gens,
        }
    }
}

impl CosetTable {
    /// Wraps a transitive action; `subgroup_gens` should generate the stabilizer of 0.
    pub fn new(action: GeneratorAction, subgroup_gens: Vec<Word>) -> Result<Self> {
        if action.degree() == 0 {
            return Err(Error::Malformed("coset table of degree 0".into()));
        }
        let t = Self::new_unchecked(action, subgroup_gens);
        if t.orbit_of_base().len() != t.index() {
            return Err(Error::Malformed("coset table is not transitive".into()));
        }
        Ok(t)
    }

    pub(crate) fn new_unchecked(action: GeneratorAction, subgroup_gens: Vec<Word>) -> Self {
        let inverses = action.perms().iter().map(Permutation::inverse).collect();
        CosetTable {
            action,
            inverses,
            subgroup_gens,
        }
    }

    /// Table of a transitive action with the stabilizer described by its Schreier generators.
    pub fn from_action(action: GeneratorAction) -> Result<Self> {
        let t = CosetTable::new(action, Vec::new())?;
        let gens = SchreierData::new(&t).definition_words();
        Ok(CosetTable {
            subgroup_gens: gens,
            ..t
        })
    }

    /// The table of the whole free group on `rank` generators.
    pub fn whole_group(rank: usize) -> Self {
        CosetTable::new_unchecked(
            GeneratorAction::trivial(rank, 1),
            (0..rank).map(Word::generator).collect(),
        )
    }

    pub fn index(&self) -> usize {
        self.action.degree()
    }

    pub fn rank(&self) -> usize {
        self.action.rank()
    }

    pub fn action(&self) -> &GeneratorAction {
        &self.action
    }

    pub fn subgroup_gens(&self) -> &[Word] {
        &self.subgroup_gens
    }

    #[inline]
    pub fn image(&self, coset: usize, l: Letter) -> usize {
        if l.is_inverse() {
            self.inverses[l.gen()].image(coset)
        } else {
            self.action.generator(l.gen()).image(coset)
        }
    }

    pub fn trace(&self, coset: usize, w: &Word) -> usize {
        w.letters().iter().fold(coset, |c, &l| self.image(c, l))
    }

    /// Membership in the subgroup: the word fixes the base coset.
    pub fn contains(&self, w: &Word) -> bool {
        w.max_generator().is_none_or(|g| g < self.rank()) && self.trace(0, w) == 0
    }

    /// Whether `w` acts trivially on every coset.
    pub fn acts_trivially(&self, w: &Word) -> bool {
        (0..self.index()).all(|c| self.trace(c, w) == c)
    }

    /// Normal iff every Schreier generator fixes every coset.
    pub fn is_normal(&self) -> bool {
        SchreierData::new(self)
            .generators()
            .iter()
            .all(|g| self.acts_trivially(&g.word))
    }

    /// Maximal iff the action is primitive.
    pub fn is_maximal(&self) -> bool {
        let n = self.index();
        if n <= 2 {
            return true;
        }
        (1..n).all(|p| self.minimal_block(p) == n)
    }

    /// Size of the smallest block of imprimitivity containing cosets 0 and `p`.
    fn minimal_block(&self, p: usize) -> usize {
        let n = self.index();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut queue = VecDeque::from([(0usize, p)]);
        while let Some((a, b)) = queue.pop_front() {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                continue;
            }
            parent[ra] = rb;
            for perm in self.action.perms() {
                queue.push_back((perm.image(a), perm.image(b)));
            }
        }
        let root = find(&mut parent, 0);
        (0..n).filter(|&x| find(&mut parent, x) == root).count()
    }

    /// Order of the image of the action in the symmetric group.
    pub fn permutation_group_order(&self, cap: usize) -> Result<usize> {
        Ok(closure_of(self.index(), self.action.perms(), cap)?.len())
    }

    fn orbit_of_base(&self) -> Vec<usize> {
        let mut seen = vec![false; self.index()];
        seen[0] = true;
        let mut order = vec![0];
        let mut head = 0;
        while head < order.len() {
            let c = order[head];
            head += 1;
            for perm in self.action.perms() {
                let d = perm.image(c);
                if !seen[d] {
                    seen[d] = true;
                    order.push(d);
                }
            }
        }
        order
    }

    /// Relabels cosets in breadth-first order from the base coset.
    pub fn standardized(&self) -> CosetTable {
        CosetTable::new_unchecked(self.action.standardized(), self.subgroup_gens.clone())
    }

    /// Same subgroup (same stabilizer of the base coset) regardless of labels.
    pub fn same_subgroup(&self, other: &CosetTable) -> bool {
        self.rank() == other.rank() && self.standardized().action == other.standardized().action
    }
}

/// Stabilizer of a tuple of points under the diagonal action of several actions.
pub fn orbit_table(components: &[(GeneratorAction, usize)], max_points: usize) -> Result<CosetTable> {
    let Some((first, _)) = components.first() else {
        return Err(Error::Malformed("orbit_table needs at least one component".into()));
    };
    let rank = first.rank();
    if components.iter().any(|(a, _)| a.rank() != rank) {
        return Err(Error::AlphabetMismatch("components of different rank".into()));
    }
    let start: Vec<usize> = components.iter().map(|&(_, b)| b).collect();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(start.clone(), 0)]);
    let mut points = vec![start];
    let mut edges: Vec<Vec<u32>> = vec![Vec::new(); rank];
    let mut head = 0;
    while head < points.len() {
        let pt = points[head].clone();
        head += 1;
        for (g, edge) in edges.iter_mut().enumerate() {
            let img: Vec<usize> = components
                .iter()
                .zip(&pt)
                .map(|((a, _), &p)| a.generator(g).image(p))
                .collect();
            let next = index.len();
            let j = *index.entry(img.clone()).or_insert(next);
            if j == next {
                if points.len() >= max_points {
                    return Err(Error::ResourceLimit(format!("orbit exceeds {max_points} points")));
                }
                points.push(img);
            }
            edge.push(j as u32);
        }
    }
    let perms = edges.into_iter().map(Permutation::from_raw).collect();
    CosetTable::from_action(GeneratorAction::new(points.len(), perms)?)
}

/// Intersection of the kernels, as the regular action of the image of the combined map.
pub fn kernel_table(components: &[GeneratorAction], cap: usize) -> Result<CosetTable> {
    let Some(first) = components.first() else {
        return Err(Error::Malformed("kernel_table needs at least one component".into()));
    };
    let rank = first.rank();
    if components.iter().any(|a| a.rank() != rank) {
        return Err(Error::AlphabetMismatch("components of different rank".into()));
    }
    // direct sum on the disjoint union of the point sets
    let degree: usize = components.iter().map(|a| a.degree()).sum();
    let gens: Vec<Permutation> = (0..rank)
        .map(|g| {
            let mut images = Vec::with_capacity(degree);
            let mut offset = 0u32;
            for a in components {
                images.extend(a.generator(g).images().iter().map(|&i| i as u32 + offset));
                offset += a.degree() as u32;
            }
            Permutation::from_raw(images)
        })
        .collect();
    let elements = closure_of(degree, &gens, cap)?;
    let position: HashMap<&Permutation, usize> =
        elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let perms = gens
        .iter()
        .map(|s| {
            Permutation::from_raw(
                elements
                    .iter()
                    .map(|e| position[&e.then(s)] as u32)
                    .collect(),
            )
        })
        .collect();
    CosetTable::from_action(GeneratorAction::new(elements.len(), perms)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    fn u1() -> CosetTable {
        CosetTable::from_action(GeneratorAction::new(3, vec![p("()", 3), p("(1,2,3)", 3)]).unwrap())
            .unwrap()
    }

    #[test]
    fn membership() {
        let t = u1();
        assert!(t.contains(&Word::from_syllables(&[(1, 3)])));
        assert!(!t.contains(&Word::generator(1)));
        assert!(t.contains(&Word::identity()));
    }

    #[test]
    fn normality_and_primitivity() {
        let t = u1();
        assert!(t.is_normal());
        assert!(t.is_maximal());
        // S3 acting on 3 points: point stabilizer not normal
        let s3 = CosetTable::from_action(
            GeneratorAction::new(3, vec![p("(2,3)", 3), p("(1,2,3)", 3)]).unwrap(),
        )
        .unwrap();
        assert!(!s3.is_normal());
        assert!(s3.is_maximal());
        // C4 regular: block {1,3}
        let c4 = CosetTable::from_action(
            GeneratorAction::new(4, vec![p("(1,2,3,4)", 4), p("()", 4)]).unwrap(),
        )
        .unwrap();
        assert!(!c4.is_maximal());
    }

    #[test]
    fn intransitive_rejected() {
        let a = GeneratorAction::new(3, vec![p("(1,2)", 3)]).unwrap();
        assert!(CosetTable::new(a, vec![]).is_err());
    }

    #[test]
    fn orbit_of_single_component_is_same_subgroup() {
        let t = u1();
        let o = orbit_table(&[(t.action().clone(), 0)], 100).unwrap();
        assert!(o.same_subgroup(&t));
    }

    #[test]
    fn kernel_of_trivial_action() {
        let k = kernel_table(&[GeneratorAction::trivial(2, 1)], 10).unwrap();
        assert_eq!(k.index(), 1);
        let k = kernel_table(&[u1().action().clone()], 10).unwrap();
        assert_eq!(k.index(), 3);
    }
}
