//! Permutations of finite point sets, homomorphisms from free groups into
//! symmetric groups, and the factoring test between two such homomorphisms.
//!
//! Points are 0-based internally and 1-based in cycle notation. Products are
//! read left to right: in `p * q` the permutation `p` is applied first.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{FreeEndomorphism, Word};

/// Default bound on the number of group elements a closure may produce.
pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Malformed(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|i| i as u32).collect(),
        })
    }

    pub(crate) fn from_raw(images: Vec<u32>) -> Self {
        Permutation { images }
    }

    /// Parses cycle notation with 1-based points, e.g. `(1,2)(3,5)` or `()`.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .and_then(|r| r.split_once(')'))
                .ok_or_else(|| Error::Malformed(format!("bad cycle notation {text:?}")))?;
            let (inside, tail) = body;
            rest = tail.trim_start();
            if inside.trim().is_empty() {
                continue;
            }
            let points = inside
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<usize>()
                        .ok()
                        .filter(|&k| k >= 1 && k <= degree)
                        .map(|k| k - 1)
                        .ok_or_else(|| Error::Malformed(format!("bad point {p:?} in {text:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            for (k, &p) in points.iter().enumerate() {
                if images[p] != p || points[..k].contains(&p) {
                    return Err(Error::Malformed(format!("point {} repeated in {text:?}", p + 1)));
                }
                images[p] = points[(k + 1) % points.len()];
            }
        }
        Permutation::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// `self` applied first, then `other`.
    pub fn then(&self, other: &Permutation) -> Self {
        Permutation {
            images: self.images.iter().map(|&i| other.images[i as usize]).collect(),
        }
    }

    pub fn order(&self) -> usize {
        let mut seen = vec![false; self.degree()];
        let mut order = 1usize;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.image(p);
                len += 1;
            }
            order = num_integer::lcm(order, len);
        }
        order
    }

    /// Cycles of length at least two, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.image(start) == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p);
                p = self.image(p);
            }
            out.push(cycle);
        }
        out
    }
}

impl std::ops::Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        self.then(rhs)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, p) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// A homomorphism from a free group into `Sym(degree)`, given by generator images.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorAction {
    degree: usize,
    perms: Vec<Permutation>,
}

impl GeneratorAction {
    pub fn new(degree: usize, perms: Vec<Permutation>) -> Result<Self> {
        if let Some(p) = perms.iter().find(|p| p.degree() != degree) {
            return Err(Error::Malformed(format!(
                "permutation of degree {} in an action of degree {degree}",
                p.degree()
            )));
        }
        Ok(GeneratorAction { degree, perms })
    }

    /// Every generator acts trivially.
    pub fn trivial(rank: usize, degree: usize) -> Self {
        GeneratorAction {
            degree,
            perms: vec![Permutation::identity(degree); rank],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.perms.len()
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn generator(&self, gen: usize) -> &Permutation {
        &self.perms[gen]
    }

    /// Image of `point` under `w`.
    pub fn trace(&self, point: usize, w: &Word) -> usize {
        w.letters().iter().fold(point, |p, l| {
            let perm = &self.perms[l.gen()];
            if l.is_inverse() {
                perm.images.iter().position(|&q| q as usize == p).unwrap()
            } else {
                perm.image(p)
            }
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.perms.iter().all(Permutation::is_identity)
    }

    /// Renumbers points so that a breadth-first search from point 0 over the
    /// generators in order visits them as `0, 1, 2, ...`. Points not reachable
    /// from 0 keep their relative order after the reachable ones.
    pub fn standardized(&self) -> GeneratorAction {
        let n = self.degree;
        let mut label = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut starts = 0..n;
        while order.len() < n {
            let s = starts.find(|&s| label[s] == usize::MAX).unwrap();
            label[s] = order.len();
            order.push(s);
            let mut head = order.len() - 1;
            while head < order.len() {
                let p = order[head];
                head += 1;
                for perm in &self.perms {
                    let q = perm.image(p);
                    if label[q] == usize::MAX {
                        label[q] = order.len();
                        order.push(q);
                    }
                }
            }
        }
        self.relabel(&label)
    }

    /// Applies the point renaming `p -> label[p]`.
    pub fn relabel(&self, label: &[usize]) -> GeneratorAction {
        let perms = self
            .perms
            .iter()
            .map(|perm| {
                let mut images = vec![0u32; self.degree];
                for p in 0..self.degree {
                    images[label[p]] = label[perm.image(p)] as u32;
                }
                Permutation { images }
            })
            .collect();
        GeneratorAction {
            degree: self.degree,
            perms,
        }
    }
}

/// Image of `w` as a permutation; letters are applied left to right.
pub fn act_word(a: &GeneratorAction, w: &Word) -> Result<Permutation> {
    if let Some(g) = w.max_generator().filter(|&g| g >= a.rank()) {
        return Err(Error::AlphabetMismatch(format!(
            "word uses generator {g}, action has rank {}",
            a.rank()
        )));
    }
    let inverses: Vec<Option<Permutation>> = {
        let mut used = vec![false; a.rank()];
        for l in w.letters().iter().filter(|l| l.is_inverse()) {
            used[l.gen()] = true;
        }
        used.iter()
            .zip(&a.perms)
            .map(|(&u, p)| u.then(|| p.inverse()))
            .collect()
    };
    let mut images: Vec<u32> = (0..a.degree as u32).collect();
    for l in w.letters() {
        let perm = if l.is_inverse() {
            inverses[l.gen()].as_ref().unwrap()
        } else {
            &a.perms[l.gen()]
        };
        for x in images.iter_mut() {
            *x = perm.images[*x as usize];
        }
    }
    Ok(Permutation { images })
}

/// The action `x -> act_word(a, x^e)`: first `e`, then `a`.
pub fn compose_action(a: &GeneratorAction, e: &FreeEndomorphism) -> Result<GeneratorAction> {
    if e.rank() != a.rank() {
        return Err(Error::AlphabetMismatch(format!(
            "endomorphism of rank {} with action of rank {}",
            e.rank(),
            a.rank()
        )));
    }
    let perms = e
        .images()
        .iter()
        .map(|w| act_word(a, w))
        .collect::<Result<_>>()?;
    Ok(GeneratorAction {
        degree: a.degree,
        perms,
    })
}

pub fn actions_equal(a: &GeneratorAction, b: &GeneratorAction) -> bool {
    a == b
}

/// All elements of the group generated by the generator images, breadth first.
pub fn closure(a: &GeneratorAction, cap: usize) -> Result<Vec<Permutation>> {
    closure_of(a.degree, &a.perms, cap)
}

pub(crate) fn closure_of(
    degree: usize,
    gens: &[Permutation],
    cap: usize,
) -> Result<Vec<Permutation>> {
    let id = Permutation::identity(degree);
    let mut seen: HashMap<Permutation, ()> = HashMap::from([(id.clone(), ())]);
    let mut elements = vec![id];
    let mut head = 0;
    while head < elements.len() {
        let g = elements[head].clone();
        head += 1;
        for s in gens {
            let h = g.then(s);
            if !seen.contains_key(&h) {
                if elements.len() >= cap {
                    return Err(Error::ResourceLimit(format!(
                        "permutation group closure exceeds {cap} elements"
                    )));
                }
                seen.insert(h.clone(), ());
                elements.push(h);
            }
        }
    }
    Ok(elements)
}

/// A homomorphism `im(through) -> im(target)` sending the image of each
/// generator under `through` to its image under `target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialHom {
    pub source_gens: Vec<Permutation>,
    pub target_gens: Vec<Permutation>,
    /// The full graph of the homomorphism as `(source, target)` pairs.
    pub mapping: Vec<(Permutation, Permutation)>,
}

impl PartialHom {
    pub fn image_size(&self) -> usize {
        let mut targets: Vec<&Permutation> = self.mapping.iter().map(|(_, t)| t).collect();
        targets.sort();
        targets.dedup();
        targets.len()
    }

    pub fn is_injective(&self) -> bool {
        self.image_size() == self.mapping.len()
    }

    /// The map is onto `im(target)` by construction, so bijective means injective.
    pub fn is_bijective(&self) -> bool {
        self.is_injective()
    }

    pub fn apply(&self, p: &Permutation) -> Option<&Permutation> {
        self.mapping.iter().find(|(s, _)| s == p).map(|(_, t)| t)
    }
}

/// Decides whether `target` factors as `through` followed by a homomorphism,
/// returning that homomorphism.
pub fn factors_through(
    target: &GeneratorAction,
    through: &GeneratorAction,
    cap: usize,
) -> Result<Option<PartialHom>> {
    if target.rank() != through.rank() {
        return Err(Error::AlphabetMismatch(format!(
            "actions of ranks {} and {}",
            target.rank(),
            through.rank()
        )));
    }
    let gens: Vec<(&Permutation, &Permutation)> =
        through.perms.iter().zip(&target.perms).collect();
    let start = (
        Permutation::identity(through.degree),
        Permutation::identity(target.degree),
    );
    let mut graph: HashMap<Permutation, usize> = HashMap::from([(start.0.clone(), 0)]);
    let mut mapping = vec![start];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for (s, t) in &gens {
            let ns = mapping[i].0.then(s);
            let nt = mapping[i].1.then(t);
            match graph.get(&ns) {
                Some(&j) => {
                    if mapping[j].1 != nt {
                        return Ok(None);
                    }
                }
                None => {
                    if mapping.len() >= cap {
                        return Err(Error::ResourceLimit(format!(
                            "factoring closure exceeds {cap} elements"
                        )));
                    }
                    graph.insert(ns.clone(), mapping.len());
                    queue.push_back(mapping.len());
                    mapping.push((ns, nt));
                }
            }
        }
    }
    Ok(Some(PartialHom {
        source_gens: through.perms.clone(),
        target_gens: target.perms.clone(),
        mapping,
    }))
}
