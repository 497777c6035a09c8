//! Property suites shared by the property tests and the acceptance run.

use lpres_core::abelian::{
    abelianize_endo, hermite_basis, hermite_with_transform, invariant_lattice_closure,
    smith_normal_form,
};
use lpres_core::{
    compose_action, factors_through, iterating_endomorphisms, act_word, CosetTable,
    EnumerationLimits, FreeEndomorphism, GeneratorAction, IntegerMatrix, LPresentation, Letter,
    MonoidElement, Permutation, SchreierData, Word,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use super::{basilica, basilica_index_two, basilica_u1, lim_of_proof};

pub type Check = std::result::Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

pub fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..rank, any::<bool>()), 0..=max_len).prop_map(|letters| {
        Word::from_letters(letters.into_iter().map(|(g, inv)| Letter::new(g, inv)))
    })
}

pub fn endomorphism(rank: usize, max_len: usize) -> impl Strategy<Value = FreeEndomorphism> {
    prop::collection::vec(word(rank, max_len), rank)
        .prop_map(|images| FreeEndomorphism::new(images).unwrap())
}

pub fn permutation(degree: usize) -> impl Strategy<Value = Permutation> {
    Just((0..degree).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|images| Permutation::new(images).unwrap())
}

/// A generator action of the given rank, not necessarily transitive.
pub fn action(rank: usize, max_degree: usize) -> impl Strategy<Value = GeneratorAction> {
    (1..=max_degree).prop_flat_map(move |n| {
        prop::collection::vec(permutation(n), rank)
            .prop_map(move |perms| GeneratorAction::new(n, perms).unwrap())
    })
}

/// The action restricted to the orbit of point 0, as a coset table.
pub fn orbit_restriction(a: &GeneratorAction) -> CosetTable {
    let mut label = vec![usize::MAX; a.degree()];
    let mut orbit = vec![0];
    label[0] = 0;
    let mut i = 0;
    while i < orbit.len() {
        for p in a.perms() {
            let q = p.image(orbit[i]);
            if label[q] == usize::MAX {
                label[q] = orbit.len();
                orbit.push(q);
            }
        }
        i += 1;
    }
    let perms = a
        .perms()
        .iter()
        .map(|p| Permutation::new(orbit.iter().map(|&x| label[p.image(x)]).collect()).unwrap())
        .collect();
    CosetTable::from_action(GeneratorAction::new(orbit.len(), perms).unwrap()).unwrap()
}

pub fn table(rank: usize, max_degree: usize) -> impl Strategy<Value = CosetTable> {
    action(rank, max_degree).prop_map(|a| orbit_restriction(&a))
}

pub fn small_matrix(rows: usize, cols: usize, bound: i64) -> impl Strategy<Value = IntegerMatrix> {
    prop::collection::vec(prop::collection::vec(-bound..=bound, cols), rows)
        .prop_map(|rows| IntegerMatrix::from_i64(&rows))
}

fn run<S: Strategy>(cases: u32, strategy: S, check: impl Fn(S::Value) -> Check) -> Check
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&strategy, |v| check(v).map_err(TestCaseError::fail))
        .map_err(|e| e.to_string())
}

pub fn free_reduction(cases: u32) -> Check {
    run(cases, (word(3, 12), word(3, 12), word(3, 12)), |(u, v, w)| {
        for x in [&u, &v, &w] {
            ensure!(
                x.letters().windows(2).all(|p| p[0] != p[1].inverse()),
                "{x:?} is not reduced"
            );
        }
        ensure!(u.mul(&u.inverse()).is_identity(), "u u^-1 != 1");
        ensure!(u.inverse().inverse() == u, "inverse is not an involution");
        ensure!(u.mul(&v).mul(&w) == u.mul(&v.mul(&w)), "product is not associative");
        ensure!(
            u.mul(&v).inverse() == v.inverse().mul(&u.inverse()),
            "(uv)^-1 != v^-1 u^-1"
        );
        let joined = Word::from_letters(u.letters().iter().chain(v.letters()).copied());
        ensure!(joined == u.mul(&v), "reduction of a concatenation differs from the product");
        ensure!(
            u.cyclically_reduced().len() <= u.len(),
            "cyclic reduction lengthened a word"
        );
        Ok(())
    })
}

/// `u * t(u)^-1`, an element of the subgroup.
fn into_subgroup(sd: &SchreierData, u: &Word) -> Word {
    let c = sd.table().trace(0, u);
    u.mul(&sd.transversal()[c].inverse())
}

pub fn tau_homomorphism(cases: u32) -> Check {
    let fixtures = [basilica_u1(), basilica_index_two(), lim_of_proof()];
    run(cases, (0..fixtures.len(), word(2, 14), word(2, 14)), |(f, u, v)| {
        let sd = SchreierData::new(&fixtures[f]);
        let (u, v) = (into_subgroup(&sd, &u), into_subgroup(&sd, &v));
        let (tu, tv) = (sd.rewrite(&u).unwrap(), sd.rewrite(&v).unwrap());
        ensure!(
            sd.rewrite(&u.mul(&v)).unwrap() == tu.mul(&tv),
            "tau(uv) != tau(u) tau(v) for {u:?}, {v:?}"
        );
        ensure!(sd.expand(&tu) == u, "expanding tau(u) does not give u back");
        ensure!(
            sd.rewrite(&u.inverse()).unwrap() == tu.inverse(),
            "tau(u^-1) != tau(u)^-1"
        );
        Ok(())
    })
}

pub fn schreier_rank(cases: u32) -> Check {
    run(cases, (1..=3usize).prop_flat_map(|k| table(k, 7)), |t| {
        let sd = SchreierData::new(&t);
        let expected = t.index() * (t.rank() - 1) + 1;
        ensure!(
            sd.rank() == expected,
            "rank {} for index {} and {} generators",
            sd.rank(),
            t.index(),
            t.rank()
        );
        for u in sd.definition_words() {
            ensure!(t.contains(&u), "Schreier generator {u:?} outside the subgroup");
        }
        Ok(())
    })
}

/// The action `x -> phi(x^sigma)` computed directly.
fn direct_action(
    phi: &[FreeEndomorphism],
    sigma: &MonoidElement,
    action: &GeneratorAction,
) -> GeneratorAction {
    let perms = (0..action.rank())
        .map(|g| act_word(action, &sigma.apply(phi, &Word::generator(g))).unwrap())
        .collect();
    GeneratorAction::new(action.degree(), perms).unwrap()
}

pub fn v_resolution(cases: u32) -> Check {
    let (a, b) = (Word::generator(0), Word::generator(1));
    let sigma = basilica().endomorphisms();
    let mut two = sigma.clone();
    two.push(FreeEndomorphism::new(vec![b.inverse(), a.mul(&b)]).unwrap());
    let systems = [sigma, two];
    let fixtures = [basilica_u1(), basilica_index_two(), lim_of_proof()];
    let trees: Vec<Vec<_>> = systems
        .iter()
        .map(|phi| {
            fixtures
                .iter()
                .map(|t| iterating_endomorphisms(phi, t.action()).unwrap())
                .collect()
        })
        .collect();
    let check = |(s, f, factors): (usize, usize, Vec<usize>)| -> Check {
        let phi = &systems[s];
        let tree = &trees[s][f];
        let sigma = MonoidElement::new(factors.into_iter().map(|i| i % phi.len()).collect());
        let direct = direct_action(phi, &sigma, fixtures[f].action());
        let node = &tree.nodes()[tree.resolve(&sigma)];
        ensure!(node.action == direct, "{sigma:?} resolves to a node with another action");
        ensure!(node.element <= sigma, "resolution of {sigma:?} is not minimal");
        let same = tree.nodes().iter().filter(|m| m.action == direct).count();
        ensure!(same == 1, "{same} nodes share the action of {sigma:?}");
        Ok(())
    };
    for (s, phi) in systems.iter().enumerate() {
        for f in 0..fixtures.len() {
            for sigma in MonoidElement::up_to_length(phi.len(), 4) {
                check((s, f, sigma.factors().to_vec()))?;
            }
        }
    }
    let strategy = (
        0..systems.len(),
        0..fixtures.len(),
        prop::collection::vec(0..2usize, 0..=16),
    );
    run(cases, strategy, check)
}

pub fn leadsto_order(cases: u32) -> Check {
    let lp = basilica();
    let phi = lp.endomorphisms();
    let sets: Vec<Vec<GeneratorAction>> = [basilica_u1(), basilica_index_two(), lim_of_proof()]
        .iter()
        .map(|t| {
            (0..=6)
                .map(|n| direct_action(&phi, &MonoidElement::power(0, n), t.action()))
                .collect()
        })
        .collect();
    let cap = EnumerationLimits::default().closure_cap;
    run(cases, (0..sets.len(), 0..=6usize, 0..=6usize, 0..=6usize), |(f, i, j, k)| {
        let s = &sets[f];
        let leads = |x: usize, y: usize| factors_through(&s[x], &s[y], cap).unwrap().is_some();
        ensure!(leads(i, i), "sigma^{i} does not lead to itself");
        if leads(i, j) && leads(j, k) {
            ensure!(leads(i, k), "sigma^{i} ~> sigma^{j} ~> sigma^{k} but not sigma^{i} ~> sigma^{k}");
        }
        Ok(())
    })
}

fn span_contains(basis: &IntegerMatrix, extra: &[Vec<BigInt>]) -> bool {
    let mut rows = basis.rows().to_vec();
    rows.extend_from_slice(extra);
    hermite_basis(&IntegerMatrix::new(basis.ncols(), rows).unwrap()) == *basis
}

fn row_times(v: &[BigInt], m: &IntegerMatrix) -> Vec<BigInt> {
    IntegerMatrix::new(v.len(), vec![v.to_vec()])
        .unwrap()
        .mul(m)
        .unwrap()
        .rows()[0]
        .clone()
}

pub fn lattice_fixed_point(cases: u32) -> Check {
    let strategy = (1..=3usize).prop_flat_map(|dim| {
        (
            Just(dim),
            small_matrix(3, dim, 6),
            prop::collection::vec(small_matrix(dim, dim, 2), 0..=2),
        )
    });
    run(cases, strategy, |(dim, vectors, matrices)| {
        let closed = match invariant_lattice_closure(vectors.rows(), &matrices, dim, 1000) {
            Ok(l) => l,
            Err(e) => return Err(format!("closure failed: {e}")),
        };
        ensure!(span_contains(&closed, vectors.rows()), "closure misses an input vector");
        for m in &matrices {
            let images: Vec<_> = closed.rows().iter().map(|b| row_times(b, m)).collect();
            ensure!(span_contains(&closed, &images), "closure is not invariant");
        }
        ensure!(hermite_basis(&closed) == closed, "closure basis is not in Hermite form");
        Ok(())
    })
}

fn is_unit(x: &BigInt) -> bool {
    x.abs().is_one()
}

pub fn normal_forms(cases: u32) -> Check {
    let strategy = (1..=4usize, 1..=4usize).prop_flat_map(|(r, c)| small_matrix(r, c, 9));
    run(cases, strategy, |a| {
        let (h, u) = hermite_with_transform(&a);
        ensure!(u.mul(&a).unwrap() == h, "U A != H");
        ensure!(is_unit(&u.determinant().unwrap()), "Hermite transform is not unimodular");
        ensure!(hermite_with_transform(&h).0 == h, "Hermite form is not idempotent");

        let (u, d, v) = smith_normal_form(&a);
        ensure!(u.mul(&a).unwrap().mul(&v).unwrap() == d, "U A V != D");
        ensure!(is_unit(&u.determinant().unwrap()), "left Smith transform is not unimodular");
        ensure!(is_unit(&v.determinant().unwrap()), "right Smith transform is not unimodular");
        let diag: Vec<BigInt> = (0..a.nrows().min(a.ncols())).map(|i| d.get(i, i).clone()).collect();
        for i in 0..d.nrows() {
            for j in 0..d.ncols() {
                ensure!(i == j || d.get(i, j).is_zero(), "Smith form is not diagonal");
            }
        }
        ensure!(diag.iter().all(|x| !x.is_negative()), "negative Smith coefficient");
        for p in diag.windows(2) {
            ensure!(
                p[1].is_zero() || (!p[0].is_zero() && (&p[1] % &p[0]).is_zero()),
                "Smith coefficients do not form a divisor chain: {diag:?}"
            );
        }
        ensure!(smith_normal_form(&d).1 == d, "Smith form is not idempotent");
        Ok(())
    })
}

pub fn composition_laws(cases: u32) -> Check {
    let strategy = (action(2, 6), endomorphism(2, 5), endomorphism(2, 5), word(2, 10));
    run(cases, strategy, |(a, alpha, beta, w)| {
        let both = FreeEndomorphism::compose(&beta, &alpha).unwrap();
        ensure!(
            compose_action(&compose_action(&a, &alpha).unwrap(), &beta).unwrap()
                == compose_action(&a, &both).unwrap(),
            "composite action does not match the composed endomorphism"
        );
        let ab = FreeEndomorphism::compose(&alpha, &beta).unwrap();
        ensure!(
            ab.apply(&w) == beta.apply(&alpha.apply(&w)),
            "w^(alpha beta) != (w^alpha)^beta"
        );
        ensure!(
            abelianize_endo(&ab) == abelianize_endo(&alpha).mul(&abelianize_endo(&beta)).unwrap(),
            "abelianization is not multiplicative"
        );
        Ok(())
    })
}

pub type Suite = (&'static str, fn(u32) -> Check);

pub const SUITES: [Suite; 9] = [
    ("free reduction", free_reduction),
    ("tau homomorphism", tau_homomorphism),
    ("Schreier rank", schreier_rank),
    ("V resolution", v_resolution),
    ("leads-to preorder", leadsto_order),
    ("lattice fixed point", lattice_fixed_point),
    ("Hermite and Smith forms", normal_forms),
    ("composition laws", composition_laws),
    ("presentation consistency", presentation_consistency),
];

/// A table accepted by verification satisfies every instantiated relator.
pub fn presentation_consistency(cases: u32) -> Check {
    let lp: LPresentation = basilica();
    run(cases, table(2, 6), |t| {
        let verified = lpres_core::cosets::verify_table(&lp, t.action()).unwrap();
        let direct = lp.instantiate(6).relators.iter().all(|r| t.acts_trivially(r));
        if verified {
            ensure!(direct, "verified table violates an instantiated relator");
        }
        Ok(())
    })
}
