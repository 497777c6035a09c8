#![allow(dead_code)]

pub mod props;

use lpres_core::{
    Alphabet, CosetTable, FreeEndomorphism, GeneratorAction, LPresentation, Permutation,
    Substitution, Word,
};

pub fn g(i: usize) -> Word {
    Word::generator(i)
}

/// Product of generator powers, e.g. `w(&[(0, 1), (1, -2)])` is `a*b^-2`.
pub fn w(syllables: &[(usize, i64)]) -> Word {
    Word::from_syllables(syllables)
}

pub fn product(words: &[Word]) -> Word {
    words.iter().fold(Word::identity(), |acc, x| acc.mul(x))
}

pub fn basilica() -> LPresentation {
    let (a, b) = (g(0), g(1));
    LPresentation::ascending(
        Alphabet::new(["a", "b"]).unwrap(),
        vec![Substitution {
            name: "sigma".into(),
            endo: FreeEndomorphism::new(vec![b.pow(2), a.clone()]).unwrap(),
        }],
        vec![Word::commutator(&a, &a.conjugate_by(&b))],
    )
    .unwrap()
}

pub fn grigorchuk() -> LPresentation {
    let (a, b, c, d) = (g(0), g(1), g(2), g(3));
    let ad = a.mul(&d);
    let adacac = product(&[a.clone(), d.clone(), a.clone(), c.clone(), a.clone(), c.clone()]);
    LPresentation::new(
        Alphabet::new(["a", "b", "c", "d"]).unwrap(),
        vec![a.pow(2), b.pow(2), c.pow(2), d.pow(2), product(&[b.clone(), c.clone(), d.clone()])],
        vec![Substitution {
            name: "sigma".into(),
            endo: FreeEndomorphism::new(vec![product(&[a.clone(), c.clone(), a.clone()]), d, b, c])
                .unwrap(),
        }],
        vec![ad.pow(4), adacac.pow(4)],
        lpres_core::Invariance::AssertedInvariant,
    )
    .unwrap()
}

/// `d, d^a, d^(ac), ..., d^(acacaca)` in the Grigorchuk group.
pub fn grigorchuk_d_gens() -> Vec<Word> {
    let (a, c, d) = (g(0), g(2), g(3));
    let mut conj = Word::identity();
    let mut gens = Vec::new();
    for k in 0..8 {
        gens.push(d.conjugate_by(&conj));
        conj = conj.mul(if k % 2 == 0 { &a } else { &c });
    }
    gens
}

pub fn action(perms: &[&str], n: usize) -> GeneratorAction {
    let perms = perms
        .iter()
        .map(|s| Permutation::parse_cycles(s, n).unwrap())
        .collect();
    GeneratorAction::new(n, perms).unwrap()
}

pub fn table(perms: &[&str], n: usize) -> CosetTable {
    CosetTable::from_action(action(perms, n)).unwrap()
}

/// Basilica `<a, bab^-1, b^3>`.
pub fn basilica_u1() -> CosetTable {
    table(&["()", "(1,2,3)"], 3)
}

/// Basilica `<a, b^2, bab^-1>`.
pub fn basilica_index_two() -> CosetTable {
    table(&["()", "(1,2)"], 2)
}

/// Basilica `<b^2, a^3, ab^2a^-1, a^-1b^2a, bab^-1a>`, normal of index 6.
pub fn lim_of_proof() -> CosetTable {
    table(&["(1,2,3)(4,6,5)", "(1,4)(2,5)(3,6)"], 6)
}

/// Parses space-separated syllables such as `x1^-1 x4^2 x3` (1-based indices).
pub fn xw(text: &str) -> Word {
    let syllables: Vec<(usize, i64)> = text
        .split_whitespace()
        .map(|s| {
            let s = s.strip_prefix(|c: char| c.is_ascii_alphabetic()).unwrap();
            let (g, e) = s.split_once('^').unwrap_or((s, "1"));
            (g.parse::<usize>().unwrap() - 1, e.parse::<i64>().unwrap())
        })
        .collect();
    Word::from_syllables(&syllables)
}

/// Parses a word over `a, b, c, d` written as letters with optional `^k`, e.g. `b^2 a b^-1`.
pub fn abw(text: &str) -> Word {
    let syllables: Vec<(usize, i64)> = text
        .split_whitespace()
        .map(|s| {
            let (g, e) = s.split_once('^').unwrap_or((s, "1"));
            let g = (g.as_bytes()[0] - b'a') as usize;
            (g, e.parse::<i64>().unwrap())
        })
        .collect();
    Word::from_syllables(&syllables)
}
