//! Fixtures shared by the benchmarks in `benches/`.

use lpres_core::{Alphabet, FreeEndomorphism, Invariance, LPresentation, Substitution, Word};

fn g(i: usize) -> Word {
    Word::generator(i)
}

fn substitution(name: &str, images: Vec<Word>) -> Substitution {
    Substitution {
        name: name.into(),
        endo: FreeEndomorphism::new(images).expect("images are words"),
    }
}

/// `<a, b | {[a, a^b]}^sigma>` with `sigma: a -> b^2, b -> a`.
pub fn basilica() -> LPresentation {
    let (a, b) = (g(0), g(1));
    LPresentation::ascending(
        Alphabet::new(["a", "b"]).expect("distinct names"),
        vec![substitution("sigma", vec![b.pow(2), a.clone()])],
        vec![Word::commutator(&a, &a.conjugate_by(&b))],
    )
    .expect("valid presentation")
}

/// The Grigorchuk group on `a, b, c, d`.
pub fn grigorchuk() -> LPresentation {
    let (a, b, c, d) = (g(0), g(1), g(2), g(3));
    let fixed = vec![a.pow(2), b.pow(2), c.pow(2), d.pow(2), b.mul(&c).mul(&d)];
    let aca = a.mul(&c).mul(&a);
    let sigma = substitution("sigma", vec![aca, d.clone(), b.clone(), c.clone()]);
    let ad = a.mul(&d);
    let adacac = ad.mul(&a).mul(&c).mul(&a).mul(&c);
    LPresentation::new(
        Alphabet::new(["a", "b", "c", "d"]).expect("distinct names"),
        fixed,
        vec![sigma],
        vec![ad.pow(4), adacac.pow(4)],
        Invariance::AssertedInvariant,
    )
    .expect("valid presentation")
}

/// Generators of the normal closure of `d` in the Grigorchuk group.
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
