//! Rendering presentation files in the format read by [`crate::parse`].

use itertools::Itertools;
use lpres_core::{LPresentation, Word};

use crate::parse::{NamedSubgroup, PresentationFile, HEADER};

fn word_list(words: &[Word], names: &[String]) -> String {
    words.iter().map(|w| w.display(names).to_string()).join(", ")
}

/// Renders `lp` in `<X | Q | Phi | R>` order followed by the subgroups.
pub fn format_presentation(lp: &LPresentation, subgroups: &[NamedSubgroup]) -> String {
    let names = lp.alphabet().names();
    let mut out = vec![HEADER.to_string(), format!("generators: {}", names.join(" "))];
    out.push(format!("invariant: {}", lp.is_invariant()));
    out.push(format!("fixed: {}", word_list(lp.fixed(), names)).trim_end().to_string());
    for s in lp.substitutions() {
        let images = s
            .endo
            .images()
            .iter()
            .enumerate()
            .filter(|(g, w)| **w != Word::generator(*g))
            .map(|(g, w)| format!("{} -> {}", names[g], w.display(names)))
            .join(", ");
        out.push(format!("endo {}: {images}", s.name).trim_end().to_string());
    }
    out.push(format!("iterated: {}", word_list(lp.iterated(), names)).trim_end().to_string());
    for h in subgroups {
        out.push(format!("subgroup {}: {}", h.name, word_list(&h.generators, names)).trim_end().to_string());
    }
    out.push(String::new());
    out.join("\n")
}

pub fn format_file(file: &PresentationFile) -> String {
    format_presentation(&file.presentation, &file.subgroups)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_presentation;

    #[test]
    fn reparses_to_the_same_file() {
        let text = "generators: a b\nendo sigma: a -> b^2, b -> a\nendo tau: b -> a\niterated: [a, a^b]\nsubgroup H: a, b a b^-1, b^3\n";
        let file = parse_presentation(text).unwrap();
        let out = format_file(&file);
        assert!(out.starts_with(HEADER));
        assert!(out.contains("endo tau: b -> a\n"));
        assert_eq!(parse_presentation(&out).unwrap(), file);
    }
}
