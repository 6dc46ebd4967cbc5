//! Named group constructions: symmetric and alternating groups, the double
//! cover `(Alt(n) × Alt(n)) ⋊ ⟨swap⟩`, and wreath products `Alt(n) wr C_m` in
//! their imprimitive actions.

use crate::error::{Error, Result};
use crate::group::GroupHandle;
use crate::perm::Permutation;

/// `Sym(n)` in its natural action, generated by `(0 1)` and an `n`-cycle.
pub fn symmetric(n: usize) -> Result<GroupHandle> {
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "degree",
            value: "0".into(),
            range: "1..",
        });
    }
    if n == 1 {
        return Ok(GroupHandle::trivial(1));
    }
    let transposition = Permutation::from_cycles(n, &[vec![0, 1]])?;
    let cycle = Permutation::from_images((0..n).map(|i| (i + 1) % n).collect())?;
    GroupHandle::new(vec![transposition, cycle])
}

/// `Alt(n)` in its natural action.
pub fn alternating(n: usize) -> Result<GroupHandle> {
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "degree",
            value: "0".into(),
            range: "1..",
        });
    }
    if n < 3 {
        return Ok(GroupHandle::trivial(n));
    }
    let three_cycle = Permutation::from_cycles(n, &[vec![0, 1, 2]])?;
    let long = if n % 2 == 1 {
        Permutation::from_images((0..n).map(|i| (i + 1) % n).collect())?
    } else {
        let mut images: Vec<usize> = (0..n).collect();
        for i in 1..n {
            images[i] = if i == n - 1 { 1 } else { i + 1 };
        }
        Permutation::from_images(images)?
    };
    GroupHandle::new(vec![three_cycle, long])
}

fn embed_at(p: &Permutation, offset: usize, degree: usize) -> Permutation {
    let mut images: Vec<usize> = (0..degree).collect();
    for i in 0..p.degree() {
        images[offset + i] = offset + p.image(i);
    }
    Permutation::from_images(images).expect("shifting a bijection keeps it a bijection")
}

/// The involution exchanging the two halves of `0..2n` pointwise.
pub fn half_swap(n: usize) -> Permutation {
    Permutation::from_images((0..2 * n).map(|i| (i + n) % (2 * n)).collect())
        .expect("the half swap is a bijection")
}

/// A group built by name, together with the distinguished normal subgroup
/// that is a direct power of alternating groups.
#[derive(Debug, Clone)]
pub struct NamedConstruction {
    /// Canonical spelling of the name.
    pub name: String,
    pub group: GroupHandle,
    /// The normal subgroup `Alt(factor_degree)^copies`.
    pub socle: GroupHandle,
    /// Number of alternating factors in the socle.
    pub copies: usize,
    /// Degree of each alternating factor.
    pub factor_degree: usize,
    /// A canonical element outside the socle, when the group has one: the
    /// half swap for `alt<n>^2:swap`, the block rotation for `alt<n>wrC<m>`,
    /// a transposition for `sym<n>`.
    pub outer: Option<Permutation>,
}

fn socle_generators(n: usize, copies: usize) -> Result<Vec<Permutation>> {
    let degree = n * copies;
    let alt = alternating(n)?;
    let mut gens = Vec::new();
    for c in 0..copies {
        for g in alt.generators() {
            gens.push(embed_at(g, c * n, degree));
        }
    }
    Ok(gens)
}

/// Parses `sym<n>`, `alt<n>`, `alt<n>^2:swap`, or `alt<n>wrC<m>`.
pub fn construction(name: &str) -> Result<NamedConstruction> {
    let unknown = || Error::UnknownConstruction { input: name.into() };
    let trimmed = name.trim();
    let (family, rest) = trimmed.split_at(trimmed.len().min(3));
    let digits_end = rest
        .char_indices()
        .find(|(_, c)| !c.is_ascii_digit())
        .map(|(i, _)| i)
        .unwrap_or(rest.len());
    let n: usize = rest[..digits_end].parse().map_err(|_| unknown())?;
    let suffix = &rest[digits_end..];
    match (family, suffix) {
        ("sym", "") => {
            let group = symmetric(n)?;
            let socle = alternating(n)?;
            let outer = (n >= 2).then(|| Permutation::from_cycles(n, &[vec![0, 1]]).unwrap());
            Ok(NamedConstruction {
                name: format!("sym{n}"),
                group,
                socle,
                copies: 1,
                factor_degree: n,
                outer,
            })
        }
        ("alt", "") => Ok(NamedConstruction {
            name: format!("alt{n}"),
            group: alternating(n)?,
            socle: alternating(n)?,
            copies: 1,
            factor_degree: n,
            outer: None,
        }),
        ("alt", "^2:swap") => {
            let socle_gens = socle_generators(n, 2)?;
            let swap = half_swap(n);
            let mut gens = socle_gens.clone();
            gens.push(swap.clone());
            Ok(NamedConstruction {
                name: format!("alt{n}^2:swap"),
                group: GroupHandle::new(gens)?,
                socle: GroupHandle::new(socle_gens)?,
                copies: 2,
                factor_degree: n,
                outer: Some(swap),
            })
        }
        ("alt", wr) if wr.starts_with("wrC") => {
            let m: usize = wr["wrC".len()..].parse().map_err(|_| unknown())?;
            if m < 2 {
                return Err(Error::OutOfRange {
                    what: "wreath top order",
                    value: m.to_string(),
                    range: "2..",
                });
            }
            let degree = n * m;
            let socle_gens = socle_generators(n, m)?;
            let rotation =
                Permutation::from_images((0..degree).map(|p| (p + n) % degree).collect())?;
            let mut gens = socle_gens.clone();
            gens.push(rotation.clone());
            Ok(NamedConstruction {
                name: format!("alt{n}wrC{m}"),
                group: GroupHandle::new(gens)?,
                socle: GroupHandle::new(socle_gens)?,
                copies: m,
                factor_degree: n,
                outer: Some(rotation),
            })
        }
        _ => Err(unknown()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn natural_group_orders() {
        assert_eq!(symmetric(5).unwrap().order(), BigUint::from(120u32));
        assert_eq!(symmetric(1).unwrap().order(), BigUint::from(1u32));
        assert_eq!(alternating(5).unwrap().order(), BigUint::from(60u32));
        assert_eq!(alternating(6).unwrap().order(), BigUint::from(360u32));
        assert_eq!(alternating(2).unwrap().order(), BigUint::from(1u32));
        assert!(symmetric(0).is_err());
    }

    #[test]
    fn alternating_generators_are_even() {
        for n in 3..9 {
            for g in alternating(n).unwrap().generators() {
                assert!(g.is_even(), "odd generator for degree {n}");
            }
        }
    }

    #[test]
    fn double_with_swap() {
        let c = construction("alt4^2:swap").unwrap();
        assert_eq!(c.group.order(), BigUint::from(288u32));
        assert_eq!(c.socle.order(), BigUint::from(144u32));
        assert_eq!(c.copies, 2);
        let swap = c.outer.unwrap();
        assert!(c.group.contains(&swap).unwrap());
        assert!(!c.socle.contains(&swap).unwrap());
        for s in c.socle.generators() {
            for g in c.group.generators() {
                let conj = g.invert().compose(s).unwrap().compose(g).unwrap();
                assert!(c.socle.contains(&conj).unwrap(), "socle is not normal");
            }
        }
    }

    #[test]
    fn wreath_products() {
        let c = construction("alt5wrC2").unwrap();
        assert_eq!(c.group.order(), BigUint::from(7200u32));
        let same = construction("alt5^2:swap").unwrap();
        assert_eq!(same.group.order(), c.group.order());
        for g in same.group.generators() {
            assert!(c.group.contains(g).unwrap());
        }
        let triple = construction("alt4wrC3").unwrap();
        assert_eq!(triple.group.order(), BigUint::from(5184u32));
        assert_eq!(triple.socle.order(), BigUint::from(1728u32));
        assert!(triple.group.is_transitive());
    }

    #[test]
    fn names_parse_canonically_or_fail() {
        assert_eq!(construction(" sym6 ").unwrap().name, "sym6");
        assert_eq!(construction("alt7").unwrap().name, "alt7");
        for bad in ["alt", "sym", "altx", "gl3", "sym5^2:swap", "alt5wr", "alt5wrCx"] {
            assert!(construction(bad).is_err(), "`{bad}` should not parse");
        }
        assert!(matches!(
            construction("alt5wrC1"),
            Err(Error::OutOfRange { .. })
        ));
    }
}
