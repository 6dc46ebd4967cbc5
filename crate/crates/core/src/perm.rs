use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A permutation of `{0, 1, ..., degree-1}`, stored as its image table.
///
/// Points act on the right: `i^p = p.image(i)`, and `compose(p, q)` is the
/// permutation "apply `p`, then `q`". Degree is fixed at construction; mixing
/// degrees is an error rather than an implicit embedding.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// The identity on `degree` points.
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from its image table, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let degree = images.len();
        let mut seen = vec![false; degree];
        for &img in &images {
            if img >= degree {
                return Err(Error::NotABijection {
                    degree,
                    detail: format!("image {img} out of range"),
                });
            }
            if seen[img] {
                return Err(Error::NotABijection {
                    degree,
                    detail: format!("image {img} repeated"),
                });
            }
            seen[img] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of `degree` points from disjoint cycles given in
    /// 0-indexed form, e.g. `&[vec![0, 1], vec![2, 3, 4]]`.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for &pt in cycle {
                if pt >= degree {
                    return Err(Error::PointOutOfRange { point: pt, degree });
                }
                if touched[pt] {
                    return Err(Error::CycleParse {
                        input: format!("{cycles:?}"),
                        detail: format!("point {pt} appears in two cycles"),
                    });
                }
                touched[pt] = true;
            }
            if cycle.len() < 2 {
                continue;
            }
            for w in 0..cycle.len() {
                images[cycle[w]] = cycle[(w + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    /// Parses 1-indexed cycle notation such as `"(1 2)(3 4 5)"`.
    ///
    /// Whitespace and commas between points are both accepted; `"()"` (or an
    /// all-whitespace string) denotes the identity. Points must lie in
    /// `1..=degree`.
    pub fn parse_cycles(input: &str, degree: usize) -> Result<Self> {
        let err = |detail: &str| Error::CycleParse {
            input: input.to_string(),
            detail: detail.to_string(),
        };
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut current: Option<Vec<usize>> = None;
        let mut number: Option<usize> = None;
        for ch in input.chars() {
            match ch {
                '(' => {
                    if current.is_some() {
                        return Err(err("nested '('"));
                    }
                    current = Some(Vec::new());
                }
                ')' => {
                    let mut cyc = current.take().ok_or_else(|| err("')' without '('"))?;
                    if let Some(n) = number.take() {
                        cyc.push(n);
                    }
                    cycles.push(cyc);
                }
                '0'..='9' => {
                    if current.is_none() {
                        return Err(err("digit outside parentheses"));
                    }
                    number = Some(number.unwrap_or(0) * 10 + (ch as usize - '0' as usize));
                }
                ' ' | '\t' | ',' => {
                    if let Some(n) = number.take() {
                        current
                            .as_mut()
                            .ok_or_else(|| err("point outside parentheses"))?
                            .push(n);
                    }
                }
                other => return Err(err(&format!("unexpected character '{other}'"))),
            }
        }
        if current.is_some() {
            return Err(err("unclosed '('"));
        }
        if number.is_some() {
            return Err(err("trailing number outside parentheses"));
        }
        let mut zero_indexed: Vec<Vec<usize>> = Vec::with_capacity(cycles.len());
        for cyc in cycles {
            let mut out = Vec::with_capacity(cyc.len());
            for pt in cyc {
                if pt == 0 {
                    return Err(err("points are 1-indexed; 0 is not a point"));
                }
                if pt > degree {
                    return Err(Error::PointOutOfRange {
                        point: pt,
                        degree,
                    });
                }
                out.push(pt - 1);
            }
            zero_indexed.push(out);
        }
        Self::from_cycles(degree, &zero_indexed)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i == img)
    }

    /// `compose(p, q)` sends `i` to `q(p(i))`: first `p`, then `q`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&i| other.images[i]).collect(),
        }
    }

    pub fn invert(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img] = i;
        }
        Permutation { images }
    }

    /// `p^k` for any integer exponent (negative exponents use the inverse).
    pub fn power(&self, exponent: i64) -> Permutation {
        let base = if exponent < 0 {
            self.invert()
        } else {
            self.clone()
        };
        let mut remaining = exponent.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        let mut sq = base;
        while remaining > 0 {
            if remaining & 1 == 1 {
                acc = acc.compose_unchecked(&sq);
            }
            sq = sq.compose_unchecked(&sq);
            remaining >>= 1;
        }
        acc
    }

    /// True for even permutations; parity is `(degree - #cycles) mod 2`.
    pub fn is_even(&self) -> bool {
        (self.degree() - self.cycle_count()) % 2 == 0
    }

    fn cycle_count(&self) -> usize {
        let mut seen = vec![false; self.degree()];
        let mut count = 0;
        for start in 0..self.degree() {
            if !seen[start] {
                count += 1;
                let mut p = start;
                while !seen[p] {
                    seen[p] = true;
                    p = self.images[p];
                }
            }
        }
        count
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &img)| i == img)
            .map(|(i, _)| i)
            .collect()
    }

    /// Disjoint cycles in canonical form: each cycle starts at its smallest
    /// point, cycles are sorted by that point, and fixed points appear as
    /// singletons.
    pub fn cycle_decomposition(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut cycles = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p);
                p = self.images[p];
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// Cycle lengths sorted ascending (fixed points included). Two
    /// permutations of Sym(n) are conjugate exactly when these agree.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lengths: Vec<usize> = self
            .cycle_decomposition()
            .iter()
            .map(|c| c.len())
            .collect();
        lengths.sort_unstable();
        lengths
    }

    /// 1-indexed cycle notation; nontrivial cycles only, identity is `"()"`.
    pub fn to_cycle_string(&self) -> String {
        let mut out = String::new();
        for cycle in self.cycle_decomposition() {
            if cycle.len() < 2 {
                continue;
            }
            out.push('(');
            for (i, pt) in cycle.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                out.push_str(&(pt + 1).to_string());
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[deg {}: {}]", self.degree(), self.to_cycle_string())
    }
}

#[derive(Serialize, Deserialize)]
struct PermutationRecord {
    degree: usize,
    cycles: String,
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PermutationRecord {
            degree: self.degree(),
            cycles: self.to_cycle_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let record = PermutationRecord::deserialize(deserializer)?;
        Permutation::parse_cycles(&record.cycles, record.degree).map_err(D::Error::custom)
    }
}

/// Orbits of `{0..degree-1}` under a set of permutations, each orbit sorted,
/// orbits ordered by smallest element.
pub fn orbits(generators: &[Permutation]) -> Result<Vec<Vec<usize>>> {
    let degree = check_equal_degrees(generators)?;
    let mut seen = vec![false; degree];
    let mut result = Vec::new();
    for start in 0..degree {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start] = true;
        let mut next = 0;
        while next < orbit.len() {
            let p = orbit[next];
            next += 1;
            for g in generators {
                let q = g.image(p);
                if !seen[q] {
                    seen[q] = true;
                    orbit.push(q);
                }
            }
        }
        orbit.sort_unstable();
        result.push(orbit);
    }
    Ok(result)
}

pub(crate) fn check_equal_degrees(perms: &[Permutation]) -> Result<usize> {
    let first = perms.first().ok_or(Error::EmptyGeneratorSet)?;
    for p in perms {
        if p.degree() != first.degree() {
            return Err(Error::DegreeMismatch {
                left: first.degree(),
                right: p.degree(),
            });
        }
    }
    Ok(first.degree())
}
