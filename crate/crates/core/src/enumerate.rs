//! Lexicographic ranking of Sym(n), used to chunk exhaustive scans so that
//! parallel workers can split a range of ranks without coordinating.

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// `n!` as u64; errors once the value no longer fits (n > 20).
pub fn factorial_u64(n: usize) -> Result<u64> {
    let mut acc: u64 = 1;
    for k in 2..=n as u64 {
        acc = acc.checked_mul(k).ok_or(Error::OutOfRange {
            what: "factorial argument",
            value: n.to_string(),
            range: "0..=20",
        })?;
    }
    Ok(acc)
}

/// The `rank`-th permutation of degree `n` in lexicographic order of image
/// tables (rank 0 is the identity).
pub fn permutation_from_rank(n: usize, mut rank: u64) -> Result<Permutation> {
    let total = factorial_u64(n)?;
    if rank >= total {
        return Err(Error::OutOfRange {
            what: "permutation rank",
            value: rank.to_string(),
            range: "0..n!",
        });
    }
    let mut available: Vec<usize> = (0..n).collect();
    let mut images = Vec::with_capacity(n);
    let mut divisor = total;
    for pos in 0..n {
        divisor /= (n - pos) as u64;
        let index = (rank / divisor) as usize;
        rank %= divisor;
        images.push(available.remove(index));
    }
    Permutation::from_images(images)
}

/// Inverse of [`permutation_from_rank`].
pub fn permutation_rank(p: &Permutation) -> u64 {
    let n = p.degree();
    let mut rank: u64 = 0;
    let mut available: Vec<usize> = (0..n).collect();
    for pos in 0..n {
        let index = available.iter().position(|&x| x == p.image(pos)).unwrap();
        available.remove(index);
        let mut suffix = 1u64;
        for k in 2..(n - pos) as u64 {
            suffix *= k;
        }
        rank += index as u64 * suffix;
    }
    rank
}

/// Iterates Sym(n) in lexicographic order without reallocating per element.
pub fn for_each_permutation<F: FnMut(&Permutation)>(n: usize, mut f: F) -> Result<()> {
    let total = factorial_u64(n)?;
    let mut current = Permutation::identity(n);
    let mut rank = 0u64;
    loop {
        f(&current);
        rank += 1;
        if rank == total {
            return Ok(());
        }
        let mut images = current.images().to_vec();
        let mut i = n - 1;
        while i > 0 && images[i - 1] >= images[i] {
            i -= 1;
        }
        let mut j = n - 1;
        while images[j] <= images[i - 1] {
            j -= 1;
        }
        images.swap(i - 1, j);
        images[i..].reverse();
        current = Permutation::from_images(images).unwrap();
    }
}

/// Integer partitions of `n` with parts in non-increasing order, listed in
/// reverse lexicographic order starting from `[n]`.
pub fn integer_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn extend(remaining: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            current.push(part);
            extend(remaining - part, part, current, out);
            current.pop();
        }
    }
    extend(n, n, &mut current, &mut out);
    out
}

/// The canonical permutation with cycle type `partition`: cycles on
/// consecutive points, longest first.
pub fn class_representative(partition: &[usize]) -> Result<Permutation> {
    let degree: usize = partition.iter().sum();
    let mut cycles = Vec::new();
    let mut next = 0;
    for &part in partition {
        if part == 0 {
            return Err(Error::OutOfRange {
                what: "partition part",
                value: "0".into(),
                range: "1..",
            });
        }
        cycles.push((next..next + part).collect::<Vec<usize>>());
        next += part;
    }
    Permutation::from_cycles(degree, &cycles)
}
