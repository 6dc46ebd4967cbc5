//! Small finite fields `F_q` (q = p^t) as polynomial quotients by the least
//! monic irreducible, and the affine semilinear maps `x ↦ x^(p^e)·a + b`
//! acting on them, with exhaustive fixed-point counting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exhaustive fixed-point scans stay cheap up to here.
pub const FIELD_CEILING: u64 = 4096;

/// `F_q` with `q = p^t`, realized as `F_p[x]` modulo the monic irreducible
/// of degree `t` whose integer encoding `Σ cᵢ pⁱ` is least.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqField {
    p: u64,
    t: u32,
    q: u64,
    /// Coefficients `c_0..=c_t` of the modulus, `c_t = 1`.
    modulus: Vec<u64>,
}

/// An element of a particular `FqField`: `t` coefficients below `p`, index
/// `i` holding the coefficient of `x^i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FqElement {
    coeffs: Vec<u64>,
}

fn prime_power_parts(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p.saturating_mul(p) <= q {
        if q % p == 0 {
            let mut rest = q;
            let mut t = 0u32;
            while rest % p == 0 {
                rest /= p;
                t += 1;
            }
            return (rest == 1).then_some((p, t));
        }
        p += 1;
    }
    Some((q, 1))
}

impl FqField {
    pub fn new(q: u64) -> Result<FqField> {
        let (p, t) = prime_power_parts(q).ok_or(Error::NotAPrimePower(q))?;
        if q > FIELD_CEILING {
            return Err(Error::CeilingExceeded {
                what: "field size",
                value: q.to_string(),
                ceiling: FIELD_CEILING.to_string(),
            });
        }
        let modulus = least_irreducible(p, t);
        Ok(FqField { p, t, q, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn zero(&self) -> FqElement {
        FqElement {
            coeffs: vec![0; self.t as usize],
        }
    }

    pub fn one(&self) -> FqElement {
        let mut coeffs = vec![0; self.t as usize];
        coeffs[0] = 1;
        FqElement { coeffs }
    }

    /// The element whose coefficients are the base-`p` digits of `index`.
    pub fn element_from_index(&self, index: u64) -> Result<FqElement> {
        if index >= self.q {
            return Err(Error::OutOfRange {
                what: "field element index",
                value: index.to_string(),
                range: "0..q",
            });
        }
        let mut coeffs = vec![0; self.t as usize];
        let mut rest = index;
        for c in coeffs.iter_mut() {
            *c = rest % self.p;
            rest /= self.p;
        }
        Ok(FqElement { coeffs })
    }

    pub fn index(&self, a: &FqElement) -> u64 {
        a.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElement> + '_ {
        (0..self.q).map(|i| self.element_from_index(i).expect("index below q"))
    }

    pub fn add(&self, a: &FqElement, b: &FqElement) -> FqElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| (x + y) % self.p)
            .collect();
        FqElement { coeffs }
    }

    pub fn neg(&self, a: &FqElement) -> FqElement {
        let coeffs = a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect();
        FqElement { coeffs }
    }

    pub fn sub(&self, a: &FqElement, b: &FqElement) -> FqElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FqElement, b: &FqElement) -> FqElement {
        let t = self.t as usize;
        let mut product = vec![0u64; 2 * t - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                product[i + j] = (product[i + j] + x * y) % self.p;
            }
        }
        for i in (t..product.len()).rev() {
            let c = product[i];
            if c == 0 {
                continue;
            }
            product[i] = 0;
            for (k, &m) in self.modulus.iter().enumerate().take(t) {
                let idx = i - t + k;
                product[idx] = (product[idx] + c * (self.p - m)) % self.p;
            }
        }
        product.truncate(t);
        FqElement { coeffs: product }
    }

    pub fn pow(&self, a: &FqElement, mut k: u64) -> FqElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    pub fn inverse(&self, a: &FqElement) -> Result<FqElement> {
        if a.is_zero() {
            return Err(Error::OutOfRange {
                what: "inverse argument",
                value: "0".into(),
                range: "nonzero field elements",
            });
        }
        Ok(self.pow(a, self.q - 2))
    }

    /// `a^(p^e)`, the `e`-fold Frobenius.
    pub fn frobenius(&self, a: &FqElement, e: u32) -> FqElement {
        let mut acc = a.clone();
        for _ in 0..e {
            acc = self.pow(&acc, self.p);
        }
        acc
    }
}

impl FqElement {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coeffs
    }
}

/// The monic degree-`t` polynomial over `F_p` with least integer encoding
/// among irreducibles; for `t = 1` this is `x`.
fn least_irreducible(p: u64, t: u32) -> Vec<u64> {
    if t == 1 {
        return vec![0, 1];
    }
    let tail_count = p.pow(t);
    for encoded in 0..tail_count {
        let mut poly = Vec::with_capacity(t as usize + 1);
        let mut rest = encoded;
        for _ in 0..t {
            poly.push(rest % p);
            rest /= p;
        }
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducibles of every degree exist over F_p")
}

/// Trial division by all monic polynomials of degree 1..=deg/2.
fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for encoded in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut rest = encoded;
            for _ in 0..d {
                divisor.push(rest % p);
                rest /= p;
            }
            divisor.push(1);
            if poly_remainder_is_zero(poly, &divisor, p) {
                return false;
            }
        }
    }
    true
}

fn poly_remainder_is_zero(poly: &[u64], divisor: &[u64], p: u64) -> bool {
    let mut rem: Vec<u64> = poly.to_vec();
    let d = divisor.len() - 1;
    while rem.len() > d {
        let lead = *rem.last().expect("nonempty");
        let top = rem.len() - 1;
        if lead != 0 {
            for (k, &m) in divisor.iter().enumerate().take(d) {
                let idx = top - d + k;
                rem[idx] = (rem[idx] + lead * (p - m)) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

/// `x ↦ x^(p^frob)·mult + shift` on a fixed `F_q`; the group of all such
/// maps is AΓL(1,q), and the `frob = 0` part is AGL(1,q).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SemilinearMap {
    pub frob: u32,
    pub mult: FqElement,
    pub shift: FqElement,
}

impl SemilinearMap {
    pub fn new(field: &FqField, frob: u32, mult: FqElement, shift: FqElement) -> Result<Self> {
        if frob >= field.t() {
            return Err(Error::OutOfRange {
                what: "frobenius exponent",
                value: frob.to_string(),
                range: "0..t",
            });
        }
        if mult.is_zero() {
            return Err(Error::IdentityNotAllowed {
                what: "zero multiplier",
            });
        }
        Ok(SemilinearMap { frob, mult, shift })
    }

    pub fn identity(field: &FqField) -> Self {
        SemilinearMap {
            frob: 0,
            mult: field.one(),
            shift: field.zero(),
        }
    }

    pub fn apply(&self, field: &FqField, x: &FqElement) -> FqElement {
        let twisted = field.frobenius(x, self.frob);
        field.add(&field.mul(&twisted, &self.mult), &self.shift)
    }

    /// The map `x ↦ other(self(x))`.
    pub fn compose(&self, field: &FqField, other: &SemilinearMap) -> SemilinearMap {
        let frob = (self.frob + other.frob) % field.t();
        let twisted_mult = field.frobenius(&self.mult, other.frob);
        let twisted_shift = field.frobenius(&self.shift, other.frob);
        SemilinearMap {
            frob,
            mult: field.mul(&twisted_mult, &other.mult),
            shift: field.add(&field.mul(&twisted_shift, &other.mult), &other.shift),
        }
    }

    pub fn is_identity(&self, field: &FqField) -> bool {
        self.frob == 0 && self.mult == field.one() && self.shift.is_zero()
    }
}

/// All of AΓL(1,q): every `(frob, mult, shift)` with `mult ≠ 0`.
pub fn agammal_elements(field: &FqField) -> Vec<SemilinearMap> {
    let mut maps = Vec::with_capacity((field.t() as u64 * (field.q() - 1) * field.q()) as usize);
    for frob in 0..field.t() {
        for mult in field.elements().filter(|a| !a.is_zero()) {
            for shift in field.elements() {
                maps.push(SemilinearMap {
                    frob,
                    mult: mult.clone(),
                    shift,
                });
            }
        }
    }
    maps
}

/// Exact number of fixed points of `g` on `F_q`, by evaluation at every
/// element.
pub fn agammal_fixed_points(field: &FqField, g: &SemilinearMap) -> u64 {
    field
        .elements()
        .filter(|x| g.apply(field, x) == *x)
        .count() as u64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointReport {
    pub q: u64,
    /// Largest fixed-point count over nontrivial semilinear maps.
    pub max_fix: u64,
    /// Largest fixed-point count over nontrivial affine maps (no Frobenius).
    pub affine_max_fix: u64,
    /// `max_fix² ≤ q`.
    pub pass: bool,
    /// Nontrivial affine maps fix at most one point.
    pub affine_pass: bool,
}

/// Scans every nontrivial element of AΓL(1,q) and checks the fixed-point
/// bounds: at most `√q` overall, at most one for the affine part.
pub fn fpagl_check(q: u64) -> Result<FixedPointReport> {
    if q > 81 {
        return Err(Error::CeilingExceeded {
            what: "semilinear fixed-point scan",
            value: q.to_string(),
            ceiling: "81".into(),
        });
    }
    let field = FqField::new(q)?;
    let mut max_fix = 0;
    let mut affine_max_fix = 0;
    for g in agammal_elements(&field) {
        if g.is_identity(&field) {
            continue;
        }
        let fix = agammal_fixed_points(&field, &g);
        max_fix = max_fix.max(fix);
        if g.frob == 0 {
            affine_max_fix = affine_max_fix.max(fix);
        }
    }
    Ok(FixedPointReport {
        q,
        max_fix,
        affine_max_fix,
        pass: max_fix * max_fix <= q,
        affine_pass: affine_max_fix <= 1,
    })
}

pub fn prime_powers_up_to(limit: u64) -> Vec<u64> {
    (2..=limit)
        .filter(|&q| prime_power_parts(q).is_some())
        .collect()
}
