//! Arithmetic in GF(p^n) with log/antilog tables.
//!
//! Elements are polynomials over GF(p) of degree below n, indexed by
//! `c_0 + c_1 p + ... + c_{n-1} p^{n-1}`. The additive group is embedded as
//! `[p; n]` with coordinates `(c_{n-1}, ..., c_0)`, so an element's index
//! and its group rank coincide.

use crate::arith::{factorize, prime_power};
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GroupElement};

/// Largest field order accepted by [`FiniteField::new`].
pub const FIELD_ORDER_BOUND: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u32);

impl FieldElement {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u64,
    n: u32,
    q: u64,
    /// Monic modulus, coefficients from degree 0 up to degree n.
    modulus: Vec<u64>,
    primitive: FieldElement,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl FiniteField {
    /// The field of order `q` with the lexicographically least monic
    /// irreducible modulus and the least primitive element.
    pub fn new(q: u64) -> Result<Self> {
        let (p, n) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > FIELD_ORDER_BOUND {
            return Err(Error::TooLarge { what: "field", size: q, bound: FIELD_ORDER_BOUND });
        }
        let modulus = least_irreducible(p, n);
        let poly = PolyRing { p, n: n as usize, modulus: &modulus };
        let group_order = q - 1;
        let cofactors: Vec<u64> = factorize(group_order).iter().map(|&(r, _)| group_order / r).collect();
        let primitive = (1..q)
            .find(|&g| {
                let g = poly.decode(g);
                cofactors.iter().all(|&e| !poly.is_one(&poly.pow(&g, e)))
            })
            .expect("multiplicative group of a finite field is cyclic");

        let mut exp = Vec::with_capacity(group_order as usize);
        let mut log = vec![0u32; q as usize];
        let g = poly.decode(primitive);
        let mut x = poly.decode(1);
        for i in 0..group_order {
            let idx = poly.encode(&x);
            exp.push(idx as u32);
            log[idx as usize] = i as u32;
            x = poly.mul(&x, &g);
        }
        Ok(FiniteField { p, n, q, modulus, primitive: FieldElement(primitive as u32), exp, log })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn primitive(&self) -> FieldElement {
        self.primitive
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q as u32).map(FieldElement)
    }

    pub fn element(&self, index: u64) -> Result<FieldElement> {
        if index < self.q {
            Ok(FieldElement(index as u32))
        } else {
            Err(Error::InvalidArgument(format!("{index} is not an element index of GF({})", self.q)))
        }
    }

    /// Coefficients `c_0, ..., c_{n-1}`.
    pub fn coefficients(&self, a: FieldElement) -> Vec<u64> {
        let mut x = a.0 as u64;
        (0..self.n)
            .map(|_| {
                let c = x % self.p;
                x /= self.p;
                c
            })
            .collect()
    }

    pub fn from_coefficients(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() != self.n as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidArgument(format!("bad coefficients {coeffs:?} for GF({})", self.q)));
        }
        Ok(FieldElement(coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c) as u32))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.digitwise(a, b, |x, y| (x + y) % self.p)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.digitwise(a, b, |x, y| (x + self.p - y) % self.p)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.sub(FieldElement(0), a)
    }

    fn digitwise(&self, a: FieldElement, b: FieldElement, op: impl Fn(u64, u64) -> u64) -> FieldElement {
        let (mut a, mut b) = (a.0 as u64, b.0 as u64);
        let (mut out, mut scale) = (0u64, 1u64);
        for _ in 0..self.n {
            out += op(a % self.p, b % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        FieldElement(out as u32)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement(0);
        }
        let e = (self.log[a.index()] as u64 + self.log[b.index()] as u64) % (self.q - 1);
        FieldElement(self.exp[e as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        if a.0 == 0 {
            return None;
        }
        let e = (self.q - 1 - self.log[a.index()] as u64) % (self.q - 1);
        Some(FieldElement(self.exp[e as usize]))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement(1);
        }
        if a.0 == 0 {
            return FieldElement(0);
        }
        let l = (self.log[a.index()] as u128 * e as u128 % (self.q - 1) as u128) as usize;
        FieldElement(self.exp[l])
    }

    /// `g^i` for the fixed primitive element `g`.
    pub fn primitive_power(&self, i: u64) -> FieldElement {
        FieldElement(self.exp[(i % (self.q - 1)) as usize])
    }

    /// Discrete log to base the primitive element; `None` for zero.
    pub fn log(&self, a: FieldElement) -> Option<u64> {
        (a.0 != 0).then(|| self.log[a.index()] as u64)
    }

    pub fn is_nonzero_square(&self, a: FieldElement) -> bool {
        self.log(a).is_some_and(|l| l % 2 == 0)
    }

    /// The nonzero squares, as even powers of the primitive element, in
    /// exponent order.
    pub fn squares(&self) -> Result<Vec<FieldElement>> {
        self.powers_with_parity(0)
    }

    /// The non-squares (odd powers of the primitive element).
    pub fn nonsquares(&self) -> Result<Vec<FieldElement>> {
        self.powers_with_parity(1)
    }

    fn powers_with_parity(&self, parity: u64) -> Result<Vec<FieldElement>> {
        if self.p == 2 {
            return Err(Error::Unsupported(format!("square classes in characteristic 2 (q = {})", self.q)));
        }
        Ok((0..(self.q - 1) / 2).map(|i| self.primitive_power(2 * i + parity)).collect())
    }

    /// The additive group `[p; n]` and the map from field elements into it.
    pub fn additive_embedding(&self) -> (AbelianGroup, FieldEmbedding) {
        let group = AbelianGroup::new(&vec![self.p; self.n as usize]).expect("p >= 2");
        (group.clone(), FieldEmbedding { group })
    }
}

/// Bijection between a field and its additive group.
#[derive(Clone, Debug)]
pub struct FieldEmbedding {
    group: AbelianGroup,
}

impl FieldEmbedding {
    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn to_group(&self, a: FieldElement) -> GroupElement {
        self.group.element(a.index())
    }

    pub fn to_rank(&self, a: FieldElement) -> usize {
        a.index()
    }

    pub fn from_group(&self, e: &GroupElement) -> Result<FieldElement> {
        self.group.check(e)?;
        Ok(FieldElement(self.group.rank_of(e) as u32))
    }
}

/// Polynomial arithmetic modulo a monic modulus over GF(p); used only while
/// building tables.
struct PolyRing<'a> {
    p: u64,
    n: usize,
    modulus: &'a [u64],
}

impl PolyRing<'_> {
    fn decode(&self, mut x: u64) -> Vec<u64> {
        (0..self.n)
            .map(|_| {
                let c = x % self.p;
                x /= self.p;
                c
            })
            .collect()
    }

    fn encode(&self, a: &[u64]) -> u64 {
        a.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn is_one(&self, a: &[u64]) -> bool {
        a[0] == 1 && a[1..].iter().all(|&c| c == 0)
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut prod = vec![0u64; 2 * self.n];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        reduce(&mut prod, self.modulus, self.p);
        prod.truncate(self.n);
        prod
    }

    fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut acc = self.decode(1);
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// Reduces `a` in place modulo the monic polynomial `m` (low-to-high coefficients).
fn reduce(a: &mut [u64], m: &[u64], p: u64) {
    let deg = m.len() - 1;
    for top in (deg..a.len()).rev() {
        let c = a[top];
        if c == 0 {
            continue;
        }
        for (k, &mk) in m.iter().enumerate() {
            let idx = top - deg + k;
            a[idx] = (a[idx] + (p - c) * mk) % p;
        }
    }
}

/// Monic polynomial of degree `deg` whose lower coefficients encode `index`.
fn monic(p: u64, deg: usize, mut index: u64) -> Vec<u64> {
    let mut f: Vec<u64> = (0..deg)
        .map(|_| {
            let c = index % p;
            index /= p;
            c
        })
        .collect();
    f.push(1);
    f
}

/// Irreducibility by trial division with every monic polynomial of degree
/// at most half of `f`'s.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n <= 1 {
        return n == 1;
    }
    // degree-1 factors are roots
    let has_root = (0..p).any(|x| f.iter().rev().fold(0, |acc, &c| (acc * x + c) % p) == 0);
    if has_root {
        return false;
    }
    for d in 2..=n / 2 {
        for idx in 0..p.pow(d as u32) {
            let g = monic(p, d, idx);
            let mut r = f.to_vec();
            reduce(&mut r, &g, p);
            if r[..d].iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn least_irreducible(p: u64, n: u32) -> Vec<u64> {
    let n = n as usize;
    if n == 1 {
        return vec![0, 1];
    }
    (0..p.pow(n as u32))
        .map(|idx| monic(p, n, idx))
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}
