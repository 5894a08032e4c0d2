//! Explicit GSEDF constructions.
//!
//! Every function returns a validated [`DiffFamily`]; callers that need the
//! GSEDF property itself should run [`crate::verify::verify_gsedf`] on it.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{is_odd_prime_power, is_prime_power, isqrt};
use crate::error::{Error, Result};
use crate::family::DiffFamily;
use crate::ffield::FiniteField;
use crate::group::{AbelianGroup, DirectProduct, GroupElement};
use crate::verify::verify_ds;

/// `(ab+1, 2; a, b; 1, 1)` in `Z_{ab+1}`: `D_1 = {0, ..., a-1}`,
/// `D_2 = {a, 2a, ..., ba}`.
pub fn c1(a: u64, b: u64) -> Result<DiffFamily> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidArgument(format!("c1 needs a, b >= 1, got ({a}, {b})")));
    }
    let g = AbelianGroup::cyclic(a * b + 1)?;
    let d1: Vec<usize> = (0..a as usize).collect();
    let d2: Vec<usize> = (1..=b as usize).map(|j| j * a as usize).collect();
    DiffFamily::from_ranks(g, &[d1, d2], vec![1, 1])
}

/// Lifts a `(v, 2; 2l, (v-1)/2; l, l)` family in `G` to a
/// `(vt, 2; 4l, (vt-1)/2; 2l, 2l)` family in `G x Z_t`:
///
/// * `D_1' = D_1 x {0, 1}`
/// * `D_2' = D_2 x {0, 1, 3, ..., t-2}  u  (G \ D_2) x {2, 4, ..., t-1}`
pub fn lift(f: &DiffFamily, t: u64) -> Result<DiffFamily> {
    let v = f.v();
    if v < 3 || v.is_multiple_of(2) || t < 3 || t.is_multiple_of(2) {
        return Err(Error::HypothesisViolation(format!("lift needs odd v > 1 and odd t > 1, got v = {v}, t = {t}")));
    }
    let lam = f.lambdas()[0];
    let ks = f.ks();
    if f.m() != 2 || f.lambdas()[1] != lam || ks[0] != 2 * lam || ks[1] != (v - 1) / 2 {
        return Err(Error::NotLiftable(format!(
            "expected shape ({v}, 2; {}, {}; l, l) with k_1 = 2l, got k = {ks:?}, lambda = {:?}",
            2 * lam,
            (v - 1) / 2,
            f.lambdas()
        )));
    }
    let g = f.group();
    let product = DirectProduct::of(&[g, &AbelianGroup::cyclic(t)?])?;
    let at = |x: &GroupElement, level: u64| -> Result<GroupElement> {
        let mut c = x.0.clone();
        c.push(level);
        product.embed(&c)
    };
    let (d1, d2) = (&f.sets()[0], &f.sets()[1]);
    let mut new1 = Vec::with_capacity(2 * d1.len());
    for x in d1 {
        new1.push(at(x, 0)?);
        new1.push(at(x, 1)?);
    }
    let mut new2 = Vec::new();
    for x in d2 {
        new2.push(at(x, 0)?);
        for level in (1..t - 1).step_by(2) {
            new2.push(at(x, level)?);
        }
    }
    for y in g.elements().filter(|y| !d2.contains(y)) {
        for level in (2..t).step_by(2) {
            new2.push(at(&y, level)?);
        }
    }
    DiffFamily::new(product.group().clone(), vec![new1, new2], vec![2 * lam, 2 * lam])
}

fn field_sets(q: u64) -> Result<(FiniteField, AbelianGroup, Vec<GroupElement>, Vec<GroupElement>)> {
    let field = FiniteField::new(q)?;
    let (g, emb) = field.additive_embedding();
    let squares = field.squares()?.into_iter().map(|x| emb.to_group(x)).collect();
    let nonsquares = field.nonsquares()?.into_iter().map(|x| emb.to_group(x)).collect();
    Ok((field, g, squares, nonsquares))
}

/// `(q, 2; (q-1)/2, (q-1)/2; (q-1)/4, (q-1)/4)` for `q = 1 (mod 4)`:
/// nonzero squares and non-squares of GF(q).
pub fn paley_even(q: u64) -> Result<DiffFamily> {
    if !is_prime_power(q) || q % 4 != 1 {
        return Err(Error::HypothesisViolation(format!("paley_even needs a prime power q = 1 mod 4, got {q}")));
    }
    let (_, g, squares, nonsquares) = field_sets(q)?;
    let l = (q - 1) / 4;
    DiffFamily::new(g, vec![squares, nonsquares], vec![l, l])
}

/// `(q, 2; (q-1)/2, (q+1)/2; (q+1)/4, (q+1)/4)` for `q = 3 (mod 4)`: the
/// nonzero squares and their complement (which contains 0).
pub fn paley_odd(q: u64) -> Result<DiffFamily> {
    if !is_prime_power(q) || q % 4 != 3 {
        return Err(Error::HypothesisViolation(format!("paley_odd needs a prime power q = 3 mod 4, got {q}")));
    }
    let (_, g, squares, nonsquares) = field_sets(q)?;
    let mut rest = nonsquares;
    rest.push(g.zero());
    let l = (q + 1) / 4;
    DiffFamily::new(g, vec![squares, rest], vec![l, l])
}

/// `(v, 2; 2^n, (v-1)/2; 2^{n-1}, 2^{n-1})` for `v = p_1 ... p_n` with odd
/// `p_i > 1`: `c1(2, (p_1-1)/2)` lifted by `p_2, ..., p_n` in order.
pub fn two_n(ps: &[u64]) -> Result<DiffFamily> {
    let Some((&first, rest)) = ps.split_first() else {
        return Err(Error::HypothesisViolation("two_n needs at least one factor".into()));
    };
    if let Some(p) = ps.iter().find(|&&p| p < 3 || p % 2 == 0) {
        return Err(Error::HypothesisViolation(format!("two_n factors must be odd and > 1, got {p}")));
    }
    let mut f = c1(2, (first - 1) / 2)?;
    for &p in rest {
        f = lift(&f, p)?;
    }
    Ok(f)
}

/// The fixed `(16, 2; 5, 9; 3, 3)` family in `Z_2 x Z_8`.
pub fn g16() -> DiffFamily {
    let g = AbelianGroup::new(&[2, 8]).expect("valid factors");
    let e = |a: u64, b: u64| GroupElement(vec![a, b]);
    let d1 = vec![e(0, 0), e(0, 1), e(0, 3), e(1, 0), e(1, 4)];
    let d2 = vec![e(0, 4), e(0, 5), e(0, 7), e(1, 1), e(1, 2), e(1, 3), e(1, 5), e(1, 6), e(1, 7)];
    DiffFamily::new(g, vec![d1, d2], vec![3, 3]).expect("disjoint sets")
}

/// The twin-prime-power difference set in `GF(q) x GF(q+2)`:
/// `{(x, y) : x, y != 0, same quadratic character} u {(x, 0) : x in GF(q)}`.
pub fn twin_prime_difference_set(q: u64) -> Result<(AbelianGroup, Vec<GroupElement>)> {
    if !is_odd_prime_power(q) || !is_odd_prime_power(q + 2) {
        return Err(Error::NotTwinPrimePowers(q));
    }
    let (f1, f2) = (FiniteField::new(q)?, FiniteField::new(q + 2)?);
    let (g1, e1) = f1.additive_embedding();
    let (g2, e2) = f2.additive_embedding();
    let product = DirectProduct::of(&[&g1, &g2])?;
    let pair = |x, y| -> Result<GroupElement> {
        let mut c = e1.to_group(x).0;
        c.extend(e2.to_group(y).0);
        product.embed(&c)
    };
    let mut d = Vec::new();
    for x in f1.elements() {
        for y in f2.elements() {
            let same_class = x != f1.zero()
                && y != f2.zero()
                && f1.is_nonzero_square(x) == f2.is_nonzero_square(y);
            if same_class || y == f2.zero() {
                d.push(pair(x, y)?);
            }
        }
    }
    Ok((product.group().clone(), d))
}

/// `(v, 2; (v-1)/2, (v+1)/2; (v+1)/4, (v+1)/4)` with `v = q(q+2)`, from
/// the twin-prime-power difference set and its complement. The difference
/// set is checked before it is returned.
pub fn twin_prime(q: u64) -> Result<DiffFamily> {
    let (g, d) = twin_prime_difference_set(q)?;
    let v = g.order();
    if !verify_ds(&g, &d, (v - 1) / 2, (v - 3) / 4)? {
        return Err(Error::NotConstructible(format!("twin prime set for q = {q} is not a difference set")));
    }
    let members: HashSet<&GroupElement> = d.iter().collect();
    let complement: Vec<GroupElement> = g.elements().filter(|x| !members.contains(x)).collect();
    let l = (v + 1) / 4;
    DiffFamily::new(g, vec![d, complement], vec![l, l])
}

/// `(v, 3; 1, (v-1)/2, (v-1)/2; 1, (v+1)/4, (v+1)/4)` for a prime power
/// `v = 3 (mod 4)`: `{0}`, the even powers and the odd powers of a
/// primitive element.
pub fn m3_prime_power(v: u64) -> Result<DiffFamily> {
    if !is_prime_power(v) || v % 4 != 3 {
        return Err(Error::HypothesisViolation(format!("m3_prime_power needs a prime power v = 3 mod 4, got {v}")));
    }
    let (_, g, even, odd) = field_sets(v)?;
    let l = (v + 1) / 4;
    DiffFamily::new(g.clone(), vec![vec![g.zero()], even, odd], vec![1, l, l])
}

/// `paley_even(q)` lifted by each `p_i` in order.
pub fn q4_lift(q: u64, ps: &[u64]) -> Result<DiffFamily> {
    let mut f = paley_even(q)?;
    for &p in ps {
        f = lift(&f, p)?;
    }
    Ok(f)
}

/// Base family of shape `(4m-1, 2; 2m, 2m-1; m, m)`: the complement of the
/// squares first when `4m-1` is a prime power, the complement of the twin
/// difference set first when `4m-1 = q(q+2)`. Then lifted through `ps`.
pub fn family_4m1(m: u64, ps: &[u64]) -> Result<DiffFamily> {
    if m == 0 {
        return Err(Error::NotConstructible("m must be positive".into()));
    }
    let b = 4 * m - 1;
    let base = if is_prime_power(b) {
        paley_odd(b)?
    } else if let Some(q) = twin_factor(b) {
        twin_prime(q)?
    } else {
        return Err(Error::NotConstructible(format!(
            "4m - 1 = {b} is neither a prime power nor q(q+2) with q, q+2 prime powers"
        )));
    };
    let [small, large] = [base.sets()[0].clone(), base.sets()[1].clone()];
    let mut f = DiffFamily::new(base.group().clone(), vec![large, small], vec![m, m])?;
    for &p in ps {
        f = lift(&f, p)?;
    }
    Ok(f)
}

/// `q` with `n = q(q+2)` and both `q`, `q+2` odd prime powers.
pub fn twin_factor(n: u64) -> Option<u64> {
    let s = isqrt(n + 1);
    (s * s == n + 1 && s >= 4).then(|| s - 1).filter(|&q| is_odd_prime_power(q) && is_odd_prime_power(q + 2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecipeName {
    C1,
    Lift,
    PaleyEven,
    PaleyOdd,
    TwoN,
    G16,
    TwinPrime,
    M3PrimePower,
    Q4Lift,
    #[serde(rename = "family_4m1")]
    Family4m1,
}

impl RecipeName {
    pub const ALL: [RecipeName; 10] = [
        RecipeName::C1,
        RecipeName::Lift,
        RecipeName::PaleyEven,
        RecipeName::PaleyOdd,
        RecipeName::TwoN,
        RecipeName::G16,
        RecipeName::TwinPrime,
        RecipeName::M3PrimePower,
        RecipeName::Q4Lift,
        RecipeName::Family4m1,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RecipeName::C1 => "c1",
            RecipeName::Lift => "lift",
            RecipeName::PaleyEven => "paley_even",
            RecipeName::PaleyOdd => "paley_odd",
            RecipeName::TwoN => "two_n",
            RecipeName::G16 => "g16",
            RecipeName::TwinPrime => "twin_prime",
            RecipeName::M3PrimePower => "m3_prime_power",
            RecipeName::Q4Lift => "q4_lift",
            RecipeName::Family4m1 => "family_4m1",
        }
    }
}

impl fmt::Display for RecipeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RecipeName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RecipeName::ALL
            .into_iter()
            .find(|r| r.as_str() == s.replace('-', "_"))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown recipe {s:?}")))
    }
}

/// A named construction with integer arguments, serialized as
/// `{"name": "...", "args": [...]}`.
///
/// Argument lists: `c1 [a, b]`, `lift [t, ...]` (needs a base family),
/// `paley_even [q]`, `paley_odd [q]`, `two_n [p_1, ...]`, `g16 []`,
/// `twin_prime [q]`, `m3_prime_power [v]`, `q4_lift [q, p_1, ...]`,
/// `family_4m1 [m, p_1, ...]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionRecipe {
    pub name: RecipeName,
    pub args: Vec<u64>,
}

impl ConstructionRecipe {
    pub fn new(name: RecipeName, args: Vec<u64>) -> Result<Self> {
        let ok = match name {
            RecipeName::C1 => args.len() == 2,
            RecipeName::G16 => args.is_empty(),
            RecipeName::PaleyEven | RecipeName::PaleyOdd | RecipeName::TwinPrime | RecipeName::M3PrimePower => {
                args.len() == 1
            }
            RecipeName::Lift | RecipeName::TwoN | RecipeName::Q4Lift | RecipeName::Family4m1 => !args.is_empty(),
        };
        if !ok {
            return Err(Error::InvalidArgument(format!("wrong number of arguments for {name}: {args:?}")));
        }
        Ok(ConstructionRecipe { name, args })
    }

    pub fn needs_base(&self) -> bool {
        self.name == RecipeName::Lift
    }

    /// Runs the construction. `base` is required by `lift` and ignored
    /// otherwise.
    pub fn build(&self, base: Option<&DiffFamily>) -> Result<DiffFamily> {
        let r = ConstructionRecipe::new(self.name, self.args.clone())?;
        let a = &r.args;
        match r.name {
            RecipeName::C1 => c1(a[0], a[1]),
            RecipeName::Lift => {
                let mut f = base
                    .ok_or_else(|| Error::InvalidArgument("lift needs a base family".into()))?
                    .clone();
                for &t in a {
                    f = lift(&f, t)?;
                }
                Ok(f)
            }
            RecipeName::PaleyEven => paley_even(a[0]),
            RecipeName::PaleyOdd => paley_odd(a[0]),
            RecipeName::TwoN => two_n(a),
            RecipeName::G16 => Ok(g16()),
            RecipeName::TwinPrime => twin_prime(a[0]),
            RecipeName::M3PrimePower => m3_prime_power(a[0]),
            RecipeName::Q4Lift => q4_lift(a[0], &a[1..]),
            RecipeName::Family4m1 => family_4m1(a[0], &a[1..]),
        }
    }
}

/// Parameters `(v, ks, lambdas)` the recipe produces, computed from the
/// construction parameters without building anything. `None` when the hypotheses
/// fail. `lift` is not covered since it depends on its base.
pub fn recipe_parameters(r: &ConstructionRecipe) -> Option<(u64, Vec<u64>, Vec<u64>)> {
    let a = &r.args;
    let odd_factors = |ps: &[u64]| ps.iter().all(|&p| p >= 3 && p % 2 == 1);
    match r.name {
        RecipeName::C1 if a.len() == 2 && a[0] >= 1 && a[1] >= 1 => Some((a[0] * a[1] + 1, a.clone(), vec![1, 1])),
        RecipeName::PaleyEven if a.len() == 1 && is_prime_power(a[0]) && a[0] % 4 == 1 => {
            let q = a[0];
            Some((q, vec![(q - 1) / 2; 2], vec![(q - 1) / 4; 2]))
        }
        RecipeName::PaleyOdd if a.len() == 1 && is_prime_power(a[0]) && a[0] % 4 == 3 => {
            let q = a[0];
            Some((q, vec![(q - 1) / 2, q.div_ceil(2)], vec![(q + 1) / 4; 2]))
        }
        RecipeName::TwoN if !a.is_empty() && odd_factors(a) => {
            let v: u64 = a.iter().product();
            let n = a.len() as u32;
            Some((v, vec![1 << n, (v - 1) / 2], vec![1 << (n - 1); 2]))
        }
        RecipeName::G16 if a.is_empty() => Some((16, vec![5, 9], vec![3, 3])),
        RecipeName::TwinPrime if a.len() == 1 && twin_factor(a[0] * (a[0] + 2)) == Some(a[0]) => {
            let v = a[0] * (a[0] + 2);
            Some((v, vec![(v - 1) / 2, v.div_ceil(2)], vec![(v + 1) / 4; 2]))
        }
        RecipeName::M3PrimePower if a.len() == 1 && is_prime_power(a[0]) && a[0] % 4 == 3 => {
            let v = a[0];
            Some((v, vec![1, (v - 1) / 2, (v - 1) / 2], vec![1, (v + 1) / 4, (v + 1) / 4]))
        }
        RecipeName::Q4Lift if !a.is_empty() && is_prime_power(a[0]) && a[0] % 4 == 1 && odd_factors(&a[1..]) => {
            let q = a[0];
            let t: u64 = a[1..].iter().product();
            let n = a.len() as u32 - 1;
            // (q-1) 2^{n-1} and (q-1) 2^{n-2}, written to stay integral at n = 0
            let k1 = (q - 1) * (1 << n) / 2;
            let l = (q - 1) * (1 << n) / 4;
            Some((q * t, vec![k1, (q * t - 1) / 2], vec![l, l]))
        }
        RecipeName::Family4m1 if !a.is_empty() && a[0] >= 1 && odd_factors(&a[1..]) => {
            let m = a[0];
            let b = 4 * m - 1;
            if !(is_prime_power(b) || twin_factor(b).is_some()) {
                return None;
            }
            let t: u64 = a[1..].iter().product();
            let n = a.len() as u32 - 1;
            Some((b * t, vec![m << (n + 1), (4 * m * t - t - 1) / 2], vec![m << n; 2]))
        }
        _ => None,
    }
}
