//! Sparse multivariate polynomials with exact integer coefficients.
//!
//! Variables are indexed from 1 (`x1, x2, ...`). Monomials are kept in a
//! compact sparse form but compare and print as the full exponent vector
//! `(e_1, e_2, ...)` in lex order, larger entry first being greater. The
//! module also provides the divided difference operator, computed term by
//! term from the antisymmetrized-numerator identity, so no polynomial
//! division is ever performed.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exponent vector of a monomial in canonical (trailing-zero-trimmed) form.
///
/// Stored sparsely as `(variable, exponent)` pairs with variables >= 1 in
/// increasing order and exponents > 0; semantically this is the dense vector
/// `(e_1, e_2, ...)` with zeros elided.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialKey {
    pairs: Vec<(u32, u32)>,
}

impl MonomialKey {
    /// The constant monomial `1`.
    pub fn unit() -> Self {
        MonomialKey { pairs: Vec::new() }
    }

    /// Builds a key from the dense exponent vector: `exps[k]` is the
    /// exponent of `x_{k+1}`.
    pub fn from_exponents(exps: &[u32]) -> Self {
        let pairs = exps
            .iter()
            .enumerate()
            .filter(|&(_, &e)| e > 0)
            .map(|(k, &e)| (k as u32 + 1, e))
            .collect();
        MonomialKey { pairs }
    }

    /// Builds a key from `(variable, exponent)` pairs in any order;
    /// duplicate variables accumulate and zero exponents are dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut map: BTreeMap<u32, u32> = BTreeMap::new();
        for (v, e) in pairs {
            assert!(v >= 1, "variables are indexed from 1");
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        MonomialKey {
            pairs: map.into_iter().collect(),
        }
    }

    pub fn exponent(&self, var: u32) -> u32 {
        self.pairs
            .binary_search_by_key(&var, |&(v, _)| v)
            .map(|idx| self.pairs[idx].1)
            .unwrap_or(0)
    }

    /// Sparse view as `(variable, exponent)` pairs in increasing variable order.
    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    /// Dense exponent vector, trimmed at the last nonzero entry.
    pub fn exponents(&self) -> Vec<u32> {
        let n = self.max_var() as usize;
        let mut dense = vec![0u32; n];
        for &(v, e) in &self.pairs {
            dense[v as usize - 1] = e;
        }
        dense
    }

    pub fn total_degree(&self) -> u64 {
        self.pairs.iter().map(|&(_, e)| e as u64).sum()
    }

    /// Largest variable index with nonzero exponent, 0 for the unit key.
    pub fn max_var(&self) -> u32 {
        self.pairs.last().map(|&(v, _)| v).unwrap_or(0)
    }

    pub fn is_unit(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn mul(&self, other: &MonomialKey) -> MonomialKey {
        let mut pairs = Vec::with_capacity(self.pairs.len() + other.pairs.len());
        let (mut a, mut b) = (self.pairs.iter().peekable(), other.pairs.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => pairs.push(*a.next().unwrap()),
                (None, Some(_)) => pairs.push(*b.next().unwrap()),
                (Some(&&(va, ea)), Some(&&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => {
                        pairs.push((va, ea));
                        a.next();
                    }
                    Ordering::Greater => {
                        pairs.push((vb, eb));
                        b.next();
                    }
                    Ordering::Equal => {
                        pairs.push((va, ea + eb));
                        a.next();
                        b.next();
                    }
                },
            }
        }
        MonomialKey { pairs }
    }

    /// The key with the exponents of `var_a` and `var_b` replaced.
    fn with_exponents_at(&self, var_a: u32, ea: u32, var_b: u32, eb: u32) -> MonomialKey {
        let mut pairs: Vec<(u32, u32)> = self
            .pairs
            .iter()
            .copied()
            .filter(|&(v, _)| v != var_a && v != var_b)
            .collect();
        if ea > 0 {
            pairs.push((var_a, ea));
        }
        if eb > 0 {
            pairs.push((var_b, eb));
        }
        pairs.sort_unstable_by_key(|&(v, _)| v);
        MonomialKey { pairs }
    }
}

impl Ord for MonomialKey {
    /// Lex order on the dense exponent vector: at the first variable where
    /// the exponents differ, the larger exponent wins.
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.pairs.iter().peekable();
        let mut b = other.pairs.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&&(va, ea)), Some(&&(vb, eb))) => match va.cmp(&vb) {
                    // the side with the smaller variable index has a positive
                    // exponent where the other has zero
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        a.next();
                        b.next();
                    }
                },
            }
        }
    }
}

impl PartialOrd for MonomialKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial with exact integer coefficients.
///
/// Zero coefficients are never stored; the zero polynomial has no terms and
/// total degree `-1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparsePoly {
    terms: BTreeMap<MonomialKey, BigInt>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        SparsePoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(MonomialKey::unit(), c);
        }
        SparsePoly { terms }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    /// The variable `x_var`, `var >= 1`.
    pub fn x(var: u32) -> Self {
        Self::monomial(MonomialKey::from_pairs([(var, 1)]), BigInt::one())
    }

    pub fn monomial(key: MonomialKey, coeff: impl Into<BigInt>) -> Self {
        let coeff = coeff.into();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(key, coeff);
        }
        SparsePoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MonomialKey, &BigInt)> {
        self.terms.iter()
    }

    /// Terms in descending canonical order, the order used for printing.
    pub fn terms_desc(&self) -> impl Iterator<Item = (&MonomialKey, &BigInt)> {
        self.terms.iter().rev()
    }

    /// The maximal monomial and its coefficient.
    pub fn leading_term(&self) -> Option<(&MonomialKey, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// The minimal monomial and its coefficient.
    pub fn trailing_term(&self) -> Option<(&MonomialKey, &BigInt)> {
        self.terms.iter().next()
    }

    pub fn coefficient(&self, key: &MonomialKey) -> BigInt {
        self.terms.get(key).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Max total degree over terms; `-1` for the zero polynomial.
    pub fn total_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|k| k.total_degree() as i64)
            .max()
            .unwrap_or(-1)
    }

    /// True when every term has the same total degree (vacuously for zero).
    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|k| k.total_degree());
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    /// Largest variable index appearing, 0 for constants.
    pub fn max_var(&self) -> u32 {
        self.terms.keys().map(|k| k.max_var()).max().unwrap_or(0)
    }

    /// The constant value if the polynomial has no variable part.
    pub fn as_constant(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.terms.len() == 1 {
            if let Some((k, c)) = self.leading_term() {
                if k.is_unit() {
                    return Some(c.clone());
                }
            }
        }
        None
    }

    fn add_term(&mut self, key: MonomialKey, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scalar_mul(&self, c: &BigInt) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero();
        }
        SparsePoly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v * c))
                .collect(),
        }
    }

    /// The divided difference `(p - s_i p) / (x_i - x_{i+1})`, `i >= 1`.
    ///
    /// Each term contributes the geometric-sum expansion of
    /// `(x_i^a x_{i+1}^b - x_i^b x_{i+1}^a) / (x_i - x_{i+1})`, which keeps
    /// the computation exact and division-free. Terms symmetric in
    /// `x_i, x_{i+1}` contribute nothing.
    pub fn divided_difference(&self, i: u32) -> SparsePoly {
        assert!(i >= 1, "divided difference index is 1-based");
        let (vi, vj) = (i, i + 1);
        let mut out = SparsePoly::zero();
        for (key, coeff) in &self.terms {
            let a = key.exponent(vi);
            let b = key.exponent(vj);
            if a == b {
                continue;
            }
            if a > b {
                for t in 0..(a - b) {
                    let k = key.with_exponents_at(vi, b + t, vj, a - 1 - t);
                    out.add_term(k, coeff.clone());
                }
            } else {
                for t in 0..(b - a) {
                    let k = key.with_exponents_at(vi, a + t, vj, b - 1 - t);
                    out.add_term(k, -coeff.clone());
                }
            }
        }
        out
    }

    /// Rewrites every variable index through `f`, which must be injective
    /// on the variables present.
    pub fn remap_vars(&self, f: impl Fn(u32) -> u32) -> SparsePoly {
        let mut out = SparsePoly::zero();
        for (key, coeff) in &self.terms {
            let remapped =
                MonomialKey::from_pairs(key.pairs().iter().map(|&(v, e)| (f(v), e)));
            out.add_term(remapped, coeff.clone());
        }
        out
    }

    /// Renders with a caller-chosen variable namer (`var >= 1`).
    ///
    /// Terms appear in descending canonical order; coefficients are always
    /// explicit (`1*x1`), exponent 1 is implicit, and the sign is folded
    /// into the ` + ` / ` - ` separators.
    pub fn format_with(&self, namer: &dyn Fn(u32) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (key, coeff)) in self.terms_desc().enumerate() {
            let negative = coeff.is_negative();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else if negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let magnitude = coeff.abs();
            if key.is_unit() {
                out.push_str(&magnitude.to_string());
            } else {
                out.push_str(&magnitude.to_string());
                for &(v, e) in key.pairs() {
                    out.push('*');
                    out.push_str(&namer(v));
                    if e > 1 {
                        out.push('^');
                        out.push_str(&e.to_string());
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(&|v| format!("x{v}")))
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        let mut out = SparsePoly::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                out.add_term(ka.mul(kb), ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for SparsePoly {
            type Output = SparsePoly;
            fn $method(self, rhs: SparsePoly) -> SparsePoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&SparsePoly> for SparsePoly {
            type Output = SparsePoly;
            fn $method(self, rhs: &SparsePoly) -> SparsePoly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xp(exps: &[u32]) -> MonomialKey {
        MonomialKey::from_exponents(exps)
    }

    #[test]
    fn monomial_order_is_lex_with_larger_first_entry_greater() {
        assert!(xp(&[1]) > xp(&[0, 2]));
        assert!(xp(&[2, 1]) > xp(&[2, 0, 1]));
        assert!(xp(&[1, 2]) > xp(&[1, 1, 1]));
        assert!(xp(&[0, 2, 1]) < xp(&[1, 1, 1]));
        assert_eq!(xp(&[1, 0, 0]), xp(&[1]));
    }

    #[test]
    fn binomial_product() {
        let p = SparsePoly::x(1) + SparsePoly::x(2);
        let q = &p * &SparsePoly::x(1);
        let expected = SparsePoly::monomial(xp(&[2]), 1) + SparsePoly::monomial(xp(&[1, 1]), 1);
        assert_eq!(q, expected);
    }

    #[test]
    fn additive_identity() {
        let p = SparsePoly::x(1) + SparsePoly::constant(3);
        assert_eq!(&p + &SparsePoly::zero(), p);
        assert_eq!(&p - &p, SparsePoly::zero());
    }

    #[test]
    fn degree_sentinel() {
        assert_eq!(SparsePoly::zero().total_degree(), -1);
        assert_eq!(SparsePoly::one().total_degree(), 0);
        assert_eq!(SparsePoly::monomial(xp(&[2, 1]), 5).total_degree(), 3);
    }

    #[test]
    fn divided_difference_examples() {
        // (x1 - x2)/(x1 - x2) = 1
        assert_eq!(SparsePoly::x(1).divided_difference(1), SparsePoly::one());
        // symmetric input
        let x1x2 = SparsePoly::monomial(xp(&[1, 1]), 1);
        assert_eq!(x1x2.divided_difference(1), SparsePoly::zero());
        // direct expansion of the defining quotient
        let p = SparsePoly::monomial(xp(&[2, 1]), 1);
        assert_eq!(
            p.divided_difference(2),
            SparsePoly::monomial(xp(&[2]), 1),
            "d_2(x1^2 x2) = x1^2"
        );
        // acting past the support gives zero
        assert_eq!(p.divided_difference(4), SparsePoly::zero());
    }

    #[test]
    fn coefficient_lookup() {
        let p = SparsePoly::monomial(xp(&[2]), 1);
        assert_eq!(p.coefficient(&xp(&[0, 1])), BigInt::from(0));
        assert_eq!(p.coefficient(&xp(&[2])), BigInt::from(1));
    }

    #[test]
    fn display_format() {
        let p = SparsePoly::monomial(xp(&[2, 1]), 1)
            + SparsePoly::monomial(xp(&[0, 2]), -3)
            + SparsePoly::constant(7);
        assert_eq!(p.to_string(), "1*x1^2*x2 - 3*x2^2 + 7");
        assert_eq!(SparsePoly::zero().to_string(), "0");
        assert_eq!((-&SparsePoly::x(3)).to_string(), "-1*x3");
    }

    fn divided_difference_reference(p: &SparsePoly, i: u32) -> SparsePoly {
        // (p - s_i p) expanded monomial by monomial, then divided by
        // (x_i - x_{i+1}) via the same geometric identity applied to the
        // swapped pair; used as an independent cross-check of linearity.
        let mut swapped = SparsePoly::zero();
        for (k, c) in p.terms() {
            let a = k.exponent(i);
            let b = k.exponent(i + 1);
            swapped.add_term(k.with_exponents_at(i, b, i + 1, a), c.clone());
        }
        let numerator = p - &swapped;
        // verify the numerator is antisymmetric, then divide one term pair
        // at a time
        let mut reswapped = SparsePoly::zero();
        for (k, c) in numerator.terms() {
            let a = k.exponent(i);
            let b = k.exponent(i + 1);
            reswapped.add_term(k.with_exponents_at(i, b, i + 1, a), -c.clone());
        }
        assert_eq!(numerator, reswapped, "numerator must be antisymmetric");
        numerator_divide(&numerator, i)
    }

    fn numerator_divide(num: &SparsePoly, i: u32) -> SparsePoly {
        // long division by (x_i - x_{i+1}) on an antisymmetric numerator
        let divisor = SparsePoly::x(i) - SparsePoly::x(i + 1);
        let mut rem = num.clone();
        let mut quot = SparsePoly::zero();
        while let Some((k, c)) = rem.leading_term() {
            let (k, c) = (k.clone(), c.clone());
            let a = k.exponent(i);
            assert!(a >= 1, "leading term must be divisible by x_i");
            let qk = k.with_exponents_at(i, a - 1, i + 1, k.exponent(i + 1));
            let qt = SparsePoly::monomial(qk, c);
            rem = rem - &qt * &divisor;
            quot = quot + qt;
        }
        quot
    }

    fn arb_poly() -> impl Strategy<Value = SparsePoly> {
        prop::collection::vec(
            (prop::collection::vec(0u32..4, 1..5), -9i64..10),
            0..6,
        )
        .prop_map(|terms| {
            let mut p = SparsePoly::zero();
            for (exps, c) in terms {
                p.add_term(MonomialKey::from_exponents(&exps), BigInt::from(c));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
            prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
            prop_assert_eq!(&p + &q, &q + &p);
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        }

        #[test]
        fn divided_difference_matches_long_division(p in arb_poly(), i in 1u32..4) {
            prop_assert_eq!(p.divided_difference(i), divided_difference_reference(&p, i));
        }

        #[test]
        fn divided_difference_squares_to_zero(p in arb_poly(), i in 1u32..4) {
            prop_assert_eq!(p.divided_difference(i).divided_difference(i), SparsePoly::zero());
        }

        #[test]
        fn braid_relations(p in arb_poly()) {
            // far-apart operators commute
            prop_assert_eq!(
                p.divided_difference(1).divided_difference(3),
                p.divided_difference(3).divided_difference(1)
            );
            // adjacent operators braid
            prop_assert_eq!(
                p.divided_difference(1).divided_difference(2).divided_difference(1),
                p.divided_difference(2).divided_difference(1).divided_difference(2)
            );
        }
    }
}
