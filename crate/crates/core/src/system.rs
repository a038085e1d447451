//! Polynomial systems over named variables and parameters, the size measure
//! `phi`, the POLYSYS text format, and layered forward solving.
//!
//! Every equation is a [`SparsePoly`] read as `= 0`; polynomial variable
//! index `v` refers to the `v`-th declared name, variables first and then
//! parameters. Systems emitted by this crate list their equations in an
//! order where each new equation either determines one fresh variable
//! linearly or is a pure constraint, which is what [`PolySystem::forward_solve`]
//! exploits.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::field::PrimeField;
use crate::poly::SparsePoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SystemError {
    #[error("equation {equation} is not forward-solvable")]
    NotForwardSolvable { equation: usize },
    #[error("equation {equation} is inconsistent under the given assignment")]
    Inconsistent { equation: usize },
    #[error("name '{0}' is not declared in the system")]
    UnknownName(String),
}

/// A list of polynomial equations over declared variables and parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySystem {
    variables: Vec<String>,
    parameters: Vec<String>,
    equations: Vec<SparsePoly>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

impl PolySystem {
    /// Creates an empty system over the given names. Names must be unique,
    /// nonempty and drawn from `[a-z0-9_]`.
    pub fn new(variables: Vec<String>, parameters: Vec<String>) -> Self {
        let mut seen = std::collections::HashSet::new();
        for name in variables.iter().chain(parameters.iter()) {
            assert!(valid_name(name), "invalid name '{name}'");
            assert!(seen.insert(name.clone()), "duplicate name '{name}'");
        }
        PolySystem {
            variables,
            parameters,
            equations: Vec::new(),
        }
    }

    /// Appends an equation `poly = 0`. The polynomial must be nonzero and
    /// reference only declared names.
    pub fn push_equation(&mut self, poly: SparsePoly) {
        assert!(!poly.is_zero(), "zero equation");
        assert!(
            poly.max_var() as usize <= self.name_count(),
            "equation references undeclared index {}",
            poly.max_var()
        );
        self.equations.push(poly);
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn parameters(&self) -> &[String] {
        &self.parameters
    }

    pub fn equations(&self) -> &[SparsePoly] {
        &self.equations
    }

    pub fn name_count(&self) -> usize {
        self.variables.len() + self.parameters.len()
    }

    /// The name behind polynomial variable index `v` (1-based).
    pub fn name_of(&self, v: u32) -> &str {
        let idx = v as usize - 1;
        if idx < self.variables.len() {
            &self.variables[idx]
        } else {
            &self.parameters[idx - self.variables.len()]
        }
    }

    /// Polynomial variable index of `name` (1-based).
    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.variables
            .iter()
            .chain(self.parameters.iter())
            .position(|n| n == name)
            .map(|i| i as u32 + 1)
    }

    pub fn is_parameter_index(&self, v: u32) -> bool {
        v as usize > self.variables.len()
    }

    /// The size measure: sum of equation degrees plus, over all terms, the
    /// coefficient bit-length `ceil(log2(|c| + 1)) + 1` (one sign bit).
    pub fn phi_size(&self) -> u64 {
        let mut phi = 0u64;
        for eq in &self.equations {
            phi += eq.total_degree().max(0) as u64;
            for (_, coeff) in eq.terms() {
                phi += coeff.magnitude().bits() + 1;
            }
        }
        phi
    }

    /// Renders the byte-exact POLYSYS text form.
    pub fn to_polysys_string(&self) -> String {
        let mut out = String::from("POLYSYS 1\n");
        for v in &self.variables {
            out.push_str("VAR ");
            out.push_str(v);
            out.push('\n');
        }
        for p in &self.parameters {
            out.push_str("PARAM ");
            out.push_str(p);
            out.push('\n');
        }
        for eq in &self.equations {
            out.push_str("EQ ");
            out.push_str(&eq.format_with(&|v| self.name_of(v).to_string()));
            out.push('\n');
        }
        out
    }

    pub fn write_polysys<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(self.to_polysys_string().as_bytes())
    }

    /// Solves the system in equation order, starting from the given named
    /// values.
    ///
    /// Each equation must either (a) involve exactly one unassigned name,
    /// occurring linearly with an invertible coefficient, which it then
    /// determines, or (b) involve none, in which case it is checked; a
    /// nonzero residual yields [`SolveOutcome::Violated`]. Anything else is
    /// [`SystemError::NotForwardSolvable`].
    pub fn forward_solve<D: EvalDomain>(
        &self,
        domain: &D,
        given: &[(&str, D::Elem)],
    ) -> Result<SolveOutcome<D::Elem>, SystemError> {
        let mut values: Vec<Option<D::Elem>> = vec![None; self.name_count()];
        for (name, value) in given {
            let idx = self
                .index_of(name)
                .ok_or_else(|| SystemError::UnknownName(name.to_string()))?;
            values[idx as usize - 1] = Some(value.clone());
        }

        for (eq_idx, eq) in self.equations.iter().enumerate() {
            let mut constant = domain.zero();
            // coefficient of the single unknown, accumulated across terms
            let mut unknown: Option<(u32, D::Elem)> = None;
            let mut solvable = true;

            'terms: for (key, coeff) in eq.terms() {
                let mut known = domain.from_bigint(coeff);
                let mut term_unknown: Option<u32> = None;
                for &(v, e) in key.pairs() {
                    match &values[v as usize - 1] {
                        Some(val) => {
                            for _ in 0..e {
                                known = domain.mul(&known, val);
                            }
                        }
                        None => {
                            if e > 1 || term_unknown.is_some() {
                                solvable = false;
                                break 'terms;
                            }
                            term_unknown = Some(v);
                        }
                    }
                }
                match term_unknown {
                    None => constant = domain.add(&constant, &known),
                    Some(v) => match &mut unknown {
                        None => unknown = Some((v, known)),
                        Some((u, acc)) if *u == v => *acc = domain.add(acc, &known),
                        Some(_) => {
                            solvable = false;
                            break 'terms;
                        }
                    },
                }
            }

            if !solvable {
                return Err(SystemError::NotForwardSolvable { equation: eq_idx });
            }
            match unknown {
                Some((v, coeff)) if !domain.is_zero(&coeff) => {
                    let inv = domain
                        .invert(&coeff)
                        .ok_or(SystemError::NotForwardSolvable { equation: eq_idx })?;
                    let value = domain.mul(&domain.neg(&constant), &inv);
                    values[v as usize - 1] = Some(value);
                }
                // the unknown's coefficient cancelled: plain constraint
                _ => {
                    if !domain.is_zero(&constant) {
                        return Ok(SolveOutcome::Violated { equation: eq_idx });
                    }
                }
            }
        }

        let assigned = self
            .variables
            .iter()
            .chain(self.parameters.iter())
            .zip(values)
            .filter_map(|(name, v)| v.map(|v| (name.clone(), v)))
            .collect();
        Ok(SolveOutcome::Satisfied { values: assigned })
    }
}

/// Result of a forward solve: either every checked constraint held, or the
/// first violated equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome<E> {
    Satisfied { values: Vec<(String, E)> },
    Violated { equation: usize },
}

impl<E> SolveOutcome<E> {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, SolveOutcome::Satisfied { .. })
    }
}

/// Arithmetic domain a system can be evaluated over.
pub trait EvalDomain {
    type Elem: Clone + PartialEq + std::fmt::Debug;
    fn from_bigint(&self, c: &BigInt) -> Self::Elem;
    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn invert(&self, a: &Self::Elem) -> Option<Self::Elem>;
}

/// Exact integers; only units are invertible.
#[derive(Debug, Clone, Copy, Default)]
pub struct IntegerDomain;

impl EvalDomain for IntegerDomain {
    type Elem = BigInt;

    fn from_bigint(&self, c: &BigInt) -> BigInt {
        c.clone()
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn invert(&self, a: &BigInt) -> Option<BigInt> {
        if a.magnitude().is_one() {
            Some(a.clone())
        } else {
            None
        }
    }
}

impl EvalDomain for PrimeField {
    type Elem = u64;

    fn from_bigint(&self, c: &BigInt) -> u64 {
        self.reduce_bigint(c)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        PrimeField::add(self, *a, *b)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        PrimeField::mul(self, *a, *b)
    }
    fn neg(&self, a: &u64) -> u64 {
        PrimeField::neg(self, *a)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a % self.modulus() == 0
    }
    fn invert(&self, a: &u64) -> Option<u64> {
        if *a % self.modulus() == 0 {
            None
        } else {
            Some(self.inv(*a))
        }
    }
}

/// A system in extra variables whose solutions project onto those of a
/// source system, together with the bookkeeping needed to evaluate it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedFormulation {
    /// Input variables of the source system, in declaration order.
    pub base_vars: Vec<String>,
    /// Auxiliary variables introduced by the lift, in forward-solvable order.
    pub aux_vars: Vec<String>,
    /// The distinguished output the lift computes.
    pub output_var: String,
    pub system: PolySystem,
}

/// A full assignment produced by evaluating a lift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftEvaluation<E> {
    pub output: E,
    /// Every assigned name, inputs and auxiliaries alike.
    pub values: Vec<(String, E)>,
}

impl LiftedFormulation {
    /// Forward-solves the lift on concrete inputs aligned with `base_vars`,
    /// returning the output value and the full auxiliary assignment.
    pub fn evaluate<D: EvalDomain>(
        &self,
        domain: &D,
        inputs: &[D::Elem],
    ) -> Result<LiftEvaluation<D::Elem>, SystemError> {
        assert_eq!(
            inputs.len(),
            self.base_vars.len(),
            "one input per base variable"
        );
        let given: Vec<(&str, D::Elem)> = self
            .base_vars
            .iter()
            .map(|s| s.as_str())
            .zip(inputs.iter().cloned())
            .collect();
        match self.system.forward_solve(domain, &given)? {
            SolveOutcome::Satisfied { values } => {
                let lookup: HashMap<&str, &D::Elem> =
                    values.iter().map(|(n, v)| (n.as_str(), v)).collect();
                let output = (*lookup
                    .get(self.output_var.as_str())
                    .expect("output variable is assigned by the lift"))
                .clone();
                Ok(LiftEvaluation { output, values })
            }
            SolveOutcome::Violated { equation } => Err(SystemError::Inconsistent { equation }),
        }
    }

    /// Checks that an assignment satisfies every equation of the lift.
    pub fn check_assignment<D: EvalDomain>(
        &self,
        domain: &D,
        values: &[(String, D::Elem)],
    ) -> bool {
        let lookup: HashMap<&str, &D::Elem> =
            values.iter().map(|(n, v)| (n.as_str(), v)).collect();
        self.system.equations().iter().all(|eq| {
            let mut acc = domain.zero();
            for (key, coeff) in eq.terms() {
                let mut term = domain.from_bigint(coeff);
                for &(v, e) in key.pairs() {
                    let Some(val) = lookup.get(self.system.name_of(v)) else {
                        return false;
                    };
                    for _ in 0..e {
                        term = domain.mul(&term, val);
                    }
                }
                acc = domain.add(&acc, &term);
            }
            domain.is_zero(&acc)
        })
    }
}
