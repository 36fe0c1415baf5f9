//! Exact arithmetic in the virtual representation ring of GL(2).
//!
//! A class function is stored as a Laurent polynomial in the two Satake
//! parameters α, β with integer coefficients. Every public constructor
//! enforces invariance under the swap α ↔ β, so decomposition into the
//! Sym–det basis is total. Coefficients are arbitrary-precision integers;
//! this module contains no floating point.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::pole_calculus::Factorization;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RepRingError {
    #[error("coefficient map is not invariant under the swap α ↔ β at α^{0} β^{1}")]
    NotSwapSymmetric(i64, i64),
}

/// Laurent monomial α^i β^j. Exponents may be negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub alpha: i64,
    pub beta: i64,
}

impl Monomial {
    pub fn new(alpha: i64, beta: i64) -> Self {
        Monomial { alpha, beta }
    }

    fn swapped(self) -> Self {
        Monomial { alpha: self.beta, beta: self.alpha }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a^{} b^{}", self.alpha, self.beta)
    }
}

/// The class of Sym^a ⊗ det^b: symmetric-power degree `sym = a ≥ 0` and
/// central twist exponent `det = b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymDetClass {
    pub sym: u32,
    pub det: i64,
}

impl SymDetClass {
    pub fn new(sym: u32, det: i64) -> Self {
        SymDetClass { sym, det }
    }

    /// Dimension of the underlying representation, `a + 1`.
    pub fn dimension(&self) -> u32 {
        self.sym + 1
    }
}

impl fmt::Display for SymDetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.sym, self.det) {
            (0, 0) => write!(f, "1"),
            (0, 1) => write!(f, "det"),
            (0, b) => write!(f, "det^{b}"),
            (a, 0) => write!(f, "Sym{a}"),
            (a, 1) => write!(f, "Sym{a}⊗det"),
            (a, b) => write!(f, "Sym{a}⊗det^{b}"),
        }
    }
}

/// Integer-coefficient class function of GL(2), stored in the monomial
/// basis. Swap symmetry (coefficient of α^i β^j equals coefficient of
/// α^j β^i) is an invariant maintained by every operation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VirtualCharacter {
    coeffs: BTreeMap<Monomial, BigInt>,
}

impl VirtualCharacter {
    pub fn zero() -> Self {
        VirtualCharacter::default()
    }

    /// Character of the trivial representation.
    pub fn one() -> Self {
        VirtualCharacter::sym_det(SymDetClass::new(0, 0))
    }

    /// Character of the standard representation, α + β.
    pub fn standard() -> Self {
        VirtualCharacter::sym_det(SymDetClass::new(1, 0))
    }

    /// Character of `Sym^a ⊗ det^b`: Σ_{u+v=a} α^{u+b} β^{v+b}.
    /// The expansion has exactly `a + 1` monomials.
    pub fn sym_det(class: SymDetClass) -> Self {
        let mut coeffs = BTreeMap::new();
        let a = class.sym as i64;
        for u in 0..=a {
            coeffs.insert(Monomial::new(u + class.det, a - u + class.det), BigInt::one());
        }
        VirtualCharacter { coeffs }
    }

    /// Character of the central twist ω^j, the monomial (αβ)^j.
    pub fn central_power(j: i64) -> Self {
        VirtualCharacter::sym_det(SymDetClass::new(0, j))
    }

    /// Builds a character from raw monomial coefficients, rejecting maps
    /// that are not swap symmetric.
    pub fn from_monomials<I>(entries: I) -> Result<Self, RepRingError>
    where
        I: IntoIterator<Item = (Monomial, BigInt)>,
    {
        let mut coeffs: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in entries {
            if !c.is_zero() {
                *coeffs.entry(m).or_insert_with(BigInt::zero) += c;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        for (m, c) in &coeffs {
            let other = coeffs.get(&m.swapped());
            if other != Some(c) {
                return Err(RepRingError::NotSwapSymmetric(m.alpha, m.beta));
            }
        }
        Ok(VirtualCharacter { coeffs })
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.coeffs.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn monomials(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Value at α = β = 1, the virtual dimension.
    pub fn dimension(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    /// Substitutes α → α⁻¹, β → β⁻¹; an involution.
    pub fn dual(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(m, c)| (Monomial::new(-m.alpha, -m.beta), c.clone()))
            .collect();
        VirtualCharacter { coeffs }
    }

    /// Ring product (tensor product of representations).
    pub fn tensor(&self, other: &Self) -> Self {
        let mut coeffs: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m1, c1) in &self.coeffs {
            for (m2, c2) in &other.coeffs {
                let m = Monomial::new(m1.alpha + m2.alpha, m1.beta + m2.beta);
                let entry = coeffs.entry(m).or_insert_with(BigInt::zero);
                *entry += c1 * c2;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        VirtualCharacter { coeffs }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = VirtualCharacter::one();
        for _ in 0..k {
            acc = acc.tensor(self);
        }
        acc
    }

    /// Writes the character as the unique integer combination of Sym–det
    /// classes. Repeatedly extracts a monomial α^i β^j with i ≥ j and
    /// maximal i − j and subtracts its Sym^{i−j} ⊗ det^j character; swap
    /// symmetry of the input (a type invariant) makes this total.
    /// Multiplicities may be negative.
    pub fn decompose(&self) -> BTreeMap<SymDetClass, BigInt> {
        let mut rest = self.clone();
        let mut out: BTreeMap<SymDetClass, BigInt> = BTreeMap::new();
        while !rest.is_zero() {
            // extremal monomial: maximal i - j, then maximal i for determinism
            let (&m, _) = rest
                .coeffs
                .iter()
                .max_by_key(|(m, _)| (m.alpha - m.beta, m.alpha))
                .expect("nonempty");
            debug_assert!(m.alpha >= m.beta, "swap symmetry guarantees i >= j at the extreme");
            let class = SymDetClass::new((m.alpha - m.beta) as u32, m.beta);
            let coeff = rest.coefficient(&m);
            rest = &rest - &VirtualCharacter::sym_det(class).scale(&coeff);
            *out.entry(class).or_insert_with(BigInt::zero) += coeff;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return VirtualCharacter::zero();
        }
        let coeffs = self.coeffs.iter().map(|(m, v)| (*m, v * c)).collect();
        VirtualCharacter { coeffs }
    }
}

impl Add for &VirtualCharacter {
    type Output = VirtualCharacter;
    fn add(self, rhs: &VirtualCharacter) -> VirtualCharacter {
        let mut coeffs = self.coeffs.clone();
        for (m, c) in &rhs.coeffs {
            let entry = coeffs.entry(*m).or_insert_with(BigInt::zero);
            *entry += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        VirtualCharacter { coeffs }
    }
}

impl Sub for &VirtualCharacter {
    type Output = VirtualCharacter;
    fn sub(self, rhs: &VirtualCharacter) -> VirtualCharacter {
        self + &(-rhs)
    }
}

impl Neg for &VirtualCharacter {
    type Output = VirtualCharacter;
    fn neg(self) -> VirtualCharacter {
        let coeffs = self.coeffs.iter().map(|(m, c)| (*m, -c)).collect();
        VirtualCharacter { coeffs }
    }
}

impl Mul for &VirtualCharacter {
    type Output = VirtualCharacter;
    fn mul(self, rhs: &VirtualCharacter) -> VirtualCharacter {
        self.tensor(rhs)
    }
}

/// Character of π^{⊗m} ⊗ π̄^{⊗n} at an unramified place: by unitarity the
/// conjugate parameters are the inverses twisted back through the central
/// character, so the character is (α+β)^{m+n} (αβ)^{−n}.
pub fn tensor_power_character(m: u32, n: u32) -> VirtualCharacter {
    VirtualCharacter::standard()
        .pow(m + n)
        .tensor(&VirtualCharacter::central_power(-(n as i64)))
}

/// Sym–det multiplicities of π^{⊗m} ⊗ π̄^{⊗n}. For m = n = 0 this is the
/// trivial class with multiplicity one.
pub fn tensor_power(m: u32, n: u32) -> BTreeMap<SymDetClass, BigInt> {
    tensor_power_character(m, n).decompose()
}

/// Outcome of checking a claimed factorization against π^{⊗m} ⊗ π̄^{⊗n}.
/// On mismatch, `difference` holds the Sym–det expansion of
/// (claimed − actual).
#[derive(Debug, Clone)]
pub struct FactorizationCheck {
    pub matches: bool,
    pub difference: BTreeMap<SymDetClass, BigInt>,
}

/// Expands the factorization's character and compares it, exactly, with
/// the character of π^{⊗m} ⊗ π̄^{⊗n}.
pub fn verify_factorization(m: u32, n: u32, f: &Factorization) -> FactorizationCheck {
    let claimed = f.character();
    let target = tensor_power_character(m, n);
    let diff = &claimed - &target;
    FactorizationCheck { matches: diff.is_zero(), difference: diff.decompose() }
}
