//! Certified pole orders at s = 1 for products of incomplete L-functions.
//!
//! Standing hypotheses: π is a unitary cuspidal automorphic representation
//! of GL(2) over a number field, non-self-dual, not of solvable polyhedral
//! type, with central character ω of exact order r ≥ 2. Under these
//! hypotheses Sym²π, Sym³π, Sym⁴π are cuspidal and Sym²π, Sym³π admit no
//! nontrivial self-twist; Sym⁴π may admit one, which is why some products
//! only get a certified interval rather than an exact order.
//!
//! Self-twist knowledge is encoded as data-driven rules per symmetric-power
//! degree, not as a general isomorphism engine.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::rep_ring::{self, SymDetClass, VirtualCharacter};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PoleError {
    #[error("central character order must be at least 2, got {0}")]
    OrderTooSmall(u32),
    #[error("the hypotheses require a non-self-dual representation")]
    SelfDualNotSupported,
    #[error("the hypotheses exclude solvable polyhedral type")]
    SolvablePolyhedralNotSupported,
    #[error("no automorphy axiom is available for Sym^{0}")]
    NoAutomorphyAxiom(u32),
    #[error("invalid L-factor: {0}")]
    InvalidFactor(String),
    #[error("factorization list must be nonempty")]
    EmptyFactorization,
    #[error("factorization does not expand to π^{{×{m}}} × π̄^{{×{n}}}")]
    FactorizationMismatch { m: u32, n: u32 },
    #[error("inconsistent rule set: pole intervals have empty intersection")]
    EmptyIntersection,
    #[error("moment index n = {n} out of range for k = {k}")]
    IndexOutOfRange { k: u32, n: u32 },
}

/// The standing hypotheses, with the exact order of the central character.
/// Construction refuses any configuration other than non-self-dual,
/// non-solvable-polyhedral, r ≥ 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hypotheses {
    r: u32,
}

impl Hypotheses {
    pub fn new(r: u32) -> Result<Self, PoleError> {
        if r < 2 {
            return Err(PoleError::OrderTooSmall(r));
        }
        Ok(Hypotheses { r })
    }

    /// Explicit-flag constructor; both flags must be true.
    pub fn with_flags(
        r: u32,
        non_self_dual: bool,
        not_solvable_polyhedral: bool,
    ) -> Result<Self, PoleError> {
        if !non_self_dual {
            return Err(PoleError::SelfDualNotSupported);
        }
        if !not_solvable_polyhedral {
            return Err(PoleError::SolvablePolyhedralNotSupported);
        }
        Hypotheses::new(r)
    }

    /// Exact order of the central character.
    pub fn order(&self) -> u32 {
        self.r
    }

    /// Whether ω^j is trivial, i.e. r | j.
    pub fn omega_power_trivial(&self, j: i64) -> bool {
        j.rem_euclid(self.r as i64) == 0
    }
}

/// One incomplete L-function factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LFactor {
    /// L^X(s, ω^j), a GL(1) factor.
    Gl1 { omega_exp: i64 },
    /// L^X(s, Sym^a π ⊗ ω^j) with 1 ≤ a ≤ 4.
    CuspTwist { sym: u32, omega_exp: i64 },
    /// L^X(s, Sym^a π × Sym^b π ⊗ ω^j) with a ≥ b ≥ 1.
    RankinSelberg { sym_a: u32, sym_b: u32, omega_exp: i64 },
}

impl LFactor {
    fn validate(&self) -> Result<(), PoleError> {
        match *self {
            LFactor::Gl1 { .. } => Ok(()),
            LFactor::CuspTwist { sym, .. } => {
                if sym == 0 {
                    return Err(PoleError::InvalidFactor("CuspTwist needs sym ≥ 1".into()));
                }
                if sym > 4 {
                    return Err(PoleError::NoAutomorphyAxiom(sym));
                }
                Ok(())
            }
            LFactor::RankinSelberg { sym_a, sym_b, .. } => {
                if sym_b == 0 || sym_a < sym_b {
                    return Err(PoleError::InvalidFactor(
                        "RankinSelberg needs sym_a ≥ sym_b ≥ 1".into(),
                    ));
                }
                if sym_a > 4 {
                    return Err(PoleError::NoAutomorphyAxiom(sym_a));
                }
                Ok(())
            }
        }
    }

    /// Character of the factor as a class function of GL(2), treating ω as
    /// αβ and Sym^a π via its Sym–det character.
    pub fn character(&self) -> VirtualCharacter {
        match *self {
            LFactor::Gl1 { omega_exp } => VirtualCharacter::central_power(omega_exp),
            LFactor::CuspTwist { sym, omega_exp } => {
                VirtualCharacter::sym_det(SymDetClass::new(sym, omega_exp))
            }
            LFactor::RankinSelberg { sym_a, sym_b, omega_exp } => {
                VirtualCharacter::sym_det(SymDetClass::new(sym_a, 0))
                    .tensor(&VirtualCharacter::sym_det(SymDetClass::new(sym_b, 0)))
                    .tensor(&VirtualCharacter::central_power(omega_exp))
            }
        }
    }
}

impl fmt::Display for LFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            LFactor::Gl1 { omega_exp } => write!(f, "L(w^{omega_exp})"),
            LFactor::CuspTwist { sym, omega_exp } => write!(f, "L(Sym{sym} x w^{omega_exp})"),
            LFactor::RankinSelberg { sym_a, sym_b, omega_exp } => {
                write!(f, "L(Sym{sym_a} x Sym{sym_b} x w^{omega_exp})")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightedFactor {
    pub factor: LFactor,
    pub multiplicity: u32,
}

/// A product of L-factors with positive multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<WeightedFactor>,
}

impl Factorization {
    pub fn new(factors: Vec<WeightedFactor>) -> Result<Self, PoleError> {
        if factors.is_empty() {
            return Err(PoleError::EmptyFactorization);
        }
        for wf in &factors {
            wf.factor.validate()?;
            if wf.multiplicity == 0 {
                return Err(PoleError::InvalidFactor("multiplicity must be positive".into()));
            }
        }
        Ok(Factorization { factors })
    }

    pub fn factors(&self) -> &[WeightedFactor] {
        &self.factors
    }

    /// Character of the isobaric sum the product represents: a product of
    /// L-functions adds characters, with multiplicities as coefficients.
    pub fn character(&self) -> VirtualCharacter {
        let mut acc = VirtualCharacter::zero();
        for wf in &self.factors {
            acc = &acc + &wf.factor.character().scale(&BigInt::from(wf.multiplicity));
        }
        acc
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, wf) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " · ")?;
            }
            write!(f, "{}", wf.factor)?;
            if wf.multiplicity > 1 {
                write!(f, "^{}", wf.multiplicity)?;
            }
        }
        Ok(())
    }
}

/// Certified lower/upper bound on the order of the pole at s = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PoleInterval {
    lo: u32,
    hi: u32,
}

impl PoleInterval {
    pub fn new(lo: u32, hi: u32) -> Self {
        assert!(lo <= hi, "pole interval needs lo <= hi");
        PoleInterval { lo, hi }
    }

    pub fn exact(order: u32) -> Self {
        PoleInterval { lo: order, hi: order }
    }

    pub fn lo(&self) -> u32 {
        self.lo
    }

    pub fn hi(&self) -> u32 {
        self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn add(&self, other: &PoleInterval) -> PoleInterval {
        PoleInterval { lo: self.lo + other.lo, hi: self.hi + other.hi }
    }

    pub fn scale(&self, k: u32) -> PoleInterval {
        PoleInterval { lo: self.lo * k, hi: self.hi * k }
    }

    pub fn intersect(&self, other: &PoleInterval) -> Option<PoleInterval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(PoleInterval { lo, hi })
    }
}

impl fmt::Display for PoleInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{},{}]", self.lo, self.hi)
        }
    }
}

/// Pole order at s = 1 of a single factor, scaled by its multiplicity.
///
/// Rules per unit multiplicity:
/// - GL(1): order 1 iff ω^j = 1;
/// - cuspidal twists Sym^a π ⊗ ω^j (a ≤ 4): invertible;
/// - Sym^a × Sym^b ⊗ ω^j with a ≠ b: invertible;
/// - Sym^a × Sym^a ⊗ ω^j with a ≤ 3: simple pole iff r | (j + a)
///   (no nontrivial self-twists at these degrees);
/// - Sym⁴ × Sym⁴ ⊗ ω^j: simple pole if r | (j + 4); a pole cannot be ruled
///   out if r | 5(j + 4); invertible otherwise (central-character
///   comparison is the only available self-twist constraint).
pub fn pole_order_factor(f: &LFactor, h: &Hypotheses) -> Result<PoleInterval, PoleError> {
    f.validate()?;
    let unit = match *f {
        LFactor::Gl1 { omega_exp } => {
            if h.omega_power_trivial(omega_exp) {
                PoleInterval::exact(1)
            } else {
                PoleInterval::exact(0)
            }
        }
        LFactor::CuspTwist { .. } => PoleInterval::exact(0),
        LFactor::RankinSelberg { sym_a, sym_b, omega_exp } => {
            if sym_a != sym_b {
                PoleInterval::exact(0)
            } else if sym_a <= 3 {
                if h.omega_power_trivial(omega_exp + sym_a as i64) {
                    PoleInterval::exact(1)
                } else {
                    PoleInterval::exact(0)
                }
            } else if h.omega_power_trivial(omega_exp + 4) {
                PoleInterval::exact(1)
            } else if h.omega_power_trivial(5 * (omega_exp + 4)) {
                PoleInterval::new(0, 1)
            } else {
                PoleInterval::exact(0)
            }
        }
    };
    Ok(unit)
}

/// Componentwise sum of the factor intervals weighted by multiplicities.
pub fn pole_order_product(f: &Factorization, h: &Hypotheses) -> Result<PoleInterval, PoleError> {
    let mut acc = PoleInterval::exact(0);
    for wf in f.factors() {
        acc = acc.add(&pole_order_factor(&wf.factor, h)?.scale(wf.multiplicity));
    }
    Ok(acc)
}

/// Intersects the pole intervals of several factorizations of the same
/// L-function π^{×m} × π̄^{×n}, after verifying each one exactly.
/// An empty intersection signals an inconsistent rule set.
pub fn reconcile(
    fs: &[Factorization],
    m: u32,
    n: u32,
    h: &Hypotheses,
) -> Result<PoleInterval, PoleError> {
    if fs.is_empty() {
        return Err(PoleError::EmptyFactorization);
    }
    let mut acc: Option<PoleInterval> = None;
    for f in fs {
        if !rep_ring::verify_factorization(m, n, f).matches {
            return Err(PoleError::FactorizationMismatch { m, n });
        }
        let iv = pole_order_product(f, h)?;
        acc = Some(match acc {
            None => iv,
            Some(prev) => prev.intersect(&iv).ok_or(PoleError::EmptyIntersection)?,
        });
    }
    Ok(acc.expect("nonempty"))
}

/// Canonical factorization of π^{×m} × π̄^{×n} by full Clebsch–Gordan
/// decomposition; only valid while every symmetric power that appears is
/// automorphic, i.e. m + n ≤ 4.
pub fn tensor_power_factorization(m: u32, n: u32) -> Result<Factorization, PoleError> {
    let k = m + n;
    if k == 0 || k > 4 {
        return Err(PoleError::IndexOutOfRange { k, n });
    }
    let mut factors = Vec::new();
    for (class, mult) in rep_ring::tensor_power(m, n) {
        let multiplicity = u32::try_from(mult.clone())
            .expect("tensor power multiplicities are positive and small");
        let factor = if class.sym == 0 {
            LFactor::Gl1 { omega_exp: class.det }
        } else {
            LFactor::CuspTwist { sym: class.sym, omega_exp: class.det }
        };
        factors.push(WeightedFactor { factor, multiplicity });
    }
    Factorization::new(factors)
}

/// First sixth-moment factorization of π^{×(6−n)} × π̄^{×n}:
/// (Sym³×Sym³ ⊗ ω^{−n}) (Sym³×π ⊗ ω^{1−n})⁴ (π×π ⊗ ω^{2−n})⁴.
pub fn sixth_moment_first(n: u32) -> Factorization {
    let n = n as i64;
    Factorization::new(vec![
        WeightedFactor {
            factor: LFactor::RankinSelberg { sym_a: 3, sym_b: 3, omega_exp: -n },
            multiplicity: 1,
        },
        WeightedFactor {
            factor: LFactor::RankinSelberg { sym_a: 3, sym_b: 1, omega_exp: 1 - n },
            multiplicity: 4,
        },
        WeightedFactor {
            factor: LFactor::RankinSelberg { sym_a: 1, sym_b: 1, omega_exp: 2 - n },
            multiplicity: 4,
        },
    ])
    .expect("well-formed")
}

/// Second sixth-moment factorization:
/// (Sym⁴×Sym² ⊗ ω^{−n}) (Sym⁴ ⊗ ω^{1−n}) (Sym²×Sym² ⊗ ω^{1−n})³
/// (Sym² ⊗ ω^{2−n})⁵ (ω^{3−n})².
pub fn sixth_moment_second(n: u32) -> Factorization {
    let n = n as i64;
    Factorization::new(vec![
        WeightedFactor {
            factor: LFactor::RankinSelberg { sym_a: 4, sym_b: 2, omega_exp: -n },
            multiplicity: 1,
        },
        WeightedFactor { factor: LFactor::CuspTwist { sym: 4, omega_exp: 1 - n }, multiplicity: 1 },
        WeightedFactor {
            factor: LFactor::RankinSelberg { sym_a: 2, sym_b: 2, omega_exp: 1 - n },
            multiplicity: 3,
        },
        WeightedFactor { factor: LFactor::CuspTwist { sym: 2, omega_exp: 2 - n }, multiplicity: 5 },
        WeightedFactor { factor: LFactor::Gl1 { omega_exp: 3 - n }, multiplicity: 2 },
    ])
    .expect("well-formed")
}

/// Eighth-moment factorization of π^{×8} ⊗ ω^{−n}:
/// (Sym⁴×Sym⁴ ⊗ ω^{−n}) (Sym²×Sym² ⊗ ω^{2−n})⁹ (ω^{4−n})⁴
/// (Sym⁴×Sym² ⊗ ω^{1−n})⁶ (Sym⁴ ⊗ ω^{2−n})⁴ (Sym² ⊗ ω^{3−n})¹².
pub fn eighth_moment_factorization(n: u32) -> Factorization {
    let n = n as i64;
    Factorization::new(vec![
        WeightedFactor {
            factor: LFactor::RankinSelberg { sym_a: 4, sym_b: 4, omega_exp: -n },
            multiplicity: 1,
        },
        WeightedFactor {
            factor: LFactor::RankinSelberg { sym_a: 2, sym_b: 2, omega_exp: 2 - n },
            multiplicity: 9,
        },
        WeightedFactor { factor: LFactor::Gl1 { omega_exp: 4 - n }, multiplicity: 4 },
        WeightedFactor {
            factor: LFactor::RankinSelberg { sym_a: 4, sym_b: 2, omega_exp: 1 - n },
            multiplicity: 6,
        },
        WeightedFactor { factor: LFactor::CuspTwist { sym: 4, omega_exp: 2 - n }, multiplicity: 4 },
        WeightedFactor {
            factor: LFactor::CuspTwist { sym: 2, omega_exp: 3 - n },
            multiplicity: 12,
        },
    ])
    .expect("well-formed")
}

/// Certified pole order of π^{×8} ⊗ ω^{−n} at s = 1, for 0 ≤ n ≤ 8.
/// This is the table driving the eighth-moment constant.
pub fn a_table(n: u32, r: u32) -> Result<PoleInterval, PoleError> {
    if n > 8 {
        return Err(PoleError::IndexOutOfRange { k: 8, n });
    }
    let h = Hypotheses::new(r)?;
    pole_order_product(&eighth_moment_factorization(n), &h)
}

/// Exact pole order of π^{×(k−n)} × π̄^{×n} for the moment degrees
/// k ∈ {3, 4, 6}; these degrees always resolve to a point interval.
pub fn moment_pole(k: u32, n: u32, r: u32) -> Result<PoleInterval, PoleError> {
    if n > k {
        return Err(PoleError::IndexOutOfRange { k, n });
    }
    let h = Hypotheses::new(r)?;
    let iv = match k {
        3 | 4 => pole_order_product(&tensor_power_factorization(k - n, n)?, &h)?,
        6 => reconcile(&[sixth_moment_first(n), sixth_moment_second(n)], 6 - n, n, &h)?,
        _ => return Err(PoleError::IndexOutOfRange { k, n }),
    };
    debug_assert!(iv.is_exact(), "moment degrees up to 6 are exact");
    Ok(iv)
}

/// Sym–det multiplicity table of a factorization, for difference reports.
pub fn symdet_table(f: &Factorization) -> BTreeMap<SymDetClass, BigInt> {
    f.character().decompose()
}
