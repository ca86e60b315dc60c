//! Postcritical-orbit classification of `x^2 + c` and the resulting
//! arithmetic-monodromy description.
//!
//! The forward orbit of the critical point `0` is iterated exactly, over
//! the rationals or a prime field. A finite orbit selects one of the two
//! model families; over the rationals an escape criterion certifies some
//! infinite orbits, and everything else stays honestly unresolved.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::cases::GroupCase;
use crate::catalog::{case_generators, infinite_chain, Catalog};
use crate::error::{Error, Result};
use crate::portrait::{Level, Portrait};
use crate::twoadic::TwoAdic;

/// Base field for the orbit computation, with an optional ambient field
/// size `q = p^e` for cyclotomic evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    PrimeField { p: u64, ambient: Option<u64> },
}

impl FieldSpec {
    pub fn prime_field(p: u64, ambient: Option<u64>) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::Parameter(format!("{p} is not an odd prime")));
        }
        if let Some(q) = ambient {
            let mut rest = q;
            while rest > 1 && rest % p == 0 {
                rest /= p;
            }
            if rest != 1 {
                return Err(Error::Parameter(format!("{q} is not a power of {p}")));
            }
        }
        Ok(FieldSpec::PrimeField { p, ambient })
    }

    /// The cyclotomic evaluation point: the ambient size if given, the
    /// characteristic otherwise.
    pub fn frobenius_size(&self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::PrimeField { p, ambient } => Some(ambient.unwrap_or(*p)),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The constant `c` of `x^2 + c`, as an exact field element.
#[derive(Clone, Debug, PartialEq)]
pub enum FieldValue {
    Rational(BigRational),
    Mod { value: u64, p: u64 },
}

impl FieldValue {
    pub fn rational_int(n: i64) -> Self {
        FieldValue::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn rational(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::FieldParse("zero denominator".into()));
        }
        Ok(FieldValue::Rational(BigRational::new(
            BigInt::from(numer),
            BigInt::from(denom),
        )))
    }

    pub fn modular(value: i64, p: u64) -> Result<Self> {
        FieldSpec::prime_field(p, None)?;
        Ok(FieldValue::Mod {
            value: value.rem_euclid(p as i64) as u64,
            p,
        })
    }

    /// Parse `a`, `a/b`, or `a mod p`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some((a, p)) = text.split_once("mod") {
            let a: i64 = a
                .trim()
                .parse()
                .map_err(|_| Error::FieldParse(text.to_string()))?;
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| Error::FieldParse(text.to_string()))?;
            return FieldValue::modular(a, p);
        }
        if let Some((n, d)) = text.split_once('/') {
            let n: i64 = n
                .trim()
                .parse()
                .map_err(|_| Error::FieldParse(text.to_string()))?;
            let d: i64 = d
                .trim()
                .parse()
                .map_err(|_| Error::FieldParse(text.to_string()))?;
            return FieldValue::rational(n, d);
        }
        let n: i64 = text
            .parse()
            .map_err(|_| Error::FieldParse(text.to_string()))?;
        Ok(FieldValue::rational_int(n))
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            FieldValue::Rational(_) => FieldSpec::Rationals,
            FieldValue::Mod { p, .. } => FieldSpec::PrimeField {
                p: *p,
                ambient: None,
            },
        }
    }
}

/// Classification of the critical orbit. `period` is the full orbit
/// length (number of distinct forward points); in the strictly
/// pre-periodic class the cycle itself has length `period - preperiod`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitClass {
    Periodic { period: u32 },
    StrictlyPrePeriodic { preperiod: u32, period: u32 },
    /// The orbit provably escapes: from `escape_index` on, absolute
    /// values grow strictly.
    InfiniteCertified { escape_index: u32 },
    /// Neither a repeat nor a certified escape within the budget.
    Unresolved { steps: u32 },
}

impl OrbitClass {
    pub fn group_case(&self) -> Result<GroupCase> {
        match *self {
            OrbitClass::Periodic { period } => GroupCase::periodic(period),
            OrbitClass::StrictlyPrePeriodic { preperiod, period } => {
                GroupCase::preperiodic(preperiod, period)
            }
            _ => Err(Error::Unresolved),
        }
    }
}

impl fmt::Display for OrbitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitClass::Periodic { period } => write!(f, "periodic (r={period})"),
            OrbitClass::StrictlyPrePeriodic { preperiod, period } => {
                write!(f, "strictly pre-periodic (s={preperiod}, r={period})")
            }
            OrbitClass::InfiniteCertified { escape_index } => {
                write!(f, "infinite (escape at step {escape_index})")
            }
            OrbitClass::Unresolved { steps } => write!(f, "unresolved after {steps} steps"),
        }
    }
}

/// Budget for the orbit iteration.
#[derive(Clone, Copy, Debug)]
pub struct OrbitOptions {
    pub max_steps: u32,
    /// Bound on numerator-plus-denominator bit size over the rationals.
    pub height_bound: u64,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions {
            max_steps: 256,
            height_bound: 4096,
        }
    }
}

/// Classify the forward orbit `p_1 = c`, `p_(i+1) = p_i^2 + c` of the
/// critical point.
///
/// Over a prime field a repeat always resolves the class. Over the
/// rationals, a repeat gives the finite classes; once `|p_i| >= |c| + 2`
/// the absolute values grow strictly forever, certifying an infinite
/// orbit; otherwise the result is `Unresolved`.
pub fn critical_orbit(c: &FieldValue, opts: &OrbitOptions) -> Result<OrbitClass> {
    if opts.max_steps == 0 {
        return Err(Error::Parameter("max_steps must be positive".into()));
    }
    match c {
        FieldValue::Rational(c) => orbit_rational(c, opts),
        FieldValue::Mod { value, p } => orbit_modular(*value, *p, opts),
    }
}

/// The orbit class together with the finite orbit prefix actually
/// computed (for reports).
fn classify_repeat(first_seen: u32, repeat_at: u32) -> OrbitClass {
    // p_(repeat_at) equals p_(first_seen): the orbit p_1..p_(repeat_at - 1)
    // is distinct, so r = repeat_at - 1 and s = first_seen - 1.
    let r = repeat_at - 1;
    let s = first_seen - 1;
    if s == 0 {
        OrbitClass::Periodic { period: r }
    } else {
        OrbitClass::StrictlyPrePeriodic {
            preperiod: s,
            period: r,
        }
    }
}

fn orbit_rational(c: &BigRational, opts: &OrbitOptions) -> Result<OrbitClass> {
    let escape = c.abs() + BigRational::from_integer(BigInt::from(2));
    let mut seen: HashMap<BigRational, u32> = HashMap::new();
    let mut current = c.clone();
    for i in 1..=opts.max_steps {
        if let Some(&j) = seen.get(&current) {
            return Ok(classify_repeat(j, i));
        }
        if current.abs() >= escape {
            return Ok(OrbitClass::InfiniteCertified { escape_index: i });
        }
        let height = current.numer().bits() + current.denom().bits();
        if height > opts.height_bound {
            return Ok(OrbitClass::Unresolved { steps: i });
        }
        seen.insert(current.clone(), i);
        current = &current * &current + c;
    }
    Ok(OrbitClass::Unresolved {
        steps: opts.max_steps,
    })
}

fn orbit_modular(c: u64, p: u64, opts: &OrbitOptions) -> Result<OrbitClass> {
    FieldSpec::prime_field(p, None)?;
    let step = |x: u64| -> u64 { ((x as u128 * x as u128 + c as u128) % p as u128) as u64 };
    let mut seen: HashMap<u64, u32> = HashMap::new();
    let mut current = c;
    for i in 1..=opts.max_steps {
        if let Some(&j) = seen.get(&current) {
            return Ok(classify_repeat(j, i));
        }
        seen.insert(current, i);
        current = step(current);
    }
    Ok(OrbitClass::Unresolved {
        steps: opts.max_steps,
    })
}

/// The model group selected by an orbit class.
pub enum ModelGroup {
    /// Finite orbit: one of the two families.
    Case { case: GroupCase, catalog: Catalog },
    /// Certified infinite orbit: the sign-chain generators, which
    /// generate the full group at every level up to the chain length.
    FullTree { catalog: Catalog },
}

impl ModelGroup {
    pub fn catalog(&self) -> &Catalog {
        match self {
            ModelGroup::Case { catalog, .. } => catalog,
            ModelGroup::FullTree { catalog } => catalog,
        }
    }
}

/// Model generators for a classified orbit. `chain_len` bounds the
/// generator chain in the infinite case.
pub fn model_generators(orbit: &OrbitClass, chain_len: u32) -> Result<ModelGroup> {
    match orbit {
        OrbitClass::Periodic { .. } | OrbitClass::StrictlyPrePeriodic { .. } => {
            let case = orbit.group_case()?;
            Ok(ModelGroup::Case {
                case,
                catalog: case_generators(&case)?,
            })
        }
        OrbitClass::InfiniteCertified { .. } => Ok(ModelGroup::FullTree {
            catalog: infinite_chain(chain_len)?,
        }),
        OrbitClass::Unresolved { .. } => Err(Error::Unresolved),
    }
}

/// The canonical odometer of the model group: the inverse of the ordered
/// product of all generators. In the infinite case the product is cut at
/// the level, beyond which further factors act trivially.
pub fn b_infinity(orbit: &OrbitClass, level: Level) -> Result<Portrait> {
    match orbit {
        OrbitClass::Periodic { .. } | OrbitClass::StrictlyPrePeriodic { .. } => {
            let model = model_generators(orbit, 1)?;
            Ok(model.catalog().eval("a0", level)?.inverse())
        }
        OrbitClass::InfiniteCertified { .. } => {
            let count = level.get().max(1);
            let chain = infinite_chain(count)?;
            let mut product = Portrait::identity(level);
            for g in chain.generators(level)? {
                product = product.compose(&g)?;
            }
            Ok(product.inverse())
        }
        OrbitClass::Unresolved { .. } => Err(Error::Unresolved),
    }
}

/// A coset of the model group inside its normalizer, i.e. one value of
/// the arithmetic-over-geometric quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CosetLabel {
    /// Periodic family: the diagonal tuple `(k, ..., k)` of a unit.
    Diagonal { arity: u32, value: TwoAdic },
    /// Infinite dihedral family: a unit up to sign.
    UnitModSign { value: TwoAdic },
    /// Pre-periodic families with `r >= 3`: a head of explicit bits
    /// followed by an eventually-constant tail bit.
    BitPattern { head: Vec<bool>, tail: bool },
}

impl CosetLabel {
    fn canonical(self) -> Self {
        match self {
            CosetLabel::UnitModSign { value } => {
                let neg = value.neg();
                let canonical = if neg.residue() < value.residue() {
                    neg
                } else {
                    value
                };
                CosetLabel::UnitModSign { value: canonical }
            }
            CosetLabel::BitPattern { mut head, tail } => {
                while head.last() == Some(&tail) {
                    head.pop();
                }
                CosetLabel::BitPattern { head, tail }
            }
            other => other,
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            CosetLabel::Diagonal { value, .. } => value.residue() == 1,
            CosetLabel::UnitModSign { value } => {
                value.residue() == 1 || value.neg().residue() == 1
            }
            CosetLabel::BitPattern { head, tail } => {
                !*tail && head.iter().all(|b| !b)
            }
        }
    }

    /// Group law of the quotient: labels multiply pointwise.
    pub fn combine(&self, other: &CosetLabel) -> Result<CosetLabel> {
        match (self, other) {
            (
                CosetLabel::Diagonal { arity: a, value: x },
                CosetLabel::Diagonal { arity: b, value: y },
            ) if a == b => Ok(CosetLabel::Diagonal {
                arity: *a,
                value: x.mul(y),
            }),
            (CosetLabel::UnitModSign { value: x }, CosetLabel::UnitModSign { value: y }) => {
                Ok(CosetLabel::UnitModSign { value: x.mul(y) }.canonical())
            }
            (
                CosetLabel::BitPattern { head: h1, tail: t1 },
                CosetLabel::BitPattern { head: h2, tail: t2 },
            ) => {
                let len = h1.len().max(h2.len());
                let bit = |h: &Vec<bool>, t: bool, i: usize| *h.get(i).unwrap_or(&t);
                let head = (0..len)
                    .map(|i| bit(h1, *t1, i) ^ bit(h2, *t2, i))
                    .collect();
                Ok(CosetLabel::BitPattern {
                    head,
                    tail: t1 ^ t2,
                }
                .canonical())
            }
            _ => Err(Error::Parameter("labels belong to different quotients".into())),
        }
    }
}

impl fmt::Display for CosetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CosetLabel::Diagonal { arity, value } => {
                write!(f, "diag_{arity}({value})")
            }
            CosetLabel::UnitModSign { value } => write!(f, "±{value}"),
            CosetLabel::BitPattern { head, tail } => {
                write!(f, "(")?;
                for b in head {
                    write!(f, "{}", *b as u8)?;
                }
                write!(f, "; {}...)", *tail as u8)
            }
        }
    }
}

/// Diagonal label of the periodic family.
pub fn periodic_coset_label(r: u32, k: &TwoAdic) -> Result<CosetLabel> {
    if r == 0 {
        return Err(Error::Parameter("period must be at least 1".into()));
    }
    if !k.is_unit() {
        return Err(Error::EvenOperand);
    }
    Ok(CosetLabel::Diagonal {
        arity: r,
        value: *k,
    })
}

/// Label of the pre-periodic family at a unit `k`: the two unit
/// characters arranged by subcase.
pub fn prep_coset_label(s: u32, r: u32, k: &TwoAdic) -> Result<CosetLabel> {
    GroupCase::preperiodic(s, r)?;
    if !k.is_unit() {
        return Err(Error::EvenOperand);
    }
    let label = if s == 1 && r == 2 {
        CosetLabel::UnitModSign { value: *k }
    } else if s >= 2 && r >= 4 {
        CosetLabel::BitPattern {
            head: Vec::new(),
            tail: k.theta1()?,
        }
    } else if s == 1 {
        CosetLabel::BitPattern {
            head: Vec::new(),
            tail: k.theta2()?,
        }
    } else {
        // s = 2, r = 3
        CosetLabel::BitPattern {
            head: vec![k.theta1()?],
            tail: k.theta2()?,
        }
    };
    Ok(label.canonical())
}

/// Shape of the normalizer-over-group quotient for a model case.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonodromyStructure {
    /// Periodic: the unit group embedded diagonally, one factor per
    /// generator.
    DiagonalUnits { arity: u32 },
    /// `(1,2)`: units modulo sign.
    UnitsModSign,
    /// Pre-periodic, `r >= 3`: an infinite product of order-2 groups,
    /// entered through the stated character pattern.
    BitProduct { pattern: ThetaPattern },
    /// Infinite orbit: the model group is already everything.
    FullTree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaPattern {
    ConstantTheta1,
    ConstantTheta2,
    HeadTheta1TailTheta2,
}

impl fmt::Display for MonodromyStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonodromyStructure::DiagonalUnits { arity } => {
                write!(f, "(Z2^x)^{arity} diagonal")
            }
            MonodromyStructure::UnitsModSign => write!(f, "Z2^x/{{±1}}"),
            MonodromyStructure::BitProduct { pattern } => {
                let p = match pattern {
                    ThetaPattern::ConstantTheta1 => "theta1 constant",
                    ThetaPattern::ConstantTheta2 => "theta2 constant",
                    ThetaPattern::HeadTheta1TailTheta2 => "theta1 head, theta2 tail",
                };
                write!(f, "prod F2 with {p}")
            }
            MonodromyStructure::FullTree => write!(f, "full tree group"),
        }
    }
}

/// Bound on the arithmetic-over-geometric index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexBound {
    Divides(u32),
    /// The quotient can be infinite; its exact size over a given base
    /// field is out of computational scope.
    OutOfScope,
}

/// The reported label: a concrete coset for a supplied cyclotomic value,
/// or the full character image over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabelReport {
    Value(CosetLabel),
    FullImage(&'static str),
}

/// Arithmetic-monodromy description of a classified orbit.
#[derive(Clone, Debug)]
pub struct ArithReport {
    pub orbit: OrbitClass,
    pub case: Option<GroupCase>,
    pub structure: MonodromyStructure,
    pub label: LabelReport,
    pub index_bound: IndexBound,
}

/// Assemble the arithmetic description: the quotient structure for the
/// case, the coset label of the Frobenius cyclotomic value over a finite
/// field (or the full image over the rationals), and the case's index
/// bound.
pub fn arith_description(
    orbit: &OrbitClass,
    field: &FieldSpec,
    precision: u32,
) -> Result<ArithReport> {
    let frobenius = field
        .frobenius_size()
        .map(|q| TwoAdic::new(q as i64, precision))
        .transpose()?;
    match orbit {
        OrbitClass::Unresolved { .. } => Err(Error::Unresolved),
        OrbitClass::InfiniteCertified { .. } => Ok(ArithReport {
            orbit: orbit.clone(),
            case: None,
            structure: MonodromyStructure::FullTree,
            label: LabelReport::FullImage("trivial quotient: the group is everything"),
            index_bound: IndexBound::Divides(1),
        }),
        OrbitClass::Periodic { period } => {
            let label = match frobenius {
                Some(q) => LabelReport::Value(periodic_coset_label(*period, &q)?),
                None => LabelReport::FullImage("all diagonal unit tuples"),
            };
            Ok(ArithReport {
                orbit: orbit.clone(),
                case: Some(orbit.group_case()?),
                structure: MonodromyStructure::DiagonalUnits { arity: *period },
                label,
                index_bound: IndexBound::OutOfScope,
            })
        }
        OrbitClass::StrictlyPrePeriodic { preperiod, period } => {
            let s = *preperiod;
            let r = *period;
            let (structure, bound, full) = if s == 1 && r == 2 {
                (
                    MonodromyStructure::UnitsModSign,
                    IndexBound::OutOfScope,
                    "all units modulo sign",
                )
            } else if s >= 2 && r >= 4 {
                (
                    MonodromyStructure::BitProduct {
                        pattern: ThetaPattern::ConstantTheta1,
                    },
                    IndexBound::Divides(2),
                    "both constant patterns (theta1 image)",
                )
            } else if s == 1 {
                (
                    MonodromyStructure::BitProduct {
                        pattern: ThetaPattern::ConstantTheta2,
                    },
                    IndexBound::Divides(2),
                    "both constant patterns (theta2 image)",
                )
            } else {
                (
                    MonodromyStructure::BitProduct {
                        pattern: ThetaPattern::HeadTheta1TailTheta2,
                    },
                    IndexBound::Divides(4),
                    "all four head/tail patterns (theta1, theta2 image)",
                )
            };
            let label = match frobenius {
                Some(q) => LabelReport::Value(prep_coset_label(s, r, &q)?),
                None => LabelReport::FullImage(full),
            };
            Ok(ArithReport {
                orbit: orbit.clone(),
                case: Some(orbit.group_case()?),
                structure,
                label,
                index_bound: bound,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugacy::is_odometer_to_level;

    fn classify(c: &FieldValue) -> OrbitClass {
        critical_orbit(c, &OrbitOptions::default()).unwrap()
    }

    fn level(n: u32) -> Level {
        Level::new(n).unwrap()
    }

    fn unit(k: i64) -> TwoAdic {
        TwoAdic::new(k, 16).unwrap()
    }

    #[test]
    fn classification_examples() {
        assert_eq!(
            classify(&FieldValue::rational_int(0)),
            OrbitClass::Periodic { period: 1 }
        );
        assert_eq!(
            classify(&FieldValue::rational_int(-1)),
            OrbitClass::Periodic { period: 2 }
        );
        assert_eq!(
            classify(&FieldValue::rational_int(-2)),
            OrbitClass::StrictlyPrePeriodic {
                preperiod: 1,
                period: 2
            }
        );
        assert_eq!(
            classify(&FieldValue::modular(1, 3).unwrap()),
            OrbitClass::StrictlyPrePeriodic {
                preperiod: 1,
                period: 2
            }
        );
        // c = 1 escapes at p_3 = 5 >= |c| + 2 = 3.
        assert_eq!(
            classify(&FieldValue::rational_int(1)),
            OrbitClass::InfiniteCertified { escape_index: 3 }
        );
    }

    #[test]
    fn reported_cycles_satisfy_the_recurrence() {
        // Recompute the orbit for classified rational inputs and confirm
        // p_(r+1) = p_(s+1) with p_1..p_r distinct.
        for c_int in [-2i64, -1, 0] {
            let c = BigRational::from_integer(BigInt::from(c_int));
            let class = classify(&FieldValue::rational_int(c_int));
            let (s, r) = match class {
                OrbitClass::Periodic { period } => (0, period),
                OrbitClass::StrictlyPrePeriodic { preperiod, period } => (preperiod, period),
                _ => panic!("expected finite class"),
            };
            let mut orbit = vec![c.clone()];
            for _ in 1..=r {
                let last = orbit.last().unwrap();
                orbit.push(last * last + &c);
            }
            // orbit[i] = p_(i+1); p_(r+1) = p_(s+1)
            assert_eq!(orbit[r as usize], orbit[s as usize]);
            for i in 0..r as usize {
                for j in 0..i {
                    assert_ne!(orbit[i], orbit[j], "orbit not distinct");
                }
            }
        }
    }

    #[test]
    fn escape_growth_is_monotone() {
        for c_int in [1i64, 2, 7, -5] {
            let c = BigRational::from_integer(BigInt::from(c_int));
            let class = classify(&FieldValue::rational_int(c_int));
            let OrbitClass::InfiniteCertified { escape_index } = class else {
                panic!("expected escape for c = {c_int}");
            };
            let mut current = c.clone();
            for _ in 1..escape_index {
                current = &current * &current + &c;
            }
            let mut prev = current.abs();
            for _ in 0..10 {
                current = &current * &current + &c;
                let mag = current.abs();
                assert!(mag > prev);
                prev = mag;
            }
        }
    }

    #[test]
    fn quarter_remains_unresolved() {
        // c = 1/4 converges to 1/2 from below: no repeat, no escape.
        let c = FieldValue::rational(1, 4).unwrap();
        let class = critical_orbit(
            &c,
            &OrbitOptions {
                max_steps: 50,
                height_bound: 2048,
            },
        )
        .unwrap();
        assert!(matches!(class, OrbitClass::Unresolved { .. }));
    }

    #[test]
    fn modular_orbits_always_resolve() {
        for p in [3u64, 5, 7, 11, 13] {
            for c in 0..p {
                let class = critical_orbit(
                    &FieldValue::Mod { value: c, p },
                    &OrbitOptions {
                        max_steps: (p + 2) as u32,
                        height_bound: 64,
                    },
                )
                .unwrap();
                assert!(
                    matches!(
                        class,
                        OrbitClass::Periodic { .. } | OrbitClass::StrictlyPrePeriodic { .. }
                    ),
                    "c={c} mod {p}"
                );
            }
        }
    }

    #[test]
    fn parsing_constants() {
        assert_eq!(
            FieldValue::parse("-1").unwrap(),
            FieldValue::rational_int(-1)
        );
        assert_eq!(
            FieldValue::parse("1/4").unwrap(),
            FieldValue::rational(1, 4).unwrap()
        );
        assert_eq!(
            FieldValue::parse("1 mod 3").unwrap(),
            FieldValue::Mod { value: 1, p: 3 }
        );
        assert!(FieldValue::parse("x").is_err());
        assert!(FieldValue::parse("1 mod 4").is_err());
        assert!(FieldValue::parse("1/0").is_err());
    }

    #[test]
    fn model_group_selection() {
        let periodic = OrbitClass::Periodic { period: 2 };
        match model_generators(&periodic, 8).unwrap() {
            ModelGroup::Case { case, .. } => {
                assert_eq!(case, GroupCase::periodic(2).unwrap())
            }
            _ => panic!(),
        }
        let prep = OrbitClass::StrictlyPrePeriodic {
            preperiod: 1,
            period: 3,
        };
        match model_generators(&prep, 8).unwrap() {
            ModelGroup::Case { case, .. } => {
                assert_eq!(case, GroupCase::preperiodic(1, 3).unwrap())
            }
            _ => panic!(),
        }
        let infinite = OrbitClass::InfiniteCertified { escape_index: 3 };
        assert!(matches!(
            model_generators(&infinite, 8).unwrap(),
            ModelGroup::FullTree { .. }
        ));
        assert!(model_generators(&OrbitClass::Unresolved { steps: 5 }, 8).is_err());
    }

    #[test]
    fn b_infinity_is_an_odometer() {
        let classes = [
            OrbitClass::Periodic { period: 1 },
            OrbitClass::Periodic { period: 2 },
            OrbitClass::StrictlyPrePeriodic {
                preperiod: 2,
                period: 5,
            },
            OrbitClass::InfiniteCertified { escape_index: 3 },
        ];
        for class in &classes {
            let b = b_infinity(class, level(6)).unwrap();
            assert!(is_odometer_to_level(&b), "{class}");
        }
        // Single generator: the inverse of the adding machine itself.
        let b = b_infinity(&OrbitClass::Periodic { period: 1 }, level(5)).unwrap();
        let machine = crate::catalog::standard_odometer()
            .eval("a", level(5))
            .unwrap();
        assert_eq!(b, machine.inverse());
    }

    #[test]
    fn label_examples() {
        // (2,4), k=3: constant theta1(3) = 1.
        assert_eq!(
            prep_coset_label(2, 4, &unit(3)).unwrap(),
            CosetLabel::BitPattern {
                head: vec![],
                tail: true
            }
        );
        // (1,3), k=7: theta2(7) = 0, so the label is trivial.
        let label = prep_coset_label(1, 3, &unit(7)).unwrap();
        assert!(label.is_trivial());
        // (2,3), k=3: head theta1(3) = 1, tail theta2(3) = 1.
        assert_eq!(
            prep_coset_label(2, 3, &unit(3)).unwrap(),
            CosetLabel::BitPattern {
                head: vec![],
                tail: true
            }
        );
        // ...which canonicalizes the head away; k=5 separates them.
        assert_eq!(
            prep_coset_label(2, 3, &unit(5)).unwrap(),
            CosetLabel::BitPattern {
                head: vec![false],
                tail: true
            }
        );
        // Periodic diagonal.
        assert_eq!(
            periodic_coset_label(3, &unit(5)).unwrap(),
            CosetLabel::Diagonal {
                arity: 3,
                value: unit(5)
            }
        );
        assert!(periodic_coset_label(3, &unit(1)).unwrap().is_trivial());
        assert!(periodic_coset_label(3, &unit(4)).is_err());
    }

    #[test]
    fn labels_are_homomorphisms() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let k1 = unit(rng.gen_range(0..1 << 12) * 2 + 1);
            let k2 = unit(rng.gen_range(0..1 << 12) * 2 + 1);
            let k12 = k1.mul(&k2);
            // Periodic diagonal.
            let l1 = periodic_coset_label(3, &k1).unwrap();
            let l2 = periodic_coset_label(3, &k2).unwrap();
            assert_eq!(
                l1.combine(&l2).unwrap(),
                periodic_coset_label(3, &k12).unwrap()
            );
            // Each pre-periodic branch.
            for (s, r) in [(2u32, 4u32), (1, 3), (2, 3), (1, 2)] {
                let l1 = prep_coset_label(s, r, &k1).unwrap();
                let l2 = prep_coset_label(s, r, &k2).unwrap();
                assert_eq!(
                    l1.combine(&l2).unwrap(),
                    prep_coset_label(s, r, &k12).unwrap(),
                    "branch ({s},{r})"
                );
            }
        }
    }

    #[test]
    fn theta_kernel_facts_mod_sixteen() {
        for kk in (1i64..16).step_by(2) {
            let k = TwoAdic::new(kk, 4).unwrap();
            // s >= 2, r >= 4: trivial iff k = 1 mod 4.
            assert_eq!(
                prep_coset_label(2, 4, &k).unwrap().is_trivial(),
                kk.rem_euclid(4) == 1
            );
            // s = 1, r >= 3: trivial iff k = ±1 mod 8.
            let m8 = kk.rem_euclid(8);
            assert_eq!(
                prep_coset_label(1, 3, &k).unwrap().is_trivial(),
                m8 == 1 || m8 == 7
            );
            // (2,3): trivial iff k = 1 mod 8.
            assert_eq!(
                prep_coset_label(2, 3, &k).unwrap().is_trivial(),
                m8 == 1
            );
        }
    }

    #[test]
    fn arith_report_examples() {
        // c = -2 over the ambient field of size 49: dihedral case, label
        // 49 modulo sign.
        let orbit = classify(&FieldValue::modular(-2, 7).unwrap());
        assert_eq!(
            orbit,
            OrbitClass::StrictlyPrePeriodic {
                preperiod: 1,
                period: 2
            }
        );
        let field = FieldSpec::prime_field(7, Some(49)).unwrap();
        let report = arith_description(&orbit, &field, 16).unwrap();
        assert_eq!(report.structure, MonodromyStructure::UnitsModSign);
        assert_eq!(report.index_bound, IndexBound::OutOfScope);
        match report.label {
            LabelReport::Value(CosetLabel::UnitModSign { value }) => {
                assert_eq!(value.residue(), 49)
            }
            other => panic!("unexpected label {other:?}"),
        }

        // A (2,3)-type orbit over the field of size 9: 9 = 1 mod 8, so
        // the label is trivial and the arithmetic group equals the model.
        let orbit = OrbitClass::StrictlyPrePeriodic {
            preperiod: 2,
            period: 3,
        };
        let field = FieldSpec::prime_field(3, Some(9)).unwrap();
        let report = arith_description(&orbit, &field, 16).unwrap();
        assert_eq!(report.index_bound, IndexBound::Divides(4));
        match report.label {
            LabelReport::Value(label) => assert!(label.is_trivial()),
            other => panic!("unexpected label {other:?}"),
        }

        // Infinite orbit: the full tree group.
        let orbit = OrbitClass::InfiniteCertified { escape_index: 3 };
        let report = arith_description(&orbit, &FieldSpec::Rationals, 16).unwrap();
        assert_eq!(report.structure, MonodromyStructure::FullTree);
        assert_eq!(report.index_bound, IndexBound::Divides(1));

        // Index bounds for the remaining branches.
        let orbit = OrbitClass::StrictlyPrePeriodic {
            preperiod: 2,
            period: 4,
        };
        let report = arith_description(&orbit, &FieldSpec::Rationals, 16).unwrap();
        assert_eq!(report.index_bound, IndexBound::Divides(2));
        let orbit = OrbitClass::StrictlyPrePeriodic {
            preperiod: 1,
            period: 3,
        };
        let report = arith_description(&orbit, &FieldSpec::Rationals, 16).unwrap();
        assert_eq!(report.index_bound, IndexBound::Divides(2));
        let report =
            arith_description(&OrbitClass::Periodic { period: 2 }, &FieldSpec::Rationals, 16)
                .unwrap();
        assert_eq!(report.index_bound, IndexBound::OutOfScope);
        assert!(arith_description(
            &OrbitClass::Unresolved { steps: 3 },
            &FieldSpec::Rationals,
            16
        )
        .is_err());
    }

    #[test]
    fn field_validation() {
        assert!(FieldSpec::prime_field(2, None).is_err());
        assert!(FieldSpec::prime_field(9, None).is_err());
        assert!(FieldSpec::prime_field(7, Some(48)).is_err());
        assert!(FieldSpec::prime_field(7, Some(343)).is_ok());
    }
}
