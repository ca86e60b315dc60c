//! Named recursion systems: model-group generators for both orbit
//! families, the adding machine with its unit-power conjugators, the
//! sign-chain generators of the full group, and the explicit normalizer
//! elements of each family.

use std::collections::BTreeMap;

use crate::cases::GroupCase;
use crate::error::{Error, Result};
use crate::portrait::{Level, Portrait};
use crate::recursion::{define_system, EquationSpec, RecursionSystem, WordSpec};
use crate::twoadic::TwoAdic;

/// A recursion system plus its distinguished symbols: `primary` names the
/// generator tuple in order, `derived` holds named product words (for
/// elements that are products rather than single symbols).
pub struct Catalog {
    pub system: RecursionSystem,
    pub primary: Vec<String>,
    pub derived: BTreeMap<String, WordSpec>,
}

impl Catalog {
    fn new(specs: Vec<EquationSpec>, primary: Vec<String>) -> Result<Self> {
        Ok(Catalog {
            system: define_system(&specs)?,
            primary,
            derived: BTreeMap::new(),
        })
    }

    fn with_derived(mut self, name: &str, word: WordSpec) -> Self {
        self.derived.insert(name.to_string(), word);
        self
    }

    /// Evaluate a primary symbol, any other system symbol, or a derived
    /// word by name.
    pub fn eval(&self, name: &str, level: Level) -> Result<Portrait> {
        if self.system.has_symbol(name) {
            return self.system.evaluate(name, level);
        }
        if let Some(word) = self.derived.get(name) {
            return self.system.evaluate_word(word, level);
        }
        Err(Error::UnknownSymbol(name.to_string()))
    }

    /// The generator tuple restricted to `T_n`.
    pub fn generators(&self, level: Level) -> Result<Vec<Portrait>> {
        self.primary
            .iter()
            .map(|name| self.system.evaluate(name, level))
            .collect()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.primary
    }
}

fn gen_name(i: u32) -> String {
    format!("a{i}")
}

/// The adding machine `a = (a, 1) s`.
pub fn standard_odometer() -> Catalog {
    Catalog::new(
        vec![EquationSpec::new(
            "a",
            WordSpec::gen("a"),
            WordSpec::empty(),
            true,
        )],
        vec!["a".to_string()],
    )
    .expect("fixed system is valid")
}

/// The adding machine together with the element `z = (z, a^((k-1)/2) z)`
/// conjugating it to its `k`-th power, for odd `k`.
pub fn odometer_power_conjugator(k: TwoAdic) -> Result<Catalog> {
    let ell = k.half_less_one()?;
    Catalog::new(
        vec![
            EquationSpec::new("a", WordSpec::gen("a"), WordSpec::empty(), true),
            EquationSpec::new(
                "z",
                WordSpec::gen("z"),
                WordSpec::empty().then_pow("a", ell).then("z"),
                false,
            ),
        ],
        vec!["a".to_string(), "z".to_string()],
    )
}

/// Periodic-family generators: `a1 = (ar, 1) s`, `ai = (a(i-1), 1)`.
/// The derived word `a0` is the full product `a1 a2 ... ar`, a canonical
/// odometer in the group.
pub fn periodic_generators(r: u32) -> Result<Catalog> {
    if r == 0 {
        return Err(Error::Parameter("period must be at least 1".into()));
    }
    let mut specs = vec![EquationSpec::new(
        "a1",
        WordSpec::gen(&gen_name(r)),
        WordSpec::empty(),
        true,
    )];
    for i in 2..=r {
        specs.push(EquationSpec::new(
            &gen_name(i),
            WordSpec::gen(&gen_name(i - 1)),
            WordSpec::empty(),
            false,
        ));
    }
    let primary = (1..=r).map(gen_name).collect();
    let mut product = WordSpec::empty();
    for i in 1..=r {
        product = product.then(&gen_name(i));
    }
    Ok(Catalog::new(specs, primary)?.with_derived("a0", product))
}

/// Strictly pre-periodic generators: `a1 = s`, `a(s+1) = (as, ar)`,
/// `ai = (a(i-1), 1)` otherwise. The derived word `a0` is the full
/// product.
pub fn preperiodic_generators(s: u32, r: u32) -> Result<Catalog> {
    GroupCase::preperiodic(s, r)?;
    let mut specs = vec![EquationSpec::new(
        "a1",
        WordSpec::empty(),
        WordSpec::empty(),
        true,
    )];
    for i in 2..=r {
        if i == s + 1 {
            specs.push(EquationSpec::new(
                &gen_name(i),
                WordSpec::gen(&gen_name(s)),
                WordSpec::gen(&gen_name(r)),
                false,
            ));
        } else {
            specs.push(EquationSpec::new(
                &gen_name(i),
                WordSpec::gen(&gen_name(i - 1)),
                WordSpec::empty(),
                false,
            ));
        }
    }
    let primary = (1..=r).map(gen_name).collect();
    let mut product = WordSpec::empty();
    for i in 1..=r {
        product = product.then(&gen_name(i));
    }
    Ok(Catalog::new(specs, primary)?.with_derived("a0", product))
}

/// Generators for either orbit family.
pub fn case_generators(case: &GroupCase) -> Result<Catalog> {
    match *case {
        GroupCase::Periodic { period } => periodic_generators(period),
        GroupCase::PrePeriodic { preperiod, period } => {
            preperiodic_generators(preperiod, period)
        }
    }
}

/// The chain `b1 = s`, `bi = (b(i-1), 1)`: `sgn_n(bi) = -1` exactly when
/// `n = i`, so together they surject onto every finite sign group.
pub fn infinite_chain(count: u32) -> Result<Catalog> {
    if count == 0 {
        return Err(Error::Parameter("chain needs at least one element".into()));
    }
    let name = |i: u32| format!("b{i}");
    let mut specs = vec![EquationSpec::new(
        "b1",
        WordSpec::empty(),
        WordSpec::empty(),
        true,
    )];
    for i in 2..=count {
        specs.push(EquationSpec::new(
            &name(i),
            WordSpec::gen(&name(i - 1)),
            WordSpec::empty(),
            false,
        ));
    }
    Catalog::new(specs, (1..=count).map(name).collect())
}

/// Periodic-family normalizer representatives: given odd `k_0..k_(r-1)`,
/// the elements `w_i = (w_(i-1), ar^((k_(1-i)-1)/2) w_(i-1))` (indices mod
/// `r`) satisfy `w_i a_j w_i^-1 = a_j^(k_(j-i))`.
pub fn periodic_normalizer(r: u32, ks: &[TwoAdic]) -> Result<Catalog> {
    if ks.len() != r as usize {
        return Err(Error::Parameter(format!(
            "need exactly {r} unit parameters, got {}",
            ks.len()
        )));
    }
    let ells: Vec<TwoAdic> = ks
        .iter()
        .map(|k| k.half_less_one())
        .collect::<Result<_>>()?;
    let base = periodic_generators(r)?;
    let mut specs = catalog_specs(&base)?;
    let w = |i: u32| format!("w{i}");
    let ar = gen_name(r);
    for i in 0..r {
        let prev = w((i + r - 1) % r);
        let ell = ells[((1 + r - (i % r)) % r) as usize];
        specs.push(EquationSpec::new(
            &w(i),
            WordSpec::gen(&prev),
            WordSpec::empty().then_pow(&ar, ell).then(&prev),
            false,
        ));
    }
    let primary = base.primary.clone();
    Ok(Catalog::new(specs, primary)?.with_derived("a0", base.derived["a0"].clone()))
}

/// Pre-periodic-family normalizer chain for `r >= 3`: `w1` is `(as, as)`
/// when `s >= 2` and `r >= 4`, and `(1, (as ar)^2)` otherwise; each later
/// element doubles down diagonally, `w(i+1) = (wi, wi)`.
pub fn prep_w_chain(s: u32, r: u32, count: u32) -> Result<Catalog> {
    GroupCase::preperiodic(s, r)?;
    if r < 3 {
        return Err(Error::Parameter(
            "the w-chain needs r >= 3; the (1,2) normalizer is dihedral_power_conjugator".into(),
        ));
    }
    if count == 0 {
        return Err(Error::Parameter("chain needs at least one element".into()));
    }
    let base = preperiodic_generators(s, r)?;
    let mut specs = catalog_specs(&base)?;
    let a_s = gen_name(s);
    let a_r = gen_name(r);
    let w = |i: u32| format!("w{i}");
    let w1 = if s >= 2 && r >= 4 {
        EquationSpec::new("w1", WordSpec::gen(&a_s), WordSpec::gen(&a_s), false)
    } else {
        let square = WordSpec::gen(&a_s).then(&a_r).then(&a_s).then(&a_r);
        EquationSpec::new("w1", WordSpec::empty(), square, false)
    };
    specs.push(w1);
    for i in 2..=count {
        specs.push(EquationSpec::new(
            &w(i),
            WordSpec::gen(&w(i - 1)),
            WordSpec::gen(&w(i - 1)),
            false,
        ));
    }
    let primary = base.primary.clone();
    Ok(Catalog::new(specs, primary)?.with_derived("a0", base.derived["a0"].clone()))
}

/// The extra normalizer generator of the `(2,3)` family:
/// `w0 = (a2 w0, a3 w0)`.
pub fn prep_w0() -> Result<Catalog> {
    let base = preperiodic_generators(2, 3)?;
    let mut specs = catalog_specs(&base)?;
    specs.push(EquationSpec::new(
        "w0",
        WordSpec::gen("a2").then("w0"),
        WordSpec::gen("a3").then("w0"),
        false,
    ));
    let primary = base.primary.clone();
    Ok(Catalog::new(specs, primary)?.with_derived("a0", base.derived["a0"].clone()))
}

/// Normalizer elements of the infinite dihedral family `(1,2)`: with
/// `a0 = a1 a2` (an odometer), `v = (a0^((1-k)/2) v, v)` and the derived
/// element `w = a0^((1-k)/2) v` satisfies `w a0 w^-1 = a0^k`.
pub fn dihedral_power_conjugator(k: TwoAdic) -> Result<Catalog> {
    let ell = k.half_one_less()?; // (1-k)/2
    let base = preperiodic_generators(1, 2)?;
    let mut specs = catalog_specs(&base)?;
    // a0 = a1 a2 = (a2, a1) s as a recursion of its own.
    specs.push(EquationSpec::new(
        "a0",
        WordSpec::gen("a2"),
        WordSpec::gen("a1"),
        true,
    ));
    specs.push(EquationSpec::new(
        "v",
        WordSpec::empty().then_pow("a0", ell).then("v"),
        WordSpec::gen("v"),
        false,
    ));
    let primary = base.primary.clone();
    Ok(Catalog::new(specs, primary)?
        .with_derived("w", WordSpec::empty().then_pow("a0", ell).then("v")))
}

fn catalog_specs(catalog: &Catalog) -> Result<Vec<EquationSpec>> {
    catalog
        .system
        .symbol_names()
        .iter()
        .map(|name| catalog.system.equation(name))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn level(n: u32) -> Level {
        Level::new(n).unwrap()
    }

    #[test]
    fn defining_equations_hold_at_every_level() {
        let k = TwoAdic::new(5, 16).unwrap();
        let catalogs: Vec<Catalog> = vec![
            standard_odometer(),
            odometer_power_conjugator(k).unwrap(),
            periodic_generators(3).unwrap(),
            preperiodic_generators(2, 3).unwrap(),
            preperiodic_generators(1, 3).unwrap(),
            infinite_chain(5).unwrap(),
            periodic_normalizer(2, &[k, TwoAdic::new(3, 16).unwrap()]).unwrap(),
            prep_w_chain(2, 4, 3).unwrap(),
            prep_w_chain(1, 3, 3).unwrap(),
            prep_w_chain(2, 3, 3).unwrap(),
            prep_w0().unwrap(),
            dihedral_power_conjugator(k).unwrap(),
        ];
        for catalog in &catalogs {
            for name in catalog.system.symbol_names() {
                let eq = catalog.system.equation(name).unwrap();
                for n in 1..=10u32 {
                    let whole = catalog.system.evaluate(name, level(n)).unwrap();
                    let l = catalog
                        .system
                        .evaluate_word(&eq.left, level(n - 1))
                        .unwrap();
                    let r = catalog
                        .system
                        .evaluate_word(&eq.right, level(n - 1))
                        .unwrap();
                    assert_eq!(
                        whole,
                        Portrait::pair(&l, &r, eq.swap).unwrap(),
                        "equation for {name} fails at level {n}"
                    );
                }
            }
        }
    }

    #[test]
    fn single_generator_family_is_the_adding_machine() {
        let family = periodic_generators(1).unwrap();
        let machine = standard_odometer();
        for n in 0..=8u32 {
            assert_eq!(
                family.eval("a1", level(n)).unwrap(),
                machine.eval("a", level(n)).unwrap()
            );
        }
    }

    #[test]
    fn generators_vanish_exactly_below_their_index() {
        for catalog in [
            periodic_generators(3).unwrap(),
            preperiodic_generators(2, 4).unwrap(),
        ] {
            for (idx, name) in catalog.generator_names().iter().enumerate() {
                let i = idx as u32 + 1;
                for n in 0..=6u32 {
                    let value = catalog.eval(name, level(n)).unwrap();
                    assert_eq!(value.is_identity(), n < i, "{name} at level {n}");
                }
            }
        }
    }

    #[test]
    fn periodic_generator_signs_cycle() {
        let catalog = periodic_generators(2).unwrap();
        let a1 = catalog.eval("a1", level(8)).unwrap();
        for n in 1..=8u32 {
            assert_eq!(a1.sign(n).unwrap() < 0, n % 2 == 1);
        }
        let r3 = periodic_generators(3).unwrap();
        for i in 1..=3u32 {
            let g = r3.eval(&format!("a{i}"), level(8)).unwrap();
            for n in 1..=8u32 {
                assert_eq!(g.sign(n).unwrap() < 0, n % 3 == i % 3, "a{i} sign at {n}");
            }
        }
    }

    #[test]
    fn chain_signs_single_out_one_level() {
        let chain = infinite_chain(8).unwrap();
        for i in 1..=8u32 {
            let b = chain.eval(&format!("b{i}"), level(8)).unwrap();
            for n in 1..=8u32 {
                assert_eq!(b.sign(n).unwrap() < 0, n == i);
            }
        }
    }

    #[test]
    fn preperiodic_generators_have_order_two() {
        for (s, r) in [(1, 2), (1, 3), (2, 3), (2, 4)] {
            let catalog = preperiodic_generators(s, r).unwrap();
            for name in catalog.generator_names() {
                let g = catalog.eval(name, level(8)).unwrap();
                assert!(g.order_log2() <= 1, "{name} in ({s},{r})");
            }
        }
    }

    #[test]
    fn dihedral_product_is_transitive() {
        let catalog = preperiodic_generators(1, 2).unwrap();
        for n in 1..=10u32 {
            let a0 = catalog.eval("a0", level(n)).unwrap();
            assert!(a0.is_full_cycle(), "level {n}");
        }
    }

    #[test]
    fn odometer_conjugator_relation_small_levels() {
        for kval in [3i64, 5, 11] {
            let k = TwoAdic::new(kval, 16).unwrap();
            let catalog = odometer_power_conjugator(k).unwrap();
            for n in 1..=6u32 {
                let a = catalog.eval("a", level(n)).unwrap();
                let z = catalog.eval("z", level(n)).unwrap();
                let conj = z.compose(&a).unwrap().compose(&z.inverse()).unwrap();
                assert_eq!(conj, a.pow(kval), "k={kval} level {n}");
            }
        }
    }

    #[test]
    fn trivial_unit_gives_trivial_conjugator() {
        let one = TwoAdic::new(1, 16).unwrap();
        let catalog = odometer_power_conjugator(one).unwrap();
        assert!(catalog.system.prove_trivial_syntactic(&["z"]).unwrap());
        assert!(catalog
            .system
            .is_trivial_to_level(&WordSpec::gen("z"), level(10))
            .unwrap());
    }

    #[test]
    fn periodic_normalizer_relations_small() {
        let ks = [TwoAdic::new(3, 16).unwrap(), TwoAdic::new(7, 16).unwrap()];
        let catalog = periodic_normalizer(2, &ks).unwrap();
        for n in 1..=6u32 {
            for i in 0..2u32 {
                let w = catalog.eval(&format!("w{i}"), level(n)).unwrap();
                for j in 1..=2u32 {
                    let aj = catalog.eval(&format!("a{j}"), level(n)).unwrap();
                    let conj = w.compose(&aj).unwrap().compose(&w.inverse()).unwrap();
                    let expect = aj.pow(ks[((j + 2 - i) % 2) as usize].residue() as i64);
                    assert_eq!(conj, expect, "w{i} a{j} at level {n}");
                }
            }
        }
    }

    #[test]
    fn rank_one_normalizer_matches_odometer_conjugator() {
        let k = TwoAdic::new(5, 16).unwrap();
        let normalizer = periodic_normalizer(1, &[k]).unwrap();
        let conjugator = odometer_power_conjugator(k).unwrap();
        for n in 0..=8u32 {
            assert_eq!(
                normalizer.eval("w0", level(n)).unwrap(),
                conjugator.eval("z", level(n)).unwrap()
            );
        }
    }

    #[test]
    fn dihedral_conjugator_relation_small() {
        for kval in [3i64, 5, 9] {
            let k = TwoAdic::new(kval, 16).unwrap();
            let catalog = dihedral_power_conjugator(k).unwrap();
            for n in 1..=6u32 {
                let a0 = catalog.eval("a0", level(n)).unwrap();
                let w = catalog.eval("w", level(n)).unwrap();
                let conj = w.compose(&a0).unwrap().compose(&w.inverse()).unwrap();
                assert_eq!(conj, a0.pow(kval), "k={kval} level {n}");
            }
        }
    }

    #[test]
    fn dihedral_a0_symbol_equals_product() {
        let k = TwoAdic::new(3, 16).unwrap();
        let catalog = dihedral_power_conjugator(k).unwrap();
        for n in 0..=6u32 {
            let product = catalog
                .eval("a1", level(n))
                .unwrap()
                .compose(&catalog.eval("a2", level(n)).unwrap())
                .unwrap();
            assert_eq!(catalog.eval("a0", level(n)).unwrap(), product);
        }
    }

    #[test]
    fn w_chain_vanishes_at_shallow_levels() {
        let catalog = prep_w_chain(2, 3, 4).unwrap();
        // (2,3): w1 restricts trivially to T_3, and wi to T_(i+2).
        for i in 1..=4u32 {
            let w = catalog.eval(&format!("w{i}"), level(i + 2)).unwrap();
            assert!(w.is_identity(), "w{i}");
            let w = catalog.eval(&format!("w{i}"), level(i + 3)).unwrap();
            assert!(!w.is_identity(), "w{i}");
        }
        // (2,4): w1 = (a2, a2) first acts at level 3.
        let catalog = prep_w_chain(2, 4, 3).unwrap();
        for i in 1..=3u32 {
            let w = catalog.eval(&format!("w{i}"), level(i + 1)).unwrap();
            assert!(w.is_identity());
            let w = catalog.eval(&format!("w{i}"), level(i + 2)).unwrap();
            assert!(!w.is_identity());
        }
    }

    #[test]
    fn w0_signs() {
        // w0 vanishes on T_2 but already acts on level 3: its first three
        // signs are +1, +1, -1.
        let catalog = prep_w0().unwrap();
        assert!(catalog.eval("w0", level(2)).unwrap().is_identity());
        let w0 = catalog.eval("w0", level(4)).unwrap();
        assert_eq!(w0.sign(1).unwrap(), 1);
        assert_eq!(w0.sign(2).unwrap(), 1);
        assert_eq!(w0.sign(3).unwrap(), -1);
    }

    #[test]
    fn parameter_validation() {
        assert!(periodic_generators(0).is_err());
        assert!(preperiodic_generators(0, 2).is_err());
        assert!(preperiodic_generators(2, 2).is_err());
        assert!(infinite_chain(0).is_err());
        assert!(prep_w_chain(1, 2, 3).is_err());
        let even = TwoAdic::new(4, 16).unwrap();
        assert!(odometer_power_conjugator(even).is_err());
        assert!(dihedral_power_conjugator(even).is_err());
        assert!(periodic_normalizer(2, &[even, even]).is_err());
        assert!(periodic_normalizer(2, &[TwoAdic::new(3, 16).unwrap()]).is_err());
    }
}
