//! Finite-level subgroup computations: breadth-first closure with
//! deduplicated bit-packed elements, membership and generator words,
//! normal closures, commutator subgroups, brute-force normalizers and
//! centralizers, sign-image tests, and transitivity counts.
//!
//! Groups here are 2-groups of at most a few hundred million elements;
//! plain BFS over portrait keys beats general permutation-group machinery
//! at this scale and keeps every result exact and reproducible.

use indexmap::IndexMap;
use rayon::prelude::*;

use crate::cases::GroupCase;
use crate::error::{Error, Result};
use crate::portrait::{Level, Portrait, Scratch};

/// One generator step of a word: generator index plus inversion flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenStep {
    pub gen: u32,
    pub inverse: bool,
}

/// A word over an indexed generator list. Steps multiply left to right
/// with the rightmost factor acting first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GenWord(pub Vec<GenStep>);

impl GenWord {
    pub fn empty() -> Self {
        GenWord(Vec::new())
    }

    pub fn single(gen: u32, inverse: bool) -> Self {
        GenWord(vec![GenStep { gen, inverse }])
    }

    pub fn push(&mut self, step: GenStep) {
        self.0.push(step);
    }

    pub fn inverse(&self) -> Self {
        GenWord(
            self.0
                .iter()
                .rev()
                .map(|s| GenStep {
                    gen: s.gen,
                    inverse: !s.inverse,
                })
                .collect(),
        )
    }

    pub fn concat(mut self, other: &GenWord) -> Self {
        self.0.extend_from_slice(&other.0);
        self
    }

    pub fn evaluate(&self, generators: &[Portrait], level: Level) -> Result<Portrait> {
        let mut acc = Portrait::identity(level);
        for step in &self.0 {
            let g = generators
                .get(step.gen as usize)
                .ok_or_else(|| Error::Parameter(format!("word references generator {}", step.gen)))?;
            let factor = if step.inverse { g.inverse() } else { g.clone() };
            acc = acc.compose(&factor)?;
        }
        Ok(acc)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Options for breadth-first closure.
#[derive(Clone, Copy, Debug)]
pub struct EnumerateOptions {
    /// Maximum number of elements to materialize; exceeding it sets the
    /// `truncated` flag on the result instead of failing.
    pub cap: usize,
    /// Record one shortest-discovered generator word per element.
    pub track_words: bool,
    /// Shard product computation across the rayon pool. Results are
    /// identical to the sequential order.
    pub parallel: bool,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            cap: 1 << 24,
            track_words: false,
            parallel: false,
        }
    }
}

/// An enumerated finite-level subgroup: deduplicated element set in BFS
/// discovery order, optionally with generator words.
pub struct GroupTable {
    level: Level,
    generators: Vec<Portrait>,
    elements: IndexMap<Portrait, ()>,
    /// `(parent element index, step code)` per element; the identity has a
    /// sentinel parent. Step code is `2*gen + inverse`.
    parents: Option<Vec<(u32, u32)>>,
    truncated: bool,
}

const NO_PARENT: u32 = u32::MAX;

/// Breadth-first closure of a generator list.
pub fn enumerate(level: Level, generators: &[Portrait], opts: &EnumerateOptions) -> Result<GroupTable> {
    for g in generators {
        if g.level() != level {
            return Err(Error::LevelMismatch(level.get(), g.level().get()));
        }
    }
    // Steps: generator then its inverse, skipping inverses of involutions.
    let mut steps: Vec<(Portrait, GenStep)> = Vec::new();
    for (i, g) in generators.iter().enumerate() {
        steps.push((
            g.clone(),
            GenStep {
                gen: i as u32,
                inverse: false,
            },
        ));
        let inv = g.inverse();
        if &inv != g {
            steps.push((
                inv,
                GenStep {
                    gen: i as u32,
                    inverse: true,
                },
            ));
        }
    }

    let mut elements: IndexMap<Portrait, ()> = IndexMap::new();
    let mut parents: Vec<(u32, u32)> = Vec::new();
    elements.insert(Portrait::identity(level), ());
    parents.push((NO_PARENT, 0));
    let mut truncated = false;

    let mut round_start = 0usize;
    'closure: while round_start < elements.len() {
        let round_end = elements.len();
        if opts.parallel {
            // Compute the round's products in blocks, preserving order.
            const BLOCK: usize = 1 << 15;
            let tasks = (round_end - round_start) * steps.len();
            let mut t0 = 0usize;
            while t0 < tasks {
                let t1 = (t0 + BLOCK).min(tasks);
                let block: Vec<(Portrait, u32, u32)> = (t0..t1)
                    .into_par_iter()
                    .map_init(Scratch::default, |scratch, t| {
                        let idx = round_start + t / steps.len();
                        let (step_p, step) = &steps[t % steps.len()];
                        let (cur, _) = elements.get_index(idx).unwrap();
                        let product = cur.compose_with(step_p, scratch).expect("same level");
                        (product, idx as u32, 2 * step.gen + step.inverse as u32)
                    })
                    .collect();
                for (product, parent, code) in block {
                    if !elements.contains_key(&product) {
                        if elements.len() >= opts.cap {
                            truncated = true;
                            break 'closure;
                        }
                        elements.insert(product, ());
                        parents.push((parent, code));
                    }
                }
                t0 = t1;
            }
        } else {
            let mut scratch = Scratch::default();
            for idx in round_start..round_end {
                for (step_p, step) in &steps {
                    let (cur, _) = elements.get_index(idx).unwrap();
                    let product = cur.compose_with(step_p, &mut scratch).expect("same level");
                    if !elements.contains_key(&product) {
                        if elements.len() >= opts.cap {
                            truncated = true;
                            break 'closure;
                        }
                        elements.insert(product, ());
                        parents.push((idx as u32, 2 * step.gen + step.inverse as u32));
                    }
                }
            }
        }
        round_start = round_end;
    }

    Ok(GroupTable {
        level,
        generators: generators.to_vec(),
        elements,
        parents: opts.track_words.then_some(parents),
        truncated,
    })
}

impl GroupTable {
    /// Build a table directly from an element list (used for intersections
    /// and brute-force scans). No generators, no words.
    fn from_elements(level: Level, elements: Vec<Portrait>) -> Self {
        GroupTable {
            level,
            generators: Vec::new(),
            elements: elements.into_iter().map(|p| (p, ())).collect(),
            parents: None,
            truncated: false,
        }
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn generators(&self) -> &[Portrait] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    /// `log2` of the group order. Complete tables only; the order of a
    /// 2-group is always a power of two.
    pub fn log2_order(&self) -> Result<u32> {
        if self.truncated {
            return Err(Error::Truncated);
        }
        if !self.elements.len().is_power_of_two() {
            return Err(Error::Domain(format!(
                "element count {} is not a power of two",
                self.elements.len()
            )));
        }
        Ok(self.elements.len().trailing_zeros())
    }

    /// Membership: `Some(true)` if present, `Some(false)` if absent from a
    /// complete table, `None` if absent but the table was truncated.
    pub fn contains(&self, p: &Portrait) -> Option<bool> {
        if self.elements.contains_key(p) {
            Some(true)
        } else if self.truncated {
            None
        } else {
            Some(false)
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &Portrait> {
        self.elements.keys()
    }

    pub fn element(&self, idx: usize) -> &Portrait {
        self.elements.get_index(idx).unwrap().0
    }

    /// The stored generator word of a member (words must be tracked).
    pub fn express(&self, p: &Portrait) -> Result<GenWord> {
        let parents = self.parents.as_ref().ok_or(Error::NoWords)?;
        let mut idx = self.elements.get_index_of(p).ok_or(Error::NotMember)? as u32;
        let mut steps = Vec::new();
        while parents[idx as usize].0 != NO_PARENT {
            let (parent, code) = parents[idx as usize];
            steps.push(GenStep {
                gen: code / 2,
                inverse: code % 2 == 1,
            });
            idx = parent;
        }
        steps.reverse();
        Ok(GenWord(steps))
    }

    /// Set equality of the underlying element sets.
    pub fn same_elements(&self, other: &GroupTable) -> bool {
        self.elements.len() == other.elements.len()
            && self.elements.keys().all(|p| other.elements.contains_key(p))
    }

    pub fn is_subset_of(&self, other: &GroupTable) -> bool {
        self.elements.keys().all(|p| other.elements.contains_key(p))
    }

    /// Number of elements acting as a single cycle on the full leaf level.
    pub fn count_transitive(&self) -> Result<u64> {
        if self.truncated {
            return Err(Error::Truncated);
        }
        Ok(self.elements.keys().filter(|p| p.is_full_cycle()).count() as u64)
    }

    /// Canonical export: sorted element encodings, one per line.
    pub fn export_lines(&self) -> Vec<String> {
        let mut lines: Vec<String> = self.elements.keys().map(|p| p.encode()).collect();
        lines.sort();
        lines
    }

    pub fn summary(&self) -> TableSummary {
        TableSummary {
            level: self.level.get(),
            log2_order: self.log2_order().ok(),
            truncated: self.truncated,
            generator_count: self.generators.len(),
        }
    }
}

/// Summary data for reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableSummary {
    pub level: u32,
    pub log2_order: Option<u32>,
    pub truncated: bool,
    pub generator_count: usize,
}

/// The swap-at-every-vertex generating set of the full level group.
pub fn full_group_generators(level: Level) -> Vec<Portrait> {
    let mut gens = Vec::new();
    for depth in 0..level.get() {
        for index in 0..(1u64 << depth) {
            gens.push(Portrait::single_swap(level, depth, index).unwrap());
        }
    }
    gens
}

/// Smallest subgroup containing `subset` that is invariant under
/// conjugation by the group generated by `ambient`. The subset entries are
/// given as words over the ambient generators so that every closure
/// generator keeps an explicit ambient word.
pub struct NormalClosure {
    pub table: GroupTable,
    /// Ambient-generator word of each closure generator.
    pub generator_words: Vec<GenWord>,
    /// The ambient generator list the words refer to.
    pub ambient: Vec<Portrait>,
}

impl NormalClosure {
    /// A member of the closure, written as a word over the *ambient*
    /// generators.
    pub fn express_in_ambient(&self, p: &Portrait) -> Result<GenWord> {
        let closure_word = self.table.express(p)?;
        let mut out = GenWord::empty();
        for step in &closure_word.0 {
            let gen_word = &self.generator_words[step.gen as usize];
            let piece = if step.inverse {
                gen_word.inverse()
            } else {
                gen_word.clone()
            };
            out = out.concat(&piece);
        }
        Ok(out)
    }
}

pub fn normal_closure(
    level: Level,
    ambient: &[Portrait],
    subset: &[GenWord],
    opts: &EnumerateOptions,
) -> Result<NormalClosure> {
    let mut gen_words: Vec<GenWord> = subset.to_vec();
    let mut gens: Vec<Portrait> = subset
        .iter()
        .map(|w| w.evaluate(ambient, level))
        .collect::<Result<_>>()?;
    let mut word_opts = *opts;
    word_opts.track_words = true;
    loop {
        let table = enumerate(level, &gens, &word_opts)?;
        if table.is_truncated() {
            return Ok(NormalClosure {
                table,
                generator_words: gen_words,
                ambient: ambient.to_vec(),
            });
        }
        let mut added = false;
        for (a_idx, a) in ambient.iter().enumerate() {
            for c_idx in 0..gens.len() {
                let conj = a
                    .compose(&gens[c_idx])?
                    .compose(&a.inverse())?;
                if table.contains(&conj) == Some(false) {
                    let word = GenWord::single(a_idx as u32, false)
                        .concat(&gen_words[c_idx])
                        .concat(&GenWord::single(a_idx as u32, true));
                    gen_words.push(word);
                    gens.push(conj);
                    added = true;
                }
            }
        }
        if !added {
            return Ok(NormalClosure {
                table,
                generator_words: gen_words,
                ambient: ambient.to_vec(),
            });
        }
    }
}

/// Closure of the commutator subgroup of an enumerated group: the normal
/// closure of all generator commutators.
pub fn commutator_subgroup(table: &GroupTable, opts: &EnumerateOptions) -> Result<GroupTable> {
    if table.is_truncated() {
        return Err(Error::Truncated);
    }
    let n = table.generators().len() as u32;
    let mut commutators = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                commutators.push(GenWord(vec![
                    GenStep { gen: i, inverse: false },
                    GenStep { gen: j, inverse: false },
                    GenStep { gen: i, inverse: true },
                    GenStep { gen: j, inverse: true },
                ]));
            }
        }
    }
    Ok(normal_closure(table.level(), table.generators(), &commutators, opts)?.table)
}

/// Set intersection of two complete tables. The result carries no
/// generators or words.
pub fn intersect(a: &GroupTable, b: &GroupTable) -> Result<GroupTable> {
    if a.level() != b.level() {
        return Err(Error::LevelMismatch(a.level().get(), b.level().get()));
    }
    if a.is_truncated() || b.is_truncated() {
        return Err(Error::Truncated);
    }
    let elements: Vec<Portrait> = a
        .iter()
        .filter(|p| b.contains(p) == Some(true))
        .cloned()
        .collect();
    Ok(GroupTable::from_elements(a.level(), elements))
}

/// Index `[a : b]` of a subgroup; verifies `b` really is a subset of `a`.
pub fn index(a: &GroupTable, b: &GroupTable) -> Result<u64> {
    if a.is_truncated() || b.is_truncated() {
        return Err(Error::Truncated);
    }
    if !b.is_subset_of(a) {
        return Err(Error::NotSubgroup("b".into(), "a".into()));
    }
    Ok(a.len() as u64 / b.len() as u64)
}

/// Whether the group generated by `gens` acts transitively on level `m`
/// (single orbit on `2^m` leaves; no group closure needed).
pub fn is_transitive(gens: &[Portrait], m: u32) -> Result<bool> {
    if gens.is_empty() {
        return Ok(m == 0);
    }
    let level = Level::new(m)?;
    if m > 26 {
        return Err(Error::ScanTooLarge(m, 26));
    }
    let truncated: Vec<Portrait> = gens
        .iter()
        .map(|g| g.truncate(level))
        .collect::<Result<_>>()?;
    let total = 1u64 << m;
    let mut visited = vec![false; total as usize];
    visited[0] = true;
    let mut stack = vec![0u64];
    let mut seen = 1u64;
    while let Some(leaf) = stack.pop() {
        for g in &truncated {
            for img in [g.apply_index(leaf)?, g.inverse().apply_index(leaf)?] {
                if !visited[img as usize] {
                    visited[img as usize] = true;
                    seen += 1;
                    stack.push(img);
                }
            }
        }
    }
    Ok(seen == total)
}

/// Whether the combined sign map onto `{±1}^m` is surjective on the group
/// generated by `gens`: rank of the generators' sign masks over GF(2)
/// equals `m`. This happens exactly when the group is the full level-`m`
/// group.
pub fn sign_image_is_full(gens: &[Portrait], m: u32) -> Result<bool> {
    if m == 0 {
        return Ok(true);
    }
    if m > 32 {
        return Err(Error::Parameter("sign rank limited to 32 levels".into()));
    }
    let mut basis: Vec<u32> = Vec::new();
    for g in gens {
        if g.level().get() < m {
            return Err(Error::SignLevel {
                m,
                level: g.level().get(),
            });
        }
        let mut mask = g.sign_bits() & ((1u32 << m) - 1) as u32;
        for &b in &basis {
            mask = mask.min(mask ^ b);
        }
        if mask != 0 {
            basis.push(mask);
        }
    }
    Ok(basis.len() == m as usize)
}

fn scan_level(level: Level, max_level: u32) -> Result<impl Iterator<Item = Portrait>> {
    if level.get() > max_level {
        return Err(Error::ScanTooLarge(level.get(), max_level));
    }
    Ok(Portrait::enumerate_all(level))
}

/// Brute-force normalizer of an enumerated subgroup inside the full level
/// group. Exhausts all `2^(2^n - 1)` candidates, so the level is capped
/// (default 4, 32768 candidates).
pub fn normalizer_in_full_group(table: &GroupTable, max_level: u32) -> Result<GroupTable> {
    if table.is_truncated() {
        return Err(Error::Truncated);
    }
    let mut found = Vec::new();
    for w in scan_level(table.level(), max_level)? {
        let w_inv = w.inverse();
        let normalizes = table.generators().iter().all(|g| {
            let conj = w.compose(g).unwrap().compose(&w_inv).unwrap();
            table.contains(&conj) == Some(true)
        });
        if normalizes {
            found.push(w);
        }
    }
    Ok(GroupTable::from_elements(table.level(), found))
}

/// Brute-force centralizer of an enumerated subgroup inside the full
/// level group.
pub fn centralizer_in_full_group(table: &GroupTable, max_level: u32) -> Result<GroupTable> {
    let mut found = Vec::new();
    for w in scan_level(table.level(), max_level)? {
        let centralizes = table
            .generators()
            .iter()
            .all(|g| w.compose(g).unwrap() == g.compose(&w).unwrap());
        if centralizes {
            found.push(w);
        }
    }
    Ok(GroupTable::from_elements(table.level(), found))
}

/// Brute-force centralizer of a single element.
pub fn centralizer_of_element(p: &Portrait, max_level: u32) -> Result<GroupTable> {
    let mut found = Vec::new();
    for w in scan_level(p.level(), max_level)? {
        if w.compose(p).unwrap() == p.compose(&w).unwrap() {
            found.push(w);
        }
    }
    Ok(GroupTable::from_elements(p.level(), found))
}

/// The class of a level-`r+1` element in the quotient by the square of
/// the index-4 sign kernel: a 2x2 sign matrix (rows `sgn_s`, `sgn_r`;
/// columns the two sections) plus the root swap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignMatrixClass {
    pub matrix: [[i32; 2]; 2],
    pub swap: bool,
}

impl SignMatrixClass {
    /// Membership of the class in the image of the model group: the
    /// matrix must be symmetric with equal diagonal, i.e. one of the four
    /// matrices `(±1 ±1; ±1 ±1)` with `a = d`, `b = c`.
    pub fn is_member(&self) -> bool {
        self.matrix[0][0] == self.matrix[1][1] && self.matrix[0][1] == self.matrix[1][0]
    }
}

/// Compute the sign-matrix class of a level-`r+1` element for the
/// pre-periodic case `(s, r)` with `s >= 2`.
pub fn sign_matrix_class(p: &Portrait, s: u32, r: u32) -> Result<SignMatrixClass> {
    let case = GroupCase::preperiodic(s, r)?;
    let GroupCase::PrePeriodic { preperiod, period } = case else {
        unreachable!()
    };
    if preperiod < 2 {
        return Err(Error::Parameter(
            "the sign-matrix test needs a pre-period of at least 2".into(),
        ));
    }
    if p.level().get() != period + 1 {
        return Err(Error::LevelMismatch(p.level().get(), period + 1));
    }
    let (u, v, swap) = p.decompose()?;
    Ok(SignMatrixClass {
        matrix: [
            [u.sign(preperiod)?, v.sign(preperiod)?],
            [u.sign(period)?, v.sign(period)?],
        ],
        swap,
    })
}

/// Membership test for the level-`r+1` quotient of the model group by
/// sign matrices alone.
pub fn in_level_group_by_signs(p: &Portrait, s: u32, r: u32) -> Result<bool> {
    Ok(sign_matrix_class(p, s, r)?.is_member())
}

/// Rewrite a generator word into one whose evaluation fixes level 1 and
/// has the original word as its first section. Generator indices are
/// 0-based (`gen i` is the `(i+1)`-th catalog generator).
pub fn section_lift(case: &GroupCase, word: &GenWord) -> Result<GenWord> {
    let mut out = GenWord::empty();
    for step in &word.0 {
        let lifted = lift_step(case, step)?;
        out = out.concat(&lifted);
    }
    Ok(out)
}

fn lift_step(case: &GroupCase, step: &GenStep) -> Result<GenWord> {
    let r = case.generator_count();
    if step.gen >= r {
        return Err(Error::Parameter(format!(
            "generator index {} out of range for {case}",
            step.gen
        )));
    }
    let i = step.gen + 1; // 1-based generator number
    let forward = match *case {
        GroupCase::Periodic { period } => {
            if i < period {
                GenWord::single(i, false)
            } else {
                // last generator lifts to the square of the first
                GenWord(vec![
                    GenStep { gen: 0, inverse: false },
                    GenStep { gen: 0, inverse: false },
                ])
            }
        }
        GroupCase::PrePeriodic { preperiod, period } => {
            if i == preperiod {
                GenWord::single(preperiod, false)
            } else if i == period {
                GenWord(vec![
                    GenStep { gen: 0, inverse: false },
                    GenStep { gen: preperiod, inverse: false },
                    GenStep { gen: 0, inverse: false },
                ])
            } else {
                GenWord::single(i, false)
            }
        }
    };
    Ok(if step.inverse { forward.inverse() } else { forward })
}
