//! Systems of wreath-recursion equations.
//!
//! A system assigns to each symbol `x` one equation `x = (f, g) sigma^nu`
//! where `f` and `g` are words over the system's symbols (plus optional
//! fixed-level constants). Such a system determines each symbol uniquely
//! at every finite level: level 0 is trivial and each level is assembled
//! from the previous one, so evaluation always terminates.
//!
//! Text form, one equation per line (`#` starts a comment):
//!
//! ```text
//! a1 = (a2, 1) s
//! a2 = (a1, ())
//! ```
//!
//! `s` marks a root swap, `^-1` inverts a symbol, and `()` or `1` denotes
//! the empty word. Systems containing 2-adic power tokens or constants
//! render with a non-parseable `^(r mod 2^m)` / `{n:HEX}` notation.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::portrait::{Level, Portrait};
use crate::twoadic::TwoAdic;

/// One token of a symbol word, referencing symbols by name.
#[derive(Clone, Debug)]
pub enum TokenSpec {
    Gen { name: String, inverse: bool },
    Pow { name: String, exponent: TwoAdic },
    Const(Portrait),
}

/// A word over the symbols of a system, by name. Words multiply left to
/// right with the rightmost factor acting first, matching `Portrait`
/// composition.
#[derive(Clone, Debug, Default)]
pub struct WordSpec(pub Vec<TokenSpec>);

impl WordSpec {
    pub fn empty() -> Self {
        WordSpec(Vec::new())
    }

    pub fn gen(name: &str) -> Self {
        WordSpec::empty().then(name)
    }

    pub fn then(mut self, name: &str) -> Self {
        self.0.push(TokenSpec::Gen {
            name: name.to_string(),
            inverse: false,
        });
        self
    }

    pub fn then_inv(mut self, name: &str) -> Self {
        self.0.push(TokenSpec::Gen {
            name: name.to_string(),
            inverse: true,
        });
        self
    }

    pub fn then_pow(mut self, name: &str, exponent: TwoAdic) -> Self {
        self.0.push(TokenSpec::Pow {
            name: name.to_string(),
            exponent,
        });
        self
    }

    pub fn then_const(mut self, value: Portrait) -> Self {
        self.0.push(TokenSpec::Const(value));
        self
    }

    /// The inverse word: reversed, with every token inverted.
    pub fn inverse(&self) -> Self {
        let mut tokens = Vec::with_capacity(self.0.len());
        for t in self.0.iter().rev() {
            tokens.push(match t {
                TokenSpec::Gen { name, inverse } => TokenSpec::Gen {
                    name: name.clone(),
                    inverse: !inverse,
                },
                TokenSpec::Pow { name, exponent } => TokenSpec::Pow {
                    name: name.clone(),
                    exponent: exponent.neg(),
                },
                TokenSpec::Const(p) => TokenSpec::Const(p.inverse()),
            });
        }
        WordSpec(tokens)
    }

    pub fn concat(mut self, other: &WordSpec) -> Self {
        self.0.extend(other.0.iter().cloned());
        self
    }
}

/// One equation of a system.
#[derive(Clone, Debug)]
pub struct EquationSpec {
    pub symbol: String,
    pub left: WordSpec,
    pub right: WordSpec,
    pub swap: bool,
}

impl EquationSpec {
    pub fn new(symbol: &str, left: WordSpec, right: WordSpec, swap: bool) -> Self {
        EquationSpec {
            symbol: symbol.to_string(),
            left,
            right,
            swap,
        }
    }
}

#[derive(Clone)]
enum Token {
    Gen { id: usize, inverse: bool },
    Pow { id: usize, exponent: TwoAdic },
    Const(Portrait),
}

#[derive(Clone, Default)]
struct Word(Vec<Token>);

#[derive(Clone)]
struct Equation {
    left: Word,
    right: Word,
    swap: bool,
}

/// A validated recursion system with memoized level-by-level evaluation.
pub struct RecursionSystem {
    names: Vec<String>,
    by_name: HashMap<String, usize>,
    equations: Vec<Equation>,
    // memo[level][symbol]; extended monotonically under the lock.
    memo: Mutex<Vec<Vec<Portrait>>>,
}

impl fmt::Debug for RecursionSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RecursionSystem[{}]", self.names.join(", "))
    }
}

impl Clone for RecursionSystem {
    fn clone(&self) -> Self {
        RecursionSystem {
            names: self.names.clone(),
            by_name: self.by_name.clone(),
            equations: self.equations.clone(),
            memo: Mutex::new(self.memo.lock().unwrap().clone()),
        }
    }
}

/// Validate and build a system from raw equations.
pub fn define_system(specs: &[EquationSpec]) -> Result<RecursionSystem> {
    let mut names = Vec::with_capacity(specs.len());
    let mut by_name = HashMap::new();
    for spec in specs {
        if by_name.insert(spec.symbol.clone(), names.len()).is_some() {
            return Err(Error::DuplicateSymbol(spec.symbol.clone()));
        }
        names.push(spec.symbol.clone());
    }
    let mut equations = Vec::with_capacity(specs.len());
    for spec in specs {
        equations.push(Equation {
            left: resolve(&spec.left, &by_name)?,
            right: resolve(&spec.right, &by_name)?,
            swap: spec.swap,
        });
    }
    Ok(RecursionSystem {
        names,
        by_name,
        equations,
        memo: Mutex::new(Vec::new()),
    })
}

fn resolve(word: &WordSpec, by_name: &HashMap<String, usize>) -> Result<Word> {
    let mut tokens = Vec::with_capacity(word.0.len());
    for t in &word.0 {
        match t {
            TokenSpec::Gen { name, inverse } => {
                let id = *by_name
                    .get(name)
                    .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
                tokens.push(Token::Gen {
                    id,
                    inverse: *inverse,
                });
            }
            TokenSpec::Pow { name, exponent } => {
                let id = *by_name
                    .get(name)
                    .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
                // Exponent zero modulo full precision: the factor is the
                // identity at every usable level, so it is dropped here.
                if exponent.residue() != 0 {
                    tokens.push(Token::Pow {
                        id,
                        exponent: *exponent,
                    });
                }
            }
            TokenSpec::Const(p) => tokens.push(Token::Const(p.clone())),
        }
    }
    Ok(Word(tokens))
}

impl RecursionSystem {
    pub fn symbol_names(&self) -> &[String] {
        &self.names
    }

    pub fn has_symbol(&self, name: &str) -> bool {
        self.by_name.contains_key(name)
    }

    fn id_of(&self, name: &str) -> Result<usize> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    /// The restriction of `symbol` to `T_n`.
    pub fn evaluate(&self, symbol: &str, level: Level) -> Result<Portrait> {
        let id = self.id_of(symbol)?;
        let mut memo = self.memo.lock().unwrap();
        self.ensure_levels(&mut memo, level.get())?;
        Ok(memo[level.get() as usize][id].clone())
    }

    /// Evaluate an arbitrary word over the system's symbols at a level.
    pub fn evaluate_word(&self, word: &WordSpec, level: Level) -> Result<Portrait> {
        let resolved = resolve(word, &self.by_name)?;
        let mut memo = self.memo.lock().unwrap();
        self.ensure_levels(&mut memo, level.get())?;
        let values = memo[level.get() as usize].clone();
        drop(memo);
        eval_word(&resolved, &values, level)
    }

    /// Whether a word evaluates to the identity on `T_n`. A `true` answer
    /// certifies triviality only up to this level.
    pub fn is_trivial_to_level(&self, word: &WordSpec, level: Level) -> Result<bool> {
        Ok(self.evaluate_word(word, level)?.is_identity())
    }

    /// Sound syntactic triviality proof for a set of candidate symbols.
    ///
    /// Accepts only when every candidate equation has no root swap and
    /// both coordinate words are conjugates `h w h^-1` of words `w` over
    /// the candidate symbols themselves. When this returns `true` the
    /// candidates are trivial on the whole tree; `false` means "not
    /// proved", never "non-trivial".
    pub fn prove_trivial_syntactic(&self, candidates: &[&str]) -> Result<bool> {
        let mut in_set = vec![false; self.names.len()];
        for name in candidates {
            in_set[self.id_of(name)?] = true;
        }
        for name in candidates {
            let eq = &self.equations[self.id_of(name)?];
            if eq.swap
                || !word_is_conjugated_candidate_word(&eq.left, &in_set)
                || !word_is_conjugated_candidate_word(&eq.right, &in_set)
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn ensure_levels(&self, memo: &mut Vec<Vec<Portrait>>, n: u32) -> Result<()> {
        if memo.is_empty() {
            memo.push(vec![Portrait::identity(Level::new(0)?); self.names.len()]);
        }
        while memo.len() <= n as usize {
            let prev_level = Level::new(memo.len() as u32 - 1)?;
            let prev = memo.last().unwrap().clone();
            let mut row = Vec::with_capacity(self.names.len());
            for eq in &self.equations {
                let left = eval_word(&eq.left, &prev, prev_level)?;
                let right = eval_word(&eq.right, &prev, prev_level)?;
                row.push(Portrait::pair(&left, &right, eq.swap)?);
            }
            memo.push(row);
        }
        Ok(())
    }

    /// The defining equation of a symbol, with tokens by name.
    pub fn equation(&self, symbol: &str) -> Result<EquationSpec> {
        let id = self.id_of(symbol)?;
        let eq = &self.equations[id];
        Ok(EquationSpec {
            symbol: symbol.to_string(),
            left: self.unresolve(&eq.left),
            right: self.unresolve(&eq.right),
            swap: eq.swap,
        })
    }

    fn unresolve(&self, word: &Word) -> WordSpec {
        WordSpec(
            word.0
                .iter()
                .map(|t| match t {
                    Token::Gen { id, inverse } => TokenSpec::Gen {
                        name: self.names[*id].clone(),
                        inverse: *inverse,
                    },
                    Token::Pow { id, exponent } => TokenSpec::Pow {
                        name: self.names[*id].clone(),
                        exponent: *exponent,
                    },
                    Token::Const(p) => TokenSpec::Const(p.clone()),
                })
                .collect(),
        )
    }

    /// Parse the one-equation-per-line text format.
    pub fn parse(text: &str) -> Result<RecursionSystem> {
        let mut specs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            specs.push(parse_equation(line).map_err(|e| {
                Error::SystemSyntax(format!("line {}: {e}", lineno + 1))
            })?);
        }
        if specs.is_empty() {
            return Err(Error::SystemSyntax("no equations".into()));
        }
        define_system(&specs)
    }

    fn word_text(&self, word: &Word) -> String {
        if word.0.is_empty() {
            return "()".to_string();
        }
        word.0
            .iter()
            .map(|t| match t {
                Token::Gen { id, inverse } => {
                    if *inverse {
                        format!("{}^-1", self.names[*id])
                    } else {
                        self.names[*id].clone()
                    }
                }
                Token::Pow { id, exponent } => {
                    format!("{}^({})", self.names[*id], exponent)
                }
                Token::Const(p) => format!("{{{}}}", p.encode()),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for RecursionSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, eq) in self.equations.iter().enumerate() {
            writeln!(
                f,
                "{} = ({}, {}){}",
                self.names[i],
                self.word_text(&eq.left),
                self.word_text(&eq.right),
                if eq.swap { " s" } else { "" }
            )?;
        }
        Ok(())
    }
}

fn eval_word(word: &Word, values: &[Portrait], level: Level) -> Result<Portrait> {
    let mut acc = Portrait::identity(level);
    for token in &word.0 {
        let factor = match token {
            Token::Gen { id, inverse } => {
                if *inverse {
                    values[*id].inverse()
                } else {
                    values[*id].clone()
                }
            }
            Token::Pow { id, exponent } => values[*id].pow_twoadic(exponent)?,
            Token::Const(p) => {
                if p.level().get() < level.get() {
                    return Err(Error::ConstLevel {
                        have: p.level().get(),
                        want: level.get(),
                    });
                }
                p.truncate(level)?
            }
        };
        acc = acc.compose(&factor)?;
    }
    Ok(acc)
}

/// Match a word against the shape `h w h^-1` with `w` over candidate
/// symbols. Conjugating prefixes are stripped pair by pair; each stage is
/// checked, so plain candidate words (empty `h`) are accepted directly.
fn word_is_conjugated_candidate_word(word: &Word, in_set: &[bool]) -> bool {
    let tokens = &word.0;
    let mut lo = 0;
    let mut hi = tokens.len();
    loop {
        if tokens[lo..hi].iter().all(|t| token_in_set(t, in_set)) {
            return true;
        }
        if hi - lo >= 2 && tokens_mutually_inverse(&tokens[lo], &tokens[hi - 1]) {
            lo += 1;
            hi -= 1;
        } else {
            return false;
        }
    }
}

fn token_in_set(token: &Token, in_set: &[bool]) -> bool {
    match token {
        Token::Gen { id, .. } | Token::Pow { id, .. } => in_set[*id],
        Token::Const(_) => false,
    }
}

fn tokens_mutually_inverse(a: &Token, b: &Token) -> bool {
    match (a, b) {
        (Token::Gen { id: i, inverse: u }, Token::Gen { id: j, inverse: v }) => {
            i == j && u != v
        }
        (Token::Pow { id: i, exponent: e }, Token::Pow { id: j, exponent: f }) => {
            i == j && e.add(f).residue() == 0
        }
        (Token::Const(p), Token::Const(q)) => p.inverse() == *q,
        _ => false,
    }
}

fn parse_equation(line: &str) -> std::result::Result<EquationSpec, String> {
    let (name, rhs) = line
        .split_once('=')
        .ok_or_else(|| "missing '='".to_string())?;
    let name = name.trim();
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(format!("bad symbol name {name:?}"));
    }
    let rhs = rhs.trim();
    if !rhs.starts_with('(') {
        return Err("right side must start with '('".to_string());
    }
    // Split at the top-level comma and the matching close paren.
    let chars: Vec<char> = rhs.chars().collect();
    let mut depth = 0usize;
    let mut comma = None;
    let mut close = None;
    for (i, &c) in chars.iter().enumerate() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    close = Some(i);
                    break;
                }
            }
            ',' if depth == 1 => {
                if comma.is_some() {
                    return Err("more than one top-level comma".to_string());
                }
                comma = Some(i);
            }
            _ => {}
        }
    }
    let comma = comma.ok_or_else(|| "missing ','".to_string())?;
    let close = close.ok_or_else(|| "missing ')'".to_string())?;
    let left: String = chars[1..comma].iter().collect();
    let right: String = chars[comma + 1..close].iter().collect();
    let trailer: String = chars[close + 1..].iter().collect();
    let swap = match trailer.trim() {
        "" => false,
        "s" => true,
        other => return Err(format!("unexpected trailer {other:?}")),
    };
    Ok(EquationSpec::new(
        name,
        parse_word(&left)?,
        parse_word(&right)?,
        swap,
    ))
}

fn parse_word(text: &str) -> std::result::Result<WordSpec, String> {
    let text = text.trim();
    if text.is_empty() || text == "()" || text == "1" {
        return Ok(WordSpec::empty());
    }
    let mut word = WordSpec::empty();
    for token in text.split_whitespace() {
        if let Some(base) = token.strip_suffix("^-1") {
            word = word.then_inv(check_name(base)?);
        } else {
            word = word.then(check_name(token)?);
        }
    }
    Ok(word)
}

fn check_name(name: &str) -> std::result::Result<&str, String> {
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(format!("bad symbol name {name:?}"));
    }
    Ok(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn level(n: u32) -> Level {
        Level::new(n).unwrap()
    }

    fn odometer_system() -> RecursionSystem {
        define_system(&[EquationSpec::new(
            "a",
            WordSpec::gen("a"),
            WordSpec::empty(),
            true,
        )])
        .unwrap()
    }

    #[test]
    fn accepts_the_adding_machine() {
        let sys = odometer_system();
        assert_eq!(sys.evaluate("a", level(2)).unwrap().encode(), "2:03");
        // The element acts as +1 on leaf labels.
        let a = sys.evaluate("a", level(6)).unwrap();
        for j in 0..64 {
            assert_eq!(a.apply_index(j).unwrap(), (j + 1) % 64);
        }
    }

    #[test]
    fn rejects_unknown_and_duplicate_symbols() {
        let err = define_system(&[EquationSpec::new(
            "a",
            WordSpec::gen("b"),
            WordSpec::empty(),
            false,
        )])
        .unwrap_err();
        assert_eq!(err, Error::UnknownSymbol("b".into()));
        let err = define_system(&[
            EquationSpec::new("a", WordSpec::empty(), WordSpec::empty(), false),
            EquationSpec::new("a", WordSpec::empty(), WordSpec::empty(), true),
        ])
        .unwrap_err();
        assert_eq!(err, Error::DuplicateSymbol("a".into()));
    }

    #[test]
    fn two_generator_cycle_system() {
        // a1 = (a2, 1) s;  a2 = (a1, 1)
        let sys = define_system(&[
            EquationSpec::new("a1", WordSpec::gen("a2"), WordSpec::empty(), true),
            EquationSpec::new("a2", WordSpec::gen("a1"), WordSpec::empty(), false),
        ])
        .unwrap();
        assert_eq!(sys.evaluate("a2", level(2)).unwrap().encode(), "2:02");
        // Restrictions are compatible: evaluating at level n and truncating
        // agrees with evaluating at the lower level.
        for n in 1..=6u32 {
            for sym in ["a1", "a2"] {
                let big = sys.evaluate(sym, level(n)).unwrap();
                let small = sys.evaluate(sym, level(n - 1)).unwrap();
                assert_eq!(big.truncate(level(n - 1)).unwrap(), small);
            }
        }
    }

    #[test]
    fn truncation_consistency_on_random_systems() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let names = ["x", "y", "z"];
        for _ in 0..25 {
            let mut specs = Vec::new();
            for name in names {
                let mk_word = |rng: &mut rand_chacha::ChaCha8Rng| {
                    let len = rng.gen_range(0..4);
                    let mut w = WordSpec::empty();
                    for _ in 0..len {
                        let pick = names[rng.gen_range(0..names.len())];
                        if rng.gen_bool(0.3) {
                            w = w.then_inv(pick);
                        } else {
                            w = w.then(pick);
                        }
                    }
                    w
                };
                let left = mk_word(&mut rng);
                let right = mk_word(&mut rng);
                specs.push(EquationSpec::new(name, left, right, rng.gen_bool(0.5)));
            }
            let sys = define_system(&specs).unwrap();
            for n in 1..=8u32 {
                for name in names {
                    let big = sys.evaluate(name, level(n)).unwrap();
                    let small = sys.evaluate(name, level(n - 1)).unwrap();
                    assert_eq!(big.truncate(level(n - 1)).unwrap(), small);
                }
            }
        }
    }

    #[test]
    fn trivial_to_level_checks() {
        // z1 = (z1, z1) forces the identity.
        let sys = define_system(&[EquationSpec::new(
            "z",
            WordSpec::gen("z"),
            WordSpec::gen("z"),
            false,
        )])
        .unwrap();
        assert!(sys
            .is_trivial_to_level(&WordSpec::gen("z"), level(10))
            .unwrap());
        // sigma is visibly non-trivial at level 1.
        let sys = odometer_system();
        assert!(!sys
            .is_trivial_to_level(&WordSpec::gen("a"), level(1))
            .unwrap());
    }

    #[test]
    fn syntactic_prover_accepts_trivial_shapes() {
        // c1 = ((), ()); c2 = (c1, c3); c3 = (c2, ())  -- all trivial.
        let sys = define_system(&[
            EquationSpec::new("c1", WordSpec::empty(), WordSpec::empty(), false),
            EquationSpec::new("c2", WordSpec::gen("c1"), WordSpec::gen("c3"), false),
            EquationSpec::new("c3", WordSpec::gen("c2"), WordSpec::empty(), false),
        ])
        .unwrap();
        assert!(sys.prove_trivial_syntactic(&["c1", "c2", "c3"]).unwrap());
        for name in ["c1", "c2", "c3"] {
            assert!(sys
                .is_trivial_to_level(&WordSpec::gen(name), level(8))
                .unwrap());
        }
        // t = (t, 1) is trivial.
        let sys = define_system(&[EquationSpec::new(
            "t",
            WordSpec::gen("t"),
            WordSpec::empty(),
            false,
        )])
        .unwrap();
        assert!(sys.prove_trivial_syntactic(&["t"]).unwrap());
    }

    #[test]
    fn syntactic_prover_rejects_swaps_and_foreign_symbols() {
        let sys = odometer_system();
        assert!(!sys.prove_trivial_syntactic(&["a"]).unwrap());
        // x = (y x y^-1, 1) with y outside the candidate set: conjugator is
        // stripped, the core is a candidate word, so this is accepted...
        let sys = define_system(&[
            EquationSpec::new(
                "x",
                WordSpec::gen("y").then("x").then_inv("y"),
                WordSpec::empty(),
                false,
            ),
            EquationSpec::new("y", WordSpec::gen("y"), WordSpec::empty(), true),
        ])
        .unwrap();
        assert!(sys.prove_trivial_syntactic(&["x"]).unwrap());
        // ...while a candidate word mentioning y itself is not.
        let sys = define_system(&[
            EquationSpec::new("x", WordSpec::gen("y"), WordSpec::empty(), false),
            EquationSpec::new("y", WordSpec::gen("y"), WordSpec::empty(), true),
        ])
        .unwrap();
        assert!(!sys.prove_trivial_syntactic(&["x"]).unwrap());
    }

    #[test]
    fn prover_agrees_with_numeric_checks() {
        // Whenever the prover says yes, bounded evaluation must agree.
        let systems = [
            vec![EquationSpec::new(
                "t",
                WordSpec::gen("t"),
                WordSpec::empty(),
                false,
            )],
            vec![
                EquationSpec::new("u", WordSpec::gen("v"), WordSpec::gen("u"), false),
                EquationSpec::new("v", WordSpec::gen("u").then("v"), WordSpec::empty(), false),
            ],
        ];
        for specs in systems {
            let sys = define_system(&specs).unwrap();
            let names: Vec<&str> = sys.symbol_names().iter().map(|s| s.as_str()).collect();
            if sys.prove_trivial_syntactic(&names).unwrap() {
                for name in &names {
                    assert!(sys
                        .is_trivial_to_level(&WordSpec::gen(name), level(12))
                        .unwrap());
                }
            }
        }
    }

    #[test]
    fn parse_and_display_roundtrip() {
        let text = "a1 = (a2, 1) s\na2 = (a1 a2^-1, ())\n";
        let sys = RecursionSystem::parse(text).unwrap();
        assert_eq!(sys.symbol_names(), &["a1".to_string(), "a2".to_string()]);
        let printed = sys.to_string();
        let reparsed = RecursionSystem::parse(&printed).unwrap();
        for n in 0..6u32 {
            assert_eq!(
                sys.evaluate("a1", level(n)).unwrap(),
                reparsed.evaluate("a1", level(n)).unwrap()
            );
        }
    }

    #[test]
    fn parse_errors() {
        assert!(RecursionSystem::parse("").is_err());
        assert!(RecursionSystem::parse("a1 (a2, 1)").is_err());
        assert!(RecursionSystem::parse("a1 = (a2 1)").is_err());
        assert!(RecursionSystem::parse("a1 = (a2, 1) q").is_err());
        assert!(RecursionSystem::parse("a1 = (b, 1)").is_err());
    }

    #[test]
    fn constants_truncate_downward_only() {
        let c = Portrait::random(level(3), 5);
        let sys = define_system(&[EquationSpec::new(
            "x",
            WordSpec::empty().then_const(c.clone()),
            WordSpec::empty(),
            false,
        )])
        .unwrap();
        // Usable while the constant's level suffices...
        assert!(sys.evaluate("x", level(4)).is_ok());
        // ...and rejected beyond it.
        assert!(matches!(
            sys.evaluate("x", level(5)),
            Err(Error::ConstLevel { .. })
        ));
    }
}
