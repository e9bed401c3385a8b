use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use super::{ParameterAction, WeylError};
use crate::models::{registry, BirationalMap, Variant};
use crate::scalar::fmt_rational;
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    S0,
    S1,
    S2,
    Pi,
}

impl Generator {
    pub fn name(self) -> &'static str {
        match self {
            Generator::S0 => "s0",
            Generator::S1 => "s1",
            Generator::S2 => "s2",
            Generator::Pi => "pi",
        }
    }
}

/// Which realization the generators act in: the five-dimensional system
/// (no `pi`) or the four-dimensional Hamiltonian system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Context {
    Th1,
    Th2,
}

impl Context {
    pub fn system_id(self) -> &'static str {
        match self {
            Context::Th1 => "five_dim",
            Context::Th2 => "ham_4d",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Context::Th1 => "th1",
            Context::Th2 => "th2",
        }
    }
}

/// Composition order of a written word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Ordering {
    /// The leftmost letter acts first.
    LeftToRight,
    /// The rightmost letter acts first.
    RightToLeft,
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ordering::LeftToRight => "left-to-right (leftmost letter acts first)",
            Ordering::RightToLeft => "right-to-left (rightmost letter acts first)",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupWord {
    pub letters: Vec<Generator>,
    pub context: Context,
}

impl GroupWord {
    pub fn new(letters: Vec<Generator>, context: Context) -> Result<Self, WeylError> {
        if context == Context::Th1 && letters.contains(&Generator::Pi) {
            return Err(WeylError::PiOutsideTh2);
        }
        Ok(GroupWord { letters, context })
    }

    pub fn empty(context: Context) -> Self {
        GroupWord { letters: Vec::new(), context }
    }

    /// Parses letters `s0 s1 s2 pi` (also `π`), with or without spaces,
    /// plus the shorthands `T1 = s1 s2 s1 s0` and `T2 = s1 T1 s1`.
    pub fn parse(src: &str, context: Context) -> Result<Self, WeylError> {
        let mut letters = Vec::new();
        let mut rest = src.trim();
        while !rest.is_empty() {
            let (tok, gens): (&str, &[Generator]) = if rest.starts_with("s0") {
                ("s0", &[Generator::S0])
            } else if rest.starts_with("s1") {
                ("s1", &[Generator::S1])
            } else if rest.starts_with("s2") {
                ("s2", &[Generator::S2])
            } else if rest.starts_with("pi") {
                ("pi", &[Generator::Pi])
            } else if rest.starts_with('π') {
                ("π", &[Generator::Pi])
            } else if rest.starts_with("T1") {
                ("T1", &T1)
            } else if rest.starts_with("T2") {
                ("T2", &T2)
            } else {
                return Err(WeylError::Parse(format!("unexpected `{}` in word `{src}`", rest.chars().next().unwrap())));
            };
            letters.extend_from_slice(gens);
            rest = rest[tok.len()..].trim_start_matches([' ', '*', '\u{b7}', ',']);
        }
        Self::new(letters, context)
    }

    pub fn t1(context: Context) -> Self {
        GroupWord { letters: T1.to_vec(), context }
    }

    pub fn t2(context: Context) -> Self {
        GroupWord { letters: T2.to_vec(), context }
    }

    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        GroupWord { letters, context: self.context }
    }

    pub fn pow(&self, n: usize) -> GroupWord {
        GroupWord { letters: self.letters.repeat(n), context: self.context }
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Letters in the order they act under `ordering`.
    pub fn acting_order(&self, ordering: Ordering) -> Vec<Generator> {
        match ordering {
            Ordering::LeftToRight => self.letters.clone(),
            Ordering::RightToLeft => self.letters.iter().rev().copied().collect(),
        }
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("id");
        }
        let names: Vec<&str> = self.letters.iter().map(|g| g.name()).collect();
        f.write_str(&names.join(" "))
    }
}

const T1: [Generator; 4] = [Generator::S1, Generator::S2, Generator::S1, Generator::S0];
const T2: [Generator; 6] =
    [Generator::S1, Generator::S1, Generator::S2, Generator::S1, Generator::S0, Generator::S1];

/// The map realizing `g`; disputed generators use the corrected variant.
pub fn generator_map(g: Generator, context: Context) -> Result<&'static BirationalMap, WeylError> {
    let id = match (context, g) {
        (Context::Th1, Generator::S0) => "s0_5d",
        (Context::Th1, Generator::S1) => "s1_5d",
        (Context::Th1, Generator::S2) => "s2_5d",
        (Context::Th1, Generator::Pi) => return Err(WeylError::PiOutsideTh2),
        (Context::Th2, Generator::S0) => "s0_4d",
        (Context::Th2, Generator::S1) => "s1_4d",
        (Context::Th2, Generator::S2) => "s2_4d",
        (Context::Th2, Generator::Pi) => "pi_4d",
    };
    let reg = registry();
    let v = if reg.is_disputed(id) { Variant::Corrected } else { Variant::Printed };
    Ok(reg.map(id, v)?)
}

pub fn generator_action(g: Generator, context: Context) -> Result<ParameterAction, WeylError> {
    Ok(generator_map(g, context)?.action)
}

pub fn parameter_action_ordered(word: &GroupWord, ordering: Ordering) -> Result<ParameterAction, WeylError> {
    word.acting_order(ordering)
        .into_iter()
        .try_fold(ParameterAction::identity(), |acc, g| Ok(acc.then(&generator_action(g, word.context)?)))
}

/// Tries both orderings on `T1 = s1 s2 s1 s0` and keeps the one that gives
/// the shift `(-2, 2, 0)` with both signs `+1`.
pub fn calibrate_convention() -> Result<Ordering, WeylError> {
    static CACHE: OnceLock<Result<Ordering, WeylError>> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            let t1 = GroupWord::t1(Context::Th1);
            let mut hits = Vec::new();
            for o in [Ordering::LeftToRight, Ordering::RightToLeft] {
                let a = parameter_action_ordered(&t1, o)?;
                if a.translation_mod_normalization() == Some(T1_SHIFT) && a.eta_sign == 1 && a.indep_sign == 1 {
                    hits.push(o);
                }
            }
            match hits[..] {
                [o] => Ok(o),
                [] => Err(WeylError::Calibration("no ordering reproduces the shift of T1".into())),
                _ => Err(WeylError::Calibration("both orderings reproduce the shift of T1".into())),
            }
        })
        .clone()
}

pub const T1_SHIFT: [i64; 3] = [-2, 2, 0];
pub const T2_SHIFT: [i64; 3] = [0, -2, 2];

/// Action of `word` under the calibrated ordering.
pub fn parameter_action(word: &GroupWord) -> Result<ParameterAction, WeylError> {
    parameter_action_ordered(word, calibrate_convention()?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Shift {
    /// `Some(v)` when the action is `alpha -> alpha + v` on the
    /// normalization plane.
    pub shift: Option<[i64; 3]>,
    pub eta_sign: i8,
    pub indep_sign: i8,
}

pub fn translation_shift(word: &GroupWord) -> Result<Shift, WeylError> {
    let a = parameter_action(word)?;
    Ok(Shift { shift: a.translation_mod_normalization(), eta_sign: a.eta_sign, indep_sign: a.indep_sign })
}

/// Exact point: state (in the context system's order), parameters, `eta`
/// and the independent variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactPoint {
    pub state: Vec<Rational>,
    pub alphas: [Rational; 3],
    pub eta: Rational,
    pub indep: Rational,
}

impl ExactPoint {
    /// JSON object with every rational as a `[numerator, denominator]` pair.
    pub fn to_json(&self, context: Context) -> serde_json::Value {
        let reg = registry();
        let sys = reg.system(context.system_id()).expect("context system");
        let pair = |q: &Rational| serde_json::json!([q.numer().to_string(), q.denom().to_string()]);
        let mut obj = serde_json::Map::new();
        for (s, v) in sys.state.iter().zip(&self.state) {
            obj.insert(reg.table.name(*s).to_string(), pair(v));
        }
        for (s, v) in reg.alphas().iter().zip(&self.alphas) {
            obj.insert(reg.table.name(*s).to_string(), pair(v));
        }
        obj.insert("eta".into(), pair(&self.eta));
        obj.insert(reg.table.name(sys.indep).to_string(), pair(&self.indep));
        serde_json::Value::Object(obj)
    }

    pub fn display(&self, context: Context) -> String {
        let reg = registry();
        let sys = reg.system(context.system_id()).expect("context system");
        let mut parts: Vec<String> =
            sys.state.iter().zip(&self.state).map(|(s, v)| format!("{}={}", reg.table.name(*s), fmt_rational(v))).collect();
        for (s, v) in reg.alphas().iter().zip(&self.alphas) {
            parts.push(format!("{}={}", reg.table.name(*s), fmt_rational(v)));
        }
        parts.push(format!("eta={}", fmt_rational(&self.eta)));
        parts.push(format!("{}={}", reg.table.name(sys.indep), fmt_rational(&self.indep)));
        parts.join(", ")
    }
}

/// One generator applied to an exact point.
pub fn apply_generator(g: Generator, context: Context, p: &ExactPoint) -> Result<ExactPoint, WeylError> {
    let reg = registry();
    let map = generator_map(g, context)?;
    let sys = reg.system(&map.source)?;
    if p.state.len() != sys.dim() {
        return Err(WeylError::Parse(format!("point has {} state values, expected {}", p.state.len(), sys.dim())));
    }
    let mut point: Vec<Option<Rational>> = vec![None; reg.table.len()];
    for (s, v) in sys.state.iter().zip(&p.state) {
        point[s.index()] = Some(v.clone());
    }
    for (s, v) in reg.alphas().iter().zip(&p.alphas) {
        point[s.index()] = Some(v.clone());
    }
    point[reg.sym("eta").index()] = Some(p.eta.clone());
    point[sys.indep.index()] = Some(p.indep.clone());
    let mut state = Vec::with_capacity(sys.dim());
    for s in &sys.state {
        let f = map.component(*s).expect("generator maps every state symbol");
        let v = f.eval(&point).map_err(|_| WeylError::Singular { generator: g.name().to_string() })?;
        state.push(v);
    }
    let a = &map.action;
    let sign = |s: i8, v: &Rational| if s < 0 { -v.clone() } else { v.clone() };
    Ok(ExactPoint { state, alphas: a.apply(&p.alphas), eta: sign(a.eta_sign, &p.eta), indep: sign(a.indep_sign, &p.indep) })
}

/// Applies `word` letter by letter under the calibrated ordering. A
/// vanishing denominator reports the generator where it happened.
pub fn apply_word_to_point(word: &GroupWord, p: &ExactPoint) -> Result<ExactPoint, WeylError> {
    apply_word_ordered(word, p, calibrate_convention()?)
}

pub fn apply_word_ordered(word: &GroupWord, p: &ExactPoint, ordering: Ordering) -> Result<ExactPoint, WeylError> {
    let mut cur = p.clone();
    for (i, g) in word.acting_order(ordering).into_iter().enumerate() {
        cur = apply_generator(g, word.context, &cur).map_err(|e| match e {
            WeylError::Singular { generator } => WeylError::Singular { generator: format!("{generator} (letter {})", i + 1) },
            other => other,
        })?;
    }
    Ok(cur)
}

/// `alpha0 + alpha1 + alpha2 - 1`.
pub fn normalization_defect(p: &ExactPoint) -> Rational {
    p.alphas[0].clone() + p.alphas[1].clone() + p.alphas[2].clone() - Rational::from_integer(1.into())
}
