use std::fmt::Write as _;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::models::{registry, Variant};
use crate::scalar::{fmt_rational, random_rational};
use crate::symcore::SymbolTable;
use crate::{QExpr, Rational};

/// Seed of the witness sampler; witnesses are reproducible.
pub const WITNESS_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        }
    }
}

/// One labelled residual: `"zero"` or its canonical infix form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residual {
    pub label: String,
    pub value: String,
}

impl Residual {
    pub fn zero(label: impl Into<String>) -> Self {
        Residual { label: label.into(), value: "zero".into() }
    }

    pub fn is_zero(&self) -> bool {
        self.value == "zero"
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_id: String,
    pub status: Status,
    pub residuals: Vec<Residual>,
    /// Point where a residual is nonzero, as `(symbol, rational)` pairs.
    #[serde(default, rename = "witness")]
    pub witness_point: Option<Vec<(String, String)>>,
    #[serde(rename = "millis")]
    pub duration_ms: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<VerificationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolved_variant: Option<Variant>,
    /// Set when the verdict rests on sampling rather than an identity.
    #[serde(default)]
    pub sampled: bool,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl VerificationReport {
    pub fn new(check_id: impl Into<String>) -> Self {
        VerificationReport {
            check_id: check_id.into(),
            status: Status::Pass,
            residuals: Vec::new(),
            witness_point: None,
            duration_ms: 0,
            notes: Vec::new(),
            children: Vec::new(),
            resolved_variant: None,
            sampled: false,
            seed: None,
        }
    }

    /// Report over exact residuals (already reduced by the relation). Pass
    /// iff every numerator is the zero polynomial; on failure a witness is
    /// sampled from the first nonzero residual.
    pub fn from_residuals(check_id: impl Into<String>, residuals: Vec<(String, QExpr)>) -> Self {
        let table = &registry().table;
        let mut r = Self::new(check_id);
        let mut witness_src = None;
        for (label, e) in residuals {
            if e.is_zero() {
                r.residuals.push(Residual::zero(label));
            } else {
                r.residuals.push(Residual { label, value: e.to_infix(table) });
                witness_src.get_or_insert(e);
            }
        }
        if let Some(e) = witness_src {
            r.witness_point = find_witness(&e, table);
        }
        r.refresh();
        r
    }

    pub fn push_child(&mut self, child: VerificationReport) {
        self.children.push(child);
        self.refresh();
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }

    /// Recomputes the status: pass iff all residuals vanish and all
    /// children pass.
    pub fn refresh(&mut self) {
        let ok = self.residuals.iter().all(Residual::is_zero) && self.children.iter().all(|c| c.passed());
        self.status = if ok { Status::Pass } else { Status::Fail };
    }

    /// Turns a report whose failure is the expected outcome into a passing
    /// detector report, keeping the original as a child.
    pub fn expect_failure(check_id: impl Into<String>, inner: VerificationReport) -> Self {
        let detected = !inner.passed();
        let mut r = Self::new(check_id);
        r.notes.push(format!("expected failure of `{}`: {}", inner.check_id, if detected { "detected" } else { "not detected" }));
        r.children.push(inner);
        r.status = if detected { Status::Pass } else { Status::Fail };
        r
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.duration_ms = start.elapsed().as_millis() as u64;
        self
    }

    /// Copy with every duration zeroed, for comparisons across runs.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        r.duration_ms = 0;
        r.children = r.children.iter().map(Self::without_timing).collect();
        r
    }

    /// One JSON line.
    pub fn to_record(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }

    /// `check_id  PASS  3 ms` plus indented details for failures.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(&mut out, 0);
        out
    }

    fn write_text(&self, out: &mut String, depth: usize) {
        let pad = "  ".repeat(depth);
        let _ = write!(out, "{pad}{:<52} {} {:>6} ms", self.check_id, self.status.label(), self.duration_ms);
        if let Some(v) = self.resolved_variant {
            let _ = write!(out, "  [resolved: {v}]");
        }
        if self.sampled {
            let _ = write!(out, "  [sampled");
            if let Some(s) = self.seed {
                let _ = write!(out, ", seed {s}");
            }
            out.push(']');
        }
        out.push('\n');
        for n in &self.notes {
            let _ = writeln!(out, "{pad}    note: {n}");
        }
        if !self.passed() {
            for res in self.residuals.iter().filter(|r| !r.is_zero()) {
                let _ = writeln!(out, "{pad}    residual {}: {}", res.label, res.value);
            }
            if let Some(w) = &self.witness_point {
                let pts: Vec<String> = w.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let _ = writeln!(out, "{pad}    witness: {}", pts.join(", "));
            }
        }
        for c in &self.children {
            c.write_text(out, depth + 1);
        }
    }

    /// Depth-first search for a child by id (including `self`).
    pub fn find(&self, id: &str) -> Option<&VerificationReport> {
        if self.check_id == id {
            return Some(self);
        }
        self.children.iter().find_map(|c| c.find(id))
    }
}

/// Samples small rationals for the symbols of `e` until its numerator and
/// denominator are both nonzero.
pub fn find_witness(e: &QExpr, table: &SymbolTable) -> Option<Vec<(String, String)>> {
    let syms: Vec<_> = e.symbols().into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(WITNESS_SEED);
    for _ in 0..200 {
        let mut point: Vec<Option<Rational>> = vec![None; table.len()];
        for &s in &syms {
            point[s.index()] = Some(random_rational(&mut rng, 9));
        }
        match (e.num().eval(&point), e.den().eval(&point)) {
            (Ok(n), Ok(d)) if !num_traits::Zero::is_zero(&n) && !num_traits::Zero::is_zero(&d) => {
                return Some(
                    syms.iter()
                        .map(|&s| (table.name(s).to_string(), fmt_rational(point[s.index()].as_ref().unwrap())))
                        .collect(),
                );
            }
            _ => continue,
        }
    }
    None
}
