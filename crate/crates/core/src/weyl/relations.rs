use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::words::*;
use super::{ParameterAction, WeylError};
use crate::models::registry;
use crate::scalar::{int, random_rational};
use crate::verify::{Residual, VerificationReport};

/// Resampling budget per point before giving up on a relation.
pub const MAX_RESAMPLES: usize = 100;

/// `lhs = rhs` in the group.
#[derive(Clone, Debug)]
pub struct Relation {
    pub name: String,
    pub lhs: GroupWord,
    pub rhs: GroupWord,
}

fn word(src: &str, ctx: Context) -> GroupWord {
    GroupWord::parse(src, ctx).expect("relation words are well formed")
}

/// The presentation of the (extended) affine Weyl group of type D3(2):
/// involutive generators, braid order 4 between `s0, s1` and `s1, s2`,
/// 2 between `s0, s2`; in the extended group `pi` swaps `s0` and `s2`.
pub fn relations_for(ctx: Context) -> Vec<Relation> {
    let id = GroupWord::empty(ctx);
    let rel = |name: &str, lhs: GroupWord, rhs: GroupWord| Relation { name: name.to_string(), lhs, rhs };
    let mut out = vec![
        rel("s0^2", word("s0 s0", ctx), id.clone()),
        rel("s1^2", word("s1 s1", ctx), id.clone()),
        rel("s2^2", word("s2 s2", ctx), id.clone()),
        rel("(s0 s1)^4", word("s0 s1", ctx).pow(4), id.clone()),
        rel("(s1 s2)^4", word("s1 s2", ctx).pow(4), id.clone()),
        rel("(s0 s2)^2", word("s0 s2", ctx).pow(2), id.clone()),
    ];
    if ctx == Context::Th2 {
        out.push(rel("pi^2", word("pi pi", ctx), id));
        out.push(rel("pi s0 pi = s2", word("pi s0 pi", ctx), word("s2", ctx)));
        out.push(rel("pi s1 pi = s1", word("pi s1 pi", ctx), word("s1", ctx)));
        out.push(rel("pi s2 pi = s0", word("pi s2 pi", ctx), word("s0", ctx)));
    }
    out
}

/// Random exact point on the normalization plane: numerators and
/// denominators uniform in `[-50, 50]`.
pub fn random_point(ctx: Context, rng: &mut ChaCha8Rng) -> ExactPoint {
    let dim = registry().system(ctx.system_id()).expect("context system").dim();
    let state = (0..dim).map(|_| random_rational(rng, 50)).collect();
    let a0 = random_rational(rng, 50);
    let a2 = random_rational(rng, 50);
    let a1 = int(1) - a0.clone() - a2.clone();
    ExactPoint { state, alphas: [a0, a1, a2], eta: random_rational(rng, 50), indep: random_rational(rng, 50) }
}

fn param_report(id: String, lhs: &ParameterAction, rhs: &ParameterAction) -> VerificationReport {
    let mut r = VerificationReport::new(id);
    r.residuals.push(if lhs == rhs {
        Residual::zero("action(lhs) - action(rhs)")
    } else {
        Residual { label: "action(lhs) - action(rhs)".into(), value: format!("{lhs:?} vs {rhs:?}") }
    });
    r.refresh();
    r
}

/// Evaluates both sides at `samples` regular random points.
fn field_report(
    id: String,
    rel: &Relation,
    ordering: Ordering,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport, WeylError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = VerificationReport::new(id);
    r.sampled = true;
    r.seed = Some(seed);
    let mut agreed = 0;
    for _ in 0..samples {
        let mut attempts = 0;
        let (p, lhs, rhs) = loop {
            if attempts == MAX_RESAMPLES {
                return Err(WeylError::Sampling { relation: rel.name.clone(), attempts });
            }
            attempts += 1;
            let p = random_point(rel.lhs.context, &mut rng);
            match (apply_word_ordered(&rel.lhs, &p, ordering), apply_word_ordered(&rel.rhs, &p, ordering)) {
                (Ok(a), Ok(b)) => break (p, a, b),
                (Err(WeylError::Singular { .. }), _) | (_, Err(WeylError::Singular { .. })) => continue,
                (Err(e), _) | (_, Err(e)) => return Err(e),
            }
        };
        if lhs != rhs {
            r.residuals.push(Residual {
                label: "lhs(p) - rhs(p)".into(),
                value: format!("{} vs {}", lhs.display(rel.lhs.context), rhs.display(rel.lhs.context)),
            });
            r.witness_point = Some(vec![("point".into(), p.display(rel.lhs.context))]);
            break;
        }
        agreed += 1;
    }
    if r.residuals.is_empty() {
        r.residuals.push(Residual::zero(format!("agreement at {agreed} points")));
    }
    r.refresh();
    Ok(r)
}

/// Relations on parameters (exact, signs included) and on the maps
/// (sampled), translation shifts of `T1, T2`, and normalization of every
/// generator. `pi T1 pi` against `T2` is reported without being asserted.
pub fn verify_group_relations(samples: usize, seed: u64) -> Result<VerificationReport, crate::verify::VerifyError> {
    let start = Instant::now();
    let mut top = VerificationReport::new("group/relations");
    top.sampled = true;
    top.seed = Some(seed);
    top.notes.push(
        "presentation assumed: involutions s0 s1 s2, (s0 s1)^4, (s1 s2)^4, (s0 s2)^2; pi^2, pi s0 pi = s2, pi s1 pi = s1"
            .into(),
    );
    let ordering = match calibrate_convention() {
        Ok(o) => o,
        Err(e) => {
            top.residuals.push(Residual { label: "calibration".into(), value: e.to_string() });
            top.refresh();
            return Ok(top.timed(start));
        }
    };
    top.notes.push(format!("word convention: {ordering}"));
    top.notes.push(format!("samples per relation: {}", samples.max(1)));

    let mut stream = 0u64;
    for ctx in [Context::Th1, Context::Th2] {
        let gens: &[Generator] = match ctx {
            Context::Th1 => &[Generator::S0, Generator::S1, Generator::S2],
            Context::Th2 => &[Generator::S0, Generator::S1, Generator::S2, Generator::Pi],
        };
        let mut norm = VerificationReport::new(format!("group/{}/normalization", ctx.name()));
        for &g in gens {
            let a = generator_action(g, ctx).map_err(to_verify)?;
            let ok = a.preserves_normalization() && a.offset == [0; 3] && a.then(&a).is_identity();
            norm.residuals.push(if ok {
                Residual::zero(g.name())
            } else {
                Residual { label: g.name().into(), value: format!("{a:?}") }
            });
        }
        norm.refresh();
        top.push_child(norm);

        for rel in relations_for(ctx) {
            let l = parameter_action_ordered(&rel.lhs, ordering).map_err(to_verify)?;
            let rr = parameter_action_ordered(&rel.rhs, ordering).map_err(to_verify)?;
            top.push_child(param_report(format!("group/{}/param/{}", ctx.name(), rel.name), &l, &rr));
            stream += 1;
            let id = format!("group/{}/field/{}", ctx.name(), rel.name);
            let child = match field_report(id.clone(), &rel, ordering, samples.max(1), seed.wrapping_add(stream)) {
                Ok(c) => c,
                Err(e) => {
                    let mut c = VerificationReport::new(id);
                    c.residuals.push(Residual { label: "sampling".into(), value: e.to_string() });
                    c.refresh();
                    c
                }
            };
            top.push_child(child);
        }

        let s0s1 = parameter_action_ordered(&GroupWord::parse("s0 s1 s0 s1", ctx).map_err(to_verify)?, ordering)
            .map_err(to_verify)?;
        let mut c = VerificationReport::new(format!("group/{}/param/(s0 s1)^2 is not identity", ctx.name()));
        c.residuals.push(if s0s1.is_identity() {
            Residual { label: "(s0 s1)^2".into(), value: "identity".into() }
        } else {
            Residual::zero("(s0 s1)^2 != id")
        });
        c.refresh();
        top.push_child(c);

        for (name, w, want) in [("T1", GroupWord::t1(ctx), T1_SHIFT), ("T2", GroupWord::t2(ctx), T2_SHIFT)] {
            let a = parameter_action_ordered(&w, ordering).map_err(to_verify)?;
            let got = a.translation_mod_normalization();
            let mut c = VerificationReport::new(format!("group/{}/shift/{name}", ctx.name()));
            c.residuals.push(if got == Some(want) && a.eta_sign == 1 && a.indep_sign == 1 {
                Residual::zero(format!("shift {want:?}, signs +1"))
            } else {
                Residual {
                    label: format!("shift {want:?}, signs +1"),
                    value: format!("{got:?}, eta {}, indep {}", a.eta_sign, a.indep_sign),
                }
            });
            c.refresh();
            top.push_child(c);
        }

        if ctx == Context::Th2 {
            let pt1p = GroupWord::parse("pi T1 pi", ctx).map_err(to_verify)?;
            let a = parameter_action_ordered(&pt1p, ordering).map_err(to_verify)?;
            let b = parameter_action_ordered(&GroupWord::t2(ctx), ordering).map_err(to_verify)?;
            top.notes.push(format!(
                "pi T1 pi = T2 on parameters (mod normalization): {}; shift of pi T1 pi: {:?}",
                if a.equals_mod_normalization(&b) { "yes" } else { "no" },
                a.translation_mod_normalization()
            ));
        }
    }
    Ok(top.timed(start))
}

fn to_verify(e: WeylError) -> crate::verify::VerifyError {
    match e {
        WeylError::Model(m) => m.into(),
        other => crate::verify::VerifyError::Structural { check: "group/relations".into(), msg: other.to_string() },
    }
}
