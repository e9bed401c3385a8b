use super::{
    BirationalMap, Clock, FirstIntegral, Hamiltonian, ParticularSolution, Registry, SolutionKind, Variant,
    VectorFieldSystem,
};
use crate::scalar::int;
use crate::symcore::{ex, SymbolKind, SymbolTable};
use crate::weyl::ParameterAction;
use crate::{QDerivation, QExpr};

fn table() -> SymbolTable {
    let mut t = SymbolTable::new();
    let mut add = |name: &str, kind: SymbolKind| {
        t.push(name, kind).expect("registry symbol names are unique");
    };
    for n in ["x", "y", "z", "w", "q", "q1", "p1", "q2", "p2", "x1", "y1", "dx", "dp1", "dp2"] {
        add(n, SymbolKind::State);
    }
    add("t", SymbolKind::Independent);
    add("s", SymbolKind::Independent);
    for n in ["alpha0", "alpha1", "alpha2"] {
        add(n, SymbolKind::Parameter);
    }
    for n in ["eta", "C1", "C2"] {
        add(n, SymbolKind::Constant);
    }
    // e^{C1 (t + C2)}, e^{alpha2 t}, e^{alpha0 t}
    let rate = |t: &SymbolTable, src: &str| SymbolKind::ExpGenerator { rate: ex(src, t) };
    let k = rate(&t, "C1");
    t.push("E", k).unwrap();
    let k = rate(&t, "alpha2");
    t.push("E1", k).unwrap();
    let k = rate(&t, "alpha0");
    t.push("E2", k).unwrap();
    t
}

struct Builder {
    t: SymbolTable,
}

impl Builder {
    fn e(&self, src: &str) -> QExpr {
        ex(src, &self.t)
    }

    fn syms(&self, names: &str) -> Vec<crate::symcore::Symbol> {
        names.split_whitespace().map(|n| self.t.sym(n)).collect()
    }

    fn system(&self, id: &str, state: &str, indep: &str, rhs: &[&str]) -> VectorFieldSystem {
        let state = self.syms(state);
        assert_eq!(state.len(), rhs.len(), "{id}");
        VectorFieldSystem {
            id: id.to_string(),
            state,
            indep: self.t.sym(indep),
            params: self.syms("alpha0 alpha1 alpha2"),
            constants: self.syms("eta"),
            rhs: rhs.iter().map(|r| self.e(r)).collect(),
            relation: Some(crate::QRelation::unit_sum(&self.syms("alpha0 alpha1 alpha2"), 1)),
            hamiltonian: None,
        }
    }

    fn hamiltonian(&self, h: &str, pairs: &[(&str, &str)]) -> Hamiltonian {
        Hamiltonian {
            h: self.e(h),
            pairs: pairs.iter().map(|(q, p)| (self.t.sym(q), self.t.sym(p))).collect(),
            parts: Vec::new(),
            expanded: None,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn map(
        &self,
        id: &str,
        variant: Variant,
        source: &str,
        target: &str,
        comps: &[(&str, &str)],
        action: ParameterAction,
        clock: Clock,
    ) -> BirationalMap {
        BirationalMap {
            id: id.to_string(),
            variant,
            source: source.to_string(),
            target: target.to_string(),
            var_map: comps.iter().map(|(s, f)| (self.t.sym(s), self.e(f))).collect(),
            action,
            clock,
        }
    }
}

const S0: [[i64; 3]; 3] = [[-1, 0, 0], [2, 1, 0], [0, 0, 1]];
const S1: [[i64; 3]; 3] = [[1, 1, 0], [0, -1, 0], [0, 1, 1]];
const S2: [[i64; 3]; 3] = [[1, 0, 0], [0, 1, 2], [0, 0, -1]];
const PI: [[i64; 3]; 3] = [[0, 0, 1], [0, 1, 0], [1, 0, 0]];

/// Builds the registry from the printed formulas.
pub fn build_registry() -> Registry {
    let b = Builder { t: table() };
    let id = ParameterAction::identity();

    let five_dim = b.system(
        "five_dim",
        "x y z w q",
        "t",
        &[
            "-(x*w - alpha2)*x + 1/2",
            "(x*w + z*q - 1)*y + alpha1*w*q",
            "-(z*q - alpha0)*z - eta/2",
            "(x*w - z*q - alpha2)*w + y*z",
            "(z*q - x*w - alpha0)*q + x*y",
        ],
    );
    let reduced = b.system(
        "reduced_alpha1_zero",
        "x z w q",
        "t",
        &[
            "-(x*w - alpha2)*x + 1/2",
            "-(z*q - alpha0)*z - eta/2",
            "(x*w - z*q - alpha2)*w",
            "(z*q - x*w - alpha0)*q",
        ],
    );
    let linear_xz = b.system("linear_xz", "x z", "t", &["alpha2*x + 1/2", "alpha0*z - eta/2"]);
    let xzw = b.system(
        "xzw",
        "x z w",
        "t",
        &["-(x*w - alpha2)*x + 1/2", "alpha0*z - eta/2", "(x*w - alpha2)*w"],
    );
    let second_order_x = b.system("second_order_x", "x dx", "t", &["dx", "dx^2/x - alpha2/2 - 1/(4*x)"]);

    let k1 = "-(q1^2*p1^2 - 2*alpha2*q1*p1 - q1)/(2*s)";
    let k2 = "-(q2^2*p2^2 + 2*(alpha1 + alpha2)*q2*p2 + eta*s*q2)/(2*s)";
    let coupling = "-p1*p2/s";
    let mut ham_4d = b.system(
        "ham_4d",
        "q1 p1 q2 p2",
        "s",
        &[
            "-q1^2*p1/s + alpha2*q1/s - p2/s",
            "q1*p1^2/s - alpha2*p1/s - 1/(2*s)",
            "-q2^2*p2/s - (alpha1 + alpha2)*q2/s - p1/s",
            "q2*p2^2/s + (alpha1 + alpha2)*p2/s + eta/2",
        ],
    );
    let mut h = b.hamiltonian(&format!("{k1} + {k2} + {coupling}"), &[("q1", "p1"), ("q2", "p2")]);
    h.parts = vec![("K1".into(), b.e(k1)), ("K2".into(), b.e(k2)), ("coupling".into(), b.e(coupling))];
    h.expanded = Some(b.e(
        "-(q1^2*p1^2 - 2*alpha2*q1*p1 - q1)/(2*s) \
         - (q2^2*p2^2 + 2*(alpha1 + alpha2)*q2*p2 + eta*s*q2)/(2*s) - p1*p2/s",
    ));
    ham_4d.hamiltonian = Some(h);

    // The principal parts: the rhs of ham_4d with the other pair set to zero.
    let mut k1_sys = b.system(
        "K1_sys",
        "q1 p1",
        "s",
        &["-q1^2*p1/s + alpha2*q1/s", "q1*p1^2/s - alpha2*p1/s - 1/(2*s)"],
    );
    k1_sys.hamiltonian = Some(b.hamiltonian(k1, &[("q1", "p1")]));
    let mut k2_sys = b.system(
        "K2_sys",
        "q2 p2",
        "s",
        &["-q2^2*p2/s - (alpha1 + alpha2)*q2/s", "q2*p2^2/s + (alpha1 + alpha2)*p2/s + eta/2"],
    );
    k2_sys.hamiltonian = Some(b.hamiltonian(k2, &[("q2", "p2")]));
    let mut tilde_k2 = b.system(
        "tildeK2_sys",
        "x1 y1",
        "s",
        &[
            "-(x1^2*y1 + (alpha1 + alpha2 - 1)*x1)/s",
            "(x1*y1^2 + (alpha1 + alpha2 - 1)*y1)/s + eta/(2*s)",
        ],
    );
    tilde_k2.hamiltonian = Some(b.hamiltonian(
        "-(x1^2*y1^2 + 2*(alpha1 + alpha2 - 1)*x1*y1 + eta*x1)/(2*s)",
        &[("x1", "y1")],
    ));
    // y := p1, w := p2
    let coupled = b.system(
        "coupled_second_order",
        "p1 dp1 p2 dp2",
        "s",
        &[
            "dp1",
            "dp1^2/p1 - dp1/s - alpha2/(2*s^2) - 1/(4*s^2*p1) - p1^2*p2/s^2",
            "dp2",
            "dp2^2/p2 - dp2/s + alpha0*eta/(2*s) - eta^2/(4*p2) - p1*p2^2/s^2",
        ],
    );

    let systems = vec![
        five_dim,
        reduced,
        linear_xz,
        xzw,
        second_order_x,
        ham_4d,
        k1_sys,
        k2_sys,
        tilde_k2,
        coupled,
    ];

    let p = Variant::Printed;
    let c = Variant::Corrected;
    let lin = Clock::Linear;
    let s2_5d = |v: Variant, coef: &str| {
        let wimg = format!("-w + 2*{coef}/x + 1/x^2");
        b.map(
            "s2_5d",
            v,
            "five_dim",
            "five_dim",
            &[("x", "-x"), ("y", "y - 2*alpha2*q/x - q/x^2"), ("z", "-z"), ("w", &wimg), ("q", "-q")],
            ParameterAction::linear(S2, -1, 1),
            lin,
        )
    };
    let chart2 = |v: Variant, coef: &str| {
        let wimg = format!("w - 2*{coef}/x - 1/x^2");
        b.map(
            "chart2",
            v,
            "five_dim",
            "five_dim",
            &[("x", "x"), ("y", "y - 2*alpha2*q/x - q/x^2"), ("z", "z"), ("w", &wimg), ("q", "q")],
            id,
            lin,
        )
    };
    let s2_4d = |v: Variant, eta_sign: i8| {
        b.map(
            "s2_4d",
            v,
            "ham_4d",
            "ham_4d",
            &[("q1", "-q1 + 2*alpha2/p1 + 1/p1^2"), ("p1", "-p1"), ("q2", "-q2"), ("p2", "-p2")],
            ParameterAction::linear(S2, eta_sign, -1),
            lin,
        )
    };
    let maps = vec![
        b.map(
            "s0_5d",
            p,
            "five_dim",
            "five_dim",
            &[
                ("x", "x"),
                ("y", "y - 2*alpha0*w/z + eta*w/z^2"),
                ("z", "z"),
                ("w", "w"),
                ("q", "q - 2*alpha0/z + eta/z^2"),
            ],
            ParameterAction::linear(S0, -1, 1),
            lin,
        ),
        b.map(
            "s1_5d",
            p,
            "five_dim",
            "five_dim",
            &[("x", "x + alpha1*q/y"), ("y", "y"), ("z", "z + alpha1*w/y"), ("w", "w"), ("q", "q")],
            ParameterAction::linear(S1, 1, 1),
            lin,
        ),
        s2_5d(p, "alpha0"),
        s2_5d(c, "alpha2"),
        b.map(
            "chart0",
            p,
            "five_dim",
            "five_dim",
            &[
                ("x", "x"),
                ("y", "y - 2*alpha0*w/z + eta*w/z^2"),
                ("z", "z"),
                ("w", "w"),
                ("q", "q - 2*alpha0/z + eta/z^2"),
            ],
            id,
            lin,
        ),
        b.map(
            "chart1",
            p,
            "five_dim",
            "five_dim",
            &[("x", "x + alpha1*q/y"), ("y", "y"), ("z", "z + alpha1*w/y"), ("w", "w"), ("q", "q")],
            id,
            lin,
        ),
        chart2(p, "alpha0"),
        chart2(c, "alpha2"),
        b.map(
            "s0_4d",
            p,
            "ham_4d",
            "ham_4d",
            &[("q1", "q1"), ("p1", "p1"), ("q2", "q2 - 2*alpha0/p2 + eta*s/p2^2"), ("p2", "p2")],
            ParameterAction::linear(S0, 1, -1),
            lin,
        ),
        b.map(
            "s1_4d",
            p,
            "ham_4d",
            "ham_4d",
            &[
                ("q1", "q1"),
                ("p1", "p1 + alpha1*q2/(q1*q2 + 1)"),
                ("q2", "q2"),
                ("p2", "p2 + alpha1*q1/(q1*q2 + 1)"),
            ],
            ParameterAction::linear(S1, 1, 1),
            lin,
        ),
        s2_4d(p, -1),
        s2_4d(c, 1),
        b.map(
            "pi_4d",
            p,
            "ham_4d",
            "ham_4d",
            &[
                ("q1", "-eta*s*q2"),
                ("p1", "-p2/(eta*s)"),
                ("q2", "-q1/(eta*s)"),
                ("p2", "-eta*s*p1"),
            ],
            ParameterAction::linear(PI, 1, 1),
            lin,
        ),
        // s = e^{-t}; y is eliminated through y - w q = s.
        b.map(
            "reduce_5d_4d",
            p,
            "five_dim",
            "ham_4d",
            &[("q1", "w"), ("p1", "x"), ("q2", "q/s"), ("p2", "z*s")],
            id,
            Clock::ExpNeg,
        ),
        b.map("scale_step", p, "K2_sys", "tildeK2_sys", &[("x1", "s*q2"), ("y1", "p2/s")], id, lin),
    ];

    let integrals = vec![
        FirstIntegral { id: "ywq".into(), expr: b.e("y - w*q"), lambda: int(-1), system_id: "five_dim".into() },
        FirstIntegral {
            id: "I1".into(),
            expr: b.e("q1^2*p1^2 - 2*alpha2*q1*p1 - q1"),
            lambda: int(0),
            system_id: "K1_sys".into(),
        },
        FirstIntegral {
            id: "I2".into(),
            expr: b.e("x1^2*y1^2 + 2*(alpha1 + alpha2 - 1)*x1*y1 + eta*x1"),
            lambda: int(0),
            system_id: "tildeK2_sys".into(),
        },
    ];

    let rules = |names: &str| -> Vec<(crate::symcore::Symbol, QExpr)> {
        b.syms(names)
            .into_iter()
            .map(|g| match b.t.kind(g) {
                SymbolKind::ExpGenerator { rate } => (g, rate * &QExpr::var(g)),
                _ => unreachable!("generator expected"),
            })
            .collect()
    };
    let second_order_solution = |sid: &str, x_src: &str| {
        let x = b.e(x_src);
        let gens = rules("E");
        let d = gens.iter().fold(QDerivation::new(), |d, (g, r)| d.with(*g, r.clone()));
        let dx = d.apply(&x);
        ParticularSolution {
            id: sid.into(),
            system_id: "second_order_x".into(),
            kind: SolutionKind::Closed {
                bindings: vec![(b.t.sym("x"), x), (b.t.sym("dx"), dx)],
                generator_rules: gens,
            },
        }
    };
    let solutions = vec![
        ParticularSolution {
            id: "linear_xz_sol".into(),
            system_id: "linear_xz".into(),
            kind: SolutionKind::Closed {
                bindings: vec![
                    (b.t.sym("x"), b.e("C1*E1 - 1/(2*alpha2)")),
                    (b.t.sym("z"), b.e("C2*E2 + eta/(2*alpha0)")),
                ],
                generator_rules: rules("E1 E2"),
            },
        },
        second_order_solution("second_order_sol_a", "((E - alpha2)^2 - C1^2)/(4*C1^2*E)"),
        second_order_solution("second_order_sol_b", "(E^2*(alpha2^2 - C1^2) - 2*alpha2*E + 1)/(4*C1^2*E)"),
        ParticularSolution {
            id: "rest_wq_zero".into(),
            system_id: "linear_xz".into(),
            kind: SolutionKind::Restriction {
                source: "five_dim".into(),
                zeroed: b.syms("y w q"),
                param_values: vec![(b.t.sym("alpha1"), QExpr::zero())],
            },
        },
    ];

    Registry { table: b.t, systems, maps, integrals, solutions }
}
