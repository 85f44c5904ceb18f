//! Small worked computations, each reported as expected-versus-actual lines.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cayley::{separates_exhaustive, CayleyGroupoid, DerangedSide, ExhaustiveOptions};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::synth::{find_cycle, synth_cycle};
use crate::term::{enumerate_ordered_terms, Term, VarId};
use crate::vector::VecGroupoid;
use crate::verify::affine::{affine_separation_decision, parity_certifies, AffineWitness};

pub const DEMO_NAMES: [&str; 3] = ["affine-example", "deranged-product", "figure2"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemoCheck {
    pub label: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemoReport {
    pub name: String,
    pub checks: Vec<DemoCheck>,
}

impl DemoReport {
    fn new(name: &str) -> Self {
        DemoReport { name: name.into(), checks: Vec::new() }
    }

    fn check(&mut self, label: impl Into<String>, expected: impl ToString, actual: impl ToString) {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        let ok = expected == actual;
        self.checks.push(DemoCheck { label: label.into(), expected, actual, ok });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

impl fmt::Display for DemoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "demo {}", self.name)?;
        for c in &self.checks {
            let mark = if c.ok { "ok" } else { "MISMATCH" };
            writeln!(f, "  {:<40} expected {:<28} got {:<28} {mark}", c.label, c.expected, c.actual)?;
        }
        Ok(())
    }
}

pub fn run_demo(name: &str) -> Result<DemoReport> {
    match name {
        "affine-example" => affine_example(),
        "deranged-product" => deranged_product(),
        "figure2" => figure2(),
        other => Err(Error::Usage(format!("unknown demo `{other}`; choose one of {}", DEMO_NAMES.join(", ")))),
    }
}

/// 2×3 matrices over Z2, flattened row-major.
fn matrix_map(source: impl Fn(usize, usize) -> (usize, usize)) -> BitMatrix {
    let mut m = BitMatrix::zeros(6, 6);
    for r in 0..2 {
        for c in 0..3 {
            let (sr, sc) = source(r, c);
            m.set(r * 3 + c, sr * 3 + sc, true);
        }
    }
    m
}

fn show_matrix(v: &BitVec) -> String {
    let row = |r: usize| (0..3).map(|c| if v.get(r * 3 + c) { '1' } else { '0' }).collect::<String>();
    format!("[{} / {}]", row(0), row(1))
}

/// `x ⋆ y = α(x) + β(y) + c` on 2×3 matrices, where α shifts the left and
/// middle columns one place right (keeping the left one) and β copies the
/// top row onto the bottom row.
pub fn affine_example_groupoid() -> VecGroupoid {
    let alpha = matrix_map(|r, c| (r, c.saturating_sub(1)));
    let beta = matrix_map(|_, c| (0, c));
    VecGroupoid::affine(alpha, beta, BitVec::unit(6, 0)).expect("6x6 blocks")
}

pub fn affine_example_terms() -> (Term, Term) {
    ("((v*w)*(x*y))*z".parse().expect("literal"), "((v*(w*x))*y)*z".parse().expect("literal"))
}

fn affine_example() -> Result<DemoReport> {
    let g = affine_example_groupoid();
    let (s, t) = affine_example_terms();
    let mut r = DemoReport::new("affine-example");
    let c = g.c().clone();
    let beta_c = g.b().mul_vec(&c);
    let alpha_beta_c = g.a().mul_vec(&beta_c);
    let alpha2_beta_c = g.a().mul_vec(&alpha_beta_c);
    r.check("alpha beta (c)", "[110 / 110]", show_matrix(&alpha_beta_c));
    r.check("alpha^2 beta (c)", "[111 / 111]", show_matrix(&alpha2_beta_c));
    let zeros: BTreeMap<VarId, BitVec> = s.vars().into_iter().map(|v| (v, BitVec::zeros(6))).collect();
    r.check("s(0)", "[011 / 110]", show_matrix(&g.eval_term(&s, &zeros)?));
    r.check("t(0)", "[010 / 111]", show_matrix(&g.eval_term(&t, &zeros)?));
    let decision = affine_separation_decision(&g, &s, &t);
    r.check("affine decision", "separated", if decision.separated { "separated" } else { "not separated" });
    if let AffineWitness::Parity(lambda) = &decision.witness {
        r.check("parity registers certify", true, parity_certifies(&g, lambda, &s, &t)?);
    }
    Ok(r)
}

/// Depth of the leaf at the leftmost (or rightmost) end of `t`.
fn end_depth(t: &Term, leftmost: bool) -> usize {
    match t {
        Term::Var(_) => 0,
        Term::Op(l, r) => 1 + end_depth(if leftmost { l } else { r }, leftmost),
    }
}

fn deranged_product() -> Result<DemoReport> {
    let mut r = DemoReport::new("deranged-product");
    let z2 = CayleyGroupoid::deranged(2, &[1, 0], DerangedSide::Left)?;
    let z3 = CayleyGroupoid::deranged(3, &[1, 2, 0], DerangedSide::Right)?;
    let product = z2.product(&z3)?;
    let terms = enumerate_ordered_terms(4)?;
    let x1 = VarId::new("x1")?;
    let x4 = VarId::new("x4")?;
    let labels = ["t1", "t2", "t3", "t4", "t5"];

    for (label, t) in labels.iter().zip(&terms) {
        let depth = end_depth(t, true);
        let law = (0..16).all(|code| {
            let env: BTreeMap<VarId, usize> = t.vars().into_iter().enumerate().map(|(i, v)| (v, (code >> i) & 1)).collect();
            z2.eval(t, &env).expect("bound variables") == (env[&x1] + depth) % 2
        });
        r.check(format!("{label} in Z2: x1 + {depth} mod 2"), true, law);
        let depth = end_depth(t, false);
        let law = (0..81).all(|code: usize| {
            let env: BTreeMap<VarId, usize> =
                t.vars().into_iter().enumerate().map(|(i, v)| (v, code / 3usize.pow(i as u32) % 3)).collect();
            z3.eval(t, &env).expect("bound variables") == (env[&x4] + depth) % 3
        });
        r.check(format!("{label} in Z3: x4 + {depth} mod 3"), true, law);
    }

    let opts = ExhaustiveOptions::default();
    let left_depth: Vec<usize> = terms.iter().map(|t| end_depth(t, true)).collect();
    let right_depth: Vec<usize> = terms.iter().map(|t| end_depth(t, false)).collect();
    for i in 0..terms.len() {
        for j in i + 1..terms.len() {
            let pair = format!("{} vs {}", labels[i], labels[j]);
            let in_z2 = separates_exhaustive(&z2, &terms[i], &terms[j], &opts)?.separated;
            let in_z3 = separates_exhaustive(&z3, &terms[i], &terms[j], &opts)?.separated;
            let in_product = separates_exhaustive(&product, &terms[i], &terms[j], &opts)?.separated;
            let expect = (left_depth[i] % 2 != left_depth[j] % 2, right_depth[i] != right_depth[j]);
            r.check(
                format!("{pair} (Z2, Z3, product)"),
                format!("{}, {}, separated", word(expect.0), word(expect.1)),
                format!("{}, {}, {}", word(in_z2), word(in_z3), word(in_product)),
            );
        }
    }
    Ok(r)
}

fn word(separated: bool) -> &'static str {
    if separated {
        "separated"
    } else {
        "equal somewhere"
    }
}

pub fn figure2_terms() -> (Term, Term) {
    ("(y0*y1)*(z0*(z1*y0))".parse().expect("literal"), "((z2*y1)*y2)*(z3*y2)".parse().expect("literal"))
}

fn figure2() -> Result<DemoReport> {
    let (s, t) = figure2_terms();
    let mut r = DemoReport::new("figure2");
    let w = find_cycle(&s, &t).ok_or_else(|| Error::InvalidWitness("no cycle in the figure pair".into()))?;
    let expected = [("y0", "ll", "r"), ("y1", "lr", "^"), ("y2", "rr", "r")];
    r.check("cycle length", expected.len(), w.k());
    for (i, (var, p, q)) in expected.iter().enumerate().take(w.k()) {
        r.check(
            format!("column {i} (variable, p, q)"),
            format!("{var}, {p}, {q}"),
            format!("{}, {}, {}", w.entries[i].var, w.p[i].human(), w.q[i].human()),
        );
    }
    r.check("f", "[0, 1, 1]", format!("{:?}", w.f));
    let cert = synth_cycle(&w)?;
    r.check("operation", "||3,ll,0|| + ||4,lr,1|| + ||4,rr,2|| + ||4,r,3||' + ||3,r,4||", &cert.opsum);
    r.check("parity certificate holds", true, cert.verify(&s, &t)?);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_demo_matches() {
        for name in DEMO_NAMES {
            let report = run_demo(name).unwrap();
            assert!(report.passed(), "{report}");
        }
        assert!(matches!(run_demo("nope"), Err(Error::Usage(_))));
    }
}
