//! Affine groupoids `x ⋆ y = A·x + B·y + c` on GF(2) vectors, and the
//! component-transfer operations that compile into them.

mod ops;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use ops::{BasicOp, Equation, OpSpec, OpSum, Operand, Register, RegisterAllocator};

use crate::cayley::CayleyGroupoid;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::term::{Term, VarId};

/// Largest dimension [`VecGroupoid::to_cayley`] accepts by default
/// (a table of `2^24` entries).
pub const DEFAULT_CAYLEY_BOUND: usize = 12;

/// `x ⋆ y = A·x + B·y + c` over GF(2). Row and column `i` of every matrix
/// belong to register `indices[i]`; `indices` is sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VecGroupoid {
    indices: Vec<Register>,
    a: BitMatrix,
    b: BitMatrix,
    c: BitVec,
}

impl VecGroupoid {
    /// An affine groupoid on registers `0..dim`.
    pub fn affine(a: BitMatrix, b: BitMatrix, c: BitVec) -> Result<Self> {
        let indices = (0..c.len() as u32).map(Register).collect();
        Self::with_indices(indices, a, b, c)
    }

    pub fn with_indices(indices: Vec<Register>, a: BitMatrix, b: BitMatrix, c: BitVec) -> Result<Self> {
        let d = indices.len();
        for (name, m) in [("A", &a), ("B", &b)] {
            if m.nrows() != d || m.ncols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "{name} is {}x{}, expected {d}x{d}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        if c.len() != d {
            return Err(Error::DimensionMismatch(format!("c has length {}, expected {d}", c.len())));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGroupoid("register indices must be strictly increasing".into()));
        }
        Ok(VecGroupoid { indices, a, b, c })
    }

    /// Rows are target registers: `z[t] := x[s]` sets `A[t][s]`, `y`
    /// sources go into `B`, tweaks into `c`. Unassigned targets stay zero.
    pub fn compile(sum: &OpSum) -> Self {
        let indices = sum.registers();
        let pos: BTreeMap<Register, usize> = indices.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let d = indices.len();
        let (mut a, mut b, mut c) = (BitMatrix::zeros(d, d), BitMatrix::zeros(d, d), BitVec::zeros(d));
        for eq in sum.equations() {
            let (row, col) = (pos[&eq.target], pos[&eq.source]);
            match eq.operand {
                Operand::X => a.set(row, col, true),
                Operand::Y => b.set(row, col, true),
            }
            c.set(row, eq.constant);
        }
        VecGroupoid { indices, a, b, c }
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[Register] {
        &self.indices
    }

    pub fn position(&self, r: Register) -> Option<usize> {
        self.indices.binary_search(&r).ok()
    }

    pub fn a(&self) -> &BitMatrix {
        &self.a
    }

    pub fn b(&self) -> &BitMatrix {
        &self.b
    }

    pub fn c(&self) -> &BitVec {
        &self.c
    }

    pub fn eval(&self, x: &BitVec, y: &BitVec) -> Result<BitVec> {
        let d = self.dim();
        if x.len() != d || y.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "operands have lengths {} and {}, expected {d}",
                x.len(),
                y.len()
            )));
        }
        let mut z = self.a.mul_vec(x);
        z.xor_assign(&self.b.mul_vec(y));
        z.xor_assign(&self.c);
        Ok(z)
    }

    pub fn eval_term(&self, t: &Term, env: &BTreeMap<VarId, BitVec>) -> Result<BitVec> {
        match t {
            Term::Var(v) => {
                let x = env.get(v).ok_or_else(|| Error::MissingVariable(v.to_string()))?;
                if x.len() != self.dim() {
                    return Err(Error::DimensionMismatch(format!("value of {v} has length {}", x.len())));
                }
                Ok(x.clone())
            }
            Term::Op(l, r) => self.eval(&self.eval_term(l, env)?, &self.eval_term(r, env)?),
        }
    }

    /// The affine form of `t` over its own variables.
    pub fn term_form(&self, t: &Term) -> AffineTermForm {
        self.form_over(t, &t.vars()).expect("own variables cover the term")
    }

    /// The affine form of `t` over `vars`, which must include every
    /// variable of `t`.
    pub fn form_over(&self, t: &Term, vars: &[VarId]) -> Result<AffineTermForm> {
        if let Some(v) = t.vars().into_iter().find(|v| !vars.contains(v)) {
            return Err(Error::MissingVariable(v.to_string()));
        }
        let d = self.dim();
        let (coeff, constant) = self.form_rec(t, vars);
        let coeff = coeff.into_iter().map(|m| m.unwrap_or_else(|| BitMatrix::zeros(d, d))).collect();
        Ok(AffineTermForm { vars: vars.to_vec(), coeff, constant })
    }

    // `None` coefficients are zero; it keeps the products sparse for terms
    // that mention few of the variables.
    fn form_rec(&self, t: &Term, vars: &[VarId]) -> (Vec<Option<BitMatrix>>, BitVec) {
        let d = self.dim();
        match t {
            Term::Var(v) => {
                let mut coeff = vec![None; vars.len()];
                coeff[vars.iter().position(|w| w == v).expect("checked above")] = Some(BitMatrix::identity(d));
                (coeff, BitVec::zeros(d))
            }
            Term::Op(l, r) => {
                let (lc, l0) = self.form_rec(l, vars);
                let (rc, r0) = self.form_rec(r, vars);
                let coeff = lc
                    .into_iter()
                    .zip(rc)
                    .map(|(lm, rm)| match (lm, rm) {
                        (None, None) => None,
                        (Some(lm), None) => Some(self.a.mul(&lm)),
                        (None, Some(rm)) => Some(self.b.mul(&rm)),
                        (Some(lm), Some(rm)) => Some(self.a.mul(&lm).add(&self.b.mul(&rm))),
                    })
                    .collect();
                let mut constant = self.a.mul_vec(&l0);
                constant.xor_assign(&self.b.mul_vec(&r0));
                constant.xor_assign(&self.c);
                (coeff, constant)
            }
        }
    }

    /// The product groupoid, with `other`'s registers shifted past ours.
    pub fn direct_sum(&self, other: &VecGroupoid) -> VecGroupoid {
        let shift = self.indices.last().map_or(0, |r| r.0 + 1);
        let base = other.indices.first().map_or(0, |r| r.0);
        let mut indices = self.indices.clone();
        indices.extend(other.indices.iter().map(|r| Register(r.0 - base + shift)));
        VecGroupoid {
            indices,
            a: self.a.block_diag(&other.a),
            b: self.b.block_diag(&other.b),
            c: BitVec::concat(&[self.c.clone(), other.c.clone()]),
        }
    }

    /// The operation table on all `2^dim` vectors. Element `e` is the vector
    /// whose position `i` holds bit `i` of `e`.
    pub fn to_cayley(&self, max_dim: usize) -> Result<CayleyGroupoid> {
        let d = self.dim();
        if d > max_dim {
            return Err(Error::ResourceBound(format!("{d} registers exceed the table bound of {max_dim}")));
        }
        let n = 1usize << d;
        let image = |m: &BitMatrix| -> Vec<u32> {
            (0..n).map(|e| m.mul_vec(&BitVec::from_u64(e as u64, d)).to_u64() as u32).collect()
        };
        let (ax, by) = (image(&self.a), image(&self.b));
        let c = self.c.to_u64() as u32;
        let mut table = Vec::with_capacity(n * n);
        for &x in &ax {
            table.extend(by.iter().map(|&y| x ^ y ^ c));
        }
        Ok(CayleyGroupoid::from_flat(n, table))
    }

    pub fn element(&self, e: usize) -> BitVec {
        BitVec::from_u64(e as u64, self.dim())
    }
}

#[derive(Serialize, Deserialize)]
struct VecGroupoidJson {
    indices: Vec<Register>,
    #[serde(rename = "A")]
    a: Vec<Vec<u8>>,
    #[serde(rename = "B")]
    b: Vec<Vec<u8>>,
    c: Vec<u8>,
}

fn bits_out(v: &BitVec) -> Vec<u8> {
    v.to_bits().into_iter().map(u8::from).collect()
}

fn bits_in(v: &[u8]) -> std::result::Result<BitVec, String> {
    v.iter()
        .map(|&b| match b {
            0 => Ok(false),
            1 => Ok(true),
            other => Err(format!("bit entries must be 0 or 1, found {other}")),
        })
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(|bits| BitVec::from_bits(&bits))
}

impl Serialize for VecGroupoid {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        VecGroupoidJson {
            indices: self.indices.clone(),
            a: self.a.rows().iter().map(bits_out).collect(),
            b: self.b.rows().iter().map(bits_out).collect(),
            c: bits_out(&self.c),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for VecGroupoid {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = VecGroupoidJson::deserialize(deserializer)?;
        let d = raw.indices.len();
        let matrix = |rows: &[Vec<u8>]| -> std::result::Result<BitMatrix, String> {
            let rows = rows.iter().map(|r| bits_in(r)).collect::<std::result::Result<Vec<_>, _>>()?;
            if rows.iter().any(|r| r.len() != d) {
                return Err(format!("matrix rows must have length {d}"));
            }
            Ok(BitMatrix::from_rows(rows, d))
        };
        let a = matrix(&raw.a).map_err(D::Error::custom)?;
        let b = matrix(&raw.b).map_err(D::Error::custom)?;
        let c = bits_in(&raw.c).map_err(D::Error::custom)?;
        VecGroupoid::with_indices(raw.indices, a, b, c).map_err(D::Error::custom)
    }
}

/// A term as an affine map: `t(v1..vr) = Σ coeff[i]·v_i + constant`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineTermForm {
    pub vars: Vec<VarId>,
    pub coeff: Vec<BitMatrix>,
    pub constant: BitVec,
}

impl AffineTermForm {
    pub fn eval(&self, values: &[BitVec]) -> BitVec {
        let mut out = self.constant.clone();
        for (m, v) in self.coeff.iter().zip(values) {
            out.xor_assign(&m.mul_vec(v));
        }
        out
    }

    /// Pointwise sum of two forms over the same variable list.
    pub fn add(&self, other: &AffineTermForm) -> Result<AffineTermForm> {
        if self.vars != other.vars {
            return Err(Error::DimensionMismatch("forms range over different variables".into()));
        }
        Ok(AffineTermForm {
            vars: self.vars.clone(),
            coeff: self.coeff.iter().zip(&other.coeff).map(|(x, y)| x.add(y)).collect(),
            constant: self.constant.xor(&other.constant),
        })
    }

    pub fn is_constant(&self) -> bool {
        self.coeff.iter().all(BitMatrix::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    fn bits(s: &str) -> BitVec {
        BitVec::from_bits(&s.chars().map(|c| c == '1').collect::<Vec<_>>())
    }

    fn cover() -> VecGroupoid {
        VecGroupoid::compile(&OpSum::from_specs(&[OpSpec::new(1, "l", 0, false), OpSpec::new(1, "l", 1, true)]).unwrap())
    }

    #[test]
    fn compile_cover_pair() {
        let g = cover();
        assert_eq!(g.indices(), [Register(0), Register(1)]);
        assert_eq!(g.a().to_bools(), vec![vec![false, true], vec![false, true]]);
        assert!(g.b().is_zero());
        assert_eq!(g.c(), &bits("01"));
        assert_eq!(g.eval(&bits("01"), &bits("11")).unwrap(), bits("10"));
        assert_eq!(g.eval(&bits("00"), &bits("00")).unwrap(), *g.c());
    }

    #[test]
    fn compile_two_step_transfer() {
        let g = VecGroupoid::compile(&OpSum::from_specs(&[OpSpec::new(2, "lr", 0, false)]).unwrap());
        assert_eq!(g.indices(), [Register(0), Register(2), Register(3)]);
        // x = (x0, x2, x3), y = (y0, y2, y3) -> (x3, 0, y2)
        assert_eq!(g.eval(&bits("001"), &bits("000")).unwrap(), bits("100"));
        assert_eq!(g.eval(&bits("000"), &bits("010")).unwrap(), bits("001"));
        assert_eq!(g.eval(&bits("110"), &bits("101")).unwrap(), bits("000"));
        let form = g.term_form(&t("(u*v)*w"));
        // component 0 of the term is component 2 of v
        let row0 = |i: usize| form.coeff[i].row(0).clone();
        assert_eq!(row0(1), bits("010"));
        assert!(row0(0).is_zero() && row0(2).is_zero());
    }

    #[test]
    fn empty_sum_is_trivial() {
        let g = VecGroupoid::compile(&OpSum::new(vec![]).unwrap());
        assert_eq!(g.dim(), 0);
        assert_eq!(g.to_cayley(DEFAULT_CAYLEY_BOUND).unwrap().order(), 1);
    }

    #[test]
    fn dimension_checks() {
        let err = VecGroupoid::affine(BitMatrix::zeros(2, 2), BitMatrix::zeros(2, 3), BitVec::zeros(2));
        assert!(matches!(err, Err(Error::DimensionMismatch(_))));
        let g = cover();
        assert!(g.eval(&bits("1"), &bits("11")).is_err());
    }

    #[test]
    fn term_form_matches_recursive_eval() {
        let g = cover();
        let term = t("(x*y)*(x*(z*y))");
        let form = g.term_form(&term);
        for e in 0..64u64 {
            let values: Vec<BitVec> = (0..3).map(|i| BitVec::from_u64((e >> (2 * i)) & 3, 2)).collect();
            let env: BTreeMap<VarId, BitVec> = form.vars.iter().cloned().zip(values.iter().cloned()).collect();
            assert_eq!(form.eval(&values), g.eval_term(&term, &env).unwrap());
        }
        let leaf = g.term_form(&t("x"));
        assert_eq!(leaf.coeff, vec![BitMatrix::identity(2)]);
        assert!(leaf.constant.is_zero());
    }

    #[test]
    fn cayley_table_of_cover() {
        let g = cover();
        let table = g.to_cayley(DEFAULT_CAYLEY_BOUND).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                let z = g.eval(&g.element(x), &g.element(y)).unwrap().to_u64() as usize;
                assert_eq!(table.op(x, y), z);
            }
        }
        assert!(g.to_cayley(1).is_err());
    }

    #[test]
    fn direct_sum_blocks() {
        let g = cover();
        let h = VecGroupoid::compile(&OpSum::from_specs(&[OpSpec::new(2, "lr", 0, false)]).unwrap());
        let gh = g.direct_sum(&h);
        assert_eq!(gh.indices(), [0, 1, 2, 4, 5].map(Register));
        let (x1, y1, x2, y2) = (bits("01"), bits("10"), bits("101"), bits("011"));
        let lhs = gh.eval(&BitVec::concat(&[x1.clone(), x2.clone()]), &BitVec::concat(&[y1.clone(), y2.clone()])).unwrap();
        let rhs = BitVec::concat(&[g.eval(&x1, &y1).unwrap(), h.eval(&x2, &y2).unwrap()]);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn json_round_trip() {
        let g = VecGroupoid::compile(&OpSum::from_specs(&[OpSpec::new(2, "lr", 0, true)]).unwrap());
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(json, r#"{"indices":[0,2,3],"A":[[0,0,1],[0,0,0],[0,0,0]],"B":[[0,0,0],[0,0,0],[0,1,0]],"c":[1,0,0]}"#);
        assert_eq!(serde_json::from_str::<VecGroupoid>(&json).unwrap(), g);
        assert!(serde_json::from_str::<VecGroupoid>(r#"{"indices":[0],"A":[[2]],"B":[[0]],"c":[0]}"#).is_err());
    }
}
