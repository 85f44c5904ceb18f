//! Dense bit vectors and bit matrices over GF(2), with Gauss–Jordan
//! elimination that either solves `D·v = b` or returns an obstruction
//! `λ` with `λᵀD = 0` and `λ·b = 1`.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Low `len` bits of `value`, bit `i` at position `i`.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= 64);
        let mut v = BitVec::zeros(len);
        if len > 0 {
            v.words[0] = if len == 64 { value } else { value & ((1 << len) - 1) };
        }
        v
    }

    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= 64);
        self.words.first().copied().unwrap_or(0)
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = BitVec::zeros(len);
        v.set(i, true);
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if bit {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                (w != 0).then(|| {
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    wi * 64 + bit
                })
            })
        })
    }

    /// Highest set position.
    pub fn leading_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(wi, &w)| wi * 64 + 63 - w.leading_zeros() as usize)
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    pub fn concat(parts: &[BitVec]) -> BitVec {
        let len = parts.iter().map(BitVec::len).sum();
        let mut out = BitVec::zeros(len);
        let mut at = 0;
        for part in parts {
            for i in part.ones() {
                out.set(at + i, true);
            }
            at += part.len();
        }
        out
    }

    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        let mut out = BitVec::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                out.set(i, true);
            }
        }
        out
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Row-major bit matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix { cols, rows: vec![BitVec::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix { cols: n, rows: (0..n).map(|i| BitVec::unit(n, i)).collect() }
    }

    pub fn from_rows(rows: Vec<BitVec>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols));
        BitMatrix { cols, rows }
    }

    pub fn from_bools(rows: &[Vec<bool>]) -> Option<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        Some(BitMatrix { cols, rows: rows.iter().map(|r| BitVec::from_bits(r)).collect() })
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        self.rows[r].set(c, bit);
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        debug_assert_eq!(self.cols, v.len());
        let mut out = BitVec::zeros(self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            if row.dot(v) {
                out.set(i, true);
            }
        }
        out
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        debug_assert_eq!(self.cols, other.nrows());
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = BitVec::zeros(other.cols);
                for k in row.ones() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        BitMatrix { cols: other.cols, rows }
    }

    pub fn add(&self, other: &BitMatrix) -> BitMatrix {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &BitMatrix) {
        debug_assert_eq!((self.nrows(), self.cols), (other.nrows(), other.cols));
        for (a, b) in self.rows.iter_mut().zip(&other.rows) {
            a.xor_assign(b);
        }
    }

    /// `λᵀ·M` as a row vector.
    pub fn left_mul(&self, lambda: &BitVec) -> BitVec {
        let mut acc = BitVec::zeros(self.cols);
        for r in lambda.ones() {
            acc.xor_assign(&self.rows[r]);
        }
        acc
    }

    /// Horizontal concatenation `[M₁ | M₂ | …]`.
    pub fn hconcat(blocks: &[&BitMatrix], nrows: usize) -> BitMatrix {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let rows = (0..nrows)
            .map(|r| BitVec::concat(&blocks.iter().map(|b| b.rows[r].clone()).collect::<Vec<_>>()))
            .collect();
        BitMatrix { cols, rows }
    }

    /// Block-diagonal `diag(self, other)`.
    pub fn block_diag(&self, other: &BitMatrix) -> BitMatrix {
        let cols = self.cols + other.cols;
        let mut rows = Vec::with_capacity(self.nrows() + other.nrows());
        for r in &self.rows {
            rows.push(BitVec::concat(&[r.clone(), BitVec::zeros(other.cols)]));
        }
        for r in &other.rows {
            rows.push(BitVec::concat(&[BitVec::zeros(self.cols), r.clone()]));
        }
        BitMatrix { cols, rows }
    }

    pub fn to_bools(&self) -> Vec<Vec<bool>> {
        self.rows.iter().map(BitVec::to_bits).collect()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.rows).finish()
    }
}

/// Outcome of [`solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    /// A vector `v` with `D·v = b`; free coordinates are zero.
    Solved(BitVec),
    /// The colex-least `λ` (highest row index most significant) with
    /// `λᵀD = 0` and `λ·b = 1`.
    Obstructed(BitVec),
}

/// Solves `D·v = b` over GF(2) by Gauss–Jordan elimination, tracking row
/// operations so that an inconsistent system yields its left-kernel witness.
pub fn solve(d: &BitMatrix, b: &BitVec) -> Solution {
    let m = d.nrows();
    assert_eq!(b.len(), m);
    let mut rows = d.rows.clone();
    let mut rhs = b.clone();
    let mut ops: Vec<BitVec> = (0..m).map(|i| BitVec::unit(m, i)).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..d.cols {
        let Some(p) = (rank..m).find(|&r| rows[r].get(col)) else { continue };
        rows.swap(rank, p);
        ops.swap(rank, p);
        let (rp, rr) = (rhs.get(p), rhs.get(rank));
        rhs.set(rank, rp);
        rhs.set(p, rr);
        let (pivot_row, pivot_op, pivot_rhs) = (rows[rank].clone(), ops[rank].clone(), rhs.get(rank));
        for r in 0..m {
            if r != rank && rows[r].get(col) {
                rows[r].xor_assign(&pivot_row);
                ops[r].xor_assign(&pivot_op);
                if pivot_rhs {
                    rhs.flip(r);
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == m {
            break;
        }
    }
    let kernel: Vec<(BitVec, bool)> = (rank..m).map(|r| (ops[r].clone(), rhs.get(r))).collect();
    if kernel.iter().any(|(_, bit)| *bit) {
        return Solution::Obstructed(least_obstruction(kernel, m));
    }
    let mut v = BitVec::zeros(d.cols);
    for (r, &col) in pivots.iter().enumerate() {
        if rhs.get(r) {
            v.set(col, true);
        }
    }
    Solution::Solved(v)
}

/// Given a left-kernel basis tagged with `λ·b`, picks the colex-least
/// kernel element with `λ·b = 1`.
fn least_obstruction(kernel: Vec<(BitVec, bool)>, m: usize) -> BitVec {
    let pick = kernel.iter().position(|(_, bit)| *bit).expect("some kernel vector hits b");
    let base = kernel[pick].0.clone();
    // Kernel elements orthogonal to b, shifted so they stay orthogonal.
    let mut homogeneous: Vec<BitVec> = kernel
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != pick)
        .map(|(_, (v, bit))| if *bit { v.xor(&base) } else { v.clone() })
        .collect();
    // Echelon form keyed on the highest set bit.
    let mut basis: Vec<Option<BitVec>> = vec![None; m];
    for mut v in homogeneous.drain(..) {
        while let Some(top) = v.leading_one() {
            match &basis[top] {
                Some(b) => v.xor_assign(b),
                None => {
                    basis[top] = Some(v);
                    break;
                }
            }
        }
    }
    let mut lambda = base;
    for top in (0..m).rev() {
        if lambda.get(top) {
            if let Some(b) = &basis[top] {
                lambda.xor_assign(b);
            }
        }
    }
    lambda
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&str]) -> BitMatrix {
        let bools: Vec<Vec<bool>> = rows.iter().map(|r| r.chars().map(|c| c == '1').collect()).collect();
        BitMatrix::from_bools(&bools).unwrap()
    }

    fn vecb(s: &str) -> BitVec {
        BitVec::from_bits(&s.chars().map(|c| c == '1').collect::<Vec<_>>())
    }

    #[test]
    fn products() {
        let a = mat(&["01", "01"]);
        assert_eq!(a.mul_vec(&vecb("01")), vecb("11"));
        assert_eq!(a.mul(&a), mat(&["01", "01"]));
        assert_eq!(BitMatrix::identity(3).mul(&mat(&["110", "011", "000"])), mat(&["110", "011", "000"]));
        assert_eq!(a.left_mul(&vecb("11")), vecb("00"));
    }

    #[test]
    fn ones_and_leading() {
        let mut v = BitVec::zeros(130);
        v.set(3, true);
        v.set(129, true);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![3, 129]);
        assert_eq!(v.leading_one(), Some(129));
        assert_eq!(BitVec::zeros(5).leading_one(), None);
    }

    #[test]
    fn solves_consistent_system() {
        let d = mat(&["110", "011"]);
        let b = vecb("10");
        let Solution::Solved(v) = solve(&d, &b) else { panic!("should be solvable") };
        assert_eq!(d.mul_vec(&v), b);
    }

    #[test]
    fn obstruction_is_least() {
        // Rows 0 and 2 are equal; rows 1 and 3 are zero. Valid λ: any set
        // containing an odd number of {1, 3} plus a multiple of {0, 2} pattern.
        let d = mat(&["10", "00", "10", "00"]);
        let b = vecb("0101");
        let Solution::Obstructed(l) = solve(&d, &b) else { panic!("should be obstructed") };
        assert!(d.left_mul(&l).is_zero());
        assert!(l.dot(&b));
        assert_eq!(l, vecb("0100"));
    }

    #[test]
    fn empty_system() {
        assert_eq!(solve(&BitMatrix::zeros(0, 3), &BitVec::zeros(0)), Solution::Solved(BitVec::zeros(3)));
        let Solution::Obstructed(l) = solve(&BitMatrix::zeros(1, 0), &vecb("1")) else { panic!() };
        assert_eq!(l, vecb("1"));
    }
}
