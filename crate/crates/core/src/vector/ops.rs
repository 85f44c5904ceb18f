//! Component-transfer operations `||m,p,n||` and their duplicate-free sums.
//!
//! An operation is a list of equations `z[target] := x[source]` or
//! `z[target] := y[source]`, optionally plus the constant 1, where
//! `z = x ⋆ y`. Registers not assigned by any equation read as zero.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::term::{Dir, Path};

/// Index of a vector component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Register(pub u32);

impl fmt::Display for Register {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Hands out internal registers that collide with nothing chosen so far.
#[derive(Clone, Debug)]
pub struct RegisterAllocator {
    next: u32,
}

impl RegisterAllocator {
    pub fn starting_at(first: u32) -> Self {
        RegisterAllocator { next: first }
    }

    /// Starts past every register in `used`.
    pub fn after(used: impl IntoIterator<Item = Register>) -> Self {
        let next = used.into_iter().map(|r| r.0 + 1).max().unwrap_or(0);
        RegisterAllocator { next }
    }

    pub fn fresh(&mut self) -> Register {
        let r = Register(self.next);
        self.next += 1;
        r
    }
}

/// Which operand an equation reads from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Operand {
    X,
    Y,
}

impl From<Dir> for Operand {
    fn from(d: Dir) -> Self {
        match d {
            Dir::L => Operand::X,
            Dir::R => Operand::Y,
        }
    }
}

/// `z[target] := operand[source] (+ 1 if constant)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Equation {
    pub target: Register,
    pub operand: Operand,
    pub source: Register,
    pub constant: bool,
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.operand {
            Operand::X => 'x',
            Operand::Y => 'y',
        };
        write!(f, "z[{}] := {side}[{}]", self.target, self.source)?;
        if self.constant {
            f.write_str(" + 1")?;
        }
        Ok(())
    }
}

/// User-level description of a summand, before internal registers are chosen.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OpSpec {
    pub m: Register,
    pub p: Path,
    pub n: Register,
    #[serde(default)]
    pub tweaked: bool,
}

impl OpSpec {
    pub fn new(m: u32, p: &str, n: u32, tweaked: bool) -> Self {
        Self::with_path(m, p.parse().expect("valid path literal"), n, tweaked)
    }

    pub fn with_path(m: u32, p: Path, n: u32, tweaked: bool) -> Self {
        OpSpec { m: Register(m), p, n: Register(n), tweaked }
    }
}

impl fmt::Display for OpSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "||{},{},{}||{}", self.m, self.p.human(), self.n, if self.tweaked { "'" } else { "" })
    }
}

/// `||m,p,n||` (or its tweaked variant) with its internal registers fixed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasicOp {
    pub m: Register,
    pub p: Path,
    pub n: Register,
    pub tweaked: bool,
    /// The `|p| - 1` intermediate registers, outermost first.
    pub internal: Vec<Register>,
}

impl BasicOp {
    pub fn new(m: Register, p: Path, n: Register, tweaked: bool, alloc: &mut RegisterAllocator) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidOperation(format!("||{m},^,{n}|| needs a nonempty path")));
        }
        let internal = (1..p.len()).map(|_| alloc.fresh()).collect();
        Ok(BasicOp { m, p, n, tweaked, internal })
    }

    pub fn spec(&self) -> OpSpec {
        OpSpec { m: self.m, p: self.p.clone(), n: self.n, tweaked: self.tweaked }
    }

    /// The chain `z[n] := ·[a]`, `z[a] := ·[a+1]`, …, `z[last] := ·[m]`,
    /// reading `x` on `l` steps and `y` on `r` steps. A tweak adds 1 to the
    /// first equation only.
    pub fn equations(&self) -> Vec<Equation> {
        let steps = self.p.steps();
        let mut targets = vec![self.n];
        targets.extend(&self.internal);
        let mut sources = self.internal.clone();
        sources.push(self.m);
        steps
            .iter()
            .zip(targets.into_iter().zip(sources))
            .enumerate()
            .map(|(i, (&dir, (target, source)))| Equation {
                target,
                operand: dir.into(),
                source,
                constant: self.tweaked && i == 0,
            })
            .collect()
    }

    pub fn registers(&self) -> impl Iterator<Item = Register> + '_ {
        [self.m, self.n].into_iter().chain(self.internal.iter().copied())
    }
}

impl fmt::Display for BasicOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.spec().fmt(f)
    }
}

/// A validated, duplicate-free sum of basic operations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct OpSum {
    summands: Vec<BasicOp>,
}

impl OpSum {
    /// Rejects sums in which two equations assign the same register.
    pub fn new(summands: Vec<BasicOp>) -> Result<Self> {
        let mut targets = BTreeSet::new();
        for eq in summands.iter().flat_map(BasicOp::equations) {
            if !targets.insert(eq.target) {
                return Err(Error::DuplicateTarget(eq.target.0));
            }
        }
        Ok(OpSum { summands })
    }

    /// Builds summands from specs, allocating internal registers past every
    /// register the specs name.
    pub fn from_specs(specs: &[OpSpec]) -> Result<Self> {
        let mut alloc = RegisterAllocator::after(specs.iter().flat_map(|s| [s.m, s.n]));
        let summands = specs
            .iter()
            .map(|s| BasicOp::new(s.m, s.p.clone(), s.n, s.tweaked, &mut alloc))
            .collect::<Result<Vec<_>>>()?;
        Self::new(summands)
    }

    pub fn summands(&self) -> &[BasicOp] {
        &self.summands
    }

    pub fn specs(&self) -> Vec<OpSpec> {
        self.summands.iter().map(BasicOp::spec).collect()
    }

    pub fn equations(&self) -> Vec<Equation> {
        self.summands.iter().flat_map(BasicOp::equations).collect()
    }

    /// Every register mentioned, sorted.
    pub fn registers(&self) -> Vec<Register> {
        let set: BTreeSet<Register> = self.summands.iter().flat_map(BasicOp::registers).collect();
        set.into_iter().collect()
    }

    /// `x ⋆ y` computed straight from the equations, on sparse vectors
    /// (absent registers are zero).
    pub fn interpret(&self, x: &BTreeMap<Register, bool>, y: &BTreeMap<Register, bool>) -> BTreeMap<Register, bool> {
        self.equations()
            .into_iter()
            .map(|eq| {
                let from = match eq.operand {
                    Operand::X => x,
                    Operand::Y => y,
                };
                let bit = from.get(&eq.source).copied().unwrap_or(false) ^ eq.constant;
                (eq.target, bit)
            })
            .collect()
    }
}

impl fmt::Display for OpSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.summands.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl<'de> Deserialize<'de> for OpSum {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let summands = Vec::<BasicOp>::deserialize(deserializer)?;
        OpSum::new(summands).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(s: &str) -> Path {
        s.parse().unwrap()
    }

    #[test]
    fn two_step_transfer() {
        let mut alloc = RegisterAllocator::starting_at(10);
        let op = BasicOp::new(Register(2), path("lr"), Register(0), false, &mut alloc).unwrap();
        let eqs: Vec<String> = op.equations().iter().map(ToString::to_string).collect();
        assert_eq!(eqs, ["z[0] := x[10]", "z[10] := y[2]"]);
    }

    #[test]
    fn single_step_and_tweak() {
        let mut alloc = RegisterAllocator::starting_at(5);
        let op = BasicOp::new(Register(1), path("l"), Register(0), false, &mut alloc).unwrap();
        assert_eq!(op.equations().iter().map(ToString::to_string).collect::<Vec<_>>(), ["z[0] := x[1]"]);
        let op = BasicOp::new(Register(1), path("l"), Register(1), true, &mut alloc).unwrap();
        assert_eq!(op.equations().iter().map(ToString::to_string).collect::<Vec<_>>(), ["z[1] := x[1] + 1"]);
        let op = BasicOp::new(Register(4), path("rl"), Register(3), true, &mut alloc).unwrap();
        assert_eq!(
            op.equations().iter().map(ToString::to_string).collect::<Vec<_>>(),
            ["z[3] := y[5] + 1", "z[5] := x[4]"]
        );
    }

    #[test]
    fn empty_path_rejected() {
        let mut alloc = RegisterAllocator::starting_at(0);
        assert!(BasicOp::new(Register(1), Path::root(), Register(0), false, &mut alloc).is_err());
    }

    #[test]
    fn duplicate_targets() {
        let ok = OpSum::from_specs(&[OpSpec::new(1, "l", 0, false), OpSpec::new(1, "l", 1, true)]);
        assert!(ok.is_ok());
        let clash = OpSum::from_specs(&[OpSpec::new(1, "l", 0, false), OpSpec::new(2, "r", 0, false)]);
        assert_eq!(clash.unwrap_err(), Error::DuplicateTarget(0));
    }

    #[test]
    fn cycle_operation_is_duplicate_free() {
        let sum = OpSum::from_specs(&[
            OpSpec::new(3, "ll", 0, false),
            OpSpec::new(4, "lr", 1, false),
            OpSpec::new(4, "rr", 2, false),
            OpSpec::new(4, "r", 3, true),
            OpSpec::new(3, "r", 4, false),
        ])
        .unwrap();
        assert_eq!(sum.to_string(), "||3,ll,0|| + ||4,lr,1|| + ||4,rr,2|| + ||4,r,3||' + ||3,r,4||");
        assert_eq!(sum.registers().len(), 8);
    }

    #[test]
    fn internal_registers_are_fresh() {
        let sum = OpSum::from_specs(&[OpSpec::new(1, "lrl", 0, false), OpSpec::new(1, "rr", 1, true)]).unwrap();
        let internal: Vec<u32> = sum.summands().iter().flat_map(|s| s.internal.iter().map(|r| r.0)).collect();
        assert_eq!(internal, vec![2, 3, 4]);
    }
}
