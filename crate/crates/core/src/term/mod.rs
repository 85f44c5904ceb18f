//! Groupoid terms as full binary trees over named variables.
//!
//! A [`Term`] is either a variable leaf or a product `l * r`. Nodes are
//! addressed by [`Path`]s over `{l, r}`; the root is the empty path.

mod ordered;
mod parse;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use ordered::{
    catalan, enumerate_ordered_terms, leftmost_disagreement, ordered_arity, Disagreement,
    MAX_ENUMERATION_ARITY,
};
pub use parse::parse_term;

/// Name reserved for the placeholder variable of shapes.
pub const SENTINEL: &str = "χ";
/// ASCII spelling accepted for [`SENTINEL`].
pub const SENTINEL_ASCII: &str = "chi";

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(Arc<str>);

impl VarId {
    /// Validates `name`: an ASCII letter followed by letters, digits or `_`.
    /// `chi` and `χ` both denote the shape sentinel.
    pub fn new(name: &str) -> Result<Self> {
        if name == SENTINEL || name == SENTINEL_ASCII {
            return Ok(Self::sentinel());
        }
        let mut chars = name.chars();
        let valid = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if valid {
            Ok(VarId(Arc::from(name)))
        } else {
            Err(Error::InvalidVariable(name.to_string()))
        }
    }

    pub fn sentinel() -> Self {
        VarId(Arc::from(SENTINEL))
    }

    /// The conventional variable `x{i}` of ordered terms.
    pub fn indexed(i: usize) -> Self {
        VarId(Arc::from(format!("x{i}").as_str()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_sentinel(&self) -> bool {
        &*self.0 == SENTINEL
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for VarId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        VarId::new(s)
    }
}

impl Serialize for VarId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for VarId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let name = String::deserialize(deserializer)?;
        VarId::new(&name).map_err(de::Error::custom)
    }
}

/// One branching step: `l` (left child) or `r` (right child).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    L,
    R,
}

impl Dir {
    pub fn as_char(self) -> char {
        match self {
            Dir::L => 'l',
            Dir::R => 'r',
        }
    }
}

/// A node address. Ordering is lexicographic with `l < r`, which on the
/// leaves of one tree coincides with their inorder.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(Vec<Dir>);

impl Path {
    pub fn root() -> Self {
        Path(Vec::new())
    }

    pub fn from_dirs(dirs: impl IntoIterator<Item = Dir>) -> Self {
        Path(dirs.into_iter().collect())
    }

    pub fn steps(&self) -> &[Dir] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, dir: Dir) -> Path {
        let mut steps = self.0.clone();
        steps.push(dir);
        Path(steps)
    }

    pub fn concat(&self, other: &Path) -> Path {
        let mut steps = self.0.clone();
        steps.extend_from_slice(&other.0);
        Path(steps)
    }

    pub fn is_prefix_of(&self, other: &Path) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn is_proper_prefix_of(&self, other: &Path) -> bool {
        self.len() < other.len() && self.is_prefix_of(other)
    }

    /// `w` such that `self = prefix · w`.
    pub fn strip_prefix(&self, prefix: &Path) -> Option<Path> {
        self.0.strip_prefix(prefix.0.as_slice()).map(|rest| Path(rest.to_vec()))
    }

    /// The rendering used in human-facing output: `^` for the root.
    pub fn human(&self) -> String {
        if self.is_empty() {
            "^".to_string()
        } else {
            self.to_string()
        }
    }

    /// Every prefix, root first, including the path itself.
    pub fn prefixes(&self) -> impl Iterator<Item = Path> + '_ {
        (0..=self.len()).map(move |i| Path(self.0[..i].to_vec()))
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{}", d.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Path({})", self.human())
    }
}

impl FromStr for Path {
    type Err = Error;

    /// Accepts `""`, `"^"` and `"Λ"` for the root.
    fn from_str(s: &str) -> Result<Self> {
        if s == "^" || s == "Λ" {
            return Ok(Path::root());
        }
        s.chars()
            .enumerate()
            .map(|(i, c)| match c {
                'l' | 'L' => Ok(Dir::L),
                'r' | 'R' => Ok(Dir::R),
                _ => Err(Error::Syntax { position: i, message: format!("unexpected `{c}` in path") }),
            })
            .collect::<Result<Vec<_>>>()
            .map(Path)
    }
}

impl Serialize for Path {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Path {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(de::Error::custom)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(VarId),
    Op(Box<Term>, Box<Term>),
}

impl Term {
    /// Leaf constructor; panics on an invalid name, so reserve it for literals.
    pub fn var(name: &str) -> Term {
        Term::Var(VarId::new(name).expect("valid variable name"))
    }

    pub fn op(left: Term, right: Term) -> Term {
        Term::Op(Box::new(left), Box::new(right))
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_var(&self) -> Option<&VarId> {
        match self {
            Term::Var(v) => Some(v),
            Term::Op(..) => None,
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Op(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Op(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Leaves in natural (inorder) order with their paths.
    pub fn occurrences(&self) -> Vec<(Path, VarId)> {
        fn walk(t: &Term, at: &mut Vec<Dir>, out: &mut Vec<(Path, VarId)>) {
            match t {
                Term::Var(v) => out.push((Path(at.clone()), v.clone())),
                Term::Op(l, r) => {
                    at.push(Dir::L);
                    walk(l, at, out);
                    at.pop();
                    at.push(Dir::R);
                    walk(r, at, out);
                    at.pop();
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    /// Paths of every node, internal nodes included, in preorder.
    pub fn node_paths(&self) -> Vec<Path> {
        fn walk(t: &Term, at: &mut Vec<Dir>, out: &mut Vec<Path>) {
            out.push(Path(at.clone()));
            if let Term::Op(l, r) = t {
                at.push(Dir::L);
                walk(l, at, out);
                at.pop();
                at.push(Dir::R);
                walk(r, at, out);
                at.pop();
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn subterm_at(&self, path: &Path) -> Result<&Term> {
        let mut node = self;
        for dir in path.steps() {
            node = match (node, dir) {
                (Term::Op(l, _), Dir::L) => l,
                (Term::Op(_, r), Dir::R) => r,
                (Term::Var(_), _) => {
                    return Err(Error::InvalidPath { path: path.human(), term: self.to_string() })
                }
            };
        }
        Ok(node)
    }

    /// Distinct variables in order of first occurrence.
    pub fn vars(&self) -> Vec<VarId> {
        let mut seen = BTreeSet::new();
        self.occurrences()
            .into_iter()
            .filter_map(|(_, v)| seen.insert(v.clone()).then_some(v))
            .collect()
    }

    pub fn contains_var(&self, var: &VarId) -> bool {
        match self {
            Term::Var(v) => v == var,
            Term::Op(l, r) => l.contains_var(var) || r.contains_var(var),
        }
    }

    /// Simultaneous replacement of variables; unmapped variables stay.
    pub fn substitute(&self, map: &impl Fn(&VarId) -> Option<Term>) -> Term {
        match self {
            Term::Var(v) => map(v).unwrap_or_else(|| self.clone()),
            Term::Op(l, r) => Term::op(l.substitute(map), r.substitute(map)),
        }
    }

    pub fn replace_var(&self, var: &VarId, with: &Term) -> Term {
        self.substitute(&|v: &VarId| (v == var).then(|| with.clone()))
    }

    pub fn shape(&self) -> Shape {
        Shape::of(self)
    }

    fn fmt_inner(&self, f: &mut fmt::Formatter<'_>, top: bool) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Op(l, r) => {
                if !top {
                    f.write_str("(")?;
                }
                l.fmt_inner(f, false)?;
                f.write_str("*")?;
                r.fmt_inner(f, false)?;
                if !top {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// Renders without the outermost parentheses, e.g. `((x1*x2)*x3)*x4`.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_inner(f, true)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Term({self})")
    }
}

impl FromStr for Term {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_term(s)
    }
}

/// JSON form: a string at each leaf, a two-element array at each node.
impl Serialize for Term {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Term::Var(v) => v.serialize(serializer),
            Term::Op(l, r) => {
                let mut seq = serializer.serialize_seq(Some(2))?;
                seq.serialize_element(l.as_ref())?;
                seq.serialize_element(r.as_ref())?;
                seq.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct TermVisitor;

        impl<'de> Visitor<'de> for TermVisitor {
            type Value = Term;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a variable name or a two-element array of terms")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Term, E> {
                VarId::new(v).map(Term::Var).map_err(E::custom)
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Term, A::Error> {
                let left: Term =
                    seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let right: Term =
                    seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<de::IgnoredAny>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                Ok(Term::op(left, right))
            }
        }

        deserializer.deserialize_any(TermVisitor)
    }
}

/// The tree of a term with every leaf replaced by the sentinel `χ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Shape(Term);

impl Shape {
    pub fn of(t: &Term) -> Shape {
        let chi = Term::Var(VarId::sentinel());
        Shape(t.substitute(&|_| Some(chi.clone())))
    }

    pub fn term(&self) -> &Term {
        &self.0
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Which of the two compared terms an occurrence lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TermSide {
    S,
    T,
}

impl TermSide {
    pub fn other(self) -> TermSide {
        match self {
            TermSide::S => TermSide::T,
            TermSide::T => TermSide::S,
        }
    }

    pub fn pick<'a>(self, s: &'a Term, t: &'a Term) -> &'a Term {
        match self {
            TermSide::S => s,
            TermSide::T => t,
        }
    }
}

/// A leaf of one of the two terms under comparison.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OccurrenceRef {
    pub side: TermSide,
    pub path: Path,
    pub var: VarId,
}

impl OccurrenceRef {
    /// Checks that `path` reaches a leaf labelled `var` in the designated term.
    pub fn validate(&self, s: &Term, t: &Term) -> Result<()> {
        let term = self.side.pick(s, t);
        match term.subterm_at(&self.path)? {
            Term::Var(v) if *v == self.var => Ok(()),
            other => Err(Error::InvalidWitness(format!(
                "{:?} path {} holds `{other}`, not `{}`",
                self.side,
                self.path.human(),
                self.var
            ))),
        }
    }
}

/// All occurrences of both terms, tagged with their side.
pub fn occurrences_of_pair(s: &Term, t: &Term) -> Vec<OccurrenceRef> {
    let tag = |side: TermSide, term: &Term| {
        term.occurrences()
            .into_iter()
            .map(move |(path, var)| OccurrenceRef { side, path, var })
    };
    tag(TermSide::S, s).chain(tag(TermSide::T, t)).collect()
}

/// Variables of `s` in first-occurrence order, followed by the new ones of `t`.
pub fn joint_vars(s: &Term, t: &Term) -> Vec<VarId> {
    let mut vars = s.vars();
    for v in t.vars() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    vars
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Path {
        s.parse().unwrap()
    }

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    #[test]
    fn occurrence_paths_of_five_leaf_example() {
        let s = t("(x1*(x2*x3))*(x4*x5)");
        let paths: Vec<String> = s.occurrences().iter().map(|(p, _)| p.to_string()).collect();
        assert_eq!(paths, ["ll", "lrl", "lrr", "rl", "rr"]);
        assert_eq!(s.subterm_at(&p("lr")).unwrap(), &t("x2*x3"));
    }

    #[test]
    fn single_leaf_and_pair_occurrences() {
        assert_eq!(t("x").occurrences(), vec![(Path::root(), VarId::new("x").unwrap())]);
        let occ = t("x*y").occurrences();
        assert_eq!(occ[0].0, p("l"));
        assert_eq!(occ[1].0, p("r"));
    }

    #[test]
    fn subterm_root_and_invalid() {
        let s = t("(x*y)*z");
        assert_eq!(s.subterm_at(&Path::root()).unwrap(), &s);
        assert!(matches!(t("x*y").subterm_at(&p("rl")), Err(Error::InvalidPath { .. })));
    }

    #[test]
    fn shapes_forget_labels() {
        assert_eq!(t("x*y").shape(), t("x*x").shape());
        assert_eq!(t("(x*y)*z").shape(), t("(y*y)*x").shape());
        assert_ne!(t("(x*y)*z").shape(), t("x*(y*z)").shape());
        let shape = t("(x*y)*z").shape();
        assert_eq!(shape.term().shape(), shape);
        assert_eq!(shape.to_string(), "(χ*χ)*χ");
    }

    #[test]
    fn path_algebra() {
        assert!(Path::root().is_prefix_of(&p("lr")));
        assert!(p("l").is_proper_prefix_of(&p("lr")));
        assert!(!p("lr").is_proper_prefix_of(&p("lr")));
        assert_eq!(p("ll").strip_prefix(&p("l")), Some(p("l")));
        assert_eq!(p("l").concat(&p("r")), p("lr"));
        assert_eq!(p("^"), Path::root());
        assert_eq!(Path::root().human(), "^");
        assert_eq!(Path::root().to_string(), "");
    }

    #[test]
    fn variable_names() {
        assert!(VarId::new("x_1a").is_ok());
        assert!(VarId::new("1x").is_err());
        assert!(VarId::new("").is_err());
        assert!(VarId::new("chi").unwrap().is_sentinel());
    }

    #[test]
    fn json_nested_arrays() {
        let term = t("x1*(x2*x3)");
        let json = serde_json::to_string(&term).unwrap();
        assert_eq!(json, r#"["x1",["x2","x3"]]"#);
        let back: Term = serde_json::from_str(&json).unwrap();
        assert_eq!(back, term);
        assert!(serde_json::from_str::<Term>(r#"["x","y","z"]"#).is_err());
    }
}
