//! Library results against independent brute-force computations.

use std::collections::BTreeMap;

use antiassoc::cayley::{is_k_antiassociative, separates_exhaustive, CayleyGroupoid, DerangedSide, ExhaustiveOptions};
use antiassoc::synth::{
    build_k_antiassociative, decide_finite_separability, disagreement_cover, search_separator, synth_cover, FiniteVerdict,
    SearchOptions, SearchOutcome,
};
use antiassoc::term::{enumerate_ordered_terms, joint_vars, leftmost_disagreement, Term, VarId};
use antiassoc::unify::unify;
use antiassoc::verify::affine::cross_check;
use antiassoc::verify::census::census_unpruned;

/// Every term with at most `max_leaves` leaves over `names`.
fn all_terms(names: &[&str], max_leaves: usize) -> Vec<Term> {
    let mut by_size: Vec<Vec<Term>> = vec![Vec::new(), names.iter().map(|n| Term::var(n)).collect()];
    for size in 2..=max_leaves {
        let mut here = Vec::new();
        for left in 1..size {
            for l in &by_size[left] {
                for r in &by_size[size - left] {
                    here.push(Term::op(l.clone(), r.clone()));
                }
            }
        }
        by_size.push(here);
    }
    by_size.concat()
}

fn substitute(t: &Term, map: &BTreeMap<VarId, Term>) -> Term {
    t.substitute(&|v| map.get(v).cloned())
}

#[test]
fn unification_agrees_with_bounded_substitution_search() {
    let terms = all_terms(&["x", "y"], 3);
    let images = all_terms(&["x", "y"], 3);
    let (x, y) = (VarId::new("x").unwrap(), VarId::new("y").unwrap());
    let mut unified = 0;
    for s in &terms {
        for t in &terms {
            let found = images.iter().any(|ix| {
                images.iter().any(|iy| {
                    let map = BTreeMap::from([(x.clone(), ix.clone()), (y.clone(), iy.clone())]);
                    substitute(s, &map) == substitute(t, &map)
                })
            });
            let out = unify(s, t);
            match out.unifier() {
                Some(sigma) => {
                    assert_eq!(sigma.apply(s), sigma.apply(t), "{s} vs {t}");
                    unified += 1;
                }
                None => assert!(!found, "{s} vs {t}: a unifier exists but unification failed"),
            }
            if found {
                assert!(out.unifier().is_some(), "{s} vs {t}");
            }
        }
    }
    assert!(unified > terms.len());
}

#[test]
fn every_small_pair_is_decided_and_certified() {
    let terms = all_terms(&["x", "y", "z"], 3);
    let opts = ExhaustiveOptions::default();
    let search = SearchOptions::default();
    let (mut separated, mut brute) = (0, 0);
    for (i, s) in terms.iter().enumerate() {
        for t in &terms[i..] {
            match decide_finite_separability(s, t, &search).unwrap() {
                FiniteVerdict::NotSeparable { unifier } => {
                    assert_eq!(unifier.apply(s), unifier.apply(t));
                }
                FiniteVerdict::Separated { certificate } => {
                    assert!(unify(s, t).unifier().is_none(), "{s} vs {t}");
                    separated += 1;
                    match cross_check(&certificate.groupoid, s, t, &opts) {
                        Ok(agree) => {
                            assert!(agree, "{s} vs {t}");
                            brute += 1;
                        }
                        Err(antiassoc::Error::BudgetExceeded { .. }) => {}
                        Err(e) => panic!("{e}"),
                    }
                }
                FiniteVerdict::Unknown { .. } => panic!("{s} vs {t} left undecided"),
            }
        }
    }
    assert!(separated > 0 && brute * 2 > separated, "{brute} of {separated} brute-forced");
}

#[test]
fn search_alone_finds_checked_separators() {
    let pairs = [
        ("(x*y)*z", "x*(y*z)"),
        ("(x*y)*(z*w)", "((w*u)*x)*((y*v)*z)"),
        ("(x*y)*(z*y)", "z*((y*y)*(x*x))"),
        ("x*(x*x)", "(x*x)*x"),
        ("x", "x*y"),
    ];
    for (s, t) in pairs {
        let (s, t): (Term, Term) = (s.parse().unwrap(), t.parse().unwrap());
        let SearchOutcome::Found { certificate, .. } = search_separator(&s, &t, &SearchOptions::default()).unwrap() else {
            panic!("{s} vs {t}: nothing found");
        };
        assert!(certificate.verify(&s, &t).unwrap());
        let vars = joint_vars(&s, &t).len();
        if certificate.groupoid.dim() * vars <= 24 {
            let table = certificate.groupoid.to_cayley(12).unwrap();
            assert!(separates_exhaustive(&table, &s, &t, &ExhaustiveOptions::default()).unwrap().separated);
        }
    }
}

#[test]
fn leftmost_disagreements_always_give_covers() {
    for k in 3..=6 {
        let terms = enumerate_ordered_terms(k).unwrap();
        for (i, s) in terms.iter().enumerate() {
            for t in &terms[i + 1..] {
                assert!(leftmost_disagreement(s, t).unwrap().is_nested(), "{s} vs {t}");
                let cover = disagreement_cover(s, t).unwrap();
                cover.validate(s, t).unwrap();
                let cert = synth_cover(&cover).unwrap();
                assert!(cert.verify(s, t).unwrap(), "{s} vs {t}");
                if k <= 4 {
                    let table = cert.groupoid.to_cayley(12).unwrap();
                    assert!(separates_exhaustive(&table, s, t, &ExhaustiveOptions::default()).unwrap().separated);
                }
            }
        }
    }
    assert_eq!(build_k_antiassociative(6, 1000).unwrap().pairs.len(), 861);
}

#[test]
fn literally_deranged_tables_are_antiassociative() {
    let opts = ExhaustiveOptions::default();
    for n in 2..=4usize {
        let mut maps = 0;
        for code in 0..n.pow(n as u32) {
            let f: Vec<usize> = (0..n).map(|i| code / n.pow(i as u32) % n).collect();
            if (0..n).any(|x| f[x] == x) {
                continue;
            }
            maps += 1;
            for side in [DerangedSide::Left, DerangedSide::Right] {
                let g = CayleyGroupoid::deranged(n, &f, side).unwrap();
                assert!(is_k_antiassociative(&g, 3, &opts).unwrap().antiassociative);
            }
        }
        assert_eq!(maps, (n - 1).pow(n as u32));
        if n <= 3 {
            assert_eq!(census_unpruned(n).unwrap().literally_deranged, 2 * maps as u64);
        }
    }
}

#[test]
fn more_variables_implies_fewer() {
    let z2 = CayleyGroupoid::deranged(2, &[1, 0], DerangedSide::Left).unwrap();
    let z3 = CayleyGroupoid::deranged(3, &[1, 2, 0], DerangedSide::Right).unwrap();
    let g = z2.product(&z3).unwrap();
    let opts = ExhaustiveOptions::default();
    assert!(is_k_antiassociative(&g, 4, &opts).unwrap().antiassociative);
    assert!(is_k_antiassociative(&g, 3, &opts).unwrap().antiassociative);
    // and the cover build for k = 3 stays 3-antiassociative as a table
    let b3 = build_k_antiassociative(3, 10).unwrap();
    assert!(is_k_antiassociative(&b3.groupoid.to_cayley(12).unwrap(), 3, &opts).unwrap().antiassociative);
}
