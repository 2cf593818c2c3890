//! Checkers for the order/monoid laws and the axioms (O1)–(O4), (PD), (PC)
//! on enumerated fragments.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rayon::prelude::*;

use crate::extnat::{CuVector, Fin, Inf};
use crate::fragment::Fragment;
use crate::report::{Report, Verdict};
use crate::semigroup::{Element, FiberedSemigroup, MonotoneChain, PdStatus};

const SEED: u64 = 0x5eed_c0de;
const CHAIN_SAMPLES: usize = 300;
const PAIR_SAMPLES: usize = 1000;

fn rng() -> StdRng {
    StdRng::seed_from_u64(SEED)
}

fn sample<T: Clone>(items: &[T], n: usize, rng: &mut StdRng) -> Vec<T> {
    if items.len() <= n {
        return items.to_vec();
    }
    items.choose_multiple(rng, n).cloned().collect()
}

fn chain_str(c: &MonotoneChain) -> String {
    format!("chain base {} direction {}", c.base, c.direction)
}

/// Upper sets within the fragment: `up[i]` lists `j` with `e_i ≤ e_j`.
pub fn up_sets(s: &FiberedSemigroup, frag: &Fragment) -> Vec<Vec<usize>> {
    let el = frag.elements();
    el.par_iter()
        .map(|a| (0..el.len()).filter(|j| s.leq(a, &el[*j])).collect())
        .collect()
}

/// Reflexivity, antisymmetry, transitivity of `≤` and the commutative monoid
/// laws of `+`, with monotonicity of `+`.
pub fn check_laws(s: &FiberedSemigroup, name: &str, frag: &Fragment) -> Report {
    let el = frag.elements();
    let bound = frag.bound;
    let up = up_sets(s, frag);
    let mut r = Report::new();

    let refl = el.iter().find(|a| !s.leq(a, a));
    r.push(Verdict::new("reflexive", name, refl.is_none()).at_bound(bound).with_witness(refl.map(|a| a.to_string())));

    let anti = (0..el.len()).into_par_iter().find_map_any(|i| {
        up[i].iter().find(|j| **j != i && up[**j].binary_search(&i).is_ok()).map(|j| (i, *j))
    });
    r.push(
        Verdict::new("antisymmetric", name, anti.is_none())
            .at_bound(bound)
            .with_witness(anti.map(|(i, j)| format!("{} and {}", el[i], el[j]))),
    );

    let trans = (0..el.len()).into_par_iter().find_map_any(|i| {
        up[i].iter().find_map(|j| up[*j].iter().find(|k| up[i].binary_search(k).is_err()).map(|k| (i, *j, *k)))
    });
    r.push(
        Verdict::new("transitive", name, trans.is_none())
            .at_bound(bound)
            .with_witness(trans.map(|(i, j, k)| format!("{} <= {} <= {}", el[i], el[j], el[k]))),
    );

    let zero = s.zero();
    let neutral = el.iter().find(|a| s.add(a, &zero) != **a);
    r.push(Verdict::new("neutral", name, neutral.is_none()).at_bound(bound).with_witness(neutral.map(|a| a.to_string())));

    let comm = el.par_iter().find_map_any(|a| el.iter().find(|b| s.add(a, b) != s.add(b, a)).map(|b| (a, b)));
    r.push(
        Verdict::new("commutative", name, comm.is_none())
            .at_bound(bound)
            .with_witness(comm.map(|(a, b)| format!("{a}, {b}"))),
    );

    let mut g = rng();
    let triples: Vec<(Element, Element, Element)> = (0..PAIR_SAMPLES)
        .map(|_| {
            let pick = |g: &mut StdRng| el.choose(g).expect("nonempty fragment").clone();
            (pick(&mut g), pick(&mut g), pick(&mut g))
        })
        .collect();
    let assoc = triples.iter().find(|(a, b, c)| s.add(&s.add(a, b), c) != s.add(a, &s.add(b, c)));
    r.push(
        Verdict::new("associative", name, assoc.is_none())
            .at_bound(bound)
            .with_witness(assoc.map(|(a, b, c)| format!("{a}, {b}, {c}")))
            .with_note(format!("{} sampled triples", triples.len())),
    );

    let comparable: Vec<(usize, usize)> =
        (0..el.len()).flat_map(|i| up[i].iter().map(move |j| (i, *j))).collect();
    let mono = (0..PAIR_SAMPLES).find_map(|_| {
        let (a, b) = *comparable.choose(&mut g)?;
        let (c, d) = *comparable.choose(&mut g)?;
        (!s.leq(&s.add(&el[a], &el[c]), &s.add(&el[b], &el[d]))).then_some((a, b, c, d))
    });
    r.push(
        Verdict::new("addition monotone", name, mono.is_none())
            .at_bound(bound)
            .with_witness(mono.map(|(a, b, c, d)| format!("{} <= {}, {} <= {}", el[a], el[b], el[c], el[d]))),
    );
    r
}

/// Whether `sup` is the least upper bound of `c` among fragment elements.
fn sup_is_least(s: &FiberedSemigroup, c: &MonotoneChain, frag: &Fragment) -> Option<String> {
    let sup = s.sup_chain(c);
    if !s.is_element(&sup) {
        return Some(format!("supremum {sup} is not an element"));
    }
    for j in 0..=frag.bound + 1 {
        let t = s.chain_term(c, j);
        if !s.leq(&t, &s.chain_term(c, j + 1)) {
            return Some(format!("not increasing at step {j}"));
        }
        if !s.leq(&t, &sup) {
            return Some(format!("term {t} not below supremum {sup}"));
        }
    }
    for u in frag.elements() {
        // u bounds the whole chain iff it bounds the term past its finite coordinates
        let is_bound = s.leq(&s.chain_term(c, u.x.max_finite() + 1), u);
        if is_bound && !s.leq(&sup, u) {
            return Some(format!("upper bound {u} not above supremum {sup}"));
        }
    }
    None
}

/// The `≪`-increasing chain `(min(x, j), k)`, `j ≥ 1`, with supremum `a`.
fn approximating_chain_failure(s: &FiberedSemigroup, a: &Element) -> Option<String> {
    let at = |j: u64| Element {
        x: CuVector(a.x.coords().iter().map(|c| (*c).min(Fin(j))).collect()),
        k: a.k.clone(),
    };
    let horizon = a.x.max_finite() + 2;
    for j in 1..=horizon {
        let (cur, next) = (at(j), at(j + 1));
        if !s.is_element(&cur) || !s.way_below(&cur, &next) || !s.way_below(&cur, a) {
            return Some(format!("{cur} is not way below {next} and {a}"));
        }
    }
    let tail = MonotoneChain {
        base: at(horizon),
        direction: CuVector(a.x.coords().iter().map(|c| if *c == Inf { Fin(1) } else { Fin(0) }).collect()),
    };
    (s.sup_chain(&tail) != *a).then(|| format!("approximating chain of {a} has supremum {}", s.sup_chain(&tail)))
}

pub fn check_axioms(s: &FiberedSemigroup, name: &str, bound: u64) -> Report {
    let frag = Fragment::new(s, bound);
    check_axioms_on(s, name, &frag)
}

pub fn check_axioms_on(s: &FiberedSemigroup, name: &str, frag: &Fragment) -> Report {
    let bound = frag.bound;
    let el = frag.elements();
    let mut g = rng();
    let mut r = Report::new();

    let chains = sample(&frag.chains(s.rank()), CHAIN_SAMPLES, &mut g);
    let o1 = chains.par_iter().find_map_any(|c| sup_is_least(s, c, frag).map(|e| format!("{}: {e}", chain_str(c))));
    r.push(
        Verdict::new("O1", name, o1.is_none())
            .at_bound(bound)
            .with_witness(o1)
            .with_note(format!("{} sampled chains", chains.len())),
    );

    let o2 = el.par_iter().find_map_any(|a| approximating_chain_failure(s, a));
    r.push(Verdict::new("O2", name, o2.is_none()).at_bound(bound).with_witness(o2));

    let wb_pairs: Vec<(usize, usize)> = (0..el.len())
        .into_par_iter()
        .flat_map_iter(|i| (0..el.len()).filter(move |j| s.way_below(&el[i], &el[*j])).map(move |j| (i, j)))
        .collect();
    let o3 = (0..PAIR_SAMPLES).find_map(|_| {
        let (a, b) = *wb_pairs.choose(&mut g)?;
        let (c, d) = *wb_pairs.choose(&mut g)?;
        let (lhs, rhs) = (s.add(&el[a], &el[c]), s.add(&el[b], &el[d]));
        (!s.way_below(&lhs, &rhs)).then(|| format!("{} + {} not way below {} + {}", el[a], el[c], el[b], el[d]))
    });
    r.push(Verdict::new("O3", name, o3.is_none()).at_bound(bound).with_witness(o3));

    let o4 = (0..PAIR_SAMPLES / 2).find_map(|_| {
        let c1 = chains.choose(&mut g)?;
        let c2 = chains.choose(&mut g)?;
        let sum = MonotoneChain { base: s.add(&c1.base, &c2.base), direction: &c1.direction + &c2.direction };
        let termwise = (0..4).all(|j| s.chain_term(&sum, j) == s.add(&s.chain_term(c1, j), &s.chain_term(c2, j)));
        let sups = s.sup_chain(&sum) == s.add(&s.sup_chain(c1), &s.sup_chain(c2));
        (!(termwise && sups)).then(|| format!("{} and {}", chain_str(c1), chain_str(c2)))
    });
    r.push(Verdict::new("O4", name, o4.is_none()).at_bound(bound).with_witness(o4));

    let pd = s.pd_status();
    let pd_witness = match &pd {
        PdStatus::Holds => None,
        PdStatus::Fails { label, witness } => Some(match witness {
            Some(w) => w.to_string(),
            None => format!("fiber at {label}"),
        }),
    };
    r.push(Verdict::new("PD", name, pd.holds()).with_witness(pd_witness).with_note("exact"));

    let pc = el.par_iter().filter(|b| s.is_positive(b)).find_map_any(|b| {
        el.iter().find(|a| s.leq(a, b) && !s.is_positive(&s.add(a, b))).map(|a| format!("{a} <= {b}"))
    });
    r.push(
        Verdict::new("PC", name, pc.is_none())
            .at_bound(bound)
            .with_witness(pc)
            .with_note("holds in every fibered semigroup; cross-checked on the fragment"),
    );
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn counterexample_satisfies_all_axioms() {
        let s = samples::counterexample();
        let r = check_axioms(&s, "S", 2);
        assert!(r.all_pass(), "{r}");
        let l = check_laws(&s, "S", &Fragment::new(&s, 2));
        assert!(l.all_pass(), "{l}");
    }

    #[test]
    fn positive_line_fails_only_pd() {
        let s = samples::positive_line();
        let r = check_axioms(&s, "N", 3);
        assert!(!r.passed("PD"));
        assert_eq!(r.get("PD").unwrap().witness.as_deref(), Some("((1), [1])"));
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn trivial_semigroup_passes() {
        let s = FiberedSemigroup::trivial();
        assert!(check_axioms(&s, "0", 3).all_pass());
        assert!(check_laws(&s, "0", &Fragment::new(&s, 3)).all_pass());
    }
}
