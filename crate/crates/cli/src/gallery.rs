//! Built-in example workspaces, each shipped with the outcomes its checks
//! are expected to produce.

use cutilde_core::exact::{check_functor_diagram, check_split, ideal_sequence, is_short_exact};
use cutilde_core::ideals::{is_ideal, lat_meet, lattice, SetIntersection};
use cutilde_core::axioms::check_axioms;
use cutilde_core::fragment::Fragment;
use cutilde_core::morphism::validate_morphism;
use cutilde_core::quotients::{check_quotient_axioms, QuotientSemigroup};
use cutilde_core::report::{Report, Verdict};
use cutilde_core::CuError;

use crate::error::CliError;
use crate::workspace::Workspace;

/// An expected outcome of a check on a gallery workspace.
#[derive(Clone, Copy, Debug)]
pub enum Expect {
    /// Exactly the listed axiom checks fail.
    Axioms { sg: &'static str, failing: &'static [&'static str] },
    LatticeSize { sg: &'static str, size: usize },
    IsIdeal { ideal: &'static str },
    /// The set intersection of two ideals fails (PD) with the given witness.
    IntersectionFailsPd { left: &'static str, right: &'static str, witness: &'static str },
    /// `lat_meet` is generated by the given element.
    Meet { left: &'static str, right: &'static str, generator: &'static str },
    /// The canonical sequence is short exact and split, or cannot be formed.
    Split { sg: &'static str, exists: bool },
    /// `0 → I → S → S/I → 0` is short exact for every ideal, or fails for some ideal.
    IdealSequences { sg: &'static str, exact: bool },
    /// Every quotient passes its axiom checks.
    Quotients { sg: &'static str },
    MorphismValid { morphism: &'static str },
    /// The functor diagram commutes with exact rows.
    Diagram { morphism: &'static str },
}

pub struct Entry {
    pub name: &'static str,
    pub summary: &'static str,
    pub source: &'static str,
    pub expectations: &'static [Expect],
}

pub const ENTRIES: &[Entry] = &[
    Entry {
        name: "counterexample",
        summary: "rank 3, fiber Z except a half line over {2}; two ideals whose set intersection is not an ideal",
        source: "\
# Fiber Z over every label except {} (zero) and {2} (k >= 0); identity connecting maps.
semigroup S {
  rank 3
  fiber * = full Z^1
  fiber {} = zero
  fiber {2} = cone Z^1 [(1) >= 0]
  delta * = id
}
element e1 in S = ((inf,inf,0), [0])
element e2 in S = ((0,inf,inf), [0])
ideal I1 = idl(e1)
ideal I2 = idl(e2)
morphism swap : S -> S { matrix = [[0,0,1],[0,1,0],[1,0,0]]; alpha * = id }
morphism collapse : S -> S { matrix = [[1,1,0],[0,0,0],[0,0,1]]; alpha * = id }
sequence split = canonical(S)
sequence by_I1 = ideal_sequence(I1)
",
        expectations: &[
            Expect::Axioms { sg: "S", failing: &[] },
            Expect::LatticeSize { sg: "S", size: 8 },
            Expect::IsIdeal { ideal: "I1" },
            Expect::IsIdeal { ideal: "I2" },
            Expect::IntersectionFailsPd { left: "I1", right: "I2", witness: "((0,1,0), [1])" },
            Expect::Meet { left: "I1", right: "I2", generator: "((0,inf,0), [0])" },
            Expect::Split { sg: "S", exists: true },
            Expect::IdealSequences { sg: "S", exact: true },
            Expect::Quotients { sg: "S" },
            Expect::MorphismValid { morphism: "swap" },
            Expect::MorphismValid { morphism: "collapse" },
            Expect::Diagram { morphism: "swap" },
            Expect::Diagram { morphism: "collapse" },
        ],
    },
    Entry {
        name: "circle",
        summary: "rank 1 with fiber Z over {1}",
        source: "\
semigroup C { rank 1; fiber {1} = full Z^1 }
morphism flip : C -> C { matrix = [[1]]; alpha {1} = [[-1]] }
sequence split = canonical(C)
",
        expectations: &[
            Expect::Axioms { sg: "C", failing: &[] },
            Expect::LatticeSize { sg: "C", size: 2 },
            Expect::Split { sg: "C", exists: true },
            Expect::IdealSequences { sg: "C", exact: true },
            Expect::Quotients { sg: "C" },
            Expect::MorphismValid { morphism: "flip" },
            Expect::Diagram { morphism: "flip" },
        ],
    },
    Entry {
        name: "positive_line",
        summary: "rank 1 with fiber N over {1}; not positively directed",
        source: "semigroup N { rank 1; fiber {1} = cone Z^1 [(1) >= 0] }\n",
        expectations: &[
            Expect::Axioms { sg: "N", failing: &["PD"] },
            Expect::LatticeSize { sg: "N", size: 2 },
            Expect::Split { sg: "N", exists: false },
            Expect::IdealSequences { sg: "N", exact: false },
        ],
    },
    Entry {
        name: "ray_top",
        summary: "rank 2 with fiber Z over {1} and {2} and N on top; not positively directed",
        source: "\
semigroup R {
  rank 2
  fiber {1} = full Z^1
  fiber {2} = full Z^1
  fiber {1,2} = cone Z^1 [(1) >= 0]
}
",
        expectations: &[
            Expect::Axioms { sg: "R", failing: &["PD"] },
            Expect::LatticeSize { sg: "R", size: 4 },
            Expect::Split { sg: "R", exists: false },
            Expect::IdealSequences { sg: "R", exact: false },
        ],
    },
    Entry {
        name: "torsion_pair",
        summary: "rank 2 with Z/2 over {1}, Z over {2} and Z x Z/2 on top",
        source: "\
semigroup P {
  rank 2
  fiber {1} = full Z^0 x Z/2
  fiber {2} = full Z^1
  fiber {1,2} = full Z^1 x Z/2
  delta {1} -> {1,2} = [[0],[1]]
  delta {2} -> {1,2} = [[1],[0]]
}
morphism id : P -> P { matrix = [[1,0],[0,1]]; alpha * = id }
",
        expectations: &[
            Expect::Axioms { sg: "P", failing: &[] },
            Expect::LatticeSize { sg: "P", size: 4 },
            Expect::Split { sg: "P", exists: true },
            Expect::IdealSequences { sg: "P", exact: true },
            Expect::Quotients { sg: "P" },
            Expect::Diagram { morphism: "id" },
        ],
    },
    Entry {
        name: "half_plane",
        summary: "rank 2 with a half plane in Z^2 over {2}",
        source: "\
semigroup H {
  rank 2
  fiber {1} = full Z^1
  fiber {2} = cone Z^2 [(1,0) >= 0]
  fiber {1,2} = full Z^2
  delta * = id
  delta {1} -> {1,2} = [[1],[0]]
}
",
        expectations: &[
            Expect::Axioms { sg: "H", failing: &[] },
            Expect::LatticeSize { sg: "H", size: 4 },
            Expect::Split { sg: "H", exists: true },
            Expect::IdealSequences { sg: "H", exact: true },
            Expect::Quotients { sg: "H" },
        ],
    },
    Entry {
        name: "double_cover",
        summary: "rank 2 with fiber Z everywhere and multiplication by 2 from {1} to the top",
        source: "\
semigroup D {
  rank 2
  fiber * = full Z^1
  fiber {} = zero
  delta * = id
  delta {1} -> {1,2} = [[2]]
}
",
        expectations: &[
            Expect::Axioms { sg: "D", failing: &[] },
            Expect::LatticeSize { sg: "D", size: 4 },
            Expect::Split { sg: "D", exists: true },
            Expect::IdealSequences { sg: "D", exact: true },
            Expect::Quotients { sg: "D" },
        ],
    },
    Entry {
        name: "cu_line",
        summary: "the extended naturals",
        source: "semigroup N1 { rank 1 }\n",
        expectations: &[
            Expect::Axioms { sg: "N1", failing: &[] },
            Expect::LatticeSize { sg: "N1", size: 2 },
            Expect::Split { sg: "N1", exists: true },
            Expect::IdealSequences { sg: "N1", exact: true },
            Expect::Quotients { sg: "N1" },
        ],
    },
    Entry {
        name: "cu_square",
        summary: "the extended naturals squared",
        source: "\
semigroup N2 { rank 2 }
morphism swap : N2 -> N2 { matrix = [[0,1],[1,0]] }
",
        expectations: &[
            Expect::Axioms { sg: "N2", failing: &[] },
            Expect::LatticeSize { sg: "N2", size: 4 },
            Expect::Split { sg: "N2", exists: true },
            Expect::IdealSequences { sg: "N2", exact: true },
            Expect::Quotients { sg: "N2" },
            Expect::Diagram { morphism: "swap" },
        ],
    },
    Entry {
        name: "cu_quad",
        summary: "the extended naturals to the fourth",
        source: "semigroup N4 { rank 4 }\n",
        expectations: &[
            Expect::Axioms { sg: "N4", failing: &[] },
            Expect::LatticeSize { sg: "N4", size: 16 },
            Expect::Split { sg: "N4", exists: true },
            Expect::IdealSequences { sg: "N4", exact: true },
        ],
    },
    Entry {
        name: "rank_zero",
        summary: "the trivial semigroup",
        source: "semigroup Zero { rank 0 }\nsequence split = canonical(Zero)\n",
        expectations: &[
            Expect::Axioms { sg: "Zero", failing: &[] },
            Expect::LatticeSize { sg: "Zero", size: 1 },
            Expect::Split { sg: "Zero", exists: true },
            Expect::IdealSequences { sg: "Zero", exact: true },
            Expect::Quotients { sg: "Zero" },
        ],
    },
];

pub fn entry(name: &str) -> Result<&'static Entry, CliError> {
    ENTRIES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| CliError::Unknown { kind: "gallery entry", name: name.to_string() })
}

pub fn load(name: &str) -> Result<Workspace, CliError> {
    Workspace::load(entry(name)?.source)
}

fn summarize(report: &Report) -> Option<String> {
    report.failures().next().map(|v| v.to_string())
}

impl Expect {
    pub fn describe(&self) -> String {
        match self {
            Expect::Axioms { sg, failing: [] } => format!("{sg} satisfies every axiom"),
            Expect::Axioms { sg, failing } => format!("{sg} fails exactly {}", failing.join(", ")),
            Expect::LatticeSize { sg, size } => format!("Lat({sg}) has {size} members"),
            Expect::IsIdeal { ideal } => format!("{ideal} is an ideal"),
            Expect::IntersectionFailsPd { left, right, witness } => {
                format!("{left} ∩ {right} fails PD at {witness}")
            }
            Expect::Meet { left, right, generator } => format!("{left} ∧ {right} = Idl{generator}"),
            Expect::Split { sg, exists: true } => format!("0 -> {sg}+ -> {sg} -> {sg}_max -> 0 is split exact"),
            Expect::Split { sg, exists: false } => format!("{sg}_max is not a group"),
            Expect::IdealSequences { sg, exact: true } => format!("0 -> I -> {sg} -> {sg}/I -> 0 is short exact for every I"),
            Expect::IdealSequences { sg, exact: false } => format!("some 0 -> I -> {sg} -> {sg}/I -> 0 is not exact"),
            Expect::Quotients { sg } => format!("every quotient of {sg} passes its checks"),
            Expect::MorphismValid { morphism } => format!("{morphism} is a morphism"),
            Expect::Diagram { morphism } => format!("the diagram of {morphism} commutes with exact rows"),
        }
    }

    /// Runs the check and compares with the expectation; the witness of a
    /// mismatch is the first offending verdict.
    pub fn run(&self, ws: &Workspace, bound: u64) -> Result<(bool, Option<String>), CliError> {
        Ok(match *self {
            Expect::Axioms { sg, failing } => {
                let r = check_axioms(ws.semigroup(sg)?, sg, bound);
                let mut failed: Vec<&str> = r.failures().map(|v| v.check.as_str()).collect();
                failed.sort_unstable();
                let mut want = failing.to_vec();
                want.sort_unstable();
                (failed == want, (failed != want).then(|| format!("failing checks {failed:?}")))
            }
            Expect::LatticeSize { sg, size } => {
                let n = lattice(ws.semigroup(sg)?).len();
                (n == size, (n != size).then(|| format!("{n} members")))
            }
            Expect::IsIdeal { ideal } => {
                let i = &ws.ideal(ideal)?.ideal;
                let r = is_ideal(i.ambient(), i, &Fragment::new(i.ambient(), bound));
                (r.all_pass(), summarize(&r))
            }
            Expect::IntersectionFailsPd { left, right, witness } => {
                let (i, j) = (&ws.ideal(left)?.ideal, &ws.ideal(right)?.ideal);
                let region = SetIntersection(vec![i.clone(), j.clone()]);
                let r = is_ideal(i.ambient(), &region, &Fragment::new(i.ambient(), bound));
                let pd = r.get("PD").expect("PD verdict");
                let ok = !pd.verdict && pd.witness.as_deref() == Some(witness);
                (ok, (!ok).then(|| pd.to_string()))
            }
            Expect::Meet { left, right, generator } => {
                let m = lat_meet(&ws.ideal(left)?.ideal, &ws.ideal(right)?.ideal)?;
                let got = m.e_max().to_string();
                (got == generator, (got != generator).then(|| format!("meet is Idl{got}")))
            }
            Expect::Split { sg, exists } => match check_split(ws.semigroup(sg)?, sg, bound) {
                Ok(r) => (exists && r.all_pass(), summarize(&r).or_else(|| (!exists).then(|| "split sequence exists".into()))),
                Err(CuError::PdRequired(m)) => (!exists, exists.then_some(m)),
                Err(e) => return Err(e.into()),
            },
            Expect::IdealSequences { sg, exact } => {
                let mut r = Report::new();
                for i in lattice(ws.semigroup(sg)?) {
                    let (_, _, seq) = ideal_sequence(&i)?;
                    r.extend(is_short_exact(&seq, bound)?);
                }
                let note = if exact { summarize(&r) } else { r.all_pass().then(|| "every sequence is exact".into()) };
                (r.all_pass() == exact, note)
            }
            Expect::Quotients { sg } => {
                let mut r = Report::new();
                for i in lattice(ws.semigroup(sg)?) {
                    r.extend(check_quotient_axioms(&QuotientSemigroup::new(&i), &format!("{sg}/{i}"), bound));
                }
                (r.all_pass(), summarize(&r))
            }
            Expect::MorphismValid { morphism } => {
                let r = validate_morphism(&ws.morphism(morphism)?.morphism, morphism, bound);
                (r.all_pass(), summarize(&r))
            }
            Expect::Diagram { morphism } => {
                let r = check_functor_diagram(&ws.morphism(morphism)?.morphism, morphism, bound)?;
                (r.all_pass(), summarize(&r))
            }
        })
    }
}

/// Runs every expectation of an entry; one verdict per expectation.
pub fn run_entry(e: &Entry, bound: u64) -> Result<Report, CliError> {
    let ws = Workspace::load(e.source)?;
    let mut r = Report::new();
    for x in e.expectations {
        let (ok, witness) = x.run(&ws, bound)?;
        r.push(Verdict::new("expectation", format!("{}: {}", e.name, x.describe()), ok).at_bound(bound).with_witness(witness));
    }
    Ok(r)
}
