//! Resolution of parsed declarations into validated core objects, and the
//! printer producing source text from a workspace.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use cutilde_core::abelian::FGAbelianGroup;
use cutilde_core::exact::{canonical_split, ideal_sequence, Sequence};
use cutilde_core::fiber::{DeltaDefault, FiberMonoid, FiberSystem};
use cutilde_core::ideals::{idl, IdealObject};
use cutilde_core::intmat::IntMatrix;
use cutilde_core::morphism::{ExtMatrix, Morphism};
use cutilde_core::{CuVector, Element, FiberedSemigroup, Label};
use indexmap::IndexMap;

use crate::dsl::{
    self, Decl, ElementLit, FiberSpec, GroupSpec, IdealGen, LabelRef, MapDefault, MorphismDecl, Pos,
    SemigroupDecl, SequenceBody, SequenceDecl,
};
use crate::error::CliError;

#[derive(Clone, Debug)]
pub struct NamedElement {
    pub semigroup: String,
    pub element: Element,
}

#[derive(Clone, Debug)]
pub struct NamedIdeal {
    pub semigroup: String,
    pub ideal: IdealObject,
}

#[derive(Clone, Debug)]
pub struct NamedMorphism {
    pub domain: String,
    pub codomain: String,
    pub morphism: Morphism,
}

#[derive(Clone, Debug)]
pub struct NamedSequence {
    pub body: SequenceBody,
    pub sequence: Sequence,
    /// The canonical splitting of a `canonical(S)` sequence.
    pub splitting: Option<Morphism>,
}

/// Every object declared in a workspace file, in declaration order.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub semigroups: IndexMap<String, Arc<FiberedSemigroup>>,
    pub elements: IndexMap<String, NamedElement>,
    pub ideals: IndexMap<String, NamedIdeal>,
    pub morphisms: IndexMap<String, NamedMorphism>,
    pub sequences: IndexMap<String, NamedSequence>,
}

fn unknown(kind: &'static str, name: &str) -> CliError {
    CliError::Unknown { kind, name: name.to_string() }
}

impl Workspace {
    /// Parses and validates workspace source text.
    pub fn load(text: &str) -> Result<Self, CliError> {
        let decls = dsl::parse(text)?;
        let mut ws = Workspace::default();
        let mut seen: HashMap<String, Pos> = HashMap::new();
        for d in &decls {
            if let Some(first) = seen.insert(d.name().to_string(), d.pos()) {
                return Err(CliError::at(
                    d.pos(),
                    format!("`{}` is already declared at {}:{}", d.name(), first.0, first.1),
                ));
            }
            match d {
                Decl::Semigroup(s) => {
                    let sg = resolve_semigroup(s)?;
                    ws.semigroups.insert(s.name.clone(), Arc::new(sg));
                }
                Decl::Element(e) => {
                    let s = ws.semigroup(&e.semigroup).map_err(|err| CliError::at(e.pos, err.to_string()))?;
                    let element = resolve_element(s, &e.value).map_err(|m| CliError::at(e.pos, m))?;
                    ws.elements.insert(e.name.clone(), NamedElement { semigroup: e.semigroup.clone(), element });
                }
                Decl::Ideal(i) => {
                    let (sg, g) = match &i.generator {
                        IdealGen::Element(name) => {
                            let e = ws.element(name).map_err(|err| CliError::at(i.pos, err.to_string()))?;
                            (e.semigroup.clone(), e.element.clone())
                        }
                        IdealGen::Literal(sg, lit) => {
                            let s = ws.semigroup(sg).map_err(|err| CliError::at(i.pos, err.to_string()))?;
                            (sg.clone(), resolve_element(s, lit).map_err(|m| CliError::at(i.pos, m))?)
                        }
                    };
                    let ideal = idl(&ws.semigroups[&sg], &g).map_err(|err| CliError::at(i.pos, err.to_string()))?;
                    ws.ideals.insert(i.name.clone(), NamedIdeal { semigroup: sg, ideal });
                }
                Decl::Morphism(m) => {
                    let morphism = ws.resolve_morphism(m)?;
                    ws.morphisms.insert(
                        m.name.clone(),
                        NamedMorphism { domain: m.domain.clone(), codomain: m.codomain.clone(), morphism },
                    );
                }
                Decl::Sequence(s) => {
                    let seq = ws.resolve_sequence(s)?;
                    ws.sequences.insert(s.name.clone(), seq);
                }
            }
        }
        Ok(ws)
    }

    pub fn semigroup(&self, name: &str) -> Result<&Arc<FiberedSemigroup>, CliError> {
        self.semigroups.get(name).ok_or_else(|| unknown("semigroup", name))
    }

    pub fn element(&self, name: &str) -> Result<&NamedElement, CliError> {
        self.elements.get(name).ok_or_else(|| unknown("element", name))
    }

    pub fn ideal(&self, name: &str) -> Result<&NamedIdeal, CliError> {
        self.ideals.get(name).ok_or_else(|| unknown("ideal", name))
    }

    pub fn morphism(&self, name: &str) -> Result<&NamedMorphism, CliError> {
        self.morphisms.get(name).ok_or_else(|| unknown("morphism", name))
    }

    pub fn sequence(&self, name: &str) -> Result<&NamedSequence, CliError> {
        self.sequences.get(name).ok_or_else(|| unknown("sequence", name))
    }

    /// The name under which an object is declared, if any.
    fn name_of(&self, s: &Arc<FiberedSemigroup>) -> Option<&str> {
        self.semigroups.iter().find(|(_, t)| Arc::ptr_eq(s, t) || **s == ***t).map(|(n, _)| n.as_str())
    }

    fn resolve_morphism(&self, m: &MorphismDecl) -> Result<Morphism, CliError> {
        let err = |message: String| CliError::at(m.pos, message);
        let dom = self.semigroup(&m.domain).map_err(|e| err(e.to_string()))?.clone();
        let cod = self.semigroup(&m.codomain).map_err(|e| err(e.to_string()))?.clone();
        let matrix = match &m.matrix {
            Some(rows) if rows.len() != cod.rank() => {
                return Err(err(format!("matrix has {} rows but {} has rank {}", rows.len(), m.codomain, cod.rank())))
            }
            Some(rows) => ExtMatrix::from_rows(rows, dom.rank()).map_err(|e| err(e.to_string()))?,
            None if dom.rank() == 0 || cod.rank() == 0 => ExtMatrix::zeros(cod.rank(), dom.rank()),
            None => return Err(err("missing `matrix`".into())),
        };
        let offset = match &m.offset {
            Some(l) => to_label(l, cod.rank()).map_err(err)?,
            None => Label::EMPTY,
        };
        let mut given = HashMap::new();
        for a in &m.alphas {
            let t = to_label(&a.label, dom.rank()).map_err(|msg| CliError::at(a.pos, msg))?;
            let th = offset.union(matrix.row_support(t));
            let mat = int_matrix(&a.matrix, dom.group(t), cod.group(th)).map_err(|msg| CliError::at(a.pos, msg))?;
            if given.insert(t, mat).is_some() {
                return Err(CliError::at(a.pos, format!("fiber map at {t} is given twice")));
            }
        }
        let default = m.alpha_default.unwrap_or(MapDefault::Zero);
        Morphism::new(dom.clone(), cod.clone(), matrix.clone(), offset, |t| {
            given.remove(&t).unwrap_or_else(|| {
                let (g, h) = (dom.group(t), cod.group(offset.union(matrix.row_support(t))));
                if default == MapDefault::Identity && g == h {
                    IntMatrix::identity(g.dim())
                } else {
                    IntMatrix::zeros(h.dim(), g.dim())
                }
            })
        })
        .map_err(|e| err(e.to_string()))
    }

    fn resolve_sequence(&self, s: &SequenceDecl) -> Result<NamedSequence, CliError> {
        let err = |message: String| CliError::at(s.pos, message);
        match &s.body {
            SequenceBody::Canonical(name) => {
                let sg = self.semigroup(name).map_err(|e| err(e.to_string()))?;
                let split = canonical_split(sg).map_err(|e| err(e.to_string()))?;
                let mut sequence = split.sequence;
                sequence.names = vec!["0".into(), format!("{name}+"), name.clone(), format!("{name}_max"), "0".into()];
                Ok(NamedSequence { body: s.body.clone(), sequence, splitting: Some(split.q) })
            }
            SequenceBody::Ideal(name) => {
                let i = self.ideal(name).map_err(|e| err(e.to_string()))?;
                let (_, _, mut sequence) = ideal_sequence(&i.ideal).map_err(|e| err(e.to_string()))?;
                sequence.names =
                    vec!["0".into(), name.clone(), i.semigroup.clone(), format!("{}/{name}", i.semigroup), "0".into()];
                Ok(NamedSequence { body: s.body.clone(), sequence, splitting: None })
            }
            SequenceBody::Chain { nodes, links } => {
                let objects: Vec<Option<&Arc<FiberedSemigroup>>> = nodes
                    .iter()
                    .map(|n| n.as_ref().map(|n| self.semigroup(n)).transpose())
                    .collect::<Result<_, _>>()
                    .map_err(|e| err(e.to_string()))?;
                let mut arrows = vec![];
                for (i, link) in links.iter().enumerate() {
                    let (a, b) = (objects[i], objects[i + 1]);
                    let arrow = match (link, a, b) {
                        (Some(m), _, _) => {
                            let m = self.morphism(m).map_err(|e| err(e.to_string()))?;
                            let matches = |o: Option<&Arc<FiberedSemigroup>>, s: &Arc<FiberedSemigroup>| match o {
                                Some(o) => **o == **s,
                                None => s.rank() == 0 && s.has_trivial_fibers(),
                            };
                            if !matches(a, &m.morphism.domain) || !matches(b, &m.morphism.codomain) {
                                return Err(err(format!("arrow {} does not fit between its neighbours", i + 1)));
                            }
                            m.morphism.clone()
                        }
                        (None, None, Some(t)) => Morphism::from_trivial(t),
                        (None, Some(s), None) => Morphism::to_trivial(s),
                        (None, None, None) => Morphism::identity(&Arc::new(FiberedSemigroup::trivial())),
                        (None, Some(_), Some(_)) => {
                            return Err(err(format!("arrow {} needs a morphism name", i + 1)));
                        }
                    };
                    arrows.push(arrow);
                }
                let names = nodes.iter().map(|n| n.clone().unwrap_or_else(|| "0".into())).collect();
                let sequence = Sequence::new(arrows, names).map_err(|e| err(e.to_string()))?;
                Ok(NamedSequence { body: s.body.clone(), sequence, splitting: None })
            }
        }
    }

    /// Source text that loads back into an equal workspace.
    pub fn to_source(&self) -> String {
        let mut out = String::new();
        for (name, s) in &self.semigroups {
            out.push_str(&print_semigroup(name, s));
            out.push('\n');
        }
        for (name, e) in &self.elements {
            writeln!(out, "element {name} in {} = {}", e.semigroup, e.element).unwrap();
        }
        for (name, i) in &self.ideals {
            writeln!(out, "ideal {name} = idl({}, {})", i.semigroup, i.ideal.e_max()).unwrap();
        }
        for (name, m) in &self.morphisms {
            out.push_str(&print_morphism(name, m));
        }
        for (name, s) in &self.sequences {
            let body = match &s.body {
                SequenceBody::Canonical(n) => format!("canonical({n})"),
                SequenceBody::Ideal(n) => format!("ideal_sequence({n})"),
                SequenceBody::Chain { nodes, links } => {
                    let mut b = nodes[0].clone().unwrap_or_else(|| "0".into());
                    for (l, n) in links.iter().zip(&nodes[1..]) {
                        match l {
                            Some(m) => write!(b, " -{m}-> ").unwrap(),
                            None => b.push_str(" -> "),
                        }
                        b.push_str(n.as_deref().unwrap_or("0"));
                    }
                    b
                }
            };
            writeln!(out, "sequence {name} = {body}").unwrap();
        }
        out
    }

    /// A display name for an object of the workspace or a derived one.
    pub fn describe(&self, s: &Arc<FiberedSemigroup>) -> String {
        self.name_of(s).map(str::to_string).unwrap_or_else(|| format!("rank-{} object", s.rank()))
    }
}

fn to_label(indices: &[usize], rank: usize) -> Result<Label, String> {
    if let Some(i) = indices.iter().find(|i| **i == 0 || **i > rank) {
        return Err(format!("coordinate {i} is outside 1..{rank}"));
    }
    Ok(Label::from_indices(indices.iter().map(|i| i - 1)))
}

fn group(g: &GroupSpec) -> Result<FGAbelianGroup, String> {
    FGAbelianGroup::new(g.free, g.torsion.clone()).map_err(|e| e.to_string())
}

fn fiber(spec: &FiberSpec) -> Result<FiberMonoid, String> {
    Ok(match spec {
        FiberSpec::Zero(None) => FiberMonoid::trivial(),
        FiberSpec::Zero(Some(g)) => FiberMonoid::zero(group(g)?),
        FiberSpec::Full(g) => FiberMonoid::full(group(g)?),
        FiberSpec::Cone(g, rows) => {
            if let Some(r) = rows.iter().find(|r| r.len() != g.free) {
                return Err(format!("functional {r:?} needs {} coefficients", g.free));
            }
            FiberMonoid::cone(group(g)?, IntMatrix::from_rows(rows, g.free)).map_err(|e| e.to_string())?
        }
    })
}

/// An integer matrix for a homomorphism `source → target`.
fn int_matrix(rows: &[Vec<i64>], source: &FGAbelianGroup, target: &FGAbelianGroup) -> Result<IntMatrix, String> {
    if rows.len() != target.dim() || rows.iter().any(|r| r.len() != source.dim()) {
        return Err(format!("matrix must be {}x{} for a map {source} -> {target}", target.dim(), source.dim()));
    }
    Ok(IntMatrix::from_rows(rows, source.dim()))
}

fn resolve_semigroup(d: &SemigroupDecl) -> Result<FiberedSemigroup, CliError> {
    let rank = d.rank.ok_or_else(|| CliError::at(d.pos, format!("semigroup {} needs a `rank`", d.name)))?;
    if rank > cutilde_core::label::MAX_RANK {
        return Err(CliError::at(d.pos, format!("rank {rank} exceeds {}", cutilde_core::label::MAX_RANK)));
    }
    let mut default = FiberMonoid::trivial();
    let mut specific: HashMap<Label, FiberMonoid> = HashMap::new();
    for f in &d.fibers {
        let monoid = fiber(&f.spec).map_err(|m| CliError::at(f.pos, m))?;
        match &f.label {
            LabelRef::Any => default = monoid,
            LabelRef::Set(l) => {
                let t = to_label(l, rank).map_err(|m| CliError::at(f.pos, m))?;
                if specific.insert(t, monoid).is_some() {
                    return Err(CliError::at(f.pos, format!("fiber {t} is given twice")));
                }
            }
        }
    }
    let fibers: Vec<FiberMonoid> =
        Label::all(rank).map(|t| specific.get(&t).cloned().unwrap_or_else(|| default.clone())).collect();
    let mut given = HashMap::new();
    for s in &d.deltas {
        let at = |m: String| CliError::at(s.pos, m);
        let (t, u) = (to_label(&s.from, rank).map_err(at)?, to_label(&s.to, rank).map_err(at)?);
        let m = int_matrix(&s.matrix, &fibers[t.0 as usize].group, &fibers[u.0 as usize].group).map_err(at)?;
        if given.insert((t, u), m).is_some() {
            return Err(CliError::at(s.pos, format!("delta {t} -> {u} is given twice")));
        }
    }
    let default = match d.delta_default {
        Some(MapDefault::Identity) => DeltaDefault::IdentityWhereShapesAgree,
        _ => DeltaDefault::Zero,
    };
    let sys = FiberSystem::build(rank, fibers, given, default)
        .map_err(|e| CliError::at(d.pos, format!("semigroup {}: {e}", d.name)))?;
    Ok(FiberedSemigroup::new(sys))
}

fn resolve_element(s: &FiberedSemigroup, lit: &ElementLit) -> Result<Element, String> {
    s.element(CuVector::from_slice(&lit.coords), &lit.fiber).map_err(|e| e.to_string())
}

fn matrix_source(rows: Vec<Vec<i64>>) -> String {
    let rows: Vec<String> =
        rows.iter().map(|r| format!("[{}]", r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))).collect();
    format!("[{}]", rows.join(", "))
}

fn print_semigroup(name: &str, s: &FiberedSemigroup) -> String {
    let mut out = format!("semigroup {name} {{\n  rank {}\n", s.rank());
    for t in Label::all(s.rank()) {
        writeln!(out, "  fiber {t} = {}", s.fiber(t)).unwrap();
    }
    for t in Label::all(s.rank()) {
        for u in t.supersets_within(s.full_label()) {
            let d = s.system().delta(t, u);
            if t != u && !d.matrix.is_zero() {
                writeln!(out, "  delta {t} -> {u} = {}", matrix_source(d.matrix.to_rows())).unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}

fn print_morphism(name: &str, m: &NamedMorphism) -> String {
    let f = &m.morphism;
    let mut out = format!("morphism {name} : {} -> {} {{\n  matrix = {}\n", m.domain, m.codomain, f.matrix);
    if !f.offset.is_empty() {
        writeln!(out, "  offset = {}", f.offset).unwrap();
    }
    for t in Label::all(f.domain.rank()) {
        let a = &f.fiber_map(t).matrix;
        if !a.is_zero() {
            writeln!(out, "  alpha {t} = {}", matrix_source(a.to_rows())).unwrap();
        }
    }
    out.push_str("}\n\n");
    out
}
