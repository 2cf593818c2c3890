//! The workspace language: a pest grammar and the syntax tree it produces.

use cutilde_core::ExtNat;
use pest::iterators::Pair;
use pest::Parser;
use pest_derive::Parser;

use crate::error::CliError;

#[derive(Parser)]
#[grammar = "cutilde.pest"]
struct DslParser;

/// 1-based line and column of a declaration or statement.
pub type Pos = (usize, usize);

/// A label as written: `*` or a set of 1-based coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabelRef {
    Any,
    Set(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub free: usize,
    pub torsion: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberSpec {
    Zero(Option<GroupSpec>),
    Full(GroupSpec),
    Cone(GroupSpec, Vec<Vec<i64>>),
}

/// Default for connecting maps or fiber maps that are not listed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapDefault {
    Identity,
    Zero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberStmt {
    pub label: LabelRef,
    pub spec: FiberSpec,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaStmt {
    pub from: Vec<usize>,
    pub to: Vec<usize>,
    pub matrix: Vec<Vec<i64>>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigroupDecl {
    pub name: String,
    pub pos: Pos,
    pub rank: Option<usize>,
    pub fibers: Vec<FiberStmt>,
    pub delta_default: Option<MapDefault>,
    pub deltas: Vec<DeltaStmt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementLit {
    pub coords: Vec<ExtNat>,
    pub fiber: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementDecl {
    pub name: String,
    pub pos: Pos,
    pub semigroup: String,
    pub value: ElementLit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdealGen {
    Element(String),
    Literal(String, ElementLit),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealDecl {
    pub name: String,
    pub pos: Pos,
    pub generator: IdealGen,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaStmt {
    pub label: Vec<usize>,
    pub matrix: Vec<Vec<i64>>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismDecl {
    pub name: String,
    pub pos: Pos,
    pub domain: String,
    pub codomain: String,
    pub matrix: Option<Vec<Vec<ExtNat>>>,
    pub offset: Option<Vec<usize>>,
    pub alpha_default: Option<MapDefault>,
    pub alphas: Vec<AlphaStmt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceBody {
    /// `0 → S₊ → S → S_max → 0` of a semigroup.
    Canonical(String),
    /// `0 → I → S → S/I → 0` of an ideal.
    Ideal(String),
    /// Objects (`None` for `0`) joined by arrows (`None` for an unnamed
    /// map into or out of `0`).
    Chain { nodes: Vec<Option<String>>, links: Vec<Option<String>> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceDecl {
    pub name: String,
    pub pos: Pos,
    pub body: SequenceBody,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Semigroup(SemigroupDecl),
    Element(ElementDecl),
    Ideal(IdealDecl),
    Morphism(MorphismDecl),
    Sequence(SequenceDecl),
}

impl Decl {
    pub fn name(&self) -> &str {
        match self {
            Decl::Semigroup(d) => &d.name,
            Decl::Element(d) => &d.name,
            Decl::Ideal(d) => &d.name,
            Decl::Morphism(d) => &d.name,
            Decl::Sequence(d) => &d.name,
        }
    }

    pub fn pos(&self) -> Pos {
        match self {
            Decl::Semigroup(d) => d.pos,
            Decl::Element(d) => d.pos,
            Decl::Ideal(d) => d.pos,
            Decl::Morphism(d) => d.pos,
            Decl::Sequence(d) => d.pos,
        }
    }
}

pub fn parse(text: &str) -> Result<Vec<Decl>, CliError> {
    let mut pairs = DslParser::parse(Rule::file, text).map_err(|e| {
        let (line, col) = match e.line_col {
            pest::error::LineColLocation::Pos(p) => p,
            pest::error::LineColLocation::Span(p, _) => p,
        };
        CliError::Syntax { line, col, message: e.variant.message().to_string() }
    })?;
    let file = pairs.next().expect("file rule");
    let mut decls = vec![];
    for p in file.into_inner() {
        let d = match p.as_rule() {
            Rule::semigroup => Decl::Semigroup(semigroup(p)?),
            Rule::element => Decl::Element(element(p)?),
            Rule::ideal => Decl::Ideal(ideal(p)?),
            Rule::morphism => Decl::Morphism(morphism(p)?),
            Rule::sequence => Decl::Sequence(sequence(p)?),
            _ => continue,
        };
        decls.push(d);
    }
    Ok(decls)
}

fn pos(p: &Pair<Rule>) -> Pos {
    p.line_col()
}

fn number<T: std::str::FromStr>(p: &Pair<Rule>) -> Result<T, CliError> {
    p.as_str().parse().map_err(|_| {
        let (line, col) = pos(p);
        CliError::Syntax { line, col, message: format!("number `{}` is out of range", p.as_str()) }
    })
}

fn int_list(p: Pair<Rule>) -> Result<Vec<i64>, CliError> {
    p.into_inner().map(|q| number(&q)).collect()
}

fn ext_list(p: Pair<Rule>) -> Result<Vec<ExtNat>, CliError> {
    p.into_inner()
        .map(|q| {
            q.as_str().parse().map_err(|message| {
                let (line, col) = pos(&q);
                CliError::Syntax { line, col, message }
            })
        })
        .collect()
}

fn int_matrix(p: Pair<Rule>) -> Result<Vec<Vec<i64>>, CliError> {
    p.into_inner().map(|row| int_list(row.into_inner().next().expect("row"))).collect()
}

fn ext_matrix(p: Pair<Rule>) -> Result<Vec<Vec<ExtNat>>, CliError> {
    p.into_inner().map(|row| ext_list(row.into_inner().next().expect("row"))).collect()
}

fn label(p: Pair<Rule>) -> Result<Vec<usize>, CliError> {
    p.into_inner().map(|q| number(&q)).collect()
}

fn label_ref(p: Pair<Rule>) -> Result<LabelRef, CliError> {
    match p.as_rule() {
        Rule::wildcard => Ok(LabelRef::Any),
        _ => Ok(LabelRef::Set(label(p)?)),
    }
}

fn map_default(p: Pair<Rule>) -> MapDefault {
    if p.as_str() == "id" {
        MapDefault::Identity
    } else {
        MapDefault::Zero
    }
}

fn group(p: Pair<Rule>) -> Result<GroupSpec, CliError> {
    let mut it = p.into_inner();
    let free = number(&it.next().expect("free rank"))?;
    let torsion = it.map(|q| number(&q)).collect::<Result<_, _>>()?;
    Ok(GroupSpec { free, torsion })
}

fn fiber_spec(p: Pair<Rule>) -> Result<FiberSpec, CliError> {
    let rule = p.as_rule();
    let mut it = p.into_inner();
    Ok(match rule {
        Rule::zero_spec => FiberSpec::Zero(it.next().map(group).transpose()?),
        Rule::full_spec => FiberSpec::Full(group(it.next().expect("group"))?),
        _ => {
            let g = group(it.next().expect("group"))?;
            let rows = it
                .map(|f| int_list(f.into_inner().next().expect("functional")))
                .collect::<Result<_, _>>()?;
            FiberSpec::Cone(g, rows)
        }
    })
}

fn semigroup(p: Pair<Rule>) -> Result<SemigroupDecl, CliError> {
    let at = pos(&p);
    let mut it = p.into_inner();
    let name = it.next().expect("name").as_str().to_string();
    let mut d = SemigroupDecl { name, pos: at, rank: None, fibers: vec![], delta_default: None, deltas: vec![] };
    for s in it {
        let at = pos(&s);
        match s.as_rule() {
            Rule::rank_stmt => d.rank = Some(number(&s.into_inner().next().expect("rank"))?),
            Rule::fiber_stmt => {
                let mut inner = s.into_inner();
                let label = label_ref(inner.next().expect("label"))?;
                let spec = fiber_spec(inner.next().expect("fiber"))?;
                d.fibers.push(FiberStmt { label, spec, pos: at });
            }
            Rule::delta_default => d.delta_default = Some(map_default(s.into_inner().next().expect("default"))),
            Rule::delta_stmt => {
                let mut inner = s.into_inner();
                let from = label(inner.next().expect("source"))?;
                let to = label(inner.next().expect("target"))?;
                let matrix = int_matrix(inner.next().expect("matrix"))?;
                d.deltas.push(DeltaStmt { from, to, matrix, pos: at });
            }
            _ => {}
        }
    }
    Ok(d)
}

fn element_lit(p: Pair<Rule>) -> Result<ElementLit, CliError> {
    let mut it = p.into_inner();
    let coords = ext_list(it.next().expect("coordinates"))?;
    let fiber = int_list(it.next().expect("fiber"))?;
    Ok(ElementLit { coords, fiber })
}

fn element(p: Pair<Rule>) -> Result<ElementDecl, CliError> {
    let at = pos(&p);
    let mut it = p.into_inner();
    let name = it.next().expect("name").as_str().to_string();
    let semigroup = it.next().expect("semigroup").as_str().to_string();
    let value = element_lit(it.next().expect("literal"))?;
    Ok(ElementDecl { name, pos: at, semigroup, value })
}

fn ideal(p: Pair<Rule>) -> Result<IdealDecl, CliError> {
    let at = pos(&p);
    let mut it = p.into_inner();
    let name = it.next().expect("name").as_str().to_string();
    let g = it.next().expect("generator");
    let generator = match g.as_rule() {
        Rule::ideal_literal => {
            let mut inner = g.into_inner();
            let sg = inner.next().expect("semigroup").as_str().to_string();
            IdealGen::Literal(sg, element_lit(inner.next().expect("literal"))?)
        }
        _ => IdealGen::Element(g.as_str().to_string()),
    };
    Ok(IdealDecl { name, pos: at, generator })
}

fn morphism(p: Pair<Rule>) -> Result<MorphismDecl, CliError> {
    let at = pos(&p);
    let mut it = p.into_inner();
    let name = it.next().expect("name").as_str().to_string();
    let domain = it.next().expect("domain").as_str().to_string();
    let codomain = it.next().expect("codomain").as_str().to_string();
    let mut d = MorphismDecl {
        name,
        pos: at,
        domain,
        codomain,
        matrix: None,
        offset: None,
        alpha_default: None,
        alphas: vec![],
    };
    for s in it {
        let at = pos(&s);
        match s.as_rule() {
            Rule::matrix_stmt => d.matrix = Some(ext_matrix(s.into_inner().next().expect("matrix"))?),
            Rule::offset_stmt => d.offset = Some(label(s.into_inner().next().expect("label"))?),
            Rule::alpha_default => d.alpha_default = Some(map_default(s.into_inner().next().expect("default"))),
            Rule::alpha_stmt => {
                let mut inner = s.into_inner();
                let label = label(inner.next().expect("label"))?;
                let matrix = int_matrix(inner.next().expect("matrix"))?;
                d.alphas.push(AlphaStmt { label, matrix, pos: at });
            }
            _ => {}
        }
    }
    Ok(d)
}

fn sequence(p: Pair<Rule>) -> Result<SequenceDecl, CliError> {
    let at = pos(&p);
    let mut it = p.into_inner();
    let name = it.next().expect("name").as_str().to_string();
    let b = it.next().expect("body");
    let body = match b.as_rule() {
        Rule::canonical_seq => SequenceBody::Canonical(b.into_inner().next().expect("name").as_str().to_string()),
        Rule::ideal_seq => SequenceBody::Ideal(b.into_inner().next().expect("name").as_str().to_string()),
        _ => {
            let (mut nodes, mut links) = (vec![], vec![]);
            for q in b.into_inner() {
                let inner = q.into_inner().next().expect("node or link");
                match inner.as_rule() {
                    Rule::zero_obj => nodes.push(None),
                    Rule::ident => nodes.push(Some(inner.as_str().to_string())),
                    Rule::plain_link => links.push(None),
                    _ => links.push(Some(inner.into_inner().next().expect("arrow").as_str().to_string())),
                }
            }
            SequenceBody::Chain { nodes, links }
        }
    };
    Ok(SequenceDecl { name, pos: at, body })
}
