//! Command-line interface: argument definitions and command execution.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use cutilde_core::axioms::{check_axioms, check_laws};
use cutilde_core::exact::{check_functor_diagram, check_ideal_diagram, is_exact, is_short_exact, is_split};
use cutilde_core::fragment::Fragment;
use cutilde_core::ideals::{
    idl, ideal_leq, is_ideal, lat_join, lat_meet, lattice, lattice_dot, phi, phi_inv, SetIntersection,
};
use cutilde_core::morphism::validate_morphism;
use cutilde_core::quotients::{check_quotient_axioms, QuotientSemigroup};
use cutilde_core::report::{Report, Verdict};
use cutilde_core::Label;
use serde::Serialize;

use crate::error::CliError;
use crate::gallery;
use crate::workspace::Workspace;

#[derive(Debug, Parser)]
#[command(name = "cutilde", version, about = "Checks fibered ordered monoids over extended-natural vectors")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Workspace file to load.
    #[arg(long, global = true, conflicts_with = "gallery")]
    pub file: Option<PathBuf>,
    /// Load a gallery entry as the workspace.
    #[arg(long, global = true)]
    pub gallery: Option<String>,
    /// Fragment bound for enumerated checks.
    #[arg(long, global = true, env = "CUTILDE_BOUND", default_value_t = 3)]
    pub bound: u64,
    /// Print the report as JSON; given before the subcommand.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load the workspace and check every morphism.
    Validate,
    /// Order and monoid laws plus the axioms O1-O4, PD, PC.
    Axioms { semigroup: String },
    /// The ideal lattice and its correspondence with the positive cone.
    Lattice {
        semigroup: String,
        /// Write the Hasse diagram in DOT format (`-` for standard output).
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// The smallest ideal containing a positive element.
    Idl { element: String },
    /// Membership of an element in an ideal.
    Member { ideal: String, element: String },
    /// Meet in the ideal lattice.
    Meet {
        left: String,
        right: String,
        /// Also check whether the set intersection is an ideal.
        #[arg(long)]
        check_intersection: bool,
    },
    /// Join in the ideal lattice.
    Join { left: String, right: String },
    /// Presentation of the quotient by an ideal.
    Quotient {
        semigroup: String,
        ideal: String,
        /// Check the quotient axioms and the quotient map.
        #[arg(long)]
        check: bool,
    },
    /// Exactness at every interior object of a sequence.
    Exact { sequence: String },
    /// Short exactness and a splitting of the surjection.
    Split {
        sequence: String,
        /// Morphism splitting the surjection; defaults to the canonical one.
        #[arg(long)]
        with: Option<String>,
    },
    /// The commuting diagram with split exact rows induced by a morphism.
    Diagram {
        morphism: String,
        /// Restrict the morphism to this ideal first.
        #[arg(long)]
        ideal: Option<String>,
    },
    /// Built-in examples.
    Gallery {
        #[command(subcommand)]
        action: Option<GalleryAction>,
    },
    /// Run every check on the workspace and write a JSON report.
    Report {
        #[arg(long)]
        json: PathBuf,
    },
    /// Print the workspace back as source text.
    Print,
}

#[derive(Debug, Subcommand)]
pub enum GalleryAction {
    /// List the entries.
    List,
    /// Print the source of an entry.
    Show { name: String },
    /// Check the expectations of one entry.
    Run { name: String },
    /// Check the expectations of every entry.
    RunAll,
}

/// Text output together with the verdicts it produced.
#[derive(Debug, Default, Serialize)]
pub struct Outcome {
    pub output: Vec<String>,
    pub verdicts: Vec<Verdict>,
}

impl Outcome {
    fn line(&mut self, s: impl Into<String>) {
        self.output.push(s.into());
    }

    fn report(&mut self, r: Report) {
        self.verdicts.extend(r.verdicts);
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.verdict)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for l in &self.output {
            s.push_str(l);
            s.push('\n');
        }
        for v in &self.verdicts {
            s.push_str(&v.to_string());
            s.push('\n');
        }
        if !self.verdicts.is_empty() {
            let failed = self.verdicts.iter().filter(|v| !v.verdict).count();
            s.push_str(&format!("{} checks, {failed} failed\n", self.verdicts.len()));
        }
        s
    }
}

/// Exit status for an outcome: 0 if every verdict holds, 1 otherwise.
pub fn exit_code(result: &Result<Outcome, CliError>) -> i32 {
    match result {
        Ok(o) if o.all_pass() => 0,
        Ok(_) => 1,
        Err(_) => 2,
    }
}

fn load(global: &Global) -> Result<Workspace, CliError> {
    match (&global.file, &global.gallery) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)?;
            Workspace::load(&text)
        }
        (None, Some(name)) => gallery::load(name),
        (None, None) => Ok(Workspace::default()),
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let bound = cli.global.bound;
    if bound < 1 {
        return Err(CliError::Usage("the bound must be at least 1".into()));
    }
    if let Command::Gallery { action } = &cli.command {
        return gallery_command(action.as_ref().unwrap_or(&GalleryAction::List), bound);
    }
    let ws = load(&cli.global)?;
    let mut out = Outcome::default();
    match &cli.command {
        Command::Validate => {
            out.line(format!(
                "loaded {} semigroups, {} elements, {} ideals, {} morphisms, {} sequences",
                ws.semigroups.len(),
                ws.elements.len(),
                ws.ideals.len(),
                ws.morphisms.len(),
                ws.sequences.len()
            ));
            for (name, m) in &ws.morphisms {
                out.report(validate_morphism(&m.morphism, name, bound));
            }
        }
        Command::Axioms { semigroup } => {
            let s = ws.semigroup(semigroup)?;
            out.report(check_laws(s, semigroup, &Fragment::new(s, bound)));
            out.report(check_axioms(s, semigroup, bound));
        }
        Command::Lattice { semigroup, dot } => {
            let s = ws.semigroup(semigroup)?;
            let lat = lattice(s);
            for i in &lat {
                out.line(format!("{} {i} cone ideal {}", i.label(), phi(i).label));
            }
            let roundtrip = lat.iter().find(|i| phi_inv(s, phi(i)) != **i);
            out.verdicts.push(
                Verdict::new("phi inverse", semigroup.as_str(), roundtrip.is_none())
                    .with_witness(roundtrip.map(|i| i.to_string()))
                    .with_note("exact"),
            );
            let mut order_ok = true;
            for i in &lat {
                for j in &lat {
                    order_ok &= ideal_leq(i, j)? == phi(i).leq(&phi(j));
                }
            }
            out.verdicts.push(Verdict::new("phi order isomorphism", semigroup.as_str(), order_ok).with_note("exact"));
            if let Some(path) = dot {
                let text = lattice_dot(s, semigroup);
                if path.as_os_str() == "-" {
                    out.line(text.trim_end());
                } else {
                    std::fs::write(path, text)?;
                }
            }
        }
        Command::Idl { element } => {
            let e = ws.element(element)?;
            let i = idl(ws.semigroup(&e.semigroup)?, &e.element)?;
            out.line(format!("{i} with label {}", i.label()));
        }
        Command::Member { ideal, element } => {
            let i = ws.ideal(ideal)?;
            let e = ws.element(element)?;
            if e.semigroup != i.semigroup {
                return Err(CliError::Usage(format!("{element} and {ideal} live in different semigroups")));
            }
            out.verdicts.push(
                Verdict::new("member", format!("{element} in {ideal}"), i.ideal.contains(&e.element)).with_note("exact"),
            );
        }
        Command::Meet { left, right, check_intersection } => {
            let (i, j) = (&ws.ideal(left)?.ideal, &ws.ideal(right)?.ideal);
            let m = lat_meet(i, j)?;
            out.line(format!("{left} meet {right} = {m}"));
            if *check_intersection {
                let region = SetIntersection(vec![i.clone(), j.clone()]);
                out.report(is_ideal(i.ambient(), &region, &Fragment::new(i.ambient(), bound)));
            }
        }
        Command::Join { left, right } => {
            let m = lat_join(&ws.ideal(left)?.ideal, &ws.ideal(right)?.ideal)?;
            out.line(format!("{left} join {right} = {m}"));
        }
        Command::Quotient { semigroup, ideal, check } => {
            let i = ws.ideal(ideal)?;
            if i.semigroup != *semigroup {
                return Err(CliError::Usage(format!("{ideal} is an ideal of {}, not {semigroup}", i.semigroup)));
            }
            let q = QuotientSemigroup::new(&i.ideal);
            out.line(format!("{semigroup}/{ideal} over coordinates {}", ws.semigroup(semigroup)?.full_label().difference(i.ideal.label())));
            for t in Label::all(q.presentation.rank()) {
                out.line(format!("  fiber {t} = {}", q.presentation.fiber(t)));
            }
            for w in &q.warnings {
                out.line(format!("warning: {w}"));
            }
            if *check {
                out.report(check_quotient_axioms(&q, &format!("{semigroup}/{ideal}"), bound));
            }
        }
        Command::Exact { sequence } => {
            let s = ws.sequence(sequence)?;
            out.report(is_exact(&s.sequence, bound)?);
        }
        Command::Split { sequence, with } => {
            let s = ws.sequence(sequence)?;
            out.report(is_short_exact(&s.sequence, bound)?);
            let q = match with {
                Some(m) => ws.morphism(m)?.morphism.clone(),
                None => s.splitting.clone().ok_or_else(|| {
                    CliError::Usage(format!("{sequence} has no canonical splitting; pass --with <morphism>"))
                })?,
            };
            out.verdicts.push(is_split(&s.sequence.arrows[2], &q, sequence, bound)?);
        }
        Command::Diagram { morphism, ideal } => {
            let m = &ws.morphism(morphism)?.morphism;
            let r = match ideal {
                Some(i) => check_ideal_diagram(m, &ws.ideal(i)?.ideal, morphism, bound)?,
                None => check_functor_diagram(m, morphism, bound)?,
            };
            out.report(r);
        }
        Command::Report { json } => {
            let full = full_report(&ws, bound)?;
            std::fs::write(json, serde_json::to_string_pretty(&full)?)?;
            out.line(format!("wrote {}", json.display()));
            out.report(full);
        }
        Command::Print => out.line(ws.to_source().trim_end()),
        Command::Gallery { .. } => unreachable!("handled above"),
    }
    Ok(out)
}

/// Every check applicable to the declarations of a workspace.
pub fn full_report(ws: &Workspace, bound: u64) -> Result<Report, CliError> {
    let mut r = Report::new();
    for (name, s) in &ws.semigroups {
        r.extend(check_laws(s, name, &Fragment::new(s, bound)));
        r.extend(check_axioms(s, name, bound));
    }
    for (name, i) in &ws.ideals {
        let mut v = is_ideal(i.ideal.ambient(), &i.ideal, &Fragment::new(i.ideal.ambient(), bound));
        for x in &mut v.verdicts {
            x.object = name.clone();
        }
        r.extend(v);
    }
    for (name, m) in &ws.morphisms {
        r.extend(validate_morphism(&m.morphism, name, bound));
    }
    for (name, s) in &ws.sequences {
        let mut v = is_exact(&s.sequence, bound)?;
        for x in &mut v.verdicts {
            x.object = format!("{name} at {}", x.object);
        }
        r.extend(v);
        if let Some(q) = &s.splitting {
            r.push(is_split(&s.sequence.arrows[2], q, name, bound)?);
        }
    }
    Ok(r)
}

fn gallery_command(action: &GalleryAction, bound: u64) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    match action {
        GalleryAction::List => {
            for e in gallery::ENTRIES {
                out.line(format!("{:<16} {}", e.name, e.summary));
            }
        }
        GalleryAction::Show { name } => out.line(gallery::entry(name)?.source.trim_end()),
        GalleryAction::Run { name } => out.report(gallery::run_entry(gallery::entry(name)?, bound)?),
        GalleryAction::RunAll => {
            for e in gallery::ENTRIES {
                out.report(gallery::run_entry(e, bound)?);
            }
        }
    }
    Ok(out)
}
