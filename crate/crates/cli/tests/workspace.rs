use cutilde::error::CliError;
use cutilde::gallery::{self, ENTRIES};
use cutilde::workspace::Workspace;
use cutilde_core::{samples, Label};
use proptest::prelude::*;

fn assert_same(a: &Workspace, b: &Workspace) {
    assert_eq!(a.semigroups.keys().collect::<Vec<_>>(), b.semigroups.keys().collect::<Vec<_>>());
    for (name, s) in &a.semigroups {
        assert_eq!(**s, *b.semigroups[name], "semigroup {name}");
    }
    for (name, e) in &a.elements {
        assert_eq!(e.element, b.elements[name].element, "element {name}");
        assert_eq!(e.semigroup, b.elements[name].semigroup);
    }
    for (name, i) in &a.ideals {
        assert_eq!(i.ideal, b.ideals[name].ideal, "ideal {name}");
    }
    for (name, m) in &a.morphisms {
        assert!(m.morphism.same_as(&b.morphisms[name].morphism), "morphism {name}");
    }
    for (name, s) in &a.sequences {
        let t = &b.sequences[name].sequence;
        assert_eq!(s.sequence.names, t.names, "sequence {name}");
        assert!(s.sequence.arrows.iter().zip(&t.arrows).all(|(f, g)| f.same_as(g)), "sequence {name}");
    }
}

#[test]
fn printed_gallery_workspaces_load_back_identically() {
    for e in ENTRIES {
        let ws = gallery::load(e.name).unwrap();
        let printed = ws.to_source();
        let again = Workspace::load(&printed).unwrap_or_else(|err| panic!("{}: {err}\n{printed}", e.name));
        assert_same(&ws, &again);
        assert_eq!(again.to_source(), printed, "{}", e.name);
    }
}

#[test]
fn gallery_sources_match_the_library_samples() {
    let pairs = [
        ("counterexample", "S", samples::counterexample()),
        ("circle", "C", samples::circle()),
        ("positive_line", "N", samples::positive_line()),
        ("torsion_pair", "P", samples::torsion_pair()),
        ("half_plane", "H", samples::half_plane()),
        ("double_cover", "D", samples::double_cover()),
    ];
    for (entry, sg, sample) in pairs {
        let ws = gallery::load(entry).unwrap();
        assert_eq!(**ws.semigroup(sg).unwrap(), sample, "{entry}");
    }
    let ws = gallery::load("counterexample").unwrap();
    let swap = samples::counterexample_swap(ws.semigroup("S").unwrap());
    assert!(ws.morphism("swap").unwrap().morphism.same_as(&swap));
    let ws = gallery::load("circle").unwrap();
    let flip = samples::circle_flip(ws.semigroup("C").unwrap());
    assert!(ws.morphism("flip").unwrap().morphism.same_as(&flip));
}

#[test]
fn deltas_must_respect_the_fiber_monoids() {
    let src = "\
semigroup Bad {
  rank 2
  fiber {1} = full Z^1
  fiber {1,2} = cone Z^1 [(1) >= 0]
  delta {1} -> {1,2} = [[1]]
}
";
    let msg = Workspace::load(src).unwrap_err().to_string();
    assert!(msg.contains("delta {1} -> {1,2} does not map"), "{msg}");
}

#[test]
fn composite_violation_names_three_labels() {
    // the identities along {1} -> {1,2} -> {1,2,3} compose to +1, not -1
    let src = "\
semigroup Bad {
  rank 3
  fiber * = full Z^1
  fiber {} = zero
  delta * = id
  delta {1} -> {1,2,3} = [[-1]]
}
";
    let msg = Workspace::load(src).unwrap_err().to_string();
    assert!(msg.contains("not functorial along {1} -> "), "{msg}");
    assert!(msg.contains("-> {1,2,3}"), "{msg}");
}

#[test]
fn errors_carry_positions_and_names() {
    match Workspace::load("semigroup S { rank 1 }\nelement e in T = ((1), [])\n") {
        Err(CliError::Invalid { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
    match Workspace::load("semigroup S { rank 1 \n fiber {1} = ful Z^1 }") {
        Err(CliError::Syntax { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
    let dup = Workspace::load("semigroup S { rank 1 }\nsemigroup S { rank 2 }\n").unwrap_err();
    assert!(dup.to_string().contains("already declared at 1:1"), "{dup}");
}

fn fiber_spec() -> impl Strategy<Value = &'static str> {
    prop_oneof![
        Just("zero"),
        Just("full Z^1"),
        Just("cone Z^1 [(1) >= 0]"),
        Just("full Z^1 x Z/3"),
        Just("zero in Z^2"),
        Just("cone Z^2 [(1,0) >= 0, (0,1) >= 0]"),
    ]
}

fn coord() -> impl Strategy<Value = String> {
    prop_oneof![(0u64..4).prop_map(|c| c.to_string()), Just("inf".to_string())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_workspaces_round_trip(
        rank in 1usize..3,
        fibers in proptest::collection::vec(fiber_spec(), 3),
        coords in proptest::collection::vec(coord(), 2),
    ) {
        let mut src = format!("semigroup A {{\n  rank {rank}\n");
        let labels: &[&str] = if rank == 1 { &["{1}"] } else { &["{1}", "{2}", "{1,2}"] };
        for (l, f) in labels.iter().zip(&fibers) {
            src.push_str(&format!("  fiber {l} = {f}\n"));
        }
        src.push_str("}\n");
        let x = coords[..rank].join(",");
        // a positive generator: fiber value 0 over its support
        let support = Label::from_indices((0..rank).filter(|i| coords[*i] != "0"));
        let dim = Workspace::load(&src).unwrap().semigroup("A").unwrap().group(support).dim();
        let k = vec!["0"; dim].join(",");
        src.push_str(&format!("element e in A = (({x}), [{k}])\nideal I = idl(e)\nsequence s = ideal_sequence(I)\n"));
        let rows: Vec<String> = (0..rank)
            .map(|i| format!("[{}]", (0..rank).map(|j| if i == j { "1" } else { "0" }).collect::<Vec<_>>().join(",")))
            .collect();
        src.push_str(&format!("morphism m : A -> A {{ matrix = [{}] }}\n", rows.join(",")));
        let ws = Workspace::load(&src).unwrap();
        let again = Workspace::load(&ws.to_source()).unwrap();
        assert_same(&ws, &again);
    }
}
