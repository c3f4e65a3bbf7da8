//! Randomized suites shared by the core test targets and the CLI
//! acceptance run. Each suite checks an operation against a naive
//! reference implementation over at least 256 generated cases.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use proptest::test_runner::{Config as ProptestConfig, TestCaseError, TestRunner};

use voxml_core::interpreter::{interpret_form, Scene};
use voxml_core::model::{Category, EntityAnnotation, Interval, LinkAnnotation, Span, Value};
use voxml_core::natural::natural_cmp;
use voxml_core::pformat::{parse_base_segmentation, parse_pformat, serialize_pformat};
use voxml_core::semantics::{
    apply_identities, compose, temporal_order, Condition, SemanticForm, Var,
};
use voxml_core::term::Term;
use voxml_core::voxicon::*;
use voxml_core::{AnnotationDocument, Voxicon};

pub const CASES: u32 = 256;

pub type Outcome = Result<(), String>;

pub type Suite = (&'static str, fn() -> Outcome);

fn run<S: Strategy>(strategy: S, check: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Outcome {
    let config = ProptestConfig {
        cases: CASES,
        failure_persistence: None,
        ..ProptestConfig::default()
    };
    TestRunner::new(config)
        .run(&strategy, check)
        .map_err(|e| e.to_string())
}

fn unit(check: fn()) -> Outcome {
    std::panic::catch_unwind(check).map_err(|e| {
        e.downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into())
    })
}

/// Parsing, composition, identity and temporal suites.
pub const SEMANTIC_SUITES: &[Suite] = &[
    ("pformat round trip", pformat_round_trip),
    ("parsers never panic", parsers_never_panic),
    (
        "pformat-like noise never panics",
        pformat_like_noise_never_panics,
    ),
    ("compose matches set union", compose_matches_set_union),
    ("compose laws", compose_laws),
    ("compose is order free", compose_is_order_free),
    ("first sentence under all 120 orders", || {
        unit(all_orders_of_the_first_sentence_agree)
    }),
    (
        "identities match the naive closure",
        identities_match_the_naive_closure,
    ),
    ("natural order of representatives", || {
        unit(natural_order_of_representatives)
    }),
    ("closure matches brute force", closure_matches_brute_force),
    (
        "consistent iff acyclic",
        interpretation_is_consistent_iff_acyclic,
    ),
];

/// Voxicon serialization suites.
pub const VOXICON_SUITES: &[Suite] = &[
    ("bundled voxicon round trip", || unit(bundled_round_trip)),
    ("random voxicon round trip", serialize_then_load_is_identity),
];

pub fn bundled_round_trip() {
    let vx = Voxicon::bundled();
    let once = Voxicon::load(&vx.serialize());
    assert!(once.diagnostics.is_empty(), "{:?}", once.diagnostics);
    let twice = Voxicon::load(&once.value.serialize());
    assert_eq!(once.value, vx);
    assert_eq!(twice.value, once.value);
}

// ---------------------------------------------------------------- pFormat

fn word() -> impl Strategy<Value = String> {
    prop::sample::select(vec![
        "glass", "table", "mary", "pickUp", "physobj", "artifact", "human", "spatial", "big red",
    ])
    .prop_map(str::to_string)
}

fn span() -> impl Strategy<Value = Span> {
    prop::collection::vec((1u32..30, 0u32..3), 1..3).prop_map(|ivs| {
        Span(
            ivs.into_iter()
                .map(|(s, len)| Interval::new(s, s + len))
                .collect(),
        )
    })
}

fn entity(id: String, targets: Vec<String>) -> impl Strategy<Value = EntityAnnotation> {
    let category = prop::sample::select(vec![
        Category::Object,
        Category::Action,
        Category::Event,
        Category::Relation,
    ]);
    let roles = prop::collection::vec(
        (
            prop::sample::select(vec!["agent", "theme", "source", "goal"]),
            prop::sample::select(targets),
        ),
        0..3,
    );
    (
        category,
        span(),
        prop::option::of(word()),
        prop::option::of(word()),
        roles,
    )
        .prop_map(move |(category, span, kind, pred, roles)| {
            let mut e = EntityAnnotation::new(id.clone(), category, span);
            e.kind = kind;
            e.pred = pred;
            let mut used = BTreeSet::new();
            for (role, target) in roles {
                if used.insert(role) {
                    e = e.with_attr(role, Value::Ref(target));
                }
            }
            e
        })
}

fn document() -> impl Strategy<Value = AnnotationDocument> {
    (1usize..6).prop_flat_map(|n| {
        let ids: Vec<String> = (1..=n).map(|i| format!("x{}", i)).collect();
        let entities: Vec<_> = ids
            .iter()
            .map(|id| entity(id.clone(), ids.clone()))
            .collect();
        let links = prop::collection::vec(
            (
                prop::sample::select(ids.clone()),
                prop::sample::select(ids.clone()),
                prop::sample::select(vec!["before", "after", "simultaneous"]),
            ),
            0..3,
        );
        (entities, links).prop_map(|(entities, links)| {
            let mut doc = AnnotationDocument::new();
            for e in entities {
                doc.push(e).unwrap();
            }
            for (i, (a, b, rel)) in links.into_iter().enumerate() {
                let l = LinkAnnotation::new(format!("tL{}", i + 1), Category::TLink)
                    .with_attr("eventID", Value::Ref(a))
                    .with_attr("relatedToEventID", Value::Ref(b))
                    .with_attr("relType", Value::Literal(rel.to_string()));
                doc.push(l).unwrap();
            }
            doc
        })
    })
}

pub fn pformat_round_trip() -> Outcome {
    run(document(), |doc| {
        let text = serialize_pformat(&doc);
        let parsed = parse_pformat(&text);
        prop_assert!(!parsed.has_errors(), "{}\n{:?}", text, parsed.diagnostics);
        prop_assert_eq!(parsed.value.annotations(), doc.annotations());
        prop_assert_eq!(serialize_pformat(&parsed.value), text);
        Ok(())
    })
}

pub fn parsers_never_panic() -> Outcome {
    run("\\PC{0,200}", |text| {
        let _ = parse_pformat(&text);
        let _ = parse_base_segmentation(&text);
        let _ = Voxicon::load(&text);
        let _ = Scene::parse(&text);
        let _ = Term::parse(&text);
        Ok(())
    })
}

pub fn pformat_like_noise_never_panics() -> Outcome {
    run("[a-zA-Z0-9_#=,(){}\"\\- \n]{0,200}", |text| {
        let _ = parse_pformat(&text);
        let _ = parse_base_segmentation(&text);
        Ok(())
    })
}

// ---------------------------------------------------------------- ⊕

fn var_name() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["x1", "x2", "x3", "x10", "e1", "e2", "r1"]).prop_map(str::to_string)
}

fn condition() -> impl Strategy<Value = Condition> {
    prop_oneof![
        (word(), var_name()).prop_map(|(p, v)| Condition::pred(p, v)),
        (
            prop::sample::select(vec!["agent", "theme"]),
            var_name(),
            var_name()
        )
            .prop_map(|(r, h, a)| Condition::role(r, h, a)),
        (var_name(), var_name()).prop_map(|(a, b)| Condition::Precedes(a.into(), b.into())),
    ]
}

fn form() -> impl Strategy<Value = SemanticForm> {
    (
        prop::collection::btree_set(var_name(), 0..4),
        prop::collection::btree_set(condition(), 0..5),
    )
        .prop_map(|(refs, conds)| SemanticForm {
            referents: refs.into_iter().map(Var::new).collect(),
            conditions: conds,
        })
}

/// Merge as plain set union, written out.
fn naive_merge(forms: &[SemanticForm]) -> (Vec<Var>, Vec<Condition>) {
    let mut refs: Vec<Var> = Vec::new();
    let mut conds: Vec<Condition> = Vec::new();
    for f in forms {
        for r in &f.referents {
            if !refs.contains(r) {
                refs.push(r.clone());
            }
        }
        for c in &f.conditions {
            if !conds.contains(c) {
                conds.push(c.clone());
            }
        }
    }
    refs.sort();
    conds.sort();
    (refs, conds)
}

pub fn compose_matches_set_union() -> Outcome {
    run(prop::collection::vec(form(), 0..6), |forms| {
        let got = compose(&forms);
        let (refs, conds) = naive_merge(&forms);
        prop_assert_eq!(got.referents.into_iter().collect::<Vec<_>>(), refs);
        prop_assert_eq!(got.conditions.into_iter().collect::<Vec<_>>(), conds);
        Ok(())
    })
}

pub fn compose_laws() -> Outcome {
    run((form(), form(), form()), |(a, b, c)| {
        prop_assert_eq!(compose([&a, &b]), compose([&b, &a]));
        prop_assert_eq!(
            compose([&compose([&a, &b]), &c]),
            compose([&a, &compose([&b, &c])])
        );
        prop_assert_eq!(compose([&a, &a]), a.clone());
        prop_assert_eq!(compose([&a, &SemanticForm::new()]), a);
        Ok(())
    })
}

pub fn compose_is_order_free() -> Outcome {
    run(
        (prop::collection::vec(form(), 1..6), any::<u64>()),
        |(forms, seed)| {
            let mut shuffled = forms.clone();
            // Deterministic Fisher-Yates from the seed.
            let mut s = seed;
            for i in (1..shuffled.len()).rev() {
                s = s
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                shuffled.swap(i, (s >> 33) as usize % (i + 1));
            }
            prop_assert_eq!(compose(&forms), compose(&shuffled));
            Ok(())
        },
    )
}

fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head.clone());
            out.push(p);
        }
    }
    out
}

pub fn all_orders_of_the_first_sentence_agree() {
    let base = |id: &str, conds: Vec<Condition>| {
        conds
            .into_iter()
            .fold(SemanticForm::new().with_referent(id), SemanticForm::with)
    };
    let forms = vec![
        base(
            "x1",
            vec![
                Condition::pred("human", "x1"),
                Condition::pred("mary", "x1"),
            ],
        ),
        base(
            "x2",
            vec![
                Condition::pred("physObj", "x2"),
                Condition::pred("glass", "x2"),
            ],
        ),
        base(
            "x3",
            vec![
                Condition::pred("physObj", "x3"),
                Condition::pred("table", "x3"),
            ],
        ),
        base(
            "e1",
            vec![
                Condition::pred("action", "e1"),
                Condition::pred("transition", "e1"),
                Condition::pred("pickUp", "e1"),
                Condition::role("agent", "e1", "x1"),
                Condition::role("theme", "e1", "x2"),
            ],
        ),
        base(
            "r1",
            vec![
                Condition::pred("relation", "r1"),
                Condition::role("source", "r1", "x3"),
            ],
        ),
    ];
    let all = permutations(&forms);
    assert_eq!(all.len(), 120);
    let expected = compose(&forms);
    assert_eq!(expected.conditions.len(), 13);
    for p in &all {
        assert_eq!(compose(p), expected);
    }
}

// ---------------------------------------------------------------- identity

/// Classes by repeated merging of overlapping sets until nothing changes.
fn naive_classes(pairs: &[(Var, Var)]) -> Vec<BTreeSet<Var>> {
    let mut groups: Vec<BTreeSet<Var>> = pairs
        .iter()
        .map(|(a, b)| BTreeSet::from([a.clone(), b.clone()]))
        .collect();
    loop {
        let mut merged = false;
        'outer: for i in 0..groups.len() {
            for j in i + 1..groups.len() {
                if !groups[i].is_disjoint(&groups[j]) {
                    let g = groups.remove(j);
                    groups[i].extend(g);
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            return groups;
        }
    }
}

fn naive_rep(groups: &[BTreeSet<Var>], v: &Var) -> Var {
    groups
        .iter()
        .find(|g| g.contains(v))
        .and_then(|g| {
            g.iter()
                .min_by(|a, b| natural_cmp(a.name(), b.name()))
                .cloned()
        })
        .unwrap_or_else(|| v.clone())
}

fn object_var() -> impl Strategy<Value = Var> {
    (1u32..13).prop_map(|n| Var::new(format!("x{}", n)))
}

pub fn identities_match_the_naive_closure() -> Outcome {
    run(
        (
            prop::collection::vec((object_var(), object_var()), 0..8),
            prop::collection::vec((word(), object_var()), 0..8),
            prop::collection::vec(object_var(), 0..4),
        ),
        |(eqs, preds, roles)| {
            let mut f = SemanticForm::new();
            for (a, b) in &eqs {
                f = f
                    .with_referent(a.clone())
                    .with_referent(b.clone())
                    .with(Condition::Equal(a.clone(), b.clone()));
            }
            for (p, v) in &preds {
                f = f
                    .with_referent(v.clone())
                    .with(Condition::pred(p.clone(), v.clone()));
            }
            for v in &roles {
                f = f
                    .with_referent("e1")
                    .with_referent(v.clone())
                    .with(Condition::role("theme", "e1", v.clone()));
            }
            let got = apply_identities(&f).unwrap();
            let groups = naive_classes(&eqs);
            let image: BTreeSet<Condition> = f
                .conditions
                .iter()
                .map(|c| {
                    if c.is_equality() {
                        c.clone()
                    } else {
                        c.map_vars(&|v| naive_rep(&groups, v))
                    }
                })
                .collect();
            prop_assert_eq!(&got.conditions, &image);
            prop_assert_eq!(&got.referents, &f.referents);
            prop_assert!(got.conditions.len() <= f.conditions.len());
            for c in got.conditions.iter().filter(|c| !c.is_equality()) {
                for v in c.vars() {
                    prop_assert_eq!(naive_rep(&groups, v), v.clone());
                }
            }
            Ok(())
        },
    )
}

pub fn natural_order_of_representatives() {
    let f = SemanticForm::new()
        .with(Condition::Equal("x10".into(), "x9".into()))
        .with(Condition::pred("p", "x10"));
    let g = apply_identities(&f).unwrap();
    assert!(g.conditions.contains(&Condition::pred("p", "x9")));
    assert_eq!(natural_cmp("x9", "x10"), Ordering::Less);
}

// ---------------------------------------------------------------- temporal

#[derive(Debug, Clone)]
struct Digraph {
    n: usize,
    strict: Vec<(usize, usize)>,
    same: Vec<(usize, usize)>,
}

fn digraph() -> impl Strategy<Value = Digraph> {
    (1usize..=6).prop_flat_map(|n| {
        (
            prop::collection::vec((0..n, 0..n), 0..9),
            prop::collection::vec((0..n, 0..n), 0..3),
        )
            .prop_map(move |(strict, same)| Digraph { n, strict, same })
    })
}

fn event(i: usize) -> Var {
    Var::new(format!("e{}", i + 1))
}

fn temporal_form(g: &Digraph) -> SemanticForm {
    let mut f = SemanticForm::new();
    for &(a, b) in &g.strict {
        f = f.with(Condition::Precedes(event(a), event(b)));
    }
    for &(a, b) in &g.same {
        let (a, b) = (a.min(b), a.max(b));
        f = f.with(Condition::Simultaneous(event(a), event(b)));
    }
    f
}

/// Quotient by simultaneity, then Warshall on the quotient.
fn brute_force(g: &Digraph) -> (bool, Vec<Vec<bool>>) {
    let mut class: Vec<usize> = (0..g.n).collect();
    for _ in 0..g.n {
        for &(a, b) in &g.same {
            let m = class[a].min(class[b]);
            let (ca, cb) = (class[a], class[b]);
            for c in class.iter_mut() {
                if *c == ca || *c == cb {
                    *c = m;
                }
            }
        }
    }
    let mut reach = vec![vec![false; g.n]; g.n];
    for &(a, b) in &g.strict {
        reach[class[a]][class[b]] = true;
    }
    for k in 0..g.n {
        for i in 0..g.n {
            for j in 0..g.n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    let cyclic = (0..g.n).any(|i| reach[i][i]);
    let precedes = (0..g.n)
        .map(|a| (0..g.n).map(|b| reach[class[a]][class[b]]).collect())
        .collect();
    (cyclic, precedes)
}

fn mentioned(g: &Digraph) -> BTreeSet<usize> {
    g.strict
        .iter()
        .chain(&g.same)
        .flat_map(|&(a, b)| [a, b])
        .collect()
}

pub fn closure_matches_brute_force() -> Outcome {
    run(digraph(), |g| {
        let (cyclic, precedes) = brute_force(&g);
        match temporal_order(&temporal_form(&g)) {
            Ok(order) => {
                prop_assert!(!cyclic);
                let used = mentioned(&g);
                for &a in &used {
                    for &b in &used {
                        prop_assert_eq!(
                            order.precedes(&event(a), &event(b)),
                            precedes[a][b],
                            "e{} e{}",
                            a + 1,
                            b + 1
                        );
                    }
                }
                let ext = order.linear_extension();
                let pos: BTreeMap<&Var, usize> =
                    ext.iter().enumerate().map(|(i, v)| (v, i)).collect();
                for &(a, b) in &g.strict {
                    prop_assert!(pos[&event(a)] < pos[&event(b)]);
                }
            }
            Err(inconsistency) => {
                prop_assert!(cyclic);
                // The witness is a closed walk with at least one strict step.
                let c = &inconsistency.cycle;
                prop_assert!(!c.is_empty());
                let strict: BTreeSet<(Var, Var)> = g
                    .strict
                    .iter()
                    .map(|&(a, b)| (event(a), event(b)))
                    .collect();
                let same: BTreeSet<(Var, Var)> = g
                    .same
                    .iter()
                    .flat_map(|&(a, b)| [(event(a), event(b)), (event(b), event(a))])
                    .collect();
                let mut any_strict = false;
                for i in 0..c.len() {
                    let step = (c[i].clone(), c[(i + 1) % c.len()].clone());
                    let is_strict = strict.contains(&step);
                    prop_assert!(is_strict || same.contains(&step), "{:?}", step);
                    any_strict |= is_strict;
                }
                prop_assert!(any_strict);
            }
        }
        Ok(())
    })
}

// ---------------------------------------------------------------- interpreter

/// Kahn's algorithm: acyclic iff every node can be removed.
fn kahn_acyclic(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut indegree = vec![0usize; n];
    for &(_, b) in edges {
        indegree[b] += 1;
    }
    let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut removed = 0;
    while let Some(i) = ready.pop() {
        removed += 1;
        for &(a, b) in edges {
            if a == i {
                indegree[b] -= 1;
                if indegree[b] == 0 {
                    ready.push(b);
                }
            }
        }
    }
    removed == n
}

fn wash_scenario(n: usize, edges: &[(usize, usize)]) -> SemanticForm {
    let mut f = SemanticForm::new()
        .with_referent("x2")
        .with_referent("x5")
        .with(Condition::pred("physObj", "x2"))
        .with(Condition::pred("glass", "x2"))
        .with(Condition::pred("physObj", "x5"))
        .with(Condition::pred("dishwasher", "x5"));
    for i in 0..n {
        let e = event(i);
        f = f
            .with_referent(e.clone())
            .with(Condition::pred("action", e.clone()))
            .with(Condition::pred("process", e.clone()))
            .with(Condition::pred("wash", e.clone()))
            .with(Condition::role("agent", e.clone(), "x5"))
            .with(Condition::role("theme", e, "x2"));
    }
    for &(a, b) in edges {
        f = f.with(Condition::Precedes(event(a), event(b)));
    }
    f
}

pub fn interpretation_is_consistent_iff_acyclic() -> Outcome {
    run(
        (1usize..=5).prop_flat_map(|n| (Just(n), prop::collection::vec((0..n, 0..n), 0..7))),
        |(n, edges)| {
            let vx = Voxicon::bundled();
            let result = interpret_form(wash_scenario(n, &edges), &[], &vx, None);
            prop_assert_eq!(
                result.consistent,
                kahn_acyclic(n, &edges),
                "{}",
                result.to_text()
            );
            if result.consistent {
                prop_assert_eq!(result.programs.len(), n);
                prop_assert!(result.paths.iter().all(|p| p.is_strictly_increasing()));
            } else {
                prop_assert!(result.diagnostics.iter().any(|d| d.code == "VXI010"));
            }
            Ok(())
        },
    )
}

// ---------------------------------------------------------------- voxicon

fn pick<T: Clone + std::fmt::Debug + 'static>(items: Vec<T>) -> impl Strategy<Value = T> {
    prop::sample::select(items)
}

fn term(head: &'static str, args: Vec<&str>) -> Term {
    Term::app(head, args.into_iter().map(Term::atom).collect())
}

fn constraint() -> impl Strategy<Value = Term> {
    pick(vec![
        term("top", vec!["+Y", "this"]),
        term("align", vec!["Y", "E_perpY", "this"]),
        term("on", vec!["this", "Floor"]),
    ])
}

fn object(pred: String) -> impl Strategy<Value = Voxeme> {
    (
        pick(vec![Concavity::Concave, Concavity::Flat, Concavity::Convex]),
        prop::collection::btree_set(pick(vec![Axis::X, Axis::Y, Axis::Z]), 0..3),
        prop::collection::btree_set(pick(vec![Plane::XY, Plane::XZ, Plane::YZ]), 0..3),
        prop::collection::vec(
            (any::<bool>(), prop::collection::vec(constraint(), 1..3)),
            0..3,
        ),
        prop::collection::vec(
            (
                pick(vec!["grasp", "roll", "contain"]),
                any::<bool>(),
                any::<bool>(),
            ),
            0..3,
        ),
        pick(vec![Scale::Smaller, Scale::Comparable, Scale::Larger]),
        any::<bool>(),
    )
        .prop_map(
            move |(concavity, rot, refl, habitats, affordances, scale, movable)| {
                let habitat: Vec<Habitat> = habitats
                    .into_iter()
                    .enumerate()
                    .map(|(i, (extrinsic, constraints))| Habitat {
                        id: format!("H{}", i + 1),
                        kind: if extrinsic {
                            HabitatKind::Extrinsic
                        } else {
                            HabitatKind::Intrinsic
                        },
                        constraints,
                    })
                    .collect();
                let afford_str = affordances
                    .into_iter()
                    .enumerate()
                    .map(|(i, (act, telic, with_result))| Affordance {
                        id: format!("A{}", i + 1),
                        kind: if telic {
                            AffordanceKind::Telic
                        } else {
                            AffordanceKind::Gibsonian
                        },
                        habitat: habitat.first().map(|h| h.id.clone()),
                        precondition: None,
                        slots: vec!["x".into()],
                        event: Term::app(act, vec![Term::atom("x"), Term::atom("this")]),
                        result: with_result.then(|| term("hold", vec!["x", "this"])),
                    })
                    .collect();
                Voxeme::Object(ObjectVoxeme {
                    lex: ObjectLex {
                        pred: pred.clone(),
                        types: vec!["physobj".into()],
                    },
                    shape: ObjectType {
                        head: "cylindroid".into(),
                        components: vec![],
                        concavity,
                        rotat_sym: rot.into_iter().collect(),
                        refl_sym: refl.into_iter().collect(),
                    },
                    habitat,
                    afford_str,
                    embodiment: Embodiment { scale, movable },
                })
            },
        )
}

fn agent(pred: String) -> impl Strategy<Value = Voxeme> {
    prop::collection::vec(pick(vec!["hand", "wheels", "spray_arm", "heater"]), 1..3).prop_map(
        move |heads| {
            Voxeme::Agent(AgentVoxeme {
                lex: AgentLex {
                    pred: pred.clone(),
                    kind: "robot".into(),
                },
                parts: heads
                    .into_iter()
                    .map(|h| vec![h.to_string(), "self".into()])
                    .collect(),
                enabled_acts: Default::default(),
            })
        },
    )
}

fn action(pred: String) -> impl Strategy<Value = Voxeme> {
    (any::<bool>(), prop::collection::vec(any::<bool>(), 2..4)).prop_map(
        move |(transition, steps)| {
            let body = steps
                .into_iter()
                .map(|looped| {
                    if looped {
                        Step::While {
                            cond: term("hold", vec!["x", "y"]),
                            act: term("move", vec!["x", "y", "E_Y"]),
                        }
                    } else {
                        Step::Act(term("grasp", vec!["x", "y"]))
                    }
                })
                .collect();
            Voxeme::Action(ActionVoxeme {
                lex: ActionLex {
                    pred: pred.clone(),
                    kind: if transition {
                        ActionType::Transition
                    } else {
                        ActionType::Process
                    },
                },
                args: vec![
                    ActionArg {
                        slot: "x".into(),
                        role: "agent".into(),
                        sort: "agent".into(),
                    },
                    ActionArg {
                        slot: "y".into(),
                        role: "theme".into(),
                        sort: "physobj".into(),
                    },
                ],
                body,
            })
        },
    )
}

fn relation(pred: String) -> impl Strategy<Value = Voxeme> {
    (
        pick(vec![Endpoint::Initial, Endpoint::Final]),
        pick(vec!["source", "goal"]),
        pick(vec![
            LocationKind::At,
            LocationKind::Interior,
            LocationKind::Surface,
        ]),
    )
        .prop_map(move |(endpoint, role, location)| {
            Voxeme::Relation(RelationVoxeme {
                lex: RelationLex { pred: pred.clone() },
                endpoint,
                role: role.into(),
                location,
            })
        })
}

fn voxicon() -> impl Strategy<Value = Voxicon> {
    prop::collection::vec(0u8..4, 0..8).prop_flat_map(|kinds| {
        let parts: Vec<BoxedStrategy<Voxeme>> = kinds
            .into_iter()
            .enumerate()
            .map(|(i, k)| {
                let pred = format!("lex{}", i);
                match k {
                    0 => object(pred).boxed(),
                    1 => agent(pred).boxed(),
                    2 => action(pred).boxed(),
                    _ => relation(pred).boxed(),
                }
            })
            .collect();
        parts.prop_map(|voxemes| {
            let mut vx = Voxicon::new();
            for v in voxemes {
                vx.insert(v).unwrap();
            }
            vx
        })
    })
}

pub fn serialize_then_load_is_identity() -> Outcome {
    run(voxicon(), |vx| {
        let text = vx.serialize();
        let loaded = Voxicon::load(&text);
        prop_assert!(
            loaded.diagnostics.is_empty(),
            "{}\n{:?}",
            text,
            loaded.diagnostics
        );
        prop_assert_eq!(&loaded.value, &vx);
        prop_assert_eq!(loaded.value.serialize(), text);
        Ok(())
    })
}
