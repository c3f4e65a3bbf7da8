//! Interpretation of a composed semantic form against a voxicon.
//!
//! The pipeline binds referents to voxemes, checks agent capabilities,
//! embodiment and habitats, instantiates action bodies into subevent
//! programs and traces the path of each moved object.
//!
//! | code   | severity | stage       | meaning                                  |
//! |--------|----------|-------------|------------------------------------------|
//! | VXI001 | error    | bind        | pronoun not equated to any antecedent    |
//! | VXI002 | warning  | bind        | no voxeme for a referent                 |
//! | VXI003 | error    | selectional | agent lacks a capability the body needs  |
//! | VXI004 | error    | selectional | agent role filled by a non-agent         |
//! | VXI005 | error    | selectional | moved theme is immovable                 |
//! | VXI006 | error    | selectional | moved theme is not smaller than an agent |
//! | VXI007 | warning  | habitat     | extrinsic habitat unsatisfied            |
//! | VXI008 | error    | expand      | no filler for a body slot                |
//! | VXI009 | error    | path        | initial-point relation without landmark  |
//! | VXI010 | error    | temporal    | precedence cycle                         |
//! | VXI011 | error    | semantics   | translation or identity failure          |

mod scene;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::diagnostic::{Diagnostic, Severity, Stage};
use crate::model::{AnnotationDocument, Category};
use crate::semantics::{
    apply_identities, temporal_order, translate_document, Condition, IdentityClasses,
    PrecedenceOrder, SemanticForm, Sort, TemporalInconsistency, Var,
};
use crate::term::Term;
use crate::voxicon::{
    ActionVoxeme, Endpoint, HabitatKind, LocationKind, Scale, Step, Voxeme, VoxemeCategory, Voxicon,
};

pub use scene::Scene;

/// Unary predicates that carry no lexical content for voxeme lookup.
const NON_LEXICAL: [&str; 3] = ["pro", "action", "relation"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ReferentSort {
    Object,
    Agent,
    Action,
    Relation,
}

impl ReferentSort {
    fn category(self) -> VoxemeCategory {
        match self {
            ReferentSort::Object => VoxemeCategory::Object,
            ReferentSort::Agent => VoxemeCategory::Agent,
            ReferentSort::Action => VoxemeCategory::Action,
            ReferentSort::Relation => VoxemeCategory::Relation,
        }
    }
}

impl fmt::Display for ReferentSort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReferentSort::Object => "object",
            ReferentSort::Agent => "agent",
            ReferentSort::Action => "action",
            ReferentSort::Relation => "relation",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binding {
    pub referent: Var,
    pub sort: ReferentSort,
    pub voxeme: Option<Voxeme>,
    /// Set when the binding is inherited from an identity-class representative.
    pub via: Option<Var>,
}

impl Binding {
    pub fn pred(&self) -> Option<&str> {
        self.voxeme.as_ref().map(Voxeme::pred)
    }

    /// Short description of the bound voxeme's salient fields.
    pub fn details(&self) -> Vec<String> {
        match &self.voxeme {
            None => Vec::new(),
            Some(Voxeme::Object(o)) => vec![
                format!("head={}", o.shape.head),
                format!("concavity={:?}", o.shape.concavity).to_lowercase(),
                format!("rotatSym=[{}]", join_debug(&o.shape.rotat_sym)),
                format!("reflSym=[{}]", join_debug(&o.shape.refl_sym)),
                format!("scale={}", o.embodiment.scale),
                format!("movable={}", o.embodiment.movable),
            ],
            Some(Voxeme::Agent(a)) => vec![
                format!("type={}", a.lex.kind),
                format!("parts={}", a.chains().join("; ")),
                format!(
                    "acts={}",
                    a.enabled_acts.iter().cloned().collect::<Vec<_>>().join(",")
                ),
            ],
            Some(Voxeme::Action(a)) => vec![
                format!("type={}", a.lex.kind),
                format!("stages={}", a.body.len()),
            ],
            Some(Voxeme::Relation(r)) => vec![
                format!("endpoint={:?}", r.endpoint).to_lowercase(),
                format!("role={}", r.role),
                format!("location={:?}", r.location).to_lowercase(),
            ],
        }
    }
}

fn join_debug<T: fmt::Debug>(items: &[T]) -> String {
    items
        .iter()
        .map(|i| format!("{:?}", i))
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BindingMap {
    entries: BTreeMap<Var, Binding>,
}

impl BindingMap {
    pub fn get(&self, v: &Var) -> Option<&Binding> {
        self.entries.get(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Binding> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn voxeme(&self, v: &Var) -> Option<&Voxeme> {
        self.get(v).and_then(|b| b.voxeme.as_ref())
    }

    pub fn action(&self, v: &Var) -> Option<&ActionVoxeme> {
        match self.voxeme(v) {
            Some(Voxeme::Action(a)) => Some(a),
            _ => None,
        }
    }
}

/// A relation referent attached to the action it modifies, with its landmark.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationAttachment {
    pub relation: Var,
    pub action: Var,
    pub landmark: Option<Var>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubeventProgram {
    pub action: Var,
    pub pred: String,
    /// Role name → filler, for every slot of the voxeme.
    pub roles: BTreeMap<String, Var>,
    pub steps: Vec<Step>,
}

impl SubeventProgram {
    pub fn filler(&self, role: &str) -> Option<&Var> {
        self.roles.get(role)
    }
}

impl fmt::Display for SubeventProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, s) in self.steps.iter().enumerate() {
            if n > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}", s)?;
        }
        Ok(())
    }
}

/// A time stamp `slot + num/den` inside the slot of an event time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Stamp {
    pub slot: u32,
    pub num: u32,
    pub den: u32,
}

impl Stamp {
    pub fn as_f64(self) -> f64 {
        self.slot as f64 + self.num as f64 / self.den as f64
    }
}

impl Ord for Stamp {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let a = (self.slot as u64 * self.den as u64 + self.num as u64) * other.den as u64;
        let b = (other.slot as u64 * other.den as u64 + other.num as u64) * self.den as u64;
        a.cmp(&b)
    }
}

impl PartialOrd for Stamp {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Stamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "t{}", self.slot)
        } else {
            write!(f, "t{}+{}/{}", self.slot, self.num, self.den)
        }
    }
}

/// `t@l`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathPoint {
    pub time: Stamp,
    pub location: Term,
}

impl fmt::Display for PathPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.time, self.location)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub action: Var,
    pub theme: Var,
    pub points: Vec<PathPoint>,
    pub direction: Option<Term>,
}

impl Path {
    pub fn is_strictly_increasing(&self) -> bool {
        self.points.windows(2).all(|w| w[0].time < w[1].time)
    }

    pub fn start(&self) -> Option<&Term> {
        self.points.first().map(|p| &p.location)
    }

    pub fn end(&self) -> Option<&Term> {
        self.points.last().map(|p| &p.location)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self.points.iter().map(|p| p.to_string()).collect();
        write!(f, "seq({})", pts.join(", "))?;
        if let Some(d) = &self.direction {
            write!(f, " via {}", d)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HabitatCheck {
    pub action: Var,
    pub theme: Var,
    pub affordance: String,
    pub act: String,
    pub habitat: Option<String>,
    pub kind: Option<HabitatKind>,
    /// Ground constraints (with `this` replaced by the object's pred) not found in the scene.
    pub missing: Vec<Term>,
}

impl HabitatCheck {
    pub fn satisfied(&self) -> bool {
        self.missing.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterpretationResult {
    pub form: SemanticForm,
    pub order: Option<PrecedenceOrder>,
    pub cycle: Option<TemporalInconsistency>,
    pub bindings: BindingMap,
    pub programs: Vec<SubeventProgram>,
    pub paths: Vec<Path>,
    pub habitats: Vec<HabitatCheck>,
    pub diagnostics: Vec<Diagnostic>,
    pub consistent: bool,
}

fn rep_classes(form: &SemanticForm) -> IdentityClasses {
    IdentityClasses::from_form(form).unwrap_or_default()
}

fn lexical_preds<'a>(form: &'a SemanticForm, v: &Var) -> Vec<&'a str> {
    form.predicates_of(v)
        .into_iter()
        .filter(|p| !NON_LEXICAL.contains(p))
        .collect()
}

fn derive_sort(form: &SemanticForm, v: &Var) -> ReferentSort {
    match v.sort() {
        Sort::Event => ReferentSort::Action,
        Sort::Relation => ReferentSort::Relation,
        _ => {
            let is_agent = form.conditions.iter().any(
                |c| matches!(c, Condition::Role { role, arg, .. } if role == "agent" && arg == v),
            );
            if is_agent {
                ReferentSort::Agent
            } else {
                ReferentSort::Object
            }
        }
    }
}

/// Bind every referent of an identity-applied form to a voxeme.
pub fn bind(form: &SemanticForm, vx: &Voxicon) -> (BindingMap, Vec<Diagnostic>) {
    let classes = rep_classes(form);
    let mut map = BindingMap::default();
    let mut diags = Vec::new();

    let (reps, members): (Vec<&Var>, Vec<&Var>) = form
        .referents
        .iter()
        .partition(|v| classes.representative(v) == **v);

    for v in reps {
        let sort = derive_sort(form, v);
        let preds = lexical_preds(form, v);
        let mut voxeme = preds
            .iter()
            .find_map(|p| vx.lookup(p, sort.category()))
            .cloned();
        if voxeme.is_none() && sort == ReferentSort::Agent {
            voxeme = preds
                .iter()
                .find_map(|p| vx.lookup(p, VoxemeCategory::Object))
                .cloned();
        }
        if voxeme.is_none() && sort == ReferentSort::Relation {
            voxeme = form
                .conditions
                .iter()
                .find_map(|c| match c {
                    Condition::Role { role, head, .. } if head == v => vx.relation_for_role(role),
                    _ => None,
                })
                .map(|r| Voxeme::Relation(r.clone()));
        }
        let anaphoric = form.predicates_of(v).contains(&"pro");
        if anaphoric && classes.is_trivial(v) {
            diags.push(
                Diagnostic::error(
                    "VXI001",
                    "unresolved anaphor: pronoun is not equated to any antecedent",
                )
                .about(v.to_string())
                .in_stage(Stage::Bind),
            );
        } else if voxeme.is_none() {
            let tried = if preds.is_empty() {
                "no lexical predicate".to_string()
            } else {
                preds.join(", ")
            };
            diags.push(
                Diagnostic::warning(
                    "VXI002",
                    format!("missing {} voxeme (tried: {})", sort, tried),
                )
                .about(v.to_string())
                .in_stage(Stage::Bind),
            );
        }
        map.entries.insert(
            v.clone(),
            Binding {
                referent: v.clone(),
                sort,
                voxeme,
                via: None,
            },
        );
    }

    for v in members {
        let rep = classes.representative(v);
        let inherited = map.get(&rep).cloned();
        let (sort, voxeme) = inherited
            .map(|b| (b.sort, b.voxeme))
            .unwrap_or_else(|| (derive_sort(form, &rep), None));
        map.entries.insert(
            v.clone(),
            Binding {
                referent: v.clone(),
                sort,
                voxeme,
                via: Some(rep),
            },
        );
    }
    (map, diags)
}

fn action_referents<'a>(
    form: &'a SemanticForm,
    bindings: &'a BindingMap,
) -> impl Iterator<Item = (&'a Var, &'a ActionVoxeme)> {
    form.referents
        .iter()
        .filter(move |v| bindings.get(v).is_some_and(|b| b.via.is_none()))
        .filter_map(move |v| bindings.action(v).map(|a| (v, a)))
}

/// Agent capabilities and embodiment of moved themes.
pub fn check_selectional(b: &BindingMap, f: &SemanticForm) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (e, av) in action_referents(f, b) {
        for x in f.role_fillers(e, "agent") {
            match b.voxeme(x) {
                Some(Voxeme::Agent(agent)) => {
                    for act in av.acts() {
                        if !agent.can(act) {
                            out.push(
                                Diagnostic::error(
                                    "VXI003",
                                    format!(
                                        "missing-capability({}): agent {} ({}) cannot perform `{}` required by {}({}); parts: {}",
                                        act,
                                        x,
                                        agent.lex.pred,
                                        act,
                                        av.lex.pred,
                                        e,
                                        agent.chains().join("; ")
                                    ),
                                )
                                .about(e.to_string())
                                .in_stage(Stage::Selectional),
                            );
                        }
                    }
                }
                Some(other) => out.push(
                    Diagnostic::error(
                        "VXI004",
                        format!(
                            "agent of {}({}) is {} `{}`, not an agent",
                            av.lex.pred,
                            e,
                            other.category(),
                            other.pred()
                        ),
                    )
                    .about(e.to_string())
                    .in_stage(Stage::Selectional),
                ),
                None => {}
            }
        }
        if !av.moves("theme") {
            continue;
        }
        for y in f.role_fillers(e, "theme") {
            if let Some(Voxeme::Object(o)) = b.voxeme(y) {
                if !o.embodiment.movable {
                    out.push(
                        Diagnostic::error(
                            "VXI005",
                            format!(
                                "immovable theme: {} ({}) cannot be moved by {}({})",
                                y, o.lex.pred, av.lex.pred, e
                            ),
                        )
                        .about(e.to_string())
                        .in_stage(Stage::Selectional),
                    );
                }
                if o.embodiment.scale != Scale::Smaller {
                    out.push(
                        Diagnostic::error(
                            "VXI006",
                            format!(
                                "scale-violation: theme {} ({}) has scale {}, {}({}) needs <agent",
                                y, o.lex.pred, o.embodiment.scale, av.lex.pred, e
                            ),
                        )
                        .about(e.to_string())
                        .in_stage(Stage::Selectional),
                    );
                }
            }
        }
    }
    out
}

/// Affordances of each action's theme that the action invokes, checked
/// against the scene. Intrinsic habitats always hold.
pub fn check_habitat(
    b: &BindingMap,
    f: &SemanticForm,
    scene: Option<&Scene>,
) -> (Vec<HabitatCheck>, Vec<Diagnostic>) {
    let empty = Scene::default();
    let scene = scene.unwrap_or(&empty);
    let mut checks = Vec::new();
    let mut out = Vec::new();
    for (e, av) in action_referents(f, b) {
        let mut acts: Vec<&str> = vec![av.lex.pred.as_str()];
        acts.extend(av.acts());
        for y in f.role_fillers(e, "theme") {
            let Some(Voxeme::Object(o)) = b.voxeme(y) else {
                continue;
            };
            for a in &o.afford_str {
                let Some(act) = a.act_on_self().filter(|act| acts.contains(act)) else {
                    continue;
                };
                let habitat = a.habitat.as_deref().and_then(|h| o.habitat(h));
                let mut missing = Vec::new();
                if let Some(h) = habitat.filter(|h| h.kind == HabitatKind::Extrinsic) {
                    for c in &h.constraints {
                        let by_pred =
                            c.substitute(&BTreeMap::from([("this".into(), o.lex.pred.clone())]));
                        let by_id = c.substitute(&BTreeMap::from([("this".into(), y.to_string())]));
                        if !scene.holds(&by_pred) && !scene.holds(&by_id) {
                            missing.push(by_pred);
                        }
                    }
                }
                if !missing.is_empty() {
                    let required: Vec<String> = missing.iter().map(Term::to_string).collect();
                    out.push(
                        Diagnostic::warning(
                            "VXI007",
                            format!(
                                "extrinsic habitat unsatisfied: {} affordance {} ({}) of {} requires {}",
                                a.kind_name(),
                                a.id,
                                act,
                                o.lex.pred,
                                required.join(", ")
                            ),
                        )
                        .about(e.to_string())
                        .in_stage(Stage::Habitat),
                    );
                }
                checks.push(HabitatCheck {
                    action: e.clone(),
                    theme: y.clone(),
                    affordance: a.id.clone(),
                    act: act.to_string(),
                    habitat: habitat.map(|h| h.id.clone()),
                    kind: habitat.map(|h| h.kind),
                    missing,
                });
            }
        }
    }
    (checks, out)
}

/// Attach each relation to the nearest action whose span starts before it.
/// The landmark is the relation's `source` (or other role) filler, else the
/// nearest object that follows it.
pub fn attach_relations(doc: &AnnotationDocument, form: &SemanticForm) -> Vec<RelationAttachment> {
    let classes = rep_classes(form);
    let start = |id: &str| doc.entity(id).and_then(|e| e.span.min_index());
    let mut out = Vec::new();
    for r in doc
        .entities()
        .filter(|e| e.category.is_a(Category::Relation))
    {
        let Some(r_start) = r.span.min_index() else {
            continue;
        };
        let action = doc
            .entities()
            .filter(|e| e.category.is_a(Category::Event))
            .filter_map(|e| start(&e.id).filter(|&s| s < r_start).map(|s| (s, e)))
            .max_by_key(|(s, _)| *s)
            .map(|(_, e)| Var::new(e.id.as_str()));
        let Some(action) = action else {
            continue;
        };
        let rv = Var::new(r.id.as_str());
        let explicit = form.conditions.iter().find_map(|c| match c {
            Condition::Role { head, arg, .. } if *head == rv => Some(arg.clone()),
            _ => None,
        });
        let landmark = explicit.or_else(|| {
            doc.entities()
                .filter(|e| e.category.is_a(Category::Object))
                .filter_map(|e| start(&e.id).filter(|&s| s > r_start).map(|s| (s, e)))
                .min_by_key(|(s, _)| *s)
                .map(|(_, e)| classes.representative(&Var::new(e.id.as_str())))
        });
        out.push(RelationAttachment {
            relation: rv,
            action,
            landmark,
        });
    }
    out
}

fn goal_of<'a>(
    e: &Var,
    b: &BindingMap,
    relations: &'a [RelationAttachment],
    endpoint: Endpoint,
) -> Option<(&'a RelationAttachment, LocationKind)> {
    relations
        .iter()
        .filter(|r| r.action == *e)
        .find_map(|r| match b.voxeme(&r.relation) {
            Some(Voxeme::Relation(rv)) if rv.endpoint == endpoint => Some((r, rv.location)),
            _ => None,
        })
}

/// Instantiate the body of `e`'s action voxeme with the role fillers of the form.
pub fn expand_action(
    e: &Var,
    b: &BindingMap,
    f: &SemanticForm,
    relations: &[RelationAttachment],
) -> Result<SubeventProgram, Diagnostic> {
    let Some(av) = b.action(e) else {
        return Err(
            Diagnostic::error("VXI008", format!("{} is not bound to an action voxeme", e))
                .about(e.to_string())
                .in_stage(Stage::Expand),
        );
    };
    let mut slots = BTreeMap::new();
    let mut roles = BTreeMap::new();
    for arg in &av.args {
        let filler = if arg.role == "goal" {
            goal_of(e, b, relations, Endpoint::Final).and_then(|(r, _)| r.landmark.clone())
        } else {
            f.role_fillers(e, &arg.role).into_iter().min().cloned()
        };
        let Some(filler) = filler else {
            return Err(Diagnostic::error(
                "VXI008",
                format!(
                    "arity: {}({}) has no filler for slot `{}` (role {})",
                    av.lex.pred, e, arg.slot, arg.role
                ),
            )
            .about(e.to_string())
            .in_stage(Stage::Expand));
        };
        slots.insert(arg.slot.clone(), filler.to_string());
        roles.insert(arg.role.clone(), filler);
    }
    Ok(SubeventProgram {
        action: e.clone(),
        pred: av.lex.pred.clone(),
        roles,
        steps: av.body.iter().map(|s| s.substitute(&slots)).collect(),
    })
}

fn located(kind: LocationKind, landmark: &Var) -> Term {
    let base = Term::app("loc", vec![Term::atom(landmark.to_string())]);
    match kind {
        LocationKind::At => base,
        other => Term::app(other.functor(), vec![base]),
    }
}

/// Where the theme is afterwards, given the relations attached to the action.
pub struct PathContext<'a> {
    pub bindings: &'a BindingMap,
    pub relations: &'a [RelationAttachment],
    /// 1-based position of the action's time in the linear extension.
    pub slot: u32,
    /// Theme location carried over from earlier actions.
    pub start: Option<Term>,
}

/// Trace the theme of `p` through its stages. `while` loops are unrolled
/// once: the entry state is the current location, the exit state the end
/// of the motion.
pub fn trace_path(p: &SubeventProgram, ctx: &PathContext<'_>) -> Result<Option<Path>, Diagnostic> {
    let Some(theme) = p.filler("theme").cloned() else {
        return Ok(None);
    };
    let mut locations = Vec::new();
    let initial = goal_of(&p.action, ctx.bindings, ctx.relations, Endpoint::Initial);
    let first = match initial {
        Some((r, kind)) => match &r.landmark {
            Some(l) => located(kind, l),
            None => {
                return Err(Diagnostic::error(
                    "VXI009",
                    format!(
                        "path: relation {} marks the initial point of {} but has no landmark",
                        r.relation, p.action
                    ),
                )
                .about(p.action.to_string())
                .in_stage(Stage::Path))
            }
        },
        None => ctx
            .start
            .clone()
            .unwrap_or_else(|| Term::app("loc", vec![Term::atom(theme.to_string())])),
    };
    locations.push(first);

    let mut direction = None;
    let final_goal = goal_of(&p.action, ctx.bindings, ctx.relations, Endpoint::Final);
    for step in &p.steps {
        let Some(motion) = step.motion() else {
            continue;
        };
        if motion.args.get(1).map(|t| t.head.as_str()) != Some(theme.name()) {
            continue;
        }
        direction = motion.args.get(2).cloned();
        let end = match (final_goal, step) {
            (Some((r, kind)), _) if r.landmark.is_some() => {
                located(kind, r.landmark.as_ref().unwrap())
            }
            (_, Step::While { cond, .. }) if cond.head == "hold" && !cond.args.is_empty() => {
                Term::app("hand", vec![cond.args[0].clone()])
            }
            _ => Term::app(
                "at",
                vec![direction.clone().unwrap_or_else(|| Term::atom("?"))],
            ),
        };
        if locations.last() != Some(&end) {
            locations.push(end);
        }
    }
    let den = locations.len() as u32;
    let points = locations
        .into_iter()
        .enumerate()
        .map(|(k, location)| PathPoint {
            time: Stamp {
                slot: ctx.slot,
                num: k as u32,
                den,
            },
            location,
        })
        .collect();
    Ok(Some(Path {
        action: p.action.clone(),
        theme,
        points,
        direction,
    }))
}

fn failed(form: SemanticForm, diagnostics: Vec<Diagnostic>) -> InterpretationResult {
    InterpretationResult {
        form,
        order: None,
        cycle: None,
        bindings: BindingMap::default(),
        programs: Vec::new(),
        paths: Vec::new(),
        habitats: Vec::new(),
        diagnostics,
        consistent: false,
    }
}

/// Run the whole pipeline on a validated document.
pub fn interpret_document(
    doc: &AnnotationDocument,
    vx: &Voxicon,
    scene: Option<&Scene>,
) -> InterpretationResult {
    let semantics_error = |e: crate::semantics::SemanticsError| {
        Diagnostic::error("VXI011", e.to_string()).in_stage(Stage::Semantics)
    };
    let composed = match translate_document(doc) {
        Ok(f) => f,
        Err(e) => return failed(SemanticForm::new(), vec![semantics_error(e)]),
    };
    let form = match apply_identities(&composed) {
        Ok(f) => f,
        Err(e) => return failed(composed, vec![semantics_error(e)]),
    };
    interpret_form(form, &attach_relations(doc, &composed), vx, scene)
}

/// The pipeline from an identity-applied form onwards.
pub fn interpret_form(
    form: SemanticForm,
    relations: &[RelationAttachment],
    vx: &Voxicon,
    scene: Option<&Scene>,
) -> InterpretationResult {
    let mut diagnostics = Vec::new();
    let (order, cycle) = match temporal_order(&form) {
        Ok(o) => (Some(o), None),
        Err(c) => {
            diagnostics.push(
                Diagnostic::error("VXI010", c.to_string())
                    .about(
                        c.cycle
                            .iter()
                            .map(Var::to_string)
                            .collect::<Vec<_>>()
                            .join(","),
                    )
                    .in_stage(Stage::Temporal),
            );
            (None, Some(c))
        }
    };

    let (bindings, bind_diags) = bind(&form, vx);
    diagnostics.extend(bind_diags);
    diagnostics.extend(check_selectional(&bindings, &form));
    let (habitats, habitat_diags) = check_habitat(&bindings, &form, scene);
    diagnostics.extend(habitat_diags);

    // Actions in temporal order; unordered ones follow in natural order.
    let mut sequence: Vec<Var> = order
        .as_ref()
        .map(|o| o.linear_extension())
        .unwrap_or_default();
    let actions: BTreeSet<Var> = action_referents(&form, &bindings)
        .map(|(v, _)| v.clone())
        .collect();
    sequence.retain(|v| actions.contains(v));
    for a in &actions {
        if !sequence.contains(a) {
            sequence.push(a.clone());
        }
    }

    let mut programs = Vec::new();
    let mut paths = Vec::new();
    let mut positions: BTreeMap<Var, Term> = BTreeMap::new();
    for (n, e) in sequence.iter().enumerate() {
        let program = match expand_action(e, &bindings, &form, relations) {
            Ok(p) => p,
            Err(d) => {
                diagnostics.push(d);
                continue;
            }
        };
        let ctx = PathContext {
            bindings: &bindings,
            relations,
            slot: n as u32 + 1,
            start: program
                .filler("theme")
                .and_then(|t| positions.get(t).cloned()),
        };
        match trace_path(&program, &ctx) {
            Ok(Some(path)) => {
                if let Some(end) = path.end() {
                    positions.insert(path.theme.clone(), end.clone());
                }
                paths.push(path);
            }
            Ok(None) => {}
            Err(d) => diagnostics.push(d),
        }
        programs.push(program);
    }

    let consistent = cycle.is_none() && !diagnostics.iter().any(|d| d.severity == Severity::Error);
    InterpretationResult {
        form,
        order,
        cycle,
        bindings,
        programs,
        paths,
        habitats,
        diagnostics,
        consistent,
    }
}

impl InterpretationResult {
    pub fn program(&self, action: &str) -> Option<&SubeventProgram> {
        self.programs.iter().find(|p| p.action.name() == action)
    }

    pub fn path(&self, action: &str) -> Option<&Path> {
        self.paths.iter().find(|p| p.action.name() == action)
    }

    pub fn purposes(&self) -> Vec<&Condition> {
        self.form
            .sorted_conditions()
            .into_iter()
            .filter(|c| matches!(c, Condition::Purpose { .. }))
            .collect()
    }

    fn binding_summary(b: &Binding) -> String {
        match (&b.voxeme, &b.via) {
            (_, Some(rep)) => format!("{} (via {})", b.pred().unwrap_or("-"), rep),
            (Some(_), None) => b.pred().unwrap().to_string(),
            (None, None) => "-".to_string(),
        }
    }

    /// Line-oriented, tab-separated report.
    pub fn to_machine(&self) -> String {
        let mut out = String::new();
        for b in self.bindings.iter() {
            let mut fields = vec![
                "binding".to_string(),
                b.referent.to_string(),
                b.sort.to_string(),
                b.pred().unwrap_or("-").to_string(),
                b.via
                    .as_ref()
                    .map(|v| format!("via={}", v))
                    .unwrap_or_else(|| "via=-".into()),
            ];
            if b.via.is_none() {
                fields.extend(b.details());
            }
            out.push_str(&fields.join("\t"));
            out.push('\n');
        }
        for p in &self.programs {
            out.push_str(&format!("program\t{}\t{}\t{}\n", p.action, p.pred, p));
        }
        match (&self.order, &self.cycle) {
            (Some(o), _) => out.push_str(&format!("order\t{}\n", o)),
            (None, Some(c)) => out.push_str(&format!(
                "cycle\t{}\n",
                c.cycle
                    .iter()
                    .map(Var::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            )),
            _ => {}
        }
        for c in self.purposes() {
            out.push_str(&format!("purpose\t{}\n", c));
        }
        for p in &self.paths {
            let pts: Vec<String> = p.points.iter().map(|x| x.to_string()).collect();
            let dir = p
                .direction
                .as_ref()
                .map(Term::to_string)
                .unwrap_or_else(|| "-".into());
            out.push_str(&format!(
                "path\t{}\t{}\t{}\t{}\n",
                p.action,
                p.theme,
                dir,
                pts.join("\t")
            ));
        }
        for h in &self.habitats {
            out.push_str(&format!(
                "habitat\t{}\t{}\t{}\t{}\t{}\t{}\n",
                h.action,
                h.theme,
                h.affordance,
                h.act,
                h.habitat.as_deref().unwrap_or("-"),
                if h.satisfied() {
                    "satisfied"
                } else {
                    "unsatisfied"
                }
            ));
        }
        for d in &self.diagnostics {
            out.push_str(&d.to_record());
            out.push('\n');
        }
        out.push_str(&format!("consistent\t{}\n", self.consistent));
        out
    }

    /// Human-readable summary.
    /// `t` with every bound referent replaced by its voxeme's predicate,
    /// so `loc(x3)` reads `loc(table)`.
    pub fn lexicalize(&self, t: &Term) -> Term {
        let names: BTreeMap<String, String> = self
            .bindings
            .iter()
            .filter_map(|b| b.pred().map(|p| (b.referent.to_string(), p.to_string())))
            .collect();
        t.substitute(&names)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("bindings:\n");
        for b in self.bindings.iter() {
            let details = if b.via.is_none() && b.voxeme.is_some() {
                format!(" [{}]", b.details().join(", "))
            } else {
                String::new()
            };
            out.push_str(&format!(
                "  {} ↦ {} {}{}\n",
                b.referent,
                b.sort,
                Self::binding_summary(b),
                details
            ));
        }
        out.push_str("programs:\n");
        for p in &self.programs {
            out.push_str(&format!("  {} {}: {}\n", p.action, p.pred, p));
        }
        match (&self.order, &self.cycle) {
            (Some(o), _) => out.push_str(&format!("order: {}\n", o)),
            (None, Some(c)) => out.push_str(&format!("order: inconsistent, {}\n", c)),
            _ => {}
        }
        for c in self.purposes() {
            out.push_str(&format!("purpose: {}\n", c));
        }
        out.push_str("paths:\n");
        for p in &self.paths {
            out.push_str(&format!("  {} {}: {}\n", p.action, p.theme, p));
            let glossed: Vec<String> = p
                .points
                .iter()
                .map(|pt| format!("{}@{}", pt.time, self.lexicalize(&pt.location)))
                .collect();
            out.push_str(&format!("    = seq({})\n", glossed.join(", ")));
        }
        if !self.habitats.is_empty() {
            out.push_str("habitats:\n");
            for h in &self.habitats {
                out.push_str(&format!(
                    "  {} {} {} ({}) habitat {}: {}\n",
                    h.action,
                    h.theme,
                    h.affordance,
                    h.act,
                    h.habitat.as_deref().unwrap_or("-"),
                    if h.satisfied() {
                        "satisfied"
                    } else {
                        "unsatisfied"
                    }
                ));
            }
        }
        if !self.diagnostics.is_empty() {
            out.push_str("diagnostics:\n");
            for d in &self.diagnostics {
                out.push_str(&format!("  {}\n", d));
            }
        }
        out.push_str(&format!("consistent: {}\n", self.consistent));
        out
    }
}
