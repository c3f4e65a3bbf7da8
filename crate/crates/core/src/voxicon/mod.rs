//! Voxemes and the voxicon that indexes them.
//!
//! A `.voxicon` file is a JSON object:
//!
//! ```json
//! { "voxemes": [ { "category": "object", "lex": { "pred": "glass", ... }, ... } ],
//!   "capabilities": { "hand": ["grasp", "hold", "move", "ungrasp"] } }
//! ```
//!
//! `capabilities` is optional and defaults to [`default_capabilities`].
//! Unknown top-level fields are reported as warnings and otherwise ignored.
//!
//! | code   | severity | meaning                                              |
//! |--------|----------|------------------------------------------------------|
//! | VXV000 | error    | file is not valid JSON or not an object              |
//! | VXV001 | error    | value outside a closed vocabulary (axis, plane, ...) |
//! | VXV002 | error    | duplicate (pred, category)                           |
//! | VXV003 | error    | affordance names an undeclared habitat               |
//! | VXV004 | error    | term uses an undeclared argument slot                |
//! | VXV005 | error    | body has too few stages for its action type          |
//! | VXV006 | error    | extrinsic habitat without constraints                |
//! | VXV007 | warning  | unknown top-level field                              |
//! | VXV008 | error    | malformed entry (missing field, malformed term, ...) |
//! | VXV009 | warning  | agent part has no capability entry                   |

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

use crate::diagnostic::{Diagnostic, Location, Parsed, Stage};
use crate::term::Term;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Plane {
    XY,
    XZ,
    YZ,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Concavity {
    Concave,
    Flat,
    Convex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HabitatKind {
    Intrinsic,
    Extrinsic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AffordanceKind {
    Gibsonian,
    Telic,
}

/// Size relative to the agent manipulating the object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Scale {
    #[serde(rename = "<agent")]
    Smaller,
    #[serde(rename = "~agent")]
    Comparable,
    #[serde(rename = ">agent")]
    Larger,
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scale::Smaller => "<agent",
            Scale::Comparable => "~agent",
            Scale::Larger => ">agent",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionType {
    Process,
    Transition,
}

impl ActionType {
    pub fn min_stages(self) -> usize {
        match self {
            ActionType::Process => 1,
            ActionType::Transition => 2,
        }
    }
}

impl fmt::Display for ActionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ActionType::Process => "process",
            ActionType::Transition => "transition",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    Initial,
    Final,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocationKind {
    At,
    Interior,
    Surface,
}

impl LocationKind {
    /// Head of the symbolic location term: `loc`, `in`, `on`.
    pub fn functor(self) -> &'static str {
        match self {
            LocationKind::At => "loc",
            LocationKind::Interior => "in",
            LocationKind::Surface => "on",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectLex {
    pub pred: String,
    #[serde(default)]
    pub types: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectType {
    pub head: String,
    #[serde(default)]
    pub components: Vec<String>,
    pub concavity: Concavity,
    #[serde(rename = "rotatSym", default)]
    pub rotat_sym: Vec<Axis>,
    #[serde(rename = "reflSym", default)]
    pub refl_sym: Vec<Plane>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Habitat {
    pub id: String,
    pub kind: HabitatKind,
    #[serde(default)]
    pub constraints: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Affordance {
    pub id: String,
    pub kind: AffordanceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub habitat: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precondition: Option<Term>,
    /// Argument slots of `event`; `this` (the object itself) is implicit.
    #[serde(default)]
    pub slots: Vec<String>,
    pub event: Term,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<Term>,
}

impl Affordance {
    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            AffordanceKind::Gibsonian => "gibsonian",
            AffordanceKind::Telic => "telic",
        }
    }

    /// The act the affordance enables, if `this` is one of its direct arguments.
    pub fn act_on_self(&self) -> Option<&str> {
        self.event
            .args
            .iter()
            .any(|a| a.is_atom() && a.head == "this")
            .then_some(self.event.head.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Embodiment {
    pub scale: Scale,
    pub movable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectVoxeme {
    pub lex: ObjectLex,
    #[serde(rename = "type")]
    pub shape: ObjectType,
    #[serde(default)]
    pub habitat: Vec<Habitat>,
    #[serde(default)]
    pub afford_str: Vec<Affordance>,
    pub embodiment: Embodiment,
}

impl ObjectVoxeme {
    pub fn habitat(&self, id: &str) -> Option<&Habitat> {
        self.habitat.iter().find(|h| h.id == id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentLex {
    pub pred: String,
    #[serde(rename = "type")]
    pub kind: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentVoxeme {
    pub lex: AgentLex,
    /// Constitutive part chains, effector first: `["hand", "arm", "torso"]`.
    pub parts: Vec<Vec<String>>,
    /// Derived from `parts` and the capability table when loaded.
    #[serde(skip)]
    pub enabled_acts: BTreeSet<String>,
}

impl AgentVoxeme {
    pub fn can(&self, act: &str) -> bool {
        self.enabled_acts.contains(act)
    }

    /// `hand ⊑c arm ⊑c torso`
    pub fn chains(&self) -> Vec<String> {
        self.parts.iter().map(|c| c.join(" ⊑c ")).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionLex {
    pub pred: String,
    #[serde(rename = "type")]
    pub kind: ActionType,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionArg {
    pub slot: String,
    /// Semantic role filling the slot: `agent`, `theme`, or `goal` (the
    /// landmark of a final-endpoint relation attached to the action).
    pub role: String,
    pub sort: String,
}

/// One stage of an action body.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Step {
    Act(Term),
    While { cond: Term, act: Term },
}

impl Step {
    pub fn from_term(t: Term) -> Step {
        if t.head == "while" && t.args.len() == 2 {
            let mut args = t.args.into_iter();
            let cond = args.next().unwrap();
            let act = args.next().unwrap();
            Step::While { cond, act }
        } else {
            Step::Act(t)
        }
    }

    pub fn to_term(&self) -> Term {
        match self {
            Step::Act(t) => t.clone(),
            Step::While { cond, act } => Term::app("while", vec![cond.clone(), act.clone()]),
        }
    }

    /// Atomic acts performed by the step: the act itself, or the loop
    /// condition's act followed by the body act.
    pub fn acts(&self) -> Vec<&str> {
        match self {
            Step::Act(t) => vec![t.head.as_str()],
            Step::While { cond, act } => vec![cond.head.as_str(), act.head.as_str()],
        }
    }

    pub fn substitute(&self, map: &BTreeMap<String, String>) -> Step {
        match self {
            Step::Act(t) => Step::Act(t.substitute(map)),
            Step::While { cond, act } => Step::While {
                cond: cond.substitute(map),
                act: act.substitute(map),
            },
        }
    }

    /// The `move(...)` term of the step, if any.
    pub fn motion(&self) -> Option<&Term> {
        match self {
            Step::Act(t) if t.head == "move" => Some(t),
            Step::While { act, .. } if act.head == "move" => Some(act),
            _ => None,
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Act(t) => write!(f, "{}", t),
            Step::While { cond, act } => write!(f, "while({}, {})", cond, act),
        }
    }
}

impl Serialize for Step {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_term().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Step {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Term::deserialize(d).map(Step::from_term)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionVoxeme {
    pub lex: ActionLex,
    pub args: Vec<ActionArg>,
    pub body: Vec<Step>,
}

impl ActionVoxeme {
    pub fn slot_for_role(&self, role: &str) -> Option<&ActionArg> {
        self.args.iter().find(|a| a.role == role)
    }

    pub fn acts(&self) -> Vec<&str> {
        let mut acts: Vec<&str> = Vec::new();
        for s in &self.body {
            for a in s.acts() {
                if !acts.contains(&a) {
                    acts.push(a);
                }
            }
        }
        acts
    }

    /// Whether some stage moves the slot filled by `role`.
    pub fn moves(&self, role: &str) -> bool {
        let Some(arg) = self.slot_for_role(role) else {
            return false;
        };
        self.body
            .iter()
            .filter_map(Step::motion)
            .any(|m| m.args.get(1).is_some_and(|t| t.head == arg.slot))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationLex {
    pub pred: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationVoxeme {
    pub lex: RelationLex,
    /// Which end of the governing action's path the relation locates.
    pub endpoint: Endpoint,
    /// The role marked by the relation (`source` for `from`).
    pub role: String,
    pub location: LocationKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VoxemeCategory {
    Object,
    Agent,
    Action,
    Relation,
}

impl fmt::Display for VoxemeCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VoxemeCategory::Object => "object",
            VoxemeCategory::Agent => "agent",
            VoxemeCategory::Action => "action",
            VoxemeCategory::Relation => "relation",
        })
    }
}

impl std::str::FromStr for VoxemeCategory {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "object" => Ok(VoxemeCategory::Object),
            "agent" => Ok(VoxemeCategory::Agent),
            "action" => Ok(VoxemeCategory::Action),
            "relation" => Ok(VoxemeCategory::Relation),
            other => Err(format!("unknown voxeme category `{}`", other)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "category", rename_all = "lowercase")]
pub enum Voxeme {
    Object(ObjectVoxeme),
    Agent(AgentVoxeme),
    Action(ActionVoxeme),
    Relation(RelationVoxeme),
}

impl Voxeme {
    pub fn pred(&self) -> &str {
        match self {
            Voxeme::Object(o) => &o.lex.pred,
            Voxeme::Agent(a) => &a.lex.pred,
            Voxeme::Action(a) => &a.lex.pred,
            Voxeme::Relation(r) => &r.lex.pred,
        }
    }

    pub fn category(&self) -> VoxemeCategory {
        match self {
            Voxeme::Object(_) => VoxemeCategory::Object,
            Voxeme::Agent(_) => VoxemeCategory::Agent,
            Voxeme::Action(_) => VoxemeCategory::Action,
            Voxeme::Relation(_) => VoxemeCategory::Relation,
        }
    }
}

/// Part name → acts that an agent with that part can perform.
pub fn default_capabilities() -> BTreeMap<String, BTreeSet<String>> {
    let table: &[(&str, &[&str])] = &[
        ("hand", &["grasp", "hold", "move", "ungrasp"]),
        ("wheels", &["goTo", "locomote"]),
        ("legs", &["goTo", "locomote"]),
        ("spray_arm", &["wash"]),
        ("heater", &["dry"]),
    ];
    table
        .iter()
        .map(|(part, acts)| {
            (
                part.to_string(),
                acts.iter().map(|a| a.to_string()).collect(),
            )
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Voxicon {
    voxemes: Vec<Voxeme>,
    index: BTreeMap<(String, VoxemeCategory), usize>,
    capabilities: BTreeMap<String, BTreeSet<String>>,
}

impl Default for Voxicon {
    fn default() -> Self {
        Voxicon {
            voxemes: Vec::new(),
            index: BTreeMap::new(),
            capabilities: default_capabilities(),
        }
    }
}

#[derive(Serialize)]
struct VoxiconFile<'a> {
    voxemes: &'a [Voxeme],
    capabilities: &'a BTreeMap<String, BTreeSet<String>>,
}

const TOP_LEVEL_FIELDS: [&str; 2] = ["voxemes", "capabilities"];

const BUNDLED: &str = include_str!("../../data/mini.voxicon");

impl Voxicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// The mini-voxicon shipped with the library.
    pub fn bundled() -> Voxicon {
        let parsed = Voxicon::load(BUNDLED);
        debug_assert!(
            !parsed.has_errors(),
            "bundled voxicon: {:?}",
            parsed.diagnostics
        );
        parsed.value
    }

    pub fn bundled_source() -> &'static str {
        BUNDLED
    }

    pub fn voxemes(&self) -> &[Voxeme] {
        &self.voxemes
    }

    pub fn len(&self) -> usize {
        self.voxemes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.voxemes.is_empty()
    }

    pub fn capabilities(&self) -> &BTreeMap<String, BTreeSet<String>> {
        &self.capabilities
    }

    /// Add a voxeme, deriving agent capabilities. Fails on a duplicate
    /// (pred, category) pair.
    pub fn insert(&mut self, mut voxeme: Voxeme) -> Result<(), Diagnostic> {
        let key = (voxeme.pred().to_string(), voxeme.category());
        if self.index.contains_key(&key) {
            return Err(Diagnostic::error(
                "VXV002",
                format!("duplicate {} voxeme `{}`", key.1, key.0),
            )
            .about(key.0)
            .in_stage(Stage::Voxicon));
        }
        if let Voxeme::Agent(a) = &mut voxeme {
            a.enabled_acts = enabled_acts(&a.parts, &self.capabilities);
        }
        self.index.insert(key, self.voxemes.len());
        self.voxemes.push(voxeme);
        Ok(())
    }

    pub fn lookup(&self, pred: &str, category: VoxemeCategory) -> Option<&Voxeme> {
        self.index
            .get(&(pred.to_string(), category))
            .map(|&i| &self.voxemes[i])
    }

    pub fn object(&self, pred: &str) -> Option<&ObjectVoxeme> {
        match self.lookup(pred, VoxemeCategory::Object) {
            Some(Voxeme::Object(o)) => Some(o),
            _ => None,
        }
    }

    pub fn agent(&self, pred: &str) -> Option<&AgentVoxeme> {
        match self.lookup(pred, VoxemeCategory::Agent) {
            Some(Voxeme::Agent(a)) => Some(a),
            _ => None,
        }
    }

    pub fn action(&self, pred: &str) -> Option<&ActionVoxeme> {
        match self.lookup(pred, VoxemeCategory::Action) {
            Some(Voxeme::Action(a)) => Some(a),
            _ => None,
        }
    }

    pub fn relation(&self, pred: &str) -> Option<&RelationVoxeme> {
        match self.lookup(pred, VoxemeCategory::Relation) {
            Some(Voxeme::Relation(r)) => Some(r),
            _ => None,
        }
    }

    /// Relation voxeme marking `role` (e.g. `source` for `from`).
    pub fn relation_for_role(&self, role: &str) -> Option<&RelationVoxeme> {
        self.voxemes.iter().find_map(|v| match v {
            Voxeme::Relation(r) if r.role == role => Some(r),
            _ => None,
        })
    }

    /// Pretty-printed JSON, loadable by [`Voxicon::load`].
    pub fn serialize(&self) -> String {
        let file = VoxiconFile {
            voxemes: &self.voxemes,
            capabilities: &self.capabilities,
        };
        let mut out = serde_json::to_string_pretty(&file).expect("voxicon serializes");
        out.push('\n');
        out
    }

    pub fn load(text: &str) -> Parsed<Voxicon> {
        let mut vx = Voxicon::new();
        let mut diagnostics = Vec::new();
        if text.trim().is_empty() {
            return Parsed {
                value: vx,
                diagnostics,
            };
        }
        let root: Json = match serde_json::from_str(text) {
            Ok(v) => v,
            Err(e) => {
                diagnostics.push(
                    Diagnostic::error("VXV000", format!("not a voxicon: {}", e))
                        .at(Location::new(e.line(), e.column()))
                        .in_stage(Stage::Voxicon),
                );
                return Parsed {
                    value: vx,
                    diagnostics,
                };
            }
        };
        let Json::Object(mut fields) = root else {
            diagnostics.push(
                Diagnostic::error("VXV000", "not a voxicon: top level must be an object")
                    .in_stage(Stage::Voxicon),
            );
            return Parsed {
                value: vx,
                diagnostics,
            };
        };

        for key in fields
            .keys()
            .filter(|k| !TOP_LEVEL_FIELDS.contains(&k.as_str()))
        {
            diagnostics.push(
                Diagnostic::warning(
                    "VXV007",
                    format!("unknown top-level field `{}` ignored", key),
                )
                .in_stage(Stage::Voxicon),
            );
        }

        if let Some(caps) = fields.remove("capabilities") {
            match serde_json::from_value::<BTreeMap<String, BTreeSet<String>>>(caps) {
                Ok(c) => vx.capabilities = c,
                Err(e) => diagnostics.push(
                    Diagnostic::error("VXV008", format!("malformed capability table: {}", e))
                        .in_stage(Stage::Voxicon),
                ),
            }
        }

        let entries = match fields.remove("voxemes") {
            None => Vec::new(),
            Some(Json::Array(a)) => a,
            Some(_) => {
                diagnostics.push(
                    Diagnostic::error("VXV008", "`voxemes` must be an array")
                        .in_stage(Stage::Voxicon),
                );
                Vec::new()
            }
        };

        for (n, entry) in entries.into_iter().enumerate() {
            let label = entry_label(&entry, n);
            match serde_json::from_value::<Voxeme>(entry) {
                Ok(v) => {
                    let problems = check_voxeme(&v, &vx.capabilities);
                    let fatal = problems
                        .iter()
                        .any(|d| d.severity == crate::diagnostic::Severity::Error);
                    diagnostics.extend(problems.into_iter().map(|d| d.about(label.clone())));
                    if fatal {
                        continue;
                    }
                    if let Err(d) = vx.insert(v) {
                        diagnostics.push(d);
                    }
                }
                Err(e) => {
                    let msg = e.to_string();
                    let code = if msg.contains("unknown variant") {
                        "VXV001"
                    } else {
                        "VXV008"
                    };
                    diagnostics.push(
                        Diagnostic::error(code, msg.to_string())
                            .about(label)
                            .in_stage(Stage::Voxicon),
                    );
                }
            }
        }
        Parsed {
            value: vx,
            diagnostics,
        }
    }
}

fn entry_label(entry: &Json, n: usize) -> String {
    let cat = entry.get("category").and_then(Json::as_str).unwrap_or("?");
    match entry.pointer("/lex/pred").and_then(Json::as_str) {
        Some(pred) => format!("{}:{}", cat, pred),
        None => format!("voxemes[{}]", n),
    }
}

fn enabled_acts(
    parts: &[Vec<String>],
    caps: &BTreeMap<String, BTreeSet<String>>,
) -> BTreeSet<String> {
    parts
        .iter()
        .flatten()
        .filter_map(|p| caps.get(p))
        .flatten()
        .cloned()
        .collect()
}

fn slot_error(what: &str, term: &Term, slot: &str) -> Diagnostic {
    Diagnostic::error(
        "VXV004",
        format!("{} `{}` uses undeclared slot `{}`", what, term, slot),
    )
    .in_stage(Stage::Voxicon)
}

/// Lowercase atoms are variables; uppercase, signed and numeric atoms are
/// constants (`E_Y`, `+Y`).
fn is_variable(atom: &str) -> bool {
    atom.chars().next().is_some_and(|c| c.is_ascii_lowercase())
}

fn check_voxeme(v: &Voxeme, caps: &BTreeMap<String, BTreeSet<String>>) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    match v {
        Voxeme::Object(o) => {
            for h in &o.habitat {
                if h.kind == HabitatKind::Extrinsic && h.constraints.is_empty() {
                    out.push(
                        Diagnostic::error(
                            "VXV006",
                            format!("extrinsic habitat `{}` has no constraints", h.id),
                        )
                        .in_stage(Stage::Voxicon),
                    );
                }
            }
            for a in &o.afford_str {
                if let Some(h) = &a.habitat {
                    if o.habitat(h).is_none() {
                        out.push(
                            Diagnostic::error(
                                "VXV003",
                                format!(
                                    "affordance `{}` references undeclared habitat `{}`",
                                    a.id, h
                                ),
                            )
                            .in_stage(Stage::Voxicon),
                        );
                    }
                }
                let terms = std::iter::once(&a.event)
                    .chain(&a.precondition)
                    .chain(&a.result);
                for t in terms {
                    for atom in t.atoms() {
                        if is_variable(atom) && atom != "this" && !a.slots.iter().any(|s| s == atom)
                        {
                            out.push(slot_error("affordance", t, atom));
                        }
                    }
                }
            }
        }
        Voxeme::Agent(a) => {
            for part in a.parts.iter().filter_map(|c| c.first()) {
                if !caps.contains_key(part) {
                    out.push(
                        Diagnostic::warning(
                            "VXV009",
                            format!("effector `{}` licenses no acts", part),
                        )
                        .in_stage(Stage::Voxicon),
                    );
                }
            }
        }
        Voxeme::Action(a) => {
            if a.body.len() < a.lex.kind.min_stages() {
                out.push(
                    Diagnostic::error(
                        "VXV005",
                        format!(
                            "{} body needs at least {} stage(s), found {}",
                            a.lex.kind,
                            a.lex.kind.min_stages(),
                            a.body.len()
                        ),
                    )
                    .in_stage(Stage::Voxicon),
                );
            }
            for step in &a.body {
                let t = step.to_term();
                if let Step::Act(inner) = step {
                    if inner.head == "while" {
                        out.push(
                            Diagnostic::error(
                                "VXV008",
                                format!("malformed loop `{}`: expected while(cond, act)", inner),
                            )
                            .in_stage(Stage::Voxicon),
                        );
                    }
                }
                for atom in t.atoms() {
                    if is_variable(atom) && !a.args.iter().any(|arg| arg.slot == atom) {
                        out.push(slot_error("body stage", &t, atom));
                    }
                }
            }
        }
        Voxeme::Relation(_) => {}
    }
    out
}
