//! The `.sys` system format, DOT exports and the statistics record.
//!
//! ```text
//! system <name>
//! option weighted <on|off>
//! component <name>
//!   state <s> [initial]
//!   trans <src> <action> <dst> [<weight>]
//!   action <name>
//! interface <component-name>
//! ```
//!
//! `#` starts a comment. The first state of a component is initial unless
//! one is marked `initial`. `action` adds an alphabet letter that labels no
//! transition (it still synchronises, so it blocks its partners).

use std::collections::BTreeSet;
use std::fmt::Write as _;

use netsum_core::model::{Lts, LtsBuilder, ModelError, Product, Weight};
use netsum_core::summary::Summary;
use netsum_core::unfold::{EventStatus, Liveness, Prefix};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown keyword `{0}`")]
    UnknownKeyword(String),
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("unexpected token `{0}`")]
    Unexpected(String),
    #[error("`{0}` outside a component")]
    OutsideComponent(&'static str),
    #[error("undeclared state `{0}`")]
    UndeclaredState(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("duplicate component `{0}`")]
    DuplicateComponent(String),
    #[error("duplicate transition {0}")]
    DuplicateTransition(String),
    #[error("more than one initial state")]
    MultipleInitial,
    #[error("component `{0}` has no states")]
    EmptyComponent(String),
    #[error("invalid weight `{0}`")]
    BadWeight(String),
    #[error("negative weight {0}")]
    NegativeWeight(String),
    #[error("weight given but `option weighted on` is missing")]
    UnweightedSystem,
    #[error("unknown option `{0}`")]
    UnknownOption(String),
    #[error("duplicate `{0}` line")]
    Duplicate(&'static str),
    #[error("missing interface")]
    MissingInterface,
    #[error("interface names undeclared component `{0}`")]
    UndeclaredComponent(String),
    #[error("no components")]
    NoComponents,
    #[error("{0}")]
    Model(ModelError),
}

/// A parsed document.
#[derive(Clone, Debug, PartialEq)]
pub struct System {
    pub name: String,
    pub product: Product,
}

struct Token<'a> {
    text: &'a str,
    col: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let body = match line.find('#') {
        Some(k) => &line[..k],
        None => line,
    };
    let mut out = Vec::new();
    let mut start = None;
    for (k, ch) in body.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token { text: &body[s..k], col: body[..s].chars().count() + 1 });
            }
        } else if start.is_none() {
            start = Some(k);
        }
    }
    if let Some(s) = start {
        out.push(Token { text: &body[s..], col: body[..s].chars().count() + 1 });
    }
    out
}

/// `(src, action, dst, weight, line, (src column, dst column))`.
type PendingTransition = (String, String, String, Weight, usize, (usize, usize));

struct PendingComponent {
    name: String,
    line: usize,
    states: Vec<String>,
    initial: Option<String>,
    actions: Vec<String>,
    trans: Vec<PendingTransition>,
}

impl PendingComponent {
    fn finish(self) -> Result<Lts, ParseError> {
        for (src, _, dst, _, line, cols) in &self.trans {
            for (s, col) in [(src, cols.0), (dst, cols.1)] {
                if !self.states.contains(s) {
                    return Err(ParseError { line: *line, col, kind: ParseErrorKind::UndeclaredState(s.clone()) });
                }
            }
        }
        if self.states.is_empty() {
            return Err(ParseError { line: self.line, col: 1, kind: ParseErrorKind::EmptyComponent(self.name) });
        }
        let mut seen = BTreeSet::new();
        let mut b = LtsBuilder::new(self.name.clone());
        for s in &self.states {
            b = b.state(s);
        }
        if let Some(init) = &self.initial {
            b = b.initial(init);
        }
        for a in &self.actions {
            b = b.action(a);
        }
        for (src, a, dst, w, line, (col, _)) in self.trans {
            if !seen.insert((src.clone(), a.clone(), dst.clone())) {
                let what = format!("{src} --{a}--> {dst}");
                return Err(ParseError { line, col, kind: ParseErrorKind::DuplicateTransition(what) });
            }
            b = b.weighted_transition(&src, &a, &dst, w);
        }
        b.build().map_err(|e| ParseError { line: self.line, col: 1, kind: ParseErrorKind::Model(e) })
    }
}

pub fn parse_system(text: &str) -> Result<System, ParseError> {
    let mut name: Option<String> = None;
    let mut weighted: Option<bool> = None;
    let mut interface: Option<(String, usize, usize)> = None;
    let mut components: Vec<Lts> = Vec::new();
    let mut current: Option<PendingComponent> = None;
    let err = |line, col, kind| ParseError { line, col, kind };

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let toks = tokenize(raw);
        let Some(head) = toks.first() else { continue };
        let arg = |i: usize, what: &'static str| -> Result<&Token, ParseError> {
            toks.get(i).ok_or_else(|| err(line, raw.chars().count() + 1, ParseErrorKind::Expected(what)))
        };
        let arity = |n: usize| -> Result<(), ParseError> {
            match toks.get(n) {
                Some(t) => Err(err(line, t.col, ParseErrorKind::Unexpected(t.text.into()))),
                None => Ok(()),
            }
        };
        match head.text {
            "system" => {
                if name.is_some() {
                    return Err(err(line, head.col, ParseErrorKind::Duplicate("system")));
                }
                name = Some(arg(1, "system name")?.text.into());
                arity(2)?;
            }
            "option" => {
                let key = arg(1, "option name")?;
                if key.text != "weighted" {
                    return Err(err(line, key.col, ParseErrorKind::UnknownOption(key.text.into())));
                }
                let v = arg(2, "`on` or `off`")?;
                weighted = Some(match v.text {
                    "on" => true,
                    "off" => false,
                    _ => return Err(err(line, v.col, ParseErrorKind::Expected("`on` or `off`"))),
                });
                arity(3)?;
            }
            "component" => {
                let n = arg(1, "component name")?;
                if components.iter().any(|c| c.name() == n.text) || current.as_ref().is_some_and(|c| c.name == n.text) {
                    return Err(err(line, n.col, ParseErrorKind::DuplicateComponent(n.text.into())));
                }
                arity(2)?;
                if let Some(c) = current.take() {
                    components.push(c.finish()?);
                }
                current = Some(PendingComponent {
                    name: n.text.into(),
                    line,
                    states: Vec::new(),
                    initial: None,
                    actions: Vec::new(),
                    trans: Vec::new(),
                });
            }
            "state" => {
                let c =
                    current.as_mut().ok_or_else(|| err(line, head.col, ParseErrorKind::OutsideComponent("state")))?;
                let s = arg(1, "state name")?;
                if c.states.iter().any(|x| x == s.text) {
                    return Err(err(line, s.col, ParseErrorKind::DuplicateState(s.text.into())));
                }
                c.states.push(s.text.into());
                if let Some(t) = toks.get(2) {
                    if t.text != "initial" {
                        return Err(err(line, t.col, ParseErrorKind::Unexpected(t.text.into())));
                    }
                    if c.initial.is_some() {
                        return Err(err(line, t.col, ParseErrorKind::MultipleInitial));
                    }
                    c.initial = Some(s.text.into());
                }
                arity(3)?;
            }
            "trans" => {
                let c =
                    current.as_mut().ok_or_else(|| err(line, head.col, ParseErrorKind::OutsideComponent("trans")))?;
                let src = arg(1, "source state")?;
                let a = arg(2, "action")?;
                let dst = arg(3, "target state")?;
                let w = match toks.get(4) {
                    None => Weight::ZERO,
                    Some(t) => {
                        let w: Weight =
                            t.text.parse().map_err(|_| err(line, t.col, ParseErrorKind::BadWeight(t.text.into())))?;
                        if w.is_negative() {
                            return Err(err(line, t.col, ParseErrorKind::NegativeWeight(t.text.into())));
                        }
                        if weighted != Some(true) {
                            return Err(err(line, t.col, ParseErrorKind::UnweightedSystem));
                        }
                        w
                    }
                };
                arity(5)?;
                c.trans.push((src.text.into(), a.text.into(), dst.text.into(), w, line, (src.col, dst.col)));
            }
            "action" => {
                let c =
                    current.as_mut().ok_or_else(|| err(line, head.col, ParseErrorKind::OutsideComponent("action")))?;
                c.actions.push(arg(1, "action name")?.text.into());
                arity(2)?;
            }
            "interface" => {
                if interface.is_some() {
                    return Err(err(line, head.col, ParseErrorKind::Duplicate("interface")));
                }
                let n = arg(1, "component name")?;
                interface = Some((n.text.into(), line, n.col));
                arity(2)?;
            }
            other => return Err(err(line, head.col, ParseErrorKind::UnknownKeyword(other.into()))),
        }
    }
    if let Some(c) = current.take() {
        components.push(c.finish()?);
    }
    let end = text.lines().count().max(1);
    let Some((iname, iline, icol)) = interface else {
        return Err(err(end, 1, ParseErrorKind::MissingInterface));
    };
    if components.is_empty() {
        return Err(err(end, 1, ParseErrorKind::NoComponents));
    }
    let idx = components
        .iter()
        .position(|c| c.name() == iname)
        .ok_or_else(|| err(iline, icol, ParseErrorKind::UndeclaredComponent(iname.clone())))?;
    let product =
        Product::new(components, idx, weighted.unwrap_or(false)).map_err(|e| err(end, 1, ParseErrorKind::Model(e)))?;
    Ok(System { name: name.unwrap_or_else(|| "system".into()), product })
}

/// Canonical text of a product. Parsing it yields a structurally equal
/// product.
pub fn serialize_system(name: &str, product: &Product) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "system {name}");
    let _ = writeln!(out, "option weighted {}", if product.is_weighted() { "on" } else { "off" });
    for c in product.components() {
        write_component(&mut out, c, product.is_weighted());
    }
    let _ = writeln!(out, "interface {}", product.interface_lts().name());
    out
}

fn write_component(out: &mut String, c: &Lts, weighted: bool) {
    let _ = writeln!(out, "component {}", c.name());
    for (k, s) in c.states().iter().enumerate() {
        if k as u32 == c.initial() {
            let _ = writeln!(out, "  state {s} initial");
        } else {
            let _ = writeln!(out, "  state {s}");
        }
    }
    let used: BTreeSet<usize> = c.transitions().iter().map(|t| t.action).collect();
    for (k, a) in c.actions().iter().enumerate() {
        if !used.contains(&k) {
            let _ = writeln!(out, "  action {a}");
        }
    }
    for t in c.transitions() {
        let _ = write!(out, "  trans {} {} {}", c.state_name(t.src), c.actions()[t.action], c.state_name(t.dst));
        if weighted {
            let _ = write!(out, " {}", t.weight);
        }
        out.push('\n');
    }
}

/// The summary as a one-component system named after the interface, with a
/// `# divergent` comment listing marked states.
pub fn serialize_summary(name: &str, component: &str, summary: &Summary) -> String {
    let lts = summary.to_lts(component).expect("summaries are well-formed");
    let weighted = summary.is_weighted();
    let mut out = String::new();
    let _ = writeln!(out, "system {name}");
    let _ = writeln!(out, "option weighted {}", if weighted { "on" } else { "off" });
    if let Some(d) = &summary.divergent {
        let list: Vec<String> = d.iter().map(|&k| Summary::state_name(k)).collect();
        let _ = writeln!(out, "# divergent {}", list.join(" "));
    }
    write_component(&mut out, &lts, weighted);
    let _ = writeln!(out, "interface {component}");
    out
}

fn quote(s: &str) -> String {
    let mut q = String::with_capacity(s.len() + 2);
    q.push('"');
    for ch in s.chars() {
        if ch == '"' || ch == '\\' {
            q.push('\\');
        }
        q.push(ch);
    }
    q.push('"');
    q
}

pub fn summary_dot(summary: &Summary) -> String {
    let mut out = String::from("digraph summary {\n  rankdir=LR;\n  node [shape=circle];\n");
    let divergent = summary.divergent.clone().unwrap_or_default();
    for k in 0..summary.num_states() {
        let name = Summary::state_name(k);
        if divergent.contains(&k) {
            let _ = writeln!(out, "  {} [peripheries=2, style=filled, fillcolor=lightgray];", quote(&name));
        } else {
            let _ = writeln!(out, "  {};", quote(&name));
        }
    }
    for t in &summary.transitions {
        let mut label = summary.alphabet[t.action].clone();
        if let Some(w) = t.weight {
            let _ = write!(label, "/{w}");
        }
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(&Summary::state_name(t.src)),
            quote(&Summary::state_name(t.dst)),
            quote(&label)
        );
    }
    out.push_str("}\n");
    out
}

/// Conditions are `<component>.<state>` circles, events are boxes named by
/// their action; cut-offs get a double border, frozen candidates are dashed.
pub fn prefix_dot(product: &Product, prefix: &Prefix) -> String {
    let mut out = String::from("digraph prefix {\n");
    for (k, c) in prefix.conditions().iter().enumerate() {
        let lts = &product.components()[c.component as usize];
        let label = format!("{}.{}", lts.name(), lts.state_name(c.state));
        let style = match c.live {
            Liveness::Live => "",
            Liveness::Frozen => ", style=dashed",
            Liveness::Dead => ", style=dotted",
        };
        let _ = writeln!(out, "  {} [shape=circle, label={}{}];", quote(&format!("b{k}")), quote(&label), style);
    }
    for (k, e) in prefix.events().iter().enumerate() {
        let attr = match e.status {
            EventStatus::Normal => "",
            EventStatus::Cutoff { .. } => ", peripheries=2",
            EventStatus::Candidate { .. } => ", style=dashed",
            EventStatus::Freed => ", style=bold",
        };
        let label = format!("{}:{}", k, product.action_name(e.gt.action));
        let id = quote(&format!("e{k}"));
        let _ = writeln!(out, "  {id} [shape=box, label={}{}];", quote(&label), attr);
        for &b in &e.inputs {
            let _ = writeln!(out, "  {} -> {id};", quote(&format!("b{b}")));
        }
        for &b in &e.outputs {
            let _ = writeln!(out, "  {id} -> {};", quote(&format!("b{b}")));
        }
    }
    out.push_str("}\n");
    out
}

/// Run statistics; the field order is the output order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub events: usize,
    pub cutoffs: usize,
    pub candidates_final: usize,
    pub summary_states: usize,
    pub summary_transitions: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimized_states: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_markings: Option<usize>,
    pub wall_time_ms: u64,
}

pub fn stats_json(stats: &Stats) -> String {
    serde_json::to_string(stats).expect("plain record")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_loop_document() {
        let sys = parse_system("system s\ncomponent P\n  state q0\n  trans q0 a q0\ninterface P\n").unwrap();
        assert_eq!(sys.product.num_components(), 1);
        assert_eq!(sys.product.components()[0].transitions().len(), 1);
    }

    #[test]
    fn missing_interface_is_reported() {
        let e = parse_system("component P\n state q0\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MissingInterface);
        assert_eq!(e.to_string(), "line 2, column 1: missing interface");
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_system("component P\n  state q0\n  trans q0 a q9\ninterface P\n").unwrap_err();
        assert_eq!((e.line, e.col), (3, 14));
        assert_eq!(e.kind, ParseErrorKind::UndeclaredState("q9".into()));
        let e = parse_system("component P\n  state q0\n  bogus\n").unwrap_err();
        assert_eq!((e.line, e.col), (3, 3));
        let e =
            parse_system("option weighted on\ncomponent P\n  state q0\n  trans q0 a q0 -1\ninterface P\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::NegativeWeight("-1".into()));
        let e = parse_system("component P\n  state q0\n  trans q0 a q0\n  trans q0 a q0\ninterface P\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::DuplicateTransition(_)));
        let e = parse_system("component P\n  state q0\ninterface Q\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UndeclaredComponent("Q".into()));
    }

    #[test]
    fn explicit_initial_wins() {
        let sys = parse_system("component P\n  state a\n  state b initial\n  trans a x b\ninterface P\n").unwrap();
        assert_eq!(sys.product.components()[0].initial(), 1);
    }

    #[test]
    fn weights_need_the_option() {
        let e = parse_system("component P\n  state q0\n  trans q0 a q0 2\ninterface P\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnweightedSystem);
        let sys =
            parse_system("option weighted on\ncomponent P\n state q0\n trans q0 a q0 2.5\ninterface P\n").unwrap();
        assert_eq!(sys.product.components()[0].transitions()[0].weight, Weight::new(5, 2));
    }

    #[test]
    fn stats_key_order() {
        let s = Stats {
            events: 2,
            cutoffs: 1,
            candidates_final: 0,
            summary_states: 2,
            summary_transitions: 2,
            minimized_states: Some(1),
            oracle_markings: None,
            wall_time_ms: 0,
        };
        assert_eq!(
            stats_json(&s),
            r#"{"events":2,"cutoffs":1,"candidates_final":0,"summary_states":2,"summary_transitions":2,"minimized_states":1,"wall_time_ms":0}"#
        );
    }
}
