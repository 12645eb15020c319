//! Parse-back checks for generated decks: a small SPICE reader that knows
//! subcircuits, instances, voltage sources and a handful of dot-commands.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{LimError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    pub nodes: Vec<String>,
    pub subckt: String,
    pub params: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subckt {
    pub name: String,
    pub ports: Vec<String>,
    pub instances: Vec<Instance>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Source {
    pub name: String,
    pub pos: String,
    pub neg: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpiceDeck {
    pub includes: Vec<String>,
    pub globals: Vec<String>,
    pub subckts: Vec<Subckt>,
    pub top_instances: Vec<Instance>,
    pub sources: Vec<Source>,
    pub params: Vec<String>,
}

impl SpiceDeck {
    pub fn subckt(&self, name: &str) -> Option<&Subckt> {
        self.subckts.iter().find(|s| s.name.eq_ignore_ascii_case(name))
    }
}

fn logical_lines(text: &str) -> Vec<(usize, String)> {
    let mut out: Vec<(usize, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('*') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('+') {
            if let Some(last) = out.last_mut() {
                last.1.push(' ');
                last.1.push_str(rest.trim());
                continue;
            }
        }
        out.push((i + 1, line.to_string()));
    }
    out
}

fn parse_instance(line: usize, tokens: &[&str]) -> Result<Instance> {
    let positional: Vec<&str> = tokens.iter().copied().take_while(|t| !t.contains('=')).collect();
    let params = tokens[positional.len()..]
        .iter()
        .map(|t| {
            t.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| LimError::Parse {
                    line,
                    msg: format!("positional token '{t}' after parameters"),
                })
        })
        .collect::<Result<Vec<_>>>()?;
    if positional.len() < 2 {
        return Err(LimError::Parse {
            line,
            msg: format!("instance '{}' has no subcircuit", tokens[0]),
        });
    }
    Ok(Instance {
        name: positional[0].to_string(),
        nodes: positional[1..positional.len() - 1].iter().map(|s| s.to_string()).collect(),
        subckt: positional[positional.len() - 1].to_string(),
        params,
    })
}

pub fn parse_spice(text: &str) -> Result<SpiceDeck> {
    let mut deck = SpiceDeck::default();
    let mut open: Option<Subckt> = None;
    for (line, content) in logical_lines(text) {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let head = tokens[0].to_ascii_lowercase();
        match head.as_str() {
            ".include" | ".inc" => {
                let path = tokens.get(1).ok_or_else(|| LimError::Parse {
                    line,
                    msg: ".include without a path".into(),
                })?;
                deck.includes.push(path.trim_matches('"').trim_matches('\'').to_string());
            }
            ".global" => deck.globals.extend(tokens[1..].iter().map(|s| s.to_string())),
            ".param" => deck.params.extend(
                tokens[1..]
                    .iter()
                    .filter_map(|t| t.split_once('=').map(|(k, _)| k.to_string())),
            ),
            ".subckt" => {
                if open.is_some() {
                    return Err(LimError::Parse {
                        line,
                        msg: "nested .subckt".into(),
                    });
                }
                let name = tokens.get(1).ok_or_else(|| LimError::Parse {
                    line,
                    msg: ".subckt without a name".into(),
                })?;
                open = Some(Subckt {
                    name: name.to_string(),
                    ports: tokens[2..]
                        .iter()
                        .take_while(|t| !t.contains('='))
                        .map(|s| s.to_string())
                        .collect(),
                    instances: Vec::new(),
                });
            }
            ".ends" => {
                let s = open.take().ok_or_else(|| LimError::Parse {
                    line,
                    msg: ".ends without .subckt".into(),
                })?;
                deck.subckts.push(s);
            }
            h if h.starts_with('x') => {
                let inst = parse_instance(line, &tokens)?;
                match open.as_mut() {
                    Some(s) => s.instances.push(inst),
                    None => deck.top_instances.push(inst),
                }
            }
            h if h.starts_with('v') && open.is_none() => {
                if tokens.len() < 3 {
                    return Err(LimError::Parse {
                        line,
                        msg: format!("source '{}' needs two nodes", tokens[0]),
                    });
                }
                deck.sources.push(Source {
                    name: tokens[0].to_string(),
                    pos: tokens[1].to_string(),
                    neg: tokens[2].to_string(),
                });
            }
            _ => {}
        }
    }
    if let Some(s) = open {
        return Err(LimError::Parse {
            line: 0,
            msg: format!("unterminated .subckt {}", s.name),
        });
    }
    Ok(deck)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LintIssue {
    /// A node used inside a subcircuit is neither a port nor global.
    UndeclaredNode { instance: String, node: String },
    DuplicateInstance(String),
    UndefinedSubckt { instance: String, subckt: String },
    PortCountMismatch { instance: String, expected: usize, got: usize },
    /// A stimulus source drives a line the array does not expose.
    UnknownDrivenNode { source: String, node: String },
    UndefinedParam { instance: String, param: String },
}

impl fmt::Display for LintIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LintIssue::UndeclaredNode { instance, node } => {
                write!(f, "{instance}: node {node} is not declared")
            }
            LintIssue::DuplicateInstance(n) => write!(f, "instance {n} defined twice"),
            LintIssue::UndefinedSubckt { instance, subckt } => {
                write!(f, "{instance}: subcircuit {subckt} is not defined")
            }
            LintIssue::PortCountMismatch { instance, expected, got } => {
                write!(f, "{instance}: {got} nodes for {expected} ports")
            }
            LintIssue::UnknownDrivenNode { source, node } => {
                write!(f, "{source}: drives unknown node {node}")
            }
            LintIssue::UndefinedParam { instance, param } => {
                write!(f, "{instance}: parameter {param} is not defined")
            }
        }
    }
}

/// Checks a netlist for closure, optionally against the primitive library
/// it includes and the stimulus deck that drives it.
pub fn lint(netlist: &str, library: Option<&str>, stimuli: Option<&str>) -> Result<Vec<LintIssue>> {
    let deck = parse_spice(netlist)?;
    let lib = library.map(parse_spice).transpose()?;
    let stim = stimuli.map(parse_spice).transpose()?;
    let mut issues = Vec::new();

    let globals: BTreeSet<&str> = deck.globals.iter().map(String::as_str).chain(["0"]).collect();
    let mut seen = BTreeSet::new();
    let mut exposed: BTreeSet<String> = globals.iter().map(|s| s.to_string()).collect();

    let all_instances = deck
        .subckts
        .iter()
        .flat_map(|s| s.instances.iter().map(move |i| (Some(s), i)))
        .chain(deck.top_instances.iter().map(|i| (None, i)));
    for (parent, inst) in all_instances {
        if !seen.insert(inst.name.to_ascii_uppercase()) {
            issues.push(LintIssue::DuplicateInstance(inst.name.clone()));
        }
        match parent {
            Some(s) => {
                for node in &inst.nodes {
                    if !globals.contains(node.as_str()) && !s.ports.contains(node) {
                        issues.push(LintIssue::UndeclaredNode {
                            instance: inst.name.clone(),
                            node: node.clone(),
                        });
                    }
                }
            }
            None => exposed.extend(inst.nodes.iter().cloned()),
        }
        let def = deck.subckt(&inst.subckt).or_else(|| lib.as_ref().and_then(|l| l.subckt(&inst.subckt)));
        match def {
            Some(d) if d.ports.len() != inst.nodes.len() => issues.push(LintIssue::PortCountMismatch {
                instance: inst.name.clone(),
                expected: d.ports.len(),
                got: inst.nodes.len(),
            }),
            None if lib.is_some() => issues.push(LintIssue::UndefinedSubckt {
                instance: inst.name.clone(),
                subckt: inst.subckt.clone(),
            }),
            _ => {}
        }
        if let Some(st) = &stim {
            for (_, value) in &inst.params {
                let is_number = value.trim_end_matches(char::is_alphabetic).parse::<f64>().is_ok();
                if !is_number && !st.params.contains(value) {
                    issues.push(LintIssue::UndefinedParam {
                        instance: inst.name.clone(),
                        param: value.clone(),
                    });
                }
            }
        }
    }

    if let Some(st) = &stim {
        for src in &st.sources {
            for node in [&src.pos, &src.neg] {
                if !exposed.contains(node) {
                    issues.push(LintIssue::UnknownDrivenNode {
                        source: src.name.clone(),
                        node: node.clone(),
                    });
                }
            }
        }
    }
    Ok(issues)
}

/// Instance counts recovered from a generated netlist.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NetlistSummary {
    pub real_cells: usize,
    pub dummy_row_cells: usize,
    pub dummy_col_cells: usize,
    pub dummy_loads: usize,
    pub dummy_lines: usize,
    pub by_subckt: BTreeMap<String, usize>,
    pub ports: Vec<String>,
}

impl NetlistSummary {
    pub fn cell_instances(&self) -> usize {
        self.real_cells + self.dummy_row_cells + self.dummy_col_cells
    }

    pub fn has_port(&self, name: &str) -> bool {
        self.ports.iter().any(|p| p == name)
    }
}

pub fn parse_netlist_summary(netlist: &str) -> Result<NetlistSummary> {
    let deck = parse_spice(netlist)?;
    let mut s = NetlistSummary::default();
    let top = deck.subckts.first().ok_or_else(|| LimError::Parse {
        line: 0,
        msg: "netlist defines no subcircuit".into(),
    })?;
    s.ports = top.ports.clone();
    for inst in &top.instances {
        let name = inst.name.to_ascii_uppercase();
        if name.starts_with("XCELL_") {
            s.real_cells += 1;
        } else if name.starts_with("XDROW_") {
            s.dummy_row_cells += 1;
        } else if name.starts_with("XDCOL_") {
            s.dummy_col_cells += 1;
        } else if name.starts_with("XDLOAD_") {
            s.dummy_loads += 1;
        } else if name == "XDML" {
            s.dummy_lines += 1;
        }
        *s.by_subckt.entry(inst.subckt.clone()).or_default() += 1;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "\
* demo
.global VDD GND
.subckt top A B
X1 A B VDD GND leaf
X2 A C
+ VDD GND leaf
.ends top
XTOP A B top
";

    #[test]
    fn continuation_lines_join() {
        let deck = parse_spice(SMALL).unwrap();
        assert_eq!(deck.subckts[0].instances[1].nodes, ["A", "C", "VDD", "GND"]);
        assert_eq!(deck.top_instances.len(), 1);
    }

    #[test]
    fn undeclared_and_duplicate_nodes_are_reported() {
        let issues = lint(SMALL, None, None).unwrap();
        assert_eq!(
            issues,
            vec![LintIssue::UndeclaredNode {
                instance: "X2".into(),
                node: "C".into()
            }]
        );
        let dup = SMALL.replace("X2 A C", "X1 A B");
        assert!(lint(&dup, None, None).unwrap().contains(&LintIssue::DuplicateInstance("X1".into())));
    }

    #[test]
    fn library_port_counts_are_checked() {
        let lib = ".subckt leaf P Q VDD GND\n.ends\n";
        let net = SMALL.replace("X2 A C\n+ VDD GND leaf", "X2 A VDD GND leaf");
        assert_eq!(
            lint(&net, Some(lib), None).unwrap(),
            vec![LintIssue::PortCountMismatch {
                instance: "X2".into(),
                expected: 4,
                got: 3
            }]
        );
    }

    #[test]
    fn stimuli_must_drive_exposed_nodes() {
        let net = SMALL.replace(" C\n", " B\n");
        let stim = "VA A 0 DC 1\nVZ Z 0 DC 0\n";
        assert_eq!(
            lint(&net, None, Some(stim)).unwrap(),
            vec![LintIssue::UnknownDrivenNode {
                source: "VZ".into(),
                node: "Z".into()
            }]
        );
    }

    #[test]
    fn unterminated_subckt_is_an_error() {
        assert!(parse_spice(".subckt a B\nX1 B c\n").is_err());
    }
}
