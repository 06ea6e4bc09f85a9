//! Weighted plane graphs as text.
//!
//! ```text
//! v <id>
//! e <id> <u> <v> <re> [<im>]
//! rot <v> <e1> <e2> ...      # counterclockwise, one line per vertex of degree >= 1
//! outer <edge-id> <from-vertex>
//! ```
//!
//! A self-loop appears twice in its vertex's rotation: the first occurrence
//! is the end leaving `u`, the second the end returning to it.

use std::collections::HashMap;

use pw_core::complex::c;
use pw_core::fkt::{Dart, WeightedPlaneGraph};
use pw_core::logc::format_real;
use pw_core::Complex;

use crate::span::{ParseError, SourceSpan};

/// A parsed graph together with the names used in the file.
#[derive(Clone, Debug)]
pub struct WpgFile {
    pub graph: WeightedPlaneGraph,
    pub vertex_names: Vec<String>,
    pub edge_names: Vec<String>,
}

struct Word<'a> {
    text: &'a str,
    span: SourceSpan,
}

fn words(line: &str, line_no: usize, line_offset: usize) -> Vec<Word<'_>> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                let text = &body[s..i];
                let column = body[..s].chars().count() + 1;
                out.push(Word {
                    text,
                    span: SourceSpan::on_line(line_no, column, line_offset + s, text.chars().count()),
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

struct Builder {
    vertex_ids: HashMap<String, usize>,
    vertex_names: Vec<String>,
    edge_ids: HashMap<String, usize>,
    edge_names: Vec<String>,
    edges: Vec<(usize, usize, Complex)>,
    rotations: Vec<Option<(Vec<Dart>, SourceSpan)>>,
    outer: Option<(Dart, SourceSpan)>,
}

impl Builder {
    fn vertex(&self, w: &Word) -> Result<usize, ParseError> {
        self.vertex_ids
            .get(w.text)
            .copied()
            .ok_or_else(|| ParseError::new(format!("unknown vertex `{}`", w.text), w.span))
    }

    fn edge(&self, w: &Word) -> Result<usize, ParseError> {
        self.edge_ids
            .get(w.text)
            .copied()
            .ok_or_else(|| ParseError::new(format!("unknown edge `{}`", w.text), w.span))
    }
}

fn real(w: &Word) -> Result<f64, ParseError> {
    match w.text.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(ParseError::new(format!("`{}` is not a finite number", w.text), w.span).expecting(&["number"])),
    }
}

fn arity(ws: &[Word], min: usize, max: usize, what: &str, line_span: SourceSpan) -> Result<(), ParseError> {
    if ws.len() < min {
        let at = ws.last().map_or(line_span, |w| w.span);
        return Err(ParseError::new(format!("`{}` line is missing fields", ws[0].text), at).expecting(&[what]));
    }
    if ws.len() > max {
        return Err(ParseError::new("unexpected extra field", ws[max].span).expecting(&["end of line"]));
    }
    Ok(())
}

pub fn parse_wpg(text: &str) -> Result<WpgFile, ParseError> {
    let mut b = Builder {
        vertex_ids: HashMap::new(),
        vertex_names: Vec::new(),
        edge_ids: HashMap::new(),
        edge_names: Vec::new(),
        edges: Vec::new(),
        rotations: Vec::new(),
        outer: None,
    };
    let mut pending_rot: Vec<(usize, Vec<Word>)> = Vec::new();
    let mut pending_outer: Option<Vec<Word>> = None;
    let mut offset = 0;
    let mut last_line = 1;
    for (idx, line) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let ws = words(line, line_no, offset);
        offset += line.len() + 1;
        let Some(head) = ws.first() else { continue };
        let line_span = head.span;
        match head.text {
            "v" => {
                arity(&ws, 2, 2, "vertex id", line_span)?;
                let name = ws[1].text.to_string();
                if b.vertex_ids.contains_key(&name) {
                    return Err(ParseError::new(format!("vertex `{name}` is declared twice"), ws[1].span));
                }
                b.vertex_ids.insert(name.clone(), b.vertex_names.len());
                b.vertex_names.push(name);
                b.rotations.push(None);
            }
            "e" => {
                arity(&ws, 5, 6, "edge id, endpoints and weight", line_span)?;
                let name = ws[1].text.to_string();
                if b.edge_ids.contains_key(&name) {
                    return Err(ParseError::new(format!("edge `{name}` is declared twice"), ws[1].span));
                }
                let u = b.vertex(&ws[2])?;
                let v = b.vertex(&ws[3])?;
                let re = real(&ws[4])?;
                let im = if ws.len() == 6 { real(&ws[5])? } else { 0.0 };
                b.edge_ids.insert(name.clone(), b.edge_names.len());
                b.edge_names.push(name);
                b.edges.push((u, v, c(re, im)));
            }
            "rot" => {
                arity(&ws, 2, usize::MAX, "vertex id", line_span)?;
                pending_rot.push((line_no, ws));
            }
            "outer" => {
                arity(&ws, 3, 3, "edge id and vertex id", line_span)?;
                if pending_outer.is_some() {
                    return Err(ParseError::new("outer face is declared twice", line_span));
                }
                pending_outer = Some(ws);
            }
            other => {
                return Err(ParseError::new(format!("unknown directive `{other}`"), line_span)
                    .expecting(&["v", "e", "rot", "outer"]))
            }
        }
    }
    // Rotations and the outer marker may mention edges declared later.
    for (_, ws) in &pending_rot {
        let v = b.vertex(&ws[1])?;
        if b.rotations[v].is_some() {
            return Err(ParseError::new(
                format!("rotation of vertex `{}` is declared twice", ws[1].text),
                ws[1].span,
            ));
        }
        let mut uses: HashMap<usize, usize> = HashMap::new();
        let mut darts = Vec::new();
        for w in &ws[2..] {
            let e = b.edge(w)?;
            let (eu, ev, _) = b.edges[e];
            let n = uses.entry(e).or_default();
            *n += 1;
            let dart = if eu == ev {
                match *n {
                    1 => Dart { edge: e, forward: true },
                    2 => Dart { edge: e, forward: false },
                    _ => return Err(ParseError::new(format!("loop `{}` listed more than twice", w.text), w.span)),
                }
            } else if *n > 1 {
                return Err(ParseError::new(format!("edge `{}` listed twice", w.text), w.span));
            } else if eu == v {
                Dart { edge: e, forward: true }
            } else if ev == v {
                Dart { edge: e, forward: false }
            } else {
                return Err(ParseError::new(
                    format!("edge `{}` does not touch vertex `{}`", w.text, ws[1].text),
                    w.span,
                ));
            };
            darts.push(dart);
        }
        let span = ws[0].span.to(ws[ws.len() - 1].span);
        b.rotations[v] = Some((darts, span));
    }
    let mut degree = vec![0usize; b.vertex_names.len()];
    for &(u, v, _) in &b.edges {
        degree[u] += 1;
        degree[v] += 1;
    }
    let end = SourceSpan::on_line(last_line, 1, text.len(), 0);
    let mut rotation = Vec::with_capacity(degree.len());
    for (v, rot) in b.rotations.iter().enumerate() {
        let name = &b.vertex_names[v];
        match rot {
            None if degree[v] > 0 => {
                return Err(ParseError::new(format!("vertex `{name}` has no rotation"), end).expecting(&["rot"]))
            }
            None => rotation.push(Vec::new()),
            Some((darts, span)) => {
                if darts.len() != degree[v] {
                    return Err(ParseError::new(
                        format!(
                            "rotation of vertex `{name}` lists {} of its {} edge ends",
                            darts.len(),
                            degree[v]
                        ),
                        *span,
                    ));
                }
                rotation.push(darts.clone());
            }
        }
    }
    if let Some(ws) = &pending_outer {
        let e = b.edge(&ws[1])?;
        let v = b.vertex(&ws[2])?;
        let (eu, ev, _) = b.edges[e];
        let forward = if eu == v {
            true
        } else if ev == v {
            false
        } else {
            return Err(ParseError::new(
                format!("edge `{}` does not touch vertex `{}`", ws[1].text, ws[2].text),
                ws[2].span,
            ));
        };
        b.outer = Some((Dart { edge: e, forward }, ws[0].span));
    }
    let outer_span = b.outer.map(|(_, s)| s);
    let graph = WeightedPlaneGraph::from_parts(
        b.vertex_names.len(),
        b.edges,
        rotation,
        b.outer.map(|(d, _)| d),
    )
    .map_err(|e| ParseError::new(format!("invalid embedding: {e}"), outer_span.unwrap_or(end)))?;
    Ok(WpgFile {
        graph,
        vertex_names: b.vertex_names,
        edge_names: b.edge_names,
    })
}

/// Writes a graph with vertices `0..n` and edges `0..m` as ids.
pub fn print_wpg(g: &WeightedPlaneGraph) -> String {
    let mut out = String::new();
    for v in 0..g.vertex_count() {
        out.push_str(&format!("v {v}\n"));
    }
    for (i, &(u, v, w)) in g.edges().iter().enumerate() {
        if w.im == 0.0 {
            out.push_str(&format!("e {i} {u} {v} {}\n", format_real(w.re)));
        } else {
            out.push_str(&format!("e {i} {u} {v} {} {}\n", format_real(w.re), format_real(w.im)));
        }
    }
    for (v, rot) in g.rotation().iter().enumerate() {
        if rot.is_empty() {
            continue;
        }
        let ids: Vec<String> = rot.iter().map(|d| d.edge.to_string()).collect();
        out.push_str(&format!("rot {v} {}\n", ids.join(" ")));
    }
    if let Some(d) = g.outer() {
        out.push_str(&format!("outer {} {}\n", d.edge, g.tail(d)));
    }
    out
}
