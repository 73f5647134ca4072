//! The SST and substitution-sequence text formats.
//!
//! SST files are line-oriented UTF-8 with `#` comments:
//!
//! ```text
//! sst <name>
//! alphabet a b
//! vars X Y
//! output X
//! states q0 q1
//! initial q0
//! final q1
//! trans q0 a q0 : X = X a ; Y = Y
//! finalout q1 : X = X Y ; Y =
//! ```
//!
//! Every `trans`/`finalout` assigns every variable exactly once; right-hand
//! sides are space-separated tokens, each a variable or a letter, and an
//! empty right-hand side denotes ε.
//!
//! Sequence files hold one substitution per line in the same `X = … ; Y = …`
//! syntax, after a header that either names a known SST (`seq over t3`) or
//! declares the context inline (`seq over alphabet a b ; vars X Y ; output X`).

use std::sync::Arc;

use thiserror::Error;

use crate::alphabet::{Alphabet, VarSet};
use crate::seq::SubstSeq;
use crate::sst::Sst;
use crate::subst::{SstCtx, Substitution, Sym};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, msg: msg.into() })
}

/// Strips comments and returns the non-blank lines with their numbers.
fn meaningful_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                None
            } else {
                Some((i + 1, line))
            }
        })
        .collect()
}

/// Parses `X = X a ; Y = Y` into a substitution; every variable must be
/// assigned exactly once.
fn parse_assignments(ctx: &Arc<SstCtx>, line_no: usize, text: &str) -> Result<Substitution, ParseError> {
    let mut images: Vec<Option<Vec<Sym>>> = vec![None; ctx.vars.len()];
    for part in text.split(';') {
        let part = part.trim();
        if part.is_empty() {
            return err(line_no, "empty assignment");
        }
        let (lhs, rhs) = match part.split_once('=') {
            Some(p) => p,
            None => return err(line_no, format!("assignment {part:?} lacks '='")),
        };
        let var = match ctx.vars.lookup(lhs.trim()) {
            Some(v) => v,
            None => return err(line_no, format!("unknown variable {:?}", lhs.trim())),
        };
        if images[var.0 as usize].is_some() {
            return err(line_no, format!("variable {:?} assigned twice", lhs.trim()));
        }
        let mut image = Vec::new();
        for tok in rhs.split_whitespace() {
            if let Some(v) = ctx.vars.lookup(tok) {
                image.push(Sym::Var(v));
            } else if let Some(l) = ctx.alphabet.lookup(tok) {
                image.push(Sym::Let(l));
            } else {
                return err(line_no, format!("token {tok:?} is neither a variable nor a letter"));
            }
        }
        images[var.0 as usize] = Some(image);
    }
    let mut complete = Vec::with_capacity(images.len());
    for (i, img) in images.into_iter().enumerate() {
        match img {
            Some(img) => complete.push(img),
            None => {
                return err(
                    line_no,
                    format!("variable {:?} not assigned", ctx.vars.name(crate::alphabet::VarId(i as u16))),
                )
            }
        }
    }
    Substitution::new(ctx.clone(), complete).map_err(|e| ParseError { line: line_no, msg: e.to_string() })
}

/// Parses one SST from its text form.
pub fn parse_sst(text: &str) -> Result<Sst, ParseError> {
    let lines = meaningful_lines(text);
    let mut it = lines.iter().peekable();

    let take_section = |it: &mut std::iter::Peekable<std::slice::Iter<(usize, &str)>>,
                        key: &str|
     -> Result<(usize, Vec<String>), ParseError> {
        match it.next() {
            Some(&(no, line)) => {
                let mut toks = line.split_whitespace();
                if toks.next() != Some(key) {
                    return err(no, format!("expected {key:?} section, got {line:?}"));
                }
                Ok((no, toks.map(str::to_string).collect()))
            }
            None => err(0, format!("missing {key:?} section")),
        }
    };

    let (no, name_toks) = take_section(&mut it, "sst")?;
    if name_toks.len() != 1 {
        return err(no, "expected exactly one transducer name");
    }
    let name = name_toks[0].clone();

    let (no, letters) = take_section(&mut it, "alphabet")?;
    let alphabet = Alphabet::new(letters).map_err(|e| ParseError { line: no, msg: e.to_string() })?;
    let (no_v, vars) = take_section(&mut it, "vars")?;
    let (no_o, output) = take_section(&mut it, "output")?;
    if output.len() != 1 {
        return err(no_o, "expected exactly one output variable");
    }
    let vars = VarSet::new(vars, &output[0]).map_err(|e| ParseError { line: no_v.max(no_o), msg: e.to_string() })?;
    let ctx = SstCtx::new(alphabet, vars);

    let (no_s, state_names) = take_section(&mut it, "states")?;
    if state_names.is_empty() {
        return err(no_s, "at least one state required");
    }
    for (i, s) in state_names.iter().enumerate() {
        if state_names[..i].contains(s) {
            return err(no_s, format!("duplicate state {s:?}"));
        }
    }
    let state_index = |no: usize, tok: &str| -> Result<usize, ParseError> {
        state_names
            .iter()
            .position(|s| s == tok)
            .ok_or_else(|| ParseError { line: no, msg: format!("unknown state {tok:?}") })
    };

    let (no_i, initial_toks) = take_section(&mut it, "initial")?;
    let initial = initial_toks
        .iter()
        .map(|s| state_index(no_i, s))
        .collect::<Result<Vec<_>, _>>()?;
    let (no_f, final_toks) = take_section(&mut it, "final")?;
    let final_ = final_toks
        .iter()
        .map(|s| state_index(no_f, s))
        .collect::<Result<Vec<_>, _>>()?;

    let mut transitions = Vec::new();
    let mut final_out = Vec::new();
    for &(no, line) in it {
        if let Some(rest) = line.strip_prefix("trans ") {
            let (head, assigns) = match rest.split_once(':') {
                Some(p) => p,
                None => return err(no, "trans line lacks ':'"),
            };
            let toks: Vec<&str> = head.split_whitespace().collect();
            if toks.len() != 3 {
                return err(no, "expected 'trans <from> <letter> <to> : …'");
            }
            let q = state_index(no, toks[0])?;
            let a = match ctx.alphabet.lookup(toks[1]) {
                Some(a) => a,
                None => return err(no, format!("unknown letter {:?}", toks[1])),
            };
            let q2 = state_index(no, toks[2])?;
            let s = parse_assignments(&ctx, no, assigns)?;
            transitions.push((q, a, q2, s));
        } else if let Some(rest) = line.strip_prefix("finalout ") {
            let (head, assigns) = match rest.split_once(':') {
                Some(p) => p,
                None => return err(no, "finalout line lacks ':'"),
            };
            let toks: Vec<&str> = head.split_whitespace().collect();
            if toks.len() != 1 {
                return err(no, "expected 'finalout <state> : …'");
            }
            let q = state_index(no, toks[0])?;
            if final_out.iter().any(|(p, _)| *p == q) {
                return err(no, format!("state {:?} has two finalout lines", toks[0]));
            }
            let s = parse_assignments(&ctx, no, assigns)?;
            final_out.push((q, s));
        } else {
            return err(no, format!("unrecognized line {line:?}"));
        }
    }

    Sst::new(name, ctx, state_names, initial, final_, transitions, final_out)
        .map_err(|e| ParseError { line: 0, msg: e.to_string() })
}

/// Serializes an SST in the canonical text form; reparsing yields a
/// structurally identical transducer.
pub fn render_sst(t: &Sst) -> String {
    let ctx = t.ctx();
    let mut out = String::new();
    out.push_str(&format!("sst {}\n", t.name));
    out.push_str(&format!(
        "alphabet {}\n",
        ctx.alphabet.letters().map(|l| ctx.alphabet.name(l)).collect::<Vec<_>>().join(" ")
    ));
    out.push_str(&format!(
        "vars {}\n",
        ctx.vars.vars().map(|v| ctx.vars.name(v)).collect::<Vec<_>>().join(" ")
    ));
    out.push_str(&format!("output {}\n", ctx.vars.name(ctx.output())));
    out.push_str(&format!("states {}\n", t.states().join(" ")));
    out.push_str(&format!(
        "initial {}\n",
        t.initial().iter().map(|&q| t.states()[q].as_str()).collect::<Vec<_>>().join(" ")
    ));
    out.push_str(&format!(
        "final {}\n",
        t.final_states().iter().map(|&q| t.states()[q].as_str()).collect::<Vec<_>>().join(" ")
    ));
    for (q, a, q2, s) in t.transitions() {
        out.push_str(&format!(
            "trans {} {} {} : {}\n",
            t.states()[*q],
            ctx.alphabet.name(*a),
            t.states()[*q2],
            s.render()
        ));
    }
    for &q in t.final_states() {
        out.push_str(&format!("finalout {} : {}\n", t.states()[q], t.final_output(q).unwrap().render()));
    }
    out
}

/// Parses a substitution-sequence file.  `resolve` maps an SST name from a
/// `seq over <name>` header to its context.
pub fn parse_seq(
    text: &str,
    resolve: impl Fn(&str) -> Option<Arc<SstCtx>>,
) -> Result<SubstSeq, ParseError> {
    let lines = meaningful_lines(text);
    let mut it = lines.iter();
    let (no, header) = match it.next() {
        Some(&(no, line)) => (no, line),
        None => return err(0, "empty sequence file"),
    };
    let rest = match header.strip_prefix("seq over") {
        Some(r) => r.trim(),
        None => return err(no, "expected 'seq over …' header"),
    };
    let ctx = if let Some(inline) = rest.strip_prefix("alphabet") {
        // inline form: alphabet … ; vars … ; output …
        let mut letters: Option<Vec<String>> = None;
        let mut vars: Option<Vec<String>> = None;
        let mut output: Option<String> = None;
        for clause in format!("alphabet{inline}").split(';') {
            let toks: Vec<&str> = clause.split_whitespace().collect();
            match toks.split_first() {
                Some((&"alphabet", rest)) => letters = Some(rest.iter().map(|s| s.to_string()).collect()),
                Some((&"vars", rest)) => vars = Some(rest.iter().map(|s| s.to_string()).collect()),
                Some((&"output", rest)) if rest.len() == 1 => output = Some(rest[0].to_string()),
                _ => return err(no, format!("bad header clause {clause:?}")),
            }
        }
        let (letters, vars, output) = match (letters, vars, output) {
            (Some(l), Some(v), Some(o)) => (l, v, o),
            _ => return err(no, "inline header needs alphabet, vars and output clauses"),
        };
        let alphabet = Alphabet::new(letters).map_err(|e| ParseError { line: no, msg: e.to_string() })?;
        let vars = VarSet::new(vars, &output).map_err(|e| ParseError { line: no, msg: e.to_string() })?;
        SstCtx::new(alphabet, vars)
    } else {
        match resolve(rest) {
            Some(ctx) => ctx,
            None => return err(no, format!("unknown transducer {rest:?} in header")),
        }
    };
    let mut items = Vec::new();
    for &(no, line) in it {
        items.push(parse_assignments(&ctx, no, line)?);
    }
    SubstSeq::new(ctx, items).map_err(|e| ParseError { line: 0, msg: e.to_string() })
}

/// Serializes a sequence with an inline header.
pub fn render_seq(seq: &SubstSeq) -> String {
    let ctx = seq.ctx();
    let mut out = format!(
        "seq over alphabet {} ; vars {} ; output {}\n",
        ctx.alphabet.letters().map(|l| ctx.alphabet.name(l)).collect::<Vec<_>>().join(" "),
        ctx.vars.vars().map(|v| ctx.vars.name(v)).collect::<Vec<_>>().join(" "),
        ctx.vars.name(ctx.output())
    );
    for item in seq.items() {
        out.push_str(&item.render());
        out.push('\n');
    }
    out
}
