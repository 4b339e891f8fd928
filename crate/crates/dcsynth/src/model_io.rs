//! Textual model format.
//!
//! ```text
//! # comment to end of line
//! controllable: take put;
//! component M {
//!   states: idle busy;
//!   init: idle;
//!   marked: idle;
//!   trans: idle -take-> busy;
//!   trans: busy -put-> idle;
//! }
//! compose: M;
//! ```
//!
//! Identifiers are `[A-Za-z0-9_.]+`. A `trans:` statement may carry several
//! `src -label-> dst` triples before its terminating `;`, and may be repeated.
//! A component may optionally declare `controllable:` for the labels it uses;
//! the declaration must agree with the global partition.

use crate::lts::{CompositeModel, ModelError, RawComponent, RawModel};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LBrace,
    RBrace,
    Colon,
    Semi,
    Dash,
    Arrow,
    Parallel,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { chars: text.chars().peekable(), line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn err(&self, msg: &str) -> ModelError {
        ModelError::Syntax(format!("syntax error at line {}, column {}: {}", self.line, self.col, msg))
    }

    /// Next token with its source position, or None at end of input.
    fn next_tok(&mut self) -> Result<Option<(Tok, u32, u32)>, ModelError> {
        loop {
            match self.chars.peek() {
                None => return Ok(None),
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                _ => break,
            }
        }
        let (line, col) = (self.line, self.col);
        let c = self.bump().unwrap();
        let tok = match c {
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ':' => Tok::Colon,
            ';' => Tok::Semi,
            '-' => {
                if self.chars.peek() == Some(&'>') {
                    self.bump();
                    Tok::Arrow
                } else {
                    Tok::Dash
                }
            }
            '|' => {
                if self.chars.peek() == Some(&'|') {
                    self.bump();
                    Tok::Parallel
                } else {
                    return Err(self.err("expected `||`"));
                }
            }
            c if c.is_ascii_alphanumeric() || c == '_' || c == '.' => {
                let mut s = String::new();
                s.push(c);
                while let Some(&n) = self.chars.peek() {
                    if n.is_ascii_alphanumeric() || n == '_' || n == '.' {
                        s.push(n);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Tok::Ident(s)
            }
            c => return Err(self.err(&format!("unexpected character `{c}`"))),
        };
        Ok(Some((tok, line, col)))
    }
}

struct Parser {
    toks: Vec<(Tok, u32, u32)>,
    pos: usize,
}

impl Parser {
    fn err_at(&self, msg: &str) -> ModelError {
        let (line, col) = match self.toks.get(self.pos) {
            Some(&(_, l, c)) => (l, c),
            None => self
                .toks
                .last()
                .map(|&(_, l, c)| (l, c))
                .unwrap_or((1, 1)),
        };
        ModelError::Syntax(format!("syntax error at line {line}, column {col}: {msg}"))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<(), ModelError> {
        match self.peek() {
            Some(t) if t == want => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err_at(&format!("expected {what}"))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ModelError> {
        match self.peek() {
            Some(Tok::Ident(_)) => match self.next() {
                Some(Tok::Ident(s)) => Ok(s),
                _ => unreachable!(),
            },
            _ => Err(self.err_at(&format!("expected {what}"))),
        }
    }

    /// Idents up to (not including) the terminating `;`.
    fn ident_list(&mut self) -> Result<Vec<String>, ModelError> {
        let mut out = Vec::new();
        while let Some(Tok::Ident(_)) = self.peek() {
            out.push(self.ident("identifier")?);
        }
        self.expect(&Tok::Semi, "`;`")?;
        Ok(out)
    }

    fn component(&mut self) -> Result<RawComponent, ModelError> {
        let name = self.ident("component name")?;
        self.expect(&Tok::LBrace, "`{`")?;
        let mut comp = RawComponent {
            name,
            states: Vec::new(),
            initial: String::new(),
            marked: Vec::new(),
            transitions: Vec::new(),
            controllable: None,
        };
        let mut saw_init = false;
        loop {
            match self.peek() {
                Some(Tok::RBrace) => {
                    self.pos += 1;
                    break;
                }
                Some(Tok::Ident(_)) => {
                    let kw = self.ident("section keyword")?;
                    self.expect(&Tok::Colon, "`:`")?;
                    match kw.as_str() {
                        "states" => comp.states.extend(self.ident_list()?),
                        "marked" => comp.marked.extend(self.ident_list()?),
                        "controllable" => {
                            let labels = self.ident_list()?;
                            comp.controllable.get_or_insert_with(Vec::new).extend(labels);
                        }
                        "init" => {
                            comp.initial = self.ident("initial state")?;
                            saw_init = true;
                            self.expect(&Tok::Semi, "`;`")?;
                        }
                        "trans" => loop {
                            match self.peek() {
                                Some(Tok::Semi) => {
                                    self.pos += 1;
                                    break;
                                }
                                Some(Tok::Ident(_)) => {
                                    let src = self.ident("source state")?;
                                    self.expect(&Tok::Dash, "`-`")?;
                                    let label = self.ident("label")?;
                                    self.expect(&Tok::Arrow, "`->`")?;
                                    let dst = self.ident("target state")?;
                                    comp.transitions.push((src, label, dst));
                                }
                                _ => return Err(self.err_at("expected transition or `;`")),
                            }
                        },
                        other => {
                            return Err(self.err_at(&format!("unknown section `{other}`")))
                        }
                    }
                }
                _ => return Err(self.err_at("expected section or `}`")),
            }
        }
        if !saw_init {
            return Err(self.err_at(&format!("component `{}` has no init section", comp.name)));
        }
        Ok(comp)
    }

    fn model(&mut self) -> Result<RawModel, ModelError> {
        let mut raw = RawModel {
            components: Vec::new(),
            controllable: Vec::new(),
            composition: Vec::new(),
        };
        while let Some(tok) = self.peek() {
            match tok {
                Tok::Ident(kw) => match kw.as_str() {
                    "component" => {
                        self.pos += 1;
                        let comp = self.component()?;
                        raw.components.push(comp);
                    }
                    "controllable" => {
                        self.pos += 1;
                        self.expect(&Tok::Colon, "`:`")?;
                        raw.controllable.extend(self.ident_list()?);
                    }
                    "compose" => {
                        self.pos += 1;
                        self.expect(&Tok::Colon, "`:`")?;
                        raw.composition.push(self.ident("component name")?);
                        loop {
                            match self.peek() {
                                Some(Tok::Parallel) => {
                                    self.pos += 1;
                                    raw.composition.push(self.ident("component name")?);
                                }
                                Some(Tok::Semi) => {
                                    self.pos += 1;
                                    break;
                                }
                                _ => return Err(self.err_at("expected `||` or `;`")),
                            }
                        }
                    }
                    other => {
                        return Err(self.err_at(&format!(
                            "expected `component`, `controllable`, or `compose`, found `{other}`"
                        )))
                    }
                },
                _ => return Err(self.err_at("expected a top-level declaration")),
            }
        }
        Ok(raw)
    }
}

/// Parse the textual format down to an unresolved [`RawModel`].
pub fn parse_raw(text: &str) -> Result<RawModel, ModelError> {
    let mut lexer = Lexer::new(text);
    let mut toks = Vec::new();
    while let Some(t) = lexer.next_tok()? {
        toks.push(t);
    }
    Parser { toks, pos: 0 }.model()
}

/// Parse and resolve a composite model.
pub fn parse_model(text: &str) -> Result<CompositeModel, ModelError> {
    CompositeModel::from_raw(&parse_raw(text)?)
}

/// Canonical text for a model; reparses to a structurally equal model.
pub fn serialize_model(model: &CompositeModel) -> String {
    let mut out = String::new();
    let controllable: Vec<&str> = model
        .labels
        .iter()
        .zip(&model.controllable)
        .filter(|(_, &c)| c)
        .map(|(l, _)| l.as_str())
        .collect();
    out.push_str("controllable:");
    for l in &controllable {
        out.push(' ');
        out.push_str(l);
    }
    out.push_str(";\n\n");
    for comp in &model.components {
        out.push_str(&format!("component {} {{\n", comp.name));
        out.push_str("  states:");
        for s in &comp.state_names {
            out.push(' ');
            out.push_str(s);
        }
        out.push_str(";\n");
        out.push_str(&format!("  init: {};\n", comp.state_names[comp.initial as usize]));
        out.push_str("  marked:");
        for (i, s) in comp.state_names.iter().enumerate() {
            if comp.marked[i] {
                out.push(' ');
                out.push_str(s);
            }
        }
        out.push_str(";\n");
        for (src, row) in comp.transitions.iter().enumerate() {
            for &(label, dst) in row {
                out.push_str(&format!(
                    "  trans: {} -{}-> {};\n",
                    comp.state_names[src],
                    model.label(label),
                    comp.state_names[dst as usize]
                ));
            }
        }
        out.push_str("}\n\n");
    }
    out.push_str("compose: ");
    let names: Vec<&str> = model.components.iter().map(|c| c.name.as_str()).collect();
    out.push_str(&names.join(" || "));
    out.push_str(";\n");
    out
}
