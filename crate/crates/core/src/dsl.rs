//! The `.mdag` text format.
//!
//! ```text
//! document  := 'dag' STRING '{' statement* '}'
//! statement := node | edge | analysis
//! node      := 'node' IDENT '{' 'status' ':' STATUS (',' 'role' ':' ROLE)? '}'
//! edge      := endpoint '->' endpoint ';'?
//! endpoint  := IDENT | 'R' '[' IDENT ']' | 'M' '[' IDENT ']'
//! analysis  := 'target' ':' IDENT '~' IDENT ('+' IDENT)* (';' 'auxiliary' ':' IDENT (',' IDENT)*)? ';'?
//! ```
//!
//! `#` starts a comment that runs to the end of the line. `M[V]` is accepted
//! as a spelling of `R[V]`: both name the same response indicator, only the
//! coding of its values differs (`M = 1 - R`). Variables must be declared with
//! `node` before any edge or target line mentions them.

use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{AnalysisSpec, BuildError, Culprit, Endpoint, MDag, Role, Status, VariableDecl};

/// 1-based position in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: Pos,
    pub end: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    /// The offending token as written, or empty at end of input.
    pub token: String,
}

impl ParseError {
    fn at(pos: Pos, message: impl Into<String>, token: impl Into<String>) -> Self {
        ParseError { line: pos.line, column: pos.column, message: message.into(), token: token.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Str(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Colon,
    Comma,
    Semi,
    Arrow,
    Tilde,
    Plus,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => f.write_str(s),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::LBrace => f.write_str("{"),
            Tok::RBrace => f.write_str("}"),
            Tok::LBracket => f.write_str("["),
            Tok::RBracket => f.write_str("]"),
            Tok::Colon => f.write_str(":"),
            Tok::Comma => f.write_str(","),
            Tok::Semi => f.write_str(";"),
            Tok::Arrow => f.write_str("->"),
            Tok::Tilde => f.write_str("~"),
            Tok::Plus => f.write_str("+"),
            Tok::Eof => Ok(()),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    start: Pos,
    end: Pos,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut pos = Pos { line: 1, column: 1 };

    fn bump(chars: &mut std::iter::Peekable<std::str::Chars<'_>>, pos: &mut Pos) -> Option<char> {
        let c = chars.next()?;
        if c == '\n' {
            pos.line += 1;
            pos.column = 1;
        } else {
            pos.column += 1;
        }
        Some(c)
    }

    while let Some(&c) = chars.peek() {
        let start = pos;
        if c.is_whitespace() {
            bump(&mut chars, &mut pos);
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                bump(&mut chars, &mut pos);
            }
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(c);
                    bump(&mut chars, &mut pos);
                } else {
                    break;
                }
            }
            Tok::Ident(s)
        } else if c == '"' {
            bump(&mut chars, &mut pos);
            let mut s = String::new();
            loop {
                match bump(&mut chars, &mut pos) {
                    None | Some('\n') => return Err(ParseError::at(start, "unterminated string", format!("\"{s}"))),
                    Some('"') => break,
                    Some('\\') => match bump(&mut chars, &mut pos) {
                        Some(e @ ('"' | '\\')) => s.push(e),
                        Some('n') => s.push('\n'),
                        other => {
                            let esc = other.map(String::from).unwrap_or_default();
                            return Err(ParseError::at(start, "invalid escape in string", format!("\\{esc}")));
                        }
                    },
                    Some(c) => s.push(c),
                }
            }
            Tok::Str(s)
        } else {
            bump(&mut chars, &mut pos);
            match c {
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                ':' => Tok::Colon,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                '~' => Tok::Tilde,
                '+' => Tok::Plus,
                '-' if chars.peek() == Some(&'>') => {
                    bump(&mut chars, &mut pos);
                    Tok::Arrow
                }
                other => return Err(ParseError::at(start, "unexpected character", other.to_string())),
            }
        };
        out.push(Token { tok, start, end: pos });
    }
    out.push(Token { tok: Tok::Eof, start: pos, end: pos });
    Ok(out)
}

/// A name as written, with its position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Name {
    pub text: String,
    pub pos: Pos,
}

/// An edge endpoint as written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndpointSyntax {
    pub endpoint: Endpoint,
    /// True for the `M[V]` spelling.
    pub missingness_form: bool,
    pub pos: Pos,
    /// Position of the variable name inside the endpoint.
    pub name_pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Node { name: Name, status: Status, role: Option<Role> },
    Edge { from: EndpointSyntax, to: EndpointSyntax },
    Analysis { outcome: Name, exposure: Name, covariates: Vec<Name>, auxiliaries: Vec<Name> },
}

/// A parsed document before graph validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DagDocument {
    pub name: String,
    pub statements: Vec<(Statement, Span)>,
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn peek_n(&self, n: usize) -> &Tok {
        &self.toks[(self.at + n).min(self.toks.len() - 1)].tok
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn last_end(&self) -> Pos {
        self.toks[self.at.saturating_sub(1)].end
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let t = self.peek();
        let found = match &t.tok {
            Tok::Eof => "end of input".to_string(),
            other => format!("`{other}`"),
        };
        ParseError::at(t.start, format!("expected {expected}, found {found}"), t.tok.to_string())
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Token, ParseError> {
        if self.peek().tok == tok {
            Ok(self.next())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<Token, ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) if s == kw => Ok(self.next()),
            _ => Err(self.unexpected(&format!("`{kw}`"))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<Name, ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let name = Name { text: s.clone(), pos: self.peek().start };
                self.next();
                Ok(name)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn document(&mut self) -> Result<DagDocument, ParseError> {
        self.keyword("dag")?;
        let name = match &self.peek().tok {
            Tok::Str(s) => s.clone(),
            _ => return Err(self.unexpected("a quoted graph name")),
        };
        self.next();
        self.expect(Tok::LBrace, "`{`")?;
        let mut statements = Vec::new();
        loop {
            match &self.peek().tok {
                Tok::RBrace => {
                    self.next();
                    break;
                }
                Tok::Eof => return Err(self.unexpected("`}`")),
                _ => statements.push(self.statement()?),
            }
        }
        if self.peek().tok != Tok::Eof {
            return Err(self.unexpected("end of input"));
        }
        Ok(DagDocument { name, statements })
    }

    fn statement(&mut self) -> Result<(Statement, Span), ParseError> {
        let start = self.peek().start;
        let stmt = match (&self.peek().tok, self.peek_n(1), self.peek_n(2)) {
            (Tok::Ident(kw), Tok::Ident(_), Tok::LBrace) if kw == "node" => self.node()?,
            (Tok::Ident(kw), Tok::Colon, _) if kw == "target" => self.analysis()?,
            (Tok::Ident(_), _, _) => self.edge()?,
            _ => return Err(self.unexpected("a node, edge or target statement")),
        };
        Ok((stmt, Span { start, end: self.last_end() }))
    }

    fn node(&mut self) -> Result<Statement, ParseError> {
        self.keyword("node")?;
        let name = self.ident("a variable name")?;
        self.expect(Tok::LBrace, "`{`")?;
        self.keyword("status")?;
        self.expect(Tok::Colon, "`:`")?;
        let st = self.ident("a status")?;
        let status = match st.text.as_str() {
            "complete" => Status::Complete,
            "incomplete" => Status::Incomplete,
            "unmeasured" => Status::Unmeasured,
            other => {
                return Err(ParseError::at(
                    st.pos,
                    "unknown status; expected `complete`, `incomplete` or `unmeasured`",
                    other,
                ))
            }
        };
        let mut role = None;
        if self.peek().tok == Tok::Comma {
            self.next();
            self.keyword("role")?;
            self.expect(Tok::Colon, "`:`")?;
            let r = self.ident("a role")?;
            role = Some(match r.text.as_str() {
                "exposure" => Role::Exposure,
                "outcome" => Role::Outcome,
                "covariate" => Role::Covariate,
                "auxiliary" => Role::Auxiliary,
                "other" => Role::Other,
                other => {
                    return Err(ParseError::at(
                        r.pos,
                        "unknown role; expected `exposure`, `outcome`, `covariate`, `auxiliary` or `other`",
                        other,
                    ))
                }
            });
        }
        self.expect(Tok::RBrace, "`}`")?;
        Ok(Statement::Node { name, status, role })
    }

    fn endpoint(&mut self) -> Result<EndpointSyntax, ParseError> {
        let pos = self.peek().start;
        let head = self.ident("a variable or `R[...]`")?;
        if self.peek().tok == Tok::LBracket {
            let missingness_form = match head.text.as_str() {
                "R" => false,
                "M" => true,
                other => return Err(ParseError::at(pos, "indicators are written `R[V]` or `M[V]`", other)),
            };
            self.next();
            let owner = self.ident("a variable name")?;
            self.expect(Tok::RBracket, "`]`")?;
            Ok(EndpointSyntax { endpoint: Endpoint::Indicator(owner.text), missingness_form, pos, name_pos: owner.pos })
        } else {
            Ok(EndpointSyntax { endpoint: Endpoint::Variable(head.text), missingness_form: false, pos, name_pos: pos })
        }
    }

    fn edge(&mut self) -> Result<Statement, ParseError> {
        let from = self.endpoint()?;
        self.expect(Tok::Arrow, "`->`")?;
        let to = self.endpoint()?;
        if self.peek().tok == Tok::Semi {
            self.next();
        }
        Ok(Statement::Edge { from, to })
    }

    fn analysis(&mut self) -> Result<Statement, ParseError> {
        self.keyword("target")?;
        self.expect(Tok::Colon, "`:`")?;
        let outcome = self.ident("the outcome variable")?;
        self.expect(Tok::Tilde, "`~`")?;
        let exposure = self.ident("the exposure variable")?;
        let mut covariates = Vec::new();
        while self.peek().tok == Tok::Plus {
            self.next();
            covariates.push(self.ident("a covariate")?);
        }
        let mut auxiliaries = Vec::new();
        if self.peek().tok == Tok::Semi {
            self.next();
            if matches!(&self.peek().tok, Tok::Ident(s) if s == "auxiliary") && self.peek_n(1) == &Tok::Colon {
                self.next();
                self.next();
                auxiliaries.push(self.ident("an auxiliary variable")?);
                while self.peek().tok == Tok::Comma {
                    self.next();
                    auxiliaries.push(self.ident("an auxiliary variable")?);
                }
                if self.peek().tok == Tok::Semi {
                    self.next();
                }
            }
        }
        Ok(Statement::Analysis { outcome, exposure, covariates, auxiliaries })
    }
}

/// Parses the syntax of a document without building the graph.
pub fn parse_document(text: &str) -> Result<DagDocument, ParseError> {
    let toks = lex(text)?;
    Parser { toks, at: 0 }.document()
}

/// Parses and validates a document.
pub fn parse(text: &str) -> Result<MDag, ParseError> {
    parse_document(text)?.to_mdag()
}

impl DagDocument {
    /// Resolves names and builds the graph. Every error points at the
    /// statement (or name) responsible.
    pub fn to_mdag(&self) -> Result<MDag, ParseError> {
        let mut decls: Vec<VariableDecl> = Vec::new();
        let mut declared: std::collections::BTreeMap<&str, Pos> = Default::default();
        let mut edges = Vec::new();
        let mut analysis: Option<(AnalysisSpec, Span)> = None;
        let mut end = Pos { line: 1, column: 1 };

        let known = |declared: &std::collections::BTreeMap<&str, Pos>, name: &str, pos: Pos| {
            if declared.contains_key(name) {
                Ok(())
            } else {
                Err(ParseError::at(pos, format!("unknown variable `{name}` (declare it with `node` first)"), name))
            }
        };

        for (stmt, span) in &self.statements {
            end = span.end;
            match stmt {
                Statement::Node { name, status, role } => {
                    if declared.insert(name.text.as_str(), name.pos).is_some() {
                        return Err(ParseError::at(name.pos, format!("duplicate variable `{}`", name.text), &name.text));
                    }
                    decls.push(VariableDecl { name: name.text.clone(), status: *status, role: *role });
                }
                Statement::Edge { from, to } => {
                    for e in [from, to] {
                        known(&declared, e.endpoint.name(), e.name_pos)?;
                    }
                    edges.push((from.endpoint.clone(), to.endpoint.clone()));
                }
                Statement::Analysis { outcome, exposure, covariates, auxiliaries } => {
                    if analysis.is_some() {
                        return Err(ParseError::at(span.start, "duplicate target statement", "target"));
                    }
                    for n in std::iter::once(outcome).chain([exposure]).chain(covariates).chain(auxiliaries) {
                        known(&declared, &n.text, n.pos)?;
                    }
                    let spec = AnalysisSpec {
                        exposure: exposure.text.clone(),
                        outcome: outcome.text.clone(),
                        covariates: covariates.iter().map(|n| n.text.clone()).collect(),
                        auxiliaries: auxiliaries.iter().map(|n| n.text.clone()).collect(),
                    };
                    analysis = Some((spec, *span));
                }
            }
        }
        let Some((spec, analysis_span)) = analysis else {
            return Err(ParseError::at(end, "missing `target:` statement", ""));
        };

        MDag::build(self.name.clone(), decls, edges, spec).map_err(|e| self.locate(e, analysis_span))
    }

    fn locate(&self, err: BuildError, analysis_span: Span) -> ParseError {
        let message = err.to_string();
        let (pos, token) = match err.culprit() {
            Culprit::Analysis => (analysis_span.start, "target".to_string()),
            Culprit::Variable(v) => self
                .statements
                .iter()
                .find_map(|(s, _)| match s {
                    Statement::Node { name, .. } if name.text == v => Some((name.pos, v.clone())),
                    _ => None,
                })
                .or_else(|| self.first_edge_touching_indicator(&v))
                .unwrap_or((analysis_span.start, v)),
            Culprit::Edge(a, b) => self
                .statements
                .iter()
                .find_map(|(s, span)| match s {
                    Statement::Edge { from, to } if from.endpoint == a && to.endpoint == b => {
                        Some((span.start, format!("{} -> {}", from.endpoint, to.endpoint)))
                    }
                    _ => None,
                })
                .unwrap_or((analysis_span.start, String::new())),
        };
        // indicator errors are best reported at the edge that mentions R[v]
        let (pos, token) = match &err {
            BuildError::IndicatorOfComplete(v) | BuildError::IndicatorOfUnmeasured(v) => {
                self.first_edge_touching_indicator(v).unwrap_or((pos, token))
            }
            _ => (pos, token),
        };
        ParseError::at(pos, message, token)
    }

    fn first_edge_touching_indicator(&self, owner: &str) -> Option<(Pos, String)> {
        self.statements.iter().find_map(|(s, _)| match s {
            Statement::Edge { from, to } => [from, to]
                .into_iter()
                .find(|e| e.endpoint == Endpoint::Indicator(owner.to_string()))
                .map(|e| (e.pos, e.endpoint.to_string())),
            _ => None,
        })
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Canonical text for a graph: nodes sorted by name, then edges sorted by
/// their written form, then the target line. Output uses LF line endings.
pub fn serialize(g: &MDag) -> String {
    let (vars, edges, analysis) = g.declarations();
    let mut out = String::new();
    let _ = writeln!(out, "dag {} {{", quote(g.name()));
    for v in &vars {
        let role = v.role.expect("declarations carry roles");
        let _ = writeln!(out, "  node {} {{ status: {}, role: {} }}", v.name, v.status, role);
    }
    let mut lines: Vec<(String, String)> = edges.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    lines.sort();
    for (a, b) in lines {
        let _ = writeln!(out, "  {a} -> {b};");
    }
    let mut rhs = analysis.exposure.clone();
    for c in &analysis.covariates {
        rhs.push_str(" + ");
        rhs.push_str(c);
    }
    let _ = write!(out, "  target: {} ~ {rhs}", analysis.outcome);
    if !analysis.auxiliaries.is_empty() {
        let _ = write!(out, "; auxiliary: {}", analysis.auxiliaries.join(", "));
    }
    out.push('\n');
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG3B: &str = "# Fig 3B\r\ndag \"fig3b\" {\r\n  node X { status: incomplete }\r\n  node Y { status: incomplete }\r\n  X -> Y\r\n  Y -> R[X];\r\n  target: Y ~ X\r\n}\r\n";

    #[test]
    fn parses_crlf_document() {
        let g = parse(FIG3B).unwrap();
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(g.resolve("Y").unwrap(), g.resolve("R[X]").unwrap()));
    }

    #[test]
    fn undeclared_target_names() {
        let err = parse("dag \"t\" { target: Y ~ X }").unwrap_err();
        assert!(err.message.starts_with("unknown variable `Y`"), "{err}");
        assert_eq!((err.line, err.column), (1, 19));
        assert_eq!(err.token, "Y");
    }

    #[test]
    fn m_spelling_is_r() {
        let r = parse(
            "dag \"t\" { node X { status: complete } node Z2 { status: incomplete } node Y { status: complete }
             Z2 -> Y; X -> R[Z2]; target: Y ~ X + Z2 }",
        )
        .unwrap();
        let m = parse(
            "dag \"t\" { node X { status: complete } node Z2 { status: incomplete } node Y { status: complete }
             Z2 -> Y; X -> M[Z2]; target: Y ~ X + Z2 }",
        )
        .unwrap();
        assert_eq!(r, m);
    }

    #[test]
    fn positions_of_syntax_errors() {
        let err = parse("dag \"t\" {\n  node X { status: sometimes }\n}").unwrap_err();
        assert_eq!((err.line, err.column), (2, 20));
        assert_eq!(err.token, "sometimes");

        let err = parse("dag \"t\" {\n  X => Y\n}").unwrap_err();
        assert_eq!((err.line, err.column), (2, 5));

        let err = parse("dag \"t\" {").unwrap_err();
        assert!(err.message.contains("end of input"));
        assert_eq!(err.token, "");

        let err = parse("dag \"unterminated").unwrap_err();
        assert_eq!(err.message, "unterminated string");
    }

    #[test]
    fn build_errors_point_at_statement() {
        let src = "dag \"t\" {\n  node X { status: incomplete }\n  node Y { status: incomplete }\n  X -> Y\n  Y -> X\n  target: Y ~ X\n}";
        let err = parse(src).unwrap_err();
        assert!(err.message.starts_with("cycle detected"), "{err}");
        assert_eq!(err.line, 4);

        let src = "dag \"t\" {\n  node X { status: complete }\n  node Y { status: incomplete }\n  Y -> R[X]\n  target: Y ~ X\n}";
        let err = parse(src).unwrap_err();
        assert_eq!((err.line, err.column), (4, 8));

        let src = "dag \"t\" {\n  node X { status: complete, role: covariate }\n  node Y { status: incomplete }\n  target: Y ~ X\n}";
        let err = parse(src).unwrap_err();
        assert_eq!((err.line, err.column), (2, 8));
    }

    #[test]
    fn statement_count_rules() {
        let err = parse("dag \"t\" { node X { status: complete } }").unwrap_err();
        assert!(err.message.contains("missing `target:`"));
        let err = parse(
            "dag \"t\" { node X { status: complete } node Y { status: complete } target: Y ~ X target: Y ~ X }",
        )
        .unwrap_err();
        assert_eq!(err.message, "duplicate target statement");
        let err = parse("dag \"t\" { node X { status: complete } node X { status: complete } target: X ~ X }")
            .unwrap_err();
        assert_eq!(err.message, "duplicate variable `X`");
        let err = parse("dag \"t\" { node X { status: complete } node Y { status: complete } target: Y ~ X } extra")
            .unwrap_err();
        assert!(err.message.contains("expected end of input"));
    }

    #[test]
    fn auxiliaries_and_optional_semicolons() {
        let g = parse(
            "dag \"s1\" {
               node A { status: incomplete } node X { status: complete } node Y { status: incomplete }
               X -> Y; A -> Y; X -> R[Y]; A -> R[A]
               target: Y ~ X; auxiliary: A;
             }",
        )
        .unwrap();
        assert_eq!(g.auxiliaries(), [g.resolve("A").unwrap()]);
        let g = parse("dag \"t\" { node X { status: complete } node Y { status: complete } target: Y ~ X; }").unwrap();
        assert!(g.auxiliaries().is_empty());
    }

    #[test]
    fn serializer_is_canonical() {
        let g = parse(
            "dag \"t\" { node Y { status: incomplete } node X { status: complete } X -> R[Y]; X -> Y; target: Y ~ X }",
        )
        .unwrap();
        assert_eq!(
            serialize(&g),
            "dag \"t\" {\n  node X { status: complete, role: exposure }\n  node Y { status: incomplete, role: outcome }\n  X -> R[Y];\n  X -> Y;\n  target: Y ~ X\n}\n"
        );
        assert_eq!(parse(&serialize(&g)).unwrap(), g);
    }

    #[test]
    fn empty_edge_graph() {
        let g = parse("dag \"e\" { node X { status: complete } node Y { status: complete } target: Y ~ X }").unwrap();
        let text = serialize(&g);
        assert!(!text.contains("->"));
        assert_eq!(text.lines().filter(|l| l.trim_start().starts_with("node")).count(), 2);
    }

    #[test]
    fn quoted_names_round_trip() {
        let g = parse("dag \"a \\\"b\\\" \\\\ c\" { node X { status: complete } node Y { status: complete } target: Y ~ X }")
            .unwrap();
        assert_eq!(g.name(), "a \"b\" \\ c");
        assert_eq!(parse(&serialize(&g)).unwrap(), g);
    }
}
