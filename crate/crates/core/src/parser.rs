//! Plain-text `.crn` network format.
//!
//! One statement per line, `#` starts a comment:
//!
//! ```text
//! reaction-line := [name ':'] side ('->' | '<->') side '@' rate-list
//! side          := term ('+' term)* | '0'
//! term          := [integer] identifier | '[' identifier ']'
//! rate-list     := number [',' number]
//! init-line     := 'init' identifier '=' number
//! io-line       := 'input' identifier | 'output' identifier
//! ```
//!
//! Bracketed identifiers are promoters; the literal `0` denotes an empty
//! side. Species are declared implicitly on first mention; unnamed reactions
//! get `R1`, `R2`, ... in file order.

use std::collections::BTreeMap;
use std::fmt;

use crate::model::{ModelError, Network, Reaction, Species};

/// A parsed `.crn` file: the network plus optional input/output designations
/// and source spans for diagnostics.
#[derive(Debug, Clone)]
pub struct NetworkDocument {
    pub network: Network,
    pub declared_input: Option<String>,
    pub declared_output: Option<String>,
    /// (line, column) of each reaction, indexed by reaction id (1-based)
    pub reaction_spans: Vec<(usize, usize)>,
    /// (line, column) of each species' first mention, indexed by species id
    pub species_spans: Vec<(usize, usize)>,
}

impl PartialEq for NetworkDocument {
    /// Structural equality; spans are diagnostics only.
    fn eq(&self, other: &Self) -> bool {
        self.network == other.network
            && self.declared_input == other.declared_input
            && self.declared_output == other.declared_output
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

struct LineCursor<'a> {
    text: &'a str,
    line: usize,
    /// byte offset of the line start within the full source, for columns
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl<'a> LineCursor<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        LineCursor {
            text,
            line,
            chars: text.char_indices().collect(),
            pos: 0,
        }
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column(),
            message: message.into(),
        }
    }

    fn eat(&mut self, expected: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == expected => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected `{expected}`"))),
        }
    }

    /// Consume `[A-Za-z_][A-Za-z0-9_]*`.
    fn identifier(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return Err(self.err("expected an identifier")),
        }
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        let lo = self.chars[start].0;
        let hi = self
            .chars
            .get(self.pos)
            .map_or(self.text.len(), |&(o, _)| o);
        Ok(self.text[lo..hi].to_string())
    }

    fn integer(&mut self) -> Result<u32, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an integer"));
        }
        let lo = self.chars[start].0;
        let hi = self
            .chars
            .get(self.pos)
            .map_or(self.text.len(), |&(o, _)| o);
        self.text[lo..hi]
            .parse()
            .map_err(|_| self.err("stoichiometric coefficient out of range"))
    }

    /// Consume a decimal number (`.` is the only decimal separator).
    fn number(&mut self) -> Result<f64, ParseError> {
        let start = self.pos;
        if matches!(self.peek(), Some('+') | Some('-')) {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.peek() == Some('.') {
            self.pos += 1;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        if matches!(self.peek(), Some('e') | Some('E')) {
            self.pos += 1;
            if matches!(self.peek(), Some('+') | Some('-')) {
                self.pos += 1;
            }
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        let lo = self.chars[start].0;
        let hi = self
            .chars
            .get(self.pos)
            .map_or(self.text.len(), |&(o, _)| o);
        self.text[lo..hi].parse().map_err(|_| {
            ParseError {
                line: self.line,
                column: start + 1,
                message: format!("invalid number `{}`", &self.text[lo..hi]),
            }
        })
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.peek().is_none()
    }
}

#[derive(Default)]
struct SideAst {
    /// (species name, coefficient, column)
    terms: Vec<(String, u32, usize)>,
    /// (species name, column)
    promoters: Vec<(String, usize)>,
}

struct ReactionAst {
    name: Option<String>,
    lhs: SideAst,
    rhs: SideAst,
    reversible: bool,
    rates: Vec<(f64, usize)>,
    span: (usize, usize),
}

fn parse_side(cur: &mut LineCursor) -> Result<SideAst, ParseError> {
    let mut side = SideAst::default();
    loop {
        cur.skip_ws();
        let col = cur.column();
        match cur.peek() {
            Some('[') => {
                cur.bump();
                cur.skip_ws();
                let name = cur.identifier()?;
                cur.skip_ws();
                cur.eat(']')?;
                side.promoters.push((name, col));
            }
            Some('0') => {
                // the literal 0 stands for the empty side
                cur.bump();
            }
            Some(c) if c.is_ascii_digit() => {
                let coeff = cur.integer()?;
                cur.skip_ws();
                let name = cur.identifier()?;
                side.terms.push((name, coeff, col));
            }
            _ => {
                let name = cur.identifier()?;
                side.terms.push((name, 1, col));
            }
        }
        cur.skip_ws();
        if cur.peek() == Some('+') {
            cur.bump();
        } else {
            return Ok(side);
        }
    }
}

fn parse_reaction_line(
    line: &str,
    lineno: usize,
    default_name: &str,
) -> Result<ReactionAst, ParseError> {
    let mut cur = LineCursor::new(line, lineno);
    cur.skip_ws();
    let span = (lineno, cur.column());

    // optional `name :` prefix — a colon before the arrow
    let arrow_pos = line.find("->").unwrap_or(line.len());
    let name = match line[..arrow_pos].find(':') {
        Some(_) => {
            let mut prefix = LineCursor::new(line, lineno);
            prefix.skip_ws();
            let name = prefix.identifier()?;
            prefix.skip_ws();
            prefix.eat(':')?;
            cur.pos = prefix.pos;
            Some(name)
        }
        None => None,
    };

    let lhs = parse_side(&mut cur)?;
    cur.skip_ws();
    let reversible = if cur.peek() == Some('<') {
        cur.bump();
        cur.eat('-')?;
        cur.eat('>')?;
        true
    } else {
        cur.eat('-')?;
        cur.eat('>')?;
        false
    };
    let rhs = parse_side(&mut cur)?;
    cur.skip_ws();
    cur.eat('@')
        .map_err(|e| ParseError {
            message: "expected `@` followed by rate constants".into(),
            ..e
        })?;
    let mut rates = Vec::new();
    loop {
        cur.skip_ws();
        let col = cur.column();
        let value = cur.number()?;
        rates.push((value, col));
        cur.skip_ws();
        if cur.peek() == Some(',') {
            cur.bump();
        } else {
            break;
        }
    }
    if !cur.at_end() {
        return Err(cur.err("unexpected trailing input"));
    }
    Ok(ReactionAst {
        name: Some(name.unwrap_or_else(|| default_name.to_string())),
        lhs,
        rhs,
        reversible,
        rates,
        span,
    })
}

/// Parse a `.crn` document.
pub fn parse(text: &str) -> Result<NetworkDocument, ParseError> {
    let mut species_names: Vec<String> = Vec::new();
    let mut species_spans: Vec<(usize, usize)> = Vec::new();
    let mut reactions: Vec<Reaction> = Vec::new();
    let mut reaction_spans: Vec<(usize, usize)> = Vec::new();
    let mut inits: BTreeMap<usize, (f64, usize, usize)> = BTreeMap::new();
    let mut declared_input: Option<(String, usize, usize)> = None;
    let mut declared_output: Option<(String, usize, usize)> = None;
    let mut pending: Vec<ReactionAst> = Vec::new();

    let intern = |name: String,
                      span: (usize, usize),
                      species_names: &mut Vec<String>,
                      species_spans: &mut Vec<(usize, usize)>|
     -> usize {
        match species_names.iter().position(|n| *n == name) {
            Some(id) => id,
            None => {
                species_names.push(name);
                species_spans.push(span);
                species_names.len() - 1
            }
        }
    };

    for (idx, raw_line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw_line.find('#') {
            Some(p) => &raw_line[..p],
            None => raw_line,
        };
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }

        let mut cur = LineCursor::new(line, lineno);
        cur.skip_ws();
        // keyword lines vs reaction lines: peek the first word
        let mut probe = LineCursor::new(line, lineno);
        probe.skip_ws();
        let first_word = probe.identifier().ok();
        probe.skip_ws();
        let keyword = match first_word.as_deref() {
            Some(w @ ("init" | "input" | "output"))
                if !matches!(probe.peek(), Some(':')) =>
            {
                Some(w.to_string())
            }
            _ => None,
        };

        match keyword.as_deref() {
            Some("init") => {
                cur.pos = probe.pos;
                cur.skip_ws();
                let col = cur.column();
                let name = cur.identifier()?;
                cur.skip_ws();
                cur.eat('=')?;
                cur.skip_ws();
                let value = cur.number()?;
                if !cur.at_end() {
                    return Err(cur.err("unexpected trailing input"));
                }
                if value < 0.0 || !value.is_finite() {
                    return Err(ParseError {
                        line: lineno,
                        column: col,
                        message: format!("initial concentration of `{name}` must be non-negative"),
                    });
                }
                let Some(id) = species_names.iter().position(|n| *n == name) else {
                    return Err(ParseError {
                        line: lineno,
                        column: col,
                        message: format!("unknown species `{name}` in init line"),
                    });
                };
                if inits.insert(id, (value, lineno, col)).is_some() {
                    return Err(ParseError {
                        line: lineno,
                        column: col,
                        message: format!("duplicate init for species `{name}`"),
                    });
                }
            }
            Some(io @ ("input" | "output")) => {
                cur.pos = probe.pos;
                cur.skip_ws();
                let col = cur.column();
                let name = cur.identifier()?;
                if !cur.at_end() {
                    return Err(cur.err("unexpected trailing input"));
                }
                if species_names.iter().all(|n| *n != name) {
                    return Err(ParseError {
                        line: lineno,
                        column: col,
                        message: format!("unknown species `{name}` in {io} line"),
                    });
                }
                let slot = if io == "input" {
                    &mut declared_input
                } else {
                    &mut declared_output
                };
                *slot = Some((name, lineno, col));
            }
            _ => {
                let default_name = format!("R{}", pending.len() + 1);
                let ast = parse_reaction_line(line, lineno, &default_name)?;
                // intern species in order of appearance
                for (name, _, col) in ast.lhs.terms.iter().chain(&ast.rhs.terms) {
                    intern(
                        name.clone(),
                        (lineno, *col),
                        &mut species_names,
                        &mut species_spans,
                    );
                }
                for (name, col) in ast.lhs.promoters.iter().chain(&ast.rhs.promoters) {
                    intern(
                        name.clone(),
                        (lineno, *col),
                        &mut species_names,
                        &mut species_spans,
                    );
                }
                pending.push(ast);
            }
        }
    }

    for (id, ast) in pending.into_iter().enumerate() {
        let (lineno, col) = ast.span;
        let rate_err = |msg: String, col: usize| ParseError {
            line: lineno,
            column: col,
            message: msg,
        };
        let name = ast.name.clone().unwrap();
        if ast.reversible && ast.rates.len() != 2 {
            return Err(rate_err(
                format!("reversible reaction `{name}` needs exactly two rate constants"),
                ast.rates.first().map_or(col, |&(_, c)| c),
            ));
        }
        if !ast.reversible && ast.rates.len() != 1 {
            return Err(rate_err(
                format!("irreversible reaction `{name}` takes exactly one rate constant"),
                ast.rates.get(1).map_or(col, |&(_, c)| c),
            ));
        }
        for &(k, kcol) in &ast.rates {
            if k <= 0.0 || !k.is_finite() {
                return Err(rate_err(
                    format!("rate constant of `{name}` must be positive"),
                    kcol,
                ));
            }
        }
        let mut reactants: BTreeMap<usize, u32> = BTreeMap::new();
        let mut products: BTreeMap<usize, u32> = BTreeMap::new();
        let mut promoters = std::collections::BTreeSet::new();
        let resolve = |n: &str| species_names.iter().position(|x| x == n).unwrap();
        for (n, coeff, _) in &ast.lhs.terms {
            *reactants.entry(resolve(n)).or_insert(0) += coeff;
        }
        for (n, coeff, _) in &ast.rhs.terms {
            *products.entry(resolve(n)).or_insert(0) += coeff;
        }
        for (n, _) in ast.lhs.promoters.iter().chain(&ast.rhs.promoters) {
            promoters.insert(resolve(n));
        }
        reactions.push(Reaction {
            id,
            name,
            reactants,
            products,
            promoters,
            reversible: ast.reversible,
            k_fwd: ast.rates[0].0,
            k_bwd: ast.rates.get(1).map(|&(k, _)| k),
        });
        reaction_spans.push((lineno, col));
    }

    let initial: Vec<f64> = (0..species_names.len())
        .map(|id| inits.get(&id).map_or(0.0, |&(v, _, _)| v))
        .collect();
    let species: Vec<Species> = species_names
        .iter()
        .enumerate()
        .map(|(id, name)| Species {
            id,
            name: name.clone(),
        })
        .collect();

    let reaction_names: Vec<String> = reactions.iter().map(|r| r.name.clone()).collect();
    let network = Network::new(species, reactions, initial).map_err(|e| {
        let span = match &e {
            ModelError::CatalystBothSides { reaction, .. }
            | ModelError::ReversibleBothSides { reaction, .. }
            | ModelError::RateSignAssumption { reaction, .. }
            | ModelError::PromoterOverlap { reaction, .. } => reaction_names
                .iter()
                .position(|n| n == reaction)
                .map(|i| reaction_spans[i])
                .unwrap_or((1, 1)),
            _ => (1, 1),
        };
        ParseError {
            line: span.0,
            column: span.1,
            message: e.to_string(),
        }
    })?;

    if let (Some((i, _, _)), Some((o, line, col))) = (&declared_input, &declared_output) {
        if i == o {
            return Err(ParseError {
                line: *line,
                column: *col,
                message: format!("input and output must be distinct species (both `{i}`)"),
            });
        }
    }

    Ok(NetworkDocument {
        network,
        declared_input: declared_input.map(|(n, _, _)| n),
        declared_output: declared_output.map(|(n, _, _)| n),
        reaction_spans,
        species_spans,
    })
}

/// Render a document in canonical form: reactions in id order, terms in
/// species-id order, promoters bracketed on the reactant side, then init
/// lines for every species and the io lines.
pub fn serialize(doc: &NetworkDocument) -> String {
    let net = &doc.network;
    let mut out = String::new();
    for rx in &net.reactions {
        let mut lhs: Vec<String> = rx
            .reactants
            .iter()
            .map(|(&j, &c)| term(&net.species[j].name, c))
            .collect();
        lhs.extend(
            rx.promoters
                .iter()
                .map(|&j| format!("[{}]", net.species[j].name)),
        );
        let rhs: Vec<String> = rx
            .products
            .iter()
            .map(|(&j, &c)| term(&net.species[j].name, c))
            .collect();
        let lhs = if lhs.is_empty() { "0".to_string() } else { lhs.join(" + ") };
        let rhs = if rhs.is_empty() { "0".to_string() } else { rhs.join(" + ") };
        let arrow = if rx.reversible { "<->" } else { "->" };
        let rates = match rx.k_bwd {
            Some(kb) => format!("{}, {}", rx.k_fwd, kb),
            None => format!("{}", rx.k_fwd),
        };
        out.push_str(&format!("{}: {} {} {} @ {}\n", rx.name, lhs, arrow, rhs, rates));
    }
    for sp in &net.species {
        out.push_str(&format!("init {} = {}\n", sp.name, net.initial[sp.id]));
    }
    if let Some(i) = &doc.declared_input {
        out.push_str(&format!("input {i}\n"));
    }
    if let Some(o) = &doc.declared_output {
        out.push_str(&format!("output {o}\n"));
    }
    out
}

fn term(name: &str, coeff: u32) -> String {
    if coeff == 1 {
        name.to_string()
    } else {
        format!("{coeff}{name}")
    }
}
