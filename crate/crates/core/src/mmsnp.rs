//! Primitive monotone monadic SNP sentences and their translation to and
//! from forbidden-patterns problems.
//!
//! Concrete syntax:
//!
//! ```text
//! sentence := "exists" [ident ("," ident)*] "." "forall" [ident ("," ident)*] "."
//!             [conjunct ("&" conjunct)*]
//! conjunct := "!(" item ("&" item)* ")"
//! item     := Rel(x, ...) | M(x) | !M(x) | M(Rel(x, ...)) | !M(Rel(x, ...))
//! ```
//!
//! Several sentences separated by the keyword `or` form a disjunction.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::patterns::Problem;
use crate::relstruct::{Colour, ColouredStructure, ElementId, Palettes, Signature, Structure};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub rel: String,
    pub args: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Literal {
    /// `M(x)` or `!M(x)`.
    Vertex {
        pred: String,
        var: String,
        positive: bool,
    },
    /// `M(R(x, ...))` or `!M(R(x, ...))`.
    Edge {
        pred: String,
        atom: Atom,
        positive: bool,
    },
}

impl Literal {
    pub fn pred(&self) -> &str {
        match self {
            Literal::Vertex { pred, .. } | Literal::Edge { pred, .. } => pred,
        }
    }

    pub fn positive(&self) -> bool {
        match self {
            Literal::Vertex { positive, .. } | Literal::Edge { positive, .. } => *positive,
        }
    }
}

/// `!(alpha & beta)`: positive atoms over the signature and literals over
/// the monadic predicates.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Conjunct {
    pub alpha: Vec<Atom>,
    pub beta: Vec<Literal>,
}

impl Conjunct {
    /// Variables in order of first occurrence.
    pub fn variables(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        let mut push = |v: &String| {
            if !out.contains(v) {
                out.push(v.clone());
            }
        };
        for a in &self.alpha {
            a.args.iter().for_each(&mut push);
        }
        for l in &self.beta {
            match l {
                Literal::Vertex { var, .. } => push(var),
                Literal::Edge { atom, .. } => atom.args.iter().for_each(&mut push),
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dialect {
    /// Monadic predicates over elements only.
    Mmsnp1,
    /// Monadic predicates may also hold of tuples.
    Mmsnp2,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Sentence {
    pub monadic: Vec<String>,
    pub variables: Vec<String>,
    pub conjuncts: Vec<Conjunct>,
}

impl Sentence {
    pub fn dialect(&self) -> Dialect {
        let edge = self
            .conjuncts
            .iter()
            .any(|c| c.beta.iter().any(|l| matches!(l, Literal::Edge { .. })));
        if edge {
            Dialect::Mmsnp2
        } else {
            Dialect::Mmsnp1
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.rel, self.args.join(","))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.positive() { "" } else { "!" };
        match self {
            Literal::Vertex { pred, var, .. } => write!(f, "{sign}{pred}({var})"),
            Literal::Edge { pred, atom, .. } => write!(f, "{sign}{pred}({atom})"),
        }
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "exists {} . forall {} .",
            self.monadic.join(","),
            self.variables.join(",")
        )?;
        for (i, c) in self.conjuncts.iter().enumerate() {
            let items: Vec<String> = c
                .alpha
                .iter()
                .map(ToString::to_string)
                .chain(c.beta.iter().map(ToString::to_string))
                .collect();
            if i > 0 {
                write!(f, " &")?;
            }
            write!(f, " !({})", items.join(" & "))?;
        }
        Ok(())
    }
}

pub fn render(s: &Sentence) -> String {
    s.to_string()
}

// ---------------------------------------------------------------- parsing

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Amp,
    Bang,
    Eq,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let simple = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            '&' => Some(Tok::Amp),
            '!' | '¬' => Some(Tok::Bang),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(t) = simple {
            out.push(Token {
                tok: t,
                line: l0,
                col: c0,
            });
            i += 1;
            col += 1;
            continue;
        }
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(word),
                line: l0,
                col: c0,
            });
            continue;
        }
        return Err(Error::Parse {
            line,
            col,
            msg: format!("unexpected character `{c}`"),
        });
    }
    out.push(Token {
        tok: Tok::End,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let t = self.peek();
        Err(Error::Parse {
            line: t.line,
            col: t.col,
            msg: msg.into(),
        })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T> {
        if self.peek().tok == Tok::Eq {
            return self
                .err("equality is not allowed: the equality symbol may not occur in the sentence");
        }
        self.err(format!(
            "expected {wanted}, found {}",
            describe(&self.peek().tok)
        ))
    }

    fn expect(&mut self, t: Tok, wanted: &str) -> Result<()> {
        if self.peek().tok == t {
            self.pos += 1;
            Ok(())
        } else {
            self.unexpected(wanted)
        }
    }

    fn ident(&mut self) -> Result<String> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.unexpected("an identifier"),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        match &self.peek().tok {
            Tok::Ident(s) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => self.unexpected(&format!("`{kw}`")),
        }
    }

    /// Possibly empty comma-separated identifiers ending at `.`.
    fn list(&mut self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        if self.peek().tok == Tok::Dot {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            let name = self.ident()?;
            if out.contains(&name) {
                self.pos -= 1;
                return self.err(format!("`{name}` is declared twice"));
            }
            out.push(name);
            match self.peek().tok {
                Tok::Comma => self.pos += 1,
                Tok::Dot => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return self.unexpected("`,` or `.`"),
            }
        }
    }

    fn args(&mut self, vars: &[String]) -> Result<Vec<String>> {
        self.expect(Tok::LParen, "`(`")?;
        let mut out = Vec::new();
        loop {
            if matches!(self.peek_at(1), Tok::Eq) {
                self.pos += 1;
                return self.err(
                    "equality is not allowed: the equality symbol may not occur in the sentence",
                );
            }
            let v = self.ident()?;
            if !vars.contains(&v) {
                self.pos -= 1;
                return self.err(format!("variable `{v}` is not universally quantified"));
            }
            out.push(v);
            match self.peek().tok {
                Tok::Comma => self.pos += 1,
                Tok::RParen => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return self.unexpected("`,` or `)`"),
            }
        }
    }

    fn sentence(&mut self) -> Result<Sentence> {
        self.keyword("exists")?;
        let monadic = self.list()?;
        self.keyword("forall")?;
        let variables = self.list()?;
        for v in &variables {
            if monadic.contains(v) {
                return self.err(format!("`{v}` is both a predicate and a variable"));
            }
        }
        let mut conjuncts = Vec::new();
        if !self.at_sentence_end() {
            loop {
                conjuncts.push(self.conjunct(&monadic, &variables)?);
                if self.peek().tok == Tok::Amp {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        Ok(Sentence {
            monadic,
            variables,
            conjuncts,
        })
    }

    fn at_sentence_end(&self) -> bool {
        matches!(&self.peek().tok, Tok::End)
            || matches!(&self.peek().tok, Tok::Ident(s) if s == "or")
    }

    fn conjunct(&mut self, monadic: &[String], vars: &[String]) -> Result<Conjunct> {
        self.expect(Tok::Bang, "`!(`")?;
        self.expect(Tok::LParen, "`(` after `!`")?;
        let mut c = Conjunct::default();
        let mut edge_checks = Vec::new();
        loop {
            let start = self.pos;
            let negated = if self.peek().tok == Tok::Bang {
                self.pos += 1;
                true
            } else {
                false
            };
            if matches!(self.peek_at(1), Tok::Eq) {
                self.pos += 1;
                return self.err(
                    "equality is not allowed: the equality symbol may not occur in the sentence",
                );
            }
            let name = self.ident()?;
            if monadic.contains(&name) {
                self.expect(Tok::LParen, "`(`")?;
                let inner = self.ident()?;
                if self.peek().tok == Tok::LParen {
                    if monadic.contains(&inner) {
                        self.pos -= 1;
                        return self.err("monadic predicates cannot be nested");
                    }
                    let args = self.args(vars)?;
                    self.expect(Tok::RParen, "`)`")?;
                    let atom = Atom { rel: inner, args };
                    edge_checks.push((start, atom.clone()));
                    c.beta.push(Literal::Edge {
                        pred: name,
                        atom,
                        positive: !negated,
                    });
                } else {
                    if !vars.contains(&inner) {
                        self.pos -= 1;
                        return self
                            .err(format!("variable `{inner}` is not universally quantified"));
                    }
                    self.expect(Tok::RParen, "`)`")?;
                    c.beta.push(Literal::Vertex {
                        pred: name,
                        var: inner,
                        positive: !negated,
                    });
                }
            } else {
                if negated {
                    self.pos = start;
                    return self.err(format!(
                        "negated atom `{name}`: relation symbols may only occur positively (monotonicity)"
                    ));
                }
                let args = self.args(vars)?;
                c.alpha.push(Atom { rel: name, args });
            }
            match self.peek().tok {
                Tok::Amp => self.pos += 1,
                Tok::RParen => {
                    self.pos += 1;
                    break;
                }
                _ => return self.unexpected("`&` or `)`"),
            }
        }
        for (at, atom) in edge_checks {
            if !c.alpha.contains(&atom) {
                self.pos = at;
                return self.err(format!(
                    "literal over `{atom}` needs that atom in the same conjunct"
                ));
            }
        }
        Ok(c)
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Dot => "`.`".into(),
        Tok::Amp => "`&`".into(),
        Tok::Bang => "`!`".into(),
        Tok::Eq => "`=`".into(),
        Tok::End => "end of input".into(),
    }
}

pub fn parse(text: &str) -> Result<Sentence> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let s = p.sentence()?;
    if p.peek().tok != Tok::End {
        return p.unexpected("end of input");
    }
    check_arities(&s)?;
    Ok(s)
}

/// Sentences separated by `or`.
pub fn parse_disjunction(text: &str) -> Result<Vec<Sentence>> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let mut out = vec![p.sentence()?];
    while matches!(&p.peek().tok, Tok::Ident(s) if s == "or") {
        p.pos += 1;
        out.push(p.sentence()?);
    }
    if p.peek().tok != Tok::End {
        return p.unexpected("`or` or end of input");
    }
    for s in &out {
        check_arities(s)?;
    }
    Ok(out)
}

fn check_arities(s: &Sentence) -> Result<()> {
    infer_signature(s).map(|_| ())
}

/// Relation symbols used by the sentence, in name order.
pub fn infer_signature(s: &Sentence) -> Result<Arc<Signature>> {
    let mut symbols: Vec<(String, usize)> = Vec::new();
    for c in &s.conjuncts {
        for a in &c.alpha {
            match symbols.iter().find(|(n, _)| *n == a.rel) {
                Some((_, r)) if *r != a.args.len() => {
                    return Err(Error::InvalidSignature(format!(
                        "`{}` is used with arities {r} and {}",
                        a.rel,
                        a.args.len()
                    )))
                }
                Some(_) => {}
                None => symbols.push((a.rel.clone(), a.args.len())),
            }
        }
    }
    symbols.sort();
    Ok(Arc::new(Signature::new(symbols)?))
}

// ------------------------------------------------------------ primitivity

/// Checks the primitive normal form; the list names every violation.
pub fn is_primitive(s: &Sentence) -> (bool, Vec<String>) {
    let mut diags = Vec::new();
    for (i, c) in s.conjuncts.iter().enumerate() {
        let vars = c.variables();
        for v in &vars {
            for m in &s.monadic {
                let n = c
                    .beta
                    .iter()
                    .filter(
                        |l| matches!(l, Literal::Vertex { pred, var, .. } if pred == m && var == v),
                    )
                    .count();
                let signs: BTreeSet<bool> = c
                    .beta
                    .iter()
                    .filter_map(|l| match l {
                        Literal::Vertex {
                            pred,
                            var,
                            positive,
                        } if pred == m && var == v => Some(*positive),
                        _ => None,
                    })
                    .collect();
                if n == 0 {
                    diags.push(format!(
                        "conjunct {}: neither {m}({v}) nor !{m}({v}) occurs",
                        i + 1
                    ));
                } else if signs.len() > 1 {
                    diags.push(format!(
                        "conjunct {}: both {m}({v}) and !{m}({v}) occur",
                        i + 1
                    ));
                }
            }
        }
        if s.dialect() == Dialect::Mmsnp2 {
            let mut atoms: Vec<&Atom> = Vec::new();
            for a in &c.alpha {
                if !atoms.contains(&a) {
                    atoms.push(a);
                }
            }
            for a in atoms {
                for m in &s.monadic {
                    let signs: Vec<bool> = c
                        .beta
                        .iter()
                        .filter_map(|l| match l {
                            Literal::Edge {
                                pred,
                                atom,
                                positive,
                            } if pred == m && atom == a => Some(*positive),
                            _ => None,
                        })
                        .collect();
                    if signs.is_empty() {
                        diags.push(format!(
                            "conjunct {}: neither {m}({a}) nor !{m}({a}) occurs",
                            i + 1
                        ));
                    } else if signs.iter().any(|&x| x != signs[0]) {
                        diags.push(format!(
                            "conjunct {}: both {m}({a}) and !{m}({a}) occur",
                            i + 1
                        ));
                    }
                }
            }
        }
        if !alpha_connected(c, &vars) {
            diags.push(format!(
                "conjunct {}: the structure induced by its atoms is not connected",
                i + 1
            ));
        }
    }
    (diags.is_empty(), diags)
}

fn alpha_connected(c: &Conjunct, vars: &[String]) -> bool {
    if vars.len() <= 1 {
        return true;
    }
    let idx = |v: &String| vars.iter().position(|w| w == v).unwrap();
    let mut parent: Vec<usize> = (0..vars.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for a in &c.alpha {
        for w in a.args.windows(2) {
            let (x, y) = (find(&mut parent, idx(&w[0])), find(&mut parent, idx(&w[1])));
            parent[x] = y;
        }
    }
    let r = find(&mut parent, 0);
    (0..vars.len()).all(|x| find(&mut parent, x) == r)
}

// ------------------------------------------------------------ compilation

fn assignment_token(bits: usize, k: usize) -> String {
    (0..k)
        .map(|i| if bits >> i & 1 == 1 { '+' } else { '-' })
        .collect()
}

fn assignment_palette(k: usize) -> Vec<String> {
    if k == 0 {
        return vec![crate::relstruct::DEFAULT_COLOUR.to_string()];
    }
    (0..1usize << k).map(|b| assignment_token(b, k)).collect()
}

/// Compiles a primitive sentence. Colours are complete sign assignments to
/// the monadic predicates; predicate `i` is positive in colour `c` iff bit
/// `i` of `c` is set. Tuples get colours only in the second dialect.
pub fn sentence_to_problem(s: &Sentence, sig: Option<Arc<Signature>>) -> Result<Problem> {
    let (ok, diags) = is_primitive(s);
    if !ok {
        return Err(Error::Invalid(format!(
            "sentence is not primitive: {}",
            diags.join("; ")
        )));
    }
    let sig = match sig {
        Some(sig) => {
            let inferred = infer_signature(s)?;
            for sym in inferred.symbols() {
                match sig.index_of(&sym.name) {
                    Some(i) if sig.arity(i) == sym.arity => {}
                    _ => {
                        return Err(Error::SignatureMismatch(format!(
                            "`{}/{}` is not in the given signature",
                            sym.name, sym.arity
                        )))
                    }
                }
            }
            sig
        }
        None => infer_signature(s)?,
    };
    let k = s.monadic.len();
    let edge_k = if s.dialect() == Dialect::Mmsnp2 { k } else { 0 };
    let pal = Arc::new(Palettes::new(
        assignment_palette(k),
        assignment_palette(edge_k),
    )?);
    let bit = |m: &str| s.monadic.iter().position(|x| x == m).unwrap();
    let mut bodies = Vec::new();
    for c in &s.conjuncts {
        let vars = c.variables();
        let id = |v: &String| vars.iter().position(|w| w == v).unwrap() as ElementId;
        let mut b = Structure::builder(sig.clone(), vars.len());
        for a in &c.alpha {
            let t: Vec<ElementId> = a.args.iter().map(id).collect();
            b.add(sig.index_of(&a.rel).unwrap(), &t)?;
        }
        let st = b.build();
        let mut vcol: Vec<Colour> = vec![0; vars.len()];
        let mut ecol: Vec<Colour> = vec![0; st.tuple_count()];
        for l in &c.beta {
            if !l.positive() {
                continue;
            }
            match l {
                Literal::Vertex { pred, var, .. } => vcol[id(var) as usize] |= 1 << bit(pred),
                Literal::Edge { pred, atom, .. } => {
                    let t: Vec<ElementId> = atom.args.iter().map(id).collect();
                    let g = st.find_tuple(sig.index_of(&atom.rel).unwrap(), &t).unwrap();
                    ecol[g] |= 1 << bit(pred);
                }
            }
        }
        bodies.push(ColouredStructure::new(st, vcol, ecol, pal.clone())?);
    }
    Problem::new(sig, pal, bodies)
}

/// `ceil(log2 k)`, with 0 for `k <= 1`.
pub fn ceil_log2(k: usize) -> usize {
    if k <= 1 {
        0
    } else {
        (usize::BITS - (k - 1).leading_zeros()) as usize
    }
}

/// Writes a problem as a primitive sentence. One predicate list of length
/// `max(ceil log2 |V|, ceil log2 |E|)` serves vertices and tuples; an
/// assignment `a` stands for colour `a` when that colour exists and for
/// colour 0 otherwise, so each pattern yields one conjunct per choice of
/// assignments.
pub fn problem_to_sentence(p: &Problem) -> Result<Sentence> {
    let nv = p.palettes().vertex.len();
    let ne = p.palettes().edge.len();
    let mut k = ceil_log2(nv).max(ceil_log2(ne));
    // a conjunct needs a literal; an element outside every tuple gets one
    // from a single predicate that all assignments alias to colour 0
    let isolated = p.patterns().iter().any(|f| {
        let s = f.body().base();
        let mut seen = vec![false; s.n()];
        s.tuples()
            .for_each(|(_, _, t)| t.iter().for_each(|&x| seen[x as usize] = true));
        seen.contains(&false)
    });
    if k == 0 && isolated {
        k = 1;
    }
    let monadic: Vec<String> = (1..=k).map(|i| format!("M{i}")).collect();
    let width = p.patterns().iter().map(|f| f.size()).max().unwrap_or(0);
    let variables: Vec<String> = (1..=width).map(|i| format!("x{i}")).collect();
    let preimages = |colour: Colour, size: usize| -> Vec<usize> {
        (0..1usize << k)
            .filter(|&a| {
                if a < size {
                    a == colour as usize
                } else {
                    colour == 0
                }
            })
            .collect()
    };
    let sig = p.signature();
    let mut conjuncts = Vec::new();
    for f in p.patterns() {
        let body = f.body();
        let s = body.base();
        let alpha: Vec<Atom> = s
            .tuples()
            .map(|(_, sym, t)| Atom {
                rel: sig.name(sym).to_string(),
                args: t.iter().map(|&x| variables[x as usize].clone()).collect(),
            })
            .collect();
        // one choice list per element, then per tuple (second dialect only)
        let mut choices: Vec<Vec<usize>> = (0..body.n())
            .map(|x| preimages(body.vcol()[x], nv))
            .collect();
        if ne > 1 {
            choices.extend(body.ecol().iter().map(|&c| preimages(c, ne)));
        }
        let mut pick = vec![0usize; choices.len()];
        'combos: loop {
            let mut beta = Vec::new();
            for x in 0..body.n() {
                let a = choices[x][pick[x]];
                for (i, m) in monadic.iter().enumerate() {
                    beta.push(Literal::Vertex {
                        pred: m.clone(),
                        var: variables[x].clone(),
                        positive: a >> i & 1 == 1,
                    });
                }
            }
            if ne > 1 {
                for (g, atom) in alpha.iter().enumerate() {
                    let a = choices[body.n() + g][pick[body.n() + g]];
                    for (i, m) in monadic.iter().enumerate() {
                        beta.push(Literal::Edge {
                            pred: m.clone(),
                            atom: atom.clone(),
                            positive: a >> i & 1 == 1,
                        });
                    }
                }
            }
            conjuncts.push(Conjunct {
                alpha: alpha.clone(),
                beta,
            });
            for i in (0..pick.len()).rev() {
                pick[i] += 1;
                if pick[i] < choices[i].len() {
                    continue 'combos;
                }
                pick[i] = 0;
            }
            break;
        }
    }
    Ok(Sentence {
        monadic,
        variables,
        conjuncts,
    })
}

// ------------------------------------------------- arc colours to vertices

/// A vertex-coloured problem over `T/1, R/3` standing for an arc-coloured
/// problem over one binary symbol: the arc `E(x,y)` of colour `a` becomes
/// a fresh element `e` with `T(e)`, `R(x,e,y)` and vertex colour `a`.
#[derive(Clone, Debug)]
pub struct Fpp2Encoding {
    pub problem: Problem,
    /// Number of arc colours of the source problem.
    pub arc_colours: usize,
    /// Number of monadic predicates spelling an arc colour.
    pub predicates: usize,
}

/// `R/3, T/1`, in name order like every loaded signature.
pub fn tr_signature() -> Arc<Signature> {
    Arc::new(Signature::new([("R", 3), ("T", 1)]).unwrap())
}

const SYM_R: usize = 0;
const SYM_T: usize = 1;

pub fn encode_fpp2(p: &Problem) -> Result<Fpp2Encoding> {
    if !p.signature().is_binary_single() {
        return Err(Error::SignatureMismatch(
            "the encoding needs a single binary symbol".into(),
        ));
    }
    if p.palettes().vertex.len() != 1 {
        return Err(Error::PaletteMismatch(
            "the encoding needs a single vertex colour".into(),
        ));
    }
    let c = p.palettes().edge.len();
    let m = ceil_log2(c);
    let total = 1usize << m;
    let sig = tr_signature();
    let pal = Arc::new(Palettes::new(
        assignment_palette(m),
        vec![crate::relstruct::DEFAULT_COLOUR.to_string()],
    )?);
    let mut bodies = Vec::new();
    // assignments beyond the arc colours may not sit on a witness
    for extra in c..total {
        let st = Structure::from_tuples(sig.clone(), 1, &[(SYM_T, vec![0])])?;
        bodies.push(ColouredStructure::new(
            st,
            vec![extra as Colour],
            vec![0],
            pal.clone(),
        )?);
    }
    for f in p.patterns() {
        let body = f.body();
        let n = body.n();
        let arcs: Vec<(Vec<ElementId>, Colour)> = body
            .base()
            .tuples()
            .map(|(g, _, t)| (t.to_vec(), body.ecol()[g]))
            .collect();
        let mut tuples = Vec::new();
        for (i, (t, _)) in arcs.iter().enumerate() {
            let e = (n + i) as ElementId;
            tuples.push((SYM_T, vec![e]));
            tuples.push((SYM_R, vec![t[0], e, t[1]]));
        }
        let st = Structure::from_tuples(sig.clone(), n + arcs.len(), &tuples)?;
        // original vertices carry no constraint: one pattern per assignment
        let mut vx = vec![0usize; n];
        'assign: loop {
            let mut vcol: Vec<Colour> = vx.iter().map(|&a| a as Colour).collect();
            vcol.extend(arcs.iter().map(|(_, a)| *a));
            bodies.push(ColouredStructure::new(
                st.clone(),
                vcol,
                vec![0; st.tuple_count()],
                pal.clone(),
            )?);
            for i in (0..n).rev() {
                vx[i] += 1;
                if vx[i] < total {
                    continue 'assign;
                }
                vx[i] = 0;
            }
            break;
        }
    }
    let name = p.name.as_ref().map(|n| format!("{n}-over-TR"));
    let mut problem = Problem::new(sig, pal, bodies)?;
    problem.name = name;
    Ok(Fpp2Encoding {
        problem,
        arc_colours: c,
        predicates: m,
    })
}

/// `E(x,y)` iff some `e` has `T(e)` and `R(x,e,y)`; same domain.
pub fn interpret(a: &Structure) -> Result<Structure> {
    let sig = a.signature();
    let (Some(t), Some(r)) = (sig.index_of("T"), sig.index_of("R")) else {
        return Err(Error::SignatureMismatch(
            "expected symbols T/1 and R/3".into(),
        ));
    };
    if sig.arity(t) != 1 || sig.arity(r) != 3 {
        return Err(Error::SignatureMismatch(
            "expected symbols T/1 and R/3".into(),
        ));
    }
    let mut b = Structure::builder(Arc::new(Signature::graph()), a.n());
    for tup in a.relation(r).iter() {
        if a.holds(t, &[tup[1]]) {
            b.add(0, &[tup[0], tup[2]])?;
        }
    }
    let mut out = b.build();
    if let Some(names) = a.names() {
        out = out.with_names(names.to_vec());
    }
    Ok(out)
}

/// A `T/R` structure with one witness per arc of `g`; witnesses follow the
/// vertices.
pub fn encode_digraph(g: &Structure) -> Result<Structure> {
    if !g.signature().is_binary_single() {
        return Err(Error::SignatureMismatch(
            "expected a single binary symbol".into(),
        ));
    }
    let n = g.n();
    let mut tuples = Vec::new();
    for (i, t) in g.relation(0).iter().enumerate() {
        let e = (n + i) as ElementId;
        tuples.push((SYM_T, vec![e]));
        tuples.push((SYM_R, vec![t[0], e, t[1]]));
    }
    Structure::from_tuples(tr_signature(), n + g.tuple_count(), &tuples)
}

/// Witnesses used by at most one `R` tuple, lying outside `T` themselves
/// as endpoints, and at most one witness per arc: the structures on which
/// the interpretation faithfully transfers arc colours.
pub fn is_arc_faithful(a: &Structure) -> Result<bool> {
    let sig = a.signature();
    let (Some(t), Some(r)) = (sig.index_of("T"), sig.index_of("R")) else {
        return Err(Error::SignatureMismatch(
            "expected symbols T/1 and R/3".into(),
        ));
    };
    let mut uses: HashMap<ElementId, usize> = HashMap::new();
    let mut per_arc: HashMap<(ElementId, ElementId), usize> = HashMap::new();
    for tup in a.relation(r).iter() {
        if !a.holds(t, &[tup[1]]) {
            continue;
        }
        if a.holds(t, &[tup[0]]) || a.holds(t, &[tup[2]]) {
            return Ok(false);
        }
        *uses.entry(tup[1]).or_default() += 1;
        *per_arc.entry((tup[0], tup[2])).or_default() += 1;
    }
    Ok(uses.values().all(|&k| k == 1) && per_arc.values().all(|&k| k == 1))
}
