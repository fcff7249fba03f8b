//! Minor identities `sum_t c_t * D^{K_1}_{L_1} ... D^{K_m}_{L_m} = 0` and their
//! `.qid` text format.
//!
//! ```text
//! # mode: 1param
//! # n: 2
//! d[1|1]*d[1|2] - q*d[1|2]*d[1|1] = 0
//! ```
//!
//! Grammar:
//!
//! ```text
//! identity := header* sum '=' '0'
//! sum      := ['+'|'-'] term (('+'|'-') term)*
//! term     := [scalar '*'] factor ('*' factor)* | scalar
//! factor   := ('D'|'d') '[' labels '|' labels ']'
//! labels   := int (',' int)*
//! scalar   := power ('*' power)*
//! power    := atom ['^' ['-'|'+'] int]
//! atom     := int ['/' int] | 'q' | 'q'digit digit | 'q_{' int ',' int '}' | '(' ['+'|'-'] scalar (('+'|'-') scalar)* ')'
//! ```
//!
//! Headers are `# mode: 1param|multiparam` and `# n: <int>` comments before
//! the sum; any other `#` comment runs to the end of its line.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::labels::{sorted_concat, Multilabel};
use crate::minors::MinorSymbol;
use crate::ncalg::write_signed_terms;
use crate::params::{Label, Mode, Scalar, Var};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorTerm {
    pub coeff: Scalar,
    pub factors: Vec<MinorSymbol>,
}

impl MinorTerm {
    pub fn new(coeff: Scalar, factors: Vec<MinorSymbol>) -> Self {
        Self { coeff, factors }
    }

    /// Row multilabels concatenated in factor order, `K_1 K_2 ... K_m`.
    pub fn rows_concat(&self) -> Multilabel {
        self.factors.iter().fold(Multilabel::empty(), |acc, f| acc.concat(f.rows()))
    }

    /// Column multilabels concatenated in factor order, `L_1 L_2 ... L_m`.
    pub fn cols_concat(&self) -> Multilabel {
        self.factors.iter().fold(Multilabel::empty(), |acc, f| acc.concat(f.cols()))
    }

    pub fn degree(&self) -> usize {
        self.factors.iter().map(|f| f.size()).sum()
    }

    fn body(&self, mode: Mode) -> String {
        self.factors.iter().map(|f| f.render(mode)).collect::<Vec<_>>().join("*")
    }
}

pub fn row_content(t: &MinorTerm) -> Multilabel {
    sorted_concat(t.factors.iter().map(|f| f.rows()))
}

pub fn col_content(t: &MinorTerm) -> Multilabel {
    sorted_concat(t.factors.iter().map(|f| f.cols()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContentKind {
    Rows,
    Cols,
}

/// The first term whose content differs from the first term's.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneityWitness {
    pub term: usize,
    pub kind: ContentKind,
    pub expected: Multilabel,
    pub found: Multilabel,
}

impl fmt::Display for HomogeneityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ContentKind::Rows => "rows",
            ContentKind::Cols => "cols",
        };
        write!(f, "term {} has {kind} ({}) but term 1 has ({})", self.term + 1, self.found, self.expected)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorIdentity {
    pub mode: Mode,
    pub n: usize,
    pub terms: Vec<MinorTerm>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "text" => Ok(Format::Text),
            "structured" => Ok(Format::Structured),
            other => Err(Error::Validation(format!("unknown format `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuredFactor {
    pub rows: Vec<Label>,
    pub cols: Vec<Label>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuredTerm {
    pub coeff: String,
    pub factors: Vec<StructuredFactor>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuredIdentity {
    pub mode: Mode,
    pub n: usize,
    pub terms: Vec<StructuredTerm>,
}

impl MinorIdentity {
    pub fn new(mode: Mode, n: usize, terms: Vec<MinorTerm>) -> Result<Self, Error> {
        if terms.is_empty() {
            return Err(Error::Validation("an identity needs at least one term".into()));
        }
        if let Some(t) = terms.iter().find(|t| t.coeff.is_zero()) {
            return Err(Error::Validation(format!("term {} has zero coefficient", t.body(mode))));
        }
        if mode == Mode::OneParam {
            if let Some(t) = terms.iter().find(|t| !t.coeff.is_one_param()) {
                return Err(Error::Validation(format!(
                    "coefficient {} of a 1param identity may only involve q",
                    t.coeff
                )));
            }
        }
        let id = Self { mode, n, terms };
        match id.max_label() {
            m if m > n => Err(Error::LabelOutOfRange { label: m, n }),
            _ => Ok(id),
        }
    }

    pub fn parse(src: &str) -> Result<Self, ParseError> {
        parse(src)
    }

    pub fn max_label(&self) -> usize {
        self.terms
            .iter()
            .flat_map(|t| t.factors.iter().map(|f| f.max_label()).chain([t.coeff.max_label()]))
            .max()
            .unwrap_or(0)
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|t| t.degree()).max().unwrap_or(0)
    }

    /// Same identity over a larger ambient matrix size.
    pub fn with_n(&self, n: usize) -> Result<Self, Error> {
        Self::new(self.mode, n, self.terms.clone())
    }

    pub fn homogeneity_witness(&self) -> Option<HomogeneityWitness> {
        let first = self.terms.first()?;
        let (rows, cols) = (row_content(first), col_content(first));
        self.terms.iter().enumerate().skip(1).find_map(|(k, t)| {
            let (r, c) = (row_content(t), col_content(t));
            if r != rows {
                Some(HomogeneityWitness { term: k, kind: ContentKind::Rows, expected: rows.clone(), found: r })
            } else if c != cols {
                Some(HomogeneityWitness { term: k, kind: ContentKind::Cols, expected: cols.clone(), found: c })
            } else {
                None
            }
        })
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneity_witness().is_none()
    }

    /// The left side alone, e.g. `d[1|1]*d[1|2] - q*d[1|2]*d[1|1]`.
    pub fn render_sum(&self) -> String {
        let mut out = String::new();
        write_signed_terms(&mut out, self.terms.iter().map(|t| (&t.coeff, t.body(self.mode))))
            .expect("writing to a String");
        out
    }

    pub fn render_text(&self) -> String {
        format!("# mode: {}\n# n: {}\n{} = 0\n", self.mode, self.n, self.render_sum())
    }

    pub fn to_structured(&self) -> StructuredIdentity {
        StructuredIdentity {
            mode: self.mode,
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|t| StructuredTerm {
                    coeff: t.coeff.canonical_string(),
                    factors: t
                        .factors
                        .iter()
                        .map(|f| StructuredFactor { rows: f.rows().to_vec(), cols: f.cols().to_vec() })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::Structured => serde_json::to_string_pretty(&self.to_structured()).expect("serializable") + "\n",
        }
    }
}

impl fmt::Display for MinorIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = 0", self.render_sum())
    }
}

/// `Ok` if every term has the same row and column content, else the first offending term.
pub fn is_homogeneous(id: &MinorIdentity) -> Result<(), HomogeneityWitness> {
    id.homogeneity_witness().map_or(Ok(()), Err)
}

pub fn render(id: &MinorIdentity, format: Format) -> String {
    id.render(format)
}

/// Parses a `.qid` document.
pub fn parse(src: &str) -> Result<MinorIdentity, ParseError> {
    Parser::new(src).document(true)
}

/// Parses a bare sum of minor monomials (no `= 0`), as accepted by `expand`.
pub fn parse_expression(src: &str) -> Result<MinorIdentity, ParseError> {
    Parser::new(src).document(false)
}

/// Parses a parameter-ring element such as `(q - q^-1)*q12^2`.
pub fn parse_scalar(src: &str) -> Result<Scalar, ParseError> {
    let mut p = Parser::new(src);
    p.skip_trivia(false)?;
    let s = p.scalar_sum()?;
    p.skip_trivia(false)?;
    if !p.at_end() {
        return Err(p.error("unexpected input after scalar", &["end of input"]));
    }
    Ok(s)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    header_mode: Option<(Mode, usize)>,
    header_n: Option<(usize, usize)>,
    /// Factor letters with their positions.
    letters: Vec<(Mode, usize)>,
    /// Labels of factors and pair variables with their positions.
    labels: Vec<(usize, usize)>,
}

impl Parser {
    fn new(src: &str) -> Self {
        Self {
            chars: src.chars().collect(),
            pos: 0,
            header_mode: None,
            header_n: None,
            letters: Vec::new(),
            labels: Vec::new(),
        }
    }

    fn line_col(&self, pos: usize) -> (usize, usize) {
        let (mut line, mut col) = (1, 1);
        for &c in &self.chars[..pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        (line, col)
    }

    fn error_at(&self, pos: usize, message: impl Into<String>, expected: &[&str]) -> ParseError {
        let (line, column) = self.line_col(pos);
        ParseError { line, column, message: message.into(), expected: expected.iter().map(|s| s.to_string()).collect() }
    }

    fn error(&self, message: impl Into<String>, expected: &[&str]) -> ParseError {
        self.error_at(self.pos, message, expected)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn found(&self) -> String {
        match self.peek() {
            Some(c) => format!("unexpected `{c}`"),
            None => "unexpected end of input".to_string(),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_trivia(false)?;
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(self.found(), &[&format!("`{c}`")]))
        }
    }

    fn eat(&mut self, c: char) -> Result<bool, ParseError> {
        self.skip_trivia(false)?;
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(true)
        } else {
            Ok(false)
        }
    }

    /// Skips whitespace and comments; with `headers`, `# mode:` and `# n:` lines are interpreted.
    fn skip_trivia(&mut self, headers: bool) -> Result<(), ParseError> {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => self.pos += 1,
                Some('#') => {
                    let start = self.pos + 1;
                    let end =
                        self.chars[start..].iter().position(|&c| c == '\n').map_or(self.chars.len(), |k| start + k);
                    if headers {
                        self.header(start, end)?;
                    }
                    self.pos = end;
                }
                _ => return Ok(()),
            }
        }
    }

    fn header(&mut self, start: usize, end: usize) -> Result<(), ParseError> {
        let text: String = self.chars[start..end].iter().collect();
        let Some((key, value)) = text.split_once(':') else { return Ok(()) };
        let key = key.trim();
        if key != "mode" && key != "n" {
            return Ok(());
        }
        let colon = start + self.chars[start..end].iter().position(|&c| c == ':').expect("has colon");
        let lead = value.chars().take_while(|c| c.is_whitespace()).count();
        let vpos = colon + 1 + lead;
        let value = value.trim();
        if key == "mode" {
            let mode = value
                .parse::<Mode>()
                .map_err(|_| self.error_at(vpos, format!("unknown mode `{value}`"), &["`1param`", "`multiparam`"]))?;
            self.header_mode = Some((mode, vpos));
        } else {
            let n =
                value.parse::<usize>().ok().filter(|&n| (1..=Label::MAX as usize).contains(&n)).ok_or_else(|| {
                    self.error_at(vpos, format!("invalid matrix size `{value}`"), &["positive integer"])
                })?;
            self.header_n = Some((n, vpos));
        }
        Ok(())
    }

    fn document(mut self, require_eq: bool) -> Result<MinorIdentity, ParseError> {
        self.skip_trivia(true)?;
        let mut terms = Vec::new();
        let first_sign = if self.eat('-')? {
            -1
        } else {
            self.eat('+')?;
            1
        };
        terms.push(self.term(first_sign)?);
        loop {
            self.skip_trivia(false)?;
            let sign = match self.peek() {
                Some('+') => 1,
                Some('-') => -1,
                _ => break,
            };
            self.pos += 1;
            terms.push(self.term(sign)?);
        }
        if require_eq {
            self.skip_trivia(false)?;
            if self.peek() != Some('=') {
                return Err(self.error(self.found(), &["`+`", "`-`", "`*`", "`=`"]));
            }
            self.pos += 1;
            self.skip_trivia(false)?;
            let zpos = self.pos;
            let rhs = self.integer()?;
            if rhs != 0 || self.peek().is_some_and(|c| c == '/' || c == '.') {
                return Err(self.error_at(zpos, "right-hand side must be 0", &["`0`"]));
            }
        }
        self.skip_trivia(false)?;
        if !self.at_end() {
            let expected: &[&str] = if require_eq { &["end of input"] } else { &["`+`", "`-`", "`*`", "end of input"] };
            return Err(self.error(self.found(), expected));
        }
        self.finish(terms)
    }

    fn finish(self, terms: Vec<(usize, MinorTerm)>) -> Result<MinorIdentity, ParseError> {
        let mode = match (self.header_mode, self.letters.first()) {
            (Some((m, _)), _) => m,
            (None, Some(&(m, _))) => m,
            (None, None) => Mode::OneParam,
        };
        if let Some(&(_, pos)) = self.letters.iter().find(|(m, _)| *m != mode) {
            let want = match mode {
                Mode::OneParam => "`d`",
                Mode::MultiParam => "`D`",
            };
            return Err(self.error_at(pos, format!("factor letter does not match mode {mode}"), &[want]));
        }
        let n = match self.header_n {
            Some((n, _)) => {
                if let Some(&(label, pos)) = self.labels.iter().find(|(l, _)| *l > n) {
                    return Err(self.error_at(pos, format!("label {label} exceeds n = {n}"), &[]));
                }
                n
            }
            None => self.labels.iter().map(|(l, _)| *l).max().unwrap_or(1).max(1),
        };
        if let Some((pos, _)) = terms.iter().find(|(_, t)| t.coeff.is_zero()) {
            return Err(self.error_at(*pos, "term has zero coefficient", &[]));
        }
        if mode == Mode::OneParam {
            if let Some((pos, _)) = terms.iter().find(|(_, t)| !t.coeff.is_one_param()) {
                return Err(self.error_at(*pos, "coefficient of a 1param identity may only involve q", &[]));
            }
        }
        Ok(MinorIdentity { mode, n, terms: terms.into_iter().map(|(_, t)| t).collect() })
    }

    fn term(&mut self, sign: i64) -> Result<(usize, MinorTerm), ParseError> {
        self.skip_trivia(false)?;
        let start = self.pos;
        let mut coeff = Scalar::int(sign);
        let mut factors = Vec::new();
        loop {
            self.skip_trivia(false)?;
            if self.at_factor() {
                factors.push(self.factor()?);
            } else if !factors.is_empty() {
                return Err(self.error(self.found(), &["minor factor `D[..|..]` or `d[..|..]`"]));
            } else {
                coeff = &coeff * &self.power()?;
            }
            if !self.eat('*')? {
                break;
            }
        }
        Ok((start, MinorTerm { coeff, factors }))
    }

    fn at_factor(&self) -> bool {
        matches!(self.peek(), Some('D' | 'd'))
            && !self.chars.get(self.pos + 1).is_some_and(|c| c.is_alphanumeric() || *c == '_')
    }

    fn factor(&mut self) -> Result<MinorSymbol, ParseError> {
        let start = self.pos;
        let mode = if self.peek() == Some('D') { Mode::MultiParam } else { Mode::OneParam };
        self.pos += 1;
        self.letters.push((mode, start));
        self.expect('[')?;
        let rows = self.labels_list()?;
        self.expect('|')?;
        let cols = self.labels_list()?;
        self.expect(']')?;
        MinorSymbol::new(rows, cols).map_err(|e| {
            let msg = match e {
                Error::InvalidMinor(m) => m,
                other => other.to_string(),
            };
            self.error_at(start, msg, &[])
        })
    }

    fn labels_list(&mut self) -> Result<Vec<Label>, ParseError> {
        let mut out = vec![self.label()?];
        while self.eat(',')? {
            out.push(self.label()?);
        }
        Ok(out)
    }

    fn label(&mut self) -> Result<Label, ParseError> {
        self.skip_trivia(false)?;
        let pos = self.pos;
        let v = self.integer()?;
        if v == 0 || v > Label::MAX as u64 {
            return Err(self.error_at(pos, format!("label {v} out of range"), &["label 1..=255"]));
        }
        self.labels.push((v as usize, pos));
        Ok(v as Label)
    }

    fn integer(&mut self) -> Result<u64, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error(self.found(), &["integer"]));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits.parse().map_err(|_| self.error_at(start, "integer too large", &[]))
    }

    fn scalar_sum(&mut self) -> Result<Scalar, ParseError> {
        let mut sign = if self.eat('-')? {
            -1
        } else {
            self.eat('+')?;
            1
        };
        let mut acc = Scalar::zero();
        loop {
            let mut t = Scalar::int(sign);
            loop {
                t = &t * &self.power()?;
                if !self.eat('*')? {
                    break;
                }
            }
            acc += t;
            self.skip_trivia(false)?;
            sign = match self.peek() {
                Some('+') => 1,
                Some('-') => -1,
                _ => return Ok(acc),
            };
            self.pos += 1;
        }
    }

    fn power(&mut self) -> Result<Scalar, ParseError> {
        self.skip_trivia(false)?;
        let start = self.pos;
        let base = self.atom()?;
        if !self.eat('^')? {
            return Ok(base);
        }
        let paren = self.eat('(')?;
        let negative = if self.eat('-')? {
            true
        } else {
            self.eat('+')?;
            false
        };
        self.skip_trivia(false)?;
        let epos = self.pos;
        let e = self.integer()?;
        if paren {
            self.expect(')')?;
        }
        let e = i32::try_from(e).map_err(|_| self.error_at(epos, "exponent too large", &[]))?;
        let e = if negative { -e } else { e };
        if e >= 0 && base.len() > 1 && e > 64 {
            return Err(self.error_at(epos, "exponent too large for a sum", &[]));
        }
        base.pow(e).map_err(|_| self.error_at(start, "negative power of a non-monomial", &[]))
    }

    fn atom(&mut self) -> Result<Scalar, ParseError> {
        self.skip_trivia(false)?;
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut value = num_rational::BigRational::from_integer(num.into());
                if self.peek() == Some('/') {
                    self.pos += 1;
                    let dpos = self.pos;
                    let den = self.integer()?;
                    if den == 0 {
                        return Err(self.error_at(dpos, "zero denominator", &[]));
                    }
                    value /= num_rational::BigRational::from_integer(den.into());
                }
                Ok(Scalar::rational(value))
            }
            Some('(') => {
                self.pos += 1;
                let s = self.scalar_sum()?;
                self.expect(')')?;
                Ok(s)
            }
            Some(c) if c.is_alphabetic() || c == '_' => self.variable(start),
            _ => Err(self.error(self.found(), &["number", "variable", "`(`"])),
        }
    }

    fn variable(&mut self, start: usize) -> Result<Scalar, ParseError> {
        let mut end = self.pos;
        while self.chars.get(end).is_some_and(|c| c.is_alphanumeric() || *c == '_') {
            end += 1;
        }
        let ident: String = self.chars[start..end].iter().collect();
        let unknown =
            |p: &Self| p.error_at(start, format!("unknown variable `{ident}`"), &["`q`", "`q12`", "`q_{i,j}`"]);
        let (i, j) = if ident == "q" {
            self.pos = end;
            return Ok(Scalar::q());
        } else if ident == "q_" {
            self.pos = end;
            self.expect('{')?;
            self.skip_trivia(false)?;
            let ipos = self.pos;
            let i = self.integer()?;
            self.expect(',')?;
            self.skip_trivia(false)?;
            let jpos = self.pos;
            let j = self.integer()?;
            self.expect('}')?;
            for (v, p) in [(i, ipos), (j, jpos)] {
                if v == 0 || v > Label::MAX as u64 {
                    return Err(self.error_at(p, format!("label {v} out of range"), &["label 1..=255"]));
                }
                self.labels.push((v as usize, p));
            }
            (i as Label, j as Label)
        } else {
            let digits: Vec<u32> = ident[1..].chars().filter_map(|c| c.to_digit(10)).collect();
            if !ident.starts_with('q') || ident.len() != 3 || digits.len() != 2 || digits.contains(&0) {
                return Err(unknown(self));
            }
            self.pos = end;
            self.labels.push((digits[0] as usize, start + 1));
            self.labels.push((digits[1] as usize, start + 2));
            (digits[0] as Label, digits[1] as Label)
        };
        Ok(match i.cmp(&j) {
            std::cmp::Ordering::Less => Scalar::var(Var::pair(i, j)),
            std::cmp::Ordering::Greater => Scalar::var(Var::pair(j, i)).inv().expect("monomial"),
            std::cmp::Ordering::Equal => Scalar::one(),
        })
    }
}
