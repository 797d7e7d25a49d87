//! Text syntax for diagram words and elements.
//!
//! ```text
//! element := term (('+' | '-') term)*
//! term    := [rational '*'] ( '[' word ']' | word )
//! word    := 'idem' '(' label (',' label)* ')' (';' gen)* [';']
//! gen     := 'x' '(' pos ')' ['^' n] | 'tau' '(' pos ')'
//!          | 'fdot' '(' region ')' | 'fdot' '(' label ',' sup ',' region ')'
//! ```
//!
//! Positions are 1-based. `fdot(p)` is the floating dot with superscript 0
//! right of the strand at position `p`, labelled like that strand. `#`
//! starts a comment that runs to the end of the line.

use bklr_core::basisrewrite::{key_gens, AlgebraElement, Key, Skeleton};
use bklr_core::cartan::CartanDatum;
use bklr_core::diagram::{DiagramWord, Generator};
use bklr_core::polyrep::{Layout, Mono, Poly};
use bklr_core::{scalar, Label, Scalar};
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(String),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut col) = (1, 1);
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            k += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            k += 1;
            continue;
        }
        if c == '#' {
            while k < chars.len() && chars[k] != '\n' {
                k += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            col += k - start;
            out.push(Spanned { tok: Tok::Ident(chars[start..k].iter().collect()), line: l0, col: c0 });
            continue;
        }
        if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            col += k - start;
            out.push(Spanned { tok: Tok::Num(chars[start..k].iter().collect()), line: l0, col: c0 });
            continue;
        }
        if "();,[]+-*/^".contains(c) {
            out.push(Spanned { tok: Tok::Sym(c), line: l0, col: c0 });
            col += 1;
            k += 1;
            continue;
        }
        return Err(CliError::Parse { line, col, msg: format!("unexpected character `{c}`") });
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    datum: &'a CartanDatum,
    end: (usize, usize),
}

impl<'a> Parser<'a> {
    fn new(datum: &'a CartanDatum, text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.split('\n').collect();
        let end = (lines.len(), lines.last().map(|l| l.chars().count()).unwrap_or(0) + 1);
        Ok(Parser { toks: lex(text)?, pos: 0, datum, end })
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|t| (t.line, t.col)).unwrap_or(self.end)
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.here();
        Err(CliError::Parse { line, col, msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.fail(format!("expected `{c}`"))
        }
    }

    fn number(&mut self) -> Result<u64> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let v = n.parse().or_else(|_| self.fail("number too large"))?;
                self.pos += 1;
                Ok(v)
            }
            _ => self.fail("expected a number"),
        }
    }

    fn label(&mut self) -> Result<Label> {
        let name = match self.peek() {
            Some(Tok::Num(n)) | Some(Tok::Ident(n)) => n.clone(),
            _ => return self.fail("expected a label"),
        };
        match self.datum.index(&name) {
            Ok(l) => {
                self.pos += 1;
                Ok(l)
            }
            Err(_) => self.fail(format!("unknown label `{name}`")),
        }
    }

    fn word(&mut self) -> Result<DiagramWord> {
        let start = self.here();
        match self.peek() {
            Some(Tok::Ident(s)) if s == "idem" => self.pos += 1,
            _ => return self.fail("a word starts with `idem(...)`"),
        }
        self.expect_sym('(')?;
        let mut bottom = Vec::new();
        if !self.eat_sym(')') {
            loop {
                bottom.push(self.label()?);
                if self.eat_sym(')') {
                    break;
                }
                self.expect_sym(',')?;
            }
        }
        let mut w = DiagramWord::identity(bottom);
        while self.eat_sym(';') {
            let at = self.here();
            let name = match self.peek() {
                Some(Tok::Ident(s)) => s.clone(),
                _ => break,
            };
            self.pos += 1;
            self.expect_sym('(')?;
            let gens = match name.as_str() {
                "x" => {
                    let a = self.number()? as usize;
                    self.expect_sym(')')?;
                    let mut k = 1;
                    if self.eat_sym('^') {
                        k = self.number()? as usize;
                    }
                    vec![Generator::Dot(a); k]
                }
                "tau" => {
                    let a = self.number()? as usize;
                    self.expect_sym(')')?;
                    vec![Generator::Cross(a)]
                }
                "fdot" => {
                    let save = self.pos;
                    let first = self.number();
                    if first.is_ok() && self.eat_sym(')') {
                        let p = first? as usize;
                        let labels = w.top_at(w.gens.len());
                        if p == 0 || p > labels.len() {
                            return Err(CliError::Parse {
                                line: at.0,
                                col: at.1,
                                msg: format!("fdot({p}) needs a strand at position {p}; use fdot(label, sup, region)"),
                            });
                        }
                        vec![Generator::Float { label: labels[p - 1], sup: 0, region: p }]
                    } else {
                        self.pos = save;
                        let label = self.label()?;
                        self.expect_sym(',')?;
                        let sup = self.number()? as u32;
                        self.expect_sym(',')?;
                        let region = self.number()? as usize;
                        self.expect_sym(')')?;
                        vec![Generator::Float { label, sup, region }]
                    }
                }
                other => {
                    return Err(CliError::Parse { line: at.0, col: at.1, msg: format!("unknown generator `{other}`") })
                }
            };
            for g in gens {
                w.gens.push(g);
                if let Err(e) = w.validate() {
                    return Err(CliError::Parse { line: at.0, col: at.1, msg: e.to_string() });
                }
            }
        }
        let _ = start;
        Ok(w)
    }

    fn coefficient(&mut self) -> Result<Option<Scalar>> {
        let Some(Tok::Num(p)) = self.peek().cloned() else { return Ok(None) };
        self.pos += 1;
        let mut text = p;
        if self.eat_sym('/') {
            text = format!("{text}/{}", self.number()?);
        }
        let c = scalar::parse(&text).map_or_else(|| self.fail(format!("bad rational `{text}`")), Ok)?;
        self.expect_sym('*')?;
        Ok(Some(c))
    }

    fn term(&mut self) -> Result<(Scalar, DiagramWord)> {
        let c = self.coefficient()?.unwrap_or_else(scalar::one);
        let w = if self.eat_sym('[') {
            let w = self.word()?;
            self.expect_sym(']')?;
            w
        } else {
            self.word()?
        };
        Ok((c, w))
    }

    fn element(&mut self) -> Result<Vec<(Scalar, DiagramWord)>> {
        let mut sign = scalar::one();
        if self.eat_sym('-') {
            sign = -sign;
        }
        let mut out = Vec::new();
        loop {
            let (c, w) = self.term()?;
            out.push((c * &sign, w));
            if self.eat_sym('+') {
                sign = scalar::one();
            } else if self.eat_sym('-') {
                sign = -scalar::one();
            } else {
                break;
            }
        }
        if self.pos < self.toks.len() {
            return self.fail("unexpected input after the element");
        }
        Ok(out)
    }
}

trait TopAt {
    fn top_at(&self, height: usize) -> Vec<Label>;
}

impl TopAt for DiagramWord {
    fn top_at(&self, height: usize) -> Vec<Label> {
        DiagramWord { bottom: self.bottom.clone(), gens: self.gens[..height].to_vec() }.top()
    }
}

pub fn parse_word(datum: &CartanDatum, text: &str) -> Result<DiagramWord> {
    let mut p = Parser::new(datum, text)?;
    let w = p.word()?;
    if p.pos < p.toks.len() {
        return p.fail("unexpected input after the word");
    }
    Ok(w)
}

/// A linear combination of words; all must share the same bottom and top.
pub fn parse_element(datum: &CartanDatum, text: &str) -> Result<Vec<(Scalar, DiagramWord)>> {
    let terms = Parser::new(datum, text)?.element()?;
    let (b, t) = (&terms[0].1.bottom, terms[0].1.top());
    if terms.iter().any(|(_, w)| &w.bottom != b || w.top() != t) {
        return Err(CliError::Input("all terms of an element must share bottom and top sequences".into()));
    }
    Ok(terms)
}

pub fn word_text(datum: &CartanDatum, w: &DiagramWord) -> String {
    let name = |l: Label| datum.labels[l].clone();
    let mut parts = vec![format!("idem({})", w.bottom.iter().map(|&l| name(l)).collect::<Vec<_>>().join(","))];
    for g in &w.gens {
        parts.push(match *g {
            Generator::Dot(a) => format!("x({a})"),
            Generator::Cross(a) => format!("tau({a})"),
            Generator::Float { label, sup, region } => format!("fdot({},{sup},{region})", name(label)),
        });
    }
    parts.join("; ")
}

pub fn element_text(datum: &CartanDatum, e: &AlgebraElement) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (c, w)) in e.words().iter().enumerate() {
        let neg = c.is_negative();
        if k > 0 {
            out.push_str(if neg { " - " } else { " + " });
        } else if neg {
            out.push('-');
        }
        let a = c.abs();
        if !a.is_one() {
            out.push_str(&format!("{a}*"));
        }
        out.push_str(&format!("[{}]", word_text(datum, w)));
    }
    out
}

/// One entry of a JSON term list: a coefficient and either a word in the
/// text syntax or a basis key on a bottom sequence.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct JsonTerm {
    pub coeff: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bottom: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub key: Option<JsonKey>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct JsonKey {
    /// The permutation: `w[k]` is the top position of the strand starting
    /// at bottom position `k` (0-based).
    pub perm: Vec<usize>,
    pub floats: Vec<bool>,
    /// Dots at the top, per top position.
    pub dots: Vec<u32>,
}

pub fn json_terms(datum: &CartanDatum, e: &AlgebraElement) -> Vec<JsonTerm> {
    e.terms
        .iter()
        .map(|(k, c)| JsonTerm {
            coeff: scalar::format(c),
            word: Some(word_text(datum, &DiagramWord { bottom: e.bottom.clone(), gens: key_gens(&e.bottom, k) })),
            bottom: Some(e.bottom.iter().map(|&l| datum.labels[l].clone()).collect()),
            key: Some(JsonKey { perm: k.skeleton.w.clone(), floats: k.skeleton.floats.clone(), dots: k.dots.clone() }),
        })
        .collect()
}

pub fn parse_json_terms(datum: &CartanDatum, text: &str) -> Result<Vec<(Scalar, DiagramWord)>> {
    let terms: Vec<JsonTerm> = serde_json::from_str(text)
        .map_err(|e| CliError::Parse { line: e.line(), col: e.column(), msg: e.to_string() })?;
    let mut out = Vec::new();
    for t in terms {
        let c = scalar::parse(&t.coeff).ok_or_else(|| CliError::Input(format!("bad coefficient `{}`", t.coeff)))?;
        let w = match (&t.key, &t.bottom, &t.word) {
            (Some(k), Some(b), _) => {
                let bottom = b.iter().map(|l| crate::config::label(datum, l)).collect::<Result<Vec<_>>>()?;
                let m = bottom.len();
                if k.perm.len() != m || k.floats.len() != m || k.dots.len() != m || !bklr_core::basisrewrite::is_permutation(&k.perm) {
                    return Err(CliError::Input("basis key does not match the bottom sequence".into()));
                }
                let key = Key { skeleton: Skeleton { w: k.perm.clone(), floats: k.floats.clone() }, dots: k.dots.clone() };
                DiagramWord { bottom: bottom.clone(), gens: key_gens(&bottom, &key) }
            }
            (_, _, Some(w)) => parse_word(datum, w)?,
            _ => return Err(CliError::Input("a term needs `word` or `bottom` with `key`".into())),
        };
        out.push((c, w));
    }
    if out.is_empty() {
        return Err(CliError::Input("empty term list".into()));
    }
    Ok(out)
}

/// Parses either a JSON term list (text starting with `[{`) or the text syntax.
pub fn parse_any(datum: &CartanDatum, text: &str) -> Result<Vec<(Scalar, DiagramWord)>> {
    let t = text.trim_start();
    if t.starts_with('[') && t[1..].trim_start().starts_with('{') {
        parse_json_terms(datum, text)
    } else {
        parse_element(datum, text)
    }
}

/// Parses a comma-separated label list such as `1,2,1`.
pub fn parse_labels(datum: &CartanDatum, text: &str) -> Result<Vec<Label>> {
    let t = text.trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',').map(|s| crate::config::label(datum, s)).collect()
}

/// Parses a weight such as `1:2,2:1` (label:multiplicity).
pub fn parse_weight(datum: &CartanDatum, text: &str) -> Result<Vec<usize>> {
    let mut nu = vec![0; datum.rank()];
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (l, k) = part
            .split_once(':')
            .ok_or_else(|| CliError::Input(format!("weight entry `{part}` is not label:count")))?;
        let k: usize = k.trim().parse().map_err(|_| CliError::Input(format!("bad count in `{part}`")))?;
        nu[crate::config::label(datum, l)?] += k;
    }
    Ok(nu)
}

impl<'a> Parser<'a> {
    fn variable(&mut self, layout: &Layout) -> Result<Mono> {
        let name = match self.peek() {
            Some(Tok::Ident(s)) if s == "x" || s == "w" => s.clone(),
            _ => return self.fail("expected `x(label, l)` or `w(label, l)`"),
        };
        self.pos += 1;
        self.expect_sym('(')?;
        let label = self.label()?;
        self.expect_sym(',')?;
        let at = self.here();
        let l = self.number()? as usize;
        self.expect_sym(')')?;
        if l == 0 || l > layout.nu.get(label).copied().unwrap_or(0) {
            return Err(CliError::Parse { line: at.0, col: at.1, msg: format!("no strand number {l} with that label") });
        }
        let v = layout.var(label, l);
        if name == "w" {
            return Ok(Mono::omega(v));
        }
        let mut e = 1;
        if self.eat_sym('^') {
            e = self.number()? as u16;
        }
        Ok(Mono::x_var(v, e))
    }

    fn poly(&mut self, layout: &Layout) -> Result<Poly> {
        let mut total = Poly::zero();
        let mut sign = if self.eat_sym('-') { -scalar::one() } else { scalar::one() };
        loop {
            let mut term = Poly::one();
            let mut c = scalar::one();
            if let Some(Tok::Num(_)) = self.peek() {
                let Some(Tok::Num(p)) = self.peek().cloned() else { unreachable!() };
                self.pos += 1;
                let mut text = p;
                if self.eat_sym('/') {
                    text = format!("{text}/{}", self.number()?);
                }
                c = scalar::parse(&text).map_or_else(|| self.fail(format!("bad rational `{text}`")), Ok)?;
                if !self.eat_sym('*') {
                    total.add_scaled(&Poly::one(), &(c * &sign));
                    if self.eat_sym('+') {
                        sign = scalar::one();
                        continue;
                    } else if self.eat_sym('-') {
                        sign = -scalar::one();
                        continue;
                    }
                    break;
                }
            }
            loop {
                let m = self.variable(layout)?;
                term = term.mul(&Poly::mono(m, scalar::one()));
                if !self.eat_sym('*') {
                    break;
                }
            }
            total.add_scaled(&term, &(c * &sign));
            if self.eat_sym('+') {
                sign = scalar::one();
            } else if self.eat_sym('-') {
                sign = -scalar::one();
            } else {
                break;
            }
        }
        if self.pos < self.toks.len() {
            return self.fail("unexpected input after the polynomial");
        }
        Ok(total)
    }
}

/// Parses a polynomial of `Q_ν` such as `2*x(1,1)^2*w(1,2) - x(2,1)`, where
/// `x(i, l)` and `w(i, l)` belong to the `l`-th strand labelled `i`.
pub fn parse_poly(datum: &CartanDatum, layout: &Layout, text: &str) -> Result<Poly> {
    Parser::new(datum, text)?.poly(layout)
}

pub fn poly_text(datum: &CartanDatum, layout: &Layout, p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms.iter().enumerate() {
        let mut factors = Vec::new();
        for v in 0..layout.nvars {
            let (i, l) = layout.label_of(v);
            match m.x[v] {
                0 => {}
                1 => factors.push(format!("x({},{l})", datum.labels[i])),
                e => factors.push(format!("x({},{l})^{e}", datum.labels[i])),
            }
        }
        for v in 0..layout.nvars {
            if m.ext & (1 << v) != 0 {
                let (i, l) = layout.label_of(v);
                factors.push(format!("w({},{l})", datum.labels[i]));
            }
        }
        let neg = c.is_negative();
        if k > 0 {
            out.push_str(if neg { " - " } else { " + " });
        } else if neg {
            out.push('-');
        }
        let a = c.abs();
        match (factors.is_empty(), a.is_one()) {
            (true, _) => out.push_str(&a.to_string()),
            (false, true) => out.push_str(&factors.join("*")),
            (false, false) => out.push_str(&format!("{a}*{}", factors.join("*"))),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words() {
        let a2 = CartanDatum::a2();
        let w = parse_word(&a2, "idem(1,2,1); x(2); tau(1); fdot(3)").unwrap();
        assert_eq!(w.bottom, vec![0, 1, 0]);
        assert_eq!(
            w.gens,
            vec![Generator::Dot(2), Generator::Cross(1), Generator::Float { label: 0, sup: 0, region: 3 }]
        );
        let w = parse_word(&a2, "idem(1) ; x(1)^3 ; fdot(2, 1, 0)").unwrap();
        assert_eq!(w.gens.len(), 4);
        assert_eq!(parse_word(&a2, &word_text(&a2, &w)).unwrap(), w);
    }

    #[test]
    fn errors_have_positions() {
        let a2 = CartanDatum::a2();
        let e = parse_word(&a2, "idem(1,2);\n  tau(2)").unwrap_err();
        assert!(matches!(e, CliError::Parse { line: 2, col: 3, .. }), "{e}");
        let e = parse_word(&a2, "idem(1,3)").unwrap_err();
        assert!(matches!(e, CliError::Parse { line: 1, col: 8, .. }), "{e}");
        let e = parse_word(&a2, "idem(1); y(1)").unwrap_err();
        assert!(matches!(e, CliError::Parse { line: 1, col: 10, .. }), "{e}");
        let e = parse_word(&a2, "idem(1); x(1").unwrap_err();
        assert!(matches!(e, CliError::Parse { line: 1, col: 13, .. }), "{e}");
        assert!(parse_word(&a2, "idem(1) $").is_err());
    }

    #[test]
    fn elements() {
        let sl2 = CartanDatum::sl2();
        let e = parse_element(&sl2, "2/3*[idem(1,1); x(1)] - [idem(1,1); x(2)] + idem(1,1)").unwrap();
        assert_eq!(e.len(), 3);
        assert_eq!(e[0].0, scalar::ratio(2, 3));
        assert_eq!(e[1].0, scalar::int(-1));
        assert!(parse_element(&sl2, "[idem(1); x(1)] + idem(1,1)").is_err());
    }

    #[test]
    fn polynomials() {
        let a2 = CartanDatum::a2();
        let layout = Layout::new(&[2, 1]).unwrap();
        let p = parse_poly(&a2, &layout, "2*x(1,1)^2*w(1,2) - x(2,1) + 1/2").unwrap();
        assert_eq!(p.terms.len(), 3);
        let text = poly_text(&a2, &layout, &p);
        assert_eq!(parse_poly(&a2, &layout, &text).unwrap(), p);
        // exterior variables anticommute
        let q = parse_poly(&a2, &layout, "w(1,1)*w(1,2) + w(1,2)*w(1,1)").unwrap();
        assert!(q.is_zero());
        assert!(parse_poly(&a2, &layout, "x(2,2)").is_err());
    }

    #[test]
    fn weights_and_labels() {
        let a2 = CartanDatum::a2();
        assert_eq!(parse_weight(&a2, "1:2, 2:1").unwrap(), vec![2, 1]);
        assert_eq!(parse_labels(&a2, "2,1,2").unwrap(), vec![1, 0, 1]);
        assert!(parse_weight(&a2, "3:1").is_err());
    }
}
