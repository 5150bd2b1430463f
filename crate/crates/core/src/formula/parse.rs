//! Line-oriented parser for `.spf` formula files.

use std::collections::BTreeMap;

use super::{
    ArityRule, Atom, BoundDecl, Case, Disjunct, Generator, IExpr, Pred, SigmaP1Family, TAtom,
    TItem, TTerm, Term,
};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Dot,
    DotDot,
    Amp,
    Eq,
    Neq,
    Colon,
    Plus,
    Minus,
    Bang(String),
    Arrow(String),
    Other(char),
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    col: usize,
}

fn lex(line: usize, text: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let next = chars.get(i + 1).copied();
        let (tok, width) = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    col,
                });
                continue;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let v = s.parse().map_err(|_| Error::Syntax {
                    line,
                    col,
                    msg: format!("integer `{s}` is too large"),
                })?;
                out.push(Spanned {
                    tok: Tok::Int(v),
                    col,
                });
                continue;
            }
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '[' => (Tok::LBrack, 1),
            ']' => (Tok::RBrack, 1),
            ',' => (Tok::Comma, 1),
            '.' if next == Some('.') => (Tok::DotDot, 2),
            '.' => (Tok::Dot, 1),
            '&' => (Tok::Amp, 1),
            '=' if next == Some('>') => (Tok::Arrow("=>".into()), 2),
            '=' => (Tok::Eq, 1),
            '<' if next == Some('>') => (Tok::Neq, 2),
            '≠' => (Tok::Neq, 1),
            ':' => (Tok::Colon, 1),
            '+' => (Tok::Plus, 1),
            '-' if next == Some('>') => (Tok::Arrow("->".into()), 2),
            '-' => (Tok::Minus, 1),
            '!' | '¬' | '~' => (Tok::Bang(c.to_string()), 1),
            '→' | '⇒' => (Tok::Arrow(c.to_string()), 1),
            other => (Tok::Other(other), 1),
        };
        out.push(Spanned { tok, col });
        i += width;
    }
    Ok(out)
}

/// Whether negated atoms are accepted (Σᶜ₁ input) or rejected (Σᵖ₁).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Positive,
    Classical,
}

const NEGATION_WORDS: [&str; 1] = ["not"];
const FORBIDDEN_WORDS: [&str; 3] = ["forall", "implies", "iff"];

#[derive(Clone, Debug)]
enum DeclKind {
    Plain,
    Indexed,
}

struct LineParser<'a> {
    line: usize,
    toks: &'a [Spanned],
    pos: usize,
    end_col: usize,
    mode: Mode,
    params: usize,
    decls: BTreeMap<String, DeclKind>,
    index_vars: Vec<String>,
    template: bool,
}

impl<'a> LineParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|s| &s.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |s| s.col)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            line: self.line,
            col: self.col(),
            msg: msg.into(),
        })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.peek().cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn int(&mut self, what: &str) -> Result<u64> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(v)
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn finish(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }

    fn iexpr(&mut self) -> Result<IExpr> {
        let mut acc = self.iatom()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = IExpr::Add(Box::new(acc), Box::new(self.iatom()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = IExpr::Sub(Box::new(acc), Box::new(self.iatom()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn iatom(&mut self) -> Result<IExpr> {
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(IExpr::Lit(v as i64))
            }
            Some(Tok::Ident(name)) => {
                if !self.index_vars.contains(&name) {
                    return self.err(format!("`{name}` is not an index variable"));
                }
                self.pos += 1;
                Ok(IExpr::Var(name))
            }
            _ => self.err("expected an index expression"),
        }
    }

    fn decls(&mut self) -> Result<Vec<BoundDecl>> {
        let mut out = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Dot) => {
                    self.pos += 1;
                    break;
                }
                Some(Tok::Comma) => {
                    self.pos += 1;
                }
                Some(Tok::Ident(_)) => {
                    let col = self.col();
                    let name = self.ident("a variable name")?;
                    if reserved(&name).is_some() || is_keyword(&name) {
                        return Err(Error::Syntax {
                            line: self.line,
                            col,
                            msg: format!("`{name}` cannot be a bound variable"),
                        });
                    }
                    if self.decls.contains_key(&name) {
                        return Err(Error::Syntax {
                            line: self.line,
                            col,
                            msg: format!("`{name}` declared twice"),
                        });
                    }
                    if self.peek() == Some(&Tok::LBrack) {
                        if !self.template {
                            return self.err("indexed variables are only allowed in generators");
                        }
                        self.pos += 1;
                        let lo = self.iexpr()?;
                        self.expect(Tok::DotDot, "`..`")?;
                        let hi = self.iexpr()?;
                        self.expect(Tok::RBrack, "`]`")?;
                        self.decls.insert(name.clone(), DeclKind::Indexed);
                        out.push(BoundDecl::Indexed { name, lo, hi });
                    } else {
                        self.decls.insert(name.clone(), DeclKind::Plain);
                        out.push(BoundDecl::Plain(name));
                    }
                }
                _ => return self.err("expected a variable or `.`"),
            }
        }
        Ok(out)
    }

    fn conj(&mut self, closing: Option<Tok>) -> Result<Vec<TItem>> {
        let mut items = Vec::new();
        loop {
            if let Some(Tok::Ident(w)) = self.peek() {
                if w == "true" {
                    self.pos += 1;
                } else {
                    items.push(self.item()?);
                }
            } else {
                items.push(self.item()?);
            }
            match self.peek() {
                Some(Tok::Amp) => {
                    self.pos += 1;
                }
                t if t == closing.as_ref() => return Ok(items),
                _ => return self.err("expected `&` or end of conjunction"),
            }
        }
    }

    fn item(&mut self) -> Result<TItem> {
        match self.peek().cloned() {
            Some(Tok::Ident(w)) if w == "rep" && self.template => {
                self.pos += 1;
                let col = self.col();
                let var = self.ident("a repetition variable")?;
                if self.index_vars.contains(&var) {
                    return Err(Error::Syntax {
                        line: self.line,
                        col,
                        msg: format!("index variable `{var}` shadows an outer one"),
                    });
                }
                self.expect(Tok::Eq, "`=`")?;
                let lo = self.iexpr()?;
                self.expect(Tok::DotDot, "`..`")?;
                let hi = self.iexpr()?;
                self.expect(Tok::Colon, "`:`")?;
                self.index_vars.push(var.clone());
                let body = if self.peek() == Some(&Tok::LParen) {
                    self.pos += 1;
                    let b = self.conj(Some(Tok::RParen))?;
                    self.expect(Tok::RParen, "`)`")?;
                    b
                } else {
                    vec![self.item()?]
                };
                self.index_vars.pop();
                Ok(TItem::Rep { var, lo, hi, body })
            }
            Some(Tok::Bang(_)) | Some(Tok::Ident(_)) if self.at_negation() => {
                let start = self.col();
                let token = match self.bump() {
                    Some(Tok::Bang(s)) | Some(Tok::Ident(s)) => s,
                    _ => unreachable!(),
                };
                if self.mode == Mode::Positive {
                    return Err(Error::Positivity {
                        line: self.line,
                        col: start,
                        token,
                    });
                }
                if !self.atom_starts() {
                    return self.err("negation applies only to atoms");
                }
                let a = self.atom()?;
                let pred = match a.pred {
                    Pred::Eq => Pred::Neq,
                    Pred::Neq => Pred::Eq,
                    Pred::Rel(r) => Pred::NotRel(r),
                    Pred::NotRel(_) => return self.err("double negation"),
                };
                Ok(TItem::Atom(TAtom { pred, args: a.args }))
            }
            _ => Ok(TItem::Atom(self.atom()?)),
        }
    }

    fn at_negation(&self) -> bool {
        match self.peek() {
            Some(Tok::Bang(_)) => true,
            Some(Tok::Ident(w)) => {
                NEGATION_WORDS.contains(&w.as_str())
                    && !matches!(self.peek_at(1), Some(Tok::LParen) | Some(Tok::Eq) | Some(Tok::Neq))
            }
            _ => false,
        }
    }

    fn atom_starts(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(w)) if w != "exists" && w != "rep")
    }

    fn atom(&mut self) -> Result<TAtom> {
        if let (Some(Tok::Ident(name)), Some(Tok::LParen)) = (self.peek(), self.peek_at(1)) {
            let name = name.clone();
            if is_keyword(&name) {
                return self.err(format!("`{name}` is a keyword"));
            }
            self.pos += 2;
            let mut args = vec![self.term()?];
            while self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
                args.push(self.term()?);
            }
            self.expect(Tok::RParen, "`,` or `)`")?;
            return Ok(TAtom {
                pred: Pred::Rel(name),
                args,
            });
        }
        let lhs = self.term()?;
        let pred = match self.peek() {
            Some(Tok::Eq) => Pred::Eq,
            Some(Tok::Neq) => Pred::Neq,
            _ => return self.err("expected `=` or `<>`"),
        };
        self.pos += 1;
        let rhs = self.term()?;
        Ok(TAtom {
            pred,
            args: vec![lhs, rhs],
        })
    }

    fn term(&mut self) -> Result<TTerm> {
        let col = self.col();
        let name = self.ident("a variable")?;
        if let Some(t) = reserved(&name) {
            if let TTerm::Param(k) = t {
                if k >= self.params {
                    return Err(Error::Syntax {
                        line: self.line,
                        col,
                        msg: format!("`{name}` exceeds the declared params {}", self.params),
                    });
                }
            }
            return Ok(t);
        }
        match self.decls.get(&name) {
            Some(DeclKind::Plain) => Ok(TTerm::Plain(name)),
            Some(DeclKind::Indexed) => {
                self.expect(Tok::LBrack, "`[` after an indexed variable")?;
                let e = self.iexpr()?;
                self.expect(Tok::RBrack, "`]`")?;
                Ok(TTerm::Indexed(name, e))
            }
            None => Err(Error::Syntax {
                line: self.line,
                col,
                msg: format!("unknown variable `{name}`"),
            }),
        }
    }
}

fn is_keyword(w: &str) -> bool {
    matches!(w, "exists" | "rep" | "true" | "not" | "forall" | "implies" | "iff")
}

/// `x<k>` and `z<k>` (k ≥ 1) name free variables and parameters.
fn reserved(name: &str) -> Option<TTerm> {
    let (head, digits) = name.split_at(1);
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) || digits.starts_with('0')
    {
        return None;
    }
    let k: usize = digits.parse().ok()?;
    match head {
        "x" => Some(TTerm::Free(k - 1)),
        "z" => Some(TTerm::Param(k - 1)),
        _ => None,
    }
}

fn check_forbidden(line: usize, toks: &[Spanned], mode: Mode) -> Result<()> {
    for s in toks {
        let bad = match &s.tok {
            Tok::Arrow(a) => Some(a.clone()),
            Tok::Bang(b) if mode == Mode::Positive => Some(b.clone()),
            Tok::Ident(w) if FORBIDDEN_WORDS.contains(&w.as_str()) => Some(w.clone()),
            Tok::Ident(w) if mode == Mode::Positive && NEGATION_WORDS.contains(&w.as_str()) => {
                Some(w.clone())
            }
            Tok::Other(c) if matches!(c, '∀' | '|' | '∨') => Some(c.to_string()),
            _ => None,
        };
        if let Some(token) = bad {
            return Err(Error::Positivity {
                line,
                col: s.col,
                token,
            });
        }
    }
    Ok(())
}

/// Incremental builder shared by `.spf` and `.spi` parsing.
pub struct FamilyBuilder {
    mode: Mode,
    done: Vec<SigmaP1Family>,
    current: Option<Open>,
}

struct Open {
    family: SigmaP1Family,
    case: Option<(Option<ArityRule>, usize, Case)>,
}

impl FamilyBuilder {
    pub fn new(mode: Mode) -> Self {
        FamilyBuilder {
            mode,
            done: Vec::new(),
            current: None,
        }
    }

    pub fn start_family(&mut self, name: &str) -> Result<()> {
        self.close_family()?;
        self.current = Some(Open {
            family: SigmaP1Family::empty(name),
            case: None,
        });
        Ok(())
    }

    fn close_case(open: &mut Open) -> Result<()> {
        if let Some((rule, line, mut case)) = open.case.take() {
            let max_free = case.max_free();
            case.arity = match rule {
                None => ArityRule::List(vec![max_free]),
                Some(ArityRule::List(l)) => {
                    if let Some(&a) = l.iter().find(|&&a| a < max_free) {
                        return Err(Error::Parse {
                            line,
                            msg: format!("case of arity {a} uses x{max_free}"),
                        });
                    }
                    ArityRule::List(l)
                }
                Some(ArityRule::Uniform) => ArityRule::Uniform,
            };
            open.family.cases.push(case);
        }
        Ok(())
    }

    fn close_family(&mut self) -> Result<()> {
        if let Some(mut open) = self.current.take() {
            Self::close_case(&mut open)?;
            self.done.push(open.family);
        }
        Ok(())
    }

    /// Feed one line (comments already allowed). `line` is 1-based.
    pub fn line(&mut self, line: usize, raw: &str) -> Result<()> {
        let content = raw.split('#').next().unwrap();
        if content.trim().is_empty() {
            return Ok(());
        }
        let toks = lex(line, content)?;
        let end_col = content.chars().count() + 1;
        let keyword = match toks.first() {
            Some(Spanned {
                tok: Tok::Ident(w), ..
            }) => w.clone(),
            _ => {
                return Err(Error::Syntax {
                    line,
                    col: toks[0].col,
                    msg: "expected a directive".into(),
                })
            }
        };
        if keyword == "family" {
            let mut p = self.parser(line, &toks[1..], end_col);
            let name = p.ident("a family name")?;
            p.finish()?;
            return self.start_family(&name);
        }
        check_forbidden(line, &toks, self.mode)?;
        let mode = self.mode;
        let Some(open) = self.current.as_mut() else {
            return Err(Error::Parse {
                line,
                msg: format!("`{keyword}` before any `family` line"),
            });
        };
        let params = open.family.params;
        let mut p = LineParser {
            line,
            toks: &toks[1..],
            pos: 0,
            end_col,
            mode,
            params,
            decls: BTreeMap::new(),
            index_vars: Vec::new(),
            template: false,
        };
        match keyword.as_str() {
            "params" => {
                let k = p.int("a parameter count")?;
                p.finish()?;
                if !open.family.cases.is_empty() || open.case.is_some() {
                    return Err(Error::Parse {
                        line,
                        msg: "`params` must precede all disjuncts".into(),
                    });
                }
                open.family.params = k as usize;
            }
            "arity" => {
                let rule = if matches!(p.peek(), Some(Tok::Ident(w)) if w == "uniform") {
                    p.pos += 1;
                    ArityRule::Uniform
                } else {
                    let mut l = vec![p.int("`uniform` or a list of arities")? as usize];
                    while !p.at_end() {
                        l.push(p.int("an arity")? as usize);
                    }
                    l.sort_unstable();
                    l.dedup();
                    ArityRule::List(l)
                };
                p.finish()?;
                Self::close_case(open)?;
                open.case = Some((Some(rule), line, empty_case()));
            }
            "disjunct" => {
                let mut bound = Vec::new();
                if matches!(p.peek(), Some(Tok::Ident(w)) if w == "exists") {
                    p.pos += 1;
                    for d in p.decls()? {
                        match d {
                            BoundDecl::Plain(n) => bound.push(n),
                            BoundDecl::Indexed { .. } => unreachable!(),
                        }
                    }
                }
                let items = p.conj(None)?;
                let atoms = items
                    .into_iter()
                    .map(|it| match it {
                        TItem::Atom(a) => Atom {
                            pred: a.pred,
                            args: a
                                .args
                                .into_iter()
                                .map(|t| match t {
                                    TTerm::Free(k) => Term::Free(k),
                                    TTerm::Param(k) => Term::Param(k),
                                    TTerm::Plain(n) => {
                                        Term::Bound(bound.iter().position(|b| *b == n).unwrap())
                                    }
                                    TTerm::Indexed(..) => unreachable!(),
                                })
                                .collect(),
                        },
                        TItem::Rep { .. } => unreachable!(),
                    })
                    .collect();
                let open = self.current.as_mut().unwrap();
                open.case
                    .get_or_insert_with(|| (None, line, empty_case()))
                    .2
                    .disjuncts
                    .push(Disjunct { bound, atoms });
            }
            "generator" => {
                p.template = true;
                let name = p.ident("a generator name")?;
                p.expect(Tok::LParen, "`(`")?;
                let var = p.ident("the generator variable")?;
                match p.peek() {
                    Some(Tok::Ident(w)) if w == "in" => p.pos += 1,
                    _ => return p.err("expected `in`"),
                }
                let start = p.int("a start value")?;
                p.expect(Tok::DotDot, "`..`")?;
                p.expect(Tok::RParen, "`)`")?;
                p.expect(Tok::Colon, "`:`")?;
                p.index_vars.push(var.clone());
                let mut bound = Vec::new();
                if matches!(p.peek(), Some(Tok::Ident(w)) if w == "exists") {
                    p.pos += 1;
                    bound = p.decls()?;
                }
                let body = p.conj(None)?;
                let open = self.current.as_mut().unwrap();
                open.case
                    .get_or_insert_with(|| (None, line, empty_case()))
                    .2
                    .generators
                    .push(Generator {
                        name,
                        var,
                        start,
                        bound,
                        body,
                    });
            }
            other => {
                return Err(Error::Parse {
                    line,
                    msg: format!("unknown directive `{other}`"),
                })
            }
        }
        Ok(())
    }

    fn parser<'a>(&self, line: usize, toks: &'a [Spanned], end_col: usize) -> LineParser<'a> {
        LineParser {
            line,
            toks,
            pos: 0,
            end_col,
            mode: self.mode,
            params: 0,
            decls: BTreeMap::new(),
            index_vars: Vec::new(),
            template: false,
        }
    }

    pub fn finish(mut self) -> Result<Vec<SigmaP1Family>> {
        self.close_family()?;
        Ok(self.done)
    }
}

fn empty_case() -> Case {
    Case {
        arity: ArityRule::Uniform,
        disjuncts: Vec::new(),
        generators: Vec::new(),
    }
}

fn parse_with(text: &str, mode: Mode) -> Result<Vec<SigmaP1Family>> {
    let mut b = FamilyBuilder::new(mode);
    for (i, line) in text.lines().enumerate() {
        b.line(i + 1, line)?;
    }
    b.finish()
}

/// Parse every family of a `.spf` file.
pub fn parse_families(text: &str) -> Result<Vec<SigmaP1Family>> {
    parse_with(text, Mode::Positive)
}

/// Parse a file holding exactly one family.
pub fn parse_family(text: &str) -> Result<SigmaP1Family> {
    let mut fams = parse_families(text)?;
    match fams.len() {
        1 => Ok(fams.pop().unwrap()),
        n => Err(Error::Parse {
            line: 0,
            msg: format!("expected exactly one family, found {n}"),
        }),
    }
}

/// Parse Σᶜ₁ families: like `.spf` but atoms may be negated with `!`,
/// `¬`, `~` or `not`. Negated equalities normalize to `<>` and vice versa.
pub fn parse_classical(text: &str) -> Result<Vec<SigmaP1Family>> {
    parse_with(text, Mode::Classical)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_disjunct() {
        let f = parse_family("family f\ndisjunct exists y . E(x1,y)\n").unwrap();
        assert_eq!(f.cases.len(), 1);
        assert_eq!(f.cases[0].arity, ArityRule::List(vec![1]));
        let d = &f.cases[0].disjuncts[0];
        assert_eq!(d.bound_count(), 1);
        assert_eq!(d.atoms[0].args, vec![Term::Free(0), Term::Bound(0)]);
    }

    #[test]
    fn positivity_gate() {
        for (src, token, col) in [
            ("family f\ndisjunct !E(x1,x1)\n", "!", 10),
            ("family f\ndisjunct E(x1,x1) -> E(x1,x1)\n", "->", 19),
            ("family f\ndisjunct ¬E(x1,x1)\n", "¬", 10),
            ("family f\ndisjunct not E(x1,x1)\n", "not", 10),
            ("family f\ndisjunct forall y . E(x1,y)\n", "forall", 10),
        ] {
            assert_eq!(
                parse_families(src).unwrap_err(),
                Error::Positivity {
                    line: 2,
                    col,
                    token: token.into()
                },
                "{src}"
            );
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_families("family f\ndisjunct E(x1,w)\n").unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                line: 2,
                col: 15,
                msg: "unknown variable `w`".into()
            }
        );
        assert!(matches!(
            parse_families("family f\ndisjunct E(x1 x1)\n"),
            Err(Error::Syntax { line: 2, .. })
        ));
        assert!(parse_families("disjunct E(x1,x1)\n").is_err());
        assert!(parse_families("family f\nparams 1\ndisjunct E(x1,z2)\n").is_err());
        assert!(parse_families("family f\narity 1\ndisjunct E(x1,x2)\n").is_err());
    }

    #[test]
    fn classical_negation_only_on_atoms() {
        let f = &parse_classical("family f\ndisjunct !E(x1,x2) & !x1 = x2\n").unwrap()[0];
        let preds: Vec<_> = f.cases[0].disjuncts[0].atoms.iter().map(|a| a.pred.clone()).collect();
        assert_eq!(preds, vec![Pred::NotRel("E".into()), Pred::Neq]);
        assert!(parse_classical("family f\ndisjunct !(E(x1,x2))\n").is_err());
        assert!(parse_classical("family f\ndisjunct !exists y . E(x1,y)\n").is_err());
        assert!(matches!(
            parse_classical("family f\ndisjunct E(x1,x2) -> E(x2,x1)\n"),
            Err(Error::Positivity { .. })
        ));
    }

    #[test]
    fn generator_scoping() {
        assert!(parse_families(
            "family f\ngenerator g(n in 1..): exists y[1..n] . rep i=1..n : (E(y[i],x1) & E(x1,y[i]))\n"
        )
        .is_ok());
        assert!(parse_families("family f\ngenerator g(n in 1..): exists y[1..n] . E(y[k],x1)\n")
            .is_err());
        assert!(parse_families("family f\ndisjunct exists y[1..2] . E(y[1],x1)\n").is_err());
    }

    #[test]
    fn multiple_families_and_cases() {
        let fams = parse_families(
            "family a\narity 1 2\ndisjunct E(x1,x1)\narity uniform\ndisjunct true\nfamily b\nparams 1\ndisjunct E(z1,x1)\n",
        )
        .unwrap();
        assert_eq!(fams.len(), 2);
        assert_eq!(fams[0].cases.len(), 2);
        assert_eq!(fams[0].formula(2).disjuncts.len(), 2);
        assert_eq!(fams[0].formula(3).disjuncts.len(), 1);
        assert_eq!(fams[1].params, 1);
    }
}
