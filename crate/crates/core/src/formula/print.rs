//! Canonical text for formulas. `parse(print(f)) == f` for parsed families.

use std::fmt::{self, Display, Formatter, Write as _};

use super::{
    ArityRule, Atom, BoundDecl, Disjunct, Generator, IExpr, Pred, SigmaP1Family, SigmaP1Formula,
    TAtom, TItem, TTerm, Term,
};

fn write_atom<T>(
    f: &mut Formatter<'_>,
    pred: &Pred,
    args: &[T],
    term: impl Fn(&T) -> String,
) -> fmt::Result {
    match pred {
        Pred::Eq | Pred::Neq if args.len() == 2 => {
            let op = if *pred == Pred::Eq { "=" } else { "<>" };
            write!(f, "{} {op} {}", term(&args[0]), term(&args[1]))
        }
        Pred::Eq | Pred::Neq => unreachable!("equality atoms are binary"),
        Pred::Rel(r) | Pred::NotRel(r) => {
            if matches!(pred, Pred::NotRel(_)) {
                f.write_char('!')?;
            }
            let args: Vec<String> = args.iter().map(term).collect();
            write!(f, "{r}({})", args.join(","))
        }
    }
}

fn term_text(t: &Term, bound: &[String]) -> String {
    match t {
        Term::Free(k) => format!("x{}", k + 1),
        Term::Param(k) => format!("z{}", k + 1),
        Term::Bound(i) => bound[*i].clone(),
    }
}

struct AtomIn<'a>(&'a Atom, &'a [String]);

impl Display for AtomIn<'_> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_atom(f, &self.0.pred, &self.0.args, |t| term_text(t, self.1))
    }
}

impl Display for Disjunct {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if !self.bound.is_empty() {
            write!(f, "exists {} . ", self.bound.join(" "))?;
        }
        if self.atoms.is_empty() {
            return f.write_str("true");
        }
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            write!(f, "{}", AtomIn(a, &self.bound))?;
        }
        Ok(())
    }
}

impl Display for IExpr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            IExpr::Lit(v) => write!(f, "{v}"),
            IExpr::Var(v) => f.write_str(v),
            IExpr::Add(a, b) => write!(f, "{a}+{b}"),
            IExpr::Sub(a, b) => write!(f, "{a}-{b}"),
        }
    }
}

fn tterm_text(t: &TTerm) -> String {
    match t {
        TTerm::Free(k) => format!("x{}", k + 1),
        TTerm::Param(k) => format!("z{}", k + 1),
        TTerm::Plain(n) => n.clone(),
        TTerm::Indexed(n, e) => format!("{n}[{e}]"),
    }
}

impl Display for TAtom {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_atom(f, &self.pred, &self.args, tterm_text)
    }
}

struct Items<'a>(&'a [TItem]);

impl Display for Items<'_> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("true");
        }
        for (i, it) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            match it {
                TItem::Atom(a) => write!(f, "{a}")?,
                TItem::Rep { var, lo, hi, body } => {
                    write!(f, "rep {var}={lo}..{hi} : ")?;
                    if body.len() == 1 && matches!(body[0], TItem::Atom(_)) {
                        write!(f, "{}", Items(body))?;
                    } else {
                        write!(f, "({})", Items(body))?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Display for Generator {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{}({} in {}..): ", self.name, self.var, self.start)?;
        if !self.bound.is_empty() {
            let decls: Vec<String> = self
                .bound
                .iter()
                .map(|d| match d {
                    BoundDecl::Plain(n) => n.clone(),
                    BoundDecl::Indexed { name, lo, hi } => format!("{name}[{lo}..{hi}]"),
                })
                .collect();
            write!(f, "exists {} . ", decls.join(" "))?;
        }
        write!(f, "{}", Items(&self.body))
    }
}

impl Display for SigmaP1Family {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        writeln!(f, "family {}", self.name)?;
        if self.params > 0 {
            writeln!(f, "params {}", self.params)?;
        }
        for c in &self.cases {
            match &c.arity {
                ArityRule::Uniform => writeln!(f, "arity uniform")?,
                ArityRule::List(l) => {
                    let l: Vec<String> = l.iter().map(|a| a.to_string()).collect();
                    writeln!(f, "arity {}", l.join(" "))?
                }
            }
            for d in &c.disjuncts {
                writeln!(f, "disjunct {d}")?;
            }
            for g in &c.generators {
                writeln!(f, "generator {g}")?;
            }
        }
        Ok(())
    }
}

impl Display for SigmaP1Formula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if self.disjuncts.is_empty() && self.generators.is_empty() {
            return f.write_str("false");
        }
        let mut first = true;
        for d in &self.disjuncts {
            if !first {
                f.write_str(" | ")?;
            }
            first = false;
            write!(f, "({d})")?;
        }
        for g in &self.generators {
            if !first {
                f.write_str(" | ")?;
            }
            first = false;
            write!(f, "(generator {g})")?;
        }
        Ok(())
    }
}
