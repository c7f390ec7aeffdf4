//! S-expression front end for diagrams.
//!
//! ```text
//! expr := "(" gen label+ ")" | "(" "basis" a b c i ")" | "(" op expr+ ")"
//! op   := compose | tensor | trace
//! ```
//!
//! `(compose f g)` is f∘g. Labels are display names.

use std::fmt;

use crate::category::CategoryData;
use crate::engine::{eval_diagram, Diagram, Generator};
use crate::error::{Error, Result};
use crate::hom::HomMorphism;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Atom {
        gen: String,
        args: Vec<String>,
        pos: Pos,
    },
    Op {
        op: String,
        args: Vec<Expr>,
        pos: Pos,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub pos: Pos,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: expected {}, found {}",
            self.pos.line,
            self.pos.col,
            self.expected.join(" | "),
            self.found
        )
    }
}

impl std::error::Error for ParseError {}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Parse(e.to_string())
    }
}

const GENS: [&str; 11] = [
    "id",
    "cup",
    "cap",
    "cupL",
    "capL",
    "braid",
    "braidinv",
    "twist",
    "twistinv",
    "basis",
    "dualbasis",
];
const OPS: [&str; 3] = ["compose", "tensor", "trace"];

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Open,
    Close,
    Word(String),
    End,
}

fn lex(src: &str) -> Vec<(Tok, Pos)> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut chars = src.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let pos = Pos { line, col };
        match ch {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '(' | ')' => {
                chars.next();
                col += 1;
                out.push((if ch == '(' { Tok::Open } else { Tok::Close }, pos));
            }
            _ => {
                let mut w = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' {
                        break;
                    }
                    w.push(c);
                    chars.next();
                    col += 1;
                }
                out.push((Tok::Word(w), pos));
            }
        }
    }
    out.push((Tok::End, Pos { line, col }));
    out
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Open => "'('".into(),
        Tok::Close => "')'".into(),
        Tok::Word(w) => format!("{w:?}"),
        Tok::End => "end of input".into(),
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &(Tok, Pos) {
        &self.toks[self.at]
    }

    fn fail<T>(&self, expected: Vec<&'static str>) -> std::result::Result<T, ParseError> {
        let (t, pos) = self.peek();
        Err(ParseError {
            pos: *pos,
            expected,
            found: describe(t),
        })
    }

    fn expr(&mut self) -> std::result::Result<Expr, ParseError> {
        if self.peek().0 != Tok::Open {
            return self.fail(vec!["'('"]);
        }
        self.at += 1;
        let (head, pos) = match self.peek().clone() {
            (Tok::Word(w), p) if GENS.contains(&w.as_str()) || OPS.contains(&w.as_str()) => (w, p),
            _ => {
                let mut exp: Vec<&'static str> = GENS.to_vec();
                exp.extend(OPS);
                return self.fail(exp);
            }
        };
        self.at += 1;
        let e = if OPS.contains(&head.as_str()) {
            let mut args = vec![self.expr()?];
            while self.peek().0 == Tok::Open {
                args.push(self.expr()?);
            }
            Expr::Op {
                op: head,
                args,
                pos,
            }
        } else {
            let mut args = Vec::new();
            while let Tok::Word(w) = &self.peek().0 {
                args.push(w.clone());
                self.at += 1;
            }
            if args.is_empty() {
                return self.fail(vec!["label"]);
            }
            Expr::Atom {
                gen: head,
                args,
                pos,
            }
        };
        if self.peek().0 != Tok::Close {
            return self.fail(if matches!(e, Expr::Op { .. }) {
                vec!["'('", "')'"]
            } else {
                vec!["label", "')'"]
            });
        }
        self.at += 1;
        Ok(e)
    }
}

pub fn parse_diagram(src: &str) -> std::result::Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(src),
        at: 0,
    };
    let e = p.expr()?;
    if p.peek().0 != Tok::End {
        return p.fail(vec!["end of input"]);
    }
    Ok(e)
}

fn arity(gen: &str, pos: Pos, want: &str, got: usize) -> Error {
    Error::Parse(format!(
        "line {}, column {}: {gen} takes {want}, got {got} arguments",
        pos.line, pos.col
    ))
}

/// Resolve labels and arities against `cat`.
pub fn to_diagram(cat: &CategoryData, e: &Expr) -> Result<Diagram> {
    match e {
        Expr::Op { op, args, pos } => {
            let parts = args
                .iter()
                .map(|a| to_diagram(cat, a))
                .collect::<Result<Vec<_>>>()?;
            match op.as_str() {
                "compose" => Ok(Diagram::Compose(parts)),
                "tensor" => Ok(Diagram::Tensor(parts)),
                _ => {
                    let mut parts = parts;
                    if parts.len() != 1 {
                        return Err(arity("trace", *pos, "1 expression", parts.len()));
                    }
                    Ok(Diagram::Trace(Box::new(parts.remove(0))))
                }
            }
        }
        Expr::Atom { gen, args, pos } => {
            let n = args.len();
            let lab = |k: usize| cat.label_or_err(&args[k]);
            let one = |g: fn(usize) -> Generator| -> Result<Generator> {
                if n != 1 {
                    return Err(arity(gen, *pos, "1 label", n));
                }
                Ok(g(lab(0)?))
            };
            let g = match gen.as_str() {
                "id" => Generator::Id(
                    args.iter()
                        .map(|s| cat.label_or_err(s))
                        .collect::<Result<_>>()?,
                ),
                "cup" => one(Generator::Cup)?,
                "cap" => one(Generator::Cap)?,
                "cupL" => one(Generator::CupL)?,
                "capL" => one(Generator::CapL)?,
                "twist" => one(Generator::Twist)?,
                "twistinv" => one(Generator::TwistInv)?,
                "braid" | "braidinv" => {
                    if n != 2 {
                        return Err(arity(gen, *pos, "2 labels", n));
                    }
                    if gen == "braid" {
                        Generator::Braid(lab(0)?, lab(1)?)
                    } else {
                        Generator::BraidInv(lab(0)?, lab(1)?)
                    }
                }
                _ => {
                    if n != 3 && n != 4 {
                        return Err(arity(gen, *pos, "3 labels and an optional index", n));
                    }
                    let i = if n == 4 {
                        args[3].parse::<usize>().map_err(|_| {
                            Error::Parse(format!(
                                "line {}, column {}: bad multiplicity index {:?}",
                                pos.line, pos.col, args[3]
                            ))
                        })?
                    } else {
                        0
                    };
                    let (a, b, c) = (lab(0)?, lab(1)?, lab(2)?);
                    if i >= cat.n(a, b, c) {
                        return Err(Error::Value(format!(
                            "{} x {} -> {} has no vertex {i}",
                            args[0], args[1], args[2]
                        )));
                    }
                    if gen == "basis" {
                        Generator::BasisVertex(a, b, c, i)
                    } else {
                        Generator::DualVertex(a, b, c, i)
                    }
                }
            };
            Ok(Diagram::Gen(g))
        }
    }
}

/// Parse and evaluate.
pub fn eval_str(cat: &CategoryData, src: &str) -> Result<HomMorphism> {
    let e = parse_diagram(src)?;
    eval_diagram(cat, &to_diagram(cat, &e)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::numeric::C64;

    fn scalar(cat: &CategoryData, s: &str) -> C64 {
        eval_str(cat, s).unwrap().scalar_value().unwrap()
    }

    #[test]
    fn loops() {
        let fib = builtins::fibonacci();
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((scalar(&fib, "(trace (id tau))") - golden).norm() < 1e-12);
        assert!((scalar(&fib, "(trace (id 1))") - 1.0).norm() < 1e-12);
        let want = C64::from_polar(golden, -4.0 * std::f64::consts::PI / 5.0);
        assert!((scalar(&fib, "(trace\n  (twist tau))") - want).norm() < 1e-12);
    }

    #[test]
    fn compose_and_tensor() {
        let ising = builtins::ising();
        let v = scalar(
            &ising,
            "(compose (capL sigma) (tensor (id sigma) (id sigma)) (cup sigma))",
        );
        assert!((v - 2f64.sqrt()).norm() < 1e-12, "{v}");
        let h = eval_str(
            &ising,
            "(compose (basis sigma sigma eps) (dualbasis sigma sigma eps 0))",
        )
        .unwrap();
        let eps = ising.label("eps").unwrap();
        assert_eq!(h.src, vec![eps]);
        assert!(h.max_diff(&HomMorphism::identity(&ising, &[eps])).unwrap() < 1e-12);
    }

    #[test]
    fn positioned_errors() {
        let e = parse_diagram("(trace\n  (idd tau))").unwrap_err();
        assert_eq!(e.pos, Pos { line: 2, col: 4 });
        assert!(e.expected.contains(&"id") && e.expected.contains(&"trace"));
        let e = parse_diagram("(trace (id tau)").unwrap_err();
        assert_eq!(e.found, "end of input");
        assert_eq!(e.expected, vec!["'('", "')'"]);
        let e = parse_diagram("(id)").unwrap_err();
        assert_eq!(e.expected, vec!["label"]);
        assert!(parse_diagram("(id tau) x").is_err());
    }

    #[test]
    fn resolution_errors() {
        let fib = builtins::fibonacci();
        assert!(eval_str(&fib, "(trace (id sigma))").is_err());
        assert!(eval_str(&fib, "(braid tau)").is_err());
        assert!(eval_str(&fib, "(trace (id tau) (id tau))").is_err());
        assert!(eval_str(&fib, "(compose (cap tau) (cap tau))").is_err());
    }
}
