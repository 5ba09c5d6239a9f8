use thiserror::Error;

use super::{Atom, BinOp, Constant, FormulaError, QuasiIdentity, Relation, Term, MAX_VARIABLES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Const(Constant),
    Star,
    Op(BinOp),
    LParen,
    RParen,
    Rel(Relation),
    Amp,
    Implies,
    Forall,
    Colon,
}

fn describe(t: Option<&Tok>) -> String {
    match t {
        None => "end of input".to_string(),
        Some(Tok::Ident(s)) => format!("`{s}`"),
        Some(Tok::Const(Constant::One)) => "`1`".into(),
        Some(Tok::Const(Constant::Zero)) => "`0`".into(),
        Some(Tok::Star) => "`*`".into(),
        Some(Tok::Op(op)) => format!("`{}`", op.symbol()),
        Some(Tok::LParen) => "`(`".into(),
        Some(Tok::RParen) => "`)`".into(),
        Some(Tok::Rel(r)) => format!("`{}`", r.symbol()),
        Some(Tok::Amp) => "`&`".into(),
        Some(Tok::Implies) => "`=>`".into(),
        Some(Tok::Forall) => "`forall`".into(),
        Some(Tok::Colon) => "`:`".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let rest = &text[i..];
        let (tok, len) = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'*' => (Tok::Star, 1),
            b'.' => (Tok::Op(BinOp::Odot), 1),
            b'(' => (Tok::LParen, 1),
            b')' => (Tok::RParen, 1),
            b'&' => (Tok::Amp, 1),
            b':' => (Tok::Colon, 1),
            b'0' => (Tok::Const(Constant::Zero), 1),
            b'1' => (Tok::Const(Constant::One), 1),
            _ if rest.starts_with("->") => (Tok::Op(BinOp::Arrow), 2),
            _ if rest.starts_with("/\\") => (Tok::Op(BinOp::Meet), 2),
            _ if rest.starts_with("\\/") => (Tok::Op(BinOp::Join), 2),
            _ if rest.starts_with("=>") => (Tok::Implies, 2),
            _ if rest.starts_with("<=Q") => (Tok::Rel(Relation::LeqQ), 3),
            _ if rest.starts_with("<=") => (Tok::Rel(Relation::Leq), 2),
            b'=' => (Tok::Rel(Relation::Eq), 1),
            _ if c.is_ascii_alphabetic() => {
                let len = rest
                    .bytes()
                    .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_')
                    .count();
                let word = &rest[..len];
                let tok = match word {
                    "cap" => Tok::Op(BinOp::Cap),
                    "cup" => Tok::Op(BinOp::Cup),
                    "oplus" => Tok::Op(BinOp::Oplus),
                    "forall" => Tok::Forall,
                    _ => Tok::Ident(word.to_string()),
                };
                (tok, len)
            }
            _ => {
                let ch = rest.chars().next().unwrap();
                return Err(ParseError::Syntax {
                    position: start,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        };
        out.push((tok, start));
        i += len;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn error<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            position: self.offset(),
            message: format!("expected {expected}, found {}", describe(self.peek())),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(what)
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let lhs = self.mid()?;
        if self.peek() == Some(&Tok::Op(BinOp::Arrow)) {
            self.pos += 1;
            let rhs = self.term()?;
            return Ok(Term::arrow(lhs, rhs));
        }
        Ok(lhs)
    }

    fn mid(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.postfix()?;
        while let Some(Tok::Op(op)) = self.peek() {
            let op = *op;
            if op == BinOp::Arrow {
                break;
            }
            self.pos += 1;
            let rhs = self.postfix()?;
            lhs = Term::bin(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn postfix(&mut self) -> Result<Term, ParseError> {
        let mut t = self.primary()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            t = t.star();
        }
        Ok(t)
    }

    fn primary(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => {
                let Some(Tok::Ident(name)) = self.bump() else { unreachable!() };
                Ok(Term::Var(name))
            }
            Some(Tok::Const(c)) => {
                let c = *c;
                self.pos += 1;
                Ok(Term::Const(c))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => self.error("a variable, constant or `(`"),
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let lhs = self.term()?;
        let rel = match self.peek() {
            Some(Tok::Rel(r)) => *r,
            _ => return self.error("`=`, `<=` or `<=Q`"),
        };
        self.pos += 1;
        let rhs = self.term()?;
        Ok(Atom::new(rel, lhs, rhs))
    }

    fn atoms(&mut self) -> Result<Vec<Atom>, ParseError> {
        let mut out = vec![self.atom()?];
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            out.push(self.atom()?);
        }
        Ok(out)
    }

    fn declaration(&mut self) -> Result<Option<Vec<String>>, ParseError> {
        if self.peek() != Some(&Tok::Forall) {
            return Ok(None);
        }
        self.pos += 1;
        let mut vars = Vec::new();
        while let Some(Tok::Ident(v)) = self.peek() {
            vars.push(v.clone());
            self.pos += 1;
        }
        if vars.is_empty() {
            return self.error("a variable name");
        }
        self.expect(Tok::Colon, "`:`")?;
        Ok(Some(vars))
    }
}

fn parser(text: &str) -> Result<Parser, ParseError> {
    Ok(Parser {
        toks: lex(text)?,
        pos: 0,
        end: text.len(),
    })
}

/// Parses a formula, allowing at most [`MAX_VARIABLES`] variables.
pub fn parse_formula(text: &str) -> Result<QuasiIdentity, ParseError> {
    parse_formula_with_limit(text, MAX_VARIABLES)
}

pub fn parse_formula_with_limit(text: &str, limit: usize) -> Result<QuasiIdentity, ParseError> {
    let mut p = parser(text)?;
    let declared = p.declaration()?;
    let first = p.atoms()?;
    let (premises, conclusions) = if p.peek() == Some(&Tok::Implies) {
        p.pos += 1;
        (first, p.atoms()?)
    } else {
        (Vec::new(), first)
    };
    if p.peek().is_some() {
        return p.error("`&`, `=>` or end of input");
    }
    Ok(QuasiIdentity::new(declared, premises, conclusions, limit)?)
}

/// Parses a lone term.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = parser(text)?;
    let t = p.term()?;
    if p.peek().is_some() {
        return p.error("end of input");
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Term {
        Term::var("x")
    }
    fn y() -> Term {
        Term::var("y")
    }

    #[test]
    fn implicative_axiom() {
        let q = parse_formula("(x -> y) -> x = x").unwrap();
        assert!(q.premises().is_empty());
        assert_eq!(
            q.conclusions(),
            [Atom::eq(Term::arrow(Term::arrow(x(), y()), x()), x())]
        );
        assert_eq!(q.variables(), ["x", "y"]);
    }

    #[test]
    fn single_production() {
        let q = parse_formula("x -> x = 1").unwrap();
        assert_eq!(q.conclusions(), [Atom::eq(Term::arrow(x(), x()), Term::one())]);
    }

    #[test]
    fn conditional_with_one_premise() {
        let q = parse_formula("x <=Q y => y -> x* = x*").unwrap();
        assert_eq!(q.premises(), [Atom::new(Relation::LeqQ, x(), y())]);
        assert_eq!(
            q.conclusions(),
            [Atom::eq(Term::arrow(y(), x().star()), x().star())]
        );
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse_term("x -> y -> x").unwrap(),
            Term::arrow(x(), Term::arrow(y(), x()))
        );
        assert_eq!(
            parse_term("x . y cap x").unwrap(),
            Term::bin(BinOp::Cap, Term::bin(BinOp::Odot, x(), y()), x())
        );
        assert_eq!(
            parse_term("x* -> y . x").unwrap(),
            Term::arrow(x().star(), Term::bin(BinOp::Odot, y(), x()))
        );
        assert_eq!(
            parse_term("x /\\ y \\/ x").unwrap(),
            Term::bin(BinOp::Join, Term::bin(BinOp::Meet, x(), y()), x())
        );
        assert_eq!(parse_term("(x -> y)**").unwrap(), Term::arrow(x(), y()).star().star());
    }

    #[test]
    fn conjunctions_and_declarations() {
        let q = parse_formula("forall y x: x <= y & y <= x => x = y").unwrap();
        assert_eq!(q.variables(), ["y", "x"]);
        assert_eq!(q.premises().len(), 2);
        let q = parse_formula("0 <=Q x & x <=Q 1").unwrap();
        assert_eq!(q.conclusions().len(), 2);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_formula("x -> = 1").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { position: 5, .. }), "{err}");
        let err = parse_formula("x -> x").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { position: 6, .. }), "{err}");
        let err = parse_formula("x ? y").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { position: 2, .. }), "{err}");
        let err = parse_formula("(x = y").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { .. }), "{err}");
        let err = parse_formula("x = y y").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { position: 6, .. }), "{err}");
    }

    #[test]
    fn undeclared_variable() {
        assert_eq!(
            parse_formula("forall x: x = y").unwrap_err(),
            ParseError::Formula(FormulaError::Undeclared("y".into()))
        );
    }

    #[test]
    fn variable_limit_is_configurable() {
        let text = "a -> b -> c -> d -> e -> f -> g = 1";
        assert!(matches!(
            parse_formula(text).unwrap_err(),
            ParseError::Formula(FormulaError::TooManyVariables { found: 7, limit: 6 })
        ));
        assert!(parse_formula_with_limit(text, 7).is_ok());
    }

    #[test]
    fn keywords_are_not_variables() {
        assert!(parse_formula("cap = x").is_err());
        assert!(parse_formula("x1 cap y_2 = x1").is_ok());
    }
}
