//! Recursive-descent parser for the formula grammar.
//!
//! ```text
//! formula  := or ('->' formula)?
//! or       := and ('|' and)*
//! and      := unary ('&' unary)*
//! unary    := '!' unary | quant | primary
//! quant    := ('forall' | 'exists') var ('in' rel)? '.' formula
//! primary  := '(' formula ')' | rel '(' term (',' term)* ')'
//!           | term '=' term | term 'in' term
//! term     := var | 'c' digits
//! ```

use super::formula::{Formula, Signature, Term, MEMBERSHIP};
use super::LogicError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Eq,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Dot => "`.`".into(),
        Tok::Bang => "`!`".into(),
        Tok::Amp => "`&`".into(),
        Tok::Pipe => "`|`".into(),
        Tok::Arrow => "`->`".into(),
        Tok::Eq => "`=`".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, LogicError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '!' => Tok::Bang,
            '&' => Tok::Amp,
            '|' => Tok::Pipe,
            '=' => Tok::Eq,
            '-' => {
                chars.next();
                match chars.peek() {
                    Some(&(_, '>')) => {}
                    _ => {
                        return Err(LogicError::Syntax {
                            position: pos,
                            expected: "`->`".into(),
                        })
                    }
                }
                Tok::Arrow
            }
            c if c.is_alphanumeric() || c == '_' => {
                let mut ident = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' || c == '\'' {
                        ident.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((pos, Tok::Ident(ident)));
                continue;
            }
            _ => {
                return Err(LogicError::Syntax {
                    position: pos,
                    expected: "a token".into(),
                })
            }
        };
        chars.next();
        out.push((pos, tok));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

fn constant_index(ident: &str) -> Option<usize> {
    let digits = ident.strip_prefix('c')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

fn is_keyword(ident: &str) -> bool {
    matches!(ident, "forall" | "exists" | "in")
}

struct Parser<'s> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    sig: &'s Signature,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> Result<T, LogicError> {
        Err(LogicError::Syntax {
            position: self.pos(),
            expected: format!("{expected}, found {}", describe(self.peek())),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), LogicError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(&describe(&tok))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, LogicError> {
        match self.peek() {
            Tok::Ident(s) if !is_keyword(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => self.error(what),
        }
    }

    fn formula(&mut self) -> Result<Formula, LogicError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, LogicError> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Ident(q) if q == "forall" || q == "exists" => {
                let universal = q == "forall";
                self.bump();
                let var = self.ident("a variable")?;
                if constant_index(&var).is_some() {
                    return self.error("a variable");
                }
                let bound = if matches!(self.peek(), Tok::Ident(s) if s == "in") {
                    self.bump();
                    let b = self.ident("a unary relation")?;
                    match self.sig.arity(&b) {
                        Some(1) => {}
                        Some(found) => {
                            return Err(LogicError::ArityMismatch {
                                relation: b,
                                expected: 1,
                                found,
                            })
                        }
                        None => return Err(LogicError::UnknownRelation(b)),
                    }
                    Some(b)
                } else {
                    None
                };
                self.expect(Tok::Dot)?;
                let body = self.formula()?;
                Ok(if universal {
                    Formula::forall(&var, bound.as_deref(), body)
                } else {
                    Formula::exists(&var, bound.as_deref(), body)
                })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, LogicError> {
        if *self.peek() == Tok::LParen {
            self.bump();
            let f = self.formula()?;
            self.expect(Tok::RParen)?;
            return Ok(f);
        }
        if matches!(self.peek(), Tok::Ident(s) if !is_keyword(s)) && *self.peek2() == Tok::LParen {
            let relation = self.ident("a relation")?;
            self.bump();
            let mut args = vec![self.term()?];
            while *self.peek() == Tok::Comma {
                self.bump();
                args.push(self.term()?);
            }
            self.expect(Tok::RParen)?;
            let arity = self
                .sig
                .arity(&relation)
                .ok_or_else(|| LogicError::UnknownRelation(relation.clone()))?;
            if arity != args.len() {
                return Err(LogicError::ArityMismatch {
                    relation,
                    expected: arity,
                    found: args.len(),
                });
            }
            return Ok(Formula::Atom { relation, args });
        }
        let lhs = self.term()?;
        match self.peek() {
            Tok::Eq => {
                self.bump();
                Ok(Formula::Equals(lhs, self.term()?))
            }
            Tok::Ident(s) if s == "in" => {
                self.bump();
                if self.sig.arity(MEMBERSHIP) != Some(2) {
                    return Err(LogicError::UnknownRelation(MEMBERSHIP.into()));
                }
                Ok(Formula::atom(MEMBERSHIP, vec![lhs, self.term()?]))
            }
            _ => self.error("`=` or `in`"),
        }
    }

    fn term(&mut self) -> Result<Term, LogicError> {
        let name = self.ident("a term")?;
        match constant_index(&name) {
            Some(i) if i < self.sig.constants => Ok(Term::Const(i)),
            Some(i) => Err(LogicError::UnknownConstant(i)),
            None => Ok(Term::Var(name)),
        }
    }
}

/// Parses `text` against `sig`, checking relation names and arities.
pub fn parse(text: &str, sig: &Signature) -> Result<Formula, LogicError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        sig,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return p.error("end of input");
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn sig() -> Signature {
        Signature {
            relations: BTreeMap::from([("R".to_string(), 2), ("P".to_string(), 1)]),
            constants: 3,
        }
    }

    #[test]
    fn examples() {
        let f = parse("forall x. x = x", &sig()).unwrap();
        assert_eq!(f, Formula::forall("x", None, Formula::Equals(Term::var("x"), Term::var("x"))));

        let f = parse("exists x. R(x, c0) & !R(c0, x)", &sig()).unwrap();
        let expected = Formula::exists(
            "x",
            None,
            Formula::and(
                Formula::atom("R", vec![Term::var("x"), Term::Const(0)]),
                Formula::not(Formula::atom("R", vec![Term::Const(0), Term::var("x")])),
            ),
        );
        assert_eq!(f, expected);

        assert!(matches!(
            parse("forall x. R(x)", &sig()),
            Err(LogicError::ArityMismatch { .. })
        ));
        assert!(matches!(
            parse("forall x. S(x)", &sig()),
            Err(LogicError::UnknownRelation(_))
        ));
        assert!(matches!(parse("P(c7)", &sig()), Err(LogicError::UnknownConstant(7))));
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse("P(x) | P(y) & P(z) -> P(x) -> P(y)", &sig()).unwrap();
        let p = |v: &str| Formula::atom("P", vec![Term::var(v)]);
        let expected = Formula::implies(
            Formula::or(p("x"), Formula::and(p("y"), p("z"))),
            Formula::implies(p("x"), p("y")),
        );
        assert_eq!(f, expected);
        let f = parse("P(x) & forall y. P(y) | P(x)", &sig()).unwrap();
        assert_eq!(
            f,
            Formula::and(p("x"), Formula::forall("y", None, Formula::or(p("y"), p("x"))))
        );
    }

    #[test]
    fn syntax_errors_report_position() {
        match parse("forall x x = x", &sig()) {
            Err(LogicError::Syntax { position, .. }) => assert_eq!(position, 9),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("P(x) &", &sig()), Err(LogicError::Syntax { position: 6, .. })));
        assert!(matches!(parse("x - y", &sig()), Err(LogicError::Syntax { .. })));
        assert!(matches!(parse("P(x) P(y)", &sig()), Err(LogicError::Syntax { .. })));
    }

    #[test]
    fn bounded_quantifiers_and_membership() {
        let sig = Signature {
            relations: BTreeMap::from([
                ("in".to_string(), 2),
                ("V0".to_string(), 1),
                ("V1".to_string(), 1),
            ]),
            constants: 0,
        };
        let text = "forall s in V1. forall a in V0. a in s | !(a in s)";
        let f = parse(text, &sig).unwrap();
        assert_eq!(f.to_string(), text);
        assert!(matches!(
            parse("forall s in in. s = s", &sig),
            Err(LogicError::Syntax { .. })
        ));
        assert!(matches!(
            parse("forall a in V0. a in a", &Signature { relations: BTreeMap::from([("V0".to_string(), 1)]), constants: 0 }),
            Err(LogicError::UnknownRelation(_))
        ));
    }
}
