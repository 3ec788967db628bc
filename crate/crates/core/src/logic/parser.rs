use super::formula::Formula;
use crate::error::{Error, Result};
use crate::structure::Signature;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Bang,
    Amp,
    Bar,
    Arrow,
    DArrow,
    Equals,
    Forall,
    Exists,
    True,
    False,
}

struct Lexed {
    toks: Vec<(Tok, usize, usize)>,
    end: (usize, usize),
}

fn lex(text: &str) -> Result<Lexed> {
    let mut toks = Vec::new();
    let (mut line, mut col) = (1, 1);
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        let mut advance = |n: usize, i: &mut usize| {
            *i += n;
            col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                advance(1, &mut i);
                continue;
            }
            '(' | ')' | ',' | '.' | '!' | '&' | '|' | '=' => {
                let t = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    '.' => Tok::Dot,
                    '!' => Tok::Bang,
                    '&' => Tok::Amp,
                    '|' => Tok::Bar,
                    _ => Tok::Equals,
                };
                advance(1, &mut i);
                toks.push((t, start.0, start.1));
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                advance(2, &mut i);
                toks.push((Tok::Arrow, start.0, start.1));
            }
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                advance(3, &mut i);
                toks.push((Tok::DArrow, start.0, start.1));
            }
            c if c.is_alphanumeric() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                let t = match word.as_str() {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Ident(word),
                };
                advance(j - i, &mut i);
                toks.push((t, start.0, start.1));
            }
            other => {
                return Err(Error::syntax(line, col, format!("unexpected character '{other}'")))
            }
        }
    }
    Ok(Lexed {
        toks,
        end: (line, col),
    })
}

struct Parser {
    lexed: Lexed,
    at: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.lexed.toks.get(self.at).map(|t| &t.0)
    }

    fn pos(&self) -> (usize, usize) {
        self.lexed
            .toks
            .get(self.at)
            .map(|t| (t.1, t.2))
            .unwrap_or(self.lexed.end)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (l, c) = self.pos();
        Error::syntax(l, c, msg)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn iff(&mut self) -> Result<Formula> {
        let lhs = self.implies()?;
        if self.eat(&Tok::DArrow) {
            Ok(Formula::iff(lhs, self.iff()?))
        } else {
            Ok(lhs)
        }
    }

    fn implies(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if self.eat(&Tok::Arrow) {
            Ok(Formula::implies(lhs, self.implies()?))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula> {
        let mut parts = vec![self.and()?];
        while self.eat(&Tok::Bar) {
            parts.push(self.and()?);
        }
        Ok(Formula::or(parts))
    }

    fn and(&mut self) -> Result<Formula> {
        let mut parts = vec![self.unary()?];
        while self.eat(&Tok::Amp) {
            parts.push(self.unary()?);
        }
        Ok(Formula::and(parts))
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.at += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Forall) | Some(Tok::Exists) => {
                let universal = self.peek() == Some(&Tok::Forall);
                self.at += 1;
                let v = self.ident("variable after quantifier")?;
                self.expect(Tok::Dot, "'.' after quantified variable")?;
                let body = self.iff()?;
                Ok(if universal {
                    Formula::forall(&v, body)
                } else {
                    Formula::exists(&v, body)
                })
            }
            Some(Tok::True) => {
                self.at += 1;
                Ok(Formula::True)
            }
            Some(Tok::False) => {
                self.at += 1;
                Ok(Formula::False)
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let f = self.iff()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Some(Tok::Ident(_)) => {
                let name = self.ident("identifier")?;
                if self.eat(&Tok::LParen) {
                    let mut args = vec![self.ident("variable")?];
                    while self.eat(&Tok::Comma) {
                        args.push(self.ident("variable")?);
                    }
                    self.expect(Tok::RParen, "')' closing argument list")?;
                    Ok(Formula::Atom(name, args))
                } else if self.eat(&Tok::Equals) {
                    let rhs = self.ident("variable after '='")?;
                    Ok(Formula::Eq(name, rhs))
                } else {
                    Err(self.err("expected '(' or '=' after identifier"))
                }
            }
            Some(_) => Err(self.err("unexpected token")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses without checking symbols against a signature.
pub fn parse_formula_untyped(text: &str) -> Result<Formula> {
    let mut p = Parser {
        lexed: lex(text)?,
        at: 0,
    };
    let f = p.iff()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(f)
}

/// Parses `text` and type-checks every atom against `sig`.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula> {
    let f = parse_formula_untyped(text)?;
    f.typecheck(sig)?;
    Ok(f)
}

/// Parses a closed formula; free variables are reported as an error.
pub fn parse_sentence(text: &str, sig: &Signature) -> Result<Formula> {
    let f = parse_formula(text, sig)?;
    f.require_sentence()?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r2() -> Signature {
        Signature::from_pairs(&[("R", 2)]).unwrap()
    }

    #[test]
    fn rank_and_sentence() {
        let f = parse_formula("forall x. exists y. R(x,y)", &r2()).unwrap();
        assert!(f.is_sentence());
        assert_eq!(f.quantifier_rank(), 2);
    }

    #[test]
    fn scope_extends_right() {
        let f = parse_formula("forall x.(exists y. R(x,y)) & (exists z. R(z,x))", &r2()).unwrap();
        assert!(f.is_sentence());
        assert_eq!(f.quantifier_rank(), 2);
    }

    #[test]
    fn arity_error() {
        let e = parse_formula("R(x)", &r2()).unwrap_err();
        assert!(matches!(e, Error::Arity { expected: 2, got: 1, .. }));
    }

    #[test]
    fn open_formula() {
        let f = parse_formula("!(x = y) & R(x,y)", &r2()).unwrap();
        let free: Vec<_> = f.free_vars().into_iter().collect();
        assert_eq!(free, vec!["x", "y"]);
        assert!(matches!(parse_sentence("R(x,y)", &r2()), Err(Error::NotASentence(_))));
    }

    #[test]
    fn precedence() {
        let f = parse_formula_untyped("!a = b & c = d | e = f -> g = h <-> i = j").unwrap();
        let expect = Formula::iff(
            Formula::implies(
                Formula::or(vec![
                    Formula::and(vec![Formula::not(Formula::eq("a", "b")), Formula::eq("c", "d")]),
                    Formula::eq("e", "f"),
                ]),
                Formula::eq("g", "h"),
            ),
            Formula::eq("i", "j"),
        );
        assert_eq!(f, expect);
    }

    #[test]
    fn render_round_trip() {
        for s in [
            "forall x. exists y. R(x,y) & !(x = y)",
            "(forall x. R(x,x)) | R(a,b) -> a = b",
            "!(exists x. true) <-> (false <-> a = a)",
            "R(a,b) & (R(b,a) & R(a,a))",
            "(a = b -> b = a) -> a = a",
        ] {
            let f = parse_formula_untyped(s).unwrap();
            let g = parse_formula_untyped(&f.to_string()).unwrap();
            assert_eq!(f, g, "{s} rendered as {f}");
        }
    }

    #[test]
    fn syntax_position() {
        match parse_formula_untyped("R(x,\n  y") {
            Err(Error::Syntax { pos, .. }) => assert_eq!((pos.line, pos.col), (2, 4)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn alpha_equivalence() {
        let a = parse_formula_untyped("exists x. P(x)").unwrap();
        let b = parse_formula_untyped("exists y. P(y)").unwrap();
        assert_ne!(a, b);
        assert_eq!(a.alpha_key(), b.alpha_key());
    }
}
