//! Object expressions: `A(2) + E(3)`, `U * L(1)[-1]`, `res(A(3), 1)`,
//! `infl(Q[0]; 0; Q[1] + 2*Q[2])`.

use std::fmt;

use mackey_core::amodel::{FiniteLevelObject, GeneratorKind, RigidObject};
use mackey_core::cyclic::CyclicModule;
use mackey_core::homext::GradedRigid;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

/// One level of a finite-level literal: `copies` copies of `Q[Z/p^order]`
/// for each entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelLiteral(pub Vec<(u32, u32)>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObjectExpr {
    Gen(GeneratorKind, u32),
    Sum(Box<ObjectExpr>, Box<ObjectExpr>),
    Tensor(Box<ObjectExpr>, Box<ObjectExpr>),
    Shift(Box<ObjectExpr>, i64),
    Res(Box<ObjectExpr>, u32),
    InflFin(Vec<LevelLiteral>),
}

impl ObjectExpr {
    /// Evaluates to a graded object; generators sit in degree zero, shifts
    /// move degrees and tensor products add them.
    pub fn eval(&self, p: u64) -> mackey_core::Result<GradedRigid> {
        Ok(match self {
            ObjectExpr::Gen(kind, n) => GradedRigid::concentrated(RigidObject::generator(p, *kind, *n)?, 0),
            ObjectExpr::Sum(l, r) => {
                let mut acc = l.eval(p)?;
                let right = r.eval(p)?;
                for d in right.degrees() {
                    acc.insert(d, right.get(d).unwrap().clone())?;
                }
                acc
            }
            ObjectExpr::Tensor(l, r) => {
                let (a, b) = (l.eval(p)?, r.eval(p)?);
                let mut acc = GradedRigid::new(p);
                for i in a.degrees() {
                    for j in b.degrees() {
                        acc.insert(i + j, a.get(i).unwrap().tensor(b.get(j).unwrap())?)?;
                    }
                }
                acc
            }
            ObjectExpr::Shift(e, d) => e.eval(p)?.shift(*d),
            ObjectExpr::Res(e, n) => {
                let g = e.eval(p)?;
                let mut acc = GradedRigid::new(p);
                for d in g.degrees() {
                    acc.insert(d, g.get(d).unwrap().restrict(*n))?;
                }
                acc
            }
            ObjectExpr::InflFin(levels) => {
                let mut modules = Vec::with_capacity(levels.len());
                for (k, lit) in levels.iter().enumerate() {
                    let k = k as u32;
                    let mut m = CyclicModule::zero(p, k);
                    for &(copies, order) in &lit.0 {
                        let reg = CyclicModule::regular(p, order)?.inflate(k)?;
                        for _ in 0..copies {
                            m = m.direct_sum(&reg)?;
                        }
                    }
                    modules.push(m);
                }
                let f = FiniteLevelObject::new(p, modules)?;
                GradedRigid::concentrated(RigidObject::inflate_finite(&f), 0)
            }
        })
    }

    /// The underlying ungraded object: the sum over all degrees.
    pub fn eval_object(&self, p: u64) -> mackey_core::Result<RigidObject> {
        let g = self.eval(p)?;
        let mut acc = RigidObject::zero(p)?;
        for d in g.degrees() {
            acc = acc.direct_sum(g.get(d).unwrap())?;
        }
        Ok(acc)
    }
}

impl fmt::Display for LevelLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (copies, order)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if *copies != 1 {
                write!(f, "{copies}*")?;
            }
            write!(f, "Q[{order}]")?;
        }
        Ok(())
    }
}

impl fmt::Display for ObjectExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ObjectExpr::*;
        let paren = |f: &mut fmt::Formatter<'_>, e: &ObjectExpr, wrap: bool| {
            if wrap {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Gen(kind, n) => write!(f, "{kind}({n})"),
            Sum(l, r) => {
                paren(f, l, false)?;
                f.write_str(" + ")?;
                paren(f, r, matches!(**r, Sum(..)))
            }
            Tensor(l, r) => {
                paren(f, l, matches!(**l, Sum(..)))?;
                f.write_str(" * ")?;
                paren(f, r, matches!(**r, Sum(..) | Tensor(..)))
            }
            Shift(e, d) => {
                paren(f, e, matches!(**e, Sum(..) | Tensor(..)))?;
                write!(f, "[{d}]")
            }
            Res(e, n) => write!(f, "res({e}, {n})"),
            InflFin(levels) => {
                f.write_str("infl(")?;
                for (i, l) in levels.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{l}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A random expression of bounded depth with indices up to `max_index`.
pub fn random_expr<R: rand::Rng>(rng: &mut R, depth: u32, max_index: u32) -> ObjectExpr {
    let kinds = [GeneratorKind::A, GeneratorKind::E, GeneratorKind::L];
    let choice = if depth == 0 { 0 } else { rng.gen_range(0..6) };
    match choice {
        1 => ObjectExpr::Sum(Box::new(random_expr(rng, depth - 1, max_index)), Box::new(random_expr(rng, depth - 1, max_index))),
        2 => ObjectExpr::Tensor(Box::new(random_expr(rng, depth - 1, max_index)), Box::new(random_expr(rng, depth - 1, max_index))),
        3 => ObjectExpr::Shift(Box::new(random_expr(rng, depth - 1, max_index)), rng.gen_range(-3..=3)),
        4 => ObjectExpr::Res(Box::new(random_expr(rng, depth - 1, max_index)), rng.gen_range(0..=max_index)),
        5 => {
            let len = rng.gen_range(1..max_index + 2);
            let levels = (0..len)
                .map(|k| {
                    let terms = rng.gen_range(0..3);
                    LevelLiteral((0..terms).map(|_| (rng.gen_range(1..3), rng.gen_range(0..=k))).collect())
                })
                .collect();
            ObjectExpr::InflFin(levels)
        }
        _ => ObjectExpr::Gen(kinds[rng.gen_range(0..3)], rng.gen_range(0..=max_index)),
    }
}

pub fn parse(input: &str) -> Result<ObjectExpr, ParseError> {
    let mut parser = Parser { chars: input.chars().collect(), pos: 0 };
    let e = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.chars.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: &str) -> ParseError {
        ParseError { offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        let end = self.pos + word.chars().count();
        if end <= self.chars.len() && self.chars[self.pos..end].iter().copied().eq(word.chars()) {
            self.pos = end;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ObjectExpr, ParseError> {
        let mut acc = self.term()?;
        while self.eat('+') {
            let rhs = self.term()?;
            acc = ObjectExpr::Sum(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<ObjectExpr, ParseError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            let rhs = self.factor()?;
            acc = ObjectExpr::Tensor(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<ObjectExpr, ParseError> {
        let mut e = self.atom()?;
        while self.eat('[') {
            let d = self.int()?;
            self.expect(']')?;
            e = ObjectExpr::Shift(Box::new(e), d);
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<ObjectExpr, ParseError> {
        if self.keyword("res") {
            self.expect('(')?;
            let e = self.expr()?;
            self.expect(',')?;
            let n = self.nat()?;
            self.expect(')')?;
            return Ok(ObjectExpr::Res(Box::new(e), n));
        }
        if self.keyword("infl") {
            self.expect('(')?;
            let mut levels = vec![self.level_literal()?];
            while self.eat(';') {
                levels.push(self.level_literal()?);
            }
            self.expect(')')?;
            for (k, lit) in levels.iter().enumerate() {
                if let Some(&(_, order)) = lit.0.iter().find(|(_, o)| *o as usize > k) {
                    return Err(self.error(&format!("Q[{order}] cannot sit at level {k}")));
                }
            }
            return Ok(ObjectExpr::InflFin(levels));
        }
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some('U') => {
                self.pos += 1;
                Ok(ObjectExpr::Gen(GeneratorKind::A, 0))
            }
            Some(c @ ('A' | 'E' | 'L')) => {
                self.pos += 1;
                let kind = match c {
                    'A' => GeneratorKind::A,
                    'E' => GeneratorKind::E,
                    _ => GeneratorKind::L,
                };
                self.expect('(')?;
                let n = self.nat()?;
                self.expect(')')?;
                Ok(ObjectExpr::Gen(kind, n))
            }
            Some(_) => Err(self.error("expected a generator A, E, L or U, 'res', 'infl' or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn level_literal(&mut self) -> Result<LevelLiteral, ParseError> {
        if self.peek() == Some('0') {
            let save = self.pos;
            self.pos += 1;
            if !matches!(self.peek(), Some('*')) {
                return Ok(LevelLiteral(vec![]));
            }
            self.pos = save;
        }
        let mut terms = vec![self.level_term()?];
        while self.eat('+') {
            terms.push(self.level_term()?);
        }
        Ok(LevelLiteral(terms))
    }

    fn level_term(&mut self) -> Result<(u32, u32), ParseError> {
        let copies = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let c = self.nat()?;
            self.expect('*')?;
            c
        } else {
            1
        };
        if !self.eat('Q') {
            return Err(self.error("expected 'Q'"));
        }
        self.expect('[')?;
        let order = self.nat()?;
        self.expect(']')?;
        Ok((copies, order))
    }

    fn digits(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn nat(&mut self) -> Result<u32, ParseError> {
        if matches!(self.peek(), Some('-' | '−')) {
            return Err(self.error("negative index"));
        }
        let start = self.pos;
        let s = self.digits()?;
        s.parse().map_err(|_| ParseError { offset: start, message: "number too large".into() })
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let negative = matches!(self.peek(), Some('-' | '−'));
        if negative {
            self.pos += 1;
        }
        let start = self.pos;
        let s = self.digits()?;
        let v: i64 = s.parse().map_err(|_| ParseError { offset: start, message: "number too large".into() })?;
        Ok(if negative { -v } else { v })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ObjectExpr::*;

    fn gen(kind: GeneratorKind, n: u32) -> Box<ObjectExpr> {
        Box::new(Gen(kind, n))
    }

    #[test]
    fn parses_examples() {
        assert_eq!(parse("A(2) + E(3)").unwrap(), Sum(gen(GeneratorKind::A, 2), gen(GeneratorKind::E, 3)));
        assert_eq!(
            parse("U * L(1)[−1]").unwrap(),
            Tensor(gen(GeneratorKind::A, 0), Box::new(Shift(gen(GeneratorKind::L, 1), -1)))
        );
        assert_eq!(parse("U*L(1)[-1]").unwrap(), parse("U * L(1)[−1]").unwrap());
        let err = parse("A(").unwrap_err();
        assert_eq!(err.offset, 2);
        assert!(parse("A(-1)").is_err());
        assert!(parse("A(1) +").is_err());
        assert!(parse("B(1)").is_err());
    }

    #[test]
    fn left_associative() {
        assert_eq!(
            parse("U + E(0) + L(0)").unwrap(),
            Sum(Box::new(Sum(gen(GeneratorKind::A, 0), gen(GeneratorKind::E, 0))), gen(GeneratorKind::L, 0))
        );
        assert_eq!(
            parse("U + E(0) * L(0)").unwrap(),
            Sum(gen(GeneratorKind::A, 0), Box::new(Tensor(gen(GeneratorKind::E, 0), gen(GeneratorKind::L, 0))))
        );
    }

    #[test]
    fn printing_round_trips() {
        for s in [
            "A(2) + (E(3) + L(0))",
            "(A(1) + U) * E(2)[3]",
            "A(1) * (E(0) * L(2))",
            "res(A(3) + E(1), 2)[-2]",
            "infl(Q[0]; 0; Q[1] + 2*Q[2])",
            "(A(1) * U)[1]",
        ] {
            let e = parse(s).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e, "{s}");
        }
    }

    #[test]
    fn evaluation() {
        let m = parse("U").unwrap().eval_object(2).unwrap();
        assert_eq!(m, RigidObject::unit(2).unwrap());
        let g = parse("A(1)[2] * L(0)[-1]").unwrap().eval(3).unwrap();
        assert_eq!(g.degrees().collect::<Vec<_>>(), vec![1]);
        let inf = parse("infl(Q[0])").unwrap().eval_object(5).unwrap();
        assert_eq!(inf, RigidObject::unit(5).unwrap());
        let f = parse("infl(Q[0]; 0; Q[1] + 2*Q[2])").unwrap().eval_object(2).unwrap();
        assert_eq!(f.level_dim(1), 0);
        assert_eq!(f.level_dim(7), 2 + 8);
        assert!(parse("infl(Q[1])").is_err());
    }
}
