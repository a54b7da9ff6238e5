//! X-form expression trees over base patterns.
//!
//! Textual grammar, whitespace insignificant:
//!
//! ```text
//! expr   := term ('|' term)*
//! term   := factor ('&' factor)*
//! factor := '!' factor | '(' expr ')' | atom
//! atom   := 'b' DIGITS | '0' | '1'
//! ```
//!
//! Printing uses the fewest parentheses that reparse to the same tree: a
//! nested `And` inside an `And` (or `Or` inside `Or`) keeps its parentheses
//! because the parser flattens a chain into one n-ary node.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::pattern::Pattern;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum XFormError {
    #[error("syntax error at position {0}")]
    SyntaxError(usize),
    #[error("variable b{0} out of range")]
    VariableOutOfRange(usize),
    #[error("{0} node needs at least 2 children")]
    ArityViolation(&'static str),
    #[error("invalid width {0}")]
    InvalidWidth(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum XForm {
    Const0,
    Const1,
    /// Base pattern `b_i`, 1-based.
    Var(usize),
    Not(Box<XForm>),
    And(Vec<XForm>),
    Or(Vec<XForm>),
}

impl XForm {
    pub fn var(index: usize) -> Self {
        XForm::Var(index)
    }

    pub fn negate(self) -> Self {
        XForm::Not(Box::new(self))
    }

    pub fn and2(a: XForm, b: XForm) -> Self {
        XForm::And(vec![a, b])
    }

    pub fn or2(a: XForm, b: XForm) -> Self {
        XForm::Or(vec![a, b])
    }

    /// Largest base index mentioned, 0 if none.
    pub fn max_var(&self) -> usize {
        match self {
            XForm::Const0 | XForm::Const1 => 0,
            XForm::Var(i) => *i,
            XForm::Not(c) => c.max_var(),
            XForm::And(cs) | XForm::Or(cs) => cs.iter().map(XForm::max_var).max().unwrap_or(0),
        }
    }

    /// Checks arity and that every base index lies in `1..=width`.
    pub fn validate(&self, width: usize) -> Result<(), XFormError> {
        match self {
            XForm::Const0 | XForm::Const1 => Ok(()),
            XForm::Var(i) if *i == 0 || *i > width => Err(XFormError::VariableOutOfRange(*i)),
            XForm::Var(_) => Ok(()),
            XForm::Not(c) => c.validate(width),
            XForm::And(cs) | XForm::Or(cs) => {
                if cs.len() < 2 {
                    return Err(XFormError::ArityViolation(self.kind()));
                }
                cs.iter().try_for_each(|c| c.validate(width))
            }
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            XForm::Const0 => "Const0",
            XForm::Const1 => "Const1",
            XForm::Var(_) => "Var",
            XForm::Not(_) => "Not",
            XForm::And(_) => "And",
            XForm::Or(_) => "Or",
        }
    }

    /// Total node count, leaves included.
    pub fn size(&self) -> usize {
        match self {
            XForm::Const0 | XForm::Const1 | XForm::Var(_) => 1,
            XForm::Not(c) => 1 + c.size(),
            XForm::And(cs) | XForm::Or(cs) => 1 + cs.iter().map(XForm::size).sum::<usize>(),
        }
    }

    /// Leaves have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            XForm::Const0 | XForm::Const1 | XForm::Var(_) => 1,
            XForm::Not(c) => 1 + c.depth(),
            XForm::And(cs) | XForm::Or(cs) => 1 + cs.iter().map(XForm::depth).max().unwrap_or(0),
        }
    }

    /// Recursively sorts `And`/`Or` children by their printed form.
    pub fn normalized(&self) -> XForm {
        match self {
            XForm::Not(c) => XForm::Not(Box::new(c.normalized())),
            XForm::And(cs) => XForm::And(sorted_children(cs)),
            XForm::Or(cs) => XForm::Or(sorted_children(cs)),
            leaf => leaf.clone(),
        }
    }

    pub fn structurally_identical(&self, other: &XForm) -> bool {
        self.normalized() == other.normalized()
    }

    fn precedence(&self) -> u8 {
        match self {
            XForm::Or(_) => 0,
            XForm::And(_) => 1,
            XForm::Not(_) => 2,
            _ => 3,
        }
    }
}

fn sorted_children(cs: &[XForm]) -> Vec<XForm> {
    let mut keyed: Vec<(String, XForm)> = cs
        .iter()
        .map(|c| {
            let n = c.normalized();
            (n.to_string(), n)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.into_iter().map(|(_, c)| c).collect()
}

impl fmt::Display for XForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, c: &XForm, min_prec: u8) -> fmt::Result {
            if c.precedence() < min_prec {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        }
        match self {
            XForm::Const0 => f.write_str("0"),
            XForm::Const1 => f.write_str("1"),
            XForm::Var(i) => write!(f, "b{i}"),
            XForm::Not(c) => {
                f.write_str("!")?;
                child(f, c, 2)
            }
            XForm::And(cs) | XForm::Or(cs) => {
                let (sep, min_prec) = if matches!(self, XForm::And(_)) { (" & ", 2) } else { (" | ", 1) };
                for (k, c) in cs.iter().enumerate() {
                    if k > 0 {
                        f.write_str(sep)?;
                    }
                    child(f, c, min_prec)?;
                }
                Ok(())
            }
        }
    }
}

/// Parses the textual form. Syntax error positions are 1-based character offsets;
/// a position one past the end means unexpected end of input.
pub fn parse_xform(text: &str, width: usize) -> Result<XForm, XFormError> {
    let mut parser = Parser { chars: text.chars().collect(), pos: 0, width };
    let expr = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.chars.len() {
        return Err(XFormError::SyntaxError(parser.pos + 1));
    }
    Ok(expr)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    width: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn error(&self) -> XFormError {
        XFormError::SyntaxError(self.pos + 1)
    }

    fn expr(&mut self) -> Result<XForm, XFormError> {
        let mut terms = vec![self.term()?];
        while self.peek() == Some('|') {
            self.pos += 1;
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { XForm::Or(terms) })
    }

    fn term(&mut self) -> Result<XForm, XFormError> {
        let mut factors = vec![self.factor()?];
        while self.peek() == Some('&') {
            self.pos += 1;
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { XForm::And(factors) })
    }

    fn factor(&mut self) -> Result<XForm, XFormError> {
        match self.peek() {
            Some('!') => {
                self.pos += 1;
                Ok(XForm::Not(Box::new(self.factor()?)))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error());
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('0') => {
                self.pos += 1;
                Ok(XForm::Const0)
            }
            Some('1') => {
                self.pos += 1;
                Ok(XForm::Const1)
            }
            Some('b') => {
                let start = self.pos;
                self.pos += 1;
                let mut index: usize = 0;
                let mut digits = 0;
                while let Some(d) = self.chars.get(self.pos).and_then(|c| c.to_digit(10)) {
                    index = index.saturating_mul(10).saturating_add(d as usize);
                    digits += 1;
                    self.pos += 1;
                }
                if digits == 0 {
                    self.pos = start + 1;
                    return Err(self.error());
                }
                if index == 0 || index > self.width {
                    return Err(XFormError::VariableOutOfRange(index));
                }
                Ok(XForm::Var(index))
            }
            _ => Err(self.error()),
        }
    }
}

/// Evaluates `f` on `p`; base `b_i` reads bit `i` of the pattern.
pub fn evaluate(f: &XForm, p: &Pattern) -> Result<bool, XFormError> {
    Ok(match f {
        XForm::Const0 => false,
        XForm::Const1 => true,
        XForm::Var(i) => p.bit(*i).ok_or(XFormError::VariableOutOfRange(*i))?,
        XForm::Not(c) => !evaluate(c, p)?,
        XForm::And(cs) => {
            for c in cs {
                if !evaluate(c, p)? {
                    return Ok(false);
                }
            }
            true
        }
        XForm::Or(cs) => {
            for c in cs {
                if evaluate(c, p)? {
                    return Ok(true);
                }
            }
            false
        }
    })
}

/// Seeded random X-form with depth at most `max_depth`.
///
/// `max_depth = 1` always yields a leaf. Variable indices range over `1..=width`.
pub fn random_xform(width: usize, max_depth: usize, seed: u64) -> XForm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_xform_with(&mut rng, width, max_depth)
}

pub fn random_xform_with<R: Rng + ?Sized>(rng: &mut R, width: usize, max_depth: usize) -> XForm {
    let width = width.max(1);
    if max_depth <= 1 || rng.random_bool(0.25) {
        return match rng.random_range(0..10) {
            0 => XForm::Const0,
            1 => XForm::Const1,
            _ => XForm::Var(rng.random_range(1..=width)),
        };
    }
    match rng.random_range(0..3) {
        0 => XForm::Not(Box::new(random_xform_with(rng, width, max_depth - 1))),
        op => {
            let arity = rng.random_range(2..=3);
            let children = (0..arity).map(|_| random_xform_with(rng, width, max_depth - 1)).collect();
            if op == 1 {
                XForm::And(children)
            } else {
                XForm::Or(children)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::parse_pattern;

    fn x(text: &str, width: usize) -> XForm {
        parse_xform(text, width).unwrap()
    }

    fn eval(f: &XForm, p: &str) -> bool {
        evaluate(f, &parse_pattern(p).unwrap()).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(x("b1 & b2", 2), XForm::and2(XForm::Var(1), XForm::Var(2)));
        assert_eq!(x("!b1 | b1", 2), XForm::or2(XForm::Var(1).negate(), XForm::Var(1)));
        assert_eq!(parse_xform("b3", 2), Err(XFormError::VariableOutOfRange(3)));
        assert_eq!(parse_xform("b0", 2), Err(XFormError::VariableOutOfRange(0)));
    }

    #[test]
    fn precedence_and_grouping() {
        assert_eq!(
            x("b1 | b2 & !b3", 3),
            XForm::or2(XForm::Var(1), XForm::and2(XForm::Var(2), XForm::Var(3).negate()))
        );
        assert_eq!(
            x("(b1|b2)&b3", 3),
            XForm::and2(XForm::or2(XForm::Var(1), XForm::Var(2)), XForm::Var(3))
        );
        assert_eq!(x("!!b1", 1), XForm::Var(1).negate().negate());
        assert_eq!(x(" b1&b2&b1 ", 2), XForm::And(vec![XForm::Var(1), XForm::Var(2), XForm::Var(1)]));
        assert_eq!(x("0 | 1", 1), XForm::or2(XForm::Const0, XForm::Const1));
    }

    #[test]
    fn syntax_errors() {
        assert_eq!(parse_xform("b1&&", 2), Err(XFormError::SyntaxError(4)));
        assert_eq!(parse_xform("", 2), Err(XFormError::SyntaxError(1)));
        assert_eq!(parse_xform("(b1", 2), Err(XFormError::SyntaxError(4)));
        assert_eq!(parse_xform("b1)", 2), Err(XFormError::SyntaxError(3)));
        assert_eq!(parse_xform("b", 2), Err(XFormError::SyntaxError(2)));
        assert_eq!(parse_xform("b1 b2", 2), Err(XFormError::SyntaxError(4)));
        assert_eq!(parse_xform("2", 2), Err(XFormError::SyntaxError(1)));
    }

    #[test]
    fn printing_is_minimal_and_round_trips() {
        let cases = [
            ("b1 & b2", "b1 & b2"),
            ("(b1&!b2)|(!b1&b2)", "b1 & !b2 | !b1 & b2"),
            ("!(b1 | b2)", "!(b1 | b2)"),
            ("(b1 | b2) & b3", "(b1 | b2) & b3"),
            ("(b1 & b2) & b3", "(b1 & b2) & b3"),
            ("b1 & b2 & b3", "b1 & b2 & b3"),
            ("!!b1", "!!b1"),
            ("((b1))", "b1"),
        ];
        for (input, printed) in cases {
            let f = x(input, 3);
            assert_eq!(f.to_string(), printed);
            assert_eq!(x(printed, 3), f);
        }
    }

    #[test]
    fn evaluate_examples() {
        let and = x("b1 & b2", 2);
        assert!(eval(&and, "11"));
        assert!(!eval(&and, "10"));
        let xor = x("(b1&!b2)|(!b1&b2)", 2);
        let got: Vec<bool> = ["00", "01", "10", "11"].iter().map(|p| eval(&xor, p)).collect();
        assert_eq!(got, [false, true, true, false]);
        assert_eq!(
            evaluate(&XForm::Var(3), &parse_pattern("11").unwrap()),
            Err(XFormError::VariableOutOfRange(3))
        );
    }

    #[test]
    fn size_examples() {
        assert_eq!(XForm::Const1.size(), 1);
        assert_eq!(x("b1 & b2", 2).size(), 3);
        assert_eq!(x("(b1&!b2)|(!b1&b2)", 2).size(), 9);
    }

    #[test]
    fn random_is_deterministic_and_valid() {
        assert_eq!(random_xform(3, 5, 42), random_xform(3, 5, 42));
        for seed in 0..50 {
            assert!(matches!(random_xform(3, 1, seed), XForm::Const0 | XForm::Const1 | XForm::Var(_)));
        }
        for seed in 0..1000 {
            let f = random_xform(3, 5, seed);
            assert!(f.depth() <= 5);
            f.validate(3).unwrap();
        }
    }

    #[test]
    fn normalization_sorts_children() {
        let a = x("b2 & b1 | !b3", 3);
        let b = x("!b3 | b1 & b2", 3);
        assert_ne!(a, b);
        assert!(a.structurally_identical(&b));
        assert!(!a.structurally_identical(&x("b1 | b2", 3)));
    }

    #[test]
    fn validate_catches_arity() {
        assert_eq!(XForm::And(vec![XForm::Var(1)]).validate(1), Err(XFormError::ArityViolation("And")));
        assert_eq!(XForm::Or(vec![]).validate(1), Err(XFormError::ArityViolation("Or")));
    }
}
