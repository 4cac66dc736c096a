//! Hand-written tokenizer and recursive-descent parser for the ASCII formula
//! syntax.
//!
//! ```text
//! formula  := iff
//! iff      := implies ("iff" implies)*
//! implies  := or ("implies" implies)?
//! or       := and ("or" and)*
//! and      := unary ("and" unary)*
//! unary    := "not" unary | primary
//! primary  := "initial" | "terminal" | "true" | "false" | "wins(" ident ")"
//!           | "legal(" action ")" | "does(" action ")" | "next(" formula ")"
//!           | "vals(" numlist? ")" | "(" formula ")" | prop | cmp
//! action   := ident "^" ident ( "(" numlist? ")" )?
//! prop     := ident ( "(" (ident|integer) ("," (ident|integer))* ")" )?
//! cmp      := term (("<"|">"|"="|"<="|">="|"!=") term)+
//! term     := integer | ident | ("add"|"sub"|"min"|"max") "(" term "," term ")"
//! ```

use std::fmt;

use thiserror::Error;

use super::{desugar, ActionTerm, CmpOp, ExtFormula, Formula, NumTerm, Prop, PropArg, RuleSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at line {line}, column {column}: expected {}, found {found}", expected.join(" | "))]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    Comma,
    Caret,
    Op(CmpOp),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(v) => write!(f, "`{v}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::Op(op) => write!(f, "`{}`", op.symbol()),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

const KEYWORDS: &[&str] = &[
    "initial", "terminal", "wins", "legal", "does", "not", "and", "or", "implies", "iff", "next", "vals",
    "true", "false", "add", "sub", "min", "max",
];

fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, column, expected: &str, found: String| ParseError {
        line,
        column,
        expected: vec![expected.to_string()],
        found,
    };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let (start_line, start_col) = (line, col);
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '^' => Some(Tok::Caret),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, line: start_line, column: start_col });
            i += 1;
            col += 1;
            continue;
        }
        let two = chars.get(i + 1).copied();
        let op = match (c, two) {
            ('<', Some('=')) => Some((CmpOp::Le, 2)),
            ('>', Some('=')) => Some((CmpOp::Ge, 2)),
            ('!', Some('=')) => Some((CmpOp::Ne, 2)),
            ('<', _) => Some((CmpOp::Lt, 1)),
            ('>', _) => Some((CmpOp::Gt, 1)),
            ('=', _) => Some((CmpOp::Eq, 1)),
            _ => None,
        };
        if let Some((op, len)) = op {
            out.push(Token { tok: Tok::Op(op), line: start_line, column: start_col });
            i += len;
            col += len;
            continue;
        }
        if c.is_ascii_digit() || (c == '-' && two.is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let lexeme: String = chars[start..i].iter().collect();
            let value = lexeme
                .parse::<i64>()
                .map_err(|_| err(start_line, start_col, "integer within 64-bit range", format!("`{lexeme}`")))?;
            col += i - start;
            out.push(Token { tok: Tok::Int(value), line: start_line, column: start_col });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: start_line,
                column: start_col,
            });
            continue;
        }
        return Err(err(start_line, start_col, "token", format!("`{c}`")));
    }
    out.push(Token { tok: Tok::Eof, line, column: col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        let i = (self.pos + ahead).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> PResult<T> {
        let t = &self.toks[self.pos];
        Err(ParseError {
            line: t.line,
            column: t.column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.tok.to_string(),
        })
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect(&mut self, tok: Tok, label: &str) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(&[label])
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Tok::Ident(s) if !is_keyword(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => self.fail(&["identifier"]),
        }
    }

    fn formula(&mut self) -> PResult<ExtFormula> {
        let mut lhs = self.implies()?;
        while self.is_kw("iff") {
            self.bump();
            let rhs = self.implies()?;
            lhs = ExtFormula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> PResult<ExtFormula> {
        let lhs = self.or()?;
        if self.is_kw("implies") {
            self.bump();
            let rhs = self.implies()?;
            return Ok(ExtFormula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> PResult<ExtFormula> {
        let first = self.and()?;
        if !self.is_kw("or") {
            return Ok(first);
        }
        let mut items = vec![first];
        while self.is_kw("or") {
            self.bump();
            items.push(self.and()?);
        }
        Ok(ExtFormula::Or(items))
    }

    fn and(&mut self) -> PResult<ExtFormula> {
        let mut lhs = self.unary()?;
        while self.is_kw("and") {
            self.bump();
            let rhs = self.unary()?;
            lhs = ExtFormula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<ExtFormula> {
        if self.is_kw("not") {
            self.bump();
            return Ok(ExtFormula::not(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<ExtFormula> {
        const STARTS: &[&str] = &[
            "formula", "`not`", "`(`", "`initial`", "`terminal`", "`wins(`", "`legal(`", "`does(`",
            "`next(`", "`vals(`", "proposition", "numerical term",
        ];
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Int(_) => self.comparison(),
            Tok::Ident(word) => match word.as_str() {
                "initial" => {
                    self.bump();
                    Ok(ExtFormula::atom(Formula::Initial))
                }
                "terminal" => {
                    self.bump();
                    Ok(ExtFormula::atom(Formula::Terminal))
                }
                "true" => {
                    self.bump();
                    Ok(ExtFormula::True)
                }
                "false" => {
                    self.bump();
                    Ok(ExtFormula::False)
                }
                "wins" => {
                    self.bump();
                    self.expect(Tok::LParen, "`(`")?;
                    let agent = self.ident()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(ExtFormula::atom(Formula::Wins(agent)))
                }
                "legal" | "does" => {
                    self.bump();
                    self.expect(Tok::LParen, "`(`")?;
                    let action = self.action()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(ExtFormula::atom(if word == "legal" {
                        Formula::Legal(action)
                    } else {
                        Formula::Does(action)
                    }))
                }
                "next" => {
                    self.bump();
                    self.expect(Tok::LParen, "`(`")?;
                    let f = self.formula()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(ExtFormula::next(f))
                }
                "vals" => {
                    self.bump();
                    self.expect(Tok::LParen, "`(`")?;
                    let items = self.numlist_until_rparen()?;
                    Ok(ExtFormula::atom(Formula::Vals(items)))
                }
                "add" | "sub" | "min" | "max" => self.comparison(),
                w if is_keyword(w) => self.fail(STARTS),
                _ => {
                    // Bare identifier: a term if a comparison operator follows,
                    // a proposition otherwise.
                    if matches!(self.peek_at(1), Tok::Op(_)) {
                        return self.comparison();
                    }
                    self.prop().map(|p| ExtFormula::atom(Formula::Prop(p)))
                }
            },
            _ => self.fail(STARTS),
        }
    }

    fn prop(&mut self) -> PResult<Prop> {
        let name = self.ident()?;
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.bump();
            loop {
                match self.peek().clone() {
                    Tok::Int(v) => {
                        self.bump();
                        args.push(PropArg::Int(v));
                    }
                    Tok::Ident(s) if !is_keyword(&s) => {
                        self.bump();
                        args.push(PropArg::Sym(s));
                    }
                    _ => return self.fail(&["identifier", "integer"]),
                }
                match self.peek() {
                    Tok::Comma => {
                        self.bump();
                    }
                    Tok::RParen => {
                        self.bump();
                        break;
                    }
                    _ => return self.fail(&["`,`", "`)`"]),
                }
            }
        }
        Ok(Prop { name, args })
    }

    fn action(&mut self) -> PResult<ActionTerm> {
        let name = self.ident()?;
        self.expect(Tok::Caret, "`^`")?;
        let agent = self.ident()?;
        let args = if *self.peek() == Tok::LParen {
            self.bump();
            self.numlist_until_rparen()?
        } else {
            Vec::new()
        };
        Ok(ActionTerm { agent, name, args })
    }

    /// Parses `numlist? ")"`, the opening parenthesis already consumed.
    fn numlist_until_rparen(&mut self) -> PResult<Vec<NumTerm>> {
        let mut items = Vec::new();
        if *self.peek() == Tok::RParen {
            self.bump();
            return Ok(items);
        }
        loop {
            items.push(self.term()?);
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RParen => {
                    self.bump();
                    return Ok(items);
                }
                _ => return self.fail(&["`,`", "`)`"]),
            }
        }
    }

    fn comparison(&mut self) -> PResult<ExtFormula> {
        let first = self.term()?;
        let mut rest = Vec::new();
        while let Tok::Op(op) = *self.peek() {
            self.bump();
            rest.push((op, self.term()?));
        }
        if rest.is_empty() {
            return self.fail(&["comparison operator"]);
        }
        Ok(ExtFormula::Cmp(first, rest))
    }

    fn term(&mut self) -> PResult<NumTerm> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(NumTerm::Int(v))
            }
            Tok::Ident(w) if matches!(w.as_str(), "add" | "sub" | "min" | "max") => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let l = self.term()?;
                self.expect(Tok::Comma, "`,`")?;
                let r = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(match w.as_str() {
                    "add" => NumTerm::add(l, r),
                    "sub" => NumTerm::sub(l, r),
                    "min" => NumTerm::min(l, r),
                    _ => NumTerm::max(l, r),
                })
            }
            Tok::Ident(w) if !is_keyword(&w) => {
                self.bump();
                Ok(NumTerm::Var(w))
            }
            _ => self.fail(&["integer", "variable", "`add(`", "`sub(`", "`min(`", "`max(`"]),
        }
    }
}

/// Parses the full surface syntax, keeping derived connectives.
pub fn parse_extended(text: &str) -> Result<ExtFormula, ParseError> {
    let mut p = Parser { toks: tokenize(text)?, pos: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return p.fail(&["`and`", "`or`", "`implies`", "`iff`", "end of input"]);
    }
    Ok(f)
}

/// Parses a formula and desugars it into the core language.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    parse_extended(text).map(|f| desugar(&f))
}

/// Parses a rule file: one formula per line, `#` starts a comment, blank
/// lines are skipped. Reported line numbers refer to the file.
pub fn parse_rules(name: &str, text: &str) -> Result<RuleSet, ParseError> {
    let mut rules = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let f = parse_formula(line).map_err(|mut e| {
            e.line = idx + 1;
            e
        })?;
        rules.push(f);
    }
    Ok(RuleSet::new(name, rules))
}
