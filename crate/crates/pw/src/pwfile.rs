//! The `.pw` diagram language.
//!
//! ```text
//! diagram := "pw" nat "->" nat "{" row (";" row)* "}"
//! row     := gen ("," gen)*
//! gen     := "id" ["(" nat ")"] | "cup" | "cap" | "fswap" | "x" | "ket0" | "ket1" | "bra1"
//!          | "black" "(" nat "," nat ")" | "white" "(" complex ")" | "scalar" "(" complex ")"
//! complex := real [("+"|"-") real "i"] | real "i"
//! ```
//!
//! Rows compose top to bottom and generators in a row are tensored left to
//! right. `#` starts a comment that runs to the end of the line.

use pw_core::complex::c;
use pw_core::logc::format_complex;
use pw_core::term::{Generator, TermDiagram};
use pw_core::Complex;

use crate::span::{ParseError, Position, SourceSpan};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Word(String),
    Number(f64),
    Arrow,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Semi,
    Plus,
    Minus,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Number(x) => format!("number {x}"),
            Tok::Arrow => "`->`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: Position,
}

impl<'a> Lexer<'a> {
    fn peek_char(&self) -> Option<char> {
        self.src[self.pos.offset..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let ch = self.peek_char()?;
        self.pos.offset += ch.len_utf8();
        if ch == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(ch)
    }

    fn skip_trivia(&mut self) {
        while let Some(ch) = self.peek_char() {
            if ch == '#' {
                while let Some(ch) = self.peek_char() {
                    if ch == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else if ch.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia();
            let start = self.pos;
            let Some(ch) = self.peek_char() else {
                out.push((Tok::End, SourceSpan::point(start)));
                return Ok(out);
            };
            let tok = if ch.is_ascii_alphabetic() || ch == '_' {
                let mut w = String::new();
                while let Some(ch) = self.peek_char().filter(|c| c.is_ascii_alphanumeric() || *c == '_') {
                    w.push(ch);
                    self.bump();
                }
                Tok::Word(w)
            } else if ch.is_ascii_digit() || ch == '.' {
                self.number(start)?
            } else {
                self.bump();
                match ch {
                    '-' if self.peek_char() == Some('>') => {
                        self.bump();
                        Tok::Arrow
                    }
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    ';' => Tok::Semi,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    other => {
                        return Err(ParseError::new(
                            format!("unexpected character `{other}`"),
                            SourceSpan::new(start, self.pos),
                        ))
                    }
                }
            };
            out.push((tok, SourceSpan::new(start, self.pos)));
        }
    }

    fn number(&mut self, start: Position) -> Result<Tok, ParseError> {
        let mut text = String::new();
        let digits = |lx: &mut Self, text: &mut String| {
            while let Some(ch) = lx.peek_char().filter(|c| c.is_ascii_digit()) {
                text.push(ch);
                lx.bump();
            }
        };
        digits(self, &mut text);
        if self.peek_char() == Some('.') {
            text.push('.');
            self.bump();
            digits(self, &mut text);
        }
        // An exponent needs digits after `e`; otherwise `e` starts a word.
        let rest = &self.src[self.pos.offset..];
        let mut chars = rest.chars();
        if matches!(chars.next(), Some('e' | 'E')) {
            let next = chars.next();
            let after = chars.next();
            let has_exp = match next {
                Some(d) if d.is_ascii_digit() => true,
                Some('+' | '-') => after.is_some_and(|d| d.is_ascii_digit()),
                _ => false,
            };
            if has_exp {
                text.push('e');
                self.bump();
                if let Some(s @ ('+' | '-')) = self.peek_char() {
                    text.push(s);
                    self.bump();
                }
                digits(self, &mut text);
            }
        }
        text.parse::<f64>().map(Tok::Number).map_err(|_| {
            ParseError::new(format!("malformed number `{text}`"), SourceSpan::new(start, self.pos))
        })
    }
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.at].1
    }

    fn next(&mut self) -> (Tok, SourceSpan) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        ParseError::new(format!("unexpected {}", self.peek().describe()), self.span()).expecting(expected)
    }

    fn expect(&mut self, tok: Tok, name: &str) -> Result<SourceSpan, ParseError> {
        if *self.peek() == tok {
            Ok(self.next().1)
        } else {
            Err(self.unexpected(&[name]))
        }
    }

    fn keyword(&mut self, word: &str) -> Result<SourceSpan, ParseError> {
        match self.peek() {
            Tok::Word(w) if w == word => Ok(self.next().1),
            _ => Err(self.unexpected(&[&format!("`{word}`")])),
        }
    }

    fn nat(&mut self) -> Result<usize, ParseError> {
        match *self.peek() {
            Tok::Number(x) if x >= 0.0 && x.fract() == 0.0 && x < 1e9 => {
                self.next();
                Ok(x as usize)
            }
            _ => Err(self.unexpected(&["natural number"])),
        }
    }

    fn real(&mut self) -> Result<f64, ParseError> {
        let sign = match self.peek() {
            Tok::Minus => {
                self.next();
                -1.0
            }
            Tok::Plus => {
                self.next();
                1.0
            }
            _ => 1.0,
        };
        match *self.peek() {
            Tok::Number(x) => {
                self.next();
                Ok(sign * x)
            }
            _ => Err(self.unexpected(&["number"])),
        }
    }

    fn is_i(&self) -> bool {
        matches!(self.peek(), Tok::Word(w) if w == "i")
    }

    fn complex(&mut self) -> Result<Complex, ParseError> {
        let a = self.real()?;
        if self.is_i() {
            self.next();
            return Ok(c(0.0, a));
        }
        let sign = match self.peek() {
            Tok::Plus => 1.0,
            Tok::Minus => -1.0,
            _ => return Ok(c(a, 0.0)),
        };
        self.next();
        let b = match *self.peek() {
            Tok::Number(x) => {
                self.next();
                x
            }
            _ => return Err(self.unexpected(&["number"])),
        };
        if !self.is_i() {
            return Err(self.unexpected(&["`i`"]));
        }
        self.next();
        Ok(c(a, sign * b))
    }

    fn generator(&mut self) -> Result<TermDiagram, ParseError> {
        const GENS: [&str; 11] = [
            "`id`", "`cup`", "`cap`", "`fswap`", "`x`", "`ket0`", "`ket1`", "`bra1`", "`black`",
            "`white`", "`scalar`",
        ];
        let (tok, span) = self.next();
        let Tok::Word(word) = tok else {
            self.at -= 1;
            return Err(self.unexpected(&GENS));
        };
        let finite = |r: Complex, span: SourceSpan| {
            if r.re.is_finite() && r.im.is_finite() {
                Ok(r)
            } else {
                Err(ParseError::new("weight is not finite", span))
            }
        };
        Ok(match word.as_str() {
            "id" => {
                if *self.peek() == Tok::LParen {
                    self.next();
                    let k = self.nat()?;
                    self.expect(Tok::RParen, "`)`")?;
                    TermDiagram::identity(k)
                } else {
                    TermDiagram::identity(1)
                }
            }
            "cup" => TermDiagram::cup(),
            "cap" => TermDiagram::cap(),
            "fswap" => TermDiagram::fswap(),
            "x" => TermDiagram::x(),
            "ket0" => TermDiagram::ket0(),
            "ket1" => TermDiagram::ket1(),
            "bra1" => TermDiagram::bra1(),
            "black" => {
                self.expect(Tok::LParen, "`(`")?;
                let n = self.nat()?;
                self.expect(Tok::Comma, "`,`")?;
                let m = self.nat()?;
                self.expect(Tok::RParen, "`)`")?;
                TermDiagram::black(n, m)
            }
            "white" | "scalar" => {
                self.expect(Tok::LParen, "`(`")?;
                let start = self.span();
                let r = self.complex()?;
                let r = finite(r, start)?;
                self.expect(Tok::RParen, "`)`")?;
                if word == "white" {
                    TermDiagram::white(r).expect("finite weight")
                } else {
                    TermDiagram::scalar(r).expect("finite weight")
                }
            }
            _ => {
                return Err(ParseError::new(format!("unknown generator `{word}`"), span).expecting(&GENS))
            }
        })
    }

    fn row(&mut self) -> Result<(TermDiagram, SourceSpan), ParseError> {
        let start = self.span();
        let mut gens = vec![self.generator()?];
        while *self.peek() == Tok::Comma {
            self.next();
            gens.push(self.generator()?);
        }
        let end = self.toks[self.at.saturating_sub(1)].1;
        Ok((TermDiagram::tensor_all(gens), start.to(end)))
    }

    fn diagram(&mut self) -> Result<TermDiagram, ParseError> {
        let head = self.keyword("pw")?;
        let n = self.nat()?;
        self.expect(Tok::Arrow, "`->`")?;
        let m = self.nat()?;
        self.expect(Tok::LBrace, "`{`")?;
        let mut rows = vec![self.row()?];
        loop {
            match self.peek() {
                Tok::Semi => {
                    self.next();
                    rows.push(self.row()?);
                }
                Tok::RBrace => {
                    self.next();
                    break;
                }
                _ => return Err(self.unexpected(&["`;`", "`,`", "`}`"])),
            }
        }
        if *self.peek() != Tok::End {
            return Err(self.unexpected(&["end of input"]));
        }
        for k in 1..rows.len() {
            let (above, below) = (&rows[k - 1].0, &rows[k].0);
            if above.n_outputs() != below.n_inputs() {
                return Err(ParseError::new(
                    format!(
                        "arity mismatch: row {} has {} outputs but row {} has {} inputs",
                        k,
                        above.n_outputs(),
                        k + 1,
                        below.n_inputs()
                    ),
                    rows[k].1,
                ));
            }
        }
        let first_in = rows[0].0.n_inputs();
        let last_out = rows[rows.len() - 1].0.n_outputs();
        if first_in != n || last_out != m {
            return Err(ParseError::new(
                format!(
                    "header declares {n} -> {m} but the rows give {first_in} -> {last_out}"
                ),
                head,
            ));
        }
        let mut acc: Option<TermDiagram> = None;
        for (row, _) in rows.into_iter().rev() {
            acc = Some(match acc {
                None => row,
                Some(below) => row.then(below),
            });
        }
        Ok(acc.expect("at least one row"))
    }
}

pub fn parse_diagram(text: &str) -> Result<TermDiagram, ParseError> {
    let toks = Lexer {
        src: text,
        pos: Position::start(),
    }
    .tokens()?;
    Parser { toks, at: 0 }.diagram()
}

fn print_generator(g: &Generator) -> String {
    match *g {
        Generator::Identity(1) => "id".into(),
        Generator::Identity(k) => format!("id({k})"),
        Generator::Black(1, 1) => "x".into(),
        Generator::Black(0, 1) => "ket1".into(),
        Generator::Black(1, 0) => "bra1".into(),
        Generator::Black(n, m) => format!("black({n},{m})"),
        Generator::White(r) => format!("white({})", format_complex(r)),
        Generator::Cup => "cup".into(),
        Generator::Cap => "cap".into(),
        Generator::FSwap => "fswap".into(),
        Generator::Scalar(r) => format!("scalar({})", format_complex(r)),
    }
}

/// Prints one row per layer of the interchange-law layout.
pub fn print_diagram(d: &TermDiagram) -> String {
    let rows: Vec<String> = d
        .rows()
        .iter()
        .map(|row| row.iter().map(print_generator).collect::<Vec<_>>().join(", "))
        .collect();
    format!("pw {} -> {} {{ {} }}", d.n_inputs(), d.n_outputs(), rows.join("; "))
}
