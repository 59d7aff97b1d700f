//! OPENQASM 2.0 front-end for the catalog subset.
//!
//! Accepted statements: the version header, `include`, `qreg`/`creg`,
//! catalog gates (plus `cp`), `measure` and `barrier`. Registers are flattened
//! to global indices in declaration order. A gate touching an already
//! measured qubit is rejected.

use crate::catalog::Gate;
use crate::circuit::{Circuit, GateApplication, Measurement};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64),
    Str,
    Arrow,
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        col,
        message: message.into(),
    }
}

fn lex(source: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = source.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let ch = chars[i];
        let (tl, tc) = (line, col);
        if ch == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if ch.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if ch == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            tokens.push(Token {
                tok: Tok::Ident(word),
                line: tl,
                col: tc,
            });
            continue;
        }
        if ch.is_ascii_digit() || (ch == '.' && chars.get(i + 1).is_some_and(|c| c.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            let value = text
                .parse::<f64>()
                .map_err(|_| syntax(tl, tc, format!("malformed number `{text}`")))?;
            tokens.push(Token {
                tok: Tok::Num(value),
                line: tl,
                col: tc,
            });
            continue;
        }
        if ch == '"' {
            i += 1;
            col += 1;
            while i < chars.len() && chars[i] != '"' {
                if chars[i] == '\n' {
                    return Err(syntax(tl, tc, "unterminated string"));
                }
                i += 1;
                col += 1;
            }
            if i == chars.len() {
                return Err(syntax(tl, tc, "unterminated string"));
            }
            i += 1;
            col += 1;
            tokens.push(Token {
                tok: Tok::Str,
                line: tl,
                col: tc,
            });
            continue;
        }
        if ch == '-' && chars.get(i + 1) == Some(&'>') {
            i += 2;
            col += 2;
            tokens.push(Token {
                tok: Tok::Arrow,
                line: tl,
                col: tc,
            });
            continue;
        }
        if "[](),;+-*/^".contains(ch) {
            i += 1;
            col += 1;
            tokens.push(Token {
                tok: Tok::Sym(ch),
                line: tl,
                col: tc,
            });
            continue;
        }
        return Err(syntax(tl, tc, format!("unexpected character `{ch}`")));
    }
    Ok(tokens)
}

struct Register {
    name: String,
    offset: usize,
    size: usize,
}

/// A register reference: a single index or a whole register.
enum Arg {
    Bit(usize),
    Whole { offset: usize, size: usize },
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: (usize, usize),
    qregs: Vec<Register>,
    cregs: Vec<Register>,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map_or(self.end, |t| (t.line, t.col))
    }

    fn err(&self, message: impl Into<String>) -> Error {
        let (line, col) = self.here();
        syntax(line, col, message)
    }

    fn next(&mut self) -> Result<Token> {
        let t = self.peek().cloned().ok_or_else(|| self.err("unexpected end of input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek().is_some_and(|t| t.tok == Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn expect_ident(&mut self) -> Result<String> {
        match self.next()? {
            Token {
                tok: Tok::Ident(s), ..
            } => Ok(s),
            t => Err(syntax(t.line, t.col, "expected identifier")),
        }
    }

    fn expect_uint(&mut self) -> Result<usize> {
        match self.next()? {
            Token {
                tok: Tok::Num(v), ..
            } if v >= 0.0 && v.fract() == 0.0 => Ok(v as usize),
            t => Err(syntax(t.line, t.col, "expected non-negative integer")),
        }
    }

    fn expr(&mut self) -> Result<f64> {
        let mut value = self.term()?;
        loop {
            if self.eat_sym('+') {
                value += self.term()?;
            } else if self.eat_sym('-') {
                value -= self.term()?;
            } else {
                return Ok(value);
            }
        }
    }

    fn term(&mut self) -> Result<f64> {
        let mut value = self.unary()?;
        loop {
            if self.eat_sym('*') {
                value *= self.unary()?;
            } else if self.eat_sym('/') {
                value /= self.unary()?;
            } else {
                return Ok(value);
            }
        }
    }

    fn unary(&mut self) -> Result<f64> {
        if self.eat_sym('-') {
            return Ok(-self.unary()?);
        }
        if self.eat_sym('+') {
            return self.unary();
        }
        let base = self.primary()?;
        if self.eat_sym('^') {
            return Ok(base.powf(self.unary()?));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<f64> {
        let t = self.next()?;
        match t.tok {
            Tok::Num(v) => Ok(v),
            Tok::Sym('(') => {
                let v = self.expr()?;
                self.expect_sym(')')?;
                Ok(v)
            }
            Tok::Ident(ref name) if name == "pi" => Ok(std::f64::consts::PI),
            Tok::Ident(ref name) => {
                let f: fn(f64) -> f64 = match name.as_str() {
                    "sin" => f64::sin,
                    "cos" => f64::cos,
                    "tan" => f64::tan,
                    "exp" => f64::exp,
                    "ln" => f64::ln,
                    "sqrt" => f64::sqrt,
                    _ => return Err(syntax(t.line, t.col, format!("unknown identifier `{name}` in expression"))),
                };
                self.expect_sym('(')?;
                let v = self.expr()?;
                self.expect_sym(')')?;
                Ok(f(v))
            }
            _ => Err(syntax(t.line, t.col, "expected expression")),
        }
    }

    fn arg(&mut self, quantum: bool) -> Result<Arg> {
        let (line, col) = self.here();
        let name = self.expect_ident()?;
        let regs = if quantum { &self.qregs } else { &self.cregs };
        let (offset, size) = regs
            .iter()
            .find(|r| r.name == name)
            .map(|r| (r.offset, r.size))
            .ok_or_else(|| syntax(line, col, format!("undeclared register `{name}`")))?;
        if self.eat_sym('[') {
            let index = self.expect_uint()?;
            self.expect_sym(']')?;
            if index >= size {
                return Err(Error::OperandOutOfRange { index, width: size });
            }
            Ok(Arg::Bit(offset + index))
        } else {
            Ok(Arg::Whole { offset, size })
        }
    }

    fn arg_list(&mut self, quantum: bool) -> Result<Vec<Arg>> {
        let mut args = vec![self.arg(quantum)?];
        while self.eat_sym(',') {
            args.push(self.arg(quantum)?);
        }
        Ok(args)
    }
}

/// Expands register-wide arguments into one application per index.
fn broadcast(args: &[Arg]) -> std::result::Result<Vec<Vec<usize>>, String> {
    let width = args.iter().find_map(|a| match a {
        Arg::Whole { size, .. } => Some(*size),
        Arg::Bit(_) => None,
    });
    let Some(width) = width else {
        return Ok(vec![args
            .iter()
            .map(|a| match a {
                Arg::Bit(i) => *i,
                Arg::Whole { .. } => unreachable!(),
            })
            .collect()]);
    };
    if args.iter().any(|a| matches!(a, Arg::Whole { size, .. } if *size != width)) {
        return Err("register sizes differ in broadcast".into());
    }
    Ok((0..width)
        .map(|k| {
            args.iter()
                .map(|a| match a {
                    Arg::Bit(i) => *i,
                    Arg::Whole { offset, .. } => offset + k,
                })
                .collect()
        })
        .collect())
}

pub fn parse_qasm(source: &str) -> Result<Circuit> {
    let tokens = lex(source)?;
    let end = tokens.last().map_or((1, 1), |t| (t.line, t.col + 1));
    let mut p = Parser {
        tokens,
        pos: 0,
        end,
        qregs: Vec::new(),
        cregs: Vec::new(),
    };
    let mut gates = Vec::new();
    let mut measurements: Vec<Measurement> = Vec::new();
    let mut measured = Vec::<bool>::new();

    while let Some(tok) = p.peek().cloned() {
        let Tok::Ident(keyword) = tok.tok else {
            return Err(syntax(tok.line, tok.col, "expected statement"));
        };
        p.pos += 1;
        match keyword.as_str() {
            "OPENQASM" => {
                match p.next()?.tok {
                    Tok::Num(2.0) => {}
                    _ => return Err(syntax(tok.line, tok.col, "only OPENQASM 2.0 is supported")),
                }
                p.expect_sym(';')?;
            }
            "include" => {
                match p.next()?.tok {
                    Tok::Str => {}
                    _ => return Err(syntax(tok.line, tok.col, "expected file name")),
                }
                p.expect_sym(';')?;
            }
            "qreg" | "creg" => {
                let name = p.expect_ident()?;
                p.expect_sym('[')?;
                let size = p.expect_uint()?;
                p.expect_sym(']')?;
                p.expect_sym(';')?;
                let regs = if keyword == "qreg" { &mut p.qregs } else { &mut p.cregs };
                if regs.iter().any(|r| r.name == name) {
                    return Err(syntax(tok.line, tok.col, format!("register `{name}` redeclared")));
                }
                let offset = regs.iter().map(|r| r.size).sum();
                regs.push(Register { name, offset, size });
                if keyword == "qreg" {
                    measured.resize(offset + size, false);
                }
            }
            "barrier" => {
                p.arg_list(true)?;
                p.expect_sym(';')?;
            }
            "measure" => {
                let q = p.arg(true)?;
                match p.next()? {
                    Token { tok: Tok::Arrow, .. } => {}
                    t => return Err(syntax(t.line, t.col, "expected `->`")),
                }
                let c = p.arg(false)?;
                p.expect_sym(';')?;
                let pairs = broadcast(&[q, c]).map_err(|m| syntax(tok.line, tok.col, m))?;
                for pair in pairs {
                    measured[pair[0]] = true;
                    measurements.push(Measurement {
                        qubit: pair[0],
                        clbit: pair[1],
                    });
                }
            }
            "gate" | "opaque" | "if" | "reset" | "U" => {
                return Err(syntax(
                    tok.line,
                    tok.col,
                    format!("unsupported statement `{keyword}`"),
                ));
            }
            name => {
                let gate: Gate = if name == "CX" { Gate::Cx } else { name.parse()? };
                let mut params = Vec::new();
                if p.eat_sym('(') && !p.eat_sym(')') {
                    params.push(p.expr()?);
                    while p.eat_sym(',') {
                        params.push(p.expr()?);
                    }
                    p.expect_sym(')')?;
                }
                let args = p.arg_list(true)?;
                p.expect_sym(';')?;
                let applications = broadcast(&args).map_err(|m| syntax(tok.line, tok.col, m))?;
                for operands in applications {
                    if let Some(&q) = operands.iter().find(|&&q| measured[q]) {
                        return Err(syntax(
                            tok.line,
                            tok.col,
                            format!("gate after measurement on qubit {q} (mid-circuit measurement)"),
                        ));
                    }
                    let app = GateApplication::new(gate, operands, params.clone());
                    app.validate(measured.len())?;
                    gates.push(app);
                }
            }
        }
    }

    let num_qubits = p.qregs.iter().map(|r| r.size).sum();
    let num_clbits = p.cregs.iter().map(|r| r.size).sum();
    let mut circuit = Circuit::new("circuit", num_qubits, num_clbits);
    circuit.gates = gates;
    circuit.measurements = measurements;
    circuit.validate()?;
    Ok(circuit)
}
