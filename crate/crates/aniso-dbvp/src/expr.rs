//! A small arithmetic expression language for instance data given in closed
//! form (weights, exponents, nonlinearities).
//!
//! Grammar: `+ - * /` are left-associative, `^` is right-associative and binds
//! tightest, unary minus sits between `*` and `^` (`-2^2 == -4`). Literals are
//! decimal or scientific (`1e-11`). Calls: `exp ln abs sqrt atan sin cos`
//! (one argument), `pow min max` (two). Constants `pi` and `e`. Variables are
//! whatever the caller declares, typically `k`, `x` or `t`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax-error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown-identifier at offset {offset}: `{name}`")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("wrong arity at offset {offset}: `{name}` takes {expected} argument(s), got {got}")]
    Arity {
        offset: usize,
        name: String,
        expected: usize,
        got: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Ln,
    Abs,
    Sqrt,
    Atan,
    Sin,
    Cos,
    Pow,
    Min,
    Max,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "abs" => Func::Abs,
            "sqrt" => Func::Sqrt,
            "atan" => Func::Atan,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "pow" => Func::Pow,
            "min" => Func::Min,
            "max" => Func::Max,
            _ => return None,
        })
    }

    fn arity(self) -> usize {
        match self {
            Func::Pow | Func::Min | Func::Max => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    /// Slot index into the variable list declared at parse time.
    Var(usize),
    Neg(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
    Call(Func, Vec<Node>),
}

/// A parsed, variable-resolved expression. Evaluation is pure `f64`
/// arithmetic and deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    root: Node,
    vars: Vec<String>,
    src: String,
}

impl Expression {
    /// Parses `src` against an allowed variable list. Any identifier that is
    /// neither a declared variable, a function name, nor `pi`/`e` is an
    /// `unknown-identifier` error carrying its byte offset.
    pub fn parse(src: &str, vars: &[&str]) -> Result<Expression, ExprError> {
        let tokens = lex(src)?;
        let mut parser = Parser {
            tokens: &tokens,
            pos: 0,
            vars,
            src_len: src.len(),
        };
        let root = parser.parse_expr(0)?;
        match parser.peek() {
            Some(tok) => Err(ExprError::Syntax {
                offset: tok.offset,
                message: format!("unexpected `{}`", tok.kind.describe()),
            }),
            None => Ok(Expression {
                root,
                vars: vars.iter().map(|s| s.to_string()).collect(),
                src: src.to_string(),
            }),
        }
    }

    /// Evaluates with `values[i]` bound to the i-th declared variable.
    pub fn eval(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.vars.len());
        eval_node(&self.root, values)
    }

    pub fn source(&self) -> &str {
        &self.src
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.src)
    }
}

fn eval_node(node: &Node, values: &[f64]) -> f64 {
    match node {
        Node::Num(v) => *v,
        Node::Var(slot) => values[*slot],
        Node::Neg(inner) => -eval_node(inner, values),
        Node::Bin(op, lhs, rhs) => {
            let a = eval_node(lhs, values);
            let b = eval_node(rhs, values);
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => a / b,
                BinOp::Pow => a.powf(b),
            }
        }
        Node::Call(func, args) => {
            let a = eval_node(&args[0], values);
            match func {
                Func::Exp => a.exp(),
                Func::Ln => a.ln(),
                Func::Abs => a.abs(),
                Func::Sqrt => a.sqrt(),
                Func::Atan => a.atan(),
                Func::Sin => a.sin(),
                Func::Cos => a.cos(),
                Func::Pow => a.powf(eval_node(&args[1], values)),
                Func::Min => a.min(eval_node(&args[1], values)),
                Func::Max => a.max(eval_node(&args[1], values)),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Num(v) => format!("{v}"),
            TokenKind::Ident(s) => s.clone(),
            TokenKind::Plus => "+".into(),
            TokenKind::Minus => "-".into(),
            TokenKind::Star => "*".into(),
            TokenKind::Slash => "/".into(),
            TokenKind::Caret => "^".into(),
            TokenKind::LParen => "(".into(),
            TokenKind::RParen => ")".into(),
            TokenKind::Comma => ",".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Token {
    kind: TokenKind,
    offset: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ExprError> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'+' | b'-' | b'*' | b'/' | b'^' | b'(' | b')' | b',' => {
                let kind = match b {
                    b'+' => TokenKind::Plus,
                    b'-' => TokenKind::Minus,
                    b'*' => TokenKind::Star,
                    b'/' => TokenKind::Slash,
                    b'^' => TokenKind::Caret,
                    b'(' => TokenKind::LParen,
                    b')' => TokenKind::RParen,
                    _ => TokenKind::Comma,
                };
                tokens.push(Token { kind, offset: i });
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    // Exponent only if followed by digits (optionally signed);
                    // otherwise the `e` is the start of an identifier.
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| ExprError::Syntax {
                    offset: start,
                    message: format!("bad numeric literal `{text}`"),
                })?;
                tokens.push(Token {
                    kind: TokenKind::Num(value),
                    offset: start,
                });
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Ident(src[start..i].to_string()),
                    offset: start,
                });
            }
            _ => {
                return Err(ExprError::Syntax {
                    offset: i,
                    message: format!("unexpected character `{}`", &src[i..i + 1]),
                })
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    vars: &'a [&'a str],
    src_len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<&Token> {
        let tok = self.tokens.get(self.pos);
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn end_offset(&self) -> usize {
        self.src_len
    }

    // Precedence-climbing: +,- = 1; *,/ = 2; unary - = 3; ^ = 4 (right).
    fn parse_expr(&mut self, min_bp: u8) -> Result<Node, ExprError> {
        let mut lhs = self.parse_prefix()?;
        loop {
            let (op, bp) = match self.peek().map(|t| &t.kind) {
                Some(TokenKind::Plus) => (BinOp::Add, 1),
                Some(TokenKind::Minus) => (BinOp::Sub, 1),
                Some(TokenKind::Star) => (BinOp::Mul, 2),
                Some(TokenKind::Slash) => (BinOp::Div, 2),
                Some(TokenKind::Caret) => (BinOp::Pow, 4),
                _ => break,
            };
            if bp < min_bp {
                break;
            }
            self.next();
            // Left-assoc: rhs must bind strictly tighter. Right-assoc (^): equal.
            let rhs_bp = if op == BinOp::Pow { bp } else { bp + 1 };
            let rhs = self.parse_expr(rhs_bp)?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_prefix(&mut self) -> Result<Node, ExprError> {
        let tok = match self.next() {
            Some(tok) => tok.clone(),
            None => {
                return Err(ExprError::Syntax {
                    offset: self.end_offset(),
                    message: "expected an operand".into(),
                })
            }
        };
        match tok.kind {
            TokenKind::Num(v) => Ok(Node::Num(v)),
            TokenKind::Minus => {
                // Unary minus binds tighter than * but looser than ^.
                let inner = self.parse_expr(3)?;
                Ok(Node::Neg(Box::new(inner)))
            }
            TokenKind::Plus => self.parse_prefix(),
            TokenKind::LParen => {
                let inner = self.parse_expr(0)?;
                self.expect_rparen()?;
                Ok(inner)
            }
            TokenKind::Ident(name) => self.parse_ident(&name, tok.offset),
            other => Err(ExprError::Syntax {
                offset: tok.offset,
                message: format!("unexpected `{}`", other.describe()),
            }),
        }
    }

    fn parse_ident(&mut self, name: &str, offset: usize) -> Result<Node, ExprError> {
        if matches!(self.peek().map(|t| &t.kind), Some(TokenKind::LParen)) {
            let func = Func::from_name(name).ok_or_else(|| ExprError::UnknownIdentifier {
                offset,
                name: name.to_string(),
            })?;
            self.next(); // consume '('
            let mut args = vec![self.parse_expr(0)?];
            while matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Comma)) {
                self.next();
                args.push(self.parse_expr(0)?);
            }
            self.expect_rparen()?;
            if args.len() != func.arity() {
                return Err(ExprError::Arity {
                    offset,
                    name: name.to_string(),
                    expected: func.arity(),
                    got: args.len(),
                });
            }
            return Ok(Node::Call(func, args));
        }
        match name {
            "pi" => Ok(Node::Num(std::f64::consts::PI)),
            "e" => Ok(Node::Num(std::f64::consts::E)),
            _ => {
                if let Some(slot) = self.vars.iter().position(|v| *v == name) {
                    Ok(Node::Var(slot))
                } else {
                    Err(ExprError::UnknownIdentifier {
                        offset,
                        name: name.to_string(),
                    })
                }
            }
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ExprError> {
        match self.next() {
            Some(tok) if tok.kind == TokenKind::RParen => Ok(()),
            Some(tok) => Err(ExprError::Syntax {
                offset: tok.offset,
                message: format!("expected `)`, found `{}`", tok.kind.describe()),
            }),
            None => Err(ExprError::Syntax {
                offset: self.end_offset(),
                message: "expected `)`".into(),
            }),
        }
    }
}
