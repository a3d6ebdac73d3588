//! Recursive-descent parser for MiniC.
//!
//! Comments are preserved: a comment on its own line attaches to the
//! following statement, a comment after a statement on the same line
//! attaches to that statement as trailing trivia, and comments sitting
//! before a closing brace attach to the enclosing block.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::ast::*;
use super::token::{tokenize, LexError, Token, TokenKind};
use crate::analysis::drm;

#[derive(Debug, Clone, PartialEq)]
pub enum ParseError {
    Lex(LexError),
    Syntax { line: u32, col: u32, expected: String },
    Unresolved { name: String, line: u32, col: u32 },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Lex(e) => write!(f, "{e}"),
            ParseError::Syntax { line, col, expected } => {
                write!(f, "syntax error at {line}:{col}: expected {expected}")
            }
            ParseError::Unresolved { name, line, col } => {
                write!(f, "unresolved reference to `{name}` at {line}:{col}")
            }
        }
    }
}

/// Names reserved for interpreter builtins; user functions and
/// variables may not use them.
pub const BUILTIN_FUNCS: &[&str] = &[
    "scan", "print", "fopenin", "fopenout", "len", "strlen", "strcpy", "strcmp", "push", "min",
    "max", "abs", "swap", "sqrt",
];

pub fn is_builtin(name: &str) -> bool {
    BUILTIN_FUNCS.contains(&name)
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
    pending: Vec<String>,
    gen: IdGen,
    aliases: Vec<(String, TyKind)>,
}

/// Parse MiniC source into a [`SourceProgram`]. Name resolution runs as
/// part of parsing, so a returned program has every variable reference
/// resolvable under lexical scoping.
pub fn parse(source: &str) -> Result<SourceProgram, ParseError> {
    let toks = tokenize(source).map_err(ParseError::Lex)?;
    let mut p = Parser { toks, i: 0, pending: Vec::new(), gen: IdGen::new(1), aliases: Vec::new() };
    let mut items = Vec::new();
    loop {
        p.skip_trivia();
        if p.i >= p.toks.len() {
            break;
        }
        items.push(p.parse_item()?);
    }
    let end_comments = core::mem::take(&mut p.pending);
    let ast = Ast { id: 0, items, end_comments, next_id: p.gen.next_id() };
    let program =
        SourceProgram { source_text: source.to_string(), ast, author: None, task: None };
    check_semantics(&program)?;
    Ok(program)
}

/// Post-parse checks: name resolution plus the handful of context rules
/// the grammar alone cannot express.
fn check_semantics(program: &SourceProgram) -> Result<(), ParseError> {
    drm::resolve(&program.ast).map_err(|e| ParseError::Unresolved {
        name: e.name,
        line: e.pos.line,
        col: e.pos.col,
    })?;
    Ok(())
}

impl Parser {
    fn skip_trivia(&mut self) {
        while let Some(t) = self.toks.get(self.i) {
            match t.kind {
                TokenKind::Whitespace => self.i += 1,
                TokenKind::Comment => {
                    self.pending.push(t.text.clone());
                    self.i += 1;
                }
                _ => break,
            }
        }
    }

    fn peek(&mut self) -> Option<&Token> {
        self.skip_trivia();
        self.toks.get(self.i)
    }

    fn peek_is(&mut self, text: &str) -> bool {
        self.peek().is_some_and(|t| t.text == text)
    }

    fn bump(&mut self) -> Result<Token, ParseError> {
        self.skip_trivia();
        let t = self.toks.get(self.i).cloned().ok_or_else(|| self.eof_err("more input"))?;
        self.i += 1;
        Ok(t)
    }

    fn eof_err(&self, expected: &str) -> ParseError {
        let (line, col) = self
            .toks
            .last()
            .map(|t| (t.line, t.col + t.text.len() as u32))
            .unwrap_or((1, 1));
        ParseError::Syntax { line, col, expected: expected.to_string() }
    }

    fn err_here(&mut self, expected: &str) -> ParseError {
        self.skip_trivia();
        match self.toks.get(self.i) {
            Some(t) => ParseError::Syntax { line: t.line, col: t.col, expected: expected.to_string() },
            None => self.eof_err(expected),
        }
    }

    fn expect(&mut self, text: &str) -> Result<Token, ParseError> {
        if self.peek_is(text) {
            self.bump()
        } else {
            Err(self.err_here(&format!("`{text}`")))
        }
    }

    fn take_pending(&mut self) -> Vec<String> {
        core::mem::take(&mut self.pending)
    }

    /// A comment following the just-parsed statement on the same line.
    fn grab_trailing(&mut self) -> Option<String> {
        let mut j = self.i;
        while let Some(t) = self.toks.get(j) {
            match t.kind {
                TokenKind::Whitespace => {
                    if t.text.contains('\n') {
                        return None;
                    }
                    j += 1;
                }
                TokenKind::Comment => {
                    let text = t.text.clone();
                    self.i = j + 1;
                    return Some(text);
                }
                _ => return None,
            }
        }
        None
    }

    fn is_type_start(&mut self) -> bool {
        match self.peek().cloned() {
            Some(t) if t.kind == TokenKind::Keyword => matches!(
                t.text.as_str(),
                "bool" | "char" | "short" | "int" | "long" | "longlong" | "float" | "double"
                    | "string" | "vec" | "void"
            ),
            Some(t) if t.kind == TokenKind::Ident => {
                let known = self.aliases.iter().any(|(a, _)| a == &t.text);
                // An alias only starts a declaration when followed by a
                // name, not when used as a plain expression.
                known && {
                    let mut j = self.i + 1;
                    while let Some(n) = self.toks.get(j) {
                        if matches!(n.kind, TokenKind::Whitespace | TokenKind::Comment) {
                            j += 1;
                        } else {
                            break;
                        }
                    }
                    self.toks.get(j).is_some_and(|n| n.kind == TokenKind::Ident)
                }
            }
            _ => false,
        }
    }

    fn parse_type(&mut self, allow_void: bool) -> Result<TypeNode, ParseError> {
        let t = self.bump()?;
        let kind = match (t.kind, t.text.as_str()) {
            (TokenKind::Keyword, "bool") => TyKind::Scalar(ScalarTy::Bool),
            (TokenKind::Keyword, "char") => TyKind::Scalar(ScalarTy::Char),
            (TokenKind::Keyword, "short") => TyKind::Scalar(ScalarTy::Short),
            (TokenKind::Keyword, "int") => TyKind::Scalar(ScalarTy::Int),
            (TokenKind::Keyword, "long") => TyKind::Scalar(ScalarTy::Long),
            (TokenKind::Keyword, "longlong") => TyKind::Scalar(ScalarTy::LongLong),
            (TokenKind::Keyword, "float") => TyKind::Scalar(ScalarTy::Float),
            (TokenKind::Keyword, "double") => TyKind::Scalar(ScalarTy::Double),
            (TokenKind::Keyword, "string") => TyKind::Scalar(ScalarTy::Str),
            (TokenKind::Keyword, "void") if allow_void => TyKind::Scalar(ScalarTy::Void),
            (TokenKind::Keyword, "vec") => {
                self.expect("<")?;
                let elem = self.parse_type(false)?;
                if matches!(self.resolve_alias(&elem.kind), TyKind::Vec(_)) {
                    return Err(ParseError::Syntax {
                        line: t.line,
                        col: t.col,
                        expected: "non-nested vec element type".to_string(),
                    });
                }
                self.expect(">")?;
                TyKind::Vec(Box::new(elem.kind))
            }
            (TokenKind::Ident, name) if self.aliases.iter().any(|(a, _)| a == name) => {
                TyKind::Named(name.to_string())
            }
            _ => {
                return Err(ParseError::Syntax {
                    line: t.line,
                    col: t.col,
                    expected: "type name".to_string(),
                })
            }
        };
        Ok(TypeNode { id: self.gen.fresh(), kind })
    }

    /// Resolve typedef aliases down to a concrete type kind.
    fn resolve_alias(&self, kind: &TyKind) -> TyKind {
        match kind {
            TyKind::Named(n) => match self.aliases.iter().find(|(a, _)| a == n) {
                Some((_, k)) => self.resolve_alias(k),
                None => kind.clone(),
            },
            other => other.clone(),
        }
    }

    fn parse_ident(&mut self) -> Result<(String, Pos), ParseError> {
        let t = self.bump()?;
        if t.kind == TokenKind::Ident {
            Ok((t.text, Pos { line: t.line, col: t.col }))
        } else {
            Err(ParseError::Syntax { line: t.line, col: t.col, expected: "identifier".to_string() })
        }
    }

    fn parse_item(&mut self) -> Result<Item, ParseError> {
        let trivia_leading = self.take_pending();
        if self.peek_is("#") {
            self.bump()?;
            let kw = self.bump()?;
            if kw.text != "include" {
                return Err(ParseError::Syntax {
                    line: kw.line,
                    col: kw.col,
                    expected: "`include`".to_string(),
                });
            }
            self.expect("<")?;
            let mut header = String::new();
            loop {
                let t = self.bump()?;
                if t.text == ">" {
                    break;
                }
                if t.kind == TokenKind::Whitespace {
                    return Err(ParseError::Syntax {
                        line: t.line,
                        col: t.col,
                        expected: "header name".to_string(),
                    });
                }
                header.push_str(&t.text);
            }
            let id = self.gen.fresh();
            let trailing = self.grab_trailing();
            return Ok(Item::Include(Include {
                id,
                header,
                trivia: Trivia { leading: trivia_leading, trailing },
            }));
        }
        if self.peek_is("typedef") {
            self.bump()?;
            let ty = self.parse_type(false)?;
            let (alias, _) = self.parse_ident()?;
            self.expect(";")?;
            self.aliases.push((alias.clone(), ty.kind.clone()));
            let id = self.gen.fresh();
            let trailing = self.grab_trailing();
            return Ok(Item::Typedef(Typedef {
                id,
                ty,
                alias,
                trivia: Trivia { leading: trivia_leading, trailing },
            }));
        }
        if !self.is_type_start() {
            return Err(self.err_here("`#include`, `typedef`, or a declaration"));
        }
        let ty = self.parse_type(true)?;
        let (name, _) = self.parse_ident()?;
        if self.peek_is("(") && !matches!(self.resolve_alias(&ty.kind), TyKind::Vec(_)) {
            // Function definition.
            self.bump()?;
            let mut params = Vec::new();
            if !self.peek_is(")") {
                loop {
                    let pty = self.parse_type(false)?;
                    let by_ref = if self.peek_is("&") {
                        self.bump()?;
                        true
                    } else {
                        false
                    };
                    let (pname, _) = self.parse_ident()?;
                    params.push(Param { id: self.gen.fresh(), ty: pty, name: pname, by_ref });
                    if self.peek_is(",") {
                        self.bump()?;
                    } else {
                        break;
                    }
                }
            }
            self.expect(")")?;
            let body = self.parse_block()?;
            return Ok(Item::Func(FuncDecl {
                id: self.gen.fresh(),
                ret: ty,
                name,
                params,
                body,
                trivia: Trivia { leading: trivia_leading, trailing: None },
            }));
        }
        let decl = self.parse_declarator_rest(ty, name)?;
        self.expect(";")?;
        let id = self.gen.fresh();
        let trailing = self.grab_trailing();
        Ok(Item::Global(GlobalDecl {
            id,
            decl,
            trivia: Trivia { leading: trivia_leading, trailing },
        }))
    }

    fn parse_declarator_rest(&mut self, ty: TypeNode, name: String) -> Result<VarDecl, ParseError> {
        let mut array_len = None;
        let mut ctor_arg = None;
        let mut init = None;
        if self.peek_is("[") {
            self.bump()?;
            let t = self.bump()?;
            if t.kind != TokenKind::IntLit {
                return Err(ParseError::Syntax {
                    line: t.line,
                    col: t.col,
                    expected: "integer array length".to_string(),
                });
            }
            array_len = Some(t.text.parse::<i64>().map_err(|_| ParseError::Syntax {
                line: t.line,
                col: t.col,
                expected: "array length in range".to_string(),
            })?);
            self.expect("]")?;
        } else if self.peek_is("(") && matches!(self.resolve_alias(&ty.kind), TyKind::Vec(_)) {
            self.bump()?;
            ctor_arg = Some(self.parse_expr()?);
            self.expect(")")?;
        } else if self.peek_is("=") {
            self.bump()?;
            init = Some(self.parse_expr()?);
        }
        Ok(VarDecl { ty, name, array_len, ctor_arg, init })
    }

    fn parse_block(&mut self) -> Result<Block, ParseError> {
        self.expect("{")?;
        let mut stmts = Vec::new();
        loop {
            if self.peek_is("}") {
                break;
            }
            if self.peek().is_none() {
                return Err(self.eof_err("`}`"));
            }
            stmts.push(self.parse_stmt()?);
        }
        let end_comments = self.take_pending();
        self.expect("}")?;
        Ok(Block { id: self.gen.fresh(), stmts, end_comments })
    }

    fn parse_stmt(&mut self) -> Result<Stmt, ParseError> {
        let leading = self.take_pending();
        let mut stmt = self.parse_stmt_inner()?;
        let t = stmt.trivia_mut();
        t.leading = leading;
        t.trailing = self.grab_trailing();
        Ok(stmt)
    }

    fn parse_stmt_inner(&mut self) -> Result<Stmt, ParseError> {
        if self.peek_is("{") {
            let block = self.parse_block()?;
            return Ok(Stmt::Block { block, trivia: Trivia::default() });
        }
        if self.peek_is("if") {
            self.bump()?;
            self.expect("(")?;
            let cond = self.parse_expr()?;
            self.expect(")")?;
            let then_branch = Box::new(self.parse_stmt()?);
            let else_branch = if self.peek_is("else") {
                self.bump()?;
                Some(Box::new(self.parse_stmt()?))
            } else {
                None
            };
            return Ok(Stmt::If {
                id: self.gen.fresh(),
                cond,
                then_branch,
                else_branch,
                trivia: Trivia::default(),
            });
        }
        if self.peek_is("for") {
            self.bump()?;
            self.expect("(")?;
            let init = if self.peek_is(";") {
                self.bump()?;
                None
            } else if self.is_type_start() {
                let ty = self.parse_type(false)?;
                let (name, _) = self.parse_ident()?;
                let decl = self.parse_declarator_rest(ty, name)?;
                self.expect(";")?;
                Some(Box::new(Stmt::Decl { id: self.gen.fresh(), decl, trivia: Trivia::default() }))
            } else {
                let expr = self.parse_expr()?;
                self.expect(";")?;
                Some(Box::new(Stmt::Expr { id: self.gen.fresh(), expr, trivia: Trivia::default() }))
            };
            let cond = if self.peek_is(";") { None } else { Some(self.parse_expr()?) };
            self.expect(";")?;
            let step = if self.peek_is(")") { None } else { Some(self.parse_expr()?) };
            self.expect(")")?;
            let body = Box::new(self.parse_stmt()?);
            return Ok(Stmt::For {
                id: self.gen.fresh(),
                init,
                cond,
                step,
                body,
                trivia: Trivia::default(),
            });
        }
        if self.peek_is("while") {
            self.bump()?;
            self.expect("(")?;
            let cond = self.parse_expr()?;
            self.expect(")")?;
            let body = Box::new(self.parse_stmt()?);
            return Ok(Stmt::While { id: self.gen.fresh(), cond, body, trivia: Trivia::default() });
        }
        if self.peek_is("return") {
            self.bump()?;
            let value = if self.peek_is(";") { None } else { Some(self.parse_expr()?) };
            self.expect(";")?;
            return Ok(Stmt::Return { id: self.gen.fresh(), value, trivia: Trivia::default() });
        }
        if self.peek_is("input") {
            self.bump()?;
            let mut targets = Vec::new();
            while self.peek_is(">>") {
                self.bump()?;
                let e = self.parse_expr()?;
                if !e.is_lvalue() {
                    return Err(self.err_here("readable target"));
                }
                targets.push(e);
            }
            if targets.is_empty() {
                return Err(self.err_here("`>>`"));
            }
            self.expect(";")?;
            return Ok(Stmt::StreamIn { id: self.gen.fresh(), targets, trivia: Trivia::default() });
        }
        if self.peek_is("output") {
            self.bump()?;
            let mut items = Vec::new();
            while self.peek_is("<<") {
                self.bump()?;
                items.push(self.parse_expr()?);
            }
            if items.is_empty() {
                return Err(self.err_here("`<<`"));
            }
            self.expect(";")?;
            return Ok(Stmt::StreamOut { id: self.gen.fresh(), items, trivia: Trivia::default() });
        }
        if self.peek_is("setprec") {
            self.bump()?;
            self.expect("(")?;
            let e = self.parse_expr()?;
            self.expect(")")?;
            self.expect(";")?;
            return Ok(Stmt::Precision {
                id: self.gen.fresh(),
                kind: PrecisionKind::SetPrec(e),
                trivia: Trivia::default(),
            });
        }
        if self.peek_is("fixed") {
            self.bump()?;
            self.expect(";")?;
            return Ok(Stmt::Precision {
                id: self.gen.fresh(),
                kind: PrecisionKind::Fixed,
                trivia: Trivia::default(),
            });
        }
        if self.peek_is("syncio") {
            self.bump()?;
            self.expect("(")?;
            let t = self.bump()?;
            let enabled = match t.text.as_str() {
                "true" => true,
                "false" => false,
                _ => {
                    return Err(ParseError::Syntax {
                        line: t.line,
                        col: t.col,
                        expected: "`true` or `false`".to_string(),
                    })
                }
            };
            self.expect(")")?;
            self.expect(";")?;
            return Ok(Stmt::SyncIo { id: self.gen.fresh(), enabled, trivia: Trivia::default() });
        }
        if self.is_type_start() {
            let ty = self.parse_type(false)?;
            let (name, _) = self.parse_ident()?;
            let decl = self.parse_declarator_rest(ty, name)?;
            self.expect(";")?;
            return Ok(Stmt::Decl { id: self.gen.fresh(), decl, trivia: Trivia::default() });
        }
        let expr = self.parse_expr()?;
        self.expect(";")?;
        Ok(Stmt::Expr { id: self.gen.fresh(), expr, trivia: Trivia::default() })
    }

    fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        self.parse_assign()
    }

    fn parse_assign(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.parse_or()?;
        let op = match self.peek().map(|t| t.text.as_str()) {
            Some("=") => Some(AssignOp::Set),
            Some("+=") => Some(AssignOp::Add),
            Some("-=") => Some(AssignOp::Sub),
            Some("*=") => Some(AssignOp::Mul),
            Some("/=") => Some(AssignOp::Div),
            Some("%=") => Some(AssignOp::Rem),
            _ => None,
        };
        if let Some(op) = op {
            if !lhs.is_lvalue() {
                return Err(self.err_here("assignable expression on the left of assignment"));
            }
            self.bump()?;
            let value = self.parse_assign()?;
            return Ok(Expr::Assign {
                id: self.gen.fresh(),
                op,
                target: Box::new(lhs),
                value: Box::new(value),
            });
        }
        Ok(lhs)
    }

    fn parse_bin_level(
        &mut self,
        ops: &[(&str, BinOpKind)],
        next: fn(&mut Self) -> Result<Expr, ParseError>,
    ) -> Result<Expr, ParseError> {
        let mut lhs = next(self)?;
        loop {
            let found = self
                .peek()
                .and_then(|t| ops.iter().find(|(s, _)| *s == t.text).map(|(_, k)| *k));
            match found {
                Some(kind) => {
                    self.bump()?;
                    let rhs = next(self)?;
                    lhs = Expr::Bin {
                        id: self.gen.fresh(),
                        op: kind,
                        lhs: Box::new(lhs),
                        rhs: Box::new(rhs),
                    };
                }
                None => return Ok(lhs),
            }
        }
    }

    fn parse_or(&mut self) -> Result<Expr, ParseError> {
        self.parse_bin_level(&[("||", BinOpKind::Or)], Self::parse_and)
    }

    fn parse_and(&mut self) -> Result<Expr, ParseError> {
        self.parse_bin_level(&[("&&", BinOpKind::And)], Self::parse_eq)
    }

    fn parse_eq(&mut self) -> Result<Expr, ParseError> {
        self.parse_bin_level(&[("==", BinOpKind::Eq), ("!=", BinOpKind::Ne)], Self::parse_rel)
    }

    fn parse_rel(&mut self) -> Result<Expr, ParseError> {
        self.parse_bin_level(
            &[
                ("<=", BinOpKind::Le),
                (">=", BinOpKind::Ge),
                ("<", BinOpKind::Lt),
                (">", BinOpKind::Gt),
            ],
            Self::parse_add,
        )
    }

    fn parse_add(&mut self) -> Result<Expr, ParseError> {
        self.parse_bin_level(&[("+", BinOpKind::Add), ("-", BinOpKind::Sub)], Self::parse_mul)
    }

    fn parse_mul(&mut self) -> Result<Expr, ParseError> {
        self.parse_bin_level(
            &[("*", BinOpKind::Mul), ("/", BinOpKind::Div), ("%", BinOpKind::Rem)],
            Self::parse_unary,
        )
    }

    fn parse_unary(&mut self) -> Result<Expr, ParseError> {
        let op = match self.peek().map(|t| t.text.as_str()) {
            Some("!") => Some(UnOpKind::Not),
            Some("-") => Some(UnOpKind::Neg),
            Some("++") => Some(UnOpKind::PreInc),
            Some("--") => Some(UnOpKind::PreDec),
            Some("&") => Some(UnOpKind::AddrOf),
            _ => None,
        };
        if let Some(op) = op {
            self.bump()?;
            let operand = self.parse_unary()?;
            if matches!(op, UnOpKind::PreInc | UnOpKind::PreDec | UnOpKind::AddrOf)
                && !operand.is_lvalue()
            {
                return Err(self.err_here("assignable operand"));
            }
            return Ok(Expr::Un { id: self.gen.fresh(), op, operand: Box::new(operand) });
        }
        self.parse_postfix()
    }

    fn parse_postfix(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.parse_primary()?;
        loop {
            match self.peek().map(|t| t.text.as_str()) {
                Some("[") => {
                    self.bump()?;
                    let index = self.parse_expr()?;
                    self.expect("]")?;
                    e = Expr::Index {
                        id: self.gen.fresh(),
                        base: Box::new(e),
                        index: Box::new(index),
                    };
                }
                Some("++") => {
                    if !e.is_lvalue() {
                        return Err(self.err_here("assignable operand"));
                    }
                    self.bump()?;
                    e = Expr::Un { id: self.gen.fresh(), op: UnOpKind::PostInc, operand: Box::new(e) };
                }
                Some("--") => {
                    if !e.is_lvalue() {
                        return Err(self.err_here("assignable operand"));
                    }
                    self.bump()?;
                    e = Expr::Un { id: self.gen.fresh(), op: UnOpKind::PostDec, operand: Box::new(e) };
                }
                _ => return Ok(e),
            }
        }
    }

    fn parse_primary(&mut self) -> Result<Expr, ParseError> {
        let t = self.bump()?;
        match t.kind {
            TokenKind::IntLit => {
                let v: i64 = t.text.parse().map_err(|_| ParseError::Syntax {
                    line: t.line,
                    col: t.col,
                    expected: "integer literal in range".to_string(),
                })?;
                Ok(Expr::Literal { id: self.gen.fresh(), lit: Lit::Int(v) })
            }
            TokenKind::FloatLit => {
                let v: f64 = t.text.parse().map_err(|_| ParseError::Syntax {
                    line: t.line,
                    col: t.col,
                    expected: "float literal".to_string(),
                })?;
                Ok(Expr::Literal { id: self.gen.fresh(), lit: Lit::Float(v) })
            }
            TokenKind::StrLit => {
                let bytes = unescape(&t.text[1..t.text.len() - 1]).ok_or(ParseError::Syntax {
                    line: t.line,
                    col: t.col,
                    expected: "valid escape sequence".to_string(),
                })?;
                Ok(Expr::Literal { id: self.gen.fresh(), lit: Lit::Str(bytes) })
            }
            TokenKind::CharLit => {
                let bytes = unescape(&t.text[1..t.text.len() - 1]).ok_or(ParseError::Syntax {
                    line: t.line,
                    col: t.col,
                    expected: "valid escape sequence".to_string(),
                })?;
                if bytes.len() != 1 {
                    return Err(ParseError::Syntax {
                        line: t.line,
                        col: t.col,
                        expected: "single-byte char literal".to_string(),
                    });
                }
                Ok(Expr::Literal { id: self.gen.fresh(), lit: Lit::Char(bytes[0]) })
            }
            TokenKind::Keyword if t.text == "true" => {
                Ok(Expr::Literal { id: self.gen.fresh(), lit: Lit::Bool(true) })
            }
            TokenKind::Keyword if t.text == "false" => {
                Ok(Expr::Literal { id: self.gen.fresh(), lit: Lit::Bool(false) })
            }
            TokenKind::Ident => {
                let pos = Pos { line: t.line, col: t.col };
                if self.peek_is("(") {
                    self.bump()?;
                    let mut args = Vec::new();
                    if !self.peek_is(")") {
                        loop {
                            args.push(self.parse_expr()?);
                            if self.peek_is(",") {
                                self.bump()?;
                            } else {
                                break;
                            }
                        }
                    }
                    self.expect(")")?;
                    return Ok(Expr::Call { id: self.gen.fresh(), callee: t.text, args, pos });
                }
                Ok(Expr::Var { id: self.gen.fresh(), name: t.text, pos })
            }
            TokenKind::Punct if t.text == "(" => {
                let e = self.parse_expr()?;
                self.expect(")")?;
                Ok(e)
            }
            _ => Err(ParseError::Syntax {
                line: t.line,
                col: t.col,
                expected: "expression".to_string(),
            }),
        }
    }
}

fn unescape(s: &str) -> Option<Vec<u8>> {
    let mut out = Vec::new();
    let mut it = s.bytes();
    while let Some(b) = it.next() {
        if b == b'\\' {
            match it.next()? {
                b'n' => out.push(b'\n'),
                b't' => out.push(b'\t'),
                b'r' => out.push(b'\r'),
                b'0' => out.push(0),
                b'\\' => out.push(b'\\'),
                b'"' => out.push(b'"'),
                b'\'' => out.push(b'\''),
                _ => return None,
            }
        } else {
            out.push(b);
        }
    }
    Some(out)
}

pub fn escape_bytes(bytes: &[u8]) -> String {
    let mut out = String::new();
    for &b in bytes {
        match b {
            b'\n' => out.push_str("\\n"),
            b'\t' => out.push_str("\\t"),
            b'\r' => out.push_str("\\r"),
            0 => out.push_str("\\0"),
            b'\\' => out.push_str("\\\\"),
            b'"' => out.push_str("\\\""),
            b'\'' => out.push_str("\\'"),
            _ => out.push(b as char),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::ast::{Item, NodeKind, Stmt};
    use crate::lang::print::pretty_print;
    use crate::samples::{LOOP_SUM, RECURSIVE_FOO};

    #[test]
    fn running_example_has_expected_structure() {
        let p = parse(RECURSIVE_FOO).unwrap();
        assert_eq!(p.ast.items.len(), 1);
        let Item::Func(f) = &p.ast.items[0] else { panic!("expected a function") };
        assert_eq!(f.name, "foo");
        let kinds: Vec<NodeKind> = f
            .body
            .stmts
            .iter()
            .map(|s| match s {
                Stmt::Decl { .. } => NodeKind::DeclStmt,
                Stmt::If { .. } => NodeKind::IfStmt,
                Stmt::Expr { .. } => NodeKind::ExprStmt,
                Stmt::Return { .. } => NodeKind::ReturnStmt,
                _ => NodeKind::Program,
            })
            .collect();
        assert_eq!(
            kinds,
            [NodeKind::DeclStmt, NodeKind::IfStmt, NodeKind::ExprStmt, NodeKind::ReturnStmt]
        );
        // The assignment statement wraps an Assign expression and the
        // if-branch holds the first of the two returns.
        let Stmt::Expr { expr, .. } = &f.body.stmts[2] else { panic!() };
        assert!(matches!(expr, crate::lang::ast::Expr::Assign { .. }));
        let Stmt::If { then_branch, .. } = &f.body.stmts[1] else { panic!() };
        assert!(matches!(&**then_branch, Stmt::Return { .. }));
    }

    #[test]
    fn truncated_input_is_a_syntax_error() {
        assert!(matches!(parse("int foo("), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn unresolved_name_is_reported() {
        let err = parse("int main() { return x; }").unwrap_err();
        assert!(matches!(err, ParseError::Unresolved { ref name, .. } if name == "x"));
    }

    #[test]
    fn reprint_reaches_a_fixpoint() {
        for src in [RECURSIVE_FOO, LOOP_SUM] {
            let once = pretty_print(&parse(src).unwrap().ast);
            let twice = pretty_print(&parse(&once).unwrap().ast);
            assert_eq!(once, twice);
        }
    }

    #[test]
    fn comments_attach_and_survive() {
        let p = parse(RECURSIVE_FOO).unwrap();
        let printed = pretty_print(&p.ast);
        assert!(printed.contains("// base case"));
        assert!(printed.contains("// recursion"));
        // Trailing comment stays on the assignment line.
        let line = printed.lines().find(|l| l.contains("b = foo(a - 1);")).unwrap();
        assert!(line.contains("// recursion"));
    }

    #[test]
    fn scoping_rejects_bad_programs() {
        // Same-scope redeclaration.
        assert!(parse("int main() { int a; int a; return 0; }").is_err());
        // Shadowing in an inner scope is fine.
        assert!(parse("int main() { int a = 1; { int a = 2; a = 3; } return a; }").is_ok());
        // Use of a for-scoped variable after the loop.
        assert!(parse("int main() { for (int i = 0; i < 3; i++) { } return i; }").is_err());
        // `&` outside scan.
        assert!(parse("int main() { int a = 0; int b = &a; return b; }").is_err());
    }

    #[test]
    fn typedef_aliases_parse_and_resolve() {
        let src = "typedef longlong ll;\ntypedef vec<int> vi;\nll g = 5;\nint main() { vi v(3); ll x = g; v[0] = 1; return v[0]; }\n";
        let p = parse(src).unwrap();
        let printed = pretty_print(&p.ast);
        assert!(printed.contains("typedef longlong ll;"));
        assert!(printed.contains("vi v(3);"));
    }
}
