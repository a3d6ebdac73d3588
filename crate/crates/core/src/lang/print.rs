//! Canonical pretty-printer: 4-space indentation, braces on the same
//! line, one statement per line. Printing is deterministic and its
//! output re-parses to a structurally identical tree, preserved
//! comments included.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::ast::*;
use super::parse::escape_bytes;

pub fn pretty_print(ast: &Ast) -> String {
    let mut p = Printer { out: String::new(), indent: 0 };
    let mut first = true;
    for item in &ast.items {
        if !first && matches!(item, Item::Func(_)) {
            p.out.push('\n');
        }
        p.print_item(item);
        first = false;
    }
    for c in &ast.end_comments {
        p.line(c);
    }
    p.out
}

struct Printer {
    out: String,
    indent: usize,
}

impl Printer {
    fn pad(&mut self) {
        for _ in 0..self.indent {
            self.out.push_str("    ");
        }
    }

    fn line(&mut self, s: &str) {
        self.pad();
        self.out.push_str(s);
        self.out.push('\n');
    }

    fn leading(&mut self, trivia: &Trivia) {
        for c in &trivia.leading {
            self.line(c);
        }
    }

    fn end_line(&mut self, trivia: &Trivia) {
        if let Some(t) = &trivia.trailing {
            self.out.push(' ');
            self.out.push_str(t);
        }
        self.out.push('\n');
    }

    fn print_item(&mut self, item: &Item) {
        match item {
            Item::Include(i) => {
                self.leading(&i.trivia);
                self.pad();
                self.out.push_str(&format!("#include <{}>", i.header));
                self.end_line(&i.trivia);
            }
            Item::Typedef(t) => {
                self.leading(&t.trivia);
                self.pad();
                self.out.push_str(&format!("typedef {} {};", type_text(&t.ty.kind), t.alias));
                self.end_line(&t.trivia);
            }
            Item::Global(g) => {
                self.leading(&g.trivia);
                self.pad();
                let text = decl_text(&g.decl);
                self.out.push_str(&text);
                self.out.push(';');
                self.end_line(&g.trivia);
            }
            Item::Func(f) => {
                self.leading(&f.trivia);
                self.pad();
                let params: Vec<String> = f
                    .params
                    .iter()
                    .map(|p| {
                        format!(
                            "{} {}{}",
                            type_text(&p.ty.kind),
                            if p.by_ref { "&" } else { "" },
                            p.name
                        )
                    })
                    .collect();
                self.out.push_str(&format!(
                    "{} {}({}) {{\n",
                    type_text(&f.ret.kind),
                    f.name,
                    params.join(", ")
                ));
                self.indent += 1;
                for s in &f.body.stmts {
                    self.print_stmt(s);
                }
                for c in &f.body.end_comments {
                    self.line(c);
                }
                self.indent -= 1;
                self.line("}");
            }
        }
    }

    fn print_block_body(&mut self, block: &Block) {
        self.indent += 1;
        for s in &block.stmts {
            self.print_stmt(s);
        }
        for c in &block.end_comments {
            self.line(c);
        }
        self.indent -= 1;
    }

    /// Print a control-statement body. A compound body opens its brace
    /// on the `head` line; a single statement goes one line down, one
    /// level deeper.
    fn print_body(&mut self, head: &str, body: &Stmt, trivia: &Trivia) {
        match body {
            Stmt::Block { block, .. } => {
                self.pad();
                self.out.push_str(head);
                self.out.push_str(" {");
                self.end_line(trivia);
                self.print_block_body(block);
                self.line("}");
            }
            _ => {
                self.pad();
                self.out.push_str(head);
                self.end_line(trivia);
                self.indent += 1;
                self.print_stmt(body);
                self.indent -= 1;
            }
        }
    }

    /// `if` / `else if` chains. When `inline` the pad and any prefix
    /// (`} else `) were already written by the caller.
    fn print_if(&mut self, s: &Stmt, inline: bool) {
        let Stmt::If { cond, then_branch, else_branch, trivia, .. } = s else {
            return;
        };
        if !inline {
            self.pad();
        }
        self.out.push_str(&format!("if ({})", expr_text(cond, 0)));
        let then_braced = matches!(**then_branch, Stmt::Block { .. });
        match &**then_branch {
            Stmt::Block { block, .. } => {
                self.out.push_str(" {");
                self.end_line(trivia);
                self.print_block_body(block);
            }
            other => {
                self.end_line(trivia);
                self.indent += 1;
                self.print_stmt(other);
                self.indent -= 1;
            }
        }
        match else_branch {
            None => {
                if then_braced {
                    self.line("}");
                }
            }
            Some(els) => {
                self.pad();
                if then_braced {
                    self.out.push_str("} else");
                } else {
                    self.out.push_str("else");
                }
                match &**els {
                    Stmt::If { .. } => {
                        self.out.push(' ');
                        self.print_if(els, true);
                    }
                    Stmt::Block { block, .. } => {
                        self.out.push_str(" {\n");
                        self.print_block_body(block);
                        self.line("}");
                    }
                    other => {
                        self.out.push('\n');
                        self.indent += 1;
                        self.print_stmt(other);
                        self.indent -= 1;
                    }
                }
            }
        }
    }

    fn print_stmt(&mut self, s: &Stmt) {
        self.leading(s.trivia());
        match s {
            Stmt::Decl { decl, trivia, .. } => {
                self.pad();
                let text = decl_text(decl);
                self.out.push_str(&text);
                self.out.push(';');
                self.end_line(trivia);
            }
            Stmt::Expr { expr, trivia, .. } => {
                self.pad();
                self.out.push_str(&expr_text(expr, 0));
                self.out.push(';');
                self.end_line(trivia);
            }
            Stmt::If { .. } => self.print_if(s, false),
            Stmt::For { init, cond, step, body, trivia, .. } => {
                let mut head = String::from("for (");
                if let Some(i) = init {
                    head.push_str(&stmt_inline_text(i));
                }
                head.push(';');
                if let Some(c) = cond {
                    head.push(' ');
                    head.push_str(&expr_text(c, 0));
                }
                head.push(';');
                if let Some(st) = step {
                    head.push(' ');
                    head.push_str(&expr_text(st, 0));
                }
                head.push(')');
                self.print_body(&head, body, trivia);
            }
            Stmt::While { cond, body, trivia, .. } => {
                let head = format!("while ({})", expr_text(cond, 0));
                self.print_body(&head, body, trivia);
            }
            Stmt::Return { value, trivia, .. } => {
                self.pad();
                match value {
                    Some(v) => self.out.push_str(&format!("return {};", expr_text(v, 0))),
                    None => self.out.push_str("return;"),
                }
                self.end_line(trivia);
            }
            Stmt::Block { block, trivia } => {
                self.pad();
                self.out.push('{');
                self.end_line(trivia);
                self.print_block_body(block);
                self.line("}");
            }
            Stmt::StreamIn { targets, trivia, .. } => {
                self.pad();
                self.out.push_str("input");
                for t in targets {
                    self.out.push_str(" >> ");
                    self.out.push_str(&expr_text(t, 0));
                }
                self.out.push(';');
                self.end_line(trivia);
            }
            Stmt::StreamOut { items, trivia, .. } => {
                self.pad();
                self.out.push_str("output");
                for i in items {
                    self.out.push_str(" << ");
                    self.out.push_str(&expr_text(i, 0));
                }
                self.out.push(';');
                self.end_line(trivia);
            }
            Stmt::Precision { kind, trivia, .. } => {
                self.pad();
                match kind {
                    PrecisionKind::SetPrec(e) => {
                        self.out.push_str(&format!("setprec({});", expr_text(e, 0)))
                    }
                    PrecisionKind::Fixed => self.out.push_str("fixed;"),
                }
                self.end_line(trivia);
            }
            Stmt::SyncIo { enabled, trivia, .. } => {
                self.pad();
                self.out.push_str(&format!("syncio({});", if *enabled { "true" } else { "false" }));
                self.end_line(trivia);
            }
        }
    }
}

pub fn type_text(ty: &TyKind) -> String {
    match ty {
        TyKind::Scalar(s) => String::from(s.keyword()),
        TyKind::Vec(elem) => format!("vec<{}>", type_text(elem)),
        TyKind::Named(n) => n.clone(),
    }
}

pub fn decl_text(decl: &VarDecl) -> String {
    let mut s = format!("{} {}", type_text(&decl.ty.kind), decl.name);
    if let Some(len) = decl.array_len {
        s.push_str(&format!("[{len}]"));
    }
    if let Some(c) = &decl.ctor_arg {
        s.push_str(&format!("({})", expr_text(c, 0)));
    }
    if let Some(i) = &decl.init {
        s.push_str(&format!(" = {}", expr_text(i, 0)));
    }
    s
}

fn stmt_inline_text(s: &Stmt) -> String {
    match s {
        Stmt::Decl { decl, .. } => decl_text(decl),
        Stmt::Expr { expr, .. } => expr_text(expr, 0),
        _ => String::new(),
    }
}

fn float_text(v: f64) -> String {
    if v.is_finite() && v == libm::trunc(v) && libm::fabs(v) < 1e15 {
        format!("{v:.1}")
    } else {
        format!("{v}")
    }
}

fn bin_prec(op: BinOpKind) -> u8 {
    match op {
        BinOpKind::Or => 2,
        BinOpKind::And => 3,
        BinOpKind::Eq | BinOpKind::Ne => 4,
        BinOpKind::Lt | BinOpKind::Le | BinOpKind::Gt | BinOpKind::Ge => 5,
        BinOpKind::Add | BinOpKind::Sub => 6,
        BinOpKind::Mul | BinOpKind::Div | BinOpKind::Rem => 7,
    }
}

fn expr_prec(e: &Expr) -> u8 {
    match e {
        Expr::Assign { .. } => 1,
        Expr::Bin { op, .. } => bin_prec(*op),
        Expr::Un { op, .. } => match op {
            UnOpKind::PostInc | UnOpKind::PostDec => 9,
            _ => 8,
        },
        Expr::Index { .. } | Expr::Call { .. } => 9,
        Expr::Literal { .. } | Expr::Var { .. } => 10,
    }
}

/// Render an expression, parenthesizing children whose precedence falls
/// below `min_prec`.
pub fn expr_text(e: &Expr, min_prec: u8) -> String {
    let text = match e {
        Expr::Literal { lit, .. } => match lit {
            Lit::Int(v) => format!("{v}"),
            Lit::Float(v) => float_text(*v),
            Lit::Str(bytes) => format!("\"{}\"", escape_bytes(bytes)),
            Lit::Char(b) => format!("'{}'", escape_bytes(&[*b])),
            Lit::Bool(true) => String::from("true"),
            Lit::Bool(false) => String::from("false"),
        },
        Expr::Var { name, .. } => name.clone(),
        Expr::Bin { op, lhs, rhs, .. } => {
            let p = bin_prec(*op);
            format!("{} {} {}", expr_text(lhs, p), op.symbol(), expr_text(rhs, p + 1))
        }
        Expr::Un { op, operand, .. } => match op {
            UnOpKind::Neg => {
                let inner = expr_text(operand, 8);
                if inner.starts_with('-') {
                    format!("-({inner})")
                } else {
                    format!("-{inner}")
                }
            }
            UnOpKind::Not => format!("!{}", expr_text(operand, 8)),
            UnOpKind::PreInc => format!("++{}", expr_text(operand, 8)),
            UnOpKind::PreDec => format!("--{}", expr_text(operand, 8)),
            UnOpKind::PostInc => format!("{}++", expr_text(operand, 9)),
            UnOpKind::PostDec => format!("{}--", expr_text(operand, 9)),
            UnOpKind::AddrOf => format!("&{}", expr_text(operand, 8)),
        },
        Expr::Assign { op, target, value, .. } => {
            format!("{} {} {}", expr_text(target, 9), op.symbol(), expr_text(value, 1))
        }
        Expr::Call { callee, args, .. } => {
            let parts: Vec<String> = args.iter().map(|a| expr_text(a, 0)).collect();
            format!("{}({})", callee, parts.join(", "))
        }
        Expr::Index { base, index, .. } => {
            format!("{}[{}]", expr_text(base, 9), expr_text(index, 0))
        }
    };
    if expr_prec(e) < min_prec {
        format!("({text})")
    } else {
        text
    }
}
