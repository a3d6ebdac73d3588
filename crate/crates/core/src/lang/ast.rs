//! Abstract syntax tree for MiniC.
//!
//! Every node carries a `NodeId` that is unique within its tree and
//! stable across clones; transformers allocate fresh ids for nodes they
//! create. Comments survive parsing as trivia attached to the following
//! statement (or as a trailing comment of the statement that ends on
//! the same line).

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

pub type NodeId = u32;

/// Allocator for fresh node ids during parsing and transformation.
#[derive(Debug, Clone)]
pub struct IdGen {
    next: NodeId,
}

impl IdGen {
    pub fn new(next: NodeId) -> Self {
        IdGen { next }
    }

    pub fn fresh(&mut self) -> NodeId {
        let id = self.next;
        self.next += 1;
        id
    }

    pub fn next_id(&self) -> NodeId {
        self.next
    }
}

/// The node-kind inventory used by syntactic features and debug dumps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    Program,
    Include,
    Typedef,
    GlobalDecl,
    FuncDecl,
    Param,
    CompoundStmt,
    DeclStmt,
    IfStmt,
    ForStmt,
    WhileStmt,
    ReturnStmt,
    ExprStmt,
    Assign,
    BinOp,
    UnaryOp,
    Call,
    Index,
    StreamIn,
    StreamOut,
    PrecisionStmt,
    SyncIoStmt,
    VarRef,
    Literal,
    TypeRef,
}

impl NodeKind {
    pub fn name(self) -> &'static str {
        match self {
            NodeKind::Program => "Program",
            NodeKind::Include => "Include",
            NodeKind::Typedef => "Typedef",
            NodeKind::GlobalDecl => "GlobalDecl",
            NodeKind::FuncDecl => "FuncDecl",
            NodeKind::Param => "Param",
            NodeKind::CompoundStmt => "CompoundStmt",
            NodeKind::DeclStmt => "DeclStmt",
            NodeKind::IfStmt => "IfStmt",
            NodeKind::ForStmt => "ForStmt",
            NodeKind::WhileStmt => "WhileStmt",
            NodeKind::ReturnStmt => "ReturnStmt",
            NodeKind::ExprStmt => "ExprStmt",
            NodeKind::Assign => "Assign",
            NodeKind::BinOp => "BinOp",
            NodeKind::UnaryOp => "UnaryOp",
            NodeKind::Call => "Call",
            NodeKind::Index => "Index",
            NodeKind::StreamIn => "StreamIn",
            NodeKind::StreamOut => "StreamOut",
            NodeKind::PrecisionStmt => "PrecisionStmt",
            NodeKind::SyncIoStmt => "SyncIoStmt",
            NodeKind::VarRef => "VarRef",
            NodeKind::Literal => "Literal",
            NodeKind::TypeRef => "TypeRef",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ScalarTy {
    Bool,
    Char,
    Short,
    Int,
    Long,
    LongLong,
    Float,
    Double,
    Str,
    Void,
}

impl ScalarTy {
    pub fn keyword(self) -> &'static str {
        match self {
            ScalarTy::Bool => "bool",
            ScalarTy::Char => "char",
            ScalarTy::Short => "short",
            ScalarTy::Int => "int",
            ScalarTy::Long => "long",
            ScalarTy::LongLong => "longlong",
            ScalarTy::Float => "float",
            ScalarTy::Double => "double",
            ScalarTy::Str => "string",
            ScalarTy::Void => "void",
        }
    }

    pub fn is_integral(self) -> bool {
        matches!(self, ScalarTy::Bool | ScalarTy::Char | ScalarTy::Short | ScalarTy::Int | ScalarTy::Long | ScalarTy::LongLong)
    }

    pub fn is_float(self) -> bool {
        matches!(self, ScalarTy::Float | ScalarTy::Double)
    }
}

/// A type as written: a scalar keyword, `vec<elem>`, or a typedef alias.
#[derive(Debug, Clone, PartialEq)]
pub enum TyKind {
    Scalar(ScalarTy),
    Vec(Box<TyKind>),
    Named(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypeNode {
    pub id: NodeId,
    pub kind: TyKind,
}

/// Comment trivia; `text` keeps the delimiters (`// ...` or `/* ... */`).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trivia {
    pub leading: Vec<String>,
    pub trailing: Option<String>,
}

impl Trivia {
    pub fn is_empty(&self) -> bool {
        self.leading.is_empty() && self.trailing.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarDecl {
    pub ty: TypeNode,
    pub name: String,
    /// `name[K]` fixed array length.
    pub array_len: Option<i64>,
    /// `name(expr)` vec constructor argument.
    pub ctor_arg: Option<Expr>,
    /// `= expr` initializer.
    pub init: Option<Expr>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Include {
    pub id: NodeId,
    pub header: String,
    pub trivia: Trivia,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Typedef {
    pub id: NodeId,
    pub ty: TypeNode,
    pub alias: String,
    pub trivia: Trivia,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlobalDecl {
    pub id: NodeId,
    pub decl: VarDecl,
    pub trivia: Trivia,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    pub id: NodeId,
    pub ty: TypeNode,
    pub name: String,
    pub by_ref: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuncDecl {
    pub id: NodeId,
    pub ret: TypeNode,
    pub name: String,
    pub params: Vec<Param>,
    pub body: Block,
    pub trivia: Trivia,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Include(Include),
    Typedef(Typedef),
    Global(GlobalDecl),
    Func(FuncDecl),
}

impl Item {
    pub fn id(&self) -> NodeId {
        match self {
            Item::Include(i) => i.id,
            Item::Typedef(t) => t.id,
            Item::Global(g) => g.id,
            Item::Func(f) => f.id,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub id: NodeId,
    pub stmts: Vec<Stmt>,
    /// Comments sitting just before the closing brace.
    pub end_comments: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PrecisionKind {
    SetPrec(Expr),
    Fixed,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    Decl { id: NodeId, decl: VarDecl, trivia: Trivia },
    Expr { id: NodeId, expr: Expr, trivia: Trivia },
    If { id: NodeId, cond: Expr, then_branch: Box<Stmt>, else_branch: Option<Box<Stmt>>, trivia: Trivia },
    For { id: NodeId, init: Option<Box<Stmt>>, cond: Option<Expr>, step: Option<Expr>, body: Box<Stmt>, trivia: Trivia },
    While { id: NodeId, cond: Expr, body: Box<Stmt>, trivia: Trivia },
    Return { id: NodeId, value: Option<Expr>, trivia: Trivia },
    Block { block: Block, trivia: Trivia },
    StreamIn { id: NodeId, targets: Vec<Expr>, trivia: Trivia },
    StreamOut { id: NodeId, items: Vec<Expr>, trivia: Trivia },
    Precision { id: NodeId, kind: PrecisionKind, trivia: Trivia },
    SyncIo { id: NodeId, enabled: bool, trivia: Trivia },
}

impl Stmt {
    pub fn id(&self) -> NodeId {
        match self {
            Stmt::Decl { id, .. }
            | Stmt::Expr { id, .. }
            | Stmt::If { id, .. }
            | Stmt::For { id, .. }
            | Stmt::While { id, .. }
            | Stmt::Return { id, .. }
            | Stmt::StreamIn { id, .. }
            | Stmt::StreamOut { id, .. }
            | Stmt::Precision { id, .. }
            | Stmt::SyncIo { id, .. } => *id,
            Stmt::Block { block, .. } => block.id,
        }
    }

    pub fn trivia(&self) -> &Trivia {
        match self {
            Stmt::Decl { trivia, .. }
            | Stmt::Expr { trivia, .. }
            | Stmt::If { trivia, .. }
            | Stmt::For { trivia, .. }
            | Stmt::While { trivia, .. }
            | Stmt::Return { trivia, .. }
            | Stmt::Block { trivia, .. }
            | Stmt::StreamIn { trivia, .. }
            | Stmt::StreamOut { trivia, .. }
            | Stmt::Precision { trivia, .. }
            | Stmt::SyncIo { trivia, .. } => trivia,
        }
    }

    pub fn trivia_mut(&mut self) -> &mut Trivia {
        match self {
            Stmt::Decl { trivia, .. }
            | Stmt::Expr { trivia, .. }
            | Stmt::If { trivia, .. }
            | Stmt::For { trivia, .. }
            | Stmt::While { trivia, .. }
            | Stmt::Return { trivia, .. }
            | Stmt::Block { trivia, .. }
            | Stmt::StreamIn { trivia, .. }
            | Stmt::StreamOut { trivia, .. }
            | Stmt::Precision { trivia, .. }
            | Stmt::SyncIo { trivia, .. } => trivia,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Lit {
    Int(i64),
    Float(f64),
    Str(Vec<u8>),
    Char(u8),
    Bool(bool),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOpKind {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    And,
    Or,
}

impl BinOpKind {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOpKind::Add => "+",
            BinOpKind::Sub => "-",
            BinOpKind::Mul => "*",
            BinOpKind::Div => "/",
            BinOpKind::Rem => "%",
            BinOpKind::Lt => "<",
            BinOpKind::Le => "<=",
            BinOpKind::Gt => ">",
            BinOpKind::Ge => ">=",
            BinOpKind::Eq => "==",
            BinOpKind::Ne => "!=",
            BinOpKind::And => "&&",
            BinOpKind::Or => "||",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnOpKind {
    Neg,
    Not,
    PreInc,
    PreDec,
    PostInc,
    PostDec,
    /// `&x`, valid only as a `scan` argument.
    AddrOf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AssignOp {
    Set,
    Add,
    Sub,
    Mul,
    Div,
    Rem,
}

impl AssignOp {
    pub fn symbol(self) -> &'static str {
        match self {
            AssignOp::Set => "=",
            AssignOp::Add => "+=",
            AssignOp::Sub => "-=",
            AssignOp::Mul => "*=",
            AssignOp::Div => "/=",
            AssignOp::Rem => "%=",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Literal { id: NodeId, lit: Lit },
    Var { id: NodeId, name: String, pos: Pos },
    Bin { id: NodeId, op: BinOpKind, lhs: Box<Expr>, rhs: Box<Expr> },
    Un { id: NodeId, op: UnOpKind, operand: Box<Expr> },
    Assign { id: NodeId, op: AssignOp, target: Box<Expr>, value: Box<Expr> },
    Call { id: NodeId, callee: String, args: Vec<Expr>, pos: Pos },
    Index { id: NodeId, base: Box<Expr>, index: Box<Expr> },
}

impl Expr {
    pub fn id(&self) -> NodeId {
        match self {
            Expr::Literal { id, .. }
            | Expr::Var { id, .. }
            | Expr::Bin { id, .. }
            | Expr::Un { id, .. }
            | Expr::Assign { id, .. }
            | Expr::Call { id, .. }
            | Expr::Index { id, .. } => *id,
        }
    }

    pub fn is_lvalue(&self) -> bool {
        match self {
            Expr::Var { .. } => true,
            Expr::Index { base, .. } => base.is_lvalue(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ast {
    pub id: NodeId,
    pub items: Vec<Item>,
    /// Comments at the very end of the file.
    pub end_comments: Vec<String>,
    /// First id not used by any node in this tree.
    pub next_id: NodeId,
}

impl Ast {
    pub fn id_gen(&self) -> IdGen {
        IdGen::new(self.next_id)
    }

    pub fn funcs(&self) -> impl Iterator<Item = &FuncDecl> {
        self.items.iter().filter_map(|i| match i {
            Item::Func(f) => Some(f),
            _ => None,
        })
    }

    pub fn find_func(&self, name: &str) -> Option<&FuncDecl> {
        self.funcs().find(|f| f.name == name)
    }
}

/// A parsed compilation unit plus its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceProgram {
    pub source_text: String,
    pub ast: Ast,
    pub author: Option<crate::AuthorLabel>,
    pub task: Option<crate::TaskId>,
}

// ---------------------------------------------------------------------------
// Generic tree walk
// ---------------------------------------------------------------------------

/// Visit event: node id, kind, depth (Program = 0) and parent.
pub struct Visit {
    pub id: NodeId,
    pub kind: NodeKind,
    pub depth: u32,
    pub parent: Option<(NodeId, NodeKind)>,
}

pub fn walk_ast(ast: &Ast, f: &mut impl FnMut(Visit)) {
    f(Visit { id: ast.id, kind: NodeKind::Program, depth: 0, parent: None });
    for item in &ast.items {
        walk_item(item, 1, (ast.id, NodeKind::Program), f);
    }
}

fn walk_type(t: &TypeNode, depth: u32, parent: (NodeId, NodeKind), f: &mut impl FnMut(Visit)) {
    f(Visit { id: t.id, kind: NodeKind::TypeRef, depth, parent: Some(parent) });
}

fn walk_item(item: &Item, depth: u32, parent: (NodeId, NodeKind), f: &mut impl FnMut(Visit)) {
    match item {
        Item::Include(i) => f(Visit { id: i.id, kind: NodeKind::Include, depth, parent: Some(parent) }),
        Item::Typedef(t) => {
            f(Visit { id: t.id, kind: NodeKind::Typedef, depth, parent: Some(parent) });
            walk_type(&t.ty, depth + 1, (t.id, NodeKind::Typedef), f);
        }
        Item::Global(g) => {
            f(Visit { id: g.id, kind: NodeKind::GlobalDecl, depth, parent: Some(parent) });
            walk_decl_parts(&g.decl, depth + 1, (g.id, NodeKind::GlobalDecl), f);
        }
        Item::Func(fd) => {
            f(Visit { id: fd.id, kind: NodeKind::FuncDecl, depth, parent: Some(parent) });
            walk_type(&fd.ret, depth + 1, (fd.id, NodeKind::FuncDecl), f);
            for p in &fd.params {
                f(Visit { id: p.id, kind: NodeKind::Param, depth: depth + 1, parent: Some((fd.id, NodeKind::FuncDecl)) });
                walk_type(&p.ty, depth + 2, (p.id, NodeKind::Param), f);
            }
            walk_block(&fd.body, depth + 1, (fd.id, NodeKind::FuncDecl), f);
        }
    }
}

fn walk_decl_parts(decl: &VarDecl, depth: u32, parent: (NodeId, NodeKind), f: &mut impl FnMut(Visit)) {
    walk_type(&decl.ty, depth, parent, f);
    if let Some(e) = &decl.ctor_arg {
        walk_expr(e, depth, parent, f);
    }
    if let Some(e) = &decl.init {
        walk_expr(e, depth, parent, f);
    }
}

fn walk_block(b: &Block, depth: u32, parent: (NodeId, NodeKind), f: &mut impl FnMut(Visit)) {
    f(Visit { id: b.id, kind: NodeKind::CompoundStmt, depth, parent: Some(parent) });
    for s in &b.stmts {
        walk_stmt(s, depth + 1, (b.id, NodeKind::CompoundStmt), f);
    }
}

pub fn walk_stmt(s: &Stmt, depth: u32, parent: (NodeId, NodeKind), f: &mut impl FnMut(Visit)) {
    match s {
        Stmt::Decl { id, decl, .. } => {
            f(Visit { id: *id, kind: NodeKind::DeclStmt, depth, parent: Some(parent) });
            walk_decl_parts(decl, depth + 1, (*id, NodeKind::DeclStmt), f);
        }
        Stmt::Expr { id, expr, .. } => {
            f(Visit { id: *id, kind: NodeKind::ExprStmt, depth, parent: Some(parent) });
            walk_expr(expr, depth + 1, (*id, NodeKind::ExprStmt), f);
        }
        Stmt::If { id, cond, then_branch, else_branch, .. } => {
            f(Visit { id: *id, kind: NodeKind::IfStmt, depth, parent: Some(parent) });
            walk_expr(cond, depth + 1, (*id, NodeKind::IfStmt), f);
            walk_stmt(then_branch, depth + 1, (*id, NodeKind::IfStmt), f);
            if let Some(e) = else_branch {
                walk_stmt(e, depth + 1, (*id, NodeKind::IfStmt), f);
            }
        }
        Stmt::For { id, init, cond, step, body, .. } => {
            f(Visit { id: *id, kind: NodeKind::ForStmt, depth, parent: Some(parent) });
            if let Some(i) = init {
                walk_stmt(i, depth + 1, (*id, NodeKind::ForStmt), f);
            }
            if let Some(c) = cond {
                walk_expr(c, depth + 1, (*id, NodeKind::ForStmt), f);
            }
            if let Some(st) = step {
                walk_expr(st, depth + 1, (*id, NodeKind::ForStmt), f);
            }
            walk_stmt(body, depth + 1, (*id, NodeKind::ForStmt), f);
        }
        Stmt::While { id, cond, body, .. } => {
            f(Visit { id: *id, kind: NodeKind::WhileStmt, depth, parent: Some(parent) });
            walk_expr(cond, depth + 1, (*id, NodeKind::WhileStmt), f);
            walk_stmt(body, depth + 1, (*id, NodeKind::WhileStmt), f);
        }
        Stmt::Return { id, value, .. } => {
            f(Visit { id: *id, kind: NodeKind::ReturnStmt, depth, parent: Some(parent) });
            if let Some(v) = value {
                walk_expr(v, depth + 1, (*id, NodeKind::ReturnStmt), f);
            }
        }
        Stmt::Block { block, .. } => walk_block(block, depth, parent, f),
        Stmt::StreamIn { id, targets, .. } => {
            f(Visit { id: *id, kind: NodeKind::StreamIn, depth, parent: Some(parent) });
            for t in targets {
                walk_expr(t, depth + 1, (*id, NodeKind::StreamIn), f);
            }
        }
        Stmt::StreamOut { id, items, .. } => {
            f(Visit { id: *id, kind: NodeKind::StreamOut, depth, parent: Some(parent) });
            for i in items {
                walk_expr(i, depth + 1, (*id, NodeKind::StreamOut), f);
            }
        }
        Stmt::Precision { id, kind, .. } => {
            f(Visit { id: *id, kind: NodeKind::PrecisionStmt, depth, parent: Some(parent) });
            if let PrecisionKind::SetPrec(e) = kind {
                walk_expr(e, depth + 1, (*id, NodeKind::PrecisionStmt), f);
            }
        }
        Stmt::SyncIo { id, .. } => {
            f(Visit { id: *id, kind: NodeKind::SyncIoStmt, depth, parent: Some(parent) });
        }
    }
}

pub fn walk_expr(e: &Expr, depth: u32, parent: (NodeId, NodeKind), f: &mut impl FnMut(Visit)) {
    match e {
        Expr::Literal { id, .. } => f(Visit { id: *id, kind: NodeKind::Literal, depth, parent: Some(parent) }),
        Expr::Var { id, .. } => f(Visit { id: *id, kind: NodeKind::VarRef, depth, parent: Some(parent) }),
        Expr::Bin { id, lhs, rhs, .. } => {
            f(Visit { id: *id, kind: NodeKind::BinOp, depth, parent: Some(parent) });
            walk_expr(lhs, depth + 1, (*id, NodeKind::BinOp), f);
            walk_expr(rhs, depth + 1, (*id, NodeKind::BinOp), f);
        }
        Expr::Un { id, operand, .. } => {
            f(Visit { id: *id, kind: NodeKind::UnaryOp, depth, parent: Some(parent) });
            walk_expr(operand, depth + 1, (*id, NodeKind::UnaryOp), f);
        }
        Expr::Assign { id, target, value, .. } => {
            f(Visit { id: *id, kind: NodeKind::Assign, depth, parent: Some(parent) });
            walk_expr(target, depth + 1, (*id, NodeKind::Assign), f);
            walk_expr(value, depth + 1, (*id, NodeKind::Assign), f);
        }
        Expr::Call { id, args, .. } => {
            f(Visit { id: *id, kind: NodeKind::Call, depth, parent: Some(parent) });
            for a in args {
                walk_expr(a, depth + 1, (*id, NodeKind::Call), f);
            }
        }
        Expr::Index { id, base, index, .. } => {
            f(Visit { id: *id, kind: NodeKind::Index, depth, parent: Some(parent) });
            walk_expr(base, depth + 1, (*id, NodeKind::Index), f);
            walk_expr(index, depth + 1, (*id, NodeKind::Index), f);
        }
    }
}

/// Structural equality: same shapes, names, values and trivia, ignoring
/// node ids and source positions.
pub fn structurally_equal(a: &Ast, b: &Ast) -> bool {
    fn norm(ast: &Ast) -> Ast {
        let mut c = ast.clone();
        c.next_id = 0;
        c.id = 0;
        let mut gen = IdGen::new(1);
        for item in &mut c.items {
            norm_item(item, &mut gen);
        }
        c
    }
    fn norm_type(t: &mut TypeNode, gen: &mut IdGen) {
        t.id = gen.fresh();
    }
    fn norm_decl(d: &mut VarDecl, gen: &mut IdGen) {
        norm_type(&mut d.ty, gen);
        if let Some(e) = &mut d.ctor_arg {
            norm_expr(e, gen);
        }
        if let Some(e) = &mut d.init {
            norm_expr(e, gen);
        }
    }
    fn norm_item(item: &mut Item, gen: &mut IdGen) {
        match item {
            Item::Include(i) => i.id = gen.fresh(),
            Item::Typedef(t) => {
                t.id = gen.fresh();
                norm_type(&mut t.ty, gen);
            }
            Item::Global(g) => {
                g.id = gen.fresh();
                norm_decl(&mut g.decl, gen);
            }
            Item::Func(f) => {
                f.id = gen.fresh();
                norm_type(&mut f.ret, gen);
                for p in &mut f.params {
                    p.id = gen.fresh();
                    norm_type(&mut p.ty, gen);
                }
                norm_block(&mut f.body, gen);
            }
        }
    }
    fn norm_block(b: &mut Block, gen: &mut IdGen) {
        b.id = gen.fresh();
        for s in &mut b.stmts {
            norm_stmt(s, gen);
        }
    }
    fn norm_stmt(s: &mut Stmt, gen: &mut IdGen) {
        match s {
            Stmt::Decl { id, decl, .. } => {
                *id = gen.fresh();
                norm_decl(decl, gen);
            }
            Stmt::Expr { id, expr, .. } => {
                *id = gen.fresh();
                norm_expr(expr, gen);
            }
            Stmt::If { id, cond, then_branch, else_branch, .. } => {
                *id = gen.fresh();
                norm_expr(cond, gen);
                norm_stmt(then_branch, gen);
                if let Some(e) = else_branch {
                    norm_stmt(e, gen);
                }
            }
            Stmt::For { id, init, cond, step, body, .. } => {
                *id = gen.fresh();
                if let Some(i) = init {
                    norm_stmt(i, gen);
                }
                if let Some(c) = cond {
                    norm_expr(c, gen);
                }
                if let Some(st) = step {
                    norm_expr(st, gen);
                }
                norm_stmt(body, gen);
            }
            Stmt::While { id, cond, body, .. } => {
                *id = gen.fresh();
                norm_expr(cond, gen);
                norm_stmt(body, gen);
            }
            Stmt::Return { id, value, .. } => {
                *id = gen.fresh();
                if let Some(v) = value {
                    norm_expr(v, gen);
                }
            }
            Stmt::Block { block, .. } => norm_block(block, gen),
            Stmt::StreamIn { id, targets, .. } => {
                *id = gen.fresh();
                for t in targets {
                    norm_expr(t, gen);
                }
            }
            Stmt::StreamOut { id, items, .. } => {
                *id = gen.fresh();
                for i in items {
                    norm_expr(i, gen);
                }
            }
            Stmt::Precision { id, kind, .. } => {
                *id = gen.fresh();
                if let PrecisionKind::SetPrec(e) = kind {
                    norm_expr(e, gen);
                }
            }
            Stmt::SyncIo { id, .. } => *id = gen.fresh(),
        }
    }
    fn norm_expr(e: &mut Expr, gen: &mut IdGen) {
        match e {
            Expr::Literal { id, .. } => *id = gen.fresh(),
            Expr::Var { id, pos, .. } => {
                *id = gen.fresh();
                *pos = Pos::default();
            }
            Expr::Bin { id, lhs, rhs, .. } => {
                *id = gen.fresh();
                norm_expr(lhs, gen);
                norm_expr(rhs, gen);
            }
            Expr::Un { id, operand, .. } => {
                *id = gen.fresh();
                norm_expr(operand, gen);
            }
            Expr::Assign { id, target, value, .. } => {
                *id = gen.fresh();
                norm_expr(target, gen);
                norm_expr(value, gen);
            }
            Expr::Call { id, args, pos, .. } => {
                *id = gen.fresh();
                *pos = Pos::default();
                for a in args {
                    norm_expr(a, gen);
                }
            }
            Expr::Index { id, base, index, .. } => {
                *id = gen.fresh();
                norm_expr(base, gen);
                norm_expr(index, gen);
            }
        }
    }
    norm(a) == norm(b)
}
