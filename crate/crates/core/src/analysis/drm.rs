//! Declaration-reference mapping: links every declaration to all uses
//! of the declared name under lexical scoping, and doubles as the name
//! resolver run at parse time.
//!
//! Variable references map to exactly one declaration (DeclStmt,
//! GlobalDecl or Param node). Function names live in the same namespace
//! but are tracked in a separate call map, since calls are not VarRef
//! nodes.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::lang::ast::*;
use crate::lang::parse::is_builtin;

#[derive(Debug, Clone, PartialEq)]
pub struct ResolveError {
    pub name: String,
    pub pos: Pos,
    pub message: String,
}

/// Fully resolved type of a declared variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarShape {
    Scalar(ScalarTy),
    Array(ScalarTy, i64),
    Vector(ScalarTy),
}

impl VarShape {
    pub fn scalar(self) -> ScalarTy {
        match self {
            VarShape::Scalar(s) | VarShape::Array(s, _) | VarShape::Vector(s) => s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeclKind {
    Global,
    Local,
    Param,
}

#[derive(Debug, Clone)]
pub struct DeclInfo {
    pub name: String,
    pub shape: VarShape,
    pub kind: DeclKind,
    pub by_ref: bool,
    pub has_init: bool,
    /// Function the declaration belongs to, if local/param.
    pub func: Option<NodeId>,
}

/// The declaration-reference map plus everything else the resolve pass
/// learns about a program.
#[derive(Debug, Clone, Default)]
pub struct DeclRefMap {
    /// Declaration node -> all VarRef nodes that resolve to it.
    pub refs: BTreeMap<NodeId, BTreeSet<NodeId>>,
    /// VarRef node -> its unique declaration.
    pub decl_of: BTreeMap<NodeId, NodeId>,
    /// Function node -> all Call nodes that target it.
    pub calls_of: BTreeMap<NodeId, BTreeSet<NodeId>>,
    /// Call node -> target function node (user functions only).
    pub target_of: BTreeMap<NodeId, NodeId>,
    pub decls: BTreeMap<NodeId, DeclInfo>,
    /// Typedef alias -> resolved concrete kind.
    pub typedefs: BTreeMap<String, TyKind>,
    /// Function name -> FuncDecl node.
    pub func_ids: BTreeMap<String, NodeId>,
}

impl DeclRefMap {
    pub fn refs_of(&self, decl: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.refs.get(&decl).into_iter().flatten().copied()
    }

    pub fn shape_of_ref(&self, var_ref: NodeId) -> Option<VarShape> {
        let decl = self.decl_of.get(&var_ref)?;
        self.decls.get(decl).map(|d| d.shape)
    }

    /// Resolve a written type down to a concrete scalar/vec kind.
    pub fn concrete(&self, kind: &TyKind) -> TyKind {
        match kind {
            TyKind::Named(n) => match self.typedefs.get(n) {
                Some(k) => self.concrete(k),
                None => kind.clone(),
            },
            TyKind::Vec(e) => TyKind::Vec(alloc::boxed::Box::new(self.concrete(e))),
            s => s.clone(),
        }
    }
}

/// Build the DRM for a program. Parse guarantees this succeeds for any
/// program it returns; transformed programs are re-checked through the
/// same path.
pub fn build_decl_ref_map(program: &SourceProgram) -> Result<DeclRefMap, ResolveError> {
    resolve(&program.ast)
}

struct Scope {
    names: BTreeMap<String, NodeId>,
}

struct Resolver<'a> {
    drm: DeclRefMap,
    scopes: Vec<Scope>,
    ast: &'a Ast,
}

pub fn resolve(ast: &Ast) -> Result<DeclRefMap, ResolveError> {
    let mut r = Resolver { drm: DeclRefMap::default(), scopes: Vec::new(), ast };
    r.run()?;
    Ok(r.drm)
}

fn err(name: &str, pos: Pos, message: impl Into<String>) -> ResolveError {
    ResolveError { name: name.to_string(), pos, message: message.into() }
}

impl<'a> Resolver<'a> {
    fn run(&mut self) -> Result<(), ResolveError> {
        // Typedefs and function names first; calls may target functions
        // defined later in the file.
        for item in &self.ast.items {
            match item {
                Item::Typedef(t) => {
                    let concrete = self.drm.concrete(&t.ty.kind);
                    if self.drm.typedefs.contains_key(&t.alias) {
                        return Err(err(&t.alias, Pos::default(), "duplicate typedef"));
                    }
                    self.drm.typedefs.insert(t.alias.clone(), concrete);
                }
                Item::Func(f) => {
                    if is_builtin(&f.name) {
                        return Err(err(&f.name, Pos::default(), "function name shadows a builtin"));
                    }
                    if self.drm.func_ids.insert(f.name.clone(), f.id).is_some() {
                        return Err(err(&f.name, Pos::default(), "duplicate function"));
                    }
                    self.drm.calls_of.insert(f.id, BTreeSet::new());
                }
                _ => {}
            }
        }
        self.scopes.push(Scope { names: BTreeMap::new() });
        for item in &self.ast.items {
            match item {
                Item::Global(g) => {
                    // Initializer sees earlier globals only.
                    if let Some(c) = &g.decl.ctor_arg {
                        self.resolve_expr(c)?;
                    }
                    if let Some(i) = &g.decl.init {
                        self.resolve_expr(i)?;
                    }
                    self.declare(g.id, &g.decl, DeclKind::Global, None)?;
                }
                Item::Func(f) => {
                    self.scopes.push(Scope { names: BTreeMap::new() });
                    for p in &f.params {
                        let shape = self.shape_of(&p.ty.kind, None, p.ty.id)?;
                        if matches!(shape, VarShape::Scalar(ScalarTy::Void)) {
                            return Err(err(&p.name, Pos::default(), "void parameter"));
                        }
                        self.declare_raw(
                            p.id,
                            &p.name,
                            shape,
                            DeclKind::Param,
                            p.by_ref,
                            true,
                            Some(f.id),
                        )?;
                    }
                    self.resolve_block(&f.body, f.id)?;
                    self.scopes.pop();
                }
                _ => {}
            }
        }
        self.scopes.pop();
        Ok(())
    }

    fn shape_of(
        &self,
        kind: &TyKind,
        array_len: Option<i64>,
        _ty_node: NodeId,
    ) -> Result<VarShape, ResolveError> {
        let concrete = self.drm.concrete(kind);
        match (concrete, array_len) {
            (TyKind::Scalar(s), None) => Ok(VarShape::Scalar(s)),
            (TyKind::Scalar(s), Some(n)) => {
                if !(s.is_integral() || s.is_float()) || s == ScalarTy::Void {
                    return Err(err("", Pos::default(), "array element must be numeric or char"));
                }
                if !(1..=1_000_000).contains(&n) {
                    return Err(err("", Pos::default(), "array length out of range"));
                }
                Ok(VarShape::Array(s, n))
            }
            (TyKind::Vec(e), None) => match *e {
                TyKind::Scalar(s) if s != ScalarTy::Void => Ok(VarShape::Vector(s)),
                _ => Err(err("", Pos::default(), "invalid vec element type")),
            },
            (TyKind::Vec(_), Some(_)) => {
                Err(err("", Pos::default(), "array of vec is not supported"))
            }
            (TyKind::Named(n), _) => Err(err(&n, Pos::default(), "unknown type name")),
        }
    }

    fn declare(
        &mut self,
        node: NodeId,
        decl: &VarDecl,
        kind: DeclKind,
        func: Option<NodeId>,
    ) -> Result<(), ResolveError> {
        let shape = self.shape_of(&decl.ty.kind, decl.array_len, decl.ty.id)?;
        if matches!(shape, VarShape::Scalar(ScalarTy::Void)) {
            return Err(err(&decl.name, Pos::default(), "void variable"));
        }
        if decl.ctor_arg.is_some() && !matches!(shape, VarShape::Vector(_)) {
            return Err(err(&decl.name, Pos::default(), "constructor argument on non-vec"));
        }
        self.declare_raw(node, &decl.name, shape, kind, false, decl.init.is_some(), func)
    }

    fn declare_raw(
        &mut self,
        node: NodeId,
        name: &str,
        shape: VarShape,
        kind: DeclKind,
        by_ref: bool,
        has_init: bool,
        func: Option<NodeId>,
    ) -> Result<(), ResolveError> {
        if is_builtin(name) {
            return Err(err(name, Pos::default(), "name shadows a builtin"));
        }
        if kind == DeclKind::Global && self.drm.func_ids.contains_key(name) {
            return Err(err(name, Pos::default(), "global collides with a function"));
        }
        let scope = self.scopes.last_mut().expect("scope stack");
        if scope.names.insert(name.to_string(), node).is_some() {
            return Err(err(name, Pos::default(), "redeclaration in the same scope"));
        }
        self.drm.refs.insert(node, BTreeSet::new());
        self.drm.decls.insert(
            node,
            DeclInfo { name: name.to_string(), shape, kind, by_ref, has_init, func },
        );
        Ok(())
    }

    fn lookup(&self, name: &str) -> Option<NodeId> {
        for scope in self.scopes.iter().rev() {
            if let Some(id) = scope.names.get(name) {
                return Some(*id);
            }
        }
        None
    }

    fn resolve_block(&mut self, block: &Block, func: NodeId) -> Result<(), ResolveError> {
        self.scopes.push(Scope { names: BTreeMap::new() });
        for s in &block.stmts {
            self.resolve_stmt(s, func)?;
        }
        self.scopes.pop();
        Ok(())
    }

    fn resolve_stmt(&mut self, s: &Stmt, func: NodeId) -> Result<(), ResolveError> {
        match s {
            Stmt::Decl { id, decl, .. } => {
                if let Some(c) = &decl.ctor_arg {
                    self.resolve_expr(c)?;
                }
                if let Some(i) = &decl.init {
                    self.resolve_expr(i)?;
                }
                self.declare(*id, decl, DeclKind::Local, Some(func))
            }
            Stmt::Expr { expr, .. } => self.resolve_expr(expr),
            Stmt::If { cond, then_branch, else_branch, .. } => {
                self.resolve_expr(cond)?;
                self.resolve_stmt(then_branch, func)?;
                if let Some(e) = else_branch {
                    self.resolve_stmt(e, func)?;
                }
                Ok(())
            }
            Stmt::For { init, cond, step, body, .. } => {
                self.scopes.push(Scope { names: BTreeMap::new() });
                if let Some(i) = init {
                    self.resolve_stmt(i, func)?;
                }
                if let Some(c) = cond {
                    self.resolve_expr(c)?;
                }
                if let Some(st) = step {
                    self.resolve_expr(st)?;
                }
                self.resolve_stmt(body, func)?;
                self.scopes.pop();
                Ok(())
            }
            Stmt::While { cond, body, .. } => {
                self.resolve_expr(cond)?;
                self.resolve_stmt(body, func)
            }
            Stmt::Return { value, .. } => {
                if let Some(v) = value {
                    self.resolve_expr(v)?;
                }
                Ok(())
            }
            Stmt::Block { block, .. } => self.resolve_block(block, func),
            Stmt::StreamIn { targets, .. } => {
                for t in targets {
                    self.resolve_expr(t)?;
                }
                Ok(())
            }
            Stmt::StreamOut { items, .. } => {
                for i in items {
                    self.resolve_expr(i)?;
                }
                Ok(())
            }
            Stmt::Precision { kind, .. } => {
                if let PrecisionKind::SetPrec(e) = kind {
                    self.resolve_expr(e)?;
                }
                Ok(())
            }
            Stmt::SyncIo { .. } => Ok(()),
        }
    }

    fn resolve_expr(&mut self, e: &Expr) -> Result<(), ResolveError> {
        match e {
            Expr::Literal { .. } => Ok(()),
            Expr::Var { id, name, pos } => {
                let Some(decl) = self.lookup(name) else {
                    if self.drm.func_ids.contains_key(name) {
                        return Err(err(name, *pos, "function used as a value"));
                    }
                    return Err(err(name, *pos, "use of undeclared name"));
                };
                self.drm.decl_of.insert(*id, decl);
                self.drm.refs.entry(decl).or_default().insert(*id);
                Ok(())
            }
            Expr::Bin { lhs, rhs, .. } => {
                self.resolve_expr(lhs)?;
                self.resolve_expr(rhs)
            }
            Expr::Un { op, operand, .. } => {
                if *op == UnOpKind::AddrOf {
                    return Err(err("&", Pos::default(), "`&` is only valid in scan arguments"));
                }
                self.resolve_expr(operand)
            }
            Expr::Assign { target, value, .. } => {
                self.resolve_expr(target)?;
                self.resolve_expr(value)
            }
            Expr::Call { id, callee, args, pos } => {
                if is_builtin(callee) {
                    return self.resolve_builtin_call(callee, args, *pos);
                }
                let Some(&fid) = self.drm.func_ids.get(callee) else {
                    return Err(err(callee, *pos, "call to undefined function"));
                };
                let func = self
                    .ast
                    .funcs()
                    .find(|f| f.id == fid)
                    .expect("function id registered");
                if func.params.len() != args.len() {
                    return Err(err(callee, *pos, "wrong number of arguments"));
                }
                for (p, a) in func.params.iter().zip(args) {
                    if p.by_ref && !a.is_lvalue() {
                        return Err(err(callee, *pos, "reference argument must be assignable"));
                    }
                    self.resolve_expr(a)?;
                }
                self.drm.target_of.insert(*id, fid);
                self.drm.calls_of.entry(fid).or_default().insert(*id);
                Ok(())
            }
            Expr::Index { base, index, .. } => {
                self.resolve_expr(base)?;
                self.resolve_expr(index)
            }
        }
    }

    fn resolve_builtin_call(
        &mut self,
        callee: &str,
        args: &[Expr],
        pos: Pos,
    ) -> Result<(), ResolveError> {
        let arity_ok = match callee {
            "scan" | "print" => !args.is_empty(),
            "fopenin" | "fopenout" | "len" | "strlen" | "abs" | "sqrt" => args.len() == 1,
            "strcpy" | "strcmp" | "push" | "min" | "max" | "swap" => args.len() == 2,
            _ => false,
        };
        if !arity_ok {
            return Err(err(callee, pos, "wrong number of arguments"));
        }
        match callee {
            "scan" | "print" => {
                if !matches!(&args[0], Expr::Literal { lit: Lit::Str(_), .. }) {
                    return Err(err(callee, pos, "format must be a string literal"));
                }
                for a in &args[1..] {
                    match a {
                        Expr::Un { op: UnOpKind::AddrOf, operand, .. } if callee == "scan" => {
                            if !operand.is_lvalue() {
                                return Err(err(callee, pos, "scan target must be assignable"));
                            }
                            self.resolve_expr(operand)?;
                        }
                        other => self.resolve_expr(other)?,
                    }
                }
                Ok(())
            }
            "swap" => {
                for a in args {
                    if !a.is_lvalue() {
                        return Err(err(callee, pos, "swap arguments must be assignable"));
                    }
                    self.resolve_expr(a)?;
                }
                Ok(())
            }
            "strcpy" | "push" => {
                if !args[0].is_lvalue() {
                    return Err(err(callee, pos, &format!("first {callee} argument must be assignable")[..]));
                }
                for a in args {
                    self.resolve_expr(a)?;
                }
                Ok(())
            }
            _ => {
                for a in args {
                    self.resolve_expr(a)?;
                }
                Ok(())
            }
        }
    }
}
