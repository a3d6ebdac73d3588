//! Use-define chains on top of the CFG, computed with a standard
//! reaching-definitions worklist fixpoint. A use with several reaching
//! definitions gets one link per definition.
//!
//! Definition sites: declarations with initializers, parameters,
//! globals (which are zero-initialized and therefore defined at every
//! function entry), assignments, increments/decrements, `scan` /
//! `input` targets and the writing builtins (`strcpy`, `swap`, `push`).
//! Writes through an index are weak definitions: they generate but do
//! not kill.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::cfg::{BlockId, Cfg};
use super::drm::{DeclKind, DeclRefMap};
use crate::lang::ast::*;

#[derive(Debug, Clone, PartialEq)]
pub enum UdcError {
    Unresolved(String),
    /// A variable use no definition can reach, where the declaration
    /// has no initializer either.
    UndefinedVariable { use_node: NodeId, name: String },
}

impl fmt::Display for UdcError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UdcError::Unresolved(n) => write!(f, "unresolved name {n}"),
            UdcError::UndefinedVariable { name, .. } => {
                write!(f, "variable {name} may be used before any definition")
            }
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct UseDefChains {
    /// (use VarRef node, defining node) links.
    pub links: BTreeSet<(NodeId, NodeId)>,
    /// Declarations that receive a definition anywhere inside the given
    /// statement subtree are recorded by the event collector; kept here
    /// for transformer queries.
    defs_by_decl: BTreeMap<NodeId, BTreeSet<NodeId>>,
}

impl UseDefChains {
    pub fn defs_reaching(&self, use_node: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.links.iter().filter(move |(u, _)| *u == use_node).map(|(_, d)| *d)
    }

    pub fn def_sites_of(&self, decl: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.defs_by_decl.get(&decl).into_iter().flatten().copied()
    }
}

#[derive(Debug, Clone, Copy)]
struct DefEvent {
    node: NodeId,
    decl: NodeId,
    strong: bool,
}

#[derive(Debug, Clone, Copy)]
struct UseEvent {
    var_ref: NodeId,
    decl: NodeId,
}

#[derive(Default)]
struct Events {
    defs: Vec<DefEvent>,
    uses: Vec<UseEvent>,
}

struct Collector<'a> {
    drm: &'a DeclRefMap,
    ast: &'a Ast,
    /// Events keyed by the CFG atom (statement / condition / step node).
    by_atom: BTreeMap<NodeId, Events>,
}

impl<'a> Collector<'a> {
    fn events(&mut self, atom: NodeId) -> &mut Events {
        self.by_atom.entry(atom).or_default()
    }

    fn decl_of_var(&self, e: &Expr) -> Option<NodeId> {
        match e {
            Expr::Var { id, .. } => self.drm.decl_of.get(id).copied(),
            _ => None,
        }
    }

    /// Record every VarRef in the subtree as a use.
    fn uses_in(&mut self, atom: NodeId, e: &Expr) {
        let mut stack = alloc::vec![e];
        while let Some(cur) = stack.pop() {
            match cur {
                Expr::Var { id, .. } => {
                    if let Some(&decl) = self.drm.decl_of.get(id) {
                        self.events(atom).uses.push(UseEvent { var_ref: *id, decl });
                    }
                }
                Expr::Bin { lhs, rhs, .. } => {
                    stack.push(lhs);
                    stack.push(rhs);
                }
                Expr::Un { operand, .. } => stack.push(operand),
                Expr::Assign { target, value, .. } => {
                    stack.push(target);
                    stack.push(value);
                }
                Expr::Call { args, .. } => stack.extend(args.iter()),
                Expr::Index { base, index, .. } => {
                    stack.push(base);
                    stack.push(index);
                }
                Expr::Literal { .. } => {}
            }
        }
    }

    /// A write to an lvalue: a strong def for plain variables, a weak
    /// def (plus uses of the index) for element writes.
    fn write_target(&mut self, atom: NodeId, def_node: NodeId, target: &Expr, also_use: bool) {
        match target {
            Expr::Var { id, .. } => {
                if let Some(&decl) = self.drm.decl_of.get(id) {
                    self.events(atom).defs.push(DefEvent { node: def_node, decl, strong: true });
                    if also_use {
                        self.events(atom).uses.push(UseEvent { var_ref: *id, decl });
                    }
                }
            }
            Expr::Index { base, index, .. } => {
                self.uses_in(atom, index);
                if let Some(decl) = self.decl_of_var(base) {
                    self.events(atom).defs.push(DefEvent { node: def_node, decl, strong: false });
                    if let Expr::Var { id, .. } = &**base {
                        self.events(atom).uses.push(UseEvent { var_ref: *id, decl });
                    }
                } else {
                    self.uses_in(atom, base);
                }
            }
            other => self.uses_in(atom, other),
        }
    }

    /// Collect events of one expression tree under the given atom.
    fn expr(&mut self, atom: NodeId, e: &Expr) {
        match e {
            Expr::Assign { id, op, target, value, .. } => {
                self.expr(atom, value);
                self.write_target(atom, *id, target, *op != AssignOp::Set);
            }
            Expr::Un { id, op, operand, .. } => match op {
                UnOpKind::PreInc | UnOpKind::PreDec | UnOpKind::PostInc | UnOpKind::PostDec => {
                    self.write_target(atom, *id, operand, true);
                }
                _ => self.expr(atom, operand),
            },
            Expr::Call { id, callee, args, .. } => match callee.as_str() {
                "scan" => {
                    for a in &args[1..] {
                        let target = match a {
                            Expr::Un { op: UnOpKind::AddrOf, operand, .. } => operand,
                            other => other,
                        };
                        self.write_target(atom, *id, target, false);
                    }
                }
                "strcpy" => {
                    self.write_target(atom, *id, &args[0], false);
                    self.expr(atom, &args[1]);
                }
                "swap" => {
                    self.write_target(atom, *id, &args[0], true);
                    self.write_target(atom, *id, &args[1], true);
                }
                "push" => {
                    // Appending keeps prior contents: weak def + use.
                    if let Some(decl) = self.decl_of_var(&args[0]) {
                        self.events(atom).defs.push(DefEvent { node: *id, decl, strong: false });
                        if let Expr::Var { id: vid, .. } = &args[0] {
                            self.events(atom).uses.push(UseEvent { var_ref: *vid, decl });
                        }
                    }
                    self.expr(atom, &args[1]);
                }
                _ => {
                    // Reference arguments of user functions are written
                    // by the callee: weak def + use.
                    let by_ref: Vec<bool> = self
                        .drm
                        .target_of
                        .get(id)
                        .and_then(|fid| self.ast.funcs().find(|f| f.id == *fid))
                        .map(|f| f.params.iter().map(|p| p.by_ref).collect())
                        .unwrap_or_default();
                    for (i, a) in args.iter().enumerate() {
                        if by_ref.get(i).copied().unwrap_or(false) {
                            self.write_target(atom, *id, a, true);
                        } else {
                            self.expr(atom, a);
                        }
                    }
                }
            },
            other => self.uses_in(atom, other),
        }
    }

    fn stmt(&mut self, s: &Stmt) {
        match s {
            Stmt::Decl { id, decl, .. } => {
                if let Some(c) = &decl.ctor_arg {
                    self.uses_in(*id, c);
                }
                if let Some(init) = &decl.init {
                    self.expr(*id, init);
                    self.events(*id).defs.push(DefEvent { node: *id, decl: *id, strong: true });
                }
            }
            Stmt::Expr { id, expr, .. } => self.expr(*id, expr),
            Stmt::If { cond, then_branch, else_branch, .. } => {
                self.expr(cond.id(), cond);
                self.stmt(then_branch);
                if let Some(e) = else_branch {
                    self.stmt(e);
                }
            }
            Stmt::For { init, cond, step, body, .. } => {
                if let Some(i) = init {
                    self.stmt(i);
                }
                if let Some(c) = cond {
                    self.expr(c.id(), c);
                }
                if let Some(st) = step {
                    self.expr(st.id(), st);
                }
                self.stmt(body);
            }
            Stmt::While { cond, body, .. } => {
                self.expr(cond.id(), cond);
                self.stmt(body);
            }
            Stmt::Return { id, value, .. } => {
                if let Some(v) = value {
                    self.expr(*id, v);
                }
            }
            Stmt::Block { block, .. } => {
                for s in &block.stmts {
                    self.stmt(s);
                }
            }
            Stmt::StreamIn { id, targets, .. } => {
                for t in targets {
                    self.write_target(*id, *id, t, false);
                }
            }
            Stmt::StreamOut { id, items, .. } => {
                for i in items {
                    self.expr(*id, i);
                }
            }
            Stmt::Precision { id, kind, .. } => {
                if let PrecisionKind::SetPrec(e) = kind {
                    self.expr(*id, e);
                }
            }
            Stmt::SyncIo { .. } => {}
        }
    }
}

/// Compute use-define chains for every function of the program.
pub fn compute_use_def_chains(
    program: &SourceProgram,
    cfg: &Cfg,
) -> Result<UseDefChains, UdcError> {
    let drm = super::drm::build_decl_ref_map(program)
        .map_err(|e| UdcError::Unresolved(e.name))?;
    let mut collector = Collector { drm: &drm, ast: &program.ast, by_atom: BTreeMap::new() };
    for f in program.ast.funcs() {
        for s in &f.body.stmts {
            collector.stmt(s);
        }
    }
    let by_atom = collector.by_atom;

    let mut chains = UseDefChains::default();

    for fun in &cfg.funcs {
        let func_decl = program.ast.funcs().find(|f| f.id == fun.func).expect("func");
        // Def site list for this function: entry defs first.
        let mut defs: Vec<DefEvent> = Vec::new();
        for p in &func_decl.params {
            defs.push(DefEvent { node: p.id, decl: p.id, strong: true });
        }
        for (decl_id, info) in &drm.decls {
            if info.kind == DeclKind::Global {
                defs.push(DefEvent { node: *decl_id, decl: *decl_id, strong: true });
            }
        }
        let entry_defs = defs.len();
        let mut member = alloc::vec![false; cfg.blocks.len()];
        for m in member.iter_mut().take(fun.blocks.1).skip(fun.blocks.0) {
            *m = true;
        }

        let mut block_defs: BTreeMap<BlockId, Vec<usize>> = BTreeMap::new();
        for (bid, block) in cfg.blocks.iter().enumerate() {
            if !member[bid] {
                continue;
            }
            for atom in &block.stmts {
                if let Some(ev) = by_atom.get(atom) {
                    for d in &ev.defs {
                        defs.push(*d);
                        block_defs.entry(bid).or_default().push(defs.len() - 1);
                    }
                }
            }
        }
        for d in &defs {
            chains.defs_by_decl.entry(d.decl).or_default().insert(d.node);
        }

        let nd = defs.len();
        let words = nd.div_ceil(64);
        let mut gen: BTreeMap<BlockId, Vec<u64>> = BTreeMap::new();
        let mut kill: BTreeMap<BlockId, Vec<u64>> = BTreeMap::new();
        let set = |bits: &mut Vec<u64>, i: usize| bits[i / 64] |= 1 << (i % 64);
        for (bid, dlist) in &block_defs {
            let mut g = alloc::vec![0u64; words];
            let mut k = alloc::vec![0u64; words];
            for &di in dlist {
                set(&mut g, di);
                if defs[di].strong {
                    for (j, other) in defs.iter().enumerate() {
                        if j != di && other.decl == defs[di].decl {
                            set(&mut k, j);
                        }
                    }
                }
            }
            gen.insert(*bid, g);
            kill.insert(*bid, k);
        }
        let mut entry_bits = alloc::vec![0u64; words];
        for i in 0..entry_defs {
            set(&mut entry_bits, i);
        }

        let mut ins: BTreeMap<BlockId, Vec<u64>> = BTreeMap::new();
        let mut outs: BTreeMap<BlockId, Vec<u64>> = BTreeMap::new();
        for (bid, m) in member.iter().enumerate() {
            if *m {
                ins.insert(bid, alloc::vec![0u64; words]);
                outs.insert(bid, alloc::vec![0u64; words]);
            }
        }
        outs.insert(fun.entry, entry_bits);

        let mut changed = true;
        while changed {
            changed = false;
            for (bid, m) in member.iter().enumerate() {
                if !*m || bid == fun.entry {
                    continue;
                }
                let mut inb = alloc::vec![0u64; words];
                for e in cfg.preds(bid) {
                    if let Some(po) = outs.get(&e.from) {
                        for (w, v) in inb.iter_mut().zip(po) {
                            *w |= v;
                        }
                    }
                }
                let mut outb = inb.clone();
                if let Some(k) = kill.get(&bid) {
                    for (w, v) in outb.iter_mut().zip(k) {
                        *w &= !v;
                    }
                }
                if let Some(g) = gen.get(&bid) {
                    for (w, v) in outb.iter_mut().zip(g) {
                        *w |= v;
                    }
                }
                if ins.get(&bid) != Some(&inb) || outs.get(&bid) != Some(&outb) {
                    ins.insert(bid, inb);
                    outs.insert(bid, outb);
                    changed = true;
                }
            }
        }

        // Link uses to the reaching defs of the same declaration.
        for (bid, block) in cfg.blocks.iter().enumerate() {
            if !member[bid] {
                continue;
            }
            let inb = match ins.get(&bid) {
                Some(v) => v.clone(),
                None => continue,
            };
            let inb = if bid == fun.entry {
                outs.get(&bid).cloned().unwrap_or(inb)
            } else {
                inb
            };
            for atom in &block.stmts {
                let Some(ev) = by_atom.get(atom) else { continue };
                for u in &ev.uses {
                    let mut found = false;
                    for (di, d) in defs.iter().enumerate() {
                        if d.decl == u.decl && inb[di / 64] & (1 << (di % 64)) != 0 {
                            chains.links.insert((u.var_ref, d.node));
                            found = true;
                        }
                    }
                    if !found {
                        let info = drm.decls.get(&u.decl);
                        let has_init = info.map(|i| i.has_init).unwrap_or(true);
                        if !has_init {
                            let name = info.map(|i| i.name.clone()).unwrap_or_default();
                            return Err(UdcError::UndefinedVariable { use_node: u.var_ref, name });
                        }
                        // Initialized declaration: link to the decl itself.
                        chains.links.insert((u.var_ref, u.decl));
                    }
                }
            }
        }
    }
    Ok(chains)
}
