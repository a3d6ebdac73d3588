//! Control-flow graph construction.
//!
//! Following the statement-level view used for the style analyses, each
//! block holds a single atomic statement (or a loop/branch condition
//! expression, or a for-step expression); `if`, `for` and `while` lower
//! to branch and loop-back edges. Every function gets its own entry
//! block (holding its parameter nodes, which act as definitions) and an
//! empty exit block; the graph-level entry/exit are `main`'s when
//! present.

use alloc::string::String;
use alloc::vec::Vec;

use crate::lang::ast::*;

pub type BlockId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    Fallthrough,
    TrueBranch,
    FalseBranch,
    LoopBack,
}

#[derive(Debug, Clone)]
pub struct CfgBlock {
    pub id: BlockId,
    pub stmts: Vec<NodeId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CfgEdge {
    pub from: BlockId,
    pub to: BlockId,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone)]
pub struct FnCfg {
    pub name: String,
    pub func: NodeId,
    pub entry: BlockId,
    pub exit: BlockId,
    /// Half-open range of block ids belonging to this function.
    pub blocks: (BlockId, BlockId),
}

#[derive(Debug, Clone)]
pub struct Cfg {
    pub blocks: Vec<CfgBlock>,
    pub edges: Vec<CfgEdge>,
    pub entry: BlockId,
    pub exit: BlockId,
    pub funcs: Vec<FnCfg>,
}

impl Cfg {
    pub fn succs(&self, b: BlockId) -> impl Iterator<Item = &CfgEdge> {
        self.edges.iter().filter(move |e| e.from == b)
    }

    pub fn preds(&self, b: BlockId) -> impl Iterator<Item = &CfgEdge> {
        self.edges.iter().filter(move |e| e.to == b)
    }

    /// Block containing the given statement/condition node, if any.
    pub fn block_of(&self, node: NodeId) -> Option<BlockId> {
        self.blocks.iter().find(|b| b.stmts.contains(&node)).map(|b| b.id)
    }

    pub fn fn_cfg(&self, func: NodeId) -> Option<&FnCfg> {
        self.funcs.iter().find(|f| f.func == func)
    }
}

struct Builder {
    blocks: Vec<CfgBlock>,
    edges: Vec<CfgEdge>,
}

/// Open ends of a partially built region: edges waiting for a target.
type Ends = Vec<(BlockId, EdgeKind)>;

impl Builder {
    fn new_block(&mut self, stmts: Vec<NodeId>) -> BlockId {
        let id = self.blocks.len();
        self.blocks.push(CfgBlock { id, stmts });
        id
    }

    fn connect(&mut self, ends: &Ends, to: BlockId) {
        for (from, kind) in ends {
            self.edges.push(CfgEdge { from: *from, to, kind: *kind });
        }
    }

    fn connect_back(&mut self, ends: &Ends, to: BlockId) {
        for (from, _) in ends {
            self.edges.push(CfgEdge { from: *from, to, kind: EdgeKind::LoopBack });
        }
    }

    fn build_stmts(&mut self, stmts: &[Stmt], mut ends: Ends, exit: BlockId) -> Ends {
        for s in stmts {
            ends = self.build_stmt(s, ends, exit);
        }
        ends
    }

    fn build_stmt(&mut self, s: &Stmt, ends: Ends, exit: BlockId) -> Ends {
        match s {
            Stmt::Decl { id, .. }
            | Stmt::Expr { id, .. }
            | Stmt::StreamIn { id, .. }
            | Stmt::StreamOut { id, .. }
            | Stmt::Precision { id, .. }
            | Stmt::SyncIo { id, .. } => {
                let b = self.new_block(alloc::vec![*id]);
                self.connect(&ends, b);
                alloc::vec![(b, EdgeKind::Fallthrough)]
            }
            Stmt::Return { id, .. } => {
                let b = self.new_block(alloc::vec![*id]);
                self.connect(&ends, b);
                self.edges.push(CfgEdge { from: b, to: exit, kind: EdgeKind::Fallthrough });
                Vec::new()
            }
            Stmt::Block { block, .. } => self.build_stmts(&block.stmts, ends, exit),
            Stmt::If { cond, then_branch, else_branch, .. } => {
                let c = self.new_block(alloc::vec![cond.id()]);
                self.connect(&ends, c);
                let mut out = self.build_stmt(
                    then_branch,
                    alloc::vec![(c, EdgeKind::TrueBranch)],
                    exit,
                );
                match else_branch {
                    Some(e) => {
                        let else_ends =
                            self.build_stmt(e, alloc::vec![(c, EdgeKind::FalseBranch)], exit);
                        out.extend(else_ends);
                    }
                    None => out.push((c, EdgeKind::FalseBranch)),
                }
                out
            }
            Stmt::While { cond, body, .. } => {
                let c = self.new_block(alloc::vec![cond.id()]);
                self.connect(&ends, c);
                let body_ends =
                    self.build_stmt(body, alloc::vec![(c, EdgeKind::TrueBranch)], exit);
                self.connect_back(&body_ends, c);
                alloc::vec![(c, EdgeKind::FalseBranch)]
            }
            Stmt::For { init, cond, step, body, .. } => {
                let mut ends = ends;
                if let Some(i) = init {
                    ends = self.build_stmt(i, ends, exit);
                }
                // The loop header: the condition when present, otherwise
                // an empty placeholder to anchor the back edge.
                let header = match cond {
                    Some(c) => self.new_block(alloc::vec![c.id()]),
                    None => self.new_block(Vec::new()),
                };
                self.connect(&ends, header);
                let body_entry_kind =
                    if cond.is_some() { EdgeKind::TrueBranch } else { EdgeKind::Fallthrough };
                let mut body_ends =
                    self.build_stmt(body, alloc::vec![(header, body_entry_kind)], exit);
                if let Some(st) = step {
                    let sb = self.new_block(alloc::vec![st.id()]);
                    self.connect(&body_ends, sb);
                    body_ends = alloc::vec![(sb, EdgeKind::Fallthrough)];
                }
                self.connect_back(&body_ends, header);
                if cond.is_some() {
                    alloc::vec![(header, EdgeKind::FalseBranch)]
                } else {
                    Vec::new()
                }
            }
        }
    }
}

pub fn build_cfg(program: &SourceProgram) -> Cfg {
    let mut b = Builder { blocks: Vec::new(), edges: Vec::new() };
    let mut funcs = Vec::new();
    for f in program.ast.funcs() {
        let start = b.blocks.len();
        let entry = b.new_block(f.params.iter().map(|p| p.id).collect());
        let exit = b.new_block(Vec::new());
        let ends =
            b.build_stmts(&f.body.stmts, alloc::vec![(entry, EdgeKind::Fallthrough)], exit);
        b.connect(&ends, exit);
        funcs.push(FnCfg {
            name: f.name.clone(),
            func: f.id,
            entry,
            exit,
            blocks: (start, b.blocks.len()),
        });
    }
    let (entry, exit) = funcs
        .iter()
        .find(|f| f.name == "main")
        .or_else(|| funcs.first())
        .map(|f| (f.entry, f.exit))
        .unwrap_or_else(|| {
            let only = b.new_block(Vec::new());
            (only, only)
        });
    Cfg { blocks: b.blocks, edges: b.edges, entry, exit, funcs }
}
