//! Auxiliary program representations used by the transformers: the
//! control-flow graph with use-define chains and the
//! declaration-reference mapping.

pub mod cfg;
pub mod dot;
pub mod drm;
pub mod udc;

pub use cfg::{build_cfg, BlockId, Cfg, CfgBlock, CfgEdge, EdgeKind};
pub use drm::{build_decl_ref_map, DeclRefMap, ResolveError, VarShape};
pub use udc::{compute_use_def_chains, UdcError, UseDefChains};
