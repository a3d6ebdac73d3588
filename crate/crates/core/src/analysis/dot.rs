//! DOT-format debug exports of the program representations.

use alloc::format;
use alloc::string::String;

use super::cfg::{Cfg, EdgeKind};
use super::drm::DeclRefMap;
use super::udc::UseDefChains;

pub fn cfg_to_dot(cfg: &Cfg, udc: Option<&UseDefChains>) -> String {
    let mut out = String::from("digraph cfg {\n    node [shape=box];\n");
    for b in &cfg.blocks {
        let label: alloc::vec::Vec<String> =
            b.stmts.iter().map(|s| format!("n{s}")).collect();
        out.push_str(&format!("    b{} [label=\"b{}: {}\"];\n", b.id, b.id, label.join(" ")));
    }
    for e in &cfg.edges {
        let (style, label) = match e.kind {
            EdgeKind::Fallthrough => ("solid", ""),
            EdgeKind::TrueBranch => ("solid", "true"),
            EdgeKind::FalseBranch => ("solid", "false"),
            EdgeKind::LoopBack => ("solid", "loop"),
        };
        out.push_str(&format!(
            "    b{} -> b{} [style={style}, label=\"{label}\"];\n",
            e.from, e.to
        ));
    }
    if let Some(udc) = udc {
        for (use_node, def_node) in &udc.links {
            out.push_str(&format!(
                "    u{use_node} -> d{def_node} [style=dashed, color=blue];\n"
            ));
        }
    }
    out.push_str("}\n");
    out
}

pub fn drm_to_dot(drm: &DeclRefMap) -> String {
    let mut out = String::from("digraph drm {\n    node [shape=ellipse];\n");
    for (decl, refs) in &drm.refs {
        let name = drm.decls.get(decl).map(|d| d.name.as_str()).unwrap_or("?");
        out.push_str(&format!("    d{decl} [label=\"decl {name}\"];\n"));
        for r in refs {
            out.push_str(&format!("    d{decl} -> r{r} [style=dashed, color=green];\n"));
        }
    }
    out.push_str("}\n");
    out
}
