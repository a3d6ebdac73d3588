//! Core engine for the style-attack workbench: the MiniC language
//! (lexer, parser, printer, interpreter), program analyses (CFG,
//! use-define chains, declaration-reference map), the catalog of
//! semantics-preserving transformers, stylometric feature extraction,
//! attribution classifiers and the Monte-Carlo tree search attack.
//!
//! The crate is `no_std` + `alloc`: everything here is a pure function
//! of its inputs. File formats, I/O and the command-line front end live
//! in the companion `styloforge-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod attack;
pub mod attribution;
pub mod corpus;
pub mod features;
pub mod lang;
pub mod rng;
pub mod samples;
pub mod transform;

use alloc::string::String;
use serde::{Deserialize, Serialize};

/// An author in the attribution setting. Ids are dense `0..n_authors`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AuthorLabel {
    pub id: usize,
    pub name: String,
}

/// Identifier of a programming task (challenge) in the corpus.
pub type TaskId = String;
