//! Multi-module cases: archive manifests, composition into one graph and
//! module-level architecture checks.

mod architecture;
mod archive;
mod compose;

pub use architecture::{check_architecture, ArchitectureReport, ETHICS_SUBMODULES};
pub use archive::{
    load_archive, parse_archive, ArchitectureTag, ArchiveError, ArchiveModule, CaseArchive,
    CompositionLink, LinkKind,
};
pub use compose::{compose, module_root, COMPOSED_MODULE};
