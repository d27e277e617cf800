mod boundary;
mod catalog;
mod cover;
mod domain;
mod frame;
mod lemma1;

pub use catalog::{load_domain, DomainSpec};
pub use cover::{collar_cover, collar_membership, CollarCover, CollarPoint, CoverParams, Patch};
pub use domain::{grange_seam_points, Domain, DomainKind, ImplicitFn, RealTerm, GRANGE_CAP, OMEGA};
pub use frame::{inner_normal, project_onto_line, tangent_frame, BoundaryFrame};
pub use lemma1::{
    verify_lemma1, verify_lemma1_on, Lemma1Bin, Lemma1Report, Lemma1Row, LEMMA1_BINS,
};

pub(crate) use boundary::gauss;
