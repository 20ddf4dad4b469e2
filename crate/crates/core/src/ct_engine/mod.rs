//! Constant-term algorithms: direct expansion, the partial-fraction residue
//! step, the chain recursion behind the vanishing lemma, the tuple
//! classifier it relies on, and interpolation in `q^a`.

mod aomoto;
mod direct;
mod interp;
mod tuple_classifier;
mod partial_fraction;
mod recursion;

pub use aomoto::{aomoto_expansion_check, aomoto_l, aomoto_rhs, compositions};
pub use direct::{ct_direct, ct_direct_at_one};
pub use interp::{
    ct_samples, interp_from_samples, interp_in_qa, interpolate, mprime_at, sample_window,
    InterpolatedPoly,
};
pub use tuple_classifier::{lemma_important, Lemma42Verdict};
pub use partial_fraction::{classify_monomial, ct_iterated_pf, pf_ct_step, Smallness};
pub use recursion::{ct_recursion, CertNode, RecursionCertificate, Verdict};
