//! Zero location and certification: all-roots solving for the terminating
//! families, leading-zero location for the entire families, and the dual
//! realness certificates (imaginary-part tolerance cross-checked against an
//! independent real-axis sign-change count) behind every "all zeros real
//! and one-signed" claim.

mod aberth;
mod certify;
mod entire;

pub use aberth::find_poly_roots;
pub use certify::certify_real_roots;
pub use entire::{hadamard_product, hadamard_reconstruct, locate_entire_zeros};

use serde::Serialize;

use crate::complex::Cplx;
use crate::real::Real;
use crate::series::TruncationCertificate;

/// One located zero with its evidence: the residual `|p(z)|` (or the
/// certified `|f(z)|` for entire functions) and a first-order condition
/// estimate `Σ|c_j||z|^j / (|p'(z)|·|z|)`.
#[derive(Clone, Debug, Serialize)]
pub struct Zero {
    #[serde(flatten)]
    pub value: Cplx,
    pub residual: Real,
    pub condition: Real,
    pub is_real: bool,
}

/// Outcome of the dual realness certification.
///
/// `all_real` holds only when both routes agree: every zero's imaginary
/// part is below the relative `eps_real` tolerance, and the independent
/// multiplicity-weighted sign-change count over real-axis brackets equals
/// the degree (for entire functions: the requested zero count).
#[derive(Clone, Debug, Serialize)]
pub struct RealnessReport {
    pub all_real: bool,
    pub all_negative: bool,
    pub all_positive: bool,
    pub max_imag_ratio: Real,
    pub sign_change_count: usize,
}

/// Ordered zero list (ascending real part, ties by imaginary part), with
/// the originating family echo, an optional realness report, and — for
/// entire functions — the truncation certificate of the polynomial proxy
/// the zeros were extracted from.
#[derive(Clone, Debug, Serialize)]
pub struct ZeroSet {
    pub family: String,
    pub params: serde_json::Value,
    pub zeros: Vec<Zero>,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub report: Option<RealnessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<TruncationCertificate>,
}

impl ZeroSet {
    pub fn degree(&self) -> usize {
        self.zeros.len()
    }
}

fn sort_zeros(zeros: &mut [Zero]) {
    zeros.sort_by(|a, b| {
        a.value
            .re
            .cmp_total(&b.value.re)
            .then_with(|| a.value.im.cmp_total(&b.value.im))
    });
}

/// `|Im z| / (|z| + 1)`, the relative off-axis measure tested against
/// `eps_real`.
fn imag_ratio(z: &Cplx) -> Real {
    let one = Real::one(z.prec());
    z.im.abs() / (z.abs() + one)
}
