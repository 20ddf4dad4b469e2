use num_rational::BigRational;

use crate::arith::QRat;
use crate::error::Result;
use crate::kernels::FactorProduct;

/// Constant term in every variable of a product whose variable-carrying
/// denominator cancels against its numerator.
pub fn ct_direct(f: &FactorProduct) -> Result<QRat> {
    f.polynomial_parts()?.constant_term()
}

/// [`ct_direct`] with `q` specialised to 1.
pub fn ct_direct_at_one(f: &FactorProduct) -> Result<BigRational> {
    f.polynomial_parts()?.constant_term_at_one()
}
