//! The two reference configurations: `p(z) = z(1 − z²)` with roots `0, −1, 1`
//! and `p(z) = z(z² + 4z + 5)` with roots `0, −2 ± i`. Both target the root 0.

use crate::exactarith::GaussianRational;
use crate::multicentric::IndicatorSpec;
use crate::poly::LagrangeBasis;

fn g(re: i64, im: i64) -> GaussianRational {
    GaussianRational::from_ints(re, im)
}

/// Symmetric case, `p(z) = z(1 − z²)`; note the leading coefficient −1.
pub fn example1() -> IndicatorSpec<GaussianRational> {
    let basis = LagrangeBasis::with_leading(vec![g(0, 0), g(-1, 0), g(1, 0)], g(-1, 0))
        .expect("distinct nodes");
    IndicatorSpec { basis, target: 0 }
}

/// Nonsymmetric case, `p(z) = z(z² + 4z + 5)`.
pub fn example2() -> IndicatorSpec<GaussianRational> {
    let basis = LagrangeBasis::new(vec![g(0, 0), g(-2, 1), g(-2, -1)]).expect("distinct nodes");
    IndicatorSpec { basis, target: 0 }
}

/// Looks up a preset by its number.
pub fn by_number(n: u32) -> Option<IndicatorSpec<GaussianRational>> {
    match n {
        1 => Some(example1()),
        2 => Some(example2()),
        _ => None,
    }
}

pub const EXAMPLE1_GOLDEN: &str = include_str!("../data/example1.golden");
pub const EXAMPLE2_GOLDEN: &str = include_str!("../data/example2.golden");
