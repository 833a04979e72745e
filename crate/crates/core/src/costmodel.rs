//! Product-line economics with the SIMPLE cost components.
//!
//! All quantities are person-weeks (pw). Person-month (pm) figures are
//! display views at 4 pw per pm. The model is generic over the scalar used
//! for person-weeks: `i64` is the native unit, `Ratio<i64>` and `f64` are
//! supported for fractional inputs.

use std::fmt::{Debug, Display};

use num_rational::Ratio;
use num_traits::{Num, ToPrimitive};
use thiserror::Error;

pub const PW_PER_PM: u64 = 4;

/// Scalar types usable as person-week amounts.
pub trait CostScalar: Num + Copy + PartialOrd + Debug + Display {
    /// Exact type for person-month views.
    type Fraction: Num + Copy + PartialOrd + Debug;

    fn from_count(n: u64) -> Self;
    fn to_fraction(self) -> Self::Fraction;
    fn fraction_from_count(n: u64) -> Self::Fraction;
    /// Rounds half-way values toward positive infinity.
    fn round_half_up(x: Self::Fraction) -> Self::Fraction;
    fn fraction_to_f64(x: Self::Fraction) -> f64;
    /// `floor(self / rhs)` for `self >= 0`, `rhs > 0`.
    fn floor_div(self, rhs: Self) -> u64;
}

impl CostScalar for i64 {
    type Fraction = Ratio<i64>;

    fn from_count(n: u64) -> Self {
        n as i64
    }
    fn to_fraction(self) -> Ratio<i64> {
        Ratio::from_integer(self)
    }
    fn fraction_from_count(n: u64) -> Ratio<i64> {
        Ratio::from_integer(n as i64)
    }
    fn round_half_up(x: Ratio<i64>) -> Ratio<i64> {
        (x + Ratio::new(1, 2)).floor()
    }
    fn fraction_to_f64(x: Ratio<i64>) -> f64 {
        x.to_f64().unwrap_or(f64::NAN)
    }
    fn floor_div(self, rhs: Self) -> u64 {
        self.div_euclid(rhs) as u64
    }
}

impl CostScalar for Ratio<i64> {
    type Fraction = Ratio<i64>;

    fn from_count(n: u64) -> Self {
        Ratio::from_integer(n as i64)
    }
    fn to_fraction(self) -> Ratio<i64> {
        self
    }
    fn fraction_from_count(n: u64) -> Ratio<i64> {
        Ratio::from_integer(n as i64)
    }
    fn round_half_up(x: Ratio<i64>) -> Ratio<i64> {
        (x + Ratio::new(1, 2)).floor()
    }
    fn fraction_to_f64(x: Ratio<i64>) -> f64 {
        x.to_f64().unwrap_or(f64::NAN)
    }
    fn floor_div(self, rhs: Self) -> u64 {
        (self / rhs).floor().to_integer() as u64
    }
}

impl CostScalar for f64 {
    type Fraction = f64;

    fn from_count(n: u64) -> Self {
        n as f64
    }
    fn to_fraction(self) -> f64 {
        self
    }
    fn fraction_from_count(n: u64) -> f64 {
        n as f64
    }
    fn round_half_up(x: f64) -> f64 {
        (x + 0.5).floor()
    }
    fn fraction_to_f64(x: f64) -> f64 {
        x
    }
    fn floor_div(self, rhs: Self) -> u64 {
        (self / rhs).floor() as u64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CostError {
    #[error("cost component `{0}` must not be negative")]
    Negative(&'static str),
    #[error("curve length must be at least 1")]
    EmptyCurve,
}

/// SIMPLE cost components, in person-weeks, for `n` products.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostInputs<T> {
    pub c_org: T,
    pub c_cab: T,
    /// Per product.
    pub c_unique: T,
    /// Per product.
    pub c_reuse: T,
    /// Cost of one stand-alone product.
    pub c_product: T,
    pub n: u64,
}

impl<T: CostScalar> CostInputs<T> {
    pub fn validate(&self) -> Result<(), CostError> {
        let fields = [
            ("org", self.c_org),
            ("cab", self.c_cab),
            ("unique", self.c_unique),
            ("reuse", self.c_reuse),
            ("product", self.c_product),
        ];
        match fields.iter().find(|(_, v)| *v < T::zero()) {
            Some((name, _)) => Err(CostError::Negative(name)),
            None => Ok(()),
        }
    }

    pub fn with_n(&self, n: u64) -> Self {
        CostInputs { n, ..*self }
    }

    fn per_product(&self) -> T {
        self.c_unique + self.c_reuse
    }

    fn fixed(&self) -> T {
        self.c_org + self.c_cab
    }
}

pub fn spl_cost<T: CostScalar>(inputs: &CostInputs<T>) -> T {
    inputs.fixed() + T::from_count(inputs.n) * inputs.per_product()
}

pub fn standalone_cost<T: CostScalar>(inputs: &CostInputs<T>) -> T {
    T::from_count(inputs.n) * inputs.c_product
}

pub fn to_person_months<T: CostScalar>(pw: T) -> T::Fraction {
    pw.to_fraction() / T::fraction_from_count(PW_PER_PM)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Savings<T: CostScalar> {
    pub exact_pw: T,
    pub exact_pm: T::Fraction,
    /// Each side rounded to whole person-months, then subtracted.
    pub paper_style_pm: T::Fraction,
}

pub fn savings<T: CostScalar>(inputs: &CostInputs<T>) -> Savings<T> {
    let spl = spl_cost(inputs);
    let standalone = standalone_cost(inputs);
    let exact_pw = standalone - spl;
    Savings {
        exact_pw,
        exact_pm: to_person_months(exact_pw),
        paper_style_pm: T::round_half_up(to_person_months(standalone))
            - T::round_half_up(to_person_months(spl)),
    }
}

/// Smallest product count with strictly positive savings, or `None` when
/// a stand-alone product never costs more than a product-line member.
pub fn break_even<T: CostScalar>(inputs: &CostInputs<T>) -> Option<u64> {
    let margin = inputs.c_product - inputs.per_product();
    if margin <= T::zero() {
        return None;
    }
    let fixed = inputs.fixed();
    let gain = |n: u64| savings(&inputs.with_n(n)).exact_pw;
    let mut n = if fixed <= T::zero() {
        1
    } else {
        fixed.floor_div(margin) + 1
    };
    // floating-point inputs may land one off
    while n > 1 && gain(n - 1) > T::zero() {
        n -= 1;
    }
    while gain(n) <= T::zero() {
        n += 1;
    }
    Some(n)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint<T> {
    pub n: u64,
    pub spl_pw: T,
    pub standalone_pw: T,
}

pub fn cost_curve<T: CostScalar>(
    inputs: &CostInputs<T>,
    n_max: u64,
) -> Result<Vec<CurvePoint<T>>, CostError> {
    if n_max < 1 {
        return Err(CostError::EmptyCurve);
    }
    Ok((1..=n_max)
        .map(|n| {
            let at = inputs.with_n(n);
            CurvePoint {
                n,
                spl_pw: spl_cost(&at),
                standalone_pw: standalone_cost(&at),
            }
        })
        .collect())
}

pub fn curve_csv<T: CostScalar>(curve: &[CurvePoint<T>]) -> String {
    let mut out = String::from("n,spl_pw,standalone_pw\n");
    for p in curve {
        out.push_str(&format!("{},{},{}\n", p.n, p.spl_pw, p.standalone_pw));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostReport<T: CostScalar> {
    pub c_spl_pw: T,
    pub c_spl_pm: T::Fraction,
    pub c_standalone_pw: T,
    pub c_standalone_pm: T::Fraction,
    pub savings: Savings<T>,
    pub break_even: Option<u64>,
    pub curve: Vec<CurvePoint<T>>,
}

impl<T: CostScalar> CostReport<T> {
    pub fn c_spl_pm_rounded(&self) -> T::Fraction {
        T::round_half_up(self.c_spl_pm)
    }

    pub fn c_standalone_pm_rounded(&self) -> T::Fraction {
        T::round_half_up(self.c_standalone_pm)
    }
}

/// Full report; `curve_max` adds the cost curve for `1..=curve_max`.
pub fn report<T: CostScalar>(
    inputs: &CostInputs<T>,
    curve_max: Option<u64>,
) -> Result<CostReport<T>, CostError> {
    inputs.validate()?;
    let c_spl_pw = spl_cost(inputs);
    let c_standalone_pw = standalone_cost(inputs);
    let curve = match curve_max {
        Some(max) => cost_curve(inputs, max)?,
        None => Vec::new(),
    };
    Ok(CostReport {
        c_spl_pw,
        c_spl_pm: to_person_months(c_spl_pw),
        c_standalone_pw,
        c_standalone_pm: to_person_months(c_standalone_pw),
        savings: savings(inputs),
        break_even: break_even(inputs),
        curve,
    })
}
