#![allow(dead_code)]

use std::f64::consts::PI;

use fuzzcalc::calculus::{self, add_functions, scale_function, FuzzyFunction};
use fuzzcalc::number::{AlphaGrid, FuzzyNumber};
use proptest::prelude::*;

/// Built-in function families with their natural domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    ExpDecay,
    Sinusoid,
}

impl Family {
    pub fn build(self, a: &FuzzyNumber) -> FuzzyFunction {
        match self {
            Family::ExpDecay => calculus::exp_decay(a).unwrap(),
            Family::Sinusoid => calculus::sinusoid(a).unwrap(),
        }
    }

    pub fn t_range(self) -> (f64, f64) {
        match self {
            Family::ExpDecay => (-2.0, 3.0),
            Family::Sinusoid => (0.0, PI),
        }
    }
}

pub fn family() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::ExpDecay), Just(Family::Sinusoid)]
}

/// Trapezoidal parameters with nonnegative support.
pub fn nonnegative_shape() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(0.0..50.0f64).prop_map(|mut p| {
        p.sort_by(f64::total_cmp);
        p
    })
}

pub fn shape() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(-100.0..100.0f64).prop_map(|mut p| {
        p.sort_by(f64::total_cmp);
        p
    })
}

pub fn fuzzy(shape: [f64; 4]) -> FuzzyNumber {
    let [l, m1, m2, r] = shape;
    FuzzyNumber::trapezoidal(l, m1, m2, r, AlphaGrid::default()).unwrap()
}

/// Either a triangle or a trapezoid with nonnegative support.
pub fn nonnegative_number() -> impl Strategy<Value = FuzzyNumber> {
    (nonnegative_shape(), any::<bool>()).prop_map(|(p, triangle)| {
        if triangle {
            FuzzyNumber::triangular(p[0], p[1], p[3], AlphaGrid::default()).unwrap()
        } else {
            fuzzy(p)
        }
    })
}

/// Point in `[lo, hi]` from a unit sample.
pub fn within((lo, hi): (f64, f64), u: f64) -> f64 {
    lo + (hi - lo) * u
}

/// Randomized function built from the families: a single member, a
/// scaled member, or a same-family sum.
#[derive(Debug, Clone)]
pub struct Composite {
    pub family: Family,
    pub a: FuzzyNumber,
    pub b: FuzzyNumber,
    pub lambda: f64,
    pub shape: u8,
}

impl Composite {
    pub fn build(&self) -> FuzzyFunction {
        let f = self.family.build(&self.a);
        match self.shape {
            0 => f,
            1 => scale_function(self.lambda, &f),
            _ => add_functions(&f, &self.family.build(&self.b)).unwrap(),
        }
    }
}

pub fn composite() -> impl Strategy<Value = Composite> {
    (family(), nonnegative_number(), nonnegative_number(), -5.0..5.0f64, 0u8..3).prop_map(
        |(family, a, b, lambda, shape)| Composite {
            family,
            a,
            b,
            lambda,
            shape,
        },
    )
}
