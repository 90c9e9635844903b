//! Float math routed through `num_traits::Float` so the same calls resolve to
//! std intrinsics or to libm depending on the build.

use num_traits::Float;

pub(crate) fn sin(x: f64) -> f64 {
    Float::sin(x)
}

pub(crate) fn cos(x: f64) -> f64 {
    Float::cos(x)
}

pub(crate) fn sqrt(x: f64) -> f64 {
    Float::sqrt(x)
}

pub(crate) fn atan(x: f64) -> f64 {
    Float::atan(x)
}

pub(crate) fn acos(x: f64) -> f64 {
    Float::acos(x)
}

pub(crate) fn abs(x: f64) -> f64 {
    Float::abs(x)
}

pub(crate) fn powf(x: f64, y: f64) -> f64 {
    Float::powf(x, y)
}

pub(crate) fn cbrt(x: f64) -> f64 {
    Float::cbrt(x)
}

pub(crate) fn rem_euclid(x: f64, m: f64) -> f64 {
    let r = x % m;
    if r < 0.0 {
        r + m
    } else {
        r
    }
}
