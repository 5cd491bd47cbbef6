//! Elementary transformations `F_n -> F_{n-1}`: blow up a point, contract the
//! strict transform of its fiber.
//!
//! On classes, a point of multiplicity `m` maps `(a, b; m)` on `F_n` to
//! `(a - m + b, b; b - m)` on `F_{n-1}`, leaving the other points alone. The
//! map preserves `L^2` and `L.K`, hence virtual dimension and (-1)-classes.
//! For `k` points of a homogeneous system this gives
//! `L_n(a,b,m^r) -> L_{n-k}(a + k(b-m), b, m^{r-k}, (b-m)^k)`.

use serde::Serialize;

use crate::curves::{is_minus_one_class, MinusOneCurveClass};
use crate::error::{ck, Error, Result};
use crate::lattice::{BlowupClass, SystemSpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransformResult {
    /// Image system on `F_{n-k}`; negative new multiplicities are clamped to 0.
    pub spec: SystemSpec,
    /// Signed image class, point by point.
    pub class_image: BlowupClass,
    pub moved_points: usize,
    /// Sum of `m - b` over moved points with `b < m`: fiber components the
    /// clamped spec no longer records.
    pub excess_fibers: i64,
    /// Moved points with `b > m` lie on a common section of the new surface,
    /// so the image spec is not in general position.
    pub special_position: bool,
}

/// Image of a class under the transformation centred at point `point`.
pub fn class_map(c: &BlowupClass, point: usize) -> Result<BlowupClass> {
    if c.n() == 0 {
        return Err(Error::InvalidInput(
            "no elementary transformation starts from F_0 towards F_-1".into(),
        ));
    }
    if point >= c.r() {
        return Err(Error::InvalidInput(format!(
            "point {point} out of range for {} points",
            c.r()
        )));
    }
    let m = c.mults[point];
    let mut mults = c.mults.clone();
    mults[point] = ck::sub(c.b(), m)?;
    Ok(BlowupClass::new(
        c.n() - 1,
        ck::add(ck::sub(c.a(), m)?, c.b())?,
        c.b(),
        mults,
    ))
}

fn finish(class_image: BlowupClass, moved: &[usize]) -> Result<TransformResult> {
    let mut excess = 0;
    let mut special_position = false;
    let mut clamped = class_image.mults.clone();
    for &i in moved {
        let m = clamped[i];
        if m < 0 {
            excess = ck::sub(excess, m)?;
            clamped[i] = 0;
        } else if m > 0 {
            special_position = true;
        }
    }
    let spec = SystemSpec::new(class_image.n(), class_image.a(), class_image.b(), clamped)?;
    Ok(TransformResult {
        spec,
        class_image,
        moved_points: moved.len(),
        excess_fibers: excess,
        special_position,
    })
}

/// Transform at a single marked point (index into `s.mults()`).
pub fn elementary_transform_point(s: &SystemSpec, point: usize) -> Result<TransformResult> {
    if s.b() < 0 {
        return Err(Error::InvalidInput(format!("{s}: negative H coefficient")));
    }
    finish(class_map(&s.class(), point)?, &[point])
}

/// Transform a homogeneous system at `k` of its points, `1 <= k <= min(n, r)`.
pub fn elementary_transform(s: &SystemSpec, k: usize) -> Result<TransformResult> {
    if s.homogeneous_mult().is_none() {
        return Err(Error::InvalidInput(format!("{s} is not homogeneous")));
    }
    if k == 0 || k > s.n() as usize || k > s.r() {
        return Err(Error::InvalidInput(format!(
            "k = {k} outside 1..=min(n, r) = 1..={}",
            (s.n() as usize).min(s.r())
        )));
    }
    if s.b() < 0 {
        return Err(Error::InvalidInput(format!("{s}: negative H coefficient")));
    }
    let moved: Vec<usize> = (0..k).collect();
    let mut class = s.class();
    for &i in &moved {
        class = class_map(&class, i)?;
    }
    finish(class, &moved)
}

/// Whether the image of a (-1)-class under the transformation at `point` is
/// again a (-1)-class.
pub fn transform_preserves_minus_one(c: &MinusOneCurveClass, point: usize) -> Result<bool> {
    let image = class_map(&c.class, point)?;
    Ok(is_minus_one_class(&c.class) && is_minus_one_class(&image))
}
