//! Circular layout of `G_n`: vertex `i` sits at angle `2*pi*i/n` on the unit circle.

use std::f64::consts::TAU;
use std::io::{self, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Label;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LayoutPoint {
    pub vertex: Label,
    pub x: f64,
    pub y: f64,
}

pub fn circular_layout(n: u32) -> Result<Vec<LayoutPoint>> {
    if n == 0 {
        return Err(Error::InvalidSize);
    }
    Ok((1..=n)
        .map(|i| {
            let angle = TAU * f64::from(i) / f64::from(n);
            LayoutPoint {
                vertex: i,
                x: angle.cos(),
                y: angle.sin(),
            }
        })
        .collect())
}

/// Writes the `vertex,x,y` file with 12 significant digits per coordinate.
pub fn write_layout_csv<W: Write>(points: &[LayoutPoint], mut w: W) -> io::Result<()> {
    writeln!(w, "vertex,x,y")?;
    for p in points {
        writeln!(w, "{},{},{}", p.vertex, sig12(p.x), sig12(p.y))?;
    }
    Ok(())
}

/// `%.12g`-style formatting.
fn sig12(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..DIGITS).contains(&exp) {
        let s = format!("{:.*e}", (DIGITS - 1) as usize, x);
        let (mantissa, e) = s.split_once('e').expect("scientific format");
        return format!("{}e{}", trim_zeros(mantissa), e);
    }
    let decimals = (DIGITS - 1 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding can carry into a new leading digit; re-trim is still correct
    trim_zeros(&s).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
