//! Named lattices and a small grammar for direct sums of them.
//!
//! ```text
//! sum  := term ("+" term)*
//! term := ["-"] base ["(" int ")"]
//! base := "U" | "A"k | "E6" | "E7" | "E8" | "I"k | "diag(" int ("," int)* ")"
//! ```
//!
//! A parenthesized integer rescales the Gram matrix, so `E8(-1)` is the
//! negative definite root lattice and `U(2)` the hyperbolic plane scaled by 2.
//! The names `L`, `M`, `A`, `A_S`, `A_MSY` and `A_CMS` expand to fixed sums.

use num_bigint::BigInt;

use super::{GramLattice, LatticeError};

/// Edges of the E8 diagram, nodes numbered 1..8: the chain 1-3-4-5-6-7-8
/// with node 2 attached to node 4. E7 and E6 are the subdiagrams on nodes
/// 1..7 and 1..6.
pub const E8_EDGES: [(usize, usize); 7] = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)];

fn blank(n: usize) -> Vec<Vec<i64>> {
    vec![vec![0; n]; n]
}

pub fn hyperbolic_plane() -> Vec<Vec<i64>> {
    vec![vec![0, 1], vec![1, 0]]
}

/// Positive definite A_k.
pub fn root_a(k: usize) -> Vec<Vec<i64>> {
    let mut g = blank(k);
    for i in 0..k {
        g[i][i] = 2;
        if i + 1 < k {
            g[i][i + 1] = -1;
            g[i + 1][i] = -1;
        }
    }
    g
}

/// Positive definite E_k for k in 6..=8.
pub fn root_e(k: usize) -> Option<Vec<Vec<i64>>> {
    if !(6..=8).contains(&k) {
        return None;
    }
    let mut g = blank(k);
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = 2;
    }
    for &(a, b) in E8_EDGES.iter().filter(|&&(a, b)| a <= k && b <= k) {
        g[a - 1][b - 1] = -1;
        g[b - 1][a - 1] = -1;
    }
    Some(g)
}

fn identity(k: usize) -> Vec<Vec<i64>> {
    let mut g = blank(k);
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = 1;
    }
    g
}

fn diag(values: &[i64]) -> Vec<Vec<i64>> {
    let mut g = blank(values.len());
    for (i, &v) in values.iter().enumerate() {
        g[i][i] = v;
    }
    g
}

fn expand_named(name: &str) -> Option<&'static str> {
    Some(match name {
        "L" => "U+U+U+E8(-1)+E8(-1)",
        "M" => "U+E8(-1)+E6(-1)",
        "A" => "U+U+A2(-1)",
        "A_S" => "U+U+A1(-1)",
        "A_MSY" => "U(2)+U(2)+-I2(2)",
        "A_CMS" => "U+U+-I2(2)",
        _ => return None,
    })
}

fn parse_int(s: &str, whole: &str) -> Result<i64, LatticeError> {
    s.trim().parse::<i64>().map_err(|_| LatticeError::UnknownName(whole.to_string()))
}

fn parse_term(term: &str, whole: &str) -> Result<(String, Vec<Vec<i64>>), LatticeError> {
    let unknown = || LatticeError::UnknownName(whole.to_string());
    let mut t = term.trim();
    let mut sign = 1i64;
    if let Some(rest) = t.strip_prefix('-') {
        sign = -1;
        t = rest.trim();
    }
    let (base, gram) = if let Some(inner) = t.strip_prefix("diag(") {
        let end = inner.find(')').ok_or_else(unknown)?;
        let values: Vec<i64> =
            inner[..end].split(',').map(|v| parse_int(v, whole)).collect::<Result<_, _>>()?;
        t = &inner[end + 1..];
        (format!("diag({})", inner[..end].trim()), diag(&values))
    } else {
        let split = t.find('(').unwrap_or(t.len());
        let (b, rest) = t.split_at(split);
        t = rest;
        let gram = match b.chars().next() {
            Some('U') if b.len() == 1 => hyperbolic_plane(),
            Some('A') => root_a(b[1..].parse::<usize>().ok().filter(|&k| k >= 1).ok_or_else(unknown)?),
            Some('E') => root_e(b[1..].parse::<usize>().map_err(|_| unknown())?).ok_or_else(unknown)?,
            Some('I') => identity(b[1..].parse::<usize>().ok().filter(|&k| k >= 1).ok_or_else(unknown)?),
            _ => return Err(unknown()),
        };
        (b.to_string(), gram)
    };
    let mut scale = 1i64;
    let mut label = base;
    let t = t.trim();
    if !t.is_empty() {
        let inner = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(unknown)?;
        scale = parse_int(inner, whole)?;
        if scale == 0 {
            return Err(unknown());
        }
        label = format!("{label}({scale})");
    }
    if sign < 0 {
        label = format!("-{label}");
    }
    let factor = sign * scale;
    let gram = gram.into_iter().map(|row| row.into_iter().map(|x| x * factor).collect()).collect();
    Ok((label, gram))
}

/// Builds a lattice from the catalog grammar.
pub fn catalog(name: &str) -> Result<GramLattice, LatticeError> {
    let trimmed = name.trim();
    let text = expand_named(trimmed).unwrap_or(trimmed);
    let mut parts = Vec::new();
    for term in text.split('+') {
        let (label, gram) = parse_term(term, name)?;
        let rows: Vec<Vec<BigInt>> = gram.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
        parts.push(GramLattice::from_int_rows(&label, rows)?);
    }
    let lat = if parts.len() == 1 { parts.pop().expect("one part") } else { GramLattice::direct_sum(&parts) };
    Ok(if expand_named(trimmed).is_some() { lat.relabel(trimmed) } else { lat })
}
