//! Link determinants.
//!
//! The primary route is the Goeritz matrix of a checkerboard shading. The
//! oracle route is the coloring (Alexander at `t = -1`) matrix built from
//! over-arcs. Both reduce to an exact integer determinant computed with
//! fraction-free elimination.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::diagram::{EdgeId, LinkDiagram};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeterminantError {
    #[error("face structure is not 2-colorable")]
    NotTwoColorable,
    #[error("diagram is not connected")]
    Disconnected,
    #[error("deleted region {index} out of range ({count} white regions)")]
    BadDeletedRegion { index: usize, count: usize },
}

/// Which color class of faces plays the role of the white regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shading {
    /// White regions are those of the face holding corner 0 of crossing 0.
    Primary,
    Opposite,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoeritzMatrix {
    entries: Vec<Vec<i64>>,
}

impl GoeritzMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn determinant(&self) -> BigInt {
        let m: Vec<Vec<BigInt>> =
            self.entries.iter().map(|row| row.iter().map(|&v| BigInt::from(v)).collect()).collect();
        bareiss_determinant(m)
    }
}

/// Exact determinant of a square integer matrix by Bareiss elimination.
/// The empty matrix has determinant 1.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Face colors, with `color[face]` in {0, 1}, or an error if adjacent faces
/// cannot be told apart.
fn face_colors(d: &LinkDiagram) -> Result<(Vec<[usize; 4]>, Vec<u8>), DeterminantError> {
    let (face, count) = d.faces();
    let mut color: Vec<Option<u8>> = vec![None; count];
    let mut neighbours: Vec<Vec<usize>> = vec![Vec::new(); count];
    for f in &face {
        for i in 0..4 {
            neighbours[f[i]].push(f[(i + 1) % 4]);
        }
    }
    for start in 0..count {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(0);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            let cu = color[u].unwrap_or(0);
            for &v in &neighbours[u] {
                match color[v] {
                    None => {
                        color[v] = Some(1 - cu);
                        stack.push(v);
                    }
                    Some(cv) if cv == cu => return Err(DeterminantError::NotTwoColorable),
                    Some(_) => {}
                }
            }
        }
    }
    Ok((face, color.into_iter().map(|c| c.unwrap_or(0)).collect()))
}

/// Goeritz matrix with the default shading, deleting the last white region.
pub fn goeritz_matrix(d: &LinkDiagram) -> Result<GoeritzMatrix, DeterminantError> {
    goeritz_matrix_with(d, Shading::Primary, None)
}

/// Goeritz matrix for a chosen shading and deleted white region
/// (`None` deletes the last one).
pub fn goeritz_matrix_with(
    d: &LinkDiagram,
    shading: Shading,
    deleted: Option<usize>,
) -> Result<GoeritzMatrix, DeterminantError> {
    let full = full_goeritz(d, shading)?;
    let m = full.len();
    if m == 0 {
        return Ok(GoeritzMatrix { entries: Vec::new() });
    }
    let del = deleted.unwrap_or(m - 1);
    if del >= m {
        return Err(DeterminantError::BadDeletedRegion { index: del, count: m });
    }
    let entries = full
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != del)
        .map(|(_, row)| row.iter().enumerate().filter(|(j, _)| *j != del).map(|(_, v)| *v).collect())
        .collect();
    Ok(GoeritzMatrix { entries })
}

/// The undeleted Goeritz matrix; every row sums to zero.
pub fn full_goeritz(d: &LinkDiagram, shading: Shading) -> Result<Vec<Vec<i64>>, DeterminantError> {
    if d.crossing_count() == 0 {
        if d.trivial_loops() == 1 {
            return Ok(Vec::new());
        }
        return Err(DeterminantError::Disconnected);
    }
    if !d.properties().connected {
        return Err(DeterminantError::Disconnected);
    }
    let (face, color) = face_colors(d)?;
    let white_color = match shading {
        Shading::Primary => color[face[0][0]],
        Shading::Opposite => 1 - color[face[0][0]],
    };
    let mut index = vec![usize::MAX; color.len()];
    let mut m = 0;
    for (f, &c) in color.iter().enumerate() {
        if c == white_color {
            index[f] = m;
            m += 1;
        }
    }
    let mut g = vec![vec![0i64; m]; m];
    for corners in &face {
        // White corners are either {0, 2} or {1, 3}.
        let (sign, a, b) = if color[corners[0]] == white_color {
            (1, corners[0], corners[2])
        } else {
            (-1, corners[1], corners[3])
        };
        let (i, j) = (index[a], index[b]);
        if i != j {
            g[i][j] -= sign;
            g[j][i] -= sign;
            g[i][i] += sign;
            g[j][j] += sign;
        }
    }
    Ok(g)
}

/// Link determinant. Zero for diagrams that are split at the diagram level.
pub fn determinant(d: &LinkDiagram) -> BigUint {
    match goeritz_matrix(d) {
        Ok(g) => g.determinant().abs().to_biguint().unwrap_or_default(),
        Err(DeterminantError::Disconnected) => BigUint::zero(),
        Err(e) => panic!("invariant failure in planar diagram {d}: {e}"),
    }
}

/// Independent determinant route: the coloring matrix of over-arcs, with
/// relation `2·over − under_in − under_out` at every crossing.
pub fn determinant_oracle(d: &LinkDiagram) -> BigUint {
    let n = d.crossing_count();
    let x = d.crossings();
    // Arcs: edges glued through the overstrand of each crossing.
    let mut parent: Vec<usize> = (0..=2 * n).collect();
    fn find(p: &mut [usize], mut v: usize) -> usize {
        while p[v] != v {
            p[v] = p[p[v]];
            v = p[v];
        }
        v
    }
    for q in x {
        let (a, b) = (find(&mut parent, q[1] as usize), find(&mut parent, q[3] as usize));
        if a != b {
            parent[a] = b;
        }
    }
    let mut arc_of = vec![usize::MAX; 2 * n + 1];
    let mut arcs = 0;
    for e in 1..=2 * n {
        let r = find(&mut parent, e);
        if arc_of[r] == usize::MAX {
            arc_of[r] = arcs;
            arcs += 1;
        }
        arc_of[e] = arc_of[r];
    }
    let arc = |e: EdgeId| arc_of[e as usize];
    // Each crossing-free loop is an arc with no relations.
    let columns = arcs + d.trivial_loops();
    let mut rows: Vec<Vec<BigInt>> = x
        .iter()
        .map(|q| {
            let mut row = vec![BigInt::zero(); columns];
            row[arc(q[1])] += 2;
            row[arc(q[0])] -= 1;
            row[arc(q[2])] -= 1;
            row
        })
        .collect();
    // Delete one column; columns sum to zero in every row.
    for row in rows.iter_mut() {
        row.pop();
    }
    let width = columns - 1;
    if rows.len() > width {
        rows.truncate(width);
    } else if rows.len() < width {
        return BigUint::zero();
    }
    bareiss_determinant(rows).abs().to_biguint().unwrap_or_default()
}
