//! Plain-text mesh format:
//!
//! ```text
//! $nodes N
//! x y            (N lines)
//! $triangles M
//! i j k          (M lines, 0-based, counterclockwise)
//! ```
//!
//! Edges are re-derived on load.

use std::io::{BufRead, Write};

use super::{Mesh, Point2, Triangle};
use crate::{Error, Result};

pub fn write_mesh<W: Write>(mesh: &Mesh, mut out: W) -> Result<()> {
    writeln!(out, "$nodes {}", mesh.vertices().len())?;
    for p in mesh.vertices() {
        // Shortest decimal representation that round-trips exactly.
        writeln!(out, "{} {}", p.x, p.y)?;
    }
    writeln!(out, "$triangles {}", mesh.num_elements())?;
    for t in mesh.triangles() {
        writeln!(out, "{} {} {}", t.v[0], t.v[1], t.v[2])?;
    }
    Ok(())
}

pub fn read_mesh<R: BufRead>(input: R) -> Result<Mesh> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));

    let mut next = |what: &str| -> Result<(usize, String)> {
        match lines.next() {
            Some((n, Ok(l))) => Ok((n, l)),
            Some((_, Err(e))) => Err(e.into()),
            None => Err(Error::Parse {
                line: 0,
                msg: format!("unexpected end of input, expected {what}"),
            }),
        }
    };

    let n_nodes = header(next("$nodes header")?, "$nodes")?;
    let mut vertices = Vec::with_capacity(n_nodes);
    for _ in 0..n_nodes {
        let (line, text) = next("node coordinates")?;
        let [x, y] = fields::<f64, 2>(line, &text)?;
        vertices.push(Point2::new(x, y));
    }
    let n_tri = header(next("$triangles header")?, "$triangles")?;
    let mut triangles = Vec::with_capacity(n_tri);
    for _ in 0..n_tri {
        let (line, text) = next("triangle indices")?;
        let [a, b, c] = fields::<usize, 3>(line, &text)?;
        triangles.push(Triangle::new(a, b, c));
    }
    Mesh::new(vertices, triangles)
}

fn header((line, text): (usize, String), tag: &str) -> Result<usize> {
    let mut parts = text.split_whitespace();
    if parts.next() != Some(tag) {
        return Err(Error::Parse {
            line,
            msg: format!("expected `{tag} N`"),
        });
    }
    let count = parts.next().and_then(|s| s.parse().ok());
    match (count, parts.next()) {
        (Some(n), None) => Ok(n),
        _ => Err(Error::Parse {
            line,
            msg: format!("expected `{tag} N`"),
        }),
    }
}

fn fields<T: std::str::FromStr, const N: usize>(line: usize, text: &str) -> Result<[T; N]> {
    let parsed: Vec<T> = text
        .split_whitespace()
        .map(|s| s.parse::<T>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Parse {
            line,
            msg: format!("could not parse `{text}`"),
        })?;
    parsed.try_into().map_err(|v: Vec<T>| Error::Parse {
        line,
        msg: format!("expected {N} values, found {}", v.len()),
    })
}
