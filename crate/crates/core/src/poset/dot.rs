use std::fmt::Write;

use super::Lattice;

/// Hasse diagram of `l` in DOT, edges from covered to covering element.
///
/// Nodes are emitted in index order and edges in sorted order, so equal
/// lattices give byte-identical output. `bullet` nodes are drawn as points.
pub fn hasse_dot(
    l: &impl Lattice,
    name: &str,
    label: impl Fn(usize) -> String,
    bullet: impl Fn(usize) -> bool,
) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {name} {{").unwrap();
    writeln!(out, "  rankdir=TB;").unwrap();
    for x in 0..l.size() {
        let style = if bullet(x) {
            "shape=point, width=0.12"
        } else {
            "shape=plaintext"
        };
        writeln!(out, "  n{x} [label=\"{}\", {style}];", label(x)).unwrap();
    }
    for (a, b) in l.covers() {
        writeln!(out, "  n{a} -> n{b};").unwrap();
    }
    out.push_str("}\n");
    out
}

/// Node count and edge list parsed back from [`hasse_dot`] output.
pub fn parse_hasse_dot(dot: &str) -> (usize, Vec<(usize, usize)>) {
    let mut nodes = 0;
    let mut edges = Vec::new();
    for line in dot.lines().map(str::trim) {
        if let Some((a, b)) = line.strip_suffix(';').and_then(|l| l.split_once(" -> ")) {
            let a = a.trim_start_matches('n').parse().unwrap();
            let b = b.trim_start_matches('n').parse().unwrap();
            edges.push((a, b));
        } else if line.starts_with('n') && line.contains("[label=") {
            nodes += 1;
        }
    }
    (nodes, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::FinLattice;

    #[test]
    fn boolean_square_dot() {
        let b = FinLattice::boolean(2);
        let dot = hasse_dot(&b, "B2", |x| x.to_string(), |x| x == 0);
        assert!(dot.starts_with("digraph B2 {"));
        let (nodes, edges) = parse_hasse_dot(&dot);
        assert_eq!(nodes, 4);
        assert_eq!(edges, vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert!(dot.contains("n0 [label=\"0\", shape=point"));
    }
}
