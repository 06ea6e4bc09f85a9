use alloc::vec;
use alloc::vec::Vec;

use crate::arc::ArcDiagram;

/// Lexicographic termination measure of the first normalization step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MeasureT {
    pub black_nodes: usize,
    /// Black nodes of degree three or more.
    pub high_arity: usize,
    /// White nodes, counting a plain arc as one.
    pub white_nodes: usize,
    /// Black nodes of degree two.
    pub binaries: usize,
    /// Fermionic swaps.
    pub crossings: usize,
    /// Isolated black nodes.
    pub zero_patterns: usize,
}

impl MeasureT {
    pub fn of(g: &ArcDiagram) -> Self {
        let deg = g.degrees();
        let vs: Vec<usize> = g.vertices().collect();
        MeasureT {
            black_nodes: vs.len(),
            high_arity: vs.iter().filter(|&&v| deg[v] >= 3).count(),
            white_nodes: g.arcs().iter().map(|a| a.white_count()).sum(),
            binaries: vs.iter().filter(|&&v| deg[v] == 2).count(),
            crossings: g.crossings(),
            zero_patterns: vs.iter().filter(|&&v| deg[v] == 0).count(),
        }
    }
}

/// Black nodes grouped into classes connected through black-black arcs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionClasses {
    pub classes: Vec<Vec<usize>>,
    /// Classes with no member joined to an output.
    pub internal: usize,
}

impl FusionClasses {
    pub fn of(g: &ArcDiagram) -> Self {
        let vs: Vec<usize> = g.vertices().collect();
        let mut parent: Vec<usize> = (0..vs.len()).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        let index = |p: usize| vs.iter().position(|&v| v == p);
        for a in g.arcs() {
            if let (Some(i), Some(j)) = (index(a.a), index(a.b)) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); vs.len()];
        for (i, &v) in vs.iter().enumerate() {
            let r = find(&mut parent, i);
            groups[r].push(v);
        }
        let classes: Vec<Vec<usize>> = groups.into_iter().filter(|c| !c.is_empty()).collect();
        let internal = classes
            .iter()
            .filter(|c| c.iter().all(|&v| !g.has_output_arc(v)))
            .count();
        FusionClasses { classes, internal }
    }
}
