//! The layered closed-walk graph behind the division-free determinant, and
//! the lifted formulations built on top of it.
//!
//! A path from the source to a sink spells out a sequence of closed walks
//! with strictly increasing heads and total edge count `n`; the parity bit
//! tracks how many walks have been closed. Summing path weights with the
//! sink sign recovers `det(X)` as a polynomial identity, which is what the
//! `det_lifted` system encodes equation by equation.

use std::collections::HashMap;

use thiserror::Error;

use crate::poly::{MonomialKey, SparsePoly};
use crate::system::{LiftedFormulation, PolySystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DagError {
    #[error("symbolic expansion limited to n <= {limit}, got {n}")]
    TooLarge { n: usize, limit: usize },
}

/// Node of the layered graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKey {
    Source,
    /// `layer` matrix edges consumed, current walk head `head`, standing at
    /// `current >= head`, `parity` = completed walks mod 2.
    Interior {
        layer: usize,
        head: usize,
        current: usize,
        parity: u8,
    },
    SinkPos,
    SinkNeg,
}

/// Edge weight: the constant 1 or the matrix entry `x[row][col]`, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    One,
    Entry { row: usize, col: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub weight: Weight,
}

/// The layered DAG with one source, two signed sinks, and interior nodes
/// keyed by `(layer, head, current, parity)`.
#[derive(Debug, Clone)]
pub struct LayeredDag {
    n: usize,
    nodes: Vec<NodeKey>,
    index: HashMap<NodeKey, usize>,
    edges: Vec<Edge>,
}

/// Builds the closed-walk graph for `n x n` matrices.
///
/// Edges: the source opens a walk at every head with weight 1; a `continue`
/// edge extends the current walk by `x[current][v]` for every `v > head`; a
/// `close-and-open` edge closes the walk with `x[current][head]`, flips the
/// parity and opens a fresh walk at a strictly larger head; the final close
/// routes to the sink whose sign is `(-1)^(n + completed walks)`.
pub fn mv_graph(n: usize) -> LayeredDag {
    assert!(n >= 1, "matrix dimension must be positive");
    let mut nodes = vec![NodeKey::Source];
    for layer in 0..n {
        for head in 1..=n {
            for current in head..=n {
                for parity in 0..2u8 {
                    nodes.push(NodeKey::Interior {
                        layer,
                        head,
                        current,
                        parity,
                    });
                }
            }
        }
    }
    nodes.push(NodeKey::SinkPos);
    nodes.push(NodeKey::SinkNeg);
    let index: HashMap<NodeKey, usize> =
        nodes.iter().enumerate().map(|(i, &k)| (k, i)).collect();

    let mut edges = Vec::new();
    let at = |k: NodeKey| -> usize { index[&k] };
    for head in 1..=n {
        edges.push(Edge {
            from: at(NodeKey::Source),
            to: at(NodeKey::Interior {
                layer: 0,
                head,
                current: head,
                parity: 0,
            }),
            weight: Weight::One,
        });
    }
    for layer in 0..n {
        for head in 1..=n {
            for current in head..=n {
                for parity in 0..2u8 {
                    let from = at(NodeKey::Interior {
                        layer,
                        head,
                        current,
                        parity,
                    });
                    if layer + 1 < n {
                        for v in head + 1..=n {
                            edges.push(Edge {
                                from,
                                to: at(NodeKey::Interior {
                                    layer: layer + 1,
                                    head,
                                    current: v,
                                    parity,
                                }),
                                weight: Weight::Entry {
                                    row: current,
                                    col: v,
                                },
                            });
                        }
                        for new_head in head + 1..=n {
                            edges.push(Edge {
                                from,
                                to: at(NodeKey::Interior {
                                    layer: layer + 1,
                                    head: new_head,
                                    current: new_head,
                                    parity: 1 - parity,
                                }),
                                weight: Weight::Entry {
                                    row: current,
                                    col: head,
                                },
                            });
                        }
                    } else {
                        // closing here completes `parity + 1` walks in total
                        let positive = (n + parity as usize + 1) % 2 == 0;
                        edges.push(Edge {
                            from,
                            to: at(if positive {
                                NodeKey::SinkPos
                            } else {
                                NodeKey::SinkNeg
                            }),
                            weight: Weight::Entry {
                                row: current,
                                col: head,
                            },
                        });
                    }
                }
            }
        }
    }
    LayeredDag {
        n,
        nodes,
        index,
        edges,
    }
}

impl LayeredDag {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[NodeKey] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_id(&self, key: &NodeKey) -> usize {
        self.index[key]
    }

    /// Topological level: source 0, interior `layer + 1`, sinks `n + 1`.
    pub fn level_of(&self, id: usize) -> usize {
        match self.nodes[id] {
            NodeKey::Source => 0,
            NodeKey::Interior { layer, .. } => layer + 1,
            NodeKey::SinkPos | NodeKey::SinkNeg => self.n + 1,
        }
    }

    /// Closed form for the node count: `n^2 (n + 1) + 3`.
    pub fn expected_node_count(n: usize) -> usize {
        n * n * (n + 1) + 3
    }

    /// Closed form for the edge count:
    /// `n + n(n + 1) + 4 n (n + 1)(n - 1)^2 / 3`.
    pub fn expected_edge_count(n: usize) -> usize {
        n + n * (n + 1) + 4 * n * (n + 1) * (n - 1) * (n - 1) / 3
    }

    /// The signed sum of path weights, sink-plus paths minus sink-minus
    /// paths, as a polynomial in the `x[i][j]` (variable `xvar(n, i, j)`).
    ///
    /// Intended for small `n`; the полynomial has `n!` terms.
    pub fn signed_path_sum(&self) -> SparsePoly {
        let mut acc: Vec<SparsePoly> = vec![SparsePoly::zero(); self.nodes.len()];
        acc[self.node_id(&NodeKey::Source)] = SparsePoly::one();
        // edge order is by source level, so each contribution is final
        for edge in &self.edges {
            let carried = match edge.weight {
                Weight::One => acc[edge.from].clone(),
                Weight::Entry { row, col } => {
                    &acc[edge.from] * &SparsePoly::x(xvar(self.n, row, col))
                }
            };
            acc[edge.to] = &acc[edge.to] + &carried;
        }
        let plus = acc[self.node_id(&NodeKey::SinkPos)].clone();
        let minus = acc[self.node_id(&NodeKey::SinkNeg)].clone();
        plus - minus
    }
}

/// Polynomial variable index of the matrix entry `x[i][j]`, 1-based.
pub fn xvar(n: usize, i: usize, j: usize) -> u32 {
    ((i - 1) * n + j) as u32
}

/// Deterministic node names for the lift: `y_s`, `y_<layer>_<head>_<current>_<parity>`,
/// `y_tpos`, `y_tneg`.
fn node_name(key: &NodeKey) -> String {
    match key {
        NodeKey::Source => "y_s".to_string(),
        NodeKey::Interior {
            layer,
            head,
            current,
            parity,
        } => format!("y_{layer}_{head}_{current}_{parity}"),
        NodeKey::SinkPos => "y_tpos".to_string(),
        NodeKey::SinkNeg => "y_tneg".to_string(),
    }
}

/// The lifted formulation of `det X = z` over the closed-walk graph.
///
/// Variables are the matrix entries `x_<i>_<j>`, one `y` per graph node,
/// shared close-and-open accumulators, and the output `z`. Equations:
/// `y_s = 1`; each node equals the weighted sum of its predecessors, where
/// the close-and-open fan-ins are routed through per-layer close sums
/// (`c_<layer>_<head>_<parity>`) and their prefix sums (`p_...`) so that
/// each closing edge contributes one term instead of one term per new head;
/// finally `z = y_tpos - y_tneg`. The equations are in forward-solvable
/// order and the solution set projects exactly onto that of `det X = z`.
pub fn det_lifted(n: usize) -> LiftedFormulation {
    let graph = mv_graph(n);
    let mut xnames = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            xnames.push(format!("x_{i}_{j}"));
        }
    }
    let (system, aux) = build_det_system_with(
        &graph,
        xnames.clone(),
        Vec::new(),
        Vec::new(),
        DetOutput::Variable("z".to_string()),
        |i, j| xvar(n, i, j),
    );
    LiftedFormulation {
        base_vars: xnames,
        aux_vars: aux,
        output_var: "z".to_string(),
        system,
    }
}

pub(crate) enum DetOutput {
    /// Append `z = y_tpos - y_tneg` with a fresh output variable.
    Variable(String),
    /// Append the constraint `y_tpos - y_tneg = 0` instead.
    VanishConstraint,
}

/// Shared builder for determinant lifts over `graph`.
///
/// `base_names` (the matrix entries, addressed by `xindex` over the base
/// indexing) come first, then the auxiliary variables in forward-solvable
/// order, then the output variable when requested; `params` follow all
/// variables. `prior_equations` are expressed over `[base..., params...]`
/// indexing and are remapped onto the final layout. Returns the system and
/// the auxiliary names in declaration order.
pub(crate) fn build_det_system_with(
    graph: &LayeredDag,
    base_names: Vec<String>,
    params: Vec<String>,
    prior_equations: Vec<SparsePoly>,
    output: DetOutput,
    xindex: impl Fn(usize, usize) -> u32,
) -> (PolySystem, Vec<String>) {
    let n = graph.n();
    let base_len = base_names.len() as u32;

    // auxiliary names in both declaration and solve order
    let mut aux_names: Vec<String> = Vec::new();
    let mut push = |names: &mut Vec<String>, s: String| names.push(s);
    push(&mut aux_names, node_name(&NodeKey::Source));
    for h in 1..=n {
        for u in h..=n {
            for e in 0..2u8 {
                push(
                    &mut aux_names,
                    node_name(&NodeKey::Interior {
                        layer: 0,
                        head: h,
                        current: u,
                        parity: e,
                    }),
                );
            }
        }
    }
    for layer in 1..n {
        for h in 1..n {
            for e in 0..2u8 {
                push(&mut aux_names, format!("c_{layer}_{h}_{e}"));
            }
        }
        for h in 1..n {
            for e in 0..2u8 {
                push(&mut aux_names, format!("p_{layer}_{h}_{e}"));
            }
        }
        for h in 1..=n {
            for u in h..=n {
                for e in 0..2u8 {
                    push(
                        &mut aux_names,
                        node_name(&NodeKey::Interior {
                            layer,
                            head: h,
                            current: u,
                            parity: e,
                        }),
                    );
                }
            }
        }
    }
    push(&mut aux_names, node_name(&NodeKey::SinkPos));
    push(&mut aux_names, node_name(&NodeKey::SinkNeg));

    let index: HashMap<&str, u32> = aux_names
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), base_len + i as u32 + 1))
        .collect();
    let var = |name: &str| -> u32 { index[name] };
    let yvar = |key: &NodeKey| -> u32 { var(&node_name(key)) };
    let interior = |layer: usize, head: usize, current: usize, parity: u8| NodeKey::Interior {
        layer,
        head,
        current,
        parity,
    };

    let mut variables = base_names;
    variables.extend(aux_names.iter().cloned());
    let zvar = base_len + aux_names.len() as u32 + 1;
    if let DetOutput::Variable(z) = &output {
        variables.push(z.clone());
    }
    let param_shift = variables.len() as u32 - base_len;

    let mut system = PolySystem::new(variables, params);
    for eq in prior_equations {
        system.push_equation(eq.remap_vars(|v| {
            if v <= base_len {
                v
            } else {
                v + param_shift
            }
        }));
    }

    system.push_equation(SparsePoly::x(yvar(&NodeKey::Source)) - SparsePoly::one());
    // layer 0: only the source feeds the fresh-open nodes
    for h in 1..=n {
        for u in h..=n {
            for e in 0..2u8 {
                let mut eq = SparsePoly::x(yvar(&interior(0, h, u, e)));
                if u == h && e == 0 {
                    eq = eq - SparsePoly::x(yvar(&NodeKey::Source));
                }
                system.push_equation(eq);
            }
        }
    }
    for layer in 1..n {
        // close sums: walks with head h closed on this step, parity already
        // flipped
        for h in 1..n {
            for e in 0..2u8 {
                let mut eq = SparsePoly::x(var(&format!("c_{layer}_{h}_{e}")));
                for u in h..=n {
                    eq = eq
                        - SparsePoly::monomial(
                            MonomialKey::from_pairs([
                                (yvar(&interior(layer - 1, h, u, 1 - e)), 1),
                                (xindex(u, h), 1),
                            ]),
                            1,
                        );
                }
                system.push_equation(eq);
            }
        }
        // prefix sums over closed heads
        for h in 1..n {
            for e in 0..2u8 {
                let mut eq = SparsePoly::x(var(&format!("p_{layer}_{h}_{e}")))
                    - SparsePoly::x(var(&format!("c_{layer}_{h}_{e}")));
                if h > 1 {
                    eq = eq - SparsePoly::x(var(&format!("p_{layer}_{}_{e}", h - 1)));
                }
                system.push_equation(eq);
            }
        }
        // walk nodes: continue edges term by term, fresh opens via prefix
        for h in 1..=n {
            for u in h..=n {
                for e in 0..2u8 {
                    let mut eq = SparsePoly::x(yvar(&interior(layer, h, u, e)));
                    if u > h {
                        for from in h..=n {
                            eq = eq
                                - SparsePoly::monomial(
                                    MonomialKey::from_pairs([
                                        (yvar(&interior(layer - 1, h, from, e)), 1),
                                        (xindex(from, u), 1),
                                    ]),
                                    1,
                                );
                        }
                    } else if h > 1 {
                        eq = eq - SparsePoly::x(var(&format!("p_{layer}_{}_{e}", h - 1)));
                    }
                    system.push_equation(eq);
                }
            }
        }
    }
    // sinks straight off the graph's final-close edges
    let mut sink_eq = [
        SparsePoly::x(yvar(&NodeKey::SinkPos)),
        SparsePoly::x(yvar(&NodeKey::SinkNeg)),
    ];
    for edge in graph.edges() {
        let slot = match graph.nodes()[edge.to] {
            NodeKey::SinkPos => 0,
            NodeKey::SinkNeg => 1,
            _ => continue,
        };
        let Weight::Entry { row, col } = edge.weight else {
            unreachable!("sink edges carry matrix entries");
        };
        let from = yvar(&graph.nodes()[edge.from]);
        sink_eq[slot] = std::mem::take(&mut sink_eq[slot])
            - SparsePoly::monomial(
                MonomialKey::from_pairs([(from, 1), (xindex(row, col), 1)]),
                1,
            );
    }
    let [tpos_eq, tneg_eq] = sink_eq;
    system.push_equation(tpos_eq);
    system.push_equation(tneg_eq);

    let tpos = SparsePoly::x(yvar(&NodeKey::SinkPos));
    let tneg = SparsePoly::x(yvar(&NodeKey::SinkNeg));
    match output {
        DetOutput::Variable(_) => {
            system.push_equation(SparsePoly::x(zvar) - tpos + tneg);
        }
        DetOutput::VanishConstraint => {
            system.push_equation(tpos - tneg);
        }
    }
    (system, aux_names)
}

/// The repeated-squaring chain `y_1 = x^2, y_2 = y_1^2, ..., y_r = z`; a
/// lift of `x^(2^r) = z` whose size grows linearly in `r`.
pub fn power_chain(r: usize) -> LiftedFormulation {
    assert!(r >= 1, "chain length must be positive");
    let mut variables = vec!["x".to_string()];
    let aux: Vec<String> = (1..=r).map(|k| format!("y_{k}")).collect();
    variables.extend(aux.iter().cloned());
    variables.push("z".to_string());
    let var_x = 1u32;
    let var_y = |k: usize| k as u32 + 1;
    let var_z = r as u32 + 2;

    let mut system = PolySystem::new(variables, Vec::new());
    system.push_equation(
        SparsePoly::x(var_y(1)) - SparsePoly::monomial(MonomialKey::from_pairs([(var_x, 2)]), 1),
    );
    for k in 2..=r {
        system.push_equation(
            SparsePoly::x(var_y(k))
                - SparsePoly::monomial(MonomialKey::from_pairs([(var_y(k - 1), 2)]), 1),
        );
    }
    system.push_equation(SparsePoly::x(var_y(r)) - SparsePoly::x(var_z));

    LiftedFormulation {
        base_vars: vec!["x".to_string()],
        aux_vars: aux,
        output_var: "z".to_string(),
        system,
    }
}

/// The Leibniz expansion of the `n x n` determinant over the variables
/// `xvar(n, i, j)`; the symbolic oracle, restricted to `n <= 6`.
pub fn leibniz_det(n: usize) -> Result<SparsePoly, DagError> {
    const LIMIT: usize = 6;
    if n > LIMIT {
        return Err(DagError::TooLarge { n, limit: LIMIT });
    }
    let mut out = SparsePoly::zero();
    let mut stack = vec![(Vec::<usize>::new(), 0u64)];
    // iterative enumeration of permutations with inversion parity
    while let Some((prefix, invs)) = stack.pop() {
        if prefix.len() == n {
            let key = MonomialKey::from_pairs(
                prefix
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| (xvar(n, i + 1, v), 1)),
            );
            let sign = if invs % 2 == 0 { 1 } else { -1 };
            out = out + SparsePoly::monomial(key, sign);
            continue;
        }
        for v in 1..=n {
            if !prefix.contains(&v) {
                let added = prefix.iter().filter(|&&u| u > v).count() as u64;
                let mut next = prefix.clone();
                next.push(v);
                stack.push((next, invs + added));
            }
        }
    }
    Ok(out)
}
