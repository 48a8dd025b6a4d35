//! Machine-readable analysis reports shared by the CLI and the C API.

use serde_json::{json, Value};

use crate::graphs::{Certificate, EdgeSign, Verdict};
use crate::model::Network;

/// JSON report of a structural verdict. Keys are stable; ordering of the
/// sigma table follows reaction ids.
pub fn verdict_json(network: &Network, input: usize, output: usize, verdict: &Verdict) -> Value {
    let aug = &verdict.augmented;
    let sigma: Value = match &verdict.labeling {
        Some(l) => Value::Object(
            aug.reactions
                .iter()
                .map(|rx| (rx.name.clone(), json!(l.sigma[rx.id])))
                .collect(),
        ),
        None => Value::Null,
    };
    let sigma_product = verdict
        .labeling
        .as_ref()
        .map(|l| l.sigma[verdict.r_in] * l.sigma[verdict.r_out]);
    let certificate = match &verdict.certificate {
        None => Value::Null,
        Some(Certificate::OddNegativeCycle(cycle)) => json!({
            "kind": "odd_negative_cycle",
            "negative_edges": cycle.neg_count(),
            "edges": cycle.edges.iter().map(|e| json!({
                "a": verdict.r_graph.node_names[e.a],
                "b": verdict.r_graph.node_names[e.b],
                "sign": match e.sign { EdgeSign::Positive => "+", EdgeSign::Negative => "-" },
                "witness": aug.species[e.witness].name,
            })).collect::<Vec<_>>(),
        }),
        Some(Certificate::RuleOfTwoWitness { species, count }) => json!({
            "kind": "rule_of_two_witness",
            "species": aug.species[*species].name,
            "count": count,
        }),
    };
    json!({
        "input": network.species[input].name,
        "output": network.species[output].name,
        "verdict": verdict.kind.to_string(),
        "sigma": sigma,
        "sigma_product": sigma_product,
        "disconnected_io": verdict.disconnected_io,
        "certificate": certificate,
    })
}

/// Human-readable analysis text; the verdict line always comes first.
pub fn verdict_text(network: &Network, input: usize, output: usize, verdict: &Verdict) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(out, "verdict: {}", verdict.kind);
    let _ = writeln!(
        out,
        "input: {}  output: {}",
        network.species[input].name, network.species[output].name
    );
    if let Some(l) = &verdict.labeling {
        let product = l.sigma[verdict.r_in] * l.sigma[verdict.r_out];
        let _ = writeln!(
            out,
            "sigma(R_IN)*sigma(R_OUT) = {}",
            if product >= 0 { "+1" } else { "-1" }
        );
        if verdict.disconnected_io {
            let _ = writeln!(
                out,
                "note: disconnected input/output; the output ignores the input structurally"
            );
        }
        let _ = writeln!(out, "sigma:");
        for rx in &verdict.augmented.reactions {
            let _ = writeln!(
                out,
                "  {} {}",
                rx.name,
                if l.sigma[rx.id] >= 0 { "+1" } else { "-1" }
            );
        }
    }
    match &verdict.certificate {
        None => {}
        Some(Certificate::OddNegativeCycle(cycle)) => {
            let _ = writeln!(
                out,
                "certificate: odd-negative cycle ({} negative edge(s))",
                cycle.neg_count()
            );
            for e in &cycle.edges {
                let _ = writeln!(
                    out,
                    "  {} -- {} [{}] via {}",
                    verdict.r_graph.node_names[e.a],
                    verdict.r_graph.node_names[e.b],
                    match e.sign {
                        EdgeSign::Positive => "+",
                        EdgeSign::Negative => "-",
                    },
                    verdict.augmented.species[e.witness].name
                );
            }
        }
        Some(Certificate::RuleOfTwoWitness { species, count }) => {
            let _ = writeln!(
                out,
                "certificate: species {} is involved in {} sign-coupled reactions (limit 2)",
                verdict.augmented.species[*species].name, count
            );
        }
    }
    out
}
