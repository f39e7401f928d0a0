//! The subcommands, generic over the scalar field.

use serde::Serialize;
use serde_json::{json, Value};

use kernelmap::decompose::{decompose, verify_decomposition, Rank1Term};
use kernelmap::invariants::{run_property, Property};
use kernelmap::io::{format_matrix, format_vector, PairJson, SubspaceJson};
use kernelmap::kernel::{bil, KernelMap};
use kernelmap::liemod::{check_decomposable, lie_module_closure, nest_algebra, Decomposability, OperatorSpace};
use kernelmap::report::Check;
use kernelmap::{Error, Matrix, Scalar, Subspace};

use crate::problem::{Params, ProblemFile};

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub results: Value,
    pub checks: Vec<Check>,
}

pub struct Outcome {
    pub results: Value,
    pub checks: Vec<Check>,
}

fn sub<S: Scalar>(s: &Subspace<S>) -> SubspaceJson {
    s.into()
}

fn terms_json<S: Scalar>(terms: &[Rank1Term<S>]) -> Value {
    terms
        .iter()
        .map(|t| json!({"x": format_vector(&t.x), "y": format_vector(&t.y), "slice_index": t.slice_index}))
        .collect()
}

pub fn kernel_set<S: Scalar>(p: &ProblemFile) -> Result<Outcome, Error> {
    let t: Matrix<S> = p.matrix()?;
    let lattice = p.lattice::<S>()?;
    let map = KernelMap::new(&t, &lattice)?;
    let ks = map.kernel_set();
    let rank = t.rank();
    let is_nest = lattice.is_totally_ordered();

    let omega: Vec<Value> = lattice
        .elements()
        .iter()
        .enumerate()
        .map(|(i, e)| json!({"member": sub(e), "phi": sub(map.phi_at(i)), "psi": sub(map.psi_at(i))}))
        .collect();
    let entries: Vec<Value> = ks
        .entries
        .iter()
        .map(|e| json!({"source": sub(&e.source), "pair": PairJson::from(&e.pair)}))
        .collect();

    let in_bil = (0..lattice.len()).all(|i| map.omega_at(i).annihilates(&t));
    let psi_back = (0..lattice.len()).all(|i| lattice.contains(&map.psi_at(i).complement()));
    let bound = ks.len() <= rank + 1;
    let bound_detail = format!("|Ω| = {}, rank = {rank}", ks.len());
    let mut checks = vec![Check::mandatory("kernel_pairs_in_bil", in_bil, "")];
    if is_nest {
        checks.push(Check::mandatory("size_bound", bound, bound_detail));
        checks.push(Check::mandatory("kernel_set_chain", ks.is_chain(), ""));
    } else {
        checks.push(Check::informational("size_bound", bound, bound_detail));
    }
    checks.push(Check::informational("psi_complement_in_lattice", psi_back, ""));

    Ok(Outcome {
        results: json!({
            "rank": rank,
            "lattice_size": lattice.len(),
            "is_nest": is_nest,
            "kernel_set": entries,
            "omega": omega,
        }),
        checks,
    })
}

pub fn decompose_cmd<S: Scalar>(p: &ProblemFile) -> Result<Outcome, Error> {
    let t: Matrix<S> = p.matrix()?;
    let nest = p.nest::<S>()?;
    let d = decompose(&t, &nest)?;
    let report = verify_decomposition(&d, &nest)?;
    let slices: Vec<Value> = d
        .slices
        .iter()
        .map(|s| {
            json!({
                "phi_prev": sub(&s.phi_prev),
                "phi": sub(&s.phi),
                "psi": sub(&s.psi),
                "matrix": format_matrix(&s.matrix),
            })
        })
        .collect();
    Ok(Outcome {
        results: json!({
            "rank": report.rank,
            "k": report.k,
            "term_count": report.term_count,
            "phi0": sub(&d.phi0),
            "slices": slices,
            "terms": terms_json(&d.terms),
            "sigma_chain": report.sigma_chain,
        }),
        checks: report.checks,
    })
}

pub fn bil_cmd<S: Scalar>(p: &ProblemFile) -> Result<Outcome, Error> {
    let t: Matrix<S> = p.matrix()?;
    let lattice = p.lattice::<S>()?;
    let b = bil(&t, &lattice)?;
    let map = KernelMap::new(&t, &lattice)?;
    let pairs: Vec<PairJson> = b.pairs.iter().map(PairJson::from).collect();
    let kernel_pairs = (0..lattice.len()).all(|i| b.contains(&map.omega_at(i)));
    Ok(Outcome {
        results: json!({"count": pairs.len(), "pairs": pairs}),
        checks: vec![
            Check::mandatory("pairs_annihilate", b.pairs.iter().all(|q| q.annihilates(&t)), ""),
            Check::mandatory("contains_extremes", b.contains_extremes(), ""),
            Check::mandatory("closed_under_join_and_meet", b.is_closed()?, ""),
            Check::mandatory("kernel_pairs_in_bil", kernel_pairs, ""),
        ],
    })
}

/// Brackets of every module basis element with every algebra basis element
/// stay in the module.
fn is_module<S: Scalar>(m: &OperatorSpace<S>, algebra: &OperatorSpace<S>) -> Result<bool, Error> {
    for a in m.basis() {
        for b in algebra.basis() {
            if !m.contains(&a.commutator(&b)?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn lie_closure<S: Scalar>(p: &ProblemFile) -> Result<Outcome, Error> {
    let nest = p.nest::<S>()?;
    let gens: Vec<Matrix<S>> = p.generators()?;
    let m = lie_module_closure(&gens, &nest)?;
    let algebra = nest_algebra(&nest);
    let contains_gens = gens.iter().map(|g| m.contains(g)).collect::<Result<Vec<_>, _>>()?;
    let mut results = json!({
        "dim": m.dim(),
        "nest_algebra_dim": algebra.dim(),
        "basis": m.basis().iter().map(format_matrix).collect::<Vec<_>>(),
    });
    if p.matrix.is_some() {
        results["contains_matrix"] = json!(m.contains(&p.matrix::<S>()?)?);
    }
    Ok(Outcome {
        results,
        checks: vec![
            Check::mandatory("contains_generators", contains_gens.iter().all(|&b| b), ""),
            Check::mandatory("closed_under_brackets", is_module(&m, &algebra)?, ""),
        ],
    })
}

pub fn decomposable<S: Scalar>(p: &ProblemFile, params: Params) -> Result<Outcome, Error> {
    let t: Matrix<S> = p.matrix()?;
    let nest = p.nest::<S>()?;
    let m = lie_module_closure(&p.generators::<S>()?, &nest)?;
    let v = check_decomposable(&t, &m, &nest, params.seed, params.samples)?;
    let mut checks = Vec::new();
    if let Some(w) = &v.witness {
        let n = nest.ambient_dim();
        let sum = w.iter().fold(Matrix::zeros(n, n), |acc, r| &acc + &r.matrix());
        let inside = w.iter().map(|r| m.contains(&r.matrix())).collect::<Result<Vec<_>, _>>()?;
        checks.push(Check::mandatory("witness_sums_to_matrix", sum == t, ""));
        checks.push(Check::mandatory("witness_terms_in_module", inside.iter().all(|&b| b), ""));
    }
    checks.push(Check::informational(
        "verdict_conclusive",
        v.status != Decomposability::Undetermined,
        v.status.to_string(),
    ));
    Ok(Outcome {
        results: json!({
            "status": v.status,
            "module_dim": m.dim(),
            "witness": v.witness.as_deref().map(terms_json),
            "certificate": v.certificate,
            "seed": v.seed,
            "samples": v.samples,
        }),
        checks,
    })
}

pub fn check_invariants<S: Scalar + Send + Sync>(
    properties: &[Property],
    cases: usize,
    params: Params,
) -> Outcome {
    let summaries: Vec<_> = properties
        .iter()
        .map(|&prop| run_property::<S>(prop, params.seed, cases))
        .collect();
    let checks = summaries
        .iter()
        .map(|s| {
            Check::mandatory(
                s.property.name(),
                s.ok(),
                format!("{}/{} cases passed, {} checks", s.passed, s.cases, s.checks),
            )
        })
        .collect();
    Outcome {
        results: json!({"seed": params.seed, "cases": cases, "properties": summaries}),
        checks,
    }
}
