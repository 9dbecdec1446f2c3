use num_rational::BigRational;

use fraccolor::analysis::oracle::{default_lower, exact_oracle, OracleError};
use fraccolor::analysis::{catalog, exact_oracle_on, mutation_witnesses, OracleLimits, OracleMode};
use fraccolor::engine::{EngineError, Mutation, RunOptions};
use fraccolor::hyper_engine::{HyperEngine, HyperParams};
use fraccolor::instances::io::Instance;
use fraccolor::instances::{DegeneracyOrdering, Graph, Hypergraph};

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn run(instance: Instance, r: usize, p0: BigRational) -> fraccolor::analysis::OracleResult {
    exact_oracle_on(
        &instance,
        None,
        r,
        &p0,
        None,
        Mutation::None,
        OracleLimits::default(),
    )
    .unwrap()
}

#[test]
fn k2_tree_is_small() {
    let res = run(
        Instance::Graph(Graph::new(2, &[(0, 1)]).unwrap()),
        1,
        q(1, 10),
    );
    assert!(res.is_exact());
    assert!(res.branches <= 8, "{}", res.branches);
}

#[test]
fn edgeless_instance_keeps_weights() {
    let res = run(Instance::Graph(Graph::new(4, &[]).unwrap()), 1, q(1, 4));
    assert!(res.is_exact());
    assert_eq!(res.pinned_branches, 0);
}

#[test]
fn single_edge_r3_zeroes_fully_selected_color() {
    let h = Hypergraph::new(3, 3, &[vec![0, 1, 2]]).unwrap();
    let ord = DegeneracyOrdering::from_order(&h, vec![0, 1, 2]).unwrap();
    let lower = default_lower(&q(1, 4));
    let params = HyperParams::explicit(1, 3, 0.25, 0.225, 0).unwrap();
    let engine = HyperEngine::new(&h, &ord, params)
        .unwrap()
        .with_options(RunOptions::checked());
    let res = exact_oracle(
        OracleMode::Hyper {
            engine: &engine,
            lower,
        },
        &q(1, 4),
        OracleLimits::default(),
    )
    .unwrap();
    assert!(res.is_exact(), "{:?}", res.to_json());
    assert_eq!(res.to_json()["expectations"][2], "1/4");
    assert_eq!(res.to_json()["validity"], "1/1");
}

#[test]
fn every_catalog_entry_with_other_weights() {
    for entry in catalog() {
        for p0 in [q(1, 3), q(2, 5), q(1, 2)] {
            let r = entry.classes.first().copied().unwrap_or(0);
            let res = exact_oracle_on(
                &entry.instance,
                None,
                r,
                &p0,
                None,
                Mutation::None,
                OracleLimits::default(),
            );
            match (&entry.instance, res) {
                (_, Ok(res)) => assert!(res.is_exact(), "{} {p0}", entry.name),
                // hypergraph weights must stay at most 1/2
                (Instance::Hyper(_), Err(OracleError::BadWeight(_))) => assert!(p0 > q(1, 2)),
                // a lower threshold above 1/4 lets the two threshold cases meet
                (Instance::Hyper(_), Err(OracleError::Engine(EngineError::Regime { .. }))) => {
                    assert!(default_lower(&p0) > q(1, 4))
                }
                (_, Err(e)) => panic!("{}: {e}", entry.name),
            }
        }
    }
}

#[test]
fn witnesses_detect_each_equalizer() {
    for w in mutation_witnesses() {
        let clean = w.run(Mutation::None).unwrap();
        assert!(clean.is_exact(), "{}", w.name);
        assert!(
            clean.pinned_branches > 0,
            "{} never reaches a threshold",
            w.name
        );
        let mutant = w.run(w.mutation).unwrap();
        assert!(!mutant.is_exact(), "{} did not notice the mutation", w.name);
    }
}

#[test]
fn limits_are_enforced() {
    let g = Instance::Graph(Graph::new(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap());
    let tight = OracleLimits {
        max_branches: 3,
        ..OracleLimits::default()
    };
    let err = exact_oracle_on(&g, None, 1, &q(1, 4), None, Mutation::None, tight).unwrap_err();
    assert_eq!(err, OracleError::TooManyBranches(3));
}
