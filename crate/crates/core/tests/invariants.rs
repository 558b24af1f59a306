use proptest::prelude::*;

use reeb_core::bottleneck::graph_bottleneck;
use reeb_core::distortion::{fd_bound, WitnessChoice};
use reeb_core::generate::{random_graph, RandomSpec};
use reeb_core::iso::is_level_isomorphic;
use reeb_core::operators::{merge, merge_certified, snap_diagram, MergeParams};
use reeb_core::paths::{check_path_equivalence, contraction_path, path_length, Metric};
use reeb_core::persistence::{extended_diagram, Kind};
use reeb_core::{ReebGraph, Value};

fn graph(seed: u64, critical: usize) -> ReebGraph {
    random_graph(&RandomSpec::new(seed, critical, Value::ZERO, Value::from_int(10)))
}

fn band(x: i128, y: i128) -> MergeParams {
    MergeParams::new(Value::new(x.min(y), 100), Value::new(x.max(y), 100)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn diagram_coordinates_are_critical_values(seed in 0u64..5000, critical in 2usize..9) {
        let g = graph(seed, critical);
        let crit = g.critical_values();
        for p in extended_diagram(&g).unwrap().points() {
            prop_assert!(p.is_well_placed());
            prop_assert!(crit.values().contains(&p.birth) && crit.values().contains(&p.death));
        }
    }

    #[test]
    fn merge_snaps_and_is_idempotent(seed in 0u64..5000, x in 0i128..1000, y in 0i128..1000) {
        let g = graph(seed, 5);
        let p = band(x, y);
        let m = merge_certified(&g, &p).unwrap();
        prop_assert_eq!(extended_diagram(&m.graph).unwrap(), snap_diagram(&extended_diagram(&g).unwrap(), &p));
        prop_assert!(is_level_isomorphic(&merge(&m.graph, &p).unwrap(), &m.graph));
        prop_assert!(m.certificate <= (p.b - p.a).half());
    }

    #[test]
    fn bottleneck_is_at_most_twice_any_certificate(s1 in 0u64..5000, s2 in 0u64..5000) {
        let (g, h) = (graph(s1, 4), graph(s2, 4));
        let c = fd_bound(&g, &h, &WitnessChoice::Collapse).unwrap();
        let db = graph_bottleneck(&g, &h).unwrap();
        prop_assert!(c.lower <= c.upper);
        prop_assert!(db <= Value::from_int(2) * c.upper);
    }

    #[test]
    fn renumbering_keeps_isomorphism_class(seed in 0u64..5000) {
        let g = graph(seed, 6);
        prop_assert!(is_level_isomorphic(&g, &g.renumbered()));
    }

    #[test]
    fn contraction_paths_are_finite_and_consistent(seed in 0u64..5000, critical in 2usize..7) {
        let g = graph(seed, critical);
        let p = contraction_path(&g, 4).unwrap();
        let fd = path_length(&p, Metric::FdUpper).unwrap().total;
        prop_assert!(fd >= (g.max_value() - g.min_value()).half());
        prop_assert!(check_path_equivalence(&p).unwrap().holds);
        let last = &p.steps.last().unwrap().graph;
        prop_assert_eq!(last.vertex_count(), 1);
        prop_assert_eq!(extended_diagram(last).unwrap().count(Kind::Ext0), 1);
    }
}
